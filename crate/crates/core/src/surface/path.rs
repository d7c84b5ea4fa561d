//! Closed paths in the dual ribbon graph: reduction, intersection numbers
//! and Dehn twists.
//!
//! Two reduced cyclic paths meet along maximal common runs of darts. A run
//! is a crossing exactly when the paths arrive from and depart to different
//! sides of each other; summing over runs with both relative orientations
//! counts linked pairs of lifts in the universal cover, which is the
//! geometric intersection number for simple curves.

use std::collections::VecDeque;

use super::curve::{NormalCurve, Traced};
use super::triangulation::{Dart, Triangulation};
use crate::error::{Error, Result};

/// Cancels backtracks `d · glue(d)`, including across the cyclic seam.
pub fn reduce_cyclic(tri: &Triangulation, path: &[Dart]) -> Vec<Dart> {
    let mut stack: VecDeque<Dart> = VecDeque::with_capacity(path.len());
    for &d in path {
        if stack.back() == Some(&tri.glue(d)) {
            stack.pop_back();
        } else {
            stack.push_back(d);
        }
    }
    while stack.len() >= 2 && *stack.front().unwrap() == tri.glue(*stack.back().unwrap()) {
        stack.pop_front();
        stack.pop_back();
    }
    stack.into()
}

pub(crate) fn path_weights(tri: &Triangulation, path: &[Dart]) -> Vec<u32> {
    let mut w = vec![0; tri.edge_count];
    for &d in path {
        w[tri.edge_of(d)] += 1;
    }
    w
}

/// A maximal common run of `a` and an oriented copy of `b`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Run {
    /// Start position in `a`.
    pub k: usize,
    /// Start position in the oriented copy of `b`.
    pub l: usize,
    pub len: usize,
    /// `a` arrives from the left of `b`.
    pub start_left: bool,
    /// The copy of `b` is reversed.
    pub reversed: bool,
}

/// Sides of the other two edges relative to a dart leaving through side
/// `s`: entering from side `s + 1` is entering from the left.
fn collect_runs(
    tri: &Triangulation,
    a: &[Dart],
    b: &[Dart],
    b_pos: &[Vec<u32>],
    reversed: bool,
    limit: usize,
    out: &mut Vec<Run>,
) -> bool {
    let (la, lb) = (a.len(), b.len());
    let cap = la + lb;
    for k in 0..la {
        let d = a[k];
        let prev_a = a[(k + la - 1) % la];
        for &l in &b_pos[d as usize] {
            let l = l as usize;
            if prev_a == b[(l + lb - 1) % lb] {
                continue;
            }
            let mut len = 1;
            while len < cap && a[(k + len) % la] == b[(l + len) % lb] {
                len += 1;
            }
            if len >= cap {
                return true;
            }
            let s = d as usize % 3;
            let x_a = tri.glue(prev_a) as usize % 3;
            let start_left = x_a == (s + 1) % 3;
            let last = a[(k + len - 1) % la];
            let e = tri.glue(last) as usize % 3;
            let y_a = a[(k + len) % la] as usize % 3;
            let end_left = y_a == (e + 2) % 3;
            if start_left != end_left {
                out.push(Run { k, l, len, start_left, reversed });
                if out.len() >= limit {
                    return false;
                }
            }
        }
    }
    false
}

/// Crossing runs of `a` against `b`; `None` when the two are the same
/// unoriented curve.
pub(crate) fn crossing_runs(tri: &Triangulation, a: &Traced, b: &Traced, limit: usize) -> Option<Vec<Run>> {
    if a.curve == b.curve {
        return None;
    }
    let mut out = Vec::new();
    if collect_runs(tri, &a.path, &b.path, &b.pos, false, limit, &mut out) {
        return None;
    }
    if out.len() < limit && collect_runs(tri, &a.path, &b.rev, &b.rev_pos, true, limit, &mut out) {
        return None;
    }
    Some(out)
}

/// Geometric intersection number of two curves.
pub fn geometric_intersection(tri: &Triangulation, a: &Traced, b: &Traced) -> u64 {
    crossing_runs(tri, a, b, usize::MAX).map_or(0, |r| r.len() as u64)
}

/// `i(a, b) == 0`, stopping at the first crossing.
pub fn disjoint_curves(tri: &Triangulation, a: &Traced, b: &Traced) -> bool {
    crossing_runs(tri, a, b, 1).is_none_or(|r| r.is_empty())
}

/// Intersection number of two reduced cyclic paths given directly.
pub fn intersection_of_paths(tri: &Triangulation, a: &[Dart], b: &[Dart]) -> u64 {
    let ta = Traced::from_parts(tri, NormalCurve::new(path_weights(tri, a)), a.to_vec());
    let tb = Traced::from_parts(tri, NormalCurve::new(path_weights(tri, b)), b.to_vec());
    geometric_intersection(tri, &ta, &tb)
}

fn rotate(p: &[Dart], start: usize) -> impl Iterator<Item = Dart> + '_ {
    p[start..].iter().chain(&p[..start]).copied()
}

fn one_twist(tri: &Triangulation, c: &Traced, b: &Traced, left: bool) -> Result<Traced> {
    let Some(runs) = crossing_runs(tri, b, c, usize::MAX) else {
        return Ok(b.clone());
    };
    if runs.is_empty() {
        return Ok(b.clone());
    }
    let lc = c.path.len();
    let mut at: Vec<Vec<&Run>> = vec![Vec::new(); b.path.len()];
    for r in &runs {
        at[r.k].push(r);
    }
    let mut out = Vec::with_capacity(b.path.len() + runs.len() * lc);
    for (k, &d) in b.path.iter().enumerate() {
        // Parallel strands through the same dart are met innermost first;
        // the innermost strand is the one that leaves soonest.
        at[k].sort_by_key(|r| r.len);
        for r in &at[k] {
            let (fwd, bwd) = if r.reversed { (&c.rev, &c.path) } else { (&c.path, &c.rev) };
            if r.start_left == left {
                out.extend(rotate(fwd, r.l));
            } else {
                out.extend(rotate(bwd, (lc - r.l) % lc));
            }
        }
        out.push(d);
    }
    let reduced = reduce_cyclic(tri, &out);
    let curve = NormalCurve::new(path_weights(tri, &reduced));
    let traced = Traced::new(tri, curve).map_err(|e| Error::InvalidCurve(format!("twist surgery: {e}")))?;
    if !same_cycle(&traced.path, &reduced) && !same_cycle(&traced.rev, &reduced) {
        return Err(Error::InvalidCurve("twist surgery left a non-simple path".into()));
    }
    Ok(traced)
}

fn same_cycle(a: &[Dart], b: &[Dart]) -> bool {
    a.len() == b.len() && (a.is_empty() || (0..b.len()).any(|s| b[s] == a[0] && rotate(b, s).eq(a.iter().copied())))
}

/// `T_c^power(b)`. Positive powers turn left on meeting `c`.
pub fn dehn_twist(tri: &Triangulation, c: &Traced, b: &Traced, power: i32) -> Result<Traced> {
    let mut cur = b.clone();
    for _ in 0..power.unsigned_abs() {
        cur = one_twist(tri, c, &cur, power > 0)?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{standard_triangulation, SurfaceId};

    #[test]
    fn reduction_cancels_backtracks() {
        let t = standard_triangulation(SurfaceId::new(1, 1)).unwrap();
        let d = 0;
        let g = t.glue(d);
        assert!(reduce_cyclic(t, &[d, g]).is_empty());
        assert_eq!(reduce_cyclic(t, &[g, 1, 2, d]), vec![1, 2]);
    }

    #[test]
    fn torus_basis_intersections() {
        let t = standard_triangulation(SurfaceId::new(1, 1)).unwrap();
        let a = Traced::new(t, NormalCurve::new(vec![0, 1, 1])).unwrap();
        let b = Traced::new(t, NormalCurve::new(vec![1, 0, 1])).unwrap();
        let c = Traced::new(t, NormalCurve::new(vec![1, 1, 0])).unwrap();
        assert_eq!(geometric_intersection(t, &a, &b), 1);
        assert_eq!(geometric_intersection(t, &a, &c), 1);
        assert_eq!(geometric_intersection(t, &a, &a), 0);
        let tb = dehn_twist(t, &a, &b, 1).unwrap();
        assert_eq!(geometric_intersection(t, &tb, &a), 1);
        assert_eq!(geometric_intersection(t, &tb, &b), 1);
        let back = dehn_twist(t, &a, &tb, -1).unwrap();
        assert_eq!(back.curve, b.curve);
        assert_eq!(dehn_twist(t, &a, &a, 3).unwrap().curve, a.curve);
    }
}
