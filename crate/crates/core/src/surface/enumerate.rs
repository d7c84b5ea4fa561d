use rayon::prelude::*;

use super::curve::{corner_counts, trace_components, triangle_weights, NormalCurve};
use super::triangulation::Triangulation;

struct Plan {
    order: Vec<usize>,
    /// Triangles whose last edge is assigned at each depth.
    closes: Vec<Vec<usize>>,
}

fn plan(tri: &Triangulation) -> Plan {
    let mut order = Vec::new();
    let mut placed = vec![false; tri.edge_count];
    for t in &tri.triangles {
        for &e in &t.edges {
            if !placed[e] {
                placed[e] = true;
                order.push(e);
            }
        }
    }
    let depth_of: Vec<usize> = {
        let mut d = vec![0; tri.edge_count];
        for (i, &e) in order.iter().enumerate() {
            d[e] = i;
        }
        d
    };
    let mut closes = vec![Vec::new(); order.len()];
    for (t, tr) in tri.triangles.iter().enumerate() {
        let last = tr.edges.iter().map(|&e| depth_of[e]).max().unwrap();
        closes[last].push(t);
    }
    Plan { order, closes }
}

/// Every puncture must see an empty corner; otherwise its link splits off
/// as a component (or is the whole, peripheral, curve).
fn has_empty_corner_at_every_puncture(tri: &Triangulation, w: &[u32]) -> bool {
    let mut empty = vec![false; tri.surface.punctures as usize + 1];
    for t in 0..tri.triangle_count() {
        let a = corner_counts(triangle_weights(tri, w, t)).expect("checked");
        for i in 0..3 {
            if a[i] == 0 {
                empty[tri.triangles[t].vertices[i] as usize] = true;
            }
        }
    }
    empty[1..].iter().all(|&x| x)
}

fn search(tri: &Triangulation, p: &Plan, bound: u32, depth: usize, w: &mut Vec<u32>, out: &mut Vec<NormalCurve>) {
    if depth == p.order.len() {
        if w.iter().any(|&x| x > 0) && has_empty_corner_at_every_puncture(tri, w) && trace_components(tri, w).len() == 1
        {
            out.push(NormalCurve::new(w.clone()));
        }
        return;
    }
    let e = p.order[depth];
    for x in 0..=bound {
        w[e] = x;
        if p.closes[depth].iter().all(|&t| corner_counts(triangle_weights(tri, w, t)).is_some()) {
            search(tri, p, bound, depth + 1, w, out);
        }
    }
    w[e] = 0;
}

/// All curves with every weight at most `bound`, sorted by weight vector.
pub fn enumerate_curves(tri: &Triangulation, bound: u32) -> Vec<NormalCurve> {
    if bound == 0 {
        return Vec::new();
    }
    let p = plan(tri);
    let first = p.order[0];
    let mut out: Vec<NormalCurve> = (0..=bound)
        .into_par_iter()
        .flat_map_iter(|x| {
            let mut w = vec![0; tri.edge_count];
            w[first] = x;
            let mut local = Vec::new();
            if p.closes[0].is_empty() {
                search(tri, &p, bound, 1, &mut w, &mut local);
            }
            local
        })
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{standard_triangulation, validate_normal_curve, SurfaceId};

    #[test]
    fn zero_bound_is_empty() {
        let t = standard_triangulation(SurfaceId::new(0, 5)).unwrap();
        assert!(enumerate_curves(t, 0).is_empty());
    }

    #[test]
    fn agrees_with_brute_force() {
        for (s, bound) in [(SurfaceId::new(1, 1), 5), (SurfaceId::new(0, 4), 3), (SurfaceId::new(1, 2), 2)] {
            let t = standard_triangulation(s).unwrap();
            let got = enumerate_curves(t, bound);
            let n = t.edge_count as u32;
            let mut want = Vec::new();
            for code in 0..(bound + 1).pow(n) {
                let w: Vec<u32> = (0..n).map(|i| code / (bound + 1).pow(i) % (bound + 1)).collect();
                if validate_normal_curve(t, &w).unwrap().is_valid() {
                    want.push(NormalCurve::new(w));
                }
            }
            want.sort();
            assert_eq!(got, want, "surface {s}");
        }
    }
}
