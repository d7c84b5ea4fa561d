use serde::{Deserialize, Serialize};

use super::triangulation::{Dart, Triangulation};
use crate::error::{Error, Result};

/// Normal coordinates: how often a curve in normal position crosses each
/// edge of the triangulation. On a fixed ideal triangulation these are a
/// complete, canonical invariant of the isotopy class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormalCurve {
    pub weights: Vec<u32>,
}

impl NormalCurve {
    pub fn new(weights: Vec<u32>) -> Self {
        NormalCurve { weights }
    }

    pub fn total_weight(&self) -> u32 {
        self.weights.iter().sum()
    }

    pub fn max_weight(&self) -> u32 {
        self.weights.iter().copied().max().unwrap_or(0)
    }
}

/// Why a weight vector is not an honest curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CurveDefect {
    Empty,
    Parity { triangle: usize },
    TriangleInequality { triangle: usize },
    Disconnected { components: usize },
    Peripheral { puncture: u8 },
}

/// Outcome of [`validate_normal_curve`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveCheck {
    pub defect: Option<CurveDefect>,
}

impl CurveCheck {
    pub fn is_valid(&self) -> bool {
        self.defect.is_none()
    }
}

/// Corner counts `a_i`: arcs cutting off the corner at `v_i`, i.e. between
/// sides `i − 1` and `i`. `None` if the triangle's weights admit no normal
/// arcs.
pub(crate) fn corner_counts(w: [u32; 3]) -> Option<[u32; 3]> {
    let [x, y, z] = w.map(i64::from);
    if (x + y + z) % 2 != 0 {
        return None;
    }
    let a = [(z + x - y) / 2, (x + y - z) / 2, (y + z - x) / 2];
    a.iter().all(|&c| c >= 0).then(|| a.map(|c| c as u32))
}

pub(crate) fn triangle_weights(tri: &Triangulation, w: &[u32], t: usize) -> [u32; 3] {
    tri.triangles[t].edges.map(|e| w[e])
}

/// One closed component of a traced multicurve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Cyclic sequence of darts crossed.
    pub path: Vec<Dart>,
    /// Crossing points as `(edge, index)` in the edge's forward direction.
    pub points: Vec<(usize, u32)>,
}

impl Component {
    pub fn weights(&self, edge_count: usize) -> Vec<u32> {
        let mut w = vec![0; edge_count];
        for &(e, _) in &self.points {
            w[e] += 1;
        }
        w
    }
}

/// Index along a side measured from the side's start vertex, converted to
/// the edge's forward direction.
#[inline]
fn canonical_index(tri: &Triangulation, d: Dart, w: u32, k: u32) -> u32 {
    if tri.side_forward(d) {
        k
    } else {
        w - 1 - k
    }
}

/// Traces every component of a weight vector that already satisfies the
/// per-triangle matching conditions.
pub(crate) fn trace_components(tri: &Triangulation, w: &[u32]) -> Vec<Component> {
    let corners: Vec<[u32; 3]> = (0..tri.triangle_count())
        .map(|t| corner_counts(triangle_weights(tri, w, t)).expect("admissible weights"))
        .collect();
    let mut offset = vec![0usize; tri.edge_count + 1];
    for e in 0..tri.edge_count {
        offset[e + 1] = offset[e] + w[e] as usize;
    }
    let mut seen = vec![false; offset[tri.edge_count]];
    let mut out = Vec::new();
    for e in 0..tri.edge_count {
        for start_k in 0..w[e] {
            if seen[offset[e] + start_k as usize] {
                continue;
            }
            let start = (tri.edge_darts(e)[0], start_k);
            let (mut d_in, mut k) = start;
            let mut comp = Component { path: Vec::new(), points: Vec::new() };
            loop {
                let t = d_in as usize / 3;
                let i = d_in as usize % 3;
                let tw = triangle_weights(tri, w, t);
                let a = corners[t];
                let (j, k_out) = if k < a[i] {
                    let j = (i + 2) % 3;
                    (j, tw[j] - 1 - k)
                } else {
                    ((i + 1) % 3, tw[i] - 1 - k)
                };
                let out_dart = (3 * t + j) as Dart;
                let edge = tri.edge_of(out_dart);
                let ci = canonical_index(tri, out_dart, tw[j], k_out);
                seen[offset[edge] + ci as usize] = true;
                comp.path.push(out_dart);
                comp.points.push((edge, ci));
                d_in = tri.glue(out_dart);
                k = tw[j] - 1 - k_out;
                if (d_in, k) == start {
                    break;
                }
            }
            out.push(comp);
        }
    }
    out
}

fn admissible(tri: &Triangulation, w: &[u32]) -> Option<CurveDefect> {
    if w.iter().all(|&x| x == 0) {
        return Some(CurveDefect::Empty);
    }
    for t in 0..tri.triangle_count() {
        let tw = triangle_weights(tri, w, t);
        if tw.iter().sum::<u32>() % 2 != 0 {
            return Some(CurveDefect::Parity { triangle: t });
        }
        if corner_counts(tw).is_none() {
            return Some(CurveDefect::TriangleInequality { triangle: t });
        }
    }
    None
}

/// Checks matching conditions, connectivity and non-peripherality.
pub fn validate_normal_curve(tri: &Triangulation, w: &[u32]) -> Result<CurveCheck> {
    if w.len() != tri.edge_count {
        return Err(Error::ShapeError { expected: tri.edge_count, got: w.len() });
    }
    let defect = admissible(tri, w).or_else(|| {
        let comps = trace_components(tri, w).len();
        if comps != 1 {
            return Some(CurveDefect::Disconnected { components: comps });
        }
        tri.punctures().find(|&v| tri.vertex_link(v) == w).map(|puncture| CurveDefect::Peripheral { puncture })
    });
    Ok(CurveCheck { defect })
}

/// The cyclic dart sequence of a connected curve, started at the first
/// crossing of its lowest-numbered edge.
pub fn trace_curve(tri: &Triangulation, c: &NormalCurve) -> Result<Vec<Dart>> {
    if c.weights.len() != tri.edge_count {
        return Err(Error::ShapeError { expected: tri.edge_count, got: c.weights.len() });
    }
    if let Some(d) = admissible(tri, &c.weights) {
        return Err(Error::InvalidCurve(format!("{d:?}")));
    }
    let mut comps = trace_components(tri, &c.weights);
    if comps.len() != 1 {
        return Err(Error::NotConnected);
    }
    Ok(comps.pop().unwrap().path)
}

/// A validated curve together with its dual path and a positional index used
/// by the intersection routines.
#[derive(Clone, Debug)]
pub struct Traced {
    pub curve: NormalCurve,
    pub path: Vec<Dart>,
    pub(crate) rev: Vec<Dart>,
    pub(crate) pos: Vec<Vec<u32>>,
    pub(crate) rev_pos: Vec<Vec<u32>>,
}

impl Traced {
    pub fn new(tri: &Triangulation, curve: NormalCurve) -> Result<Self> {
        let check = validate_normal_curve(tri, &curve.weights)?;
        if let Some(d) = check.defect {
            return Err(Error::InvalidCurve(format!("{d:?}")));
        }
        let path = trace_curve(tri, &curve)?;
        Ok(Self::from_parts(tri, curve, path))
    }

    pub(crate) fn from_parts(tri: &Triangulation, curve: NormalCurve, path: Vec<Dart>) -> Self {
        let rev: Vec<Dart> = path.iter().rev().map(|&d| tri.glue(d)).collect();
        let index = |p: &[Dart]| {
            let mut pos = vec![Vec::new(); tri.dart_count()];
            for (k, &d) in p.iter().enumerate() {
                pos[d as usize].push(k as u32);
            }
            pos
        };
        let pos = index(&path);
        let rev_pos = index(&rev);
        Traced { curve, path, rev, pos, rev_pos }
    }

    pub fn weights(&self) -> &[u32] {
        &self.curve.weights
    }
}
