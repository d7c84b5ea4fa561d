//! Cutting a surface along disjoint curves, and homology classes.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Serialize;

use super::curve::{corner_counts, trace_components, triangle_weights, NormalCurve, Traced};
use super::path::geometric_intersection;
use super::triangulation::{standard_triangulation, Dart, Triangulation};
use super::SurfaceId;
use crate::error::{Error, Result};
use crate::farey::{normalize_slope, Slope};

/// One complementary component of a multicurve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutRegion {
    pub punctures: Vec<u8>,
    /// Indices of bounding curves, once per side that faces this region.
    pub boundary: Vec<usize>,
}

impl CutRegion {
    /// Euler characteristic of a region that is a sphere with holes; only
    /// meaningful for pants decompositions.
    pub fn holes(&self) -> usize {
        self.punctures.len() + self.boundary.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutSurface {
    pub regions: Vec<CutRegion>,
    /// Regions on the two sides of each input curve (equal when the curve
    /// does not separate its neighbourhood).
    pub sides: Vec<[usize; 2]>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Complementary regions of a set of pairwise disjoint, distinct curves.
pub fn cut_surface(tri: &Triangulation, curves: &[&NormalCurve]) -> Result<CutSurface> {
    let mut total = vec![0u32; tri.edge_count];
    for c in curves {
        if c.weights.len() != tri.edge_count {
            return Err(Error::ShapeError { expected: tri.edge_count, got: c.weights.len() });
        }
        for (t, w) in total.iter_mut().zip(&c.weights) {
            *t += w;
        }
    }
    for t in 0..tri.triangle_count() {
        if corner_counts(triangle_weights(tri, &total, t)).is_none() {
            return Err(Error::InvalidCurve("curves are not disjoint".into()));
        }
    }
    let comps = trace_components(tri, &total);
    if comps.len() != curves.len() {
        return Err(Error::InvalidCurve("curves are not disjoint and distinct".into()));
    }
    let mut owner = vec![usize::MAX; comps.len()];
    for (ci, comp) in comps.iter().enumerate() {
        let w = comp.weights(tri.edge_count);
        let k = curves
            .iter()
            .enumerate()
            .position(|(k, c)| c.weights == w && !owner.contains(&k))
            .ok_or_else(|| Error::InvalidCurve("curves are not disjoint and distinct".into()))?;
        owner[ci] = k;
    }

    let mut seg_off = vec![0usize; tri.edge_count + 1];
    for e in 0..tri.edge_count {
        seg_off[e + 1] = seg_off[e] + total[e] as usize + 1;
    }
    let seg = |d: Dart, k: u32| -> usize {
        let e = tri.edge_of(d);
        let j = if tri.side_forward(d) { k } else { total[e] - k };
        seg_off[e] + j as usize
    };
    let mut uf = UnionFind((0..seg_off[tri.edge_count]).collect());
    for t in 0..tri.triangle_count() {
        let tw = triangle_weights(tri, &total, t);
        let a = corner_counts(tw).unwrap();
        for (i, &ai) in a.iter().enumerate() {
            let prev = (i + 2) % 3;
            let (di, dp) = ((3 * t + i) as Dart, (3 * t + prev) as Dart);
            for k in 0..=ai {
                uf.union(seg(di, k), seg(dp, tw[prev] - k));
            }
        }
    }

    let mut region_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    for s in 0..seg_off[tri.edge_count] {
        let r = uf.find(s);
        let next = region_of_root.len();
        region_of_root.entry(r).or_insert(next);
    }
    let mut regions = vec![CutRegion { punctures: Vec::new(), boundary: Vec::new() }; region_of_root.len()];
    let mut puncture_region = BTreeMap::new();
    for t in 0..tri.triangle_count() {
        for i in 0..3 {
            let v = tri.triangles[t].vertices[i];
            let reg = region_of_root[&uf.find(seg((3 * t + i) as Dart, 0))];
            if *puncture_region.entry(v).or_insert(reg) != reg {
                return Err(Error::Data(format!("puncture {v} meets two regions")));
            }
        }
    }
    for (v, reg) in puncture_region {
        regions[reg].punctures.push(v);
    }
    let mut sides = vec![[usize::MAX; 2]; curves.len()];
    for (ci, comp) in comps.iter().enumerate() {
        let (e, p) = comp.points[0];
        let l = region_of_root[&uf.find(seg_off[e] + p as usize)];
        let r = region_of_root[&uf.find(seg_off[e] + p as usize + 1)];
        let k = owner[ci];
        sides[k] = [l.min(r), l.max(r)];
        regions[l].boundary.push(k);
        regions[r].boundary.push(k);
    }
    for r in &mut regions {
        r.boundary.sort();
    }
    Ok(CutSurface { regions, sides })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationData {
    pub separating: bool,
    /// Punctures on the two sides, smaller part (then lexicographically
    /// smaller) first.
    pub puncture_partition: Option<[Vec<u8>; 2]>,
}

pub fn separation_data(tri: &Triangulation, c: &NormalCurve) -> Result<SeparationData> {
    let cut = cut_surface(tri, &[c])?;
    if cut.regions.len() == 1 {
        return Ok(SeparationData { separating: false, puncture_partition: None });
    }
    let mut parts = [cut.regions[0].punctures.clone(), cut.regions[1].punctures.clone()];
    parts.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    Ok(SeparationData { separating: true, puncture_partition: Some(parts) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TorusType {
    Separating,
    Slope(Slope),
}

/// Integer homology of a torus with punctures, via signed crossings of the
/// edges outside a dual spanning tree.
pub(crate) struct Homology {
    cotree: Vec<Option<usize>>,
    rank: usize,
    /// Rows: `[A]`, `[B]`, and (with two punctures) a peripheral class.
    basis: Vec<Vec<i64>>,
    pub(crate) a: Traced,
    pub(crate) b: Traced,
}

impl Homology {
    fn new(tri: &Triangulation) -> Result<Self> {
        let mut in_tree = vec![false; tri.edge_count];
        let mut seen = vec![false; tri.triangle_count()];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(t) = stack.pop() {
            for i in 0..3 {
                let d = (3 * t + i) as Dart;
                let u = tri.glue(d) as usize / 3;
                if !seen[u] {
                    seen[u] = true;
                    in_tree[tri.edge_of(d)] = true;
                    stack.push(u);
                }
            }
        }
        let mut cotree = vec![None; tri.edge_count];
        let mut rank = 0;
        for e in 0..tri.edge_count {
            if !in_tree[e] {
                cotree[e] = Some(rank);
                rank += 1;
            }
        }
        let mut h = Homology { cotree, rank, basis: Vec::new(), a: dummy(tri), b: dummy(tri) };
        let (a, mut b) = match tri.surface.punctures {
            1 => {
                let a = Traced::new(tri, NormalCurve::new(vec![0, 1, 1]))?;
                let b = Traced::new(tri, NormalCurve::new(vec![1, 0, 1]))?;
                (a, b)
            }
            _ => torus_basis_curves(tri)?,
        };
        let ca = h.class(tri, &a.path);
        let mut cb = h.class(tri, &b.path);
        if tri.surface.punctures == 1 {
            // Orient B so that the curve of slope 1/1 is A + B.
            let c = Traced::new(tri, NormalCurve::new(vec![1, 1, 0]))?;
            let cc = h.class(tri, &c.path);
            let sum: Vec<i64> = ca.iter().zip(&cb).map(|(x, y)| x + y).collect();
            let neg: Vec<i64> = sum.iter().map(|x| -x).collect();
            if cc != sum && cc != neg {
                cb = cb.iter().map(|x| -x).collect();
                b = Traced::from_parts(tri, b.curve.clone(), b.rev.clone());
            }
        }
        h.basis = vec![ca, cb];
        if tri.surface.punctures == 2 {
            let v = Traced::from_parts(tri, NormalCurve::new(tri.vertex_link(1)), link_path(tri, 1));
            h.basis.push(h.class(tri, &v.path));
        }
        if h.basis.len() != h.rank || det(&h.basis).abs() != 1 {
            return Err(Error::Data("homology basis is not unimodular".into()));
        }
        h.a = a;
        h.b = b;
        Ok(h)
    }

    pub(crate) fn class(&self, tri: &Triangulation, path: &[Dart]) -> Vec<i64> {
        let mut v = vec![0; self.rank];
        for &d in path {
            if let Some(k) = self.cotree[tri.edge_of(d)] {
                v[k] += if tri.side_forward(d) { 1 } else { -1 };
            }
        }
        v
    }

    /// Coordinates `(p, q)` of a class along `[A]`, `[B]`, dropping the
    /// peripheral component.
    fn coordinates(&self, v: &[i64]) -> (i64, i64) {
        let d = det(&self.basis);
        let solve = |col: usize| {
            let mut m = self.basis.clone();
            m[col] = v.to_vec();
            det(&m) / d
        };
        (solve(0), solve(1))
    }
}

fn dummy(tri: &Triangulation) -> Traced {
    Traced::from_parts(tri, NormalCurve::new(Vec::new()), Vec::new())
}

/// The loop around puncture `v` as a dart cycle: the corners at `v`.
fn link_path(tri: &Triangulation, v: u8) -> Vec<Dart> {
    let start = (0..tri.dart_count()).find(|&c| tri.triangles[c / 3].vertices[c % 3] == v).unwrap();
    let mut out = Vec::new();
    let mut c = start;
    loop {
        out.push(c as Dart);
        let p = tri.glue(c as Dart) as usize;
        c = 3 * (p / 3) + (p % 3 + 1) % 3;
        if c == start {
            break;
        }
    }
    out
}

fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        _ => 0,
    }
}

/// On the twice-punctured torus: `A` is the lightest nonseparating curve,
/// `B` the lightest nonseparating curve meeting it once (ties broken by
/// weight vector).
fn torus_basis_curves(tri: &Triangulation) -> Result<(Traced, Traced)> {
    let mut curves: Vec<NormalCurve> = super::enumerate_curves(tri, 2);
    curves.sort_by_key(|c| (c.total_weight(), c.weights.clone()));
    let nonsep: Vec<Traced> = curves
        .into_iter()
        .filter(|c| separation_data(tri, c).map(|s| !s.separating).unwrap_or(false))
        .map(|c| Traced::new(tri, c))
        .collect::<Result<_>>()?;
    let a = nonsep.first().ok_or_else(|| Error::Data("no nonseparating curve".into()))?;
    let b = nonsep
        .iter()
        .find(|b| geometric_intersection(tri, a, b) == 1)
        .ok_or_else(|| Error::Data("no dual curve".into()))?;
    Ok((a.clone(), b.clone()))
}

pub(crate) fn homology(s: SurfaceId) -> Result<&'static Homology> {
    static H11: OnceLock<std::result::Result<Homology, Error>> = OnceLock::new();
    static H12: OnceLock<std::result::Result<Homology, Error>> = OnceLock::new();
    let cell = match (s.genus, s.punctures) {
        (1, 1) => &H11,
        (1, 2) => &H12,
        _ => return Err(Error::Unsupported(format!("torus type on {s}"))),
    };
    cell.get_or_init(|| Homology::new(standard_triangulation(s)?)).as_ref().map_err(Clone::clone)
}

/// Homology slope of a curve on a torus with one or two punctures, after
/// forgetting the punctures.
pub fn torus_type(tri: &Triangulation, c: &NormalCurve) -> Result<TorusType> {
    let h = homology(tri.surface)?;
    let path = super::trace_curve(tri, c)?;
    let (p, q) = h.coordinates(&h.class(tri, &path));
    if p == 0 && q == 0 {
        Ok(TorusType::Separating)
    } else {
        Ok(TorusType::Slope(normalize_slope(p, q)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_curves_separate_into_pairs() {
        let t = standard_triangulation(SurfaceId::new(0, 5)).unwrap();
        for c in super::super::enumerate_curves(t, 2) {
            let s = separation_data(t, &c).unwrap();
            assert!(s.separating);
            let [a, b] = s.puncture_partition.unwrap();
            assert_eq!((a.len(), b.len()), (2, 3));
        }
    }

    #[test]
    fn torus_basis_types() {
        let s = SurfaceId::new(1, 1);
        let t = standard_triangulation(s).unwrap();
        let h = homology(s).unwrap();
        assert_eq!(torus_type(t, &h.a.curve).unwrap(), TorusType::Slope(Slope::INFINITY));
        assert_eq!(torus_type(t, &h.b.curve).unwrap(), TorusType::Slope(Slope::ZERO));
        let s = SurfaceId::new(1, 2);
        let t = standard_triangulation(s).unwrap();
        let h = homology(s).unwrap();
        assert_eq!(torus_type(t, &h.a.curve).unwrap(), TorusType::Slope(Slope::INFINITY));
        assert!(matches!(
            torus_type(
                standard_triangulation(SurfaceId::new(0, 4)).unwrap(),
                &NormalCurve::new(vec![0, 1, 1, 1, 1, 0])
            ),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn cut_counts_regions() {
        let t = standard_triangulation(SurfaceId::new(1, 2)).unwrap();
        let h = homology(SurfaceId::new(1, 2)).unwrap();
        let cut = cut_surface(t, &[&h.a.curve]).unwrap();
        assert_eq!(cut.regions.len(), 1);
        assert_eq!(cut.sides[0][0], cut.sides[0][1]);
    }
}
