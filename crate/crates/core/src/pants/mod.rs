//! Pants decompositions, elementary moves and finite balls of the pants
//! graph.

mod ball;
mod universe;

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::farey::ChartKind;
use crate::surface::{cut_surface, NormalCurve, SurfaceGroup};

pub use ball::{build_ball, induced_subgraph, BallEdge, BallVertex, PantsGraphBall};
pub(crate) use universe::intersect_sorted;
pub use universe::{CurveId, Universe};

/// A vertex of the pants graph: sorted curve ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct PantsDecomposition(pub Vec<CurveId>);

impl PantsDecomposition {
    pub fn new(mut ids: Vec<CurveId>) -> Self {
        ids.sort_unstable();
        PantsDecomposition(ids)
    }

    pub fn contains(&self, a: CurveId) -> bool {
        self.0.binary_search(&a).is_ok()
    }

    /// Replace `a` by `b`.
    pub fn swap(&self, a: CurveId, b: CurveId) -> Self {
        PantsDecomposition::new(self.0.iter().map(|&x| if x == a { b } else { x }).collect())
    }

    pub fn without(&self, a: CurveId) -> Vec<CurveId> {
        self.0.iter().copied().filter(|&x| x != a).collect()
    }

    pub fn without_all(&self, xs: &[CurveId]) -> Vec<CurveId> {
        self.0.iter().copied().filter(|x| !xs.contains(x)).collect()
    }

    /// Curves shared with `other`.
    pub fn common(&self, other: &Self) -> Vec<CurveId> {
        intersect_sorted(&self.0, &other.0)
    }

    /// `(removed, added)` when the two differ in exactly one curve.
    pub fn difference(&self, other: &Self) -> Option<(CurveId, CurveId)> {
        let removed: Vec<CurveId> = self.0.iter().copied().filter(|x| !other.contains(*x)).collect();
        let added: Vec<CurveId> = other.0.iter().copied().filter(|x| !self.contains(*x)).collect();
        match (removed.as_slice(), added.as_slice()) {
            ([r], [a]) => Some((*r, *a)),
            _ => None,
        }
    }
}

impl fmt::Display for PantsDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub fn is_pants_decomposition(u: &Universe, curves: &[CurveId]) -> Result<bool> {
    for &c in curves {
        u.traced(c)?;
    }
    if curves.len() != u.surface.complexity() {
        return Ok(false);
    }
    for (i, &a) in curves.iter().enumerate() {
        for &b in &curves[i + 1..] {
            if !u.disjoint_pair(a, b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// One pair of pants of a decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pants {
    pub punctures: Vec<u8>,
    /// Bounding curves, once per side facing this pants.
    pub boundary: Vec<CurveId>,
}

/// A connected subsurface `Σ_{g,b}` (punctures counted among the `b`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Subsurface {
    pub genus: u32,
    pub holes: u32,
}

impl fmt::Display for Subsurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.genus, self.holes)
    }
}

/// The dual structure of a decomposition: its pants and which curves bound
/// which pants.
#[derive(Clone, Debug, Serialize)]
pub struct PantsAdjacency {
    pub curves: Vec<CurveId>,
    pub pants: Vec<Pants>,
    sides: Vec<[usize; 2]>,
}

pub fn pants_adjacency(u: &Universe, p: &PantsDecomposition) -> Result<PantsAdjacency> {
    if !is_pants_decomposition(u, &p.0)? {
        return Err(Error::NotAPantsDecomposition);
    }
    let curves: Vec<_> = p.0.iter().map(|&c| u.curve(c)).collect();
    let cut = cut_surface(u.tri, &curves).map_err(|_| Error::NotAPantsDecomposition)?;
    if cut.regions.len() != u.surface.pants_count() || cut.regions.iter().any(|r| r.holes() != 3) {
        return Err(Error::NotAPantsDecomposition);
    }
    let pants = cut
        .regions
        .iter()
        .map(|r| Pants { punctures: r.punctures.clone(), boundary: r.boundary.iter().map(|&k| p.0[k]).collect() })
        .collect();
    Ok(PantsAdjacency { curves: p.0.clone(), pants, sides: cut.sides })
}

impl PantsAdjacency {
    fn index(&self, a: CurveId) -> Result<usize> {
        self.curves.binary_search(&a).map_err(|_| Error::CurveNotInDecomposition)
    }

    /// The pants on either side of `a` (equal for a curve whose chart is a
    /// one-holed torus).
    pub fn pants_of(&self, a: CurveId) -> Result<[usize; 2]> {
        Ok(self.sides[self.index(a)?])
    }

    /// Chart of `a`: the complement of the other curves that contains `a`.
    pub fn classify_complement(&self, a: CurveId) -> Result<ChartKind> {
        let [l, r] = self.pants_of(a)?;
        Ok(if l == r { ChartKind::OneHoledTorus } else { ChartKind::FourHoledSphere })
    }

    /// The charts of `a` and `b` share no pants.
    pub fn lie_on_disjoint_subsurfaces(&self, a: CurveId, b: CurveId) -> Result<bool> {
        let pa = self.pants_of(a)?;
        let pb = self.pants_of(b)?;
        Ok(!pa.iter().any(|x| pb.contains(x)))
    }

    /// Topological type of the union of the pants touching `curves`, when
    /// that union is connected.
    pub fn span(&self, curves: &[CurveId]) -> Result<Option<Subsurface>> {
        let mut set: Vec<usize> = Vec::new();
        for &c in curves {
            set.extend(self.pants_of(c)?);
        }
        set.sort();
        set.dedup();
        // Connectivity through the listed curves.
        let mut reach = vec![set[0]];
        let mut grew = true;
        while grew {
            grew = false;
            for &c in curves {
                let [l, r] = self.pants_of(c)?;
                if reach.contains(&l) != reach.contains(&r) {
                    reach.push(if reach.contains(&l) { r } else { l });
                    grew = true;
                }
            }
        }
        if reach.len() != set.len() {
            return Ok(None);
        }
        let k = set.len() as i64;
        let glued = self.sides.iter().filter(|[l, r]| set.contains(l) && set.contains(r)).count() as i64;
        let holes = 3 * k - 2 * glued;
        let genus = (2 + k - holes) / 2;
        Ok(Some(Subsurface { genus: genus as u32, holes: holes as u32 }))
    }
}

/// Elementary moves of one curve of a decomposition.
#[derive(Clone, Debug, Serialize)]
pub struct Moves {
    pub curve: CurveId,
    pub kind: ChartKind,
    /// Smallest positive intersection with `curve` among candidates in the
    /// universe; agrees with `kind` whenever the universe is large enough.
    pub achieved_minimum: Option<u64>,
    pub moves: Vec<(CurveId, PantsDecomposition)>,
}

/// Curves disjoint from every curve in `fixed` (all curves when empty).
pub(crate) fn candidates(u: &Universe, fixed: &[CurveId]) -> Vec<CurveId> {
    let mut iter = fixed.iter();
    let Some(&first) = iter.next() else {
        return u.ids().collect();
    };
    let mut cur = u.disjoint_from(first).to_vec();
    for &f in iter {
        cur = intersect_sorted(&cur, u.disjoint_from(f));
    }
    cur
}

/// Chart type of the complement of `fixed` (n − 1 disjoint curves)
/// containing `a`.
pub(crate) fn chart_kind(u: &Universe, fixed: &[CurveId], a: CurveId) -> Result<ChartKind> {
    let mut all = fixed.to_vec();
    all.push(a);
    let p = PantsDecomposition::new(all);
    pants_adjacency(u, &p)?.classify_complement(a)
}

pub fn elementary_moves(u: &Universe, p: &PantsDecomposition, a: CurveId) -> Result<Moves> {
    u.traced(a)?;
    if !p.contains(a) {
        return Err(Error::CurveNotInDecomposition);
    }
    let fixed = p.without(a);
    let kind = chart_kind(u, &fixed, a)?;
    let m = kind.minimal_intersection() as u64;
    let scored: Vec<(CurveId, u64)> =
        candidates(u, &fixed).into_par_iter().filter(|&c| c != a).map(|c| (c, u.intersection(a, c))).collect();
    let achieved_minimum = scored.iter().map(|&(_, i)| i).filter(|&i| i > 0).min();
    let moves = scored.into_iter().filter(|&(_, i)| i == m).map(|(c, _)| (c, p.swap(a, c))).collect();
    Ok(Moves { curve: a, kind, achieved_minimum, moves })
}

/// The shipped seed decomposition of each surface: the chain
/// `c₁₂, c₁₂₃, …` on spheres (one curve `c₁₂` on Σ₀,₄, the pair
/// `c₁₂, c₃₄` on Σ₀,₅), the basis curve `A` on Σ₁,₁ and the disjoint
/// nonseparating pair `A, C` on Σ₁,₂.
pub fn standard_seed(u: &Universe) -> Result<PantsDecomposition> {
    let g = SurfaceGroup::get(u.surface)?;
    let s = u.surface;
    let curves: Vec<NormalCurve> = if s.is_planar() {
        let r = s.punctures as u8;
        if r == 5 {
            vec![g.standard_curve(1, 2)?, g.standard_curve(3, 4)?]
        } else {
            (2..=r - 2).map(|j| g.standard_curve(1, j)).collect::<Result<_>>()?
        }
    } else if s.punctures == 1 {
        vec![g.twist_curve('a').unwrap().curve.clone()]
    } else {
        vec![g.twist_curve('a').unwrap().curve.clone(), g.twist_curve('c').unwrap().curve.clone()]
    };
    let ids = curves.iter().map(|c| u.require(c)).collect::<Result<_>>()?;
    Ok(PantsDecomposition::new(ids))
}
