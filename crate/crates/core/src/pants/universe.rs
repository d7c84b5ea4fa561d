use std::collections::HashMap;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::surface::{
    enumerate_curves, geometric_intersection, standard_triangulation, NormalCurve, SurfaceId, Traced, Triangulation,
};

pub type CurveId = u32;

/// Every curve with weights up to a bound, numbered by (total weight,
/// weight vector). All finite searches draw their curves from here.
pub struct Universe {
    pub surface: SurfaceId,
    pub tri: &'static Triangulation,
    pub weight_bound: u32,
    curves: Vec<Traced>,
    index: HashMap<NormalCurve, CurveId>,
    disjoint: Vec<OnceLock<Vec<CurveId>>>,
    rows: Vec<OnceLock<Vec<u32>>>,
}

#[derive(Serialize)]
struct CurveEntry<'a> {
    id: CurveId,
    weights: &'a [u32],
}

impl Universe {
    pub fn new(surface: SurfaceId, weight_bound: u32) -> Result<Self> {
        let tri = standard_triangulation(surface)?;
        let mut list = enumerate_curves(tri, weight_bound);
        list.sort_by(|a, b| (a.total_weight(), &a.weights).cmp(&(b.total_weight(), &b.weights)));
        let curves: Vec<Traced> = list.into_par_iter().map(|c| Traced::new(tri, c)).collect::<Result<_>>()?;
        let index = curves.iter().enumerate().map(|(i, t)| (t.curve.clone(), i as CurveId)).collect();
        let disjoint = (0..curves.len()).map(|_| OnceLock::new()).collect();
        let rows = (0..curves.len()).map(|_| OnceLock::new()).collect();
        Ok(Universe { surface, tri, weight_bound, curves, index, disjoint, rows })
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn id_of(&self, c: &NormalCurve) -> Option<CurveId> {
        self.index.get(c).copied()
    }

    pub fn require(&self, c: &NormalCurve) -> Result<CurveId> {
        self.id_of(c).ok_or_else(|| Error::Data(format!("curve {:?} exceeds the weight bound", c.weights)))
    }

    pub fn traced(&self, id: CurveId) -> Result<&Traced> {
        self.curves.get(id as usize).ok_or(Error::UnknownCurve(id as usize))
    }

    pub fn curve(&self, id: CurveId) -> &NormalCurve {
        &self.curves[id as usize].curve
    }

    pub fn intersection(&self, a: CurveId, b: CurveId) -> u64 {
        if let Some(r) = self.rows[a as usize].get() {
            return r[b as usize] as u64;
        }
        if let Some(r) = self.rows[b as usize].get() {
            return r[a as usize] as u64;
        }
        geometric_intersection(self.tri, &self.curves[a as usize], &self.curves[b as usize])
    }

    /// Intersection numbers of `a` with every curve, computed once; worth
    /// it for curves that searches revisit.
    pub fn intersection_row(&self, a: CurveId) -> &[u32] {
        self.rows[a as usize].get_or_init(|| {
            let ta = &self.curves[a as usize];
            self.curves.par_iter().map(|tb| geometric_intersection(self.tri, ta, tb) as u32).collect()
        })
    }

    pub fn disjoint_pair(&self, a: CurveId, b: CurveId) -> bool {
        a != b && crate::surface::disjoint_curves(self.tri, &self.curves[a as usize], &self.curves[b as usize])
    }

    /// Sorted ids of the curves disjoint from (and distinct from) `a`.
    pub fn disjoint_from(&self, a: CurveId) -> &[CurveId] {
        self.disjoint[a as usize].get_or_init(|| {
            let ta = &self.curves[a as usize];
            (0..self.curves.len() as CurveId)
                .into_par_iter()
                .filter(|&b| b != a && crate::surface::disjoint_curves(self.tri, ta, &self.curves[b as usize]))
                .collect()
        })
    }

    pub fn ids(&self) -> impl Iterator<Item = CurveId> {
        0..self.curves.len() as CurveId
    }

    /// JSON listing: `{surface, weight_bound, curves: [{id, weights}]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let curves: Vec<CurveEntry> = self
            .curves
            .iter()
            .enumerate()
            .map(|(i, t)| CurveEntry { id: i as CurveId, weights: &t.curve.weights })
            .collect();
        serde_json::json!({
            "surface": self.surface,
            "weight_bound": self.weight_bound,
            "curves": curves,
        })
    }
}

/// Sorted intersection of sorted id lists.
pub(crate) fn intersect_sorted(a: &[CurveId], b: &[CurveId]) -> Vec<CurveId> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
