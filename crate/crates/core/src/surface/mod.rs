//! Curves on small punctured surfaces, represented by normal coordinates on
//! a fixed ideal triangulation.

mod curve;
mod enumerate;
mod freegroup;
mod mcg;
mod path;
mod topology;
mod triangulation;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use curve::{trace_curve, validate_normal_curve, Component, CurveDefect, NormalCurve, Traced};
pub use enumerate::enumerate_curves;
pub use mcg::{apply_generator, Generator, MappingClassWord, SurfaceGroup};
pub use path::{dehn_twist, disjoint_curves, geometric_intersection, intersection_of_paths, reduce_cyclic};
pub use topology::{cut_surface, separation_data, torus_type, CutRegion, CutSurface, SeparationData, TorusType};
pub use triangulation::{standard_triangulation, Dart, Triangle, Triangulation};

/// A punctured surface `Σ_{g,r}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SurfaceId {
    pub genus: u32,
    pub punctures: u32,
}

impl SurfaceId {
    pub const SUPPORTED: [SurfaceId; 7] = [
        SurfaceId::new(1, 1),
        SurfaceId::new(0, 4),
        SurfaceId::new(0, 5),
        SurfaceId::new(1, 2),
        SurfaceId::new(0, 6),
        SurfaceId::new(0, 7),
        SurfaceId::new(0, 8),
    ];

    pub const fn new(genus: u32, punctures: u32) -> Self {
        SurfaceId { genus, punctures }
    }

    /// Curves in a pants decomposition, `3g − 3 + r`.
    pub fn complexity(&self) -> usize {
        (3 * self.genus + self.punctures) as usize - 3
    }

    /// Pairs of pants in a decomposition, `2g − 2 + r`.
    pub fn pants_count(&self) -> usize {
        (2 * self.genus + self.punctures) as usize - 2
    }

    pub fn is_supported(&self) -> bool {
        Self::SUPPORTED.contains(self)
    }

    pub fn is_planar(&self) -> bool {
        self.genus == 0
    }
}

impl fmt::Display for SurfaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.genus, self.punctures)
    }
}

impl FromStr for SurfaceId {
    type Err = Error;

    /// Parses `"g,r"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Data(format!("cannot parse surface {s:?}; expected g,r"));
        let (g, r) = s.split_once(',').ok_or_else(bad)?;
        Ok(SurfaceId::new(g.trim().parse().map_err(|_| bad())?, r.trim().parse().map_err(|_| bad())?))
    }
}

/// Normal coordinates of the curve of slope `a` on the standard
/// triangulation of `Σ₁,₁` or `Σ₀,₄`. Intersection numbers of these curves
/// equal `slope_intersection` for the matching chart kind.
pub fn slope_curve(s: SurfaceId, a: crate::farey::Slope) -> Result<NormalCurve> {
    let p = a.p().unsigned_abs() as u32;
    let q = a.q().unsigned_abs() as u32;
    let d = (a.p() - a.q()).unsigned_abs() as u32;
    match (s.genus, s.punctures) {
        (1, 1) => Ok(NormalCurve::new(vec![q, p, d])),
        (0, 4) => Ok(NormalCurve::new(vec![p, d, q, d, q, p])),
        _ => Err(Error::Unsupported(s.to_string())),
    }
}

/// Inverse of [`slope_curve`].
pub fn curve_slope(s: SurfaceId, c: &NormalCurve) -> Result<crate::farey::Slope> {
    let w = &c.weights;
    let bad = || Error::InvalidCurve(format!("{w:?} is not a slope curve"));
    let (p, q, d) = match (s.genus, s.punctures, w.len()) {
        (1, 1, 3) => (w[1] as i64, w[0] as i64, w[2] as i64),
        (0, 4, 6) => (w[0] as i64, w[2] as i64, w[1] as i64),
        (1, 1, _) | (0, 4, _) => return Err(bad()),
        _ => return Err(Error::Unsupported(s.to_string())),
    };
    // With `q ≥ 0`, the sign of `p` is fixed by `|p − q|`.
    let p = if (p - q).abs() == d { p } else { -p };
    let a = crate::farey::normalize_slope(p, q).map_err(|_| bad())?;
    if slope_curve(s, a)? != *c {
        return Err(bad());
    }
    Ok(a)
}
