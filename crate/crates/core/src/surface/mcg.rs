//! Mapping class group actions on curves.
//!
//! Punctured spheres use half-twists `σ_i` through the Artin action on π₁;
//! tori use Dehn twists about fixed basis curves, done by surgery on dual
//! paths. Every surface also carries the reflection `ρ` of its shipped
//! triangulation.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::curve::{NormalCurve, Traced};
use super::freegroup::{substitute, FreeBasis, Word};
use super::path::{dehn_twist, path_weights};
use super::topology::homology;
use super::triangulation::{standard_triangulation, Triangulation};
use super::SurfaceId;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// `σ_i`, exchanging punctures `i` and `i + 1` of a sphere.
    HalfTwist {
        i: u8,
        inverse: bool,
    },
    /// Dehn twist about basis curve `a`, `b` or `c` of a torus.
    Twist {
        curve: char,
        inverse: bool,
    },
    Reflection,
}

impl Generator {
    pub fn inverse(self) -> Self {
        match self {
            Generator::HalfTwist { i, inverse } => Generator::HalfTwist { i, inverse: !inverse },
            Generator::Twist { curve, inverse } => Generator::Twist { curve, inverse: !inverse },
            Generator::Reflection => Generator::Reflection,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, inv) = match self {
            Generator::HalfTwist { i, inverse } => (format!("s{i}"), *inverse),
            Generator::Twist { curve, inverse } => (format!("t{curve}"), *inverse),
            Generator::Reflection => ("rho".to_string(), false),
        };
        write!(f, "{name}{}", if inv { "^-1" } else { "" })
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownGenerator(s.to_string());
        let (base, inverse) = match s.strip_suffix("^-1") {
            Some(b) => (b, true),
            None => (s, false),
        };
        if base == "rho" && !inverse {
            return Ok(Generator::Reflection);
        }
        if let Some(i) = base.strip_prefix('s') {
            let i: u8 = i.parse().map_err(|_| bad())?;
            return Ok(Generator::HalfTwist { i, inverse });
        }
        match base {
            "ta" | "tb" | "tc" => Ok(Generator::Twist { curve: base.chars().nth(1).unwrap(), inverse }),
            _ => Err(bad()),
        }
    }
}

/// A finite word `g₁ g₂ ⋯ g_k`, acting as `g₁ ∘ g₂ ∘ ⋯ ∘ g_k` (rightmost
/// first).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MappingClassWord(pub Vec<Generator>);

impl MappingClassWord {
    pub fn inverse(&self) -> Self {
        MappingClassWord(self.0.iter().rev().map(|g| g.inverse()).collect())
    }

    pub fn concat(&self, other: &Self) -> Self {
        MappingClassWord([self.0.clone(), other.0.clone()].concat())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for MappingClassWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> = self.0.iter().map(|g| g.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for MappingClassWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "id" {
            return Ok(MappingClassWord::default());
        }
        s.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<_>>()
            .map(MappingClassWord)
    }
}

impl Serialize for MappingClassWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MappingClassWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// The generating set of a surface and its action on curves.
pub struct SurfaceGroup {
    pub tri: &'static Triangulation,
    basis: Option<FreeBasis>,
    twists: Vec<(char, Traced)>,
    half_twists: Vec<[Vec<Word>; 2]>,
}

impl SurfaceGroup {
    pub fn new(s: SurfaceId) -> Result<Self> {
        let tri = standard_triangulation(s)?;
        let mut g = SurfaceGroup { tri, basis: None, twists: Vec::new(), half_twists: Vec::new() };
        if s.is_planar() {
            let fb = FreeBasis::new(tri);
            g.half_twists = (1..s.punctures as i32)
                .map(|i| [fb.half_twist_images(i, false), fb.half_twist_images(i, true)])
                .collect();
            g.basis = Some(fb);
        } else {
            let h = homology(s)?;
            g.twists.push(('a', h.a.clone()));
            g.twists.push(('b', h.b.clone()));
            if s.punctures == 2 {
                g.twists.push(('c', third_twist_curve(tri, h)?));
            }
        }
        Ok(g)
    }

    /// Cached instance for a supported surface.
    pub fn get(s: SurfaceId) -> Result<&'static SurfaceGroup> {
        static CACHE: [OnceLock<std::result::Result<SurfaceGroup, Error>>; 7] = [const { OnceLock::new() }; 7];
        let k = SurfaceId::SUPPORTED.iter().position(|x| *x == s).ok_or_else(|| Error::Unsupported(s.to_string()))?;
        CACHE[k].get_or_init(|| SurfaceGroup::new(s)).as_ref().map_err(Clone::clone)
    }

    /// Generators and their inverses, in a fixed order.
    pub fn generators(&self) -> Vec<Generator> {
        let mut out = Vec::new();
        for i in 1..=self.half_twists.len() as u8 {
            out.push(Generator::HalfTwist { i, inverse: false });
            out.push(Generator::HalfTwist { i, inverse: true });
        }
        for (c, _) in &self.twists {
            out.push(Generator::Twist { curve: *c, inverse: false });
            out.push(Generator::Twist { curve: *c, inverse: true });
        }
        out.push(Generator::Reflection);
        out
    }

    pub fn twist_curve(&self, name: char) -> Option<&Traced> {
        self.twists.iter().find(|(c, _)| *c == name).map(|(_, t)| t)
    }

    pub fn check(&self, g: Generator) -> Result<()> {
        let ok = match g {
            Generator::HalfTwist { i, .. } => i >= 1 && (i as usize) <= self.half_twists.len(),
            Generator::Twist { curve, .. } => self.twist_curve(curve).is_some(),
            Generator::Reflection => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::UnknownGenerator(g.to_string()))
        }
    }

    pub fn apply_one(&self, g: Generator, c: &Traced) -> Result<Traced> {
        self.check(g)?;
        match g {
            Generator::Reflection => {
                let mut w = vec![0; self.tri.edge_count];
                for (e, &x) in c.curve.weights.iter().enumerate() {
                    w[self.tri.reflection[e]] = x;
                }
                Traced::new(self.tri, NormalCurve::new(w))
            }
            Generator::Twist { curve, inverse } => {
                let core = self.twist_curve(curve).unwrap();
                dehn_twist(self.tri, core, c, if inverse { -1 } else { 1 })
            }
            Generator::HalfTwist { i, inverse } => {
                let fb = self.basis.as_ref().unwrap();
                let images = &self.half_twists[i as usize - 1][inverse as usize];
                let word = substitute(&fb.path_to_word(&c.path), images);
                let path = fb.word_to_path(self.tri, &word);
                Traced::new(self.tri, NormalCurve::new(path_weights(self.tri, &path)))
            }
        }
    }

    pub fn apply(&self, w: &MappingClassWord, c: &Traced) -> Result<Traced> {
        for &g in &w.0 {
            self.check(g)?;
        }
        let mut cur = c.clone();
        for &g in w.0.iter().rev() {
            cur = self.apply_one(g, &cur)?;
        }
        Ok(cur)
    }

    /// Normal coordinates of the curve `[x_i x_{i+1} ⋯ x_j]` around
    /// punctures `i..=j` of a sphere.
    pub fn standard_curve(&self, i: u8, j: u8) -> Result<NormalCurve> {
        let fb = self
            .basis
            .as_ref()
            .ok_or_else(|| Error::Unsupported(format!("standard curves on {}", self.tri.surface)))?;
        if i < 1 || j <= i || j as i32 > fb.rank() {
            return Err(Error::Data(format!("no standard curve {i}..{j}")));
        }
        let word: Word = (i as i32..=j as i32).collect();
        let w = path_weights(self.tri, &fb.word_to_path(self.tri, &word));
        Traced::new(self.tri, NormalCurve::new(w)).map(|t| t.curve)
    }
}

/// The second nonseparating curve disjoint from `A` (the pair bounds an
/// annulus pinched by the punctures), lightest first.
fn third_twist_curve(tri: &Triangulation, h: &super::topology::Homology) -> Result<Traced> {
    use super::path::geometric_intersection;
    let mut curves = super::enumerate_curves(tri, 3);
    curves.sort_by_key(|c| (c.total_weight(), c.weights.clone()));
    for c in curves {
        if c == h.a.curve {
            continue;
        }
        let t = Traced::new(tri, c)?;
        if geometric_intersection(tri, &t, &h.a) == 0
            && geometric_intersection(tri, &t, &h.b) == 1
            && !super::separation_data(tri, &t.curve)?.separating
        {
            return Ok(t);
        }
    }
    Err(Error::Data("no third twist curve".into()))
}

/// Applies a word to a curve given by normal coordinates.
pub fn apply_generator(s: SurfaceId, w: &MappingClassWord, c: &NormalCurve) -> Result<NormalCurve> {
    let g = SurfaceGroup::get(s)?;
    let t = Traced::new(g.tri, c.clone())?;
    g.apply(w, &t).map(|t| t.curve)
}
