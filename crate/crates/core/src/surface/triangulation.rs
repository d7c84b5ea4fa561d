//! Shipped ideal triangulations and their gluing tables.
//!
//! A triangle's side `i` runs from corner vertex `v_i` to `v_{i+1}`
//! (counter-clockwise). A *dart* `3t + i` stands for "leave triangle `t`
//! through side `i`"; gluing pairs each dart with the dart on the other side
//! of the same edge, which runs in the opposite direction.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::SurfaceId;
use crate::error::{Error, Result};

pub type Dart = u32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangle {
    pub edges: [usize; 3],
    /// Whether side `i` agrees with the stored `edge_endpoints` direction.
    pub forward: [bool; 3],
    pub vertices: [u8; 3],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct TriangulationFile {
    format_version: u32,
    surface: SurfaceId,
    edge_count: usize,
    edge_endpoints: Vec<[u8; 2]>,
    triangles: Vec<Triangle>,
    reflection: Vec<usize>,
}

/// An oriented ideal triangulation with precomputed gluings.
#[derive(Clone, Debug, Serialize)]
pub struct Triangulation {
    pub format_version: u32,
    pub surface: SurfaceId,
    pub edge_count: usize,
    pub edge_endpoints: Vec<[u8; 2]>,
    pub triangles: Vec<Triangle>,
    /// Edge permutation of an orientation-reversing involution.
    pub reflection: Vec<usize>,
    /// `gluing[d]` is the dart across the edge from dart `d`.
    pub gluing: Vec<Dart>,
    #[serde(skip)]
    edge_darts: Vec<[Dart; 2]>,
}

pub const FORMAT_VERSION: u32 = 1;

impl Triangulation {
    pub fn from_json(text: &str) -> Result<Self> {
        let f: TriangulationFile = serde_json::from_str(text).map_err(|e| Error::Data(e.to_string()))?;
        if f.format_version != FORMAT_VERSION {
            return Err(Error::Data(format!("unknown format version {}", f.format_version)));
        }
        let mut edge_darts = vec![Vec::new(); f.edge_count];
        for (t, tri) in f.triangles.iter().enumerate() {
            for i in 0..3 {
                let e = tri.edges[i];
                if e >= f.edge_count {
                    return Err(Error::Data(format!("edge {e} out of range")));
                }
                edge_darts[e].push((3 * t + i) as Dart);
            }
        }
        let mut gluing = vec![0; 3 * f.triangles.len()];
        let mut pairs = Vec::with_capacity(f.edge_count);
        for (e, ds) in edge_darts.iter().enumerate() {
            let &[d0, d1] = ds.as_slice() else {
                return Err(Error::Data(format!("edge {e} has {} sides", ds.len())));
            };
            gluing[d0 as usize] = d1;
            gluing[d1 as usize] = d0;
            let fwd = |d: Dart| f.triangles[d as usize / 3].forward[d as usize % 3];
            let pair = match (fwd(d0), fwd(d1)) {
                (true, false) => [d0, d1],
                (false, true) => [d1, d0],
                _ => return Err(Error::Data(format!("edge {e} glued without orientation"))),
            };
            pairs.push(pair);
        }
        let t = Triangulation {
            format_version: f.format_version,
            surface: f.surface,
            edge_count: f.edge_count,
            edge_endpoints: f.edge_endpoints,
            triangles: f.triangles,
            reflection: f.reflection,
            gluing,
            edge_darts: pairs,
        };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Data(m));
        let (g, r) = (self.surface.genus as i64, self.surface.punctures as i64);
        let chi = r - self.edge_count as i64 + self.triangles.len() as i64;
        if chi != 2 - 2 * g {
            return bad(format!("Euler characteristic {chi} does not match {}", self.surface));
        }
        for d in 0..self.dart_count() as Dart {
            let p = self.glue(d);
            let (a0, a1) = self.side_vertices(d);
            let (b0, b1) = self.side_vertices(p);
            if (a0, a1) != (b1, b0) {
                return bad(format!("dart {d} glued to a side with other endpoints"));
            }
            let [u, v] = self.edge_endpoints[self.edge_of(d)];
            let want = if self.side_forward(d) { (u, v) } else { (v, u) };
            if (a0, a1) != want {
                return bad(format!("dart {d} disagrees with edge endpoints"));
            }
        }
        // Corners around each ideal vertex form one cycle per puncture.
        let mut seen = vec![false; self.dart_count()];
        let mut labels = Vec::new();
        for c in 0..self.dart_count() {
            if seen[c] {
                continue;
            }
            let label = self.triangles[c / 3].vertices[c % 3];
            let mut x = c;
            while !seen[x] {
                seen[x] = true;
                if self.triangles[x / 3].vertices[x % 3] != label {
                    return bad(format!("inconsistent puncture labels around corner {c}"));
                }
                x = self.next_corner(x);
            }
            labels.push(label);
        }
        labels.sort();
        let want: Vec<u8> = (1..=self.surface.punctures as u8).collect();
        if labels != want {
            return bad(format!("ideal vertices {labels:?}, expected {want:?}"));
        }
        let mut perm = self.reflection.clone();
        perm.sort();
        if perm != (0..self.edge_count).collect::<Vec<_>>() {
            return bad("reflection is not a permutation".into());
        }
        for tri in &self.triangles {
            let mut img: Vec<usize> = tri.edges.iter().map(|&e| self.reflection[e]).collect();
            img.sort();
            let hit = self.triangles.iter().any(|u| {
                let mut es = u.edges.to_vec();
                es.sort();
                es == img
            });
            if !hit {
                return bad("reflection does not map triangles to triangles".into());
            }
        }
        if (0..self.edge_count).any(|e| self.reflection[self.reflection[e]] != e) {
            return bad("reflection is not an involution".into());
        }
        Ok(())
    }

    /// Corner `c = 3t + i` sits at `v_i`; the next corner around the same
    /// ideal vertex lies across side `i`.
    fn next_corner(&self, c: usize) -> usize {
        let p = self.glue(c as Dart) as usize;
        3 * (p / 3) + (p % 3 + 1) % 3
    }

    pub fn dart_count(&self) -> usize {
        3 * self.triangles.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    #[inline]
    pub fn glue(&self, d: Dart) -> Dart {
        self.gluing[d as usize]
    }

    #[inline]
    pub fn edge_of(&self, d: Dart) -> usize {
        self.triangles[d as usize / 3].edges[d as usize % 3]
    }

    #[inline]
    pub fn side_forward(&self, d: Dart) -> bool {
        self.triangles[d as usize / 3].forward[d as usize % 3]
    }

    /// The two darts of an edge, forward side first.
    #[inline]
    pub fn edge_darts(&self, e: usize) -> [Dart; 2] {
        self.edge_darts[e]
    }

    pub fn side_vertices(&self, d: Dart) -> (u8, u8) {
        let v = &self.triangles[d as usize / 3].vertices;
        let i = d as usize % 3;
        (v[i], v[(i + 1) % 3])
    }

    /// Normal coordinates of the loop around puncture `v`.
    pub fn vertex_link(&self, v: u8) -> Vec<u32> {
        self.edge_endpoints.iter().map(|[a, b]| (*a == v) as u32 + (*b == v) as u32).collect()
    }

    pub fn punctures(&self) -> impl Iterator<Item = u8> {
        1..=self.surface.punctures as u8
    }
}

const SHIPPED: [(u32, u32, &str); 7] = [
    (1, 1, include_str!("../../data/triangulations/s1_1.json")),
    (0, 4, include_str!("../../data/triangulations/s0_4.json")),
    (0, 5, include_str!("../../data/triangulations/s0_5.json")),
    (1, 2, include_str!("../../data/triangulations/s1_2.json")),
    (0, 6, include_str!("../../data/triangulations/s0_6.json")),
    (0, 7, include_str!("../../data/triangulations/s0_7.json")),
    (0, 8, include_str!("../../data/triangulations/s0_8.json")),
];

/// The fixed triangulation shipped for `s`.
pub fn standard_triangulation(s: SurfaceId) -> Result<&'static Triangulation> {
    static CACHE: [OnceLock<Triangulation>; 7] = [const { OnceLock::new() }; 7];
    let k = SHIPPED
        .iter()
        .position(|&(g, r, _)| g == s.genus && r == s.punctures)
        .ok_or_else(|| Error::Unsupported(s.to_string()))?;
    Ok(CACHE[k].get_or_init(|| {
        let t = Triangulation::from_json(SHIPPED[k].2).expect("shipped triangulation is valid");
        assert_eq!(t.surface, s);
        t
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_counts() {
        let t = standard_triangulation(SurfaceId::new(1, 1)).unwrap();
        assert_eq!((t.triangle_count(), t.edge_count), (2, 3));
        let t = standard_triangulation(SurfaceId::new(0, 5)).unwrap();
        assert_eq!((t.triangle_count(), t.edge_count), (6, 9));
        assert!(matches!(standard_triangulation(SurfaceId::new(3, 0)), Err(Error::Unsupported(_))));
        for s in SurfaceId::SUPPORTED {
            let t = standard_triangulation(s).unwrap();
            assert_eq!(2 * t.edge_count, 3 * t.triangle_count());
            for d in 0..t.dart_count() as Dart {
                assert_eq!(t.glue(t.glue(d)), d);
                assert_ne!(t.glue(d), d);
            }
        }
    }

    #[test]
    fn rejects_broken_gluing() {
        let text = include_str!("../../data/triangulations/s1_1.json");
        let mut v: serde_json::Value = serde_json::from_str(text).unwrap();
        v["triangles"][0]["forward"][0] = serde_json::Value::Bool(false);
        assert!(Triangulation::from_json(&v.to_string()).is_err());
        let mut v: serde_json::Value = serde_json::from_str(text).unwrap();
        v["surface"]["punctures"] = 2.into();
        assert!(Triangulation::from_json(&v.to_string()).is_err());
    }
}
