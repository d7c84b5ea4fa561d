//! π₁ of a punctured sphere as a free group, read off the cone
//! triangulation, with the Artin action of half-twists.
//!
//! The spokes `(i, r)` are exactly the non-tree edges of a spanning tree of
//! the dual graph; crossing spoke `(i, r)` backwards is the letter `x_i`, a
//! loop around puncture `i`. The product `x_1 ⋯ x_{r−1}` is peripheral
//! around `r`.

use super::path::reduce_cyclic;
use super::triangulation::{Dart, Triangulation};

/// Letters are `±i` for `x_i^{±1}`, `1 ≤ i ≤ r − 1`.
pub(crate) type Word = Vec<i32>;

pub(crate) struct FreeBasis {
    r: i32,
    letter: Vec<i32>,
    gen_dart: Vec<Dart>,
    /// Dart path from the root triangle down to each triangle.
    down: Vec<Vec<Dart>>,
}

impl FreeBasis {
    pub(crate) fn new(tri: &Triangulation) -> Self {
        let r = tri.surface.punctures as u8;
        let mut letter = vec![0; tri.dart_count()];
        let mut gen_dart = vec![0; r as usize];
        for e in 0..tri.edge_count {
            let [u, v] = tri.edge_endpoints[e];
            if v == r {
                let [f, b] = tri.edge_darts(e);
                letter[b as usize] = u as i32;
                letter[f as usize] = -(u as i32);
                gen_dart[u as usize] = b;
            }
        }
        let mut down: Vec<Option<Vec<Dart>>> = vec![None; tri.triangle_count()];
        down[0] = Some(Vec::new());
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(t) = queue.pop_front() {
            for i in 0..3 {
                let d = (3 * t + i) as Dart;
                if letter[d as usize] != 0 {
                    continue;
                }
                let u = tri.glue(d) as usize / 3;
                if down[u].is_none() {
                    let mut p = down[t].clone().unwrap();
                    p.push(d);
                    down[u] = Some(p);
                    queue.push_back(u);
                }
            }
        }
        FreeBasis {
            r: r as i32,
            letter,
            gen_dart,
            down: down.into_iter().map(|p| p.expect("dual tree spans")).collect(),
        }
    }

    pub(crate) fn rank(&self) -> i32 {
        self.r - 1
    }

    pub(crate) fn path_to_word(&self, path: &[Dart]) -> Word {
        let w: Word = path.iter().map(|&d| self.letter[d as usize]).filter(|&x| x != 0).collect();
        cyclic_reduce(&w)
    }

    pub(crate) fn word_to_path(&self, tri: &Triangulation, w: &[i32]) -> Vec<Dart> {
        let mut out = Vec::new();
        for &x in w {
            let g = self.gen_dart[x.unsigned_abs() as usize];
            let g = if x > 0 { g } else { tri.glue(g) };
            out.extend(&self.down[g as usize / 3]);
            out.push(g);
            let back = &self.down[tri.glue(g) as usize / 3];
            out.extend(back.iter().rev().map(|&d| tri.glue(d)));
        }
        reduce_cyclic(tri, &out)
    }

    /// `x_r = (x_1 ⋯ x_{r−1})^{-1}`.
    fn letter_word(&self, j: i32) -> Word {
        if j.abs() < self.r {
            vec![j]
        } else if j > 0 {
            (1..self.r).rev().map(|i| -i).collect()
        } else {
            (1..self.r).collect()
        }
    }

    /// Images of `x_1 … x_{r−1}` under the half-twist `σ_i` exchanging
    /// punctures `i` and `i + 1` (or its inverse).
    pub(crate) fn half_twist_images(&self, i: i32, inverse: bool) -> Vec<Word> {
        let mut img: Vec<Word> = (1..self.r).map(|j| vec![j]).collect();
        let x = |j: i32| self.letter_word(j);
        let (a, b) = (i, i + 1);
        let (img_a, img_b) =
            if !inverse { ([x(a), x(b), x(-a)].concat(), x(a)) } else { (x(b), [x(-b), x(a), x(b)].concat()) };
        img[(a - 1) as usize] = free_reduce(&img_a);
        if b < self.r {
            img[(b - 1) as usize] = free_reduce(&img_b);
        }
        img
    }
}

pub(crate) fn free_reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub(crate) fn cyclic_reduce(w: &[i32]) -> Word {
    let mut v = free_reduce(w);
    let (mut s, mut e) = (0, v.len());
    while e - s >= 2 && v[s] == -v[e - 1] {
        s += 1;
        e -= 1;
    }
    v.truncate(e);
    v.drain(..s);
    v
}

pub(crate) fn substitute(w: &[i32], images: &[Word]) -> Word {
    let mut out = Vec::new();
    for &x in w {
        let img = &images[(x.unsigned_abs() - 1) as usize];
        if x > 0 {
            out.extend(img);
        } else {
            out.extend(img.iter().rev().map(|&y| -y));
        }
    }
    cyclic_reduce(&out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::path::path_weights;
    use crate::surface::{standard_triangulation, validate_normal_curve, SurfaceId};

    #[test]
    fn generators_are_puncture_loops_in_boundary_order() {
        for r in 4..=8u32 {
            let t = standard_triangulation(SurfaceId::new(0, r)).unwrap();
            let fb = FreeBasis::new(t);
            for i in 1..r as i32 {
                let w = path_weights(t, &fb.word_to_path(t, &[i]));
                assert_eq!(w, t.vertex_link(i as u8), "x_{i} on Σ0,{r}");
            }
            let prod: Word = (1..r as i32).collect();
            let w = path_weights(t, &fb.word_to_path(t, &prod));
            assert_eq!(w, t.vertex_link(r as u8), "boundary product on Σ0,{r}");
            // Consecutive pairs bound honest curves.
            for i in 1..r as i32 - 1 {
                let w = path_weights(t, &fb.word_to_path(t, &[i, i + 1]));
                assert!(validate_normal_curve(t, &w).unwrap().is_valid());
            }
        }
    }

    #[test]
    fn path_word_round_trip() {
        let t = standard_triangulation(SurfaceId::new(0, 6)).unwrap();
        let fb = FreeBasis::new(t);
        let w = vec![1, 2, -3, 4, 4, -1, 5];
        let p = fb.word_to_path(t, &w);
        assert_eq!(fb.path_to_word(&p), cyclic_reduce(&w));
    }

    #[test]
    fn half_twists_fix_the_boundary_product() {
        let t = standard_triangulation(SurfaceId::new(0, 7)).unwrap();
        let fb = FreeBasis::new(t);
        let prod: Word = (1..7).collect();
        for i in 1..6 {
            for inv in [false, true] {
                let img = fb.half_twist_images(i, inv);
                assert_eq!(substitute(&prod, &img), prod);
            }
        }
    }
}
