//! The Farey graph as the curve and pants graph of the one-holed torus and
//! the four-holed sphere.
//!
//! Vertices are reduced fractions `p/q` (with `1/0`), joined when
//! `|p·s − q·r| = 1`. Every enumeration here is truncated by an explicit
//! bound on `max(|p|, |q|)`: the graph is locally infinite, so
//! "complete within the bound" is the contract.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A reduced slope `p/q`: `gcd(|p|,|q|) = 1`, `q ≥ 0`, and `1/0` is the
/// only representative with `q = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slope {
    p: i64,
    q: i64,
}

impl Slope {
    pub const INFINITY: Slope = Slope { p: 1, q: 0 };
    pub const ZERO: Slope = Slope { p: 0, q: 1 };

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// `max(|p|, |q|)`, the quantity bounded by every enumeration.
    pub fn height(&self) -> i64 {
        self.p.abs().max(self.q)
    }

    fn det(&self, other: &Slope) -> i64 {
        self.p * other.q - self.q * other.p
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Data(format!("cannot parse slope {s:?}"));
        let (p, q) = s.split_once('/').ok_or_else(bad)?;
        let p = p.trim().parse().map_err(|_| bad())?;
        let q = q.trim().parse().map_err(|_| bad())?;
        normalize_slope(p, q)
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Reduce `(p, q)` to its canonical slope.
pub fn normalize_slope(p: i64, q: i64) -> Result<Slope> {
    if p == 0 && q == 0 {
        return Err(Error::InvalidSlope(p, q));
    }
    if q == 0 {
        return Ok(Slope::INFINITY);
    }
    let g = p.gcd(&q);
    let (mut p, mut q) = (p / g, q / g);
    if q < 0 {
        p = -p;
        q = -q;
    }
    Ok(Slope { p, q })
}

pub fn is_farey_edge(a: Slope, b: Slope) -> bool {
    a.det(&b).abs() == 1
}

/// Every slope with `max(|p|, |q|) ≤ bound`, in ascending order.
pub fn slopes_within(bound: i64) -> Vec<Slope> {
    let mut out = BTreeSet::new();
    for q in 0..=bound {
        for p in -bound..=bound {
            if let Ok(s) = normalize_slope(p, q) {
                if s.height() <= bound {
                    out.insert(s);
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Farey neighbours of `a` of height at most `bound`.
pub fn farey_neighbors(a: Slope, bound: i64) -> BTreeSet<Slope> {
    slopes_within(bound).into_iter().filter(|&b| is_farey_edge(a, b)).collect()
}

/// The two slopes completing the edge `ab` to a triangle.
pub fn triangle_completions(a: Slope, b: Slope) -> Result<[Slope; 2]> {
    if !is_farey_edge(a, b) {
        return Err(Error::NotAnEdge(a.to_string(), b.to_string()));
    }
    let mut out = [normalize_slope(a.p + b.p, a.q + b.q)?, normalize_slope(a.p - b.p, a.q - b.q)?];
    out.sort();
    Ok(out)
}

/// The two chart types in which an elementary move happens.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChartKind {
    FourHoledSphere,
    OneHoledTorus,
}

impl ChartKind {
    /// Intersection number of Farey-adjacent curves in this chart.
    pub fn minimal_intersection(self) -> u32 {
        match self {
            ChartKind::FourHoledSphere => 2,
            ChartKind::OneHoledTorus => 1,
        }
    }
}

pub fn slope_intersection(a: Slope, b: Slope, kind: ChartKind) -> u64 {
    let d = a.det(&b).unsigned_abs();
    match kind {
        ChartKind::OneHoledTorus => d,
        ChartKind::FourHoledSphere => 2 * d,
    }
}

/// A grouping of the four punctures `{1,2,3,4}` into two pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Association {
    /// `{1,2}|{3,4}`
    A12,
    /// `{1,3}|{2,4}`
    A13,
    /// `{1,4}|{2,3}`
    A14,
}

impl Association {
    pub const ALL: [Association; 3] = [Association::A12, Association::A13, Association::A14];

    pub fn pairs(self) -> [[u8; 2]; 2] {
        match self {
            Association::A12 => [[1, 2], [3, 4]],
            Association::A13 => [[1, 3], [2, 4]],
            Association::A14 => [[1, 4], [2, 3]],
        }
    }
}

impl fmt::Display for Association {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.pairs();
        write!(f, "{{{a},{b}}}|{{{c},{d}}}")
    }
}

impl Serialize for Association {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.pairs().serialize(s)
    }
}

/// Parity-class marking: `(0,1) ↦ {1,2}|{3,4}`, `(1,0) ↦ {1,3}|{2,4}`,
/// `(1,1) ↦ {1,4}|{2,3}` for `(p mod 2, q mod 2)`.
pub fn slope_association(a: Slope) -> Association {
    match (a.p.rem_euclid(2), a.q.rem_euclid(2)) {
        (0, 1) => Association::A12,
        (1, 0) => Association::A13,
        _ => Association::A14,
    }
}

pub fn associativity_candidates(a: Slope, target: Association, bound: i64) -> Result<BTreeSet<Slope>> {
    if slope_association(a) == target {
        return Err(Error::NoSuchAssociation(a.to_string()));
    }
    Ok(farey_neighbors(a, bound).into_iter().filter(|&b| slope_association(b) == target).collect())
}

/// The member of `{a, b, c}` adjacent to the other two, provided the triple
/// spans exactly two edges and some slope is adjacent to all three (so the
/// triple sits in two triangles sharing an edge).
pub fn find_quadrilateral_triple_central(a: Slope, b: Slope, c: Slope) -> Option<Slope> {
    quadrilateral_witness(a, b, c).map(|(central, _)| central)
}

/// Central point and witness of a quadrilateral triple.
pub fn quadrilateral_witness(a: Slope, b: Slope, c: Slope) -> Option<(Slope, Slope)> {
    if a == b || b == c || a == c {
        return None;
    }
    let t = [a, b, c];
    let edges = [(0, 1), (0, 2), (1, 2)].iter().filter(|&&(i, j)| is_farey_edge(t[i], t[j])).count();
    if edges != 2 {
        return None;
    }
    let k = (0..3).find(|&k| (0..3).all(|j| j == k || is_farey_edge(t[k], t[j])))?;
    let central = t[k];
    let outer: Vec<Slope> = (0..3).filter(|&j| j != k).map(|j| t[j]).collect();
    // A witness is adjacent to `central` and an outer point, so it completes
    // that edge to a triangle.
    let witness = triangle_completions(central, outer[0]).ok()?.into_iter().find(|&w| is_farey_edge(w, outer[1]))?;
    Some((central, witness))
}

/// Generators of the extended modular group acting on slopes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pgl2Token {
    /// Parabolic fixing `0/1`: `(p, q) ↦ (p, p + q)`.
    TwistZero,
    TwistZeroInv,
    /// Parabolic fixing `1/0`: `(p, q) ↦ (p + q, q)`.
    TwistInf,
    TwistInfInv,
    /// `(p, q) ↦ (−p, q)`.
    Reflect,
}

impl Pgl2Token {
    pub const ALL: [Pgl2Token; 5] = [
        Pgl2Token::TwistZero,
        Pgl2Token::TwistZeroInv,
        Pgl2Token::TwistInf,
        Pgl2Token::TwistInfInv,
        Pgl2Token::Reflect,
    ];

    pub fn matrix(self) -> Matrix {
        match self {
            Pgl2Token::TwistZero => [[1, 0], [1, 1]],
            Pgl2Token::TwistZeroInv => [[1, 0], [-1, 1]],
            Pgl2Token::TwistInf => [[1, 1], [0, 1]],
            Pgl2Token::TwistInfInv => [[1, -1], [0, 1]],
            Pgl2Token::Reflect => [[-1, 0], [0, 1]],
        }
    }
}

pub type Matrix = [[i64; 2]; 2];

/// A word in [`Pgl2Token`]s. The word `t₁t₂…tₖ` acts as the matrix product
/// `M(t₁)·M(t₂)⋯M(tₖ)`, so the rightmost token acts first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pgl2Word(pub Vec<Pgl2Token>);

impl Pgl2Word {
    pub fn matrix(&self) -> Matrix {
        self.0.iter().fold([[1, 0], [0, 1]], |m, t| mat_mul(m, t.matrix()))
    }
}

pub fn mat_mul(a: Matrix, b: Matrix) -> Matrix {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

pub fn mat_det(m: Matrix) -> i64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub fn apply_matrix(m: Matrix, a: Slope) -> Slope {
    debug_assert_eq!(mat_det(m).abs(), 1);
    normalize_slope(m[0][0] * a.p + m[0][1] * a.q, m[1][0] * a.p + m[1][1] * a.q)
        .expect("unimodular image of a nonzero vector is nonzero")
}

pub fn apply_pgl2(w: &Pgl2Word, a: Slope) -> Slope {
    apply_matrix(w.matrix(), a)
}

/// A quadrilateral triple stored as (central point, sorted outer points).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuadTriple {
    pub central: Slope,
    pub outer: [Slope; 2],
}

impl QuadTriple {
    pub fn new(central: Slope, a: Slope, b: Slope) -> Self {
        let outer = if a <= b { [a, b] } else { [b, a] };
        QuadTriple { central, outer }
    }

    /// The triple `{1/0, 0/1, 2/1}` centred at `1/0`.
    pub fn canonical() -> Self {
        QuadTriple::new(Slope::INFINITY, Slope::ZERO, Slope { p: 2, q: 1 })
    }

    pub fn height(&self) -> i64 {
        self.central.height().max(self.outer[0].height()).max(self.outer[1].height())
    }

    pub fn map(&self, m: Matrix) -> Self {
        QuadTriple::new(apply_matrix(m, self.central), apply_matrix(m, self.outer[0]), apply_matrix(m, self.outer[1]))
    }
}

/// All quadrilateral triples whose three slopes have height ≤ `bound`.
pub fn quadrilateral_triples(bound: i64) -> BTreeSet<QuadTriple> {
    let slopes = slopes_within(bound);
    let mut out = BTreeSet::new();
    for &c in &slopes {
        let nbrs: Vec<Slope> = slopes.iter().copied().filter(|&s| is_farey_edge(c, s)).collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                if find_quadrilateral_triple_central(c, a, b) == Some(c) {
                    out.insert(QuadTriple::new(c, a, b));
                }
            }
        }
    }
    out
}

/// A unimodular matrix taking the canonical triple onto `t`: it sends the
/// canonical central point and witness `1/1` to `t`'s central point and
/// witness, which forces the outer points to match.
pub fn quadrilateral_normalizer(t: &QuadTriple) -> Option<Matrix> {
    let (c, w) = quadrilateral_witness(t.central, t.outer[0], t.outer[1])?;
    // columns: M·(1,0) = c, M·(0,1) = w − c
    let m = [[c.p, w.p - c.p], [c.q, w.q - c.q]];
    let m = if mat_det(m).abs() == 1 { m } else { [[c.p, -w.p - c.p], [c.q, -w.q - c.q]] };
    (mat_det(m).abs() == 1 && QuadTriple::canonical().map(m) == *t).then_some(m)
}

/// Result of the quadrilateral-triple orbit search.
#[derive(Clone, Debug, Serialize)]
pub struct QuadOrbitReport {
    pub bound: i64,
    pub triples: usize,
    /// Triples reached from the canonical one by generator steps that stay
    /// inside the bound.
    pub reached: usize,
    /// Largest number of generator steps needed.
    pub max_word_length: usize,
    /// Every triple admits an explicit normalising matrix.
    pub all_normalizable: bool,
    pub unreached: Vec<QuadTriple>,
}

impl QuadOrbitReport {
    pub fn passed(&self, max_len: usize) -> bool {
        self.reached == self.triples && self.all_normalizable && self.max_word_length <= max_len
    }
}

/// Breadth-first orbit of the canonical triple under single generator
/// steps, restricted to triples of height ≤ `bound`.
pub fn quadrilateral_orbit(bound: i64) -> QuadOrbitReport {
    let all = quadrilateral_triples(bound);
    let mut depth: BTreeMap<QuadTriple, usize> = BTreeMap::new();
    let start = QuadTriple::canonical();
    let mut queue = VecDeque::new();
    if start.height() <= bound {
        depth.insert(start, 0);
        queue.push_back(start);
    }
    while let Some(t) = queue.pop_front() {
        let d = depth[&t];
        for tok in Pgl2Token::ALL {
            let u = t.map(tok.matrix());
            if u.height() <= bound && !depth.contains_key(&u) {
                depth.insert(u, d + 1);
                queue.push_back(u);
            }
        }
    }
    let unreached: Vec<QuadTriple> = all.iter().filter(|t| !depth.contains_key(t)).copied().collect();
    QuadOrbitReport {
        bound,
        triples: all.len(),
        reached: all.len() - unreached.len(),
        max_word_length: all.iter().filter_map(|t| depth.get(t)).copied().max().unwrap_or(0),
        all_normalizable: all.iter().all(|t| quadrilateral_normalizer(t).is_some()),
        unreached,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: i64, q: i64) -> Slope {
        normalize_slope(p, q).unwrap()
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(s(2, 4), s(1, 2));
        assert_eq!(s(-3, 0), Slope::INFINITY);
        assert_eq!(s(3, -6).to_string(), "-1/2");
        assert_eq!(normalize_slope(0, 0), Err(Error::InvalidSlope(0, 0)));
    }

    #[test]
    fn edge_examples() {
        assert!(is_farey_edge(s(0, 1), s(1, 0)));
        assert!(is_farey_edge(s(1, 2), s(1, 3)));
        assert!(!is_farey_edge(s(1, 3), s(2, 3)));
        assert!(!is_farey_edge(s(2, 3), s(2, 3)));
    }

    #[test]
    fn neighbor_examples() {
        let n: Vec<String> = farey_neighbors(s(0, 1), 3).iter().map(|x| x.to_string()).collect();
        let mut want = vec!["1/0", "1/1", "-1/1", "1/2", "-1/2", "1/3", "-1/3"];
        want.sort_by_key(|w| w.parse::<Slope>().unwrap());
        assert_eq!(n, want);
        assert_eq!(farey_neighbors(s(1, 0), 2), [s(0, 1), s(1, 1), s(-1, 1), s(2, 1), s(-2, 1)].into_iter().collect());
        assert_eq!(farey_neighbors(s(1, 1), 1), [s(0, 1), s(1, 0)].into_iter().collect());
    }

    #[test]
    fn completion_examples() {
        let mut a = [s(1, 1), s(-1, 1)];
        a.sort();
        assert_eq!(triangle_completions(s(0, 1), s(1, 0)).unwrap(), a);
        let mut b = [s(2, 3), s(0, 1)];
        b.sort();
        assert_eq!(triangle_completions(s(1, 1), s(1, 2)).unwrap(), b);
        assert!(matches!(triangle_completions(s(0, 1), s(0, 1)), Err(Error::NotAnEdge(..))));
    }

    #[test]
    fn intersection_examples() {
        assert_eq!(slope_intersection(s(0, 1), s(1, 0), ChartKind::OneHoledTorus), 1);
        assert_eq!(slope_intersection(s(0, 1), s(1, 0), ChartKind::FourHoledSphere), 2);
        assert_eq!(slope_intersection(s(2, 3), s(2, 3), ChartKind::FourHoledSphere), 0);
    }

    #[test]
    fn association_examples() {
        assert_eq!(slope_association(s(0, 1)), Association::A12);
        assert_eq!(slope_association(s(1, 0)), Association::A13);
        assert_eq!(slope_association(s(3, 5)), Association::A14);
        assert_eq!(Association::A14.to_string(), "{1,4}|{2,3}");
    }

    #[test]
    fn candidate_examples() {
        let got = associativity_candidates(s(0, 1), Association::A13, 6).unwrap();
        let want: BTreeSet<Slope> =
            [(1, 0), (1, 2), (-1, 2), (1, 4), (-1, 4), (1, 6), (-1, 6)].iter().map(|&(p, q)| s(p, q)).collect();
        assert_eq!(got, want);
        let got = associativity_candidates(s(0, 1), Association::A14, 3).unwrap();
        let want: BTreeSet<Slope> = [(1, 1), (-1, 1), (1, 3), (-1, 3)].iter().map(|&(p, q)| s(p, q)).collect();
        assert_eq!(got, want);
        assert!(matches!(associativity_candidates(s(0, 1), Association::A12, 3), Err(Error::NoSuchAssociation(_))));
    }

    #[test]
    fn quadrilateral_examples() {
        assert_eq!(quadrilateral_witness(s(1, 0), s(0, 1), s(2, 1)), Some((s(1, 0), s(1, 1))));
        assert_eq!(find_quadrilateral_triple_central(s(0, 1), s(1, 0), s(1, 1)), None);
        assert_eq!(find_quadrilateral_triple_central(s(0, 1), s(1, 0), s(5, 1)), None);
    }

    #[test]
    fn pgl2_examples() {
        assert_eq!(apply_pgl2(&Pgl2Word::default(), s(3, 5)), s(3, 5));
        assert_eq!(apply_pgl2(&Pgl2Word(vec![Pgl2Token::TwistZero]), s(1, 0)), s(1, 1));
        assert_eq!(apply_pgl2(&Pgl2Word(vec![Pgl2Token::Reflect]), s(1, 2)), s(-1, 2));
    }

    #[test]
    fn serde_round_trip() {
        let x = s(-3, 7);
        let j = serde_json::to_string(&x).unwrap();
        assert_eq!(j, "\"-3/7\"");
        assert_eq!(serde_json::from_str::<Slope>(&j).unwrap(), x);
        assert_eq!(serde_json::to_string(&Association::A13).unwrap(), "[[1,3],[2,4]]");
    }
}
