//! Short loops in pants-graph balls and their classification.
//!
//! Loops are simple cycles of at most six edges in a ball. Edges between
//! discovered vertices are exact, so a loop through frontier vertices is
//! still a loop of the pants graph and its chords are all visible. The
//! classifier is purely combinatorial; the verifiers then check the
//! topological pattern each tag promises.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::farey::ChartKind;
use crate::pants::{chart_kind, pants_adjacency, CurveId, PantsDecomposition, PantsGraphBall, Subsurface, Universe};
use crate::surface::{dehn_twist, separation_data};

pub const MAX_LOOP_LEN: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LoopInBall {
    pub vertices: Vec<usize>,
    /// `labels[i]` = (curve removed, curve added) going from vertex `i` to
    /// vertex `i + 1` (cyclically).
    pub labels: Vec<(CurveId, CurveId)>,
    /// Some vertex lies on the frontier; such loops back existence claims
    /// only.
    pub touches_frontier: bool,
}

impl LoopInBall {
    pub fn from_vertices(ball: &PantsGraphBall, vertices: Vec<usize>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::NotAPath);
        }
        let n = vertices.len();
        let mut labels = Vec::with_capacity(n);
        for i in 0..n {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            labels.push(ball.edge_label(a, b).ok_or(Error::NotAPath)?);
        }
        let mut sorted = vertices.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != n {
            return Err(Error::NotAPath);
        }
        let touches_frontier = vertices.iter().any(|&v| ball.is_frontier(v));
        Ok(LoopInBall { vertices, labels, touches_frontier })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// The same loop started at `start` and, if `reverse`, run backwards.
    pub fn rotated(&self, ball: &PantsGraphBall, start: usize, reverse: bool) -> Self {
        let n = self.len();
        let vs: Vec<usize> = (0..n)
            .map(|i| if reverse { self.vertices[(start + n - i) % n] } else { self.vertices[(start + i) % n] })
            .collect();
        LoopInBall::from_vertices(ball, vs).expect("rotation of a loop is a loop")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LoopClassification {
    Triangle(ChartKind),
    AlternatingSquare,
    AlternatingPentagon,
    AlmostAlternatingHexagon,
    /// All vertices share `n − 2` curves, but none of the named shapes.
    TwoCurveSmallLoop {
        length: usize,
    },
    ThreeCurveSmallLoop,
    /// A ball edge joining two non-consecutive loop vertices.
    NotTrueLoop {
        chord: (usize, usize),
    },
    Unclassified,
}

impl LoopClassification {
    pub fn tag(&self) -> &'static str {
        match self {
            LoopClassification::Triangle(_) => "triangle",
            LoopClassification::AlternatingSquare => "alternating-square",
            LoopClassification::AlternatingPentagon => "alternating-pentagon",
            LoopClassification::AlmostAlternatingHexagon => "almost-alternating-hexagon",
            LoopClassification::TwoCurveSmallLoop { .. } => "two-curve",
            LoopClassification::ThreeCurveSmallLoop => "three-curve",
            LoopClassification::NotTrueLoop { .. } => "not-true-loop",
            LoopClassification::Unclassified => "unclassified",
        }
    }

    /// Member of the small-loop trichotomy.
    pub fn in_trichotomy(&self) -> bool {
        !matches!(self, LoopClassification::Unclassified)
    }
}

fn common_all(ball: &PantsGraphBall, vs: &[usize]) -> Vec<CurveId> {
    let mut c = ball.curves(vs[0]).0.clone();
    for &v in &vs[1..] {
        c = ball.curves(v).common(&PantsDecomposition(c.clone()));
    }
    c
}

fn triple_alternating(ball: &PantsGraphBall, n: usize, a: usize, b: usize, c: usize) -> bool {
    common_all(ball, &[a, b, c]).len() < n - 1
}

/// Every three consecutive vertices of an open path share fewer than
/// `n − 1` curves.
pub fn is_alternating(ball: &PantsGraphBall, path: &[usize]) -> Result<bool> {
    if path.len() < 3 {
        return Err(Error::NotAPath);
    }
    if path.windows(2).any(|w| !ball.has_edge(w[0], w[1])) {
        return Err(Error::NotAPath);
    }
    let n = ball.surface.complexity();
    Ok(path.windows(3).all(|w| triple_alternating(ball, n, w[0], w[1], w[2])))
}

/// The same property read geometrically: no three consecutive vertices lie
/// in one Farey chart of the ball.
pub fn is_alternating_geometric(ball: &PantsGraphBall, path: &[usize]) -> Result<bool> {
    if path.len() < 3 || path.windows(2).any(|w| !ball.has_edge(w[0], w[1])) {
        return Err(Error::NotAPath);
    }
    Ok(path.windows(3).all(|w| {
        !ball.curves(w[1]).0.iter().any(|&x| {
            let members = ball.chart_members(&ball.curves(w[1]).without(x));
            members.binary_search(&w[0]).is_ok() && members.binary_search(&w[2]).is_ok()
        })
    }))
}

/// Cyclic triples `(v_{i−1}, v_i, v_{i+1})` that are not alternating,
/// by middle index.
fn non_alternating_middles(ball: &PantsGraphBall, l: &LoopInBall) -> Vec<usize> {
    let n = ball.surface.complexity();
    let k = l.len();
    (0..k)
        .filter(|&i| !triple_alternating(ball, n, l.vertices[(i + k - 1) % k], l.vertices[i], l.vertices[(i + 1) % k]))
        .collect()
}

/// All simple cycles of length `3..=max_len`, each once, in canonical form.
pub fn enumerate_loops(ball: &PantsGraphBall, max_len: usize) -> Vec<LoopInBall> {
    let max_len = max_len.min(MAX_LOOP_LEN);
    let allowed = vec![true; ball.len()];
    let mut found: Vec<Vec<usize>> = (0..ball.len())
        .into_par_iter()
        .filter(|&s| allowed[s])
        .flat_map_iter(|s| {
            let mut out = Vec::new();
            let mut path = vec![s];
            extend(ball, &allowed, max_len, &mut path, &mut out);
            out
        })
        .collect();
    let mut loops: Vec<LoopInBall> = found.drain(..).map(|vs| canonical(ball, vs)).collect();
    loops.sort_by(|a, b| {
        let ka: Vec<&PantsDecomposition> = a.vertices.iter().map(|&v| ball.curves(v)).collect();
        let kb: Vec<&PantsDecomposition> = b.vertices.iter().map(|&v| ball.curves(v)).collect();
        (a.len(), ka).cmp(&(b.len(), kb))
    });
    loops
}

fn extend(ball: &PantsGraphBall, allowed: &[bool], max_len: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let s = path[0];
    let last = *path.last().unwrap();
    for &(w, _) in ball.neighbors(last) {
        if w == s && path.len() >= 3 && path[1] < last {
            out.push(path.clone());
        }
        if w <= s || !allowed[w] || path.len() >= max_len || path.contains(&w) {
            continue;
        }
        path.push(w);
        extend(ball, allowed, max_len, path, out);
        path.pop();
    }
}

/// Lexicographically least rotation/reflection by vertex keys.
fn canonical(ball: &PantsGraphBall, vs: Vec<usize>) -> LoopInBall {
    let n = vs.len();
    let key = |seq: &[usize]| -> Vec<PantsDecomposition> { seq.iter().map(|&v| ball.curves(v).clone()).collect() };
    let mut best: Option<(Vec<PantsDecomposition>, Vec<usize>)> = None;
    for start in 0..n {
        for rev in [false, true] {
            let seq: Vec<usize> =
                (0..n).map(|i| if rev { vs[(start + n - i) % n] } else { vs[(start + i) % n] }).collect();
            let k = key(&seq);
            if best.as_ref().is_none_or(|(bk, _)| k < *bk) {
                best = Some((k, seq));
            }
        }
    }
    LoopInBall::from_vertices(ball, best.unwrap().1).expect("cycle of ball edges")
}

fn chord(ball: &PantsGraphBall, l: &LoopInBall) -> Option<(usize, usize)> {
    let n = l.len();
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if ball.has_edge(l.vertices[i], l.vertices[j]) {
                return Some((l.vertices[i], l.vertices[j]));
            }
        }
    }
    None
}

pub fn classify_small_loop(ball: &PantsGraphBall, u: &Universe, l: &LoopInBall) -> Result<LoopClassification> {
    let len = l.len();
    if len > MAX_LOOP_LEN {
        return Err(Error::TooLong(len));
    }
    let n = ball.surface.complexity();
    let common = common_all(ball, &l.vertices);
    if len == 3 {
        let fixed = common.clone();
        let moving = ball.curves(l.vertices[0]).without_all(&fixed);
        let kind = chart_kind(u, &fixed, moving[0])?;
        return Ok(LoopClassification::Triangle(kind));
    }
    if let Some(c) = chord(ball, l) {
        return Ok(LoopClassification::NotTrueLoop { chord: c });
    }
    if common.len() + 2 >= n {
        let bad = non_alternating_middles(ball, l);
        return Ok(match (len, bad.len()) {
            (4, 0) => LoopClassification::AlternatingSquare,
            (5, 0) => LoopClassification::AlternatingPentagon,
            (6, 1) if hexagon_triple(ball, u, l, bad[0])?.is_some() => LoopClassification::AlmostAlternatingHexagon,
            _ => LoopClassification::TwoCurveSmallLoop { length: len },
        });
    }
    if common.len() + 3 == n && len == 6 {
        let mut all_half_squares = true;
        for i in 0..len {
            let (p, q, r) = (l.vertices[i], l.vertices[(i + 1) % len], l.vertices[(i + 2) % len]);
            match half_square_partner(ball, u, p, q, r) {
                Ok(Some(_)) => {}
                Ok(None) | Err(Error::NotAlternating) => {
                    all_half_squares = false;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if all_half_squares {
            return Ok(LoopClassification::ThreeCurveSmallLoop);
        }
    }
    Ok(LoopClassification::Unclassified)
}

/// For the non-alternating triple `(U, P, Q)` centred at index `mid`,
/// returns `(α₁, α₁′, α₁″, witness)` when the three moving curves form a
/// quadrilateral triple in their chart: `α₁′`, `α₁″` are not adjacent and
/// some curve of the chart is adjacent to all three.
fn hexagon_triple(
    ball: &PantsGraphBall,
    u: &Universe,
    l: &LoopInBall,
    mid: usize,
) -> Result<Option<(CurveId, CurveId, CurveId, CurveId)>> {
    let k = l.len();
    let (uu, p, q) = (l.vertices[(mid + k - 1) % k], l.vertices[mid], l.vertices[(mid + 1) % k]);
    let fixed = common_all(ball, &[uu, p, q]);
    let a1 = ball.curves(p).without_all(&fixed)[0];
    let a1p = ball.curves(q).without_all(&fixed)[0];
    let a1pp = ball.curves(uu).without_all(&fixed)[0];
    let kind = chart_kind(u, &fixed, a1)?;
    let m = kind.minimal_intersection() as u64;
    if u.intersection(a1p, a1pp) == m {
        return Ok(None);
    }
    let witness = crate::pants::candidates(u, &fixed).into_iter().find(|&x| {
        x != a1
            && x != a1p
            && x != a1pp
            && u.intersection(x, a1) == m
            && u.intersection(x, a1p) == m
            && u.intersection(x, a1pp) == m
    });
    Ok(witness.map(|w| (a1, a1p, a1pp, w)))
}

/// Given edges `PQ` (moving `α₂ → α₂′`) and `QR` (moving `α₁ → α₁′`) on
/// different curves, the vertex `S = P` with `α₁ → α₁′` closing an
/// alternating square, if it is a decomposition adjacent to both `P` and
/// `R`.
pub fn half_square_partner(
    ball: &PantsGraphBall,
    u: &Universe,
    p: usize,
    q: usize,
    r: usize,
) -> Result<Option<PantsDecomposition>> {
    let (a2, a2p) = ball.edge_label(p, q).ok_or(Error::NotAPath)?;
    let (a1, a1p) = ball.edge_label(q, r).ok_or(Error::NotAPath)?;
    if a1 == a2p || p == r {
        return Err(Error::NotAlternating);
    }
    let pp = ball.curves(p);
    let s = pp.swap(a1, a1p);
    if !u.disjoint_pair(a1p, a2) {
        return Ok(None);
    }
    let ok_ps = u.intersection(a1, a1p) == chart_kind(u, &pp.without(a1), a1)?.minimal_intersection() as u64;
    let ok_sr = u.intersection(a2, a2p) == chart_kind(u, &s.without(a2), a2)?.minimal_intersection() as u64;
    Ok((ok_ps && ok_sr).then_some(s))
}

/// `α₁`, `α₂` lie on disjoint subsurfaces of `P` (for `P → Q` moving `α₂`
/// and `Q → R` moving `α₁`).
pub fn move_pair_disjoint_subsurfaces(
    ball: &PantsGraphBall,
    u: &Universe,
    p: usize,
    q: usize,
    r: usize,
) -> Result<bool> {
    let (a2, _) = ball.edge_label(p, q).ok_or(Error::NotAPath)?;
    let (a1, _) = ball.edge_label(q, r).ok_or(Error::NotAPath)?;
    pants_adjacency(u, ball.curves(p))?.lie_on_disjoint_subsurfaces(a1, a2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PentagonReport {
    pub verified: bool,
    /// `α₂, α₂′, α₂″, α₁, α₁′` as a cyclic sequence.
    pub curve_cycle: Vec<CurveId>,
    pub chart: Option<Subsurface>,
    pub failures: Vec<String>,
}

/// Checks the five-curve cycle of an alternating pentagon.
pub fn verify_pentagon(ball: &PantsGraphBall, u: &Universe, l: &LoopInBall) -> Result<PentagonReport> {
    if l.len() != 5 || !non_alternating_middles(ball, l).is_empty() {
        return Err(Error::NotAPentagon);
    }
    let n = ball.surface.complexity();
    let common = common_all(ball, &l.vertices);
    if common.len() + 2 != n {
        return Err(Error::NotAPentagon);
    }
    let mut failures = Vec::new();
    // Each move joins two consecutive curves of the cycle.
    let mut nbrs: BTreeMap<CurveId, Vec<CurveId>> = BTreeMap::new();
    for &(a, b) in &l.labels {
        nbrs.entry(a).or_default().push(b);
        nbrs.entry(b).or_default().push(a);
    }
    if nbrs.len() != 5 || nbrs.values().any(|v| v.len() != 2) {
        return Err(Error::NotAPentagon);
    }
    let start = *nbrs.keys().next().unwrap();
    let mut cycle = vec![start];
    let mut prev = start;
    let mut cur = *nbrs[&start].iter().min().unwrap();
    while cur != start {
        cycle.push(cur);
        let next = *nbrs[&cur].iter().find(|&&x| x != prev).unwrap();
        prev = cur;
        cur = next;
    }
    if cycle.len() != 5 {
        return Err(Error::NotAPentagon);
    }
    for i in 0..5 {
        for j in i + 1..5 {
            let (a, b) = (cycle[i], cycle[j]);
            let x = u.intersection(a, b);
            let adjacent = j == i + 1 || (i == 0 && j == 4);
            if adjacent {
                let mut fixed = common.clone();
                let others: Vec<CurveId> = cycle.iter().copied().filter(|&c| c != a && c != b).collect();
                // The move a ↔ b happens beside the curve disjoint from both.
                let keep = others.into_iter().find(|&c| u.disjoint_pair(c, a) && u.disjoint_pair(c, b));
                let Some(keep) = keep else {
                    failures.push(format!("no fixed curve beside {a}–{b}"));
                    continue;
                };
                fixed.push(keep);
                fixed.sort();
                let m = chart_kind(u, &fixed, a)?.minimal_intersection() as u64;
                if x != m {
                    failures.push(format!("adjacent {a},{b} meet {x} times, minimal is {m}"));
                }
            } else if x != 0 {
                failures.push(format!("non-adjacent {a},{b} meet {x} times"));
            }
        }
    }
    let p = ball.curves(l.vertices[0]);
    let moving = p.without_all(&common);
    let adj = pants_adjacency(u, p)?;
    if adj.lie_on_disjoint_subsurfaces(moving[0], moving[1])? {
        failures.push("moving curves lie on disjoint subsurfaces".into());
    }
    let chart = adj.span(&moving)?;
    if chart != Some(Subsurface { genus: 0, holes: 5 }) {
        failures.push(format!("chart is {chart:?}, expected a five-holed sphere"));
    }
    Ok(PentagonReport { verified: failures.is_empty(), curve_cycle: cycle, chart, failures })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HexagonPattern {
    pub a1: CurveId,
    pub a1p: CurveId,
    pub a1pp: CurveId,
    pub a2: CurveId,
    pub a2p: CurveId,
    pub a2pp: CurveId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HexagonReport {
    pub verified: bool,
    pub pattern: HexagonPattern,
    pub chart: Option<Subsurface>,
    /// Completions `(α₂′, α₂″)` of the rest of the pattern in the universe.
    pub completions: usize,
    /// Those completions up to twists about `α₂`, which fix `P`, `Q`, `U`.
    pub completion_orbits: usize,
    pub failures: Vec<String>,
}

/// Checks the curve pattern of an almost-alternating hexagon `PQRSTU`
/// with quadrilateral triple `(U, P, Q)`.
pub fn verify_hexagon(ball: &PantsGraphBall, u: &Universe, l: &LoopInBall) -> Result<HexagonReport> {
    if l.len() != 6 {
        return Err(Error::NotAHexagon);
    }
    let bad = non_alternating_middles(ball, l);
    let [mid] = bad.as_slice() else {
        return Err(Error::NotAHexagon);
    };
    let (a1, a1p, a1pp, _) = hexagon_triple(ball, u, l, *mid)?.ok_or(Error::NotAHexagon)?;
    let l = l.rotated(ball, *mid, false);
    let [p, q, r, s, _t, uu] = l.vertices[..] else { unreachable!() };
    let common = common_all(ball, &l.vertices);
    let a2 = ball
        .curves(p)
        .common(ball.curves(uu))
        .into_iter()
        .find(|c| !common.contains(c) && *c != a1)
        .ok_or(Error::NotAHexagon)?;
    let a2p = ball.curves(r).without_all(&common).into_iter().find(|&c| c != a1p).ok_or(Error::NotAHexagon)?;
    let a2pp = ball.curves(s).without_all(&common).into_iter().find(|&c| c != a2p).ok_or(Error::NotAHexagon)?;
    let (a1p, a1pp) = if ball.curves(q).contains(a1p) { (a1p, a1pp) } else { (a1pp, a1p) };
    let pattern = HexagonPattern { a1, a1p, a1pp, a2, a2p, a2pp };
    let mut failures = Vec::new();
    let adj = pants_adjacency(u, ball.curves(p))?;
    let chart = adj.span(&[a1, a2])?;
    if chart != Some(Subsurface { genus: 1, holes: 2 }) {
        failures.push(format!("chart is {chart:?}, expected a twice-holed torus"));
    }
    let sep = |c: CurveId| separation_data(u.tri, u.curve(c)).map(|d| d.separating);
    if sep(a2)? {
        failures.push("α₂ is separating".into());
    }
    if sep(a1)? {
        failures.push("α₁ is separating".into());
    }
    if !sep(a1p)? || !sep(a1pp)? {
        failures.push("α₁′ or α₁″ is nonseparating".into());
    }
    let pairs = hexagon_completions(u, &common, &pattern)?;
    let completions = pairs.len();
    let completion_orbits = twist_orbits(u, a2, &pairs)?;
    if completion_orbits != 1 {
        failures.push(format!("{completion_orbits} choices of (α₂′, α₂″) up to twists about α₂"));
    }
    Ok(HexagonReport { verified: failures.is_empty(), pattern, chart, completions, completion_orbits, failures })
}

/// Pairs `(x, y)` making `P, Q, {α₁′,x}, {x,y}, {α₁″,y}, U` a hexagon.
fn hexagon_completions(u: &Universe, common: &[CurveId], h: &HexagonPattern) -> Result<Vec<(CurveId, CurveId)>> {
    let m = |fixed: &[CurveId], a: CurveId| -> Result<u64> {
        let mut f = common.to_vec();
        f.extend_from_slice(fixed);
        f.sort();
        Ok(chart_kind(u, &f, a)?.minimal_intersection() as u64)
    };
    let mut out = Vec::new();
    let base = crate::pants::candidates(u, common);
    let m_q = m(&[h.a1p], h.a2)?;
    for &x in &base {
        if x == h.a2 || !u.disjoint_pair(x, h.a1p) || u.intersection(x, h.a2) != m_q {
            continue;
        }
        for &y in &base {
            if y == x || y == h.a1p || !u.disjoint_pair(y, x) || !u.disjoint_pair(y, h.a1pp) {
                continue;
            }
            if u.intersection(h.a1p, y) == m(&[x], h.a1p)?
                && u.intersection(x, h.a1pp) == m(&[y], x)?
                && u.intersection(y, h.a2) == m(&[h.a1pp], y)?
            {
                out.push((x, y));
            }
        }
    }
    Ok(out)
}

/// Number of orbits of `pairs` under powers of the twist about `c`,
/// following each orbit while it stays inside the universe.
fn twist_orbits(u: &Universe, c: CurveId, pairs: &[(CurveId, CurveId)]) -> Result<usize> {
    let tc = u.traced(c)?;
    let mut left: Vec<(CurveId, CurveId)> = pairs.to_vec();
    let mut orbits = 0;
    while let Some(&(x0, y0)) = left.first() {
        orbits += 1;
        left.retain(|&p| p != (x0, y0));
        for power in [1, -1] {
            let (mut x, mut y) = (u.traced(x0)?.clone(), u.traced(y0)?.clone());
            loop {
                x = dehn_twist(u.tri, tc, &x, power)?;
                y = dehn_twist(u.tri, tc, &y, power)?;
                let (Some(xi), Some(yi)) = (u.id_of(&x.curve), u.id_of(&y.curve)) else {
                    break;
                };
                left.retain(|&p| p != (xi, yi));
            }
        }
    }
    Ok(orbits)
}

/// Cells found in a ball. `counts` covers every loop; `certified_counts`
/// only loops away from the frontier, which carry the universal claims.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CellInventory {
    pub loops: usize,
    pub certified_loops: usize,
    pub counts: BTreeMap<String, usize>,
    pub certified_counts: BTreeMap<String, usize>,
    pub triangles: Vec<LoopInBall>,
    /// Alternating squares with whether their two moving curves lie on
    /// disjoint subsurfaces.
    pub squares: Vec<(LoopInBall, bool)>,
    pub pentagons: Vec<(LoopInBall, PentagonReport)>,
    pub hexagons: Vec<(LoopInBall, HexagonReport)>,
    pub three_curve: Vec<LoopInBall>,
    pub unclassified: Vec<LoopInBall>,
    /// Canonical vertex sequence → tag, for equivariance lookups.
    #[serde(skip)]
    pub tags: BTreeMap<Vec<usize>, LoopClassification>,
}

impl CellInventory {
    pub fn all_verified(&self) -> bool {
        self.pentagons.iter().all(|(_, r)| r.verified)
            && self.hexagons.iter().all(|(_, r)| r.verified)
            && self.squares.iter().all(|(_, d)| *d)
    }

    pub fn count(&self, tag: &str) -> usize {
        self.counts.get(tag).copied().unwrap_or(0)
    }

    pub fn certified_count(&self, tag: &str) -> usize {
        self.certified_counts.get(tag).copied().unwrap_or(0)
    }

    pub fn certified_unclassified(&self) -> usize {
        self.unclassified.iter().filter(|l| !l.touches_frontier).count()
    }
}

pub fn classify_all(ball: &PantsGraphBall, u: &Universe, loops: &[LoopInBall]) -> Result<Vec<LoopClassification>> {
    loops.par_iter().map(|l| classify_small_loop(ball, u, l)).collect()
}

pub fn detect_cells(ball: &PantsGraphBall, u: &Universe) -> Result<CellInventory> {
    let loops = enumerate_loops(ball, MAX_LOOP_LEN);
    let tags = classify_all(ball, u, &loops)?;
    let mut inv = CellInventory { loops: loops.len(), ..Default::default() };
    for (l, t) in loops.into_iter().zip(tags) {
        *inv.counts.entry(t.tag().to_string()).or_default() += 1;
        if !l.touches_frontier {
            inv.certified_loops += 1;
            *inv.certified_counts.entry(t.tag().to_string()).or_default() += 1;
        }
        inv.tags.insert(l.vertices.clone(), t.clone());
        match t {
            LoopClassification::Triangle(_) => inv.triangles.push(l),
            LoopClassification::AlternatingSquare => {
                let d = square_on_disjoint_subsurfaces(ball, u, &l)?;
                inv.squares.push((l, d));
            }
            LoopClassification::ThreeCurveSmallLoop => inv.three_curve.push(l),
            LoopClassification::AlternatingPentagon => {
                let r = verify_pentagon(ball, u, &l)?;
                inv.pentagons.push((l, r));
            }
            LoopClassification::AlmostAlternatingHexagon => {
                let r = verify_hexagon(ball, u, &l)?;
                inv.hexagons.push((l, r));
            }
            LoopClassification::Unclassified => inv.unclassified.push(l),
            _ => {}
        }
    }
    Ok(inv)
}

fn square_on_disjoint_subsurfaces(ball: &PantsGraphBall, u: &Universe, l: &LoopInBall) -> Result<bool> {
    let [p, q, r, _] = l.vertices[..] else {
        return Err(Error::NotAPath);
    };
    move_pair_disjoint_subsurfaces(ball, u, p, q, r)
}

/// Canonical form of a vertex cycle, for looking up images of loops.
pub fn canonical_loop(ball: &PantsGraphBall, vertices: Vec<usize>) -> Result<LoopInBall> {
    LoopInBall::from_vertices(ball, vertices.clone())?;
    Ok(canonical(ball, vertices))
}

/// Triangles through one edge of a ball.
#[derive(Clone, Debug, Serialize)]
pub struct EdgeTriangles {
    pub edge: usize,
    /// Third vertices, sorted.
    pub apexes: Vec<usize>,
    /// All curves of both completions lie within the weight bound and one
    /// endpoint is interior, so both apexes must be in the ball.
    pub certified: bool,
}

/// Third vertices of the triangles on each edge. The two completions of a
/// Farey edge are resolutions of the moving curves, so their weights are
/// bounded by the sum of the two; when that sum is within the weight bound
/// and an endpoint is interior, the ball must contain both apexes.
pub fn edge_triangles(ball: &PantsGraphBall, u: &Universe) -> Vec<EdgeTriangles> {
    ball.edges
        .par_iter()
        .enumerate()
        .map(|(k, e)| {
            let na = ball.neighbors(e.source);
            let nb = ball.neighbors(e.target);
            let mut apexes = Vec::new();
            let (mut i, mut j) = (0, 0);
            while i < na.len() && j < nb.len() {
                match na[i].0.cmp(&nb[j].0) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        let w = na[i].0;
                        let fixed = ball.curves(e.source).without(e.removed);
                        if ball.chart_members(&fixed).binary_search(&w).is_ok() {
                            apexes.push(w);
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
            let (a, b) = (u.curve(e.removed), u.curve(e.added));
            let fits = a.weights.iter().zip(&b.weights).all(|(x, y)| x + y <= u.weight_bound);
            let interior = !ball.is_frontier(e.source) || !ball.is_frontier(e.target);
            EdgeTriangles { edge: k, apexes, certified: fits && interior }
        })
        .collect()
}

/// Outcome of the half-square criterion on every pair of consecutive
/// moves `P → Q → R` on different curves with `Q` interior.
#[derive(Clone, Debug, Default, Serialize)]
pub struct HalfSquareSurvey {
    pub pairs: usize,
    pub partners: usize,
    /// Pairs where partner existence, `i(α₁′, α₂) = 0` and
    /// disjoint-subsurface position disagree: `(P, Q, R)`.
    pub disagreements: Vec<(usize, usize, usize)>,
}

pub fn half_square_survey(ball: &PantsGraphBall, u: &Universe) -> Result<HalfSquareSurvey> {
    let per_q: Vec<HalfSquareSurvey> = (0..ball.len())
        .into_par_iter()
        .filter(|&q| !ball.is_frontier(q))
        .map(|q| -> Result<HalfSquareSurvey> {
            let mut s = HalfSquareSurvey::default();
            let nb = ball.neighbors(q);
            for &(p, _) in nb {
                for &(r, _) in nb {
                    if p == r {
                        continue;
                    }
                    let (_, a2p) = ball.edge_label(p, q).unwrap();
                    let (a1, a1p) = ball.edge_label(q, r).unwrap();
                    if a1 == a2p {
                        continue;
                    }
                    s.pairs += 1;
                    let (a2, _) = ball.edge_label(p, q).unwrap();
                    let partner = half_square_partner(ball, u, p, q, r)?.is_some();
                    let disjoint = u.disjoint_pair(a1p, a2);
                    let subsurfaces = pants_adjacency(u, ball.curves(p))?.lie_on_disjoint_subsurfaces(a1, a2)?;
                    if partner {
                        s.partners += 1;
                    }
                    if partner != disjoint || partner != subsurfaces {
                        s.disagreements.push((p, q, r));
                    }
                }
            }
            Ok(s)
        })
        .collect::<Result<_>>()?;
    let mut out = HalfSquareSurvey::default();
    for s in per_q {
        out.pairs += s.pairs;
        out.partners += s.partners;
        out.disagreements.extend(s.disagreements);
    }
    out.disagreements.sort();
    Ok(out)
}
