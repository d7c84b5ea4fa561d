//! Marked Farey charts as stand-ins for curves, the loops that carry a
//! chart's curve label across moves of other curves, and equivariance of
//! the chart-label correspondence under mapping classes.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::farey::ChartKind;
use crate::loops::{canonical_loop, classify_small_loop, is_alternating, CellInventory, LoopClassification};
use crate::pants::{
    chart_kind, induced_subgraph, pants_adjacency, CurveId, PantsDecomposition, PantsGraphBall, Subsurface, Universe,
};
use crate::surface::{separation_data, Generator, MappingClassWord, SurfaceGroup, Traced};

/// The Farey graph of decompositions containing `fixed`, marked at one of
/// them; its curve label is the marked vertex's moving curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MarkedFareyChart {
    pub fixed: Vec<CurveId>,
    pub kind: ChartKind,
    /// Ball vertices containing `fixed`, sorted.
    pub vertices: Vec<usize>,
    pub marked: usize,
    pub curve: CurveId,
}

pub fn farey_chart(ball: &PantsGraphBall, p: usize, a: CurveId) -> Result<MarkedFareyChart> {
    let pd = ball.curves(p);
    if !pd.contains(a) {
        return Err(Error::CurveNotInDecomposition);
    }
    let fixed = pd.without(a);
    let kind = ball.chart_kind(&fixed).ok_or_else(|| Error::Data(format!("chart {fixed:?} not seen by the ball")))?;
    Ok(MarkedFareyChart { vertices: ball.chart_members(&fixed).to_vec(), fixed, kind, marked: p, curve: a })
}

#[derive(Clone, Debug, Serialize)]
pub struct ChartIntersection {
    pub common: Vec<usize>,
    /// The union of the fixed curves is a ball vertex.
    pub extendable: bool,
    pub labels_disjoint: bool,
    pub shares_marked_point: bool,
    pub consistent: bool,
}

/// Intersection of two charts of one ball: a whole chart when the fixed
/// curves agree, otherwise at most the single decomposition made of both
/// fixed sets. Charts marked at a common vertex meet exactly there.
pub fn chart_intersection_properties(
    ball: &PantsGraphBall,
    u: &Universe,
    v: &MarkedFareyChart,
    w: &MarkedFareyChart,
) -> ChartIntersection {
    let wset: BTreeSet<usize> = w.vertices.iter().copied().collect();
    let common: Vec<usize> = v.vertices.iter().copied().filter(|x| wset.contains(x)).collect();
    let mut union: Vec<CurveId> = v.fixed.iter().chain(&w.fixed).copied().collect();
    union.sort();
    union.dedup();
    let extendable = ball.vertex_id(&PantsDecomposition(union)).is_some();
    let labels_disjoint = v.curve != w.curve && u.disjoint_pair(v.curve, w.curve);
    let shares_marked_point = v.marked == w.marked;
    let consistent = if v.fixed == w.fixed {
        common == v.vertices
    } else {
        (common.len() == 1) == extendable
            && common.len() <= 1
            && (!shares_marked_point || (labels_disjoint && common == [v.marked]))
    };
    ChartIntersection { common, extendable, labels_disjoint, shares_marked_point, consistent }
}

/// The `n` charts through `p`, one per curve, meet only in `p`.
pub fn charts_meet_only_at(ball: &PantsGraphBall, p: usize) -> Result<bool> {
    let mut common: Option<BTreeSet<usize>> = None;
    for &a in &ball.curves(p).0 {
        let c: BTreeSet<usize> = farey_chart(ball, p, a)?.vertices.into_iter().collect();
        common = Some(match common {
            None => c,
            Some(prev) => prev.intersection(&c).copied().collect(),
        });
    }
    Ok(common.is_some_and(|c| c.len() == 1 && c.contains(&p)))
}

/// Relative position of the fixed curve and the moving curve of a move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LoopCase {
    DisjointSubsurfaces,
    FiveHoledSphere,
    TwiceHoledTorus,
}

impl LoopCase {
    pub fn expected(self) -> LoopClassification {
        match self {
            LoopCase::DisjointSubsurfaces => LoopClassification::AlternatingSquare,
            LoopCase::FiveHoledSphere => LoopClassification::AlternatingPentagon,
            LoopCase::TwiceHoledTorus => LoopClassification::AlmostAlternatingHexagon,
        }
    }
}

/// A small loop `W X X′ Y …` carrying the chart label of `α₁` across the
/// move `X → X′`: both `W → X` and `X′ → Y` move `α₁`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WellDefinednessLoop {
    pub case: LoopCase,
    pub vertices: Vec<PantsDecomposition>,
    pub tag: LoopClassification,
    pub alternating_wxxy: bool,
}

impl WellDefinednessLoop {
    /// Label of the chart at `X`: the curve `W → X` brings in.
    pub fn label_at_x(&self) -> Option<CurveId> {
        self.vertices[1].difference(&self.vertices[0]).map(|(added, _)| added)
    }

    /// Label of the chart at `X′`: the curve `X′ → Y` moves.
    pub fn label_at_xp(&self) -> Option<CurveId> {
        self.vertices[2].difference(&self.vertices[3]).map(|(removed, _)| removed)
    }
}

/// `(removed, added)` when `q` is an elementary move of `p`.
pub fn move_between(
    u: &Universe,
    p: &PantsDecomposition,
    q: &PantsDecomposition,
) -> Result<Option<(CurveId, CurveId)>> {
    let Some((a, b)) = p.difference(q) else {
        return Ok(None);
    };
    let fixed = p.without(a);
    if !fixed.iter().all(|&f| u.disjoint_pair(f, b)) {
        return Ok(None);
    }
    let m = chart_kind(u, &fixed, a)?.minimal_intersection() as u64;
    Ok((u.intersection(a, b) == m).then_some((a, b)))
}

fn separating(u: &Universe, c: CurveId) -> Result<bool> {
    Ok(separation_data(u.tri, u.curve(c))?.separating)
}

fn move_span(u: &Universe, x: &PantsDecomposition, a1: CurveId, a2: CurveId) -> Result<Option<Subsurface>> {
    pants_adjacency(u, x)?.span(&[a1, a2])
}

/// A move `α₂ → α₂′` beside `α₁` on a twice-holed torus chart with all
/// three curves nonseparating; no small loop carries the label across it.
pub fn is_illegal_move(u: &Universe, x: &PantsDecomposition, xp: &PantsDecomposition, a1: CurveId) -> Result<bool> {
    let (a2, a2p) = move_between(u, x, xp)?.ok_or(Error::NotAPath)?;
    if a1 == a2 || !x.contains(a1) {
        return Err(Error::CurveNotInDecomposition);
    }
    if move_span(u, x, a1, a2)? != Some(Subsurface { genus: 1, holes: 2 }) {
        return Ok(false);
    }
    Ok(!separating(u, a1)? && !separating(u, a2)? && !separating(u, a2p)?)
}

struct LocalSearch<'a> {
    u: &'a Universe,
    kinds: HashMap<Vec<CurveId>, ChartKind>,
}

impl<'a> LocalSearch<'a> {
    fn kind(&mut self, fixed: &[CurveId], a: CurveId) -> Result<ChartKind> {
        if let Some(&k) = self.kinds.get(fixed) {
            return Ok(k);
        }
        let k = chart_kind(self.u, fixed, a)?;
        self.kinds.insert(fixed.to_vec(), k);
        Ok(k)
    }

    /// Moves of `a` in `p`, lightest first.
    fn moves(&mut self, p: &PantsDecomposition, a: CurveId) -> Result<Vec<PantsDecomposition>> {
        let fixed = p.without(a);
        let m = self.kind(&fixed, a)?.minimal_intersection();
        let row = self.u.intersection_row(a);
        let cand = crate::pants::candidates(self.u, &fixed);
        Ok(cand.into_iter().filter(|&c| c != a && row[c as usize] == m).map(|c| p.swap(a, c)).collect())
    }

    fn neighbors(&mut self, p: &PantsDecomposition, moving: &[CurveId]) -> Result<Vec<PantsDecomposition>> {
        let mut out = Vec::new();
        for &a in moving {
            if p.contains(a) {
                out.extend(self.moves(p, a)?);
            }
        }
        Ok(out)
    }

    fn adjacent(&mut self, p: &PantsDecomposition, q: &PantsDecomposition) -> Result<bool> {
        let Some((a, b)) = p.difference(q) else {
            return Ok(false);
        };
        let fixed = p.without(a);
        if self.u.intersection_row(a)[b as usize] != self.kind(&fixed, a)?.minimal_intersection() {
            return Ok(false);
        }
        Ok(fixed.iter().all(|&f| self.u.disjoint_pair(f, b)))
    }
}

/// Finds the small loop `W X X′ Y …` of the predicted type for the move
/// `X → X′` and the fixed curve `α₁`.
pub fn find_welldefinedness_loop(
    u: &Universe,
    x: &PantsDecomposition,
    xp: &PantsDecomposition,
    a1: CurveId,
) -> Result<WellDefinednessLoop> {
    let (a2, _) = move_between(u, x, xp)?.ok_or(Error::NotAPath)?;
    if a1 == a2 || !x.contains(a1) || !xp.contains(a1) {
        return Err(Error::CurveNotInDecomposition);
    }
    if is_illegal_move(u, x, xp, a1)? {
        return Err(Error::IllegalMove);
    }
    let case = match move_span(u, x, a1, a2)? {
        None => LoopCase::DisjointSubsurfaces,
        Some(Subsurface { genus: 0, holes: 5 }) => LoopCase::FiveHoledSphere,
        Some(Subsurface { genus: 1, holes: 2 }) => LoopCase::TwiceHoledTorus,
        Some(s) => return Err(Error::Data(format!("move spans an unexpected subsurface {s}"))),
    };
    let mut search = LocalSearch { u, kinds: HashMap::new() };
    // Curves every loop vertex keeps.
    let kept: Vec<CurveId> = x.common(xp).into_iter().filter(|&c| c != a1).collect();
    let ws = search.moves(x, a1)?;
    let ys = search.moves(xp, a1)?;
    for w in &ws {
        for y in &ys {
            if w == y || w == xp || y == x {
                continue;
            }
            // Close the path Y → … → W with 1, 2 or 3 more edges.
            let closings: Vec<Vec<PantsDecomposition>> = match case {
                LoopCase::DisjointSubsurfaces => {
                    if search.adjacent(y, w)? {
                        vec![vec![]]
                    } else {
                        vec![]
                    }
                }
                LoopCase::FiveHoledSphere => {
                    let mut out = Vec::new();
                    for z in search.neighbors(y, &y.without_all(&kept))? {
                        if &z != w && search.adjacent(&z, w)? {
                            out.push(vec![z]);
                        }
                    }
                    out
                }
                LoopCase::TwiceHoledTorus => {
                    let mut out = Vec::new();
                    let wn = search.neighbors(w, &w.without_all(&kept))?;
                    for z in search.neighbors(y, &y.without_all(&kept))? {
                        if [x, xp, w].contains(&&z) {
                            continue;
                        }
                        for a in &wn {
                            if a == &z || [x, xp, y].contains(&a) {
                                continue;
                            }
                            if search.adjacent(&z, a)? {
                                out.push(vec![z.clone(), a.clone()]);
                            }
                        }
                    }
                    out
                }
            };
            for tail in closings {
                let mut vertices = vec![w.clone(), x.clone(), xp.clone(), y.clone()];
                vertices.extend(tail);
                if let Some(found) = check_loop(u, case, vertices)? {
                    return Ok(found);
                }
            }
        }
    }
    Err(Error::NotCertified)
}

fn check_loop(u: &Universe, case: LoopCase, vertices: Vec<PantsDecomposition>) -> Result<Option<WellDefinednessLoop>> {
    let g = induced_subgraph(u, &vertices)?;
    if g.len() != vertices.len() {
        return Ok(None);
    }
    let ids: Vec<usize> = vertices.iter().map(|v| g.vertex_id(v).unwrap()).collect();
    let Ok(l) = canonical_loop(&g, ids.clone()) else {
        return Ok(None);
    };
    let tag = classify_small_loop(&g, u, &l)?;
    if tag != case.expected() {
        return Ok(None);
    }
    let alternating_wxxy = is_alternating(&g, &ids[..4])?;
    if !alternating_wxxy {
        return Ok(None);
    }
    Ok(Some(WellDefinednessLoop { case, vertices, tag, alternating_wxxy }))
}

/// For an illegal move `X → X′`, every `P″ = X` with `α₂ → α₂″`, `α₂″`
/// separating, adjacent to both `X` and `X′`.
pub fn circumvent_illegal_move(
    u: &Universe,
    x: &PantsDecomposition,
    xp: &PantsDecomposition,
    a1: CurveId,
) -> Result<Vec<PantsDecomposition>> {
    if !is_illegal_move(u, x, xp, a1)? {
        return Err(Error::NotIllegal);
    }
    let (a2, _) = move_between(u, x, xp)?.ok_or(Error::NotAPath)?;
    let mut search = LocalSearch { u, kinds: HashMap::new() };
    let mut out = Vec::new();
    for p in search.moves(x, a2)? {
        let (_, a2pp) = x.difference(&p).unwrap();
        if separating(u, a2pp)? && search.adjacent(&p, xp)? {
            out.push(p);
        }
    }
    Ok(out)
}

/// Partial action of mapping classes on the curves of a universe, with
/// single-generator tables and direct computation when a word leaves the
/// universe midway.
pub struct CurveAction<'a> {
    u: &'a Universe,
    group: &'static SurfaceGroup,
    tables: BTreeMap<Generator, Vec<Option<CurveId>>>,
}

impl<'a> CurveAction<'a> {
    pub fn new(u: &'a Universe) -> Result<Self> {
        let group = SurfaceGroup::get(u.surface)?;
        let mut tables = BTreeMap::new();
        for g in group.generators() {
            let t: Vec<Option<CurveId>> = u
                .ids()
                .collect::<Vec<_>>()
                .par_iter()
                .map(|&c| -> Result<Option<CurveId>> { Ok(u.id_of(&group.apply_one(g, u.traced(c)?)?.curve)) })
                .collect::<Result<_>>()?;
            tables.insert(g, t);
        }
        Ok(CurveAction { u, group, tables })
    }

    pub fn generators(&self) -> Vec<Generator> {
        self.tables.keys().copied().collect()
    }

    pub fn apply(&self, w: &MappingClassWord, c: CurveId) -> Result<Option<CurveId>> {
        let mut cur = c;
        for (k, &g) in w.0.iter().enumerate().rev() {
            let table = self.tables.get(&g).ok_or_else(|| Error::UnknownGenerator(g.to_string()))?;
            match table[cur as usize] {
                Some(n) => cur = n,
                None => {
                    let rest = MappingClassWord(w.0[..=k].to_vec());
                    let t: Traced = self.group.apply(&rest, self.u.traced(cur)?)?;
                    return Ok(self.u.id_of(&t.curve));
                }
            }
        }
        Ok(Some(cur))
    }

    /// Freely reduced words of length at most `max_len`, shortest first;
    /// the reflection counts as its own inverse.
    pub fn words(&self, max_len: usize) -> Vec<MappingClassWord> {
        let gens = self.generators();
        let mut out = vec![MappingClassWord::default()];
        let mut frontier = vec![MappingClassWord::default()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for &g in &gens {
                    if w.0.last().is_some_and(|&h| h.inverse() == g) {
                        continue;
                    }
                    let mut v = w.0.clone();
                    v.push(g);
                    next.push(MappingClassWord(v));
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

/// A vertex map of a ball induced by a mapping class; `None` where an image
/// curve leaves the universe or an image decomposition leaves the ball.
#[derive(Clone, Debug, Serialize)]
pub struct InducedAutomorphism {
    pub word: MappingClassWord,
    pub curve_map: BTreeMap<CurveId, Option<CurveId>>,
    pub vertex_map: Vec<Option<usize>>,
}

pub fn induced_automorphism(
    action: &CurveAction,
    ball: &PantsGraphBall,
    w: &MappingClassWord,
) -> Result<InducedAutomorphism> {
    let curves = ball.curve_ids();
    let images: Vec<Option<CurveId>> = curves.par_iter().map(|&c| action.apply(w, c)).collect::<Result<_>>()?;
    let curve_map: BTreeMap<CurveId, Option<CurveId>> = curves.into_iter().zip(images).collect();
    let vertex_map = (0..ball.len())
        .map(|v| {
            let img: Option<Vec<CurveId>> = ball.curves(v).0.iter().map(|c| curve_map[c]).collect();
            img.and_then(|i| ball.vertex_id(&PantsDecomposition::new(i)))
        })
        .collect();
    Ok(InducedAutomorphism { word: w.clone(), curve_map, vertex_map })
}

/// What a vertex map preserves, restricted to where it is defined.
#[derive(Clone, Debug, Default, Serialize)]
pub struct MapReport {
    pub defined_vertices: usize,
    pub edges_checked: usize,
    pub cells_checked: usize,
    pub charts_checked: usize,
    /// Vertex pairs whose adjacency is not preserved, or two vertices
    /// with one image.
    pub edge_violations: Vec<(usize, usize)>,
    /// Canonical vertex sequences of cells whose image is not a cell of
    /// the same tag.
    pub cell_violations: Vec<Vec<usize>>,
    pub chart_violations: Vec<usize>,
}

impl MapReport {
    pub fn passed(&self) -> bool {
        self.edge_violations.is_empty() && self.cell_violations.is_empty() && self.chart_violations.is_empty()
    }
}

/// Checks that a partial vertex bijection preserves adjacency both ways,
/// the tag of every certified cell and the chart of every move, using
/// nothing but the graph.
pub fn check_vertex_map(ball: &PantsGraphBall, cells: &CellInventory, map: &[Option<usize>]) -> MapReport {
    let mut r = MapReport::default();
    let defined: Vec<usize> = (0..ball.len()).filter(|&v| map[v].is_some()).collect();
    r.defined_vertices = defined.len();
    let mut seen: HashMap<usize, usize> = HashMap::new();
    for &v in &defined {
        if let Some(prev) = seen.insert(map[v].unwrap(), v) {
            r.edge_violations.push((prev, v));
        }
    }
    for &v in &defined {
        for &(w, _) in ball.neighbors(v) {
            if w > v {
                if let Some(iw) = map[w] {
                    r.edges_checked += 1;
                    if !ball.has_edge(map[v].unwrap(), iw) {
                        r.edge_violations.push((v, w));
                    }
                }
            }
        }
    }
    // Non-edges among neighbours' images: an edge appearing from nowhere.
    for &v in &defined {
        let iv = map[v].unwrap();
        for &(iw, _) in ball.neighbors(iv) {
            if let Some(&w) = seen.get(&iw) {
                if !ball.has_edge(v, w) {
                    r.edge_violations.push((v.min(w), v.max(w)));
                }
            }
        }
    }
    r.edge_violations.sort();
    r.edge_violations.dedup();
    for (vs, tag) in &cells.tags {
        if vs.iter().any(|&v| ball.is_frontier(v)) {
            continue;
        }
        let Some(img) = vs.iter().map(|&v| map[v]).collect::<Option<Vec<usize>>>() else {
            continue;
        };
        if img.iter().any(|&v| ball.is_frontier(v)) {
            continue;
        }
        r.cells_checked += 1;
        let same = canonical_loop(ball, img)
            .ok()
            .and_then(|l| cells.tags.get(&l.vertices))
            .is_some_and(|t| t.tag() == tag.tag());
        if !same {
            r.cell_violations.push(vs.clone());
        }
    }
    // A Farey chart (triangle-connected class of edges at a vertex) must go
    // to a chart: two neighbours of v in one chart stay in one chart.
    for &v in &defined {
        if ball.is_frontier(v) {
            continue;
        }
        for &a in &ball.curves(v).0 {
            let members = ball.chart_members(&ball.curves(v).without(a));
            let imgs: Vec<usize> = members.iter().filter_map(|&x| map[x]).collect();
            if imgs.len() < 2 {
                continue;
            }
            r.charts_checked += 1;
            let shared = imgs[1..]
                .iter()
                .fold(ball.curves(imgs[0]).0.clone(), |acc, &x| ball.curves(x).common(&PantsDecomposition(acc)));
            if shared.len() + 1 != ball.surface.complexity() {
                r.chart_violations.push(v);
                break;
            }
        }
    }
    r
}

/// Well-definedness loops (or detours around illegal moves) for every
/// interior edge and every curve kept by it.
#[derive(Clone, Debug, Default, Serialize)]
pub struct LoopAtlas {
    pub instances: usize,
    pub by_case: BTreeMap<String, usize>,
    pub illegal: usize,
    /// Illegal moves with the number of separating detours found.
    pub detours: Vec<((usize, usize, CurveId), usize)>,
    /// Instances where no loop of the predicted type was found.
    pub missing: Vec<(usize, usize, CurveId)>,
    /// Certified instances (see [`instance_certified`]) and those of them
    /// missing a loop or a second detour.
    pub certified: usize,
    pub certified_by_case: BTreeMap<String, usize>,
    pub certified_illegal: usize,
    pub certified_missing: Vec<(usize, usize, CurveId)>,
    /// Loops whose type or alternation is off.
    pub bad: Vec<(usize, usize, CurveId)>,
    #[serde(skip)]
    pub loops: BTreeMap<(usize, usize, CurveId), Transport>,
}

#[derive(Clone, Debug)]
pub enum Transport {
    Loop(WellDefinednessLoop),
    /// Two legal moves through `P″`, each with its loop.
    Detour(Box<[WellDefinednessLoop; 2]>),
}

impl Transport {
    /// Every decomposition the transport passes through.
    pub fn decompositions(&self) -> Vec<&PantsDecomposition> {
        match self {
            Transport::Loop(l) => l.vertices.iter().collect(),
            Transport::Detour(ls) => ls.iter().flat_map(|l| l.vertices.iter()).collect(),
        }
    }

    fn loops(&self) -> Vec<&WellDefinednessLoop> {
        match self {
            Transport::Loop(l) => vec![l],
            Transport::Detour(ls) => ls.iter().collect(),
        }
    }
}

/// A move instance is certified when the componentwise sum of the weights
/// of all curves of `X ∪ X′` is within the weight bound, doubled on genus
/// one: hexagon and detour curves arise by a second surgery there. The
/// universe then holds every curve the search needs.
pub fn instance_certified(u: &Universe, x: &PantsDecomposition, xp: &PantsDecomposition) -> bool {
    let mut sum = vec![0u32; u.tri.edge_count];
    let mut all: Vec<CurveId> = x.0.iter().chain(&xp.0).copied().collect();
    all.sort();
    all.dedup();
    for c in all {
        for (s, w) in sum.iter_mut().zip(&u.curve(c).weights) {
            *s += w;
        }
    }
    let factor = if u.surface.genus == 0 { 1 } else { 2 };
    sum.iter().all(|&s| factor * s <= u.weight_bound)
}

type InstanceOutcome = ((usize, usize, CurveId), std::result::Result<Transport, Error>, usize);

pub fn loop_atlas(ball: &PantsGraphBall, u: &Universe) -> Result<LoopAtlas> {
    let mut jobs = Vec::new();
    for e in &ball.edges {
        if ball.is_frontier(e.source) || ball.is_frontier(e.target) {
            continue;
        }
        for a1 in ball.curves(e.source).without(e.removed) {
            jobs.push((e.source, e.target, a1));
        }
    }
    let results: Vec<InstanceOutcome> = jobs
        .par_iter()
        .map(|&(s, t, a1)| {
            let (x, xp) = (ball.curves(s), ball.curves(t));
            let (res, detours) = match is_illegal_move(u, x, xp, a1) {
                Err(e) => (Err(e), 0),
                Ok(false) => (find_welldefinedness_loop(u, x, xp, a1).map(Transport::Loop), 0),
                Ok(true) => match circumvent_illegal_move(u, x, xp, a1) {
                    Err(e) => (Err(e), 0),
                    Ok(mids) => {
                        let n = mids.len();
                        let res = match mids.first() {
                            None => Err(Error::NotCertified),
                            Some(m) => find_welldefinedness_loop(u, x, m, a1).and_then(|l1| {
                                let l2 = find_welldefinedness_loop(u, m, xp, a1)?;
                                Ok(Transport::Detour(Box::new([l1, l2])))
                            }),
                        };
                        (res, n)
                    }
                },
            };
            ((s, t, a1), res, detours)
        })
        .collect();
    let mut atlas = LoopAtlas::default();
    for (key, res, detours) in results {
        atlas.instances += 1;
        let cert = instance_certified(u, ball.curves(key.0), ball.curves(key.1));
        if cert {
            atlas.certified += 1;
            if res.is_err() || (detours > 0 && detours != 2) {
                atlas.certified_missing.push(key);
            }
        }
        let illegal = matches!(res, Ok(Transport::Detour(_))) || detours > 0;
        if illegal {
            atlas.illegal += 1;
            atlas.certified_illegal += usize::from(cert);
            atlas.detours.push((key, detours));
        }
        match res {
            Ok(t) => {
                for l in t.loops() {
                    let case = format!("{:?}", l.case);
                    if cert {
                        *atlas.certified_by_case.entry(case.clone()).or_default() += 1;
                    }
                    *atlas.by_case.entry(case).or_default() += 1;
                    if !l.alternating_wxxy || l.tag != l.case.expected() {
                        atlas.bad.push(key);
                    }
                }
                atlas.loops.insert(key, t);
            }
            Err(Error::NotCertified) => atlas.missing.push(key),
            Err(e) => return Err(e),
        }
    }
    Ok(atlas)
}

/// Result of the chart-label checks for one mapping class.
#[derive(Clone, Debug, Default, Serialize)]
pub struct PhiReport {
    pub word: String,
    pub map: MapReport,
    pub charts_checked: usize,
    /// `(vertex, curve)` of charts whose image label is not `w·c`.
    pub label_violations: Vec<(usize, CurveId)>,
    pub transports_checked: usize,
    pub transport_violations: Vec<(usize, usize, CurveId)>,
    /// Components of the chart-adjacency graphs compared by spanning tree.
    pub components: usize,
    pub tree_violations: Vec<(usize, CurveId)>,
}

impl PhiReport {
    pub fn passed(&self) -> bool {
        self.map.passed()
            && self.label_violations.is_empty()
            && self.transport_violations.is_empty()
            && self.tree_violations.is_empty()
    }
}

fn image(action: &CurveAction, w: &MappingClassWord, p: &PantsDecomposition) -> Result<Option<PantsDecomposition>> {
    let mut out = Vec::with_capacity(p.0.len());
    for &c in &p.0 {
        match action.apply(w, c)? {
            Some(i) => out.push(i),
            None => return Ok(None),
        }
    }
    Ok(Some(PantsDecomposition::new(out)))
}

/// Image chart label read from the graph: the marked image vertex minus
/// the curves shared by the images of the chart's vertices.
fn image_label(ball: &PantsGraphBall, a: &InducedAutomorphism, chart: &MarkedFareyChart) -> Option<CurveId> {
    let marked = a.vertex_map[chart.marked]?;
    let imgs: Vec<usize> = chart.vertices.iter().filter_map(|&v| a.vertex_map[v]).collect();
    if imgs.len() < 2 {
        return None;
    }
    let shared =
        imgs.iter().fold(ball.curves(marked).0.clone(), |acc, &x| ball.curves(x).common(&PantsDecomposition(acc)));
    match ball.curves(marked).without_all(&shared)[..] {
        [c] => Some(c),
        _ => None,
    }
}

/// Checks the chart-label correspondence for the automorphism induced by
/// `w`: image labels, transport along the atlas loops, and spanning-tree
/// path independence of the transported labels.
pub fn verify_phi(
    action: &CurveAction,
    ball: &PantsGraphBall,
    cells: &CellInventory,
    atlas: &LoopAtlas,
    w: &MappingClassWord,
) -> Result<PhiReport> {
    let a = induced_automorphism(action, ball, w)?;
    let mut r =
        PhiReport { word: w.to_string(), map: check_vertex_map(ball, cells, &a.vertex_map), ..Default::default() };
    // (i) image labels of interior marked charts.
    let mut label: HashMap<(usize, CurveId), CurveId> = HashMap::new();
    for v in 0..ball.len() {
        if ball.is_frontier(v) {
            continue;
        }
        for &c in &ball.curves(v).0 {
            let chart = farey_chart(ball, v, c)?;
            let Some(l) = image_label(ball, &a, &chart) else {
                continue;
            };
            r.charts_checked += 1;
            if a.curve_map.get(&c).copied().flatten() != Some(l) {
                r.label_violations.push((v, c));
            }
            label.insert((v, c), l);
        }
    }
    // (ii) transport across each atlas loop, read from the image loop.
    let mut adj: HashMap<(usize, CurveId), Vec<usize>> = HashMap::new();
    for (&(s, t, a1), tr) in &atlas.loops {
        adj.entry((s, a1)).or_default().push(t);
        adj.entry((t, a1)).or_default().push(s);
        let (Some(&ls), Some(&lt)) = (label.get(&(s, a1)), label.get(&(t, a1))) else {
            continue;
        };
        let mut carried = Some(ls);
        for l in tr.loops() {
            let imgs: Option<Vec<PantsDecomposition>> =
                l.vertices.iter().map(|p| image(action, w, p)).collect::<Result<Option<_>>>()?;
            let Some(imgs) = imgs else {
                carried = None;
                break;
            };
            let at_x = imgs[1].difference(&imgs[0]).map(|(added, _)| added);
            let at_xp = imgs[2].difference(&imgs[3]).map(|(removed, _)| removed);
            if at_x != carried {
                carried = None;
                r.transport_violations.push((s, t, a1));
                break;
            }
            carried = at_xp;
        }
        if carried.is_some() {
            r.transports_checked += 1;
            if carried != Some(lt) {
                r.transport_violations.push((s, t, a1));
            }
        }
    }
    // Spanning trees of each curve's chart-adjacency graph.
    let mut visited: BTreeSet<(usize, CurveId)> = BTreeSet::new();
    let mut keys: Vec<(usize, CurveId)> = label.keys().copied().collect();
    keys.sort();
    for root in keys {
        if !visited.insert(root) {
            continue;
        }
        r.components += 1;
        let root_label = label[&root];
        let mut queue = VecDeque::from([root]);
        while let Some((v, c)) = queue.pop_front() {
            if label.get(&(v, c)) != Some(&root_label) {
                r.tree_violations.push((v, c));
            }
            for &n in adj.get(&(v, c)).map_or(&[][..], |x| x.as_slice()) {
                if label.contains_key(&(n, c)) && visited.insert((n, c)) {
                    queue.push_back((n, c));
                }
            }
        }
    }
    r.label_violations.sort();
    r.transport_violations.sort();
    r.transport_violations.dedup();
    r.tree_violations.sort();
    Ok(r)
}

/// Label maps `c ↦ φ(A_w)(c)` for several words, compared on composites.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CompositionReport {
    pub words: usize,
    pub checks: usize,
    /// `(u, v, curve)` with `φ(uv)(c) ≠ φ(u)(φ(v)(c))`.
    pub violations: Vec<(String, String, CurveId)>,
    /// `(w, curve)` where `φ(w)` disagrees with the surface action of `w`.
    pub action_violations: Vec<(String, CurveId)>,
}

/// Chart-read label map of the automorphism induced by `w`.
pub fn label_map(
    action: &CurveAction,
    ball: &PantsGraphBall,
    w: &MappingClassWord,
) -> Result<BTreeMap<CurveId, CurveId>> {
    let a = induced_automorphism(action, ball, w)?;
    let mut out = BTreeMap::new();
    for v in 0..ball.len() {
        if ball.is_frontier(v) {
            continue;
        }
        for &c in &ball.curves(v).0 {
            if out.contains_key(&c) {
                continue;
            }
            if let Some(l) = image_label(ball, &a, &farey_chart(ball, v, c)?) {
                out.insert(c, l);
            }
        }
    }
    Ok(out)
}

/// `φ(uv) = φ(u)∘φ(v)` for every split of every word, and `φ∘ψ` acting as
/// the word itself on curves.
pub fn verify_composition(
    action: &CurveAction,
    ball: &PantsGraphBall,
    words: &[MappingClassWord],
) -> Result<CompositionReport> {
    let group = SurfaceGroup::get(ball.surface)?;
    let u = action.u;
    let maps: BTreeMap<&MappingClassWord, BTreeMap<CurveId, CurveId>> =
        words.par_iter().map(|w| Ok((w, label_map(action, ball, w)?))).collect::<Result<_>>()?;
    let mut r = CompositionReport { words: words.len(), ..Default::default() };
    for (w, m) in &maps {
        for (&c, &l) in m {
            let direct = group.apply(w, u.traced(c)?)?;
            if direct.curve != *u.curve(l) {
                r.action_violations.push((w.to_string(), c));
            }
        }
        for k in 1..w.0.len() {
            let uw = MappingClassWord(w.0[..k].to_vec());
            let vw = MappingClassWord(w.0[k..].to_vec());
            let (Some(mu), Some(mv)) = (maps.get(&uw), maps.get(&vw)) else {
                continue;
            };
            for (&c, &l) in m {
                let Some(&lv) = mv.get(&c) else { continue };
                let Some(&luv) = mu.get(&lv) else { continue };
                r.checks += 1;
                if luv != l {
                    r.violations.push((uw.to_string(), vw.to_string(), c));
                }
            }
        }
    }
    Ok(r)
}
