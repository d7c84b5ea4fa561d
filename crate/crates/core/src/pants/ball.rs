use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::{chart_kind, elementary_moves, is_pants_decomposition, CurveId, PantsDecomposition, Universe};
use crate::error::{Error, Result};
use crate::farey::ChartKind;
use crate::surface::SurfaceId;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BallVertex {
    pub curves: PantsDecomposition,
    pub depth: u32,
    pub frontier: bool,
}

/// An elementary move: `removed` belongs to `source`, `added` to `target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BallEdge {
    pub source: usize,
    pub target: usize,
    pub removed: CurveId,
    pub added: CurveId,
}

/// A breadth-first ball of the pants graph inside a curve universe.
#[derive(Clone, Debug)]
pub struct PantsGraphBall {
    pub surface: SurfaceId,
    pub weight_bound: u32,
    pub radius: u32,
    pub vertices: Vec<BallVertex>,
    pub edges: Vec<BallEdge>,
    index: HashMap<PantsDecomposition, usize>,
    adj: Vec<Vec<(usize, usize)>>,
    charts: HashMap<Vec<CurveId>, (ChartKind, Vec<usize>)>,
}

pub fn build_ball(u: &Universe, seed: &PantsDecomposition, radius: u32) -> Result<PantsGraphBall> {
    if !is_pants_decomposition(u, &seed.0)? {
        return Err(Error::NotAPantsDecomposition);
    }
    let mut levels: Vec<Vec<PantsDecomposition>> = vec![vec![seed.clone()]];
    let mut seen: BTreeSet<PantsDecomposition> = BTreeSet::from([seed.clone()]);
    for _ in 0..radius {
        let next: Vec<Vec<PantsDecomposition>> = levels
            .last()
            .unwrap()
            .par_iter()
            .map(|p| -> Result<Vec<PantsDecomposition>> {
                let mut out = Vec::new();
                for &a in &p.0 {
                    out.extend(elementary_moves(u, p, a)?.moves.into_iter().map(|(_, q)| q));
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        let mut fresh: Vec<PantsDecomposition> = next.into_iter().flatten().filter(|q| !seen.contains(q)).collect();
        fresh.sort();
        fresh.dedup();
        seen.extend(fresh.iter().cloned());
        levels.push(fresh);
    }
    let mut vertices = Vec::new();
    for (d, level) in levels.into_iter().enumerate() {
        for p in level {
            vertices.push(BallVertex { curves: p, depth: d as u32, frontier: d as u32 == radius });
        }
    }
    assemble(u, vertices, radius)
}

/// The induced subgraph on given decompositions, all at depth 0 and none
/// on the frontier. Used to classify loops found outside a ball.
pub fn induced_subgraph(u: &Universe, decompositions: &[PantsDecomposition]) -> Result<PantsGraphBall> {
    let mut seen = BTreeSet::new();
    let mut vertices = Vec::new();
    for p in decompositions {
        if !is_pants_decomposition(u, &p.0)? {
            return Err(Error::NotAPantsDecomposition);
        }
        if seen.insert(p.clone()) {
            vertices.push(BallVertex { curves: p.clone(), depth: 0, frontier: false });
        }
    }
    assemble(u, vertices, 0)
}

/// A chart: its fixed curves, kind, members and edges.
type ChartGroup = (Vec<CurveId>, ChartKind, Vec<usize>, Vec<BallEdge>);

fn assemble(u: &Universe, vertices: Vec<BallVertex>, radius: u32) -> Result<PantsGraphBall> {
    let index: HashMap<PantsDecomposition, usize> =
        vertices.iter().enumerate().map(|(i, v)| (v.curves.clone(), i)).collect();

    // Two decompositions are adjacent only if they share n − 1 curves, so
    // group by each (n − 1)-subset and test the moving curves pairwise.
    let mut groups: BTreeMap<Vec<CurveId>, Vec<(usize, CurveId)>> = BTreeMap::new();
    for (i, v) in vertices.iter().enumerate() {
        for &a in &v.curves.0 {
            groups.entry(v.curves.without(a)).or_default().push((i, a));
        }
    }
    let results: Vec<ChartGroup> = groups
        .into_par_iter()
        .map(|(fixed, members)| -> Result<_> {
            let kind = chart_kind(u, &fixed, members[0].1)?;
            let m = kind.minimal_intersection() as u64;
            let mut es = Vec::new();
            for (x, &(i, a)) in members.iter().enumerate() {
                for &(j, b) in &members[x + 1..] {
                    if u.intersection(a, b) == m {
                        let (s, t, r, ad) = if i < j { (i, j, a, b) } else { (j, i, b, a) };
                        es.push(BallEdge { source: s, target: t, removed: r, added: ad });
                    }
                }
            }
            let ids = members.iter().map(|&(i, _)| i).collect();
            Ok((fixed, kind, ids, es))
        })
        .collect::<Result<_>>()?;
    let mut charts = HashMap::new();
    let mut edges = Vec::new();
    for (fixed, kind, ids, es) in results {
        charts.insert(fixed, (kind, ids));
        edges.extend(es);
    }
    edges.sort_by_key(|e| (e.source, e.target));
    let mut adj = vec![Vec::new(); vertices.len()];
    for (k, e) in edges.iter().enumerate() {
        adj[e.source].push((e.target, k));
        adj[e.target].push((e.source, k));
    }
    for a in &mut adj {
        a.sort();
    }
    Ok(PantsGraphBall { surface: u.surface, weight_bound: u.weight_bound, radius, vertices, edges, index, adj, charts })
}

#[derive(Serialize)]
struct BallJson<'a> {
    surface: SurfaceId,
    weight_bound: u32,
    radius: u32,
    curves: BTreeMap<CurveId, &'a [u32]>,
    vertices: Vec<VertexJson<'a>>,
    edges: &'a [BallEdge],
}

#[derive(Serialize)]
struct VertexJson<'a> {
    id: usize,
    curves: &'a PantsDecomposition,
    depth: u32,
    frontier: bool,
}

impl PantsGraphBall {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex_id(&self, p: &PantsDecomposition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn curves(&self, v: usize) -> &PantsDecomposition {
        &self.vertices[v].curves
    }

    pub fn is_frontier(&self, v: usize) -> bool {
        self.vertices[v].frontier
    }

    /// `(neighbour, edge index)`, sorted by neighbour.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search_by_key(&b, |&(n, _)| n).is_ok()
    }

    /// `(curve removed from a, curve added in b)` for an edge `ab`.
    pub fn edge_label(&self, a: usize, b: usize) -> Option<(CurveId, CurveId)> {
        let k = self.adj[a].binary_search_by_key(&b, |&(n, _)| n).ok()?;
        let e = &self.edges[self.adj[a][k].1];
        Some(if e.source == a { (e.removed, e.added) } else { (e.added, e.removed) })
    }

    /// Chart type of the complement of `fixed` when the ball saw it.
    pub fn chart_kind(&self, fixed: &[CurveId]) -> Option<ChartKind> {
        self.charts.get(fixed).map(|c| c.0)
    }

    /// Ball vertices containing all of `fixed` (n − 1 curves), sorted.
    pub fn chart_members(&self, fixed: &[CurveId]) -> &[usize] {
        self.charts.get(fixed).map_or(&[], |c| c.1.as_slice())
    }

    pub fn depth(&self, v: usize) -> u32 {
        self.vertices[v].depth
    }

    /// Curves used by some vertex, sorted.
    pub fn curve_ids(&self) -> Vec<CurveId> {
        let set: BTreeSet<CurveId> = self.vertices.iter().flat_map(|v| v.curves.0.iter().copied()).collect();
        set.into_iter().collect()
    }

    pub fn to_json(&self, u: &Universe) -> serde_json::Value {
        let curves = self.curve_ids().into_iter().map(|c| (c, u.curve(c).weights.as_slice())).collect();
        let vertices = self
            .vertices
            .iter()
            .enumerate()
            .map(|(id, v)| VertexJson { id, curves: &v.curves, depth: v.depth, frontier: v.frontier })
            .collect();
        serde_json::to_value(BallJson {
            surface: self.surface,
            weight_bound: self.weight_bound,
            radius: self.radius,
            curves,
            vertices,
            edges: &self.edges,
        })
        .expect("ball serializes")
    }

    /// Graphviz export; edges are labelled `removed→added`.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph pants {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let shape = if v.frontier { ", style=dashed" } else { "" };
            let _ = writeln!(s, "  v{i} [label=\"{}\"{shape}];", v.curves);
        }
        for e in &self.edges {
            let _ = writeln!(s, "  v{} -- v{} [label=\"{}→{}\"];", e.source, e.target, e.removed, e.added);
        }
        s.push_str("}\n");
        s
    }
}
