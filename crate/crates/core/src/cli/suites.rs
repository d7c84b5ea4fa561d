//! Verification suites shared by `verify` and the acceptance run.

use std::collections::BTreeMap;

use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bridge::{
    charts_meet_only_at, instance_certified, loop_atlas, verify_composition, verify_phi, CurveAction, LoopAtlas,
};
use crate::error::Result;
use crate::farey::{
    is_farey_edge, normalize_slope, quadrilateral_orbit, slope_association, slope_intersection, slopes_within,
    triangle_completions, Association, ChartKind, Slope,
};
use crate::loops::{detect_cells, edge_triangles, half_square_survey, CellInventory, LoopInBall};
use crate::pants::{build_ball, standard_seed, CurveId, PantsGraphBall, Universe};
use crate::surface::{
    curve_slope, enumerate_curves, geometric_intersection, separation_data, slope_curve, standard_triangulation,
    SurfaceId, Traced,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Farey,
    Charts,
    Squares,
    Pentagons,
    Hexagons,
    SmallLoops,
    Phi,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] =
        [Suite::Farey, Suite::Charts, Suite::Squares, Suite::Pentagons, Suite::Hexagons, Suite::SmallLoops, Suite::Phi];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Farey => "farey",
            Suite::Charts => "charts",
            Suite::Squares => "squares",
            Suite::Pentagons => "pentagons",
            Suite::Hexagons => "hexagons",
            Suite::SmallLoops => "small-loops",
            Suite::Phi => "phi",
            Suite::All => "all",
        }
    }
}

/// Association assigned to each parity class `(p mod 2, q mod 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AssociationTable {
    pub even_odd: Association,
    pub odd_even: Association,
    pub odd_odd: Association,
}

impl Default for AssociationTable {
    fn default() -> Self {
        AssociationTable {
            even_odd: slope_association(Slope::ZERO),
            odd_even: slope_association(Slope::INFINITY),
            odd_odd: slope_association(normalize_slope(1, 1).expect("valid slope")),
        }
    }
}

impl AssociationTable {
    pub fn of(&self, a: Slope) -> Association {
        match (a.p().rem_euclid(2), a.q().rem_euclid(2)) {
            (0, 1) => self.even_odd,
            (1, 0) => self.odd_even,
            _ => self.odd_odd,
        }
    }
}

/// A surface ball to examine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Target {
    pub surface: SurfaceId,
    pub weight_bound: u32,
    pub radius: u32,
}

impl Target {
    pub const fn new(genus: u32, punctures: u32, weight_bound: u32, radius: u32) -> Self {
        Target { surface: SurfaceId::new(genus, punctures), weight_bound, radius }
    }
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "S{} W{} R{}", self.surface, self.weight_bound, self.radius)
    }
}

pub const FAREY_BOUND: i64 = 12;
pub const CHART_BOUND: u32 = 30;
pub const WORD_LENGTH: usize = 4;
/// Balls larger than this skip the three-curve existence check with an
/// explicit waiver line.
pub const SMALL_LOOP_VERTEX_CAP: usize = 20_000;

pub const CELL_TARGETS: [Target; 3] = [Target::new(0, 5, 6, 3), Target::new(1, 2, 6, 3), Target::new(0, 6, 4, 3)];
pub const THREE_CURVE_TARGET: Target = Target::new(0, 8, 2, 2);
pub const PHI_TARGETS: [Target; 2] = [Target::new(0, 5, 6, 2), Target::new(1, 2, 6, 2)];
pub const ATLAS_TARGETS: [Target; 3] = [Target::new(0, 6, 6, 2), Target::new(0, 5, 8, 3), Target::new(1, 2, 12, 2)];

/// Default ball for a surface when only `--surface` is given.
pub fn default_target(surface: SurfaceId) -> Target {
    CELL_TARGETS.iter().chain([&THREE_CURVE_TARGET]).find(|t| t.surface == surface).copied().unwrap_or(Target {
        surface,
        weight_bound: 4,
        radius: 2,
    })
}

/// What a suite run examines.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteParams {
    /// Explicit ball; `None` runs the suite's default targets.
    pub target: Option<Target>,
    pub farey_bound: i64,
    pub chart_bound: u32,
    pub word_length: usize,
    pub table: AssociationTable,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            target: None,
            farey_bound: FAREY_BOUND,
            chart_bound: CHART_BOUND,
            word_length: WORD_LENGTH,
            table: AssociationTable::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub target: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Human-readable summary lines.
    pub summary: Vec<String>,
    pub counterexamples: Vec<Value>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport { suite, passed: true, checks: Vec::new(), summary: Vec::new(), counterexamples: Vec::new() }
    }

    fn check(&mut self, name: &str, target: impl ToString, passed: bool, detail: String) {
        self.passed &= passed;
        self.checks.push(Check { name: name.into(), target: target.to_string(), passed, detail });
    }

    fn counterexample(&mut self, check: &str, target: impl ToString, data: Value) {
        self.counterexamples.push(json!({ "check": check, "target": target.to_string(), "data": data }));
    }

    pub fn find(&self, name: &str, target: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name && c.target == target)
    }

    fn absorb(&mut self, other: SuiteReport) {
        self.passed &= other.passed;
        self.checks.extend(other.checks);
        self.summary.extend(other.summary);
        self.counterexamples.extend(other.counterexamples);
    }
}

/// Counterexamples kept per check, so failing reports stay readable.
const MAX_COUNTEREXAMPLES: usize = 20;

/// A universe with its ball and cells, built once per target.
pub struct Prepared {
    pub target: Target,
    pub universe: Universe,
    pub ball: PantsGraphBall,
    cells: Option<CellInventory>,
    atlas: Option<LoopAtlas>,
}

impl Prepared {
    pub fn new(target: Target) -> Result<Self> {
        let universe = Universe::new(target.surface, target.weight_bound)?;
        let seed = standard_seed(&universe)?;
        let ball = build_ball(&universe, &seed, target.radius)?;
        Ok(Prepared { target, universe, ball, cells: None, atlas: None })
    }

    pub fn cells(&mut self) -> Result<&CellInventory> {
        if self.cells.is_none() {
            self.cells = Some(detect_cells(&self.ball, &self.universe)?);
        }
        Ok(self.cells.as_ref().expect("cells computed"))
    }

    pub fn atlas(&mut self) -> Result<&LoopAtlas> {
        if self.atlas.is_none() {
            self.atlas = Some(loop_atlas(&self.ball, &self.universe)?);
        }
        Ok(self.atlas.as_ref().expect("atlas computed"))
    }
}

/// Balls shared between suites of one run.
#[derive(Default)]
pub struct Workspace {
    prepared: BTreeMap<Target, Prepared>,
}

impl Workspace {
    pub fn get(&mut self, t: Target) -> Result<&mut Prepared> {
        Ok(match self.prepared.entry(t) {
            std::collections::btree_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::btree_map::Entry::Vacant(e) => e.insert(Prepared::new(t)?),
        })
    }
}

pub fn run_suite(suite: Suite, params: &SuiteParams, ws: &mut Workspace) -> Result<SuiteReport> {
    match suite {
        Suite::Farey => Ok(farey_suite(params.farey_bound, &params.table)),
        Suite::Charts => Ok(charts_suite(params.chart_bound)),
        Suite::Squares => each_target(suite, params, &[CELL_TARGETS[2], CELL_TARGETS[0], CELL_TARGETS[1]], ws, squares),
        Suite::Pentagons => each_target(suite, params, &CELL_TARGETS[..2], ws, pentagons),
        Suite::Hexagons => each_target(suite, params, &CELL_TARGETS[..2], ws, hexagons),
        Suite::SmallLoops => {
            let mut targets = CELL_TARGETS.to_vec();
            targets.push(THREE_CURVE_TARGET);
            each_target(suite, params, &targets, ws, small_loops)
        }
        Suite::Phi => {
            let mut r = each_target(suite, params, &PHI_TARGETS, ws, |r, p, params| phi(r, p, params.word_length))?;
            match params.target {
                Some(t) => well_definedness(&mut r, ws.get(t)?)?,
                None => {
                    for t in ATLAS_TARGETS {
                        well_definedness(&mut r, ws.get(t)?)?;
                    }
                }
            }
            Ok(r)
        }
        Suite::All => {
            let mut r = SuiteReport::new(Suite::All);
            for s in Suite::EACH {
                r.absorb(run_suite(s, params, ws)?);
            }
            Ok(r)
        }
    }
}

fn each_target(
    suite: Suite,
    params: &SuiteParams,
    defaults: &[Target],
    ws: &mut Workspace,
    f: impl Fn(&mut SuiteReport, &mut Prepared, &SuiteParams) -> Result<()>,
) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(suite);
    let targets = params.target.map_or_else(|| defaults.to_vec(), |t| vec![t]);
    for t in targets {
        f(&mut r, ws.get(t)?, params)?;
    }
    Ok(r)
}

fn capped(xs: impl IntoIterator<Item = Value>) -> Value {
    Value::Array(xs.into_iter().take(MAX_COUNTEREXAMPLES).collect())
}

fn farey_suite(bound: i64, table: &AssociationTable) -> SuiteReport {
    let mut r = SuiteReport::new(Suite::Farey);
    let target = format!("|p|,|q| <= {bound}");
    let slopes = slopes_within(bound);
    let edges: Vec<(Slope, Slope)> = slopes
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| slopes[i + 1..].iter().filter(move |&&b| is_farey_edge(a, b)).map(move |&b| (a, b)))
        .collect();
    // Common neighbours within the bound must be among the two completions.
    let bad_completions: Vec<Value> = edges
        .par_iter()
        .filter_map(|&(a, b)| {
            let ok = match triangle_completions(a, b) {
                Ok([c, d]) => {
                    c != d
                        && [c, d].iter().all(|&x| is_farey_edge(x, a) && is_farey_edge(x, b))
                        && slopes.iter().all(|&x| !(is_farey_edge(x, a) && is_farey_edge(x, b)) || x == c || x == d)
                }
                Err(_) => false,
            };
            (!ok).then(|| json!({ "edge": [a, b] }))
        })
        .collect();
    r.check(
        "completions",
        &target,
        bad_completions.is_empty(),
        format!("{} edges, {} without exactly two completions", edges.len(), bad_completions.len()),
    );
    if !bad_completions.is_empty() {
        r.counterexample("completions", &target, capped(bad_completions));
    }
    let bad_assoc: Vec<Value> = edges
        .iter()
        .filter(|&&(a, b)| table.of(a) == table.of(b))
        .map(|&(a, b)| json!({ "edge": [a, b], "association": table.of(a) }))
        .collect();
    r.check(
        "associations",
        &target,
        bad_assoc.is_empty(),
        format!("{} adjacent pairs sharing an association", bad_assoc.len()),
    );
    if !bad_assoc.is_empty() {
        r.counterexample("associations", &target, capped(bad_assoc));
    }
    let orbit = quadrilateral_orbit(bound);
    let ok = orbit.passed(bound as usize);
    r.check(
        "quad_orbit",
        &target,
        ok,
        format!(
            "{}/{} quadrilateral triples reached, longest word {}",
            orbit.reached, orbit.triples, orbit.max_word_length
        ),
    );
    if !ok {
        r.counterexample("quad_orbit", &target, json!(orbit));
    }
    r.summary.push(format!("farey: {} edges checked within bound {bound}", edges.len()));
    r
}

fn charts_suite(bound: u32) -> SuiteReport {
    let mut r = SuiteReport::new(Suite::Charts);
    for (s, kind) in
        [(SurfaceId::new(1, 1), ChartKind::OneHoledTorus), (SurfaceId::new(0, 4), ChartKind::FourHoledSphere)]
    {
        let target = format!("S{s} W{bound}");
        let tri = standard_triangulation(s).expect("supported surface");
        let curves = enumerate_curves(tri, bound);
        let expected: Vec<Slope> = slopes_within(bound as i64)
            .into_iter()
            .filter(|&a| slope_curve(s, a).is_ok_and(|c| c.max_weight() <= bound))
            .collect();
        let slopes: Vec<Option<Slope>> = curves.iter().map(|c| curve_slope(s, c).ok()).collect();
        let unmatched: Vec<Value> =
            curves.iter().zip(&slopes).filter(|(_, a)| a.is_none()).map(|(c, _)| json!(c.weights)).collect();
        let ok = unmatched.is_empty() && curves.len() == expected.len();
        r.check(
            "bijection",
            &target,
            ok,
            format!("{} curves, {} slopes, {} curves off the chart", curves.len(), expected.len(), unmatched.len()),
        );
        if !ok {
            r.counterexample("bijection", &target, capped(unmatched));
            continue;
        }
        let slopes: Vec<Slope> = slopes.into_iter().flatten().collect();
        let traced: Vec<Traced> =
            curves.iter().map(|c| Traced::new(tri, c.clone()).expect("enumerated curve traces")).collect();
        let bad: Vec<Value> = (0..traced.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                let (traced, slopes) = (&traced, &slopes);
                (i..traced.len()).filter_map(move |j| {
                    let g = geometric_intersection(tri, &traced[i], &traced[j]);
                    let e = slope_intersection(slopes[i], slopes[j], kind);
                    (g != e).then(|| json!({ "slopes": [slopes[i], slopes[j]], "geometric": g, "slope": e }))
                })
            })
            .collect();
        let pairs = traced.len() * (traced.len() + 1) / 2;
        r.check("exactness", &target, bad.is_empty(), format!("{pairs} pairs, {} mismatches", bad.len()));
        if !bad.is_empty() {
            r.counterexample("exactness", &target, capped(bad));
        }
        r.summary.push(format!("charts: S{s} {} curves, {pairs} pairs exact", curves.len()));
    }
    r
}

fn loop_json(p: &Prepared, l: &LoopInBall) -> Value {
    let curves: Vec<Vec<Vec<u32>>> = l
        .vertices
        .iter()
        .map(|&v| p.ball.curves(v).0.iter().map(|&c| p.universe.curve(c).weights.clone()).collect())
        .collect();
    json!({ "vertices": l.vertices, "curves": curves })
}

/// Surfaces whose decompositions have two disjoint complexity-one pieces.
fn admits_squares(s: SurfaceId) -> bool {
    s.pants_count() >= 4
}

fn squares(r: &mut SuiteReport, p: &mut Prepared, _: &SuiteParams) -> Result<()> {
    let t = p.target;
    let survey = half_square_survey(&p.ball, &p.universe)?;
    let bad: Vec<Value> = survey
        .disagreements
        .iter()
        .map(
            |&(a, b, c)| json!({ "path": [a, b, c], "curves": [p.ball.curves(a), p.ball.curves(b), p.ball.curves(c)] }),
        )
        .collect();
    r.check(
        "half_square_equivalence",
        t,
        bad.is_empty(),
        format!("{} move pairs, {} partners, {} disagreements", survey.pairs, survey.partners, bad.len()),
    );
    if !bad.is_empty() {
        r.counterexample("half_square_equivalence", t, capped(bad));
    }
    let cells = p.cells()?;
    let certified: Vec<&(LoopInBall, bool)> = cells.squares.iter().filter(|(l, _)| !l.touches_frontier).collect();
    let bad: Vec<LoopInBall> = certified.iter().filter(|(_, d)| !d).map(|(l, _)| l.clone()).collect();
    let squares_found = certified.len();
    r.check(
        "squares_disjoint",
        t,
        bad.is_empty(),
        format!("{squares_found} certified squares, {} not on disjoint subsurfaces", bad.len()),
    );
    if !bad.is_empty() {
        let data = capped(bad.iter().map(|l| loop_json(p, l)));
        r.counterexample("squares_disjoint", t, data);
    }
    if !admits_squares(t.surface) {
        let ok = survey.partners == 0 && squares_found == 0;
        r.check("no_partner", t, ok, format!("{} partners, {squares_found} certified squares", survey.partners));
        if !ok {
            r.counterexample("no_partner", t, json!({ "partners": survey.partners, "squares": squares_found }));
        }
    }
    r.summary.push(format!("squares: {t}: {squares_found} squares found, {} half-square pairs", survey.pairs));
    Ok(())
}

fn pentagons(r: &mut SuiteReport, p: &mut Prepared, _: &SuiteParams) -> Result<()> {
    let t = p.target;
    let cells = p.cells()?;
    let found = cells.pentagons.len();
    let certified: Vec<_> = cells.pentagons.iter().filter(|(l, _)| !l.touches_frontier).collect();
    let verified = cells.pentagons.iter().filter(|(_, rep)| rep.verified).count();
    let bad: Vec<Value> = certified
        .iter()
        .filter(|(_, rep)| !rep.verified)
        .map(|(l, rep)| json!({ "loop": l.vertices, "failures": rep.failures }))
        .collect();
    let certified_count = certified.len();
    let squares = cells.certified_count("alternating-square");
    let hexagons = cells.certified_count("almost-alternating-hexagon");
    r.check(
        "pentagons_verified",
        t,
        bad.is_empty(),
        format!("{certified_count} certified pentagons, {} failing", bad.len()),
    );
    if !bad.is_empty() {
        r.counterexample("pentagons_verified", t, capped(bad));
    }
    if t.surface.genus == 1 {
        r.check("no_pentagons", t, found == 0, format!("{found} pentagons"));
        if found > 0 {
            let data = capped(cells.pentagons.iter().map(|(l, _)| json!(l.vertices)));
            r.counterexample("no_pentagons", t, data);
        }
    }
    if t.surface == SurfaceId::new(0, 5) && t.radius >= 3 {
        let n = certified.iter().filter(|(_, rep)| rep.verified).count();
        r.check("pentagon_exists", t, n > 0, format!("{n} verified certified pentagons"));
    }
    if t.surface == SurfaceId::new(0, 5) {
        let ok = squares == 0 && hexagons == 0;
        r.check("no_squares_or_hexagons", t, ok, format!("{squares} squares, {hexagons} hexagons"));
        if !ok {
            r.counterexample("no_squares_or_hexagons", t, json!({ "squares": squares, "hexagons": hexagons }));
        }
    }
    r.summary
        .push(format!("pentagons: {t}: {found} pentagons found ({certified_count} certified, {verified} verified)"));
    Ok(())
}

fn hexagons(r: &mut SuiteReport, p: &mut Prepared, _: &SuiteParams) -> Result<()> {
    let t = p.target;
    let cells = p.cells()?;
    let found = cells.hexagons.len();
    let verified = cells.hexagons.iter().filter(|(_, rep)| rep.verified).count();
    let certified: Vec<_> = cells.hexagons.iter().filter(|(l, _)| !l.touches_frontier).collect();
    let bad: Vec<Value> = certified
        .iter()
        .filter(|(_, rep)| !rep.verified)
        .map(|(l, rep)| json!({ "loop": l.vertices, "failures": rep.failures }))
        .collect();
    let certified_count = certified.len();
    r.check(
        "hexagons_verified",
        t,
        bad.is_empty(),
        format!("{certified_count} certified hexagons, {} failing", bad.len()),
    );
    if !bad.is_empty() {
        r.counterexample("hexagons_verified", t, capped(bad));
    }
    if t.surface.is_planar() && t.surface.punctures == 5 {
        r.check("no_hexagons", t, certified_count == 0, format!("{certified_count} certified hexagons"));
        if certified_count > 0 {
            let data = capped(certified.iter().map(|(l, _)| json!(l.vertices)));
            r.counterexample("no_hexagons", t, data);
        }
    }
    // Existence may rest on frontier loops: a loop in the ball is a loop of
    // the pants graph.
    if t.surface.genus == 1 && t.radius >= 3 {
        r.check("hexagon_exists", t, verified > 0, format!("{verified} verified hexagons of {found}"));
    }
    if t.surface.genus == 1 {
        let u = &p.universe;
        let sep: Vec<CurveId> = u
            .ids()
            .collect::<Vec<_>>()
            .into_par_iter()
            .filter(|&c| separation_data(u.tri, u.curve(c)).is_ok_and(|d| d.separating))
            .collect();
        let bad: Vec<Value> = sep
            .iter()
            .enumerate()
            .flat_map(|(k, &a)| sep[k + 1..].iter().map(move |&b| (a, b)))
            .filter_map(|(a, b)| {
                let i = u.intersection(a, b);
                (i > 0 && i < 4).then(|| json!({ "curves": [&u.curve(a).weights, &u.curve(b).weights], "i": i }))
            })
            .collect();
        r.check(
            "separating_pairs",
            t,
            bad.is_empty(),
            format!("{} separating curves, {} intersecting pairs below 4", sep.len(), bad.len()),
        );
        if !bad.is_empty() {
            r.counterexample("separating_pairs", t, capped(bad));
        }
    }
    r.summary.push(format!("hexagons: {t}: {found} hexagons found ({certified_count} certified, {verified} verified)"));
    Ok(())
}

fn small_loops(r: &mut SuiteReport, p: &mut Prepared, params: &SuiteParams) -> Result<()> {
    let t = p.target;
    let explicit = params.target.is_some();
    if t == THREE_CURVE_TARGET && !explicit && p.ball.len() > SMALL_LOOP_VERTEX_CAP {
        r.check("three_curve_exists", t, true, format!("waived: {} vertices exceed the cap", p.ball.len()));
        return Ok(());
    }
    let triangles = edge_triangles(&p.ball, &p.universe);
    let cells = p.cells()?;
    let unclassified: Vec<&LoopInBall> = cells.unclassified.iter().filter(|l| !l.touches_frontier).collect();
    let three = cells.three_curve.len();
    let (loops, certified_loops) = (cells.loops, cells.certified_loops);
    let bad: Vec<Value> = unclassified.iter().map(|l| json!(l.vertices)).collect();
    r.check(
        "trichotomy",
        t,
        bad.is_empty(),
        format!("{certified_loops} certified loops of {loops}, {} unclassified", bad.len()),
    );
    if !bad.is_empty() {
        r.counterexample("trichotomy", t, capped(bad));
    }
    let certified_edges = triangles.iter().filter(|e| e.certified).count();
    let bad: Vec<Value> = triangles
        .iter()
        .filter(|e| e.certified && e.apexes.is_empty())
        .map(|e| json!({ "edge": [p.ball.edges[e.edge].source, p.ball.edges[e.edge].target] }))
        .collect();
    r.check(
        "edge_triangles",
        t,
        bad.is_empty(),
        format!("{certified_edges} certified edges, {} outside every triangle", bad.len()),
    );
    if !bad.is_empty() {
        r.counterexample("edge_triangles", t, capped(bad));
    }
    if t == THREE_CURVE_TARGET {
        r.check("three_curve_exists", t, three > 0, format!("{three} three-curve loops"));
        if three == 0 {
            r.counterexample("three_curve_exists", t, json!({ "three_curve": 0 }));
        }
    }
    r.summary.push(format!("small-loops: {t}: {loops} loops, {three} three-curve"));
    Ok(())
}

fn phi(r: &mut SuiteReport, p: &mut Prepared, word_length: usize) -> Result<()> {
    let t = p.target;
    p.cells()?;
    p.atlas()?;
    let (u, ball) = (&p.universe, &p.ball);
    let (cells, atlas) = (p.cells.as_ref().expect("cells"), p.atlas.as_ref().expect("atlas"));
    let action = CurveAction::new(u)?;
    let words = action.words(word_length);
    let reports = words.par_iter().map(|w| verify_phi(&action, ball, cells, atlas, w)).collect::<Result<Vec<_>>>()?;
    let failing: Vec<Value> = reports.iter().filter(|x| !x.passed()).map(|x| json!(x)).collect();
    let (edges, charts): (usize, usize) =
        reports.iter().fold((0, 0), |(e, c), x| (e + x.map.edges_checked, c + x.charts_checked));
    let transports: usize = reports.iter().map(|x| x.transports_checked).sum();
    r.check(
        "equivariance",
        t,
        failing.is_empty(),
        format!(
            "{} words, {edges} edge images, {charts} chart labels, {transports} transports, {} failing",
            words.len(),
            failing.len()
        ),
    );
    if !failing.is_empty() {
        r.counterexample("equivariance", t, capped(failing));
    }
    let comp = verify_composition(&action, ball, &words)?;
    let ok = comp.violations.is_empty() && comp.action_violations.is_empty();
    r.check(
        "composition",
        t,
        ok,
        format!(
            "{} checks, {} composition and {} action violations",
            comp.checks,
            comp.violations.len(),
            comp.action_violations.len()
        ),
    );
    if !ok {
        r.counterexample("composition", t, json!(comp));
    }
    let interior: Vec<usize> = (0..ball.len()).filter(|&v| !ball.is_frontier(v)).collect();
    let bad = interior
        .par_iter()
        .map(|&v| charts_meet_only_at(ball, v).map(|ok| (!ok).then_some(v)))
        .collect::<Result<Vec<_>>>()?;
    let bad: Vec<Value> = bad.into_iter().flatten().map(|v| json!({ "vertex": v, "curves": ball.curves(v) })).collect();
    r.check(
        "charts_meet_once",
        t,
        bad.is_empty(),
        format!("{} interior vertices, {} with extra chart intersections", interior.len(), bad.len()),
    );
    if !bad.is_empty() {
        r.counterexample("charts_meet_once", t, capped(bad));
    }
    r.summary.push(format!("phi: {t}: {} words of length <= {word_length}", words.len()));
    Ok(())
}

/// Loop types a surface's well-definedness instances may produce.
fn allowed_cases(s: SurfaceId) -> &'static [&'static str] {
    match (s.genus, s.punctures) {
        (0, 5) => &["FiveHoledSphere"],
        (1, 2) => &["TwiceHoledTorus"],
        _ => &["DisjointSubsurfaces", "FiveHoledSphere", "TwiceHoledTorus"],
    }
}

/// The case each default surface exercises.
fn predicted_case(s: SurfaceId) -> Option<&'static str> {
    match (s.genus, s.punctures) {
        (0, 6) => Some("DisjointSubsurfaces"),
        (0, 5) => Some("FiveHoledSphere"),
        (1, 2) => Some("TwiceHoledTorus"),
        _ => None,
    }
}

fn well_definedness(r: &mut SuiteReport, p: &mut Prepared) -> Result<()> {
    let t = p.target;
    p.atlas()?;
    let (u, ball, atlas) = (&p.universe, &p.ball, p.atlas.as_ref().expect("atlas"));
    let describe = |&(s, d, a1): &(usize, usize, CurveId)| json!({ "x": ball.curves(s), "x_prime": ball.curves(d), "fixed": a1, "weights": u.curve(a1).weights });
    let bad: Vec<Value> = atlas
        .certified_missing
        .iter()
        .chain(atlas.bad.iter().filter(|k| instance_certified(u, ball.curves(k.0), ball.curves(k.1))))
        .map(describe)
        .collect();
    r.check(
        "welldefinedness_loops",
        t,
        bad.is_empty(),
        format!(
            "{} certified of {} instances, cases {:?}, {} failing",
            atlas.certified,
            atlas.instances,
            atlas.certified_by_case,
            bad.len()
        ),
    );
    if !bad.is_empty() {
        r.counterexample("welldefinedness_loops", t, capped(bad));
    }
    let allowed = allowed_cases(t.surface);
    let stray: Vec<&String> = atlas.by_case.keys().filter(|c| !allowed.contains(&c.as_str())).collect();
    r.check("loop_cases", t, stray.is_empty(), format!("cases {:?}", atlas.by_case));
    if !stray.is_empty() {
        r.counterexample("loop_cases", t, json!(stray));
    }
    if let Some(case) = predicted_case(t.surface) {
        let n = atlas.certified_by_case.get(case).copied().unwrap_or(0);
        r.check("predicted_case", t, n > 0, format!("{n} certified {case} loops"));
    }
    if t.surface.genus == 1 {
        let certified_detours: Vec<usize> = atlas
            .detours
            .iter()
            .filter(|(k, _)| instance_certified(u, ball.curves(k.0), ball.curves(k.1)))
            .map(|&(_, n)| n)
            .collect();
        let ok = !certified_detours.is_empty() && certified_detours.iter().all(|&n| n == 2);
        r.check(
            "illegal_moves",
            t,
            ok,
            format!(
                "{} certified illegal moves of {}, separating choices {:?}",
                atlas.certified_illegal,
                atlas.illegal,
                certified_detours.iter().fold(BTreeMap::<usize, usize>::new(), |mut m, &n| {
                    *m.entry(n).or_default() += 1;
                    m
                })
            ),
        );
        if !ok {
            let data = capped(
                atlas
                    .detours
                    .iter()
                    .filter(|(_, n)| *n != 2)
                    .map(|(k, n)| json!({ "move": describe(k), "choices": n })),
            );
            r.counterexample("illegal_moves", t, data);
        }
    }
    r.summary.push(format!("phi: {t}: {} well-definedness instances, {} certified", atlas.instances, atlas.certified));
    Ok(())
}
