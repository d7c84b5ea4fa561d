//! One PASS/FAIL line per acceptance criterion, with pinned runtime limits.
//! Balls are shared between criteria 1–7, each timed over the suites it
//! runs; criterion 8 times `verify all` from scratch.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use pantsgraph::cli::{run_suite, Suite, SuiteParams, SuiteReport, Target, Workspace, CELL_TARGETS};

const FAREY_LIMIT: Duration = Duration::from_secs(10);
const CHARTS_LIMIT: Duration = Duration::from_secs(60);
const PENTAGON_LIMIT: Duration = Duration::from_secs(5 * 60);
const HEXAGON_LIMIT: Duration = Duration::from_secs(10 * 60);
const VERIFY_ALL_LIMIT: Duration = Duration::from_secs(15 * 60);

struct Criterion {
    id: u32,
    name: &'static str,
    /// Suites run, with an explicit target or the suite defaults.
    runs: Vec<(Suite, Option<Target>)>,
    /// Checks that must appear and pass.
    required: &'static [&'static str],
    limit: Option<Duration>,
    /// Start from an empty workspace.
    fresh: bool,
}

fn run(c: &Criterion, shared: &mut Workspace) -> (Vec<SuiteReport>, Duration) {
    let mut own = Workspace::default();
    let ws = if c.fresh { &mut own } else { shared };
    let start = Instant::now();
    let reports = c
        .runs
        .iter()
        .map(|&(suite, target)| {
            let params = SuiteParams { target, ..SuiteParams::default() };
            run_suite(suite, &params, ws).unwrap_or_else(|e| panic!("{}: {e}", suite.name()))
        })
        .collect();
    (reports, start.elapsed())
}

fn report(c: &Criterion, reports: &[SuiteReport], elapsed: Duration) -> bool {
    let checks: Vec<_> =
        reports.iter().flat_map(|r| &r.checks).filter(|k| c.required.contains(&k.name.as_str())).collect();
    let missing: Vec<&str> = c.required.iter().copied().filter(|n| !checks.iter().any(|k| k.name == *n)).collect();
    // Every check of the suites run, required or not.
    let failing: Vec<_> = reports.iter().flat_map(|r| &r.checks).filter(|k| !k.passed).collect();
    let in_time = c.limit.is_none_or(|l| elapsed < l);
    let ok = missing.is_empty() && failing.is_empty() && in_time;
    let limit = c.limit.map_or(String::new(), |l| format!(" < {}s", l.as_secs()));
    println!(
        "{} criterion {}: {} ({} checks, {:.1}s{limit})",
        if ok { "PASS" } else { "FAIL" },
        c.id,
        c.name,
        checks.len(),
        elapsed.as_secs_f64()
    );
    for k in checks.iter().filter(|k| k.detail.starts_with("waived")) {
        println!("    WAIVED {} [{}] {}", k.name, k.target, k.detail);
    }
    for k in &failing {
        println!("    failing {} [{}] {}", k.name, k.target, k.detail);
    }
    for n in &missing {
        println!("    missing check {n}");
    }
    ok
}

fn main() -> ExitCode {
    let [s05, s12, _] = CELL_TARGETS;
    let criteria = vec![
        Criterion {
            id: 1,
            name: "farey completions, associations, quadrilateral orbit",
            runs: vec![(Suite::Farey, None)],
            required: &["completions", "associations", "quad_orbit"],
            limit: Some(FAREY_LIMIT),
            fresh: false,
        },
        Criterion {
            id: 2,
            name: "chart exactness on S1,1 and S0,4",
            runs: vec![(Suite::Charts, None)],
            required: &["bijection", "exactness"],
            limit: Some(CHARTS_LIMIT),
            fresh: false,
        },
        Criterion {
            id: 3,
            name: "S0,5 R3: edge triangles, verified pentagons, no squares or hexagons",
            runs: vec![(Suite::Pentagons, Some(s05)), (Suite::SmallLoops, Some(s05))],
            required: &["pentagons_verified", "pentagon_exists", "no_squares_or_hexagons", "edge_triangles"],
            limit: Some(PENTAGON_LIMIT),
            fresh: false,
        },
        Criterion {
            id: 4,
            name: "S1,2 R3: no pentagons, verified hexagon pattern, separating pairs",
            runs: vec![(Suite::Pentagons, Some(s12)), (Suite::Hexagons, Some(s12))],
            required: &["no_pentagons", "hexagons_verified", "hexagon_exists", "separating_pairs"],
            limit: Some(HEXAGON_LIMIT),
            fresh: false,
        },
        Criterion {
            id: 5,
            name: "small-loop trichotomy, three-curve loop on S0,8",
            runs: vec![(Suite::SmallLoops, None)],
            required: &["trichotomy", "three_curve_exists"],
            limit: None,
            fresh: false,
        },
        Criterion {
            id: 6,
            name: "half-square criterion",
            runs: vec![(Suite::Squares, None)],
            required: &["half_square_equivalence", "squares_disjoint", "no_partner"],
            limit: None,
            fresh: false,
        },
        Criterion {
            id: 7,
            name: "well-definedness loops and illegal moves",
            runs: vec![(Suite::Phi, None)],
            required: &["welldefinedness_loops", "loop_cases", "predicted_case", "illegal_moves"],
            limit: None,
            fresh: false,
        },
        Criterion {
            id: 8,
            name: "equivariance and phi; verify all at default bounds",
            runs: vec![(Suite::All, None)],
            required: &["equivariance", "composition", "charts_meet_once"],
            limit: Some(VERIFY_ALL_LIMIT),
            fresh: true,
        },
    ];

    let mut ws = Workspace::default();
    let mut all_ok = true;
    for c in &criteria {
        let (reports, elapsed) = run(c, &mut ws);
        all_ok &= report(c, &reports, elapsed);
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
