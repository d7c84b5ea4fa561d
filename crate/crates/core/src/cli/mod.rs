//! Command-line front end: universes, balls, cell reports, verification
//! suites and DOT export.

mod suites;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use suites::{
    default_target, run_suite, AssociationTable, Check, Prepared, Suite, SuiteParams, SuiteReport, Target, Workspace,
    ATLAS_TARGETS, CELL_TARGETS, CHART_BOUND, FAREY_BOUND, PHI_TARGETS, SMALL_LOOP_VERTEX_CAP, THREE_CURVE_TARGET,
    WORD_LENGTH,
};

use crate::error::{Error, Result};
use crate::farey::Association;
use crate::loops::detect_cells;
use crate::pants::{build_ball, standard_seed, PantsDecomposition, PantsGraphBall, Universe};
use crate::surface::{NormalCurve, SurfaceId};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Hard caps lifted by `--override-caps`.
pub const MAX_WEIGHT_BOUND: u32 = 40;
pub const MAX_RADIUS: u32 = 5;

/// Schema version stamped on every JSON artifact.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "pantsgraph", version, about = "Pants-graph balls on small surfaces and their loop structure")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate the curves of a universe as JSON.
    Curves(Flags),
    /// Build a ball; writes JSON and, next to it, DOT.
    Ball(Flags),
    /// Detect and classify the small loops of a ball.
    Cells(Flags),
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        flags: Flags,
    },
    /// Export a ball as DOT.
    Export(Flags),
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// Surface as `g,r`.
    #[arg(long)]
    surface: Option<String>,
    #[arg(long)]
    weight_bound: Option<u32>,
    #[arg(long)]
    radius: Option<u32>,
    /// `standard`, or curves as `w,w,…;w,w,…`.
    #[arg(long)]
    seed: Option<String>,
    /// JSON config file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where a failing `verify` writes its counterexamples.
    #[arg(long)]
    counterexamples: Option<PathBuf>,
    /// JSON table mapping parity classes `0/1`, `1/0`, `1/1` to associations.
    #[arg(long)]
    association_table: Option<PathBuf>,
    #[arg(long)]
    farey_bound: Option<i64>,
    #[arg(long)]
    chart_bound: Option<u32>,
    #[arg(long)]
    word_length: Option<usize>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    jobs: Option<usize>,
    /// Lift the weight-bound and radius caps.
    #[arg(long)]
    override_caps: bool,
}

/// Everything a command needs, merged from the config file and flags.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub surface: Option<String>,
    pub weight_bound: Option<u32>,
    pub radius: Option<u32>,
    pub seed: Option<String>,
    pub out: Option<PathBuf>,
    pub counterexamples: Option<PathBuf>,
    pub association_table: Option<PathBuf>,
    pub farey_bound: Option<i64>,
    pub chart_bound: Option<u32>,
    pub word_length: Option<usize>,
    pub jobs: Option<usize>,
    #[serde(default)]
    pub override_caps: bool,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Data(format!("{}: {e}", path.display())))
    }

    /// Fields set in `flags` replace those of `self`.
    fn overlay(self, f: Flags) -> Self {
        RunConfig {
            surface: f.surface.or(self.surface),
            weight_bound: f.weight_bound.or(self.weight_bound),
            radius: f.radius.or(self.radius),
            seed: f.seed.or(self.seed),
            out: f.out.or(self.out),
            counterexamples: f.counterexamples.or(self.counterexamples),
            association_table: f.association_table.or(self.association_table),
            farey_bound: f.farey_bound.or(self.farey_bound),
            chart_bound: f.chart_bound.or(self.chart_bound),
            word_length: f.word_length.or(self.word_length),
            jobs: f.jobs.or(self.jobs),
            override_caps: f.override_caps || self.override_caps,
        }
    }

    fn surface(&self) -> Result<Option<SurfaceId>> {
        let Some(s) = &self.surface else { return Ok(None) };
        let s: SurfaceId = s.parse()?;
        if !s.is_supported() {
            return Err(Error::Unsupported(s.to_string()));
        }
        Ok(Some(s))
    }

    /// The ball to build: explicit settings over the surface's defaults.
    fn target(&self) -> Result<Option<Target>> {
        let Some(s) = self.surface()? else {
            if self.weight_bound.is_some() || self.radius.is_some() {
                return Err(Error::Data("--weight-bound and --radius need --surface".into()));
            }
            return Ok(None);
        };
        let d = default_target(s);
        let t = Target {
            surface: s,
            weight_bound: self.weight_bound.unwrap_or(d.weight_bound),
            radius: self.radius.unwrap_or(d.radius),
        };
        self.check_caps(t)?;
        Ok(Some(t))
    }

    fn check_caps(&self, t: Target) -> Result<()> {
        if t.weight_bound == 0 {
            return Err(Error::Data("weight bound must be positive".into()));
        }
        if !self.override_caps && (t.weight_bound > MAX_WEIGHT_BOUND || t.radius > MAX_RADIUS) {
            return Err(Error::Data(format!(
                "weight bound {} / radius {} exceed the caps {MAX_WEIGHT_BOUND} / {MAX_RADIUS}; pass --override-caps",
                t.weight_bound, t.radius
            )));
        }
        Ok(())
    }

    fn seed(&self, u: &Universe) -> Result<PantsDecomposition> {
        match self.seed.as_deref() {
            None | Some("standard") => standard_seed(u),
            Some(text) => {
                let ids = text
                    .split(';')
                    .map(|c| {
                        let w = c
                            .split(',')
                            .map(|x| x.trim().parse::<u32>())
                            .collect::<std::result::Result<Vec<_>, _>>()
                            .map_err(|_| Error::Data(format!("cannot parse seed curve {c:?}")))?;
                        u.require(&NormalCurve::new(w))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let p = PantsDecomposition::new(ids);
                if !crate::pants::is_pants_decomposition(u, &p.0)? {
                    return Err(Error::NotAPantsDecomposition);
                }
                Ok(p)
            }
        }
    }

    fn params(&self) -> Result<SuiteParams> {
        let d = SuiteParams::default();
        let table = match &self.association_table {
            None => d.table,
            Some(path) => load_association_table(path)?,
        };
        if self.seed.as_deref().is_some_and(|s| s != "standard") {
            return Err(Error::Data("verify suites use the standard seed".into()));
        }
        Ok(SuiteParams {
            target: self.target()?,
            farey_bound: self.farey_bound.unwrap_or(d.farey_bound),
            chart_bound: self.chart_bound.unwrap_or(d.chart_bound),
            word_length: self.word_length.unwrap_or(d.word_length),
            table,
        })
    }
}

fn parse_association(v: &Value) -> Option<Association> {
    let pairs: [[u8; 2]; 2] = serde_json::from_value(v.clone()).ok()?;
    let norm = |mut p: [[u8; 2]; 2]| {
        p.iter_mut().for_each(|x| x.sort());
        p.sort();
        p
    };
    Association::ALL.into_iter().find(|a| a.pairs() == norm(pairs))
}

/// Reads `{"0/1": [[1,2],[3,4]], "1/0": …, "1/1": …}`.
pub fn load_association_table(path: &Path) -> Result<AssociationTable> {
    let bad = |m: String| Error::Data(format!("{}: {m}", path.display()));
    let text = fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    let get = |k: &str| {
        v.get(k).and_then(parse_association).ok_or_else(|| bad(format!("missing or invalid association for {k}")))
    };
    Ok(AssociationTable { even_odd: get("0/1")?, odd_even: get("1/0")?, odd_odd: get("1/1")? })
}

/// Writes through a temporary sibling so readers never see partial files.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io = |e: std::io::Error| Error::Data(format!("{}: {e}", path.display()));
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| Error::Data(format!("{}: not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(bytes).map_err(io)?;
    f.sync_all().map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

fn to_bytes(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("JSON serializes");
    s.push('\n');
    s.into_bytes()
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, bytes),
        None => std::io::stdout().write_all(bytes).map_err(|e| Error::Data(format!("stdout: {e}"))),
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let (flags, action) = match cli.command {
        Command::Verify { suite, flags } => (flags, Err(suite)),
        Command::Curves(f) => (f, Ok(Output::Curves)),
        Command::Ball(f) => (f, Ok(Output::Ball)),
        Command::Cells(f) => (f, Ok(Output::Cells)),
        Command::Export(f) => (f, Ok(Output::Dot)),
    };
    let config = match flags.config.as_deref().map(RunConfig::load).transpose() {
        Ok(c) => c.unwrap_or_default().overlay(flags),
        Err(e) => return usage(e),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(config.jobs.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => return usage(Error::Data(e.to_string())),
    };
    pool.install(|| match action {
        Err(suite) => verify(&config, suite),
        Ok(what) => ball_command(&config, what),
    })
}

fn usage(e: Error) -> i32 {
    eprintln!("error: {e}");
    EXIT_USAGE
}

enum Output {
    Curves,
    Ball,
    Cells,
    Dot,
}

fn ball_command(config: &RunConfig, what: Output) -> i32 {
    let target = match config.target() {
        Ok(Some(t)) => t,
        Ok(None) => return usage(Error::Data("--surface is required".into())),
        Err(e) => return usage(e),
    };
    match build_outputs(config, target, what) {
        Ok(()) => EXIT_PASS,
        Err(e) => usage(e),
    }
}

fn build_outputs(config: &RunConfig, t: Target, what: Output) -> Result<()> {
    let u = Universe::new(t.surface, t.weight_bound)?;
    let out = config.out.as_deref();
    if let Output::Curves = what {
        let mut v = u.to_json();
        v["schema_version"] = json!(SCHEMA_VERSION);
        return emit(out, &to_bytes(&v));
    }
    let seed = config.seed(&u)?;
    let ball = build_ball(&u, &seed, t.radius)?;
    match what {
        Output::Curves => unreachable!("handled above"),
        Output::Dot => emit(out, ball.to_dot().as_bytes()),
        Output::Ball => {
            emit(out, &to_bytes(&ball_json(&ball, &u)))?;
            if let Some(p) = out {
                write_atomic(&p.with_extension("dot"), ball.to_dot().as_bytes())?;
            }
            Ok(())
        }
        Output::Cells => {
            let cells = detect_cells(&ball, &u)?;
            let v = json!({
                "schema_version": SCHEMA_VERSION,
                "surface": t.surface,
                "weight_bound": t.weight_bound,
                "radius": t.radius,
                "vertices": ball.len(),
                "edges": ball.edges.len(),
                "cells": cells,
            });
            emit(out, &to_bytes(&v))?;
            if out.is_some() {
                println!("{} loops: {:?}", cells.loops, cells.counts);
            }
            Ok(())
        }
    }
}

fn ball_json(ball: &PantsGraphBall, u: &Universe) -> Value {
    let mut v = ball.to_json(u);
    v["schema_version"] = json!(SCHEMA_VERSION);
    v
}

/// Counterexample path: explicit, next to `--out`, or in the working
/// directory.
fn counterexample_path(config: &RunConfig, suite: Suite) -> PathBuf {
    if let Some(p) = &config.counterexamples {
        return p.clone();
    }
    let name = format!("counterexamples-{}.json", suite.name());
    match &config.out {
        Some(out) => out.with_file_name(name),
        None => PathBuf::from(name),
    }
}

fn verify(config: &RunConfig, suite: Suite) -> i32 {
    let params = match config.params() {
        Ok(p) => p,
        Err(e) => return usage(e),
    };
    let mut ws = Workspace::default();
    let report = match run_suite(suite, &params, &mut ws) {
        Ok(r) => r,
        Err(e) => return usage(e),
    };
    for line in &report.summary {
        println!("{line}");
    }
    for c in &report.checks {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        println!("{mark} {} [{}] {}", c.name, c.target, c.detail);
    }
    let v = json!({ "schema_version": SCHEMA_VERSION, "params": params, "report": report });
    if let Some(out) = &config.out {
        if let Err(e) = write_atomic(out, &to_bytes(&v)) {
            return usage(e);
        }
    }
    if report.passed {
        println!("verify {}: all checks passed", suite.name());
        return EXIT_PASS;
    }
    let path = counterexample_path(config, suite);
    let cx = json!({
        "schema_version": SCHEMA_VERSION,
        "suite": suite,
        "params": params,
        "counterexamples": report.counterexamples,
    });
    if let Err(e) = write_atomic(&path, &to_bytes(&cx)) {
        eprintln!("error: {e}");
    }
    println!("verify {}: violations found; counterexamples in {}", suite.name(), path.display());
    EXIT_VIOLATION
}
