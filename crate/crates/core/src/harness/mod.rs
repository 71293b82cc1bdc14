//! Experiment engine: solves family instances with each method, verifies
//! the roots, and reports counted operations.

mod csvio;
mod fit;
mod hull;
mod race;
mod sweep;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aberth::{ea_postprocess, run_aberth, AberthConfig, StopMode};
use crate::matching::{a_posteriori_ok, match_roots};
use crate::newton::{run_iterated_refinement, NewtonConfig};
use crate::numeric::{Complex, OpCount, OpCounter};
use crate::poly::{EvalMode, FamilySpec, PolyError, PolyRepr};

pub use csvio::{parse_csv, write_csv, CsvRow, CSV_HEADER};
pub use fit::{fit_loglog, fit_points, LogLogFit};
pub use hull::{convex_hull, convex_hull_experiment, hull_coverage, hull_members, HullReport, HullRow, DEFAULT_HULL_FACTORS};
pub use race::race;
pub use sweep::{parse_degrees, DEGREE_GRAMMAR};

/// Residual bound for accepting a root.
pub const MAX_RESIDUAL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Newton,
    Aberth,
    /// Newton with iterated refinement, then Ehrlich–Aberth seeded with
    /// whatever Newton found.
    NewtonThenEa,
    /// Both solvers alternating op-budget slices.
    Race,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Newton, Method::Aberth, Method::NewtonThenEa, Method::Race];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Newton => "newton",
            Method::Aberth => "aberth",
            Method::NewtonThenEa => "newton_then_ea",
            Method::Race => "race",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "newton" => Ok(Method::Newton),
            "aberth" | "ea" => Ok(Method::Aberth),
            "newton_then_ea" | "hybrid" => Ok(Method::NewtonThenEa),
            "race" => Ok(Method::Race),
            other => Err(HarnessError::Spec(format!(
                "unknown method `{other}` (expected newton, aberth, hybrid or race)"
            ))),
        }
    }
}

/// Parses a comma-separated method list.
pub fn parse_methods(s: &str) -> Result<Vec<Method>, HarnessError> {
    let methods = s
        .split(',')
        .filter(|m| !m.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<Method>, _>>()?;
    if methods.is_empty() {
        return Err(HarnessError::Spec("empty method list".into()));
    }
    Ok(methods)
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid experiment: {0}")]
    Spec(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("need at least 3 matched rows with positive op counts, got {0}")]
    InsufficientData(usize),
    #[error("neither solver produced a verified root set")]
    BothFailed(Box<SolveReport>),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Solver settings shared by every run of an experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    /// Step-size tolerance for both solvers.
    pub eps: f64,
    /// Matching and separation radius.
    pub delta: f64,
    pub newton: NewtonConfig,
    pub aberth: AberthConfig,
    /// Ops granted to each solver per race round.
    pub race_slice: u64,
    /// Record wall-clock times; off by default so output is reproducible.
    pub timing: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            eps: 1e-13,
            delta: 1e-8,
            newton: NewtonConfig::default(),
            aberth: AberthConfig::default(),
            race_slice: 100_000,
            timing: false,
        }
    }
}

impl SolveOptions {
    /// Newton settings adapted to the family's root bound.
    pub fn newton_for(&self, spec: &FamilySpec) -> NewtonConfig {
        NewtonConfig {
            root_scale: spec.family.root_radius(),
            conv_eps: self.eps,
            sep_delta: self.delta,
            max_residual: MAX_RESIDUAL,
            ..self.newton.clone()
        }
    }

    pub fn aberth_for(&self, spec: &FamilySpec) -> AberthConfig {
        AberthConfig {
            root_scale: spec.family.root_radius(),
            stop: StopMode::StepSize(self.eps),
            sep_delta: self.delta,
            max_residual: MAX_RESIDUAL,
            ..self.aberth.clone()
        }
    }
}

/// Outcome of one solve.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport {
    pub family: String,
    pub degree: usize,
    pub method: Method,
    pub eval_mode: EvalMode,
    pub seed: u64,
    pub real_adds: u64,
    pub real_muls: u64,
    /// Newton global steps, EA sweeps, or their sum for combined methods.
    pub iters: usize,
    pub roots_found: usize,
    pub expected: usize,
    pub max_residual: f64,
    pub matched: bool,
    pub missed: usize,
    pub wall_ms: f64,
    /// For races, the solver that finished first with verified roots.
    pub winner: Option<Method>,
    pub roots: Vec<Complex>,
    /// Why the run produced no roots, if it failed before solving.
    pub error: Option<String>,
}

impl SolveReport {
    pub fn total_ops(&self) -> u64 {
        self.real_adds + self.real_muls
    }

    pub fn csv_row(&self) -> CsvRow {
        CsvRow {
            family: self.family.clone(),
            degree: self.degree,
            method: self.method.to_string(),
            eval_mode: self.eval_mode,
            seed: self.seed,
            real_adds: self.real_adds,
            real_muls: self.real_muls,
            iters: self.iters,
            roots_found: self.roots_found,
            expected: self.expected,
            max_residual: self.max_residual,
            matched: self.matched,
            wall_ms: self.wall_ms,
        }
    }

    fn failed(spec: &FamilySpec, method: Method, error: String) -> Self {
        SolveReport {
            family: spec.label(),
            degree: spec.degree(),
            method,
            eval_mode: spec.eval,
            seed: spec.seed,
            real_adds: 0,
            real_muls: 0,
            iters: 0,
            roots_found: 0,
            expected: spec.degree(),
            max_residual: f64::INFINITY,
            matched: false,
            missed: spec.degree(),
            wall_ms: 0.0,
            winner: None,
            roots: Vec::new(),
            error: Some(error),
        }
    }
}

/// Result of checking a root set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub matched: bool,
    pub missed: usize,
}

/// Reference matching when roots are known, otherwise the a-posteriori
/// check: `d` points pairwise farther than `2δ` with small residuals.
pub fn verify(found: &[Complex], residuals: &[f64], reference: Option<&[Complex]>, degree: usize, delta: f64) -> Verdict {
    let residuals_ok = residuals.iter().all(|&r| r < MAX_RESIDUAL);
    match reference {
        Some(reference) => {
            let m = match_roots(found, reference, delta);
            let matched = m.success() && found.len() == degree && residuals_ok;
            Verdict { matched, missed: if matched { 0 } else { m.missed().max(1) } }
        }
        None => {
            let matched = a_posteriori_ok(found, residuals, degree, delta, MAX_RESIDUAL);
            Verdict { matched, missed: if matched { 0 } else { degree.saturating_sub(found.len()).max(1) } }
        }
    }
}

/// Raw solver output before verification.
pub(crate) struct Outcome {
    pub roots: Vec<Complex>,
    pub residuals: Vec<f64>,
    pub ops: OpCount,
    pub iters: usize,
    pub winner: Option<Method>,
}

pub(crate) fn finish_report(
    spec: &FamilySpec,
    method: Method,
    reference: Option<&[Complex]>,
    delta: f64,
    out: Outcome,
    wall_ms: f64,
) -> SolveReport {
    let degree = spec.degree();
    let verdict = verify(&out.roots, &out.residuals, reference, degree, delta);
    SolveReport {
        family: spec.label(),
        degree,
        method,
        eval_mode: spec.eval,
        seed: spec.seed,
        real_adds: out.ops.real_adds,
        real_muls: out.ops.real_muls,
        iters: out.iters,
        roots_found: out.roots.len(),
        expected: degree,
        max_residual: out.residuals.iter().copied().fold(0.0, f64::max),
        matched: verdict.matched,
        missed: verdict.missed,
        wall_ms,
        winner: out.winner,
        roots: out.roots,
        error: None,
    }
}

fn newton_outcome(ctx: &mut OpCounter, poly: &PolyRepr, cfg: &NewtonConfig) -> Outcome {
    let r = run_iterated_refinement(ctx, poly, cfg);
    Outcome {
        roots: r.root_values(),
        residuals: r.roots.iter().map(|x| x.residual).collect(),
        ops: r.ops,
        iters: r.steps,
        winner: None,
    }
}

/// Solves one built polynomial. Never fails: problems end up in the
/// report as `matched = false`.
pub fn solve_poly(
    spec: &FamilySpec,
    poly: &PolyRepr,
    reference: Option<&[Complex]>,
    method: Method,
    opts: &SolveOptions,
) -> SolveReport {
    // Instant::now panics on wasm32-unknown-unknown, so only read the clock when asked.
    let start = opts.timing.then(Instant::now);
    let mut ctx = OpCounter::new();
    let ncfg = opts.newton_for(spec);
    let acfg = opts.aberth_for(spec);
    let outcome = match method {
        Method::Newton => Ok(newton_outcome(&mut ctx, poly, &ncfg)),
        Method::Aberth => run_aberth(&mut ctx, poly, &acfg).map(|r| Outcome {
            roots: r.roots.clone(),
            residuals: r.residuals.clone(),
            ops: r.ops,
            iters: r.sweeps,
            winner: None,
        }),
        Method::NewtonThenEa => {
            let n = newton_outcome(&mut ctx, poly, &ncfg);
            if verify(&n.roots, &n.residuals, reference, poly.degree(), opts.delta).matched {
                Ok(n)
            } else {
                let keep = &n.roots[..n.roots.len().min(poly.degree())];
                ea_postprocess(&mut ctx, poly, keep, &acfg).map(|r| Outcome {
                    roots: r.roots.clone(),
                    residuals: r.residuals.clone(),
                    ops: n.ops + r.ops,
                    iters: n.iters + r.sweeps,
                    winner: None,
                })
            }
        }
        Method::Race => {
            let report = match race(spec, poly, reference, opts) {
                Ok(r) => r,
                Err(HarnessError::BothFailed(r)) => *r,
                Err(e) => SolveReport::failed(spec, method, e.to_string()),
            };
            return with_time(report, start);
        }
    };
    let report = match outcome {
        Ok(out) => finish_report(spec, method, reference, opts.delta, out, 0.0),
        Err(e) => SolveReport::failed(spec, method, e.to_string()),
    };
    with_time(report, start)
}

fn with_time(mut report: SolveReport, start: Option<Instant>) -> SolveReport {
    report.wall_ms = start.map_or(0.0, |t| t.elapsed().as_secs_f64() * 1e3);
    report
}

/// Builds the family instance and solves it.
pub fn solve(spec: &FamilySpec, method: Method, opts: &SolveOptions) -> SolveReport {
    match spec.make() {
        Ok((poly, reference)) => solve_poly(spec, &poly, reference.roots.as_deref(), method, opts),
        Err(e) => SolveReport::failed(spec, method, e.to_string()),
    }
}

/// A method × degree sweep over one family.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub family: FamilySpec,
    /// Empty means the family's own degree.
    pub degrees: Vec<usize>,
    pub methods: Vec<Method>,
    /// Overrides the family's evaluation mode.
    pub eval: Option<EvalMode>,
    pub seed: Option<u64>,
    pub options: SolveOptions,
}

impl ExperimentSpec {
    pub fn new(family: FamilySpec, methods: Vec<Method>) -> Self {
        ExperimentSpec { family, degrees: Vec::new(), methods, eval: None, seed: None, options: SolveOptions::default() }
    }

    /// The family instances in sweep order.
    pub fn instances(&self) -> Result<Vec<FamilySpec>, HarnessError> {
        if self.methods.is_empty() {
            return Err(HarnessError::Spec("no methods given".into()));
        }
        let mut base = self.family;
        if let Some(eval) = self.eval {
            base.eval = eval;
        }
        if let Some(seed) = self.seed {
            base.seed = seed;
        }
        let degrees = if self.degrees.is_empty() { vec![base.degree()] } else { self.degrees.clone() };
        degrees
            .into_iter()
            .map(|d| {
                let spec = FamilySpec { family: base.family.with_degree(d)?, ..base };
                spec.validate()?;
                Ok(spec)
            })
            .collect()
    }
}

/// Runs every (degree, method) pair. Rows come back in sweep order,
/// degree-major, whatever order the jobs finish in.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<SolveReport>, HarnessError> {
    let instances = spec.instances()?;
    let jobs: Vec<(FamilySpec, Method)> = instances
        .iter()
        .flat_map(|inst| spec.methods.iter().map(move |&m| (*inst, m)))
        .collect();
    let opts = &spec.options;
    let run = |(inst, m): &(FamilySpec, Method)| solve(inst, *m, opts);
    #[cfg(feature = "parallel")]
    let rows = {
        use rayon::prelude::*;
        jobs.par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows = jobs.iter().map(run).collect();
    Ok(rows)
}
