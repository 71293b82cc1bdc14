use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polyrace::harness::{
    convex_hull_experiment, fit_loglog, parse_degrees, parse_methods, run_experiment, solve, write_csv, CsvRow,
    ExperimentSpec, HarnessError, Method, SolveOptions, SolveReport, DEFAULT_HULL_FACTORS, DEGREE_GRAMMAR,
};
use polyrace::poly::{EvalMode, FamilySpec, FAMILY_GRAMMAR};

const EXIT_UNMATCHED: u8 = 2;
const EXIT_INVALID: u8 = 3;

#[derive(Parser)]
#[command(name = "polyrace", version, about = "Newton vs Ehrlich-Aberth root finding with counted operations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one polynomial and report the outcome.
    Solve {
        #[command(flatten)]
        common: Common,
        /// newton, aberth, hybrid (newton_then_ea) or race.
        #[arg(long, default_value = "newton")]
        method: String,
        /// Print the full report, roots included, as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run a degree sweep and write one CSV row per (degree, method).
    Bench {
        #[command(flatten)]
        common: Common,
        /// Degree sweep, e.g. `2^4..2^12` or `16,64,144`.
        #[arg(long)]
        degrees: Option<String>,
        #[arg(long, default_value = "newton,aberth")]
        methods: String,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Which roots on the convex hull plain Newton finds from ⌈c·d⌉ circle points.
    Hull {
        #[command(flatten)]
        common: Common,
        /// Comma-separated factors c.
        #[arg(long)]
        factors: Option<String>,
    },
    /// List the family grammar.
    Families,
}

#[derive(Args)]
struct Common {
    /// Family spec, e.g. `iterquad:c=0+1i,n=12,eval=fast` or `grid:n=8`.
    #[arg(long)]
    family: String,
    #[arg(long)]
    eval: Option<EvalMode>,
    #[arg(long, default_value_t = 1e-13)]
    eps: f64,
    #[arg(long, default_value_t = 1e-8)]
    delta: f64,
    #[arg(long)]
    seed: Option<u64>,
    /// Record wall-clock milliseconds (makes output run-dependent).
    #[arg(long)]
    timing: bool,
}

impl Common {
    fn family(&self) -> Result<FamilySpec, HarnessError> {
        let mut spec: FamilySpec = self.family.parse()?;
        if let Some(eval) = self.eval {
            spec.eval = eval;
        }
        if let Some(seed) = self.seed {
            spec.seed = seed;
        }
        spec.validate()?;
        Ok(spec)
    }

    fn options(&self) -> Result<SolveOptions, HarnessError> {
        if !(self.eps > 0.0 && self.delta > 0.0) {
            return Err(HarnessError::Spec("--eps and --delta must be positive".into()));
        }
        Ok(SolveOptions { eps: self.eps, delta: self.delta, timing: self.timing, ..SolveOptions::default() })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INVALID) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("polyrace: {e}");
            ExitCode::from(match e {
                HarnessError::Io(_) | HarnessError::Csv(_) => 1,
                _ => EXIT_INVALID,
            })
        }
    }
}

fn status(all_matched: bool) -> ExitCode {
    if all_matched {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_UNMATCHED)
    }
}

fn run(cli: Cli) -> Result<ExitCode, HarnessError> {
    match cli.cmd {
        Cmd::Families => {
            println!("{FAMILY_GRAMMAR}\n\nDegree sweeps (bench --degrees):\n{DEGREE_GRAMMAR}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Solve { common, method, json } => {
            let spec = common.family()?;
            let method: Method = method.parse()?;
            let report = solve(&spec, method, &common.options()?);
            if json {
                println!("{}", serde_json::to_string_pretty(&report).map_err(io::Error::from)?);
            } else {
                print_summary(&spec, &report);
            }
            Ok(status(report.matched))
        }
        Cmd::Bench { common, degrees, methods, out } => {
            let mut exp = ExperimentSpec::new(common.family()?, parse_methods(&methods)?);
            if let Some(d) = degrees {
                exp.degrees = parse_degrees(&d)?;
            }
            exp.options = common.options()?;
            let rows = run_experiment(&exp)?;
            let csv: Vec<CsvRow> = rows.iter().map(SolveReport::csv_row).collect();
            match out {
                Some(path) => write_csv(BufWriter::new(File::create(path)?), &csv)?,
                None => write_csv(io::stdout().lock(), &csv)?,
            }
            for &m in &exp.methods {
                let of_method: Vec<SolveReport> = rows.iter().filter(|r| r.method == m).cloned().collect();
                if let Ok(fit) = fit_loglog(&of_method) {
                    eprintln!("{m}: slope {:.3}, r² {:.4} over {} points", fit.slope, fit.r2, fit.points);
                }
            }
            for r in rows.iter().filter(|r| !r.matched) {
                let why = r.error.as_deref().map(|e| format!(" ({e})")).unwrap_or_default();
                eprintln!("unmatched: {} d={} {}{why}", r.family, r.degree, r.method);
            }
            Ok(status(rows.iter().all(|r| r.matched)))
        }
        Cmd::Hull { common, factors } => {
            let spec = common.family()?;
            let factors: Vec<f64> = match factors {
                Some(s) => s
                    .split(',')
                    .map(|f| f.trim().parse::<f64>().map_err(|e| HarnessError::Spec(format!("factor `{f}`: {e}"))))
                    .collect::<Result<_, _>>()?,
                None => DEFAULT_HULL_FACTORS.to_vec(),
            };
            if factors.iter().any(|&f| !(f > 0.0)) {
                return Err(HarnessError::Spec("factors must be positive".into()));
            }
            let report = convex_hull_experiment(&spec, &factors, &common.options()?)?;
            let mut out = io::stdout().lock();
            writeln!(out, "{}: {} of {} roots on the hull", report.family, report.hull.len(), report.degree)?;
            writeln!(out, "factor,points,covered,fraction,ops")?;
            for r in &report.rows {
                let hit = r.covered.iter().filter(|&&c| c).count();
                writeln!(out, "{},{},{},{:.4},{}", r.factor, r.points, hit, r.fraction, r.ops)?;
            }
            match report.minimal_factor {
                Some(c) => writeln!(out, "minimal factor: {c}")?,
                None => writeln!(out, "minimal factor: none of the tried factors covers the hull")?,
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn print_summary(spec: &FamilySpec, r: &SolveReport) {
    println!("family      {spec}");
    println!("method      {}", r.method);
    if let Some(w) = r.winner {
        println!("winner      {w}");
    }
    println!("degree      {}", r.degree);
    println!("ops         {} ({} adds, {} muls)", r.total_ops(), r.real_adds, r.real_muls);
    println!("iterations  {}", r.iters);
    println!("roots       {} of {}", r.roots_found, r.expected);
    println!("residual    {:.3e}", r.max_residual);
    println!("matched     {}", r.matched);
    if let Some(e) = &r.error {
        println!("error       {e}");
    }
}
