//! Command-line driver. Exit codes: 0 pass, 1 check failure, 2 configuration
//! or IO error, 3 the trajectory left the simplex.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fisher_kahler::connections::Alpha;
use fisher_kahler::simplex::{Distribution, TangentVector};
use fisher_kahler::verify::{
    run_geodesic, run_natgrad, run_pullback, run_verify, Mode, Report, VerifyConfig, DEFAULT_SAMPLES,
    DEFAULT_SEED,
};
use fisher_kahler::Error;

#[derive(Parser)]
#[command(version, about = "Fisher geometry of the simplex and its Kähler lift")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every registered invariant check and emit a JSON report.
    Verify(VerifyArgs),
    /// Integrate an alpha-geodesic and dump it as CSV.
    Geodesic(GeodesicArgs),
    /// Batch-verify the pullback identities of the covering map.
    Pullback(PullbackArgs),
    /// Natural-gradient descent on a squared loss, traced as CSV.
    Natgrad(NatgradArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Comma-separated dimensions, each in [2, 64].
    #[arg(long, value_delimiter = ',', default_value = "2,3,5,8")]
    n: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Multiplies every tolerance.
    #[arg(long, default_value_t = 1.0)]
    tol_scale: f64,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct GeodesicArgs {
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Initial point; uniform when absent.
    #[arg(long, value_delimiter = ',')]
    p0: Option<Vec<f64>>,
    /// Initial velocity in the exponential representation, centered at p0.
    #[arg(long, value_delimiter = ',', required = true)]
    v0: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    t_end: f64,
    #[arg(long, default_value_t = 256)]
    steps: usize,
    /// CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Analytic,
    Fd,
}

#[derive(Args)]
struct PullbackArgs {
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Analytic)]
    mode: ModeArg,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    tol_scale: f64,
}

#[derive(Args)]
struct NatgradArgs {
    /// Dimension when neither --target nor --start is given.
    #[arg(long)]
    n: Option<usize>,
    /// Target distribution; uniform when absent.
    #[arg(long, value_delimiter = ',')]
    target: Option<Vec<f64>>,
    /// Start distribution; drawn from --seed when absent.
    #[arg(long, value_delimiter = ',')]
    start: Option<Vec<f64>>,
    #[arg(long, default_value_t = 200)]
    iters: usize,
    #[arg(long, default_value_t = 0.25)]
    step: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Geodesic(a) => geodesic(a),
        Command::Pullback(a) => pullback(a),
        Command::Natgrad(a) => natgrad(a),
    };
    match outcome {
        Ok(code) => code,
        Err(Error::LeftSimplex { t }) => {
            eprintln!("error: left the simplex at t = {t}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit_report(report: &Report, out: Option<&PathBuf>) -> Result<ExitCode, Error> {
    match out {
        Some(path) => report.write(path)?,
        None => println!("{}", report.to_json()),
    }
    for r in report.records.iter().filter(|r| !r.pass) {
        eprintln!("FAIL {} n={} error={:e} tolerance={:e}", r.name, r.n, r.max_abs_error, r.tolerance);
    }
    let passed = report.records.iter().filter(|r| r.pass).count();
    eprintln!("{}: {passed}/{} records pass", report.suite, report.records.len());
    Ok(if report.overall_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn verify(a: VerifyArgs) -> Result<ExitCode, Error> {
    let config = VerifyConfig {
        n_list: a.n,
        samples: a.samples,
        seed: a.seed,
        tol_scale: a.tol_scale,
    };
    let report = run_verify(&config, None)?;
    emit_report(&report, a.out.as_ref())
}

fn pullback(a: PullbackArgs) -> Result<ExitCode, Error> {
    let mode = match a.mode {
        ModeArg::Analytic => Mode::Analytic,
        ModeArg::Fd => Mode::Fd,
    };
    let report = run_pullback(a.n, a.samples, a.seed, mode, a.tol_scale, None)?;
    emit_report(&report, a.out.as_ref())
}

fn geodesic(a: GeodesicArgs) -> Result<ExitCode, Error> {
    if !a.alpha.is_finite() {
        return Err(Error::Config(format!("alpha must be finite, got {}", a.alpha)));
    }
    let p0 = match a.p0 {
        Some(w) => Distribution::new(w)?,
        None => Distribution::uniform(a.v0.len())?,
    };
    let v0 = TangentVector::new(p0.clone(), a.v0)?;
    let run = run_geodesic(Alpha::new(a.alpha), &p0, &v0, a.t_end, a.steps, a.out.as_deref())?;
    if a.out.is_none() {
        print!("{}", run.curve.to_csv());
    }
    if let Some(d) = run.closed_form_deviation {
        eprintln!("closed-form deviation at t = {}: {d:e}", a.t_end);
    }
    Ok(ExitCode::SUCCESS)
}

fn natgrad(a: NatgradArgs) -> Result<ExitCode, Error> {
    let n = a
        .target
        .as_ref()
        .or(a.start.as_ref())
        .map(Vec::len)
        .or(a.n)
        .ok_or_else(|| Error::Config("give --n, --target or --start".into()))?;
    if a.n.is_some_and(|m| m != n) {
        return Err(Error::Config(format!("--n {} disagrees with a vector of length {n}", a.n.unwrap_or(0))));
    }
    let target = match a.target {
        Some(w) => Distribution::new(w)?,
        None => Distribution::uniform(n)?,
    };
    let start = a.start.map(Distribution::new).transpose()?;
    let trace = run_natgrad(&target, start.as_ref(), a.iters, a.step, a.seed, a.out.as_deref())?;
    if a.out.is_none() {
        print!("{}", trace.to_csv());
    }
    eprintln!("final loss after {} iterations: {:e}", a.iters, trace.final_loss());
    Ok(ExitCode::SUCCESS)
}
