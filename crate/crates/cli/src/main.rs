mod commands;
mod grid;
mod report;
mod selftest;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gapprob::GapError;
use rayon::prelude::*;

use commands::Arc;
use grid::Grid;
use report::{write_records, Format, Record};

#[derive(Parser, Debug)]
#[command(name = "gapprob", version, about = "Gap probabilities of CUE arcs and the sine kernel")]
struct Cli {
    /// Output layout.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Angle {
    /// Arc parameter in radians, in (0, pi].
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// `pi - alpha`, for arcs close to the full circle.
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
}

impl Angle {
    fn arc(&self) -> Arc {
        match (self.alpha, self.beta) {
            (Some(a), _) => Arc::Alpha(a),
            (_, Some(b)) => Arc::Beta(b),
            _ => unreachable!("clap enforces one of --alpha/--beta"),
        }
    }
}

#[derive(Args, Debug)]
struct Point {
    /// Matrix dimension.
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    angle: Angle,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// zeta'(-1) and the constant c0.
    Constants {
        #[arg(long)]
        digits: Option<u32>,
    },
    /// The Toeplitz determinant D_n.
    Toeplitz {
        #[command(flatten)]
        point: Point,
        /// Working precision; defaults to what the conditioning needs.
        #[arg(long)]
        digits: Option<u32>,
        /// Report ln D_n instead of D_n.
        #[arg(long)]
        log: bool,
    },
    /// det(I - gamma K) for the sine kernel on (0, 2s).
    Fredholm {
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long)]
        quad_order: Option<usize>,
    },
    /// Delta(n, alpha) from the determinant and its large-n form.
    Delta {
        #[command(flatten)]
        point: Point,
        #[arg(long, allow_negative_numbers = true)]
        fd_step: Option<f64>,
    },
    /// Theta(n, alpha) from consecutive determinants.
    Theta {
        #[command(flatten)]
        point: Point,
    },
    /// eta(t) and the residual of the sigma form of Painleve VI.
    Painleve {
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
        fd_step: f64,
    },
    /// c0 extrapolated from Toeplitz determinants.
    WidomFit {
        #[arg(long, default_value = "100:400:x2")]
        n: Grid,
        #[arg(long, default_value_t = 1.2, allow_negative_numbers = true)]
        alpha: f64,
    },
    /// c0 extrapolated from sine-kernel determinants.
    DysonFit {
        #[arg(long, default_value = "3,4.5,6")]
        s: Grid,
        #[arg(long)]
        quad_order: Option<usize>,
    },
    /// Both sides of the integrated Delta identity between alpha and alpha0.
    Dinteg {
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = 2.8, allow_negative_numbers = true)]
        alpha0: f64,
        /// Gauss-Legendre nodes for the outer integral.
        #[arg(long, default_value_t = 32)]
        quad_order: usize,
    },
    /// One quantity over a grid of parameters.
    Sweep(SweepArgs),
    /// Quick invariant checks on every route.
    Selftest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Quantity {
    Toeplitz,
    Fredholm,
    Delta,
    Theta,
    Painleve,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_enum)]
    quantity: Quantity,
    #[arg(long)]
    n: Option<Grid>,
    #[arg(long, conflicts_with = "beta")]
    alpha: Option<Grid>,
    #[arg(long)]
    beta: Option<Grid>,
    #[arg(long)]
    s: Option<Grid>,
    #[arg(long)]
    gamma: Option<Grid>,
    #[arg(long)]
    digits: Option<u32>,
    #[arg(long)]
    quad_order: Option<usize>,
    #[arg(long)]
    fd_step: Option<f64>,
    /// Worker threads; output order never depends on it.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    log: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<GapError> for Failure {
    fn from(e: GapError) -> Self {
        Failure { code: if e.is_numerical_fault() { 3 } else { 2 }, message: e.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

#[derive(Debug, Clone, Copy)]
enum Job {
    Arc { n: usize, arc: Arc },
    Gap { s: f64, gamma: f64 },
}

fn sweep_jobs(a: &SweepArgs) -> Result<Vec<Job>, Failure> {
    let unused = |name: &str, present: bool| {
        if present {
            Err(invalid(format!("--{name} does not apply to a {:?} sweep", a.quantity).to_lowercase()))
        } else {
            Ok(())
        }
    };
    let mut jobs = Vec::new();
    match a.quantity {
        Quantity::Fredholm => {
            unused("n", a.n.is_some())?;
            unused("alpha", a.alpha.is_some())?;
            unused("beta", a.beta.is_some())?;
            unused("digits", a.digits.is_some())?;
            unused("fd-step", a.fd_step.is_some())?;
            unused("log", a.log)?;
            let s = a.s.as_ref().ok_or_else(|| invalid("a fredholm sweep needs --s"))?;
            let gamma = a.gamma.clone().unwrap_or(Grid(vec![1.0]));
            for &s in &s.0 {
                for &g in &gamma.0 {
                    jobs.push(Job::Gap { s, gamma: g });
                }
            }
        }
        q => {
            unused("s", a.s.is_some())?;
            unused("gamma", a.gamma.is_some())?;
            unused("quad-order", a.quad_order.is_some())?;
            unused("digits", q != Quantity::Toeplitz && a.digits.is_some())?;
            unused("log", q != Quantity::Toeplitz && a.log)?;
            unused("fd-step", matches!(q, Quantity::Toeplitz | Quantity::Theta) && a.fd_step.is_some())?;
            let ns = a.n.as_ref().ok_or_else(|| invalid("this sweep needs --n"))?.dims().map_err(invalid)?;
            let arcs: Vec<Arc> = match (&a.alpha, &a.beta) {
                (Some(g), _) => g.0.iter().map(|&v| Arc::Alpha(v)).collect(),
                (_, Some(g)) => g.0.iter().map(|&v| Arc::Beta(v)).collect(),
                _ => return Err(invalid("this sweep needs --alpha or --beta")),
            };
            for &n in &ns {
                for &arc in &arcs {
                    jobs.push(Job::Arc { n, arc });
                }
            }
        }
    }
    Ok(jobs)
}

fn sweep_point(a: &SweepArgs, job: Job) -> gapprob::Result<Record> {
    match (a.quantity, job) {
        (Quantity::Fredholm, Job::Gap { s, gamma }) => commands::fredholm(s, gamma, a.quad_order),
        (Quantity::Toeplitz, Job::Arc { n, arc }) => commands::toeplitz(n, arc, a.digits, a.log),
        (Quantity::Delta, Job::Arc { n, arc }) => commands::delta(n, arc, a.fd_step),
        (Quantity::Theta, Job::Arc { n, arc }) => commands::theta(n, arc),
        (Quantity::Painleve, Job::Arc { n, arc }) => commands::painleve(n, arc, a.fd_step.unwrap_or(1e-3)),
        _ => unreachable!("jobs are built per quantity"),
    }
}

/// Records computed before a failure are still returned, in order.
fn sweep(a: &SweepArgs) -> (Vec<Record>, Option<Failure>) {
    let jobs = match sweep_jobs(a) {
        Ok(j) => j,
        Err(f) => return (Vec::new(), Some(f)),
    };
    if a.jobs == 0 {
        return (Vec::new(), Some(invalid("--jobs must be >= 1")));
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(a.jobs).build() {
        Ok(p) => p,
        Err(e) => return (Vec::new(), Some(invalid(format!("cannot start {} workers: {e}", a.jobs)))),
    };
    let results: Vec<gapprob::Result<Record>> =
        pool.install(|| jobs.par_iter().map(|&j| sweep_point(a, j)).collect());
    let mut out = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(rec) => out.push(rec),
            Err(e) => return (out, Some(e.into())),
        }
    }
    (out, None)
}

fn one(r: gapprob::Result<Record>) -> (Vec<Record>, Option<Failure>) {
    match r {
        Ok(rec) => (vec![rec], None),
        Err(e) => (Vec::new(), Some(e.into())),
    }
}

fn execute(cmd: &Command) -> (Vec<Record>, Option<Failure>) {
    match cmd {
        Command::Constants { digits } => one(commands::constants(*digits)),
        Command::Toeplitz { point, digits, log } => {
            one(commands::toeplitz(point.n, point.angle.arc(), *digits, *log))
        }
        Command::Fredholm { s, gamma, quad_order } => one(commands::fredholm(*s, *gamma, *quad_order)),
        Command::Delta { point, fd_step } => one(commands::delta(point.n, point.angle.arc(), *fd_step)),
        Command::Theta { point } => one(commands::theta(point.n, point.angle.arc())),
        Command::Painleve { point, fd_step } => one(commands::painleve(point.n, point.angle.arc(), *fd_step)),
        Command::WidomFit { n, alpha } => match n.dims() {
            Ok(ns) => one(commands::widom_fit(&ns, *alpha)),
            Err(m) => (Vec::new(), Some(invalid(m))),
        },
        Command::DysonFit { s, quad_order } => one(commands::dyson_fit(&s.0, *quad_order)),
        Command::Dinteg { point, alpha0, quad_order } => {
            one(commands::dinteg(point.n, point.angle.arc(), *alpha0, *quad_order))
        }
        Command::Sweep(a) => sweep(a),
        Command::Selftest => match selftest::run() {
            Ok((records, true)) => (records, None),
            Ok((records, false)) => {
                let failed = records
                    .iter()
                    .filter(|r| r.outputs.get("pass") == Some(&false.into()))
                    .filter_map(|r| r.inputs.get("check").and_then(|v| v.as_str()))
                    .collect::<Vec<_>>()
                    .join(", ");
                (records, Some(Failure { code: 3, message: format!("selftest failed: {failed}") }))
            }
            Err(e) => (Vec::new(), Some(e.into())),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let text = e.to_string();
            let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("error: bad arguments");
            eprintln!("{line}");
            return ExitCode::from(2);
        }
        Err(e) => {
            // --help, --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let (records, failure) = execute(&cli.command);
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = write_records(&records, cli.format, &mut stdout) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: cannot write output: {e}");
            return ExitCode::from(1);
        }
    }
    let _ = stdout.flush();
    match failure {
        None => ExitCode::SUCCESS,
        Some(f) => {
            eprintln!("error: {}", f.message.replace('\n', " "));
            ExitCode::from(f.code)
        }
    }
}
