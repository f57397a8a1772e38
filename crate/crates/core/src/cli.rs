//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for malformed expressions or arguments, 2 for
//! domain, numerical and I/O failures.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::expr::{Expression, FunctionOracle};
use crate::model::{
    bound_y, build_lp, build_milp, export_json, export_lp_format, relax_integrality, solve_lp, ConstraintSystem,
    Objective, ObjectiveSense, SimplexStatus,
};
use crate::partition::{base_partition, detect_breakpoints, Domain, Partition, DEFAULT_GRID_N, DEFAULT_TOL_D};
use crate::relax::{build_chain, refine, RefineReport, StopReason, TriangleChain};

pub const DEFAULT_MAX_PARTS: usize = 10_000;
pub const DEFAULT_SAMPLES: usize = 101;

#[derive(Debug, Parser)]
#[command(name = "polyrelax", version, about = "MILP and LP relaxations of univariate functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build and export the relaxation.
    Relax(CommonArgs),
    /// Print one TSV row of partition statistics.
    Stats(CommonArgs),
    /// Bound y over the relaxation.
    Bound {
        #[arg(value_enum)]
        sense: SenseArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Write envelope samples as CSV.
    Plotdata(CommonArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SenseArg {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormulationArg {
    Milp,
    Lp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Lpfile,
}

/// Refinement tolerance: a non-negative real or `inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eps(pub f64);

impl FromStr for Eps {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let v = match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "infinity" => f64::INFINITY,
            t => t.parse::<f64>().map_err(|e| e.to_string())?,
        };
        if v.is_nan() || v < 0.0 {
            return Err(format!("expected a non-negative number or inf, got {s}"));
        }
        Ok(Eps(v))
    }
}

#[derive(Debug, Args)]
struct CommonArgs {
    #[arg(long = "function")]
    function: String,
    #[arg(long, allow_negative_numbers = true)]
    lower: f64,
    #[arg(long, allow_negative_numbers = true)]
    upper: f64,
    #[arg(long)]
    eps: Option<Eps>,
    #[arg(long = "max-parts")]
    max_parts: Option<usize>,
    #[arg(long, value_enum, default_value = "milp")]
    formulation: FormulationArg,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    breakpoints: Option<Vec<f64>>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub function: String,
    pub lower: f64,
    pub upper: f64,
    pub eps: f64,
    pub max_parts: usize,
    pub formulation: FormulationArg,
    pub format: FormatArg,
    pub breakpoints: Option<Vec<f64>>,
    pub samples: usize,
    pub output: Option<PathBuf>,
}

impl CommonArgs {
    fn resolve(self) -> Result<RunConfig, Error> {
        // --max-parts alone means "spend the budget", as in fixed-budget tables
        let eps = match (self.eps, self.max_parts) {
            (Some(e), _) => e.0,
            (None, Some(_)) => 0.0,
            (None, None) => f64::INFINITY,
        };
        if !(self.lower < self.upper) || !self.lower.is_finite() || !self.upper.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "need finite lower < upper, got [{}, {}]",
                self.lower, self.upper
            )));
        }
        if self.samples < 2 {
            return Err(Error::InvalidArgument(format!("--samples must be at least 2, got {}", self.samples)));
        }
        Ok(RunConfig {
            function: self.function,
            lower: self.lower,
            upper: self.upper,
            eps,
            max_parts: self.max_parts.unwrap_or(DEFAULT_MAX_PARTS),
            formulation: self.formulation,
            format: self.format,
            breakpoints: self.breakpoints,
            samples: self.samples,
            output: self.output,
        })
    }
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Pipeline(Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Pipeline(e) if e.is_parse_error() || matches!(e, Error::InvalidArgument(_)) => 1,
            CliError::Pipeline(_) | CliError::Io(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(m) => f.write_str(m),
            CliError::Pipeline(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Pipeline(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Shared pipeline result: the refined partition and its chain.
pub struct Pipeline {
    pub oracle: Expression,
    pub base: Partition,
    pub report: RefineReport,
    pub chain: TriangleChain,
}

pub fn run_pipeline(cfg: &RunConfig, err: &mut dyn Write) -> CliResult<Pipeline> {
    let oracle = Expression::parse(&cfg.function)?;
    let dom = Domain::new(cfg.lower, cfg.upper)?;
    let bps = match &cfg.breakpoints {
        Some(b) => b.clone(),
        None => detect_breakpoints(&oracle, dom, DEFAULT_GRID_N, dom.default_breakpoint_tol())?,
    };
    let base = base_partition(&oracle, dom, &bps, DEFAULT_TOL_D)?;
    let report = refine(&oracle, &base, cfg.eps, cfg.max_parts)?;
    if report.stop == StopReason::BudgetExhausted && cfg.eps > 0.0 && cfg.eps.is_finite() {
        writeln!(
            err,
            "warning: budget of {} bisections exhausted with bound {} > eps {}",
            cfg.max_parts, report.bound_strength, cfg.eps
        )?;
    }
    let chain = build_chain(&report.partition)?;
    Ok(Pipeline { oracle, base, report, chain })
}

fn build_system(cfg: &RunConfig, chain: &TriangleChain) -> CliResult<ConstraintSystem> {
    let sys = match cfg.formulation {
        FormulationArg::Milp => build_milp(chain)?,
        FormulationArg::Lp => build_lp(chain)?,
    };
    Ok(sys.with_function(cfg.function.clone()))
}

// Writes to the output path, or to stdout when none was given.
fn emit(cfg: &RunConfig, text: &str, out: &mut dyn Write) -> CliResult<bool> {
    match &cfg.output {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Ok(true)
        }
        None => {
            out.write_all(text.as_bytes())?;
            Ok(false)
        }
    }
}

pub fn cmd_relax(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let p = run_pipeline(cfg, err)?;
    let sys = build_system(cfg, &p.chain)?;
    let text = match cfg.format {
        FormatArg::Json => export_json(&sys),
        FormatArg::Lpfile => export_lp_format(&sys)?,
    };
    let summary = format!(
        "k={} bound={} exact={} stop={}",
        p.report.partition.len(),
        real(p.report.bound_strength),
        real(p.report.exact_strength),
        p.report.stop.as_str()
    );
    if emit(cfg, &text, out)? {
        writeln!(out, "{summary}")?;
    } else {
        // stdout already carries the system
        writeln!(err, "{summary}")?;
    }
    Ok(())
}

// shortest round-trip form, with exponents for tiny magnitudes
fn real(v: f64) -> String {
    format!("{v:?}")
}

fn join(points: &[f64]) -> String {
    points.iter().map(|&p| real(p)).collect::<Vec<_>>().join(", ")
}

pub fn cmd_stats(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let p = run_pipeline(cfg, err)?;
    let row = format!(
        "{}\t[{}, {}]\t({})\t{}\t{}\t{}\n",
        cfg.function,
        real(cfg.lower),
        real(cfg.upper),
        join(p.base.points()),
        p.report.partition.len(),
        real(p.report.bound_strength),
        real(p.report.exact_strength)
    );
    emit(cfg, &row, out)?;
    Ok(())
}

pub fn cmd_bound(cfg: &RunConfig, sense: ObjectiveSense, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let p = run_pipeline(cfg, err)?;
    let b = bound_y(&p.chain, sense);
    let sys = match cfg.formulation {
        FormulationArg::Milp => relax_integrality(&build_milp(&p.chain)?),
        FormulationArg::Lp => build_lp(&p.chain)?,
    };
    let r = solve_lp(&sys, &Objective::single(sense, "y"))?;
    if r.status != SimplexStatus::Optimal {
        return Err(CliError::Pipeline(Error::InvalidArgument(format!("simplex ended {:?}", r.status))));
    }
    let line = format!(
        "{} y: milp={} lp={} simplex={} k={}\n",
        sense.as_str(),
        real(b.milp),
        real(b.lp),
        real(r.objective_value),
        p.chain.len()
    );
    emit(cfg, &line, out)?;
    Ok(())
}

pub fn cmd_plotdata(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let p = run_pipeline(cfg, err)?;
    let mut csv = String::from("x,f,under,over\n");
    let n = cfg.samples;
    let step = (cfg.upper - cfg.lower) / (n - 1) as f64;
    for j in 0..n {
        let x = if j == n - 1 { cfg.upper } else { cfg.lower + j as f64 * step };
        let t = p.chain.triangle_at(x).ok_or(Error::InvalidArgument(format!("x = {x} outside the chain")))?;
        let f = p.oracle.value(x)?;
        csv.push_str(&format!("{},{},{},{}\n", real(x), real(f), real(t.lower_at(x)), real(t.upper_at(x))));
    }
    emit(cfg, &csv, out)?;
    Ok(())
}

/// Parses `args` (including the program name) and runs the command; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Relax(a) => a.resolve().map_err(CliError::from).and_then(|c| cmd_relax(&c, out, err)),
        Command::Stats(a) => a.resolve().map_err(CliError::from).and_then(|c| cmd_stats(&c, out, err)),
        Command::Plotdata(a) => a.resolve().map_err(CliError::from).and_then(|c| cmd_plotdata(&c, out, err)),
        Command::Bound { sense, common } => {
            let sense = match sense {
                SenseArg::Min => ObjectiveSense::Min,
                SenseArg::Max => ObjectiveSense::Max,
            };
            common.resolve().map_err(CliError::from).and_then(|c| cmd_bound(&c, sense, out, err))
        }
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
