//! Command-line front end: `nodes`, `quad-test`, `solve`, `converge`, `compare`.
//!
//! Exit codes: 0 success, 1 solver or I/O failure, 2 usage error.

pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::problem::{problem_by_name, ProblemSpec};
use crate::solver::{Method, QuadratureRule, SolverConfig};

use commands::{
    compare, converge, node_table, quad_test, solution_dump, solve_summary, Integrand, SweepSettings,
};
use config::FileConfig;
use report::{fmt_f64, write_table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "mhf-fie", version, about = "Mapped Hermite collocation for weakly singular integral equations")]
pub struct Cli {
    /// TOML file with default settings; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dump MHF-Gauss nodes and weights as `j,z,x,chi`.
    Nodes(NodesArgs),
    /// Quadrature error against a reference value, per N.
    QuadTest(QuadArgs),
    /// Solve one problem and print a summary.
    Solve(SolveArgs),
    /// Convergence sweep over an N list.
    Converge(Common),
    /// Node-value discrepancy between the two collocation methods.
    Compare(Common),
}

#[derive(Debug, Args)]
pub struct NodesArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Degree N (N + 1 nodes).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QuadArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub n_list: Option<Vec<usize>>,
    /// sqrt-logweight, log-logweight, moments or zero.
    #[arg(long)]
    pub integrand: String,
    /// Power of the logit for `moments`.
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long)]
    pub problem: Option<String>,
    /// mhf or smoothed.
    #[arg(long)]
    pub method: Option<String>,
    /// product or gauss.
    #[arg(long)]
    pub rule: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub alpha2: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub n_list: Option<Vec<usize>>,
    /// NI - N; defaults to 0 for the product rule and 1 for the Gauss rule.
    #[arg(long)]
    pub ni_offset: Option<usize>,
    #[arg(long)]
    pub newton_tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: Common,
    /// Degree N; defaults to the first entry of the N list.
    #[arg(long)]
    pub n: Option<usize>,
    /// Quadrature degree NI; overrides the offset.
    #[arg(long)]
    pub ni: Option<usize>,
    /// CSV of the solution on the evaluation grid.
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

impl Common {
    fn flags(&self) -> FileConfig {
        FileConfig {
            problem: self.problem.clone(),
            method: self.method.clone(),
            rule: self.rule.clone(),
            alpha: self.alpha,
            alpha2: self.alpha2,
            n_list: self.n_list.clone(),
            ni_offset: self.ni_offset,
            newton_tol: self.newton_tol,
            out: self.out.clone(),
        }
    }
}

/// Problem and solver settings after merging file and flags.
struct Resolved {
    problem: ProblemSpec,
    sweep: SweepSettings,
    n_list: Vec<usize>,
    out: Option<PathBuf>,
}

fn resolve(cfg: FileConfig) -> Result<Resolved> {
    let name = cfg
        .problem
        .ok_or_else(|| Error::Config("no problem given (--problem or `problem` key)".into()))?;
    let problem = problem_by_name(&name)?;
    let method: Method = cfg.method.as_deref().unwrap_or("mhf").parse()?;
    let rule: QuadratureRule = cfg.rule.as_deref().unwrap_or("product").parse()?;
    let alpha = cfg.alpha.unwrap_or(problem.default_alpha);
    let mut base = SolverConfig::new(0, alpha)
        .with_method(method)
        .with_alpha2(cfg.alpha2.unwrap_or(alpha));
    base.rule = rule;
    if let Some(tol) = cfg.newton_tol {
        base.newton.tol = tol;
    }
    let n_list = cfg.n_list.unwrap_or_default();
    let sweep = SweepSettings {
        base,
        ni_offset: cfg.ni_offset.unwrap_or(rule.default_ni_offset()),
    };
    for &n in &n_list {
        sweep.config(n).validate(problem.dimension())?;
    }
    Ok(Resolved {
        problem,
        sweep,
        n_list,
        out: cfg.out,
    })
}

fn need<T>(v: Option<T>, what: &str) -> Result<T> {
    v.ok_or_else(|| Error::Config(format!("missing {what}")))
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Unknown { .. } | Error::Config(_) | Error::Contract(_) | Error::Domain(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn run_nodes(args: NodesArgs, file: FileConfig) -> Result<i32> {
    let alpha = need(args.alpha.or(file.alpha), "--alpha")?;
    let n = need(args.n.or(file.n_list.and_then(|l| l.first().copied())), "--n")?;
    let rows = node_table(alpha, n)?;
    let rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![r.j.to_string(), fmt_f64(r.z), fmt_f64(r.x), fmt_f64(r.chi)])
        .collect();
    write_table(sink(&args.out.or(file.out))?, &["j", "z", "x", "chi"], &rows)?;
    Ok(EXIT_OK)
}

fn run_quad(args: QuadArgs, file: FileConfig) -> Result<i32> {
    let alpha = need(args.alpha.or(file.alpha), "--alpha")?;
    let ns = need(args.n_list.or(file.n_list), "--n-list")?;
    let mut integrand: Integrand = args.integrand.parse()?;
    if let Integrand::Moment(_) = integrand {
        integrand = Integrand::Moment(args.k);
    }
    let rows = quad_test(alpha, &ns, integrand)?;
    let rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![r.n.to_string(), fmt_f64(r.value), fmt_f64(r.error)])
        .collect();
    write_table(sink(&args.out.or(file.out))?, &["N", "value", "error"], &rows)?;
    Ok(EXIT_OK)
}

fn run_solve(args: SolveArgs, file: FileConfig) -> Result<i32> {
    let r = resolve(file.overridden_by(args.common.flags()))?;
    let n = need(args.n.or(r.n_list.first().copied()), "--n")?;
    let mut cfg = r.sweep.config(n);
    if let Some(ni) = args.ni {
        cfg.ni = ni;
    }
    cfg.validate(r.problem.dimension())?;
    let s = solve_summary(&r.problem, &cfg)?;
    let mut out = sink(&r.out)?;
    writeln!(out, "problem: {}", r.problem.name)?;
    writeln!(out, "method: {}", cfg.method)?;
    writeln!(out, "rule: {}", cfg.rule)?;
    writeln!(out, "N: {}", cfg.n)?;
    writeln!(out, "NI: {}", cfg.ni)?;
    writeln!(out, "alpha: {}", cfg.alpha)?;
    if r.problem.dimension() == 2 {
        writeln!(out, "alpha2: {}", cfg.alpha2)?;
    }
    writeln!(out, "newton_iters: {}", s.solution.newton_iters)?;
    writeln!(out, "residual: {:e}", s.solution.final_residual)?;
    writeln!(out, "err_inf: {}", fmt_f64(s.err_inf))?;
    writeln!(out, "err_l2chi: {}", fmt_f64(s.err_l2chi))?;
    writeln!(out, "err_colloc: {}", fmt_f64(s.err_colloc))?;
    writeln!(out, "runtime_ms: {:.3}", s.runtime_ms)?;
    if let Some(path) = args.dump {
        let header: &[&str] = if r.problem.dimension() == 1 { &["x", "u"] } else { &["x", "y", "u"] };
        let rows: Vec<Vec<String>> = solution_dump(&s.solution)
            .into_iter()
            .map(|row| row.into_iter().map(fmt_f64).collect())
            .collect();
        write_table(File::create(path)?, header, &rows)?;
    }
    Ok(EXIT_OK)
}

fn run_converge(args: Common, file: FileConfig) -> Result<i32> {
    let r = resolve(file.overridden_by(args.flags()))?;
    if r.n_list.is_empty() {
        return Err(Error::Config("empty N list".into()));
    }
    let report = converge(&r.problem, &r.sweep, &r.n_list);
    match &r.out {
        Some(path) => report.save(path)?,
        None => report.write_csv(io::stdout().lock())?,
    }
    Ok(if report.any_failed() { EXIT_FAILURE } else { EXIT_OK })
}

fn run_compare(args: Common, file: FileConfig) -> Result<i32> {
    let r = resolve(file.overridden_by(args.flags()))?;
    if r.n_list.is_empty() {
        return Err(Error::Config("empty N list".into()));
    }
    let rows = compare(&r.problem, &r.sweep, &r.n_list)?;
    let all_pass = rows.iter().all(|row| row.pass);
    let rows: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            vec![
                row.n.to_string(),
                row.ni.to_string(),
                fmt_f64(row.alpha),
                fmt_f64(row.max_diff),
                row.pass.to_string(),
            ]
        })
        .collect();
    write_table(sink(&r.out)?, &["N", "NI", "alpha", "max_diff", "pass"], &rows)?;
    Ok(if all_pass { EXIT_OK } else { EXIT_FAILURE })
}

pub fn execute(cli: Cli) -> Result<i32> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Nodes(a) => run_nodes(a, file),
        Command::QuadTest(a) => run_quad(a, file),
        Command::Solve(a) => run_solve(a, file),
        Command::Converge(a) => run_converge(a, file),
        Command::Compare(a) => run_compare(a, file),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
