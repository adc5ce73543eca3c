//! `semirad` — batch front end: single computations, inequality checks, fuzz
//! campaigns, the worked-example audit and the finite-difference application.
//!
//! Exit codes: 0 ok, 1 violation, 2 parse error, 3 domain error, 4 unknown id.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use semirad_core::fuzz::{run_campaign, AKind, CampaignCase, GenSpec, TKind};
use semirad_core::inequalities::{self, lookup, optimize_params, Operands, ParamGrid, Verdict};
use semirad_core::linalg::DEFAULT_RANK_TOL;
use semirad_core::pde::{self, EllipticSpec, PreconditionerKind};
use semirad_core::semihilbert::{a_abs_power, a_adjoint, a_numerical_radius, make_context, op_seminorm};
use semirad_core::{audit, BoundParams, BoundReport, ComplexMatrix, Error, Instance, MatrixFile, C64};

const EXIT_VIOLATION: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_UNKNOWN_ID: u8 = 4;
const REPLAY_TOL: f64 = 1e-12;

#[derive(Parser)]
#[command(name = "semirad", version, about = "A-numerical radius toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single A-quantity of an operator.
    Compute(ComputeArgs),
    /// Evaluate one registry inequality (or replay a persisted case).
    Check(CheckArgs),
    /// Minimize an inequality's right-hand side over a parameter grid.
    Optimize(OptimizeArgs),
    /// Randomized soundness campaign over registry ids.
    Fuzz(FuzzArgs),
    /// Recompute the worked examples and compare with the published values.
    PaperExamples(PaperArgs),
    /// Finite-difference elliptic model problem.
    Pde(PdeArgs),
    /// List registry ids.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum ComputeKind {
    Adjoint,
    Seminorm,
    Radius,
    #[value(name = "abs_power", alias = "abs-power")]
    AbsPower,
}

#[derive(Args)]
struct ContextArgs {
    /// Positive operator A (matrix JSON).
    #[arg(long = "a", value_name = "FILE")]
    a: PathBuf,
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    rank_tol: f64,
}

#[derive(Args)]
struct ComputeArgs {
    #[arg(value_enum)]
    kind: ComputeKind,
    #[command(flatten)]
    ctx: ContextArgs,
    /// Operator T (matrix JSON).
    #[arg(long = "t", value_name = "FILE")]
    t: PathBuf,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Exponent for abs_power.
    #[arg(long)]
    power: Option<f64>,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    alpha_re: Option<f64>,
    #[arg(long)]
    alpha_im: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long = "r")]
    r: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    lam: Option<f64>,
    /// Hölder exponent; q = p/(p−1).
    #[arg(long = "p")]
    p: Option<f64>,
}

impl ParamArgs {
    fn params(&self) -> BoundParams {
        let mut b = BoundParams::default();
        if self.alpha_re.is_some() || self.alpha_im.is_some() {
            b.alpha = C64::new(self.alpha_re.unwrap_or(0.0), self.alpha_im.unwrap_or(0.0));
        }
        b.beta = self.beta.unwrap_or(b.beta);
        b.r = self.r.unwrap_or(b.r);
        b.mu = self.mu.unwrap_or(b.mu);
        b.lam = self.lam.unwrap_or(b.lam);
        match self.p {
            Some(p) => b.with_p(p),
            None => b,
        }
    }
}

#[derive(Args)]
struct InstanceArgs {
    /// Registry id.
    id: Option<String>,
    /// Operand files in the id's operand order (see `semirad list`).
    operands: Vec<PathBuf>,
    #[arg(long = "a", value_name = "FILE")]
    a: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    rank_tol: f64,
    /// Positive scalars for the scalar lemmas, comma separated.
    #[arg(long, value_delimiter = ',')]
    scalars: Vec<f64>,
    /// Radius tolerance (default 1e-8·max(1, largest operand seminorm)).
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Persisted case (a campaign case or a bare instance) to re-evaluate.
    #[arg(long, value_name = "FILE", conflicts_with = "id")]
    replay: Option<PathBuf>,
}

#[derive(Args)]
struct OptimizeArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, value_delimiter = ',')]
    grid_alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    grid_beta: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    grid_r: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    grid_mu: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    grid_lam: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    grid_p: Vec<f64>,
}

#[derive(Args)]
struct FuzzArgs {
    /// Registry ids; none (or `all`) means the whole registry.
    ids: Vec<String>,
    #[arg(long, default_value_t = 4)]
    dim: usize,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// identity | diagonal | dense_psd | rank_deficient:K | mixed
    #[arg(long, default_value = "mixed")]
    a_kind: String,
    /// dense | a_commuting | a_selfadjoint | a_positive
    #[arg(long, default_value = "dense")]
    t_kind: String,
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    /// Where to write the CampaignReport array; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PaperArgs {
    /// Emit rows as JSON instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum PdeReport {
    Stability,
    Precond,
    Convergence,
}

#[derive(Args)]
struct PdeArgs {
    #[arg(value_enum)]
    report: PdeReport,
    /// Interior points N.
    #[arg(long, default_value_t = 16)]
    n: usize,
    /// Coefficients of a(x), constant term first.
    #[arg(long, value_delimiter = ',', default_value = "1,0,1")]
    coeff_a: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    coeff_c: f64,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// jacobi | identity
    #[arg(long, default_value = "jacobi")]
    precond: String,
    #[arg(long, default_value_t = 50)]
    iterations: usize,
    /// Grid sizes for the convergence sweep.
    #[arg(long, value_delimiter = ',', default_value = "15,31,63")]
    ns: Vec<usize>,
    /// CSV destination for the convergence sweep; stdout if absent.
    #[arg(long)]
    csv: Option<PathBuf>,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::UnknownId(_) => EXIT_UNKNOWN_ID,
            e if e.is_parse_error() => EXIT_PARSE,
            _ => EXIT_DOMAIN,
        };
        let mut message = e.to_string();
        if code == EXIT_UNKNOWN_ID {
            message.push_str(&format!("; valid ids: {}", inequalities::ids().collect::<Vec<_>>().join(", ")));
        }
        Failure { code, message }
    }
}

fn parse_failure(message: String) -> Failure {
    Failure { code: EXIT_PARSE, message }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Compute(a) => compute(a),
        Command::Check(a) => check(a),
        Command::Optimize(a) => optimize(a),
        Command::Fuzz(a) => fuzz(a),
        Command::PaperExamples(a) => paper_examples(a),
        Command::Pde(a) => run_pde(a),
        Command::List => list(),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("semirad: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Writes a line to stdout; a closed pipe (`semirad list | head`) is not an error.
fn emit(text: &str) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(Failure { code: EXIT_DOMAIN, message: format!("stdout: {e}") })
        }
        _ => Ok(()),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    emit(&serde_json::to_string_pretty(value).map_err(Error::from)?)
}

fn read_matrix(path: &Path) -> Result<ComplexMatrix, Failure> {
    Ok(MatrixFile::read(path)?.matrix)
}

fn matrix_json(m: &ComplexMatrix) -> Result<serde_json::Value, Failure> {
    Ok(serde_json::to_value(m).map_err(Error::from)?)
}

fn compute(args: ComputeArgs) -> CmdResult {
    let a = read_matrix(&args.ctx.a)?;
    let t = read_matrix(&args.t)?;
    let ctx = make_context(&a, args.ctx.rank_tol)?;
    let (key, value) = match args.kind {
        ComputeKind::Adjoint => ("matrix", matrix_json(&a_adjoint(&ctx, &t)?)?),
        ComputeKind::Seminorm => ("value", json!(op_seminorm(&ctx, &t)?)),
        ComputeKind::Radius => ("value", json!(a_numerical_radius(&ctx, &t, args.tol)?)),
        ComputeKind::AbsPower => {
            let p = args.power.ok_or_else(|| Failure::from(Error::DomainViolation("abs_power needs --power".into())))?;
            ("matrix", matrix_json(&a_abs_power(&ctx, &t, p)?)?)
        }
    };
    let kind = args.kind.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let mut out = json!({ "kind": kind, "tol": args.tol, "rank": ctx.rank() });
    out[key] = value;
    print_json(&out)?;
    Ok(0)
}

fn build_instance(args: &InstanceArgs) -> Result<Instance, Failure> {
    let id = args.id.as_deref().ok_or_else(|| parse_failure("an inequality id is required".into()))?;
    let entry = lookup(id)?;
    if args.operands.len() != entry.operands.len() {
        return Err(Failure::from(Error::InvalidSpec(format!(
            "`{}` takes {} operand file(s) ({}), got {}",
            entry.id,
            entry.operands.len(),
            entry.operands.join(", "),
            args.operands.len()
        ))));
    }
    let mut operands = Operands::new();
    for (name, path) in entry.operands.iter().zip(&args.operands) {
        operands.insert(name.to_string(), read_matrix(path)?);
    }
    let a = match &args.a {
        Some(path) => read_matrix(path)?,
        None => {
            // Scalar lemmas need no geometry; everything else defaults to A = I.
            let n = operands.values().next().map_or(1, |m| m.rows());
            ComplexMatrix::identity(n)
        }
    };
    Ok(Instance {
        id: entry.id.to_string(),
        a,
        rank_tol: args.rank_tol,
        operands,
        scalars: args.scalars.clone(),
        params: args.params.params(),
        tol: args.tol,
    })
}

fn verdict_code(report: &BoundReport) -> u8 {
    if report.verdict() == Verdict::Violated {
        EXIT_VIOLATION
    } else {
        0
    }
}

fn check(args: CheckArgs) -> CmdResult {
    if let Some(path) = &args.replay {
        return replay(path);
    }
    let report = build_instance(&args.instance)?.evaluate()?;
    print_json(&report)?;
    Ok(verdict_code(&report))
}

fn replay(path: &Path) -> CmdResult {
    let text = fs::read_to_string(path).map_err(|e| parse_failure(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(Error::from)?;
    let (instance, stored): (Instance, Option<BoundReport>) = if value.get("instance").is_some() {
        let case: CampaignCase = serde_json::from_value(value).map_err(Error::from)?;
        (case.instance, Some(case.report))
    } else {
        (serde_json::from_value(value).map_err(Error::from)?, None)
    };
    let report = instance.evaluate()?;
    let mut code = verdict_code(&report);
    let mut out = json!({ "report": report });
    if let Some(stored) = stored {
        let diff = (report.lhs - stored.lhs).abs().max((report.rhs - stored.rhs).abs());
        let reproduced = diff <= REPLAY_TOL;
        out["stored_lhs"] = json!(stored.lhs);
        out["stored_rhs"] = json!(stored.rhs);
        out["max_abs_diff"] = json!(diff);
        out["reproduced"] = json!(reproduced);
        if !reproduced {
            eprintln!("semirad: replay differs from stored report by {diff:e}");
            code = EXIT_VIOLATION;
        }
    }
    print_json(&out)?;
    Ok(code)
}

fn optimize(args: OptimizeArgs) -> CmdResult {
    let inst = build_instance(&args.instance)?;
    let ctx = make_context(&inst.a, inst.rank_tol)?;
    let grid = ParamGrid {
        alpha: args.grid_alpha.iter().map(|&a| C64::new(a, 0.0)).collect(),
        beta: args.grid_beta,
        r: args.grid_r,
        mu: args.grid_mu,
        lam: args.grid_lam,
        p: args.grid_p,
    };
    let report = optimize_params(&ctx, &inst.id, &inst.operands, &inst.scalars, &inst.params, &grid, inst.tol)?;
    print_json(&report)?;
    Ok(verdict_code(&report))
}

fn fuzz(args: FuzzArgs) -> CmdResult {
    let ids: Vec<&str> = if args.ids.is_empty() || args.ids.iter().any(|i| i == "all") {
        inequalities::ids().collect()
    } else {
        args.ids.iter().map(String::as_str).collect()
    };
    let gen = GenSpec {
        dim: args.dim,
        a_kind: args.a_kind.parse::<AKind>()?,
        t_kind: args.t_kind.parse::<TKind>()?,
        scale: args.scale,
        seed: args.seed,
    };
    let reports = run_campaign(&ids, &gen, args.trials)?;
    let text = serde_json::to_string_pretty(&reports).map_err(Error::from)?;
    match &args.out {
        Some(path) => {
            fs::write(path, text + "\n").map_err(|e| Failure { code: EXIT_DOMAIN, message: format!("{}: {e}", path.display()) })?;
            for r in &reports {
                let fmt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:+.3e}"));
                emit(&format!(
                    "{:<16} trials {:>6}  violations {:>5}  min_rel_slack {:>11}  mean_rel_slack {:>11}",
                    r.inequality_id,
                    r.trials,
                    r.violations,
                    fmt(r.min_rel_slack),
                    fmt(r.mean_rel_slack)
                ))?;
            }
        }
        None => emit(&text)?,
    }
    let violated = reports.iter().any(|r| r.violations > 0);
    Ok(if violated { EXIT_VIOLATION } else { 0 })
}

fn paper_examples(args: PaperArgs) -> CmdResult {
    let rows = audit::paper_examples()?;
    if args.json {
        print_json(&rows)?;
    } else {
        emit(audit::render_table(&rows).trim_end())?;
    }
    Ok(0)
}

fn run_pde(args: PdeArgs) -> CmdResult {
    let spec = EllipticSpec { n_points: args.n, coeff_a: args.coeff_a.clone(), coeff_c: args.coeff_c };
    match args.report {
        PdeReport::Stability => print_json(&pde::stability_report(&spec, args.tol, args.seed)?)?,
        PdeReport::Precond => {
            let kind: PreconditionerKind = args.precond.parse()?;
            print_json(&pde::preconditioner_report(&spec, kind, args.iterations, args.seed)?)?;
        }
        PdeReport::Convergence => {
            let rows = pde::convergence_sweep(&spec, &args.ns, args.tol)?;
            match &args.csv {
                Some(path) => {
                    let file = fs::File::create(path)
                        .map_err(|e| Failure { code: EXIT_DOMAIN, message: format!("{}: {e}", path.display()) })?;
                    pde::write_convergence_csv(&rows, file)?;
                }
                None => pde::write_convergence_csv(&rows, std::io::stdout())?,
            }
        }
    }
    Ok(0)
}

fn list() -> CmdResult {
    for e in inequalities::registry() {
        emit(&format!("{:<16} {:<14} {}", e.id, e.operands.join(","), e.summary))?;
    }
    Ok(0)
}
