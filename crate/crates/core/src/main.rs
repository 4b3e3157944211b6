//! Thin command-line wrapper over the library: certificate emission, solves,
//! sweeps and barrier checks. Exit codes: 0 pass/converged, 1 verification
//! failed, 2 parse or parameter error, 3 solver nonconvergence.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hesseq::cone::{tangent_cone_plus_test, Verdict};
use hesseq::config::{load_operator, ProblemConfig, RunConfig};
use hesseq::error::Error;
use hesseq::fieldio::{read_scalar_field_on, write_scalar_field};
use hesseq::grid::ScalarField;
use hesseq::jsonfmt::to_json;
use hesseq::solver::{
    barrier_check, continuity_solve, newton_solve, sweep_psi_amplitude, SolveReport,
};
use hesseq::symfun::Spectrum;
use hesseq::verify::{
    verify_concave, verify_delta, verify_growth, verify_monotone, verify_r40,
    verify_subsolution, verify_sum_fi_lambdai, Certificate, ConeTestOptions, GrowthCondition,
    SubsolutionMode,
};

#[derive(Parser)]
#[command(
    name = "hesseq",
    about = "Certificates and Dirichlet solves for fully nonlinear elliptic equations of eigenvalue type",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify structure conditions of an operator family
    VerifyOperator(VerifyOperatorArgs),
    /// Tangent-cone membership certificate for one point
    VerifyCone(VerifyConeArgs),
    /// Subsolution certificate for a problem file
    VerifySubsolution(VerifySubsolutionArgs),
    /// Solve the Dirichlet problem from a problem file
    Solve(SolveArgs),
    /// Sweep the right-hand-side amplitude and report estimate ratios
    Sweep(SweepArgs),
    /// Barrier diagnostic on a solved field
    BarrierCheck(BarrierArgs),
    /// Execute a single-file run configuration
    Run(RunArgs),
}

#[derive(Args)]
struct VerifyOperatorArgs {
    /// Operator spec: inline JSON or a path to a JSON file
    #[arg(long)]
    spec: String,
    /// Comma-separated condition ids (1.4, 1.5, 1.6, 1.11, 1.12, 5.1, 5.2,
    /// 5.4, 5.5) or "all"
    #[arg(long, default_value = "all")]
    conditions: String,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// delta_0 for condition 1.12
    #[arg(long, default_value_t = 0.2)]
    delta0: f64,
    /// inf psi for condition 1.6
    #[arg(long, default_value_t = 1.0)]
    psi_inf: f64,
    /// Level for the 5.x conditions (defaults per family)
    #[arg(long)]
    sigma: Option<f64>,
    /// Certificate output path (JSON array)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyConeArgs {
    #[arg(long)]
    spec: String,
    #[arg(long)]
    sigma: f64,
    /// Point to test, comma-separated ("2,2,2")
    #[arg(long)]
    mu: String,
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    #[arg(long, default_value_t = 10.0)]
    radius: f64,
    #[arg(long, default_value_t = 256)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifySubsolutionArgs {
    #[arg(long)]
    problem: PathBuf,
    /// "inequality" (pointwise F >= psi) or "cone" (tangent-cone test)
    #[arg(long, default_value = "inequality")]
    mode: String,
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    #[arg(long, default_value_t = 10.0)]
    radius: f64,
    #[arg(long, default_value_t = 64)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    problem: PathBuf,
    /// Override the problem file's method: "newton" or "continuity"
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Report output (JSON)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Solution field output (binary field file)
    #[arg(long)]
    field: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    problem: PathBuf,
    /// Swept parameter; only "psi_amp" is defined
    #[arg(long, default_value = "psi_amp")]
    param: String,
    /// start:end:count, e.g. 0:1:11
    #[arg(long, default_value = "0:1:11")]
    range: String,
    /// Constant floor the amplitude interpolates from
    #[arg(long, default_value_t = 1.0)]
    floor: f64,
    #[arg(long)]
    tol: Option<f64>,
    /// CSV output path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BarrierArgs {
    #[arg(long)]
    problem: PathBuf,
    /// Solved field (binary field file)
    #[arg(long)]
    solution: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    t: f64,
    /// Quadratic coefficient N in v = (u - ubar) + t d - N d^2/2
    #[arg(long, default_value_t = 1.0)]
    n_coeff: f64,
    #[arg(long, default_value_t = 0.25)]
    delta: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Run configuration file (JSON)
    #[arg(long)]
    config: PathBuf,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Nonconvergence { .. } | Error::LinearSolve { .. } => 3,
        Error::NotAdmissible { .. } => 1,
        _ => 2,
    }
}

fn emit(out: &Option<PathBuf>, json: &str) -> Result<(), Error> {
    if let Some(path) = out {
        std::fs::write(path, json)?;
    }
    Ok(())
}

fn parse_mu(s: &str) -> Result<Spectrum, Error> {
    let values: Result<Vec<f64>, _> = s.split(',').map(|t| t.trim().parse::<f64>()).collect();
    let values = values.map_err(|e| Error::Parse {
        path: "--mu".into(),
        msg: e.to_string(),
    })?;
    Spectrum::new(values)
}

fn print_certificate_line(c: &Certificate) {
    let verdict = if c.passed() { "pass" } else { "FAIL" };
    let witness = c
        .witnesses
        .first()
        .map(|w| format!("  worst {:?} -> {:.6e}", w.spectrum, w.value))
        .unwrap_or_default();
    println!(
        "  {:<22} {:<4}  margin {: >13.6e}{witness}",
        format!("{:?}", c.condition),
        verdict,
        c.margin
    );
}

fn run_verify_operator(args: &VerifyOperatorArgs) -> Result<u8, Error> {
    let spec = load_operator(&args.spec)?;
    let all = args.conditions.trim() == "all";
    let wanted: Vec<&str> = args.conditions.split(',').map(|s| s.trim()).collect();
    let has = |id: &str| all || wanted.contains(&id);
    let sigma = args.sigma.unwrap_or(if spec.sup_boundary_f().is_finite() {
        spec.sup_boundary_f() + 1.0
    } else {
        0.0
    });
    let mut certs: Vec<Certificate> = Vec::new();
    println!(
        "operator {} on n = {}",
        serde_json::to_string(&spec)?,
        spec.n
    );
    if has("1.4") {
        certs.push(verify_monotone(&spec, args.samples, args.seed)?);
    }
    if has("1.5") {
        certs.push(verify_concave(&spec, args.samples, args.seed)?);
    }
    if has("1.6") {
        certs.push(verify_delta(&spec, args.psi_inf));
    }
    if has("1.11") {
        certs.push(verify_sum_fi_lambdai(&spec, args.samples, args.seed)?);
    }
    if has("1.12") {
        certs.push(verify_r40(
            &spec,
            args.delta0,
            args.samples.min(2000),
            args.seed,
        )?);
    }
    let shells = args.samples.min(500);
    if has("5.1") {
        certs.push(verify_growth(
            &spec,
            GrowthCondition::R10,
            sigma,
            &[1e-1, 1e-2, 1e-3, 1e-4, 1e-5],
            shells,
            args.seed,
        )?);
    }
    if has("5.2") {
        certs.push(verify_growth(
            &spec,
            GrowthCondition::R20,
            sigma,
            &[2.0, 8.0, 32.0],
            shells,
            args.seed,
        )?);
    }
    if has("5.4") {
        certs.push(verify_growth(
            &spec,
            GrowthCondition::R20Prime,
            sigma,
            &[2.0, 8.0, 32.0],
            shells,
            args.seed,
        )?);
    }
    if has("5.5") {
        certs.push(verify_growth(
            &spec,
            GrowthCondition::R30,
            sigma,
            &[2.0, 8.0, 32.0],
            shells,
            args.seed,
        )?);
    }
    if certs.is_empty() {
        return Err(Error::Parameter(format!(
            "no recognized conditions in '{}'",
            args.conditions
        )));
    }
    for c in &certs {
        print_certificate_line(c);
    }
    emit(&args.out, &to_json(&certs)?)?;
    Ok(if certs.iter().all(|c| c.passed()) { 0 } else { 1 })
}

fn run_verify_cone(args: &VerifyConeArgs) -> Result<u8, Error> {
    let spec = load_operator(&args.spec)?;
    let mu = parse_mu(&args.mu)?;
    let cert = tangent_cone_plus_test(
        &spec,
        args.sigma,
        &mu,
        args.epsilon,
        args.radius,
        args.samples,
        args.seed,
    )?;
    println!(
        "tangent-cone test at sigma = {}, R = {}: {:?} (theta estimate {:.6e})",
        args.sigma, args.radius, cert.verdict, cert.theta_estimate
    );
    emit(&args.out, &to_json(&cert)?)?;
    Ok(if cert.verdict == Verdict::Pass { 0 } else { 1 })
}

fn run_verify_subsolution(args: &VerifySubsolutionArgs) -> Result<u8, Error> {
    let (p, _) = ProblemConfig::load(&args.problem)?;
    let mode = match args.mode.as_str() {
        "inequality" => SubsolutionMode::Inequality19,
        "cone" => SubsolutionMode::Cone110,
        other => {
            return Err(Error::Parameter(format!(
                "unknown mode '{other}' (expected inequality or cone)"
            )))
        }
    };
    let cert = verify_subsolution(
        &p.ubar,
        &p.chi,
        &p.psi,
        &p.grid,
        &p.op,
        mode,
        &ConeTestOptions {
            epsilon: args.epsilon,
            radius: args.radius,
            n_samples: args.samples,
            seed: args.seed,
        },
    )?;
    print_certificate_line(&cert);
    emit(&args.out, &to_json(&cert)?)?;
    Ok(if cert.passed() { 0 } else { 1 })
}

fn print_report(report: &SolveReport) {
    println!(
        "converged: residual {:.3e}, newton {}, krylov {}, stages {}, {:.2}s",
        report.residual_inf,
        report.newton_iters,
        report.krylov_iters,
        report.continuation_steps,
        report.wall_time_s
    );
    println!(
        "  max |Hess u| interior {:.6e}, boundary {:.6e}, max |grad u| {:.6e}",
        report.max_hess_interior, report.max_hess_boundary, report.max_grad
    );
}

fn run_solve(args: &SolveArgs) -> Result<u8, Error> {
    let (p, mut solver_cfg) = ProblemConfig::load(&args.problem)?;
    if let Some(m) = &args.method {
        solver_cfg.method = m.clone();
    }
    if let Some(t) = args.tol {
        solver_cfg.tol = t;
    }
    if let Some(s) = args.steps {
        solver_cfg.steps = s;
    }
    let result = match solver_cfg.method.as_str() {
        "newton" => newton_solve(&p, &p.ubar.clone(), solver_cfg.tol, solver_cfg.max_iters),
        "continuity" => continuity_solve(&p, solver_cfg.steps, solver_cfg.tol),
        other => {
            return Err(Error::Parameter(format!(
                "unknown method '{other}' (expected newton or continuity)"
            )))
        }
    };
    match result {
        Ok((u, report)) => {
            print_report(&report);
            if let Some(out) = &args.out {
                std::fs::write(out, to_json(&report)?)?;
            }
            if let Some(field) = &args.field {
                write_scalar_field(field, &p.grid, &u)?;
            }
            Ok(0)
        }
        Err(e @ (Error::Nonconvergence { .. } | Error::LinearSolve { .. })) => {
            let snapshot = args
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("solve_report.json"))
                .with_extension("snapshot.json");
            let detail = serde_json::json!({
                "error": e.to_string(),
                "problem": args.problem.display().to_string(),
                "method": solver_cfg.method,
            });
            std::fs::write(&snapshot, to_json(&detail)?)?;
            eprintln!("nonconvergence; state snapshot at {}", snapshot.display());
            Err(e)
        }
        Err(e) => Err(e),
    }
}

fn run_sweep(args: &SweepArgs) -> Result<u8, Error> {
    if args.param != "psi_amp" {
        return Err(Error::Parameter(format!(
            "unknown sweep parameter '{}' (only psi_amp is defined)",
            args.param
        )));
    }
    let parts: Vec<&str> = args.range.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Parameter(format!(
            "range must be start:end:count, got '{}'",
            args.range
        )));
    }
    let (start, end, count): (f64, f64, usize) = (
        parts[0]
            .parse()
            .map_err(|_| Error::Parameter("bad range start".into()))?,
        parts[1]
            .parse()
            .map_err(|_| Error::Parameter("bad range end".into()))?,
        parts[2]
            .parse()
            .map_err(|_| Error::Parameter("bad range count".into()))?,
    );
    if (start, end) != (0.0, 1.0) {
        return Err(Error::Parameter(
            "psi_amp sweeps run over 0:1:<count>".into(),
        ));
    }
    let (p, solver_cfg) = ProblemConfig::load(&args.problem)?;
    let floor = ScalarField::constant(&p.grid, args.floor);
    let report = sweep_psi_amplitude(&p, &floor, count, args.tol.unwrap_or(solver_cfg.tol))?;
    let mut csv =
        String::from("s,max_hess_interior,max_hess_boundary,max_grad,residual,iters\n");
    for row in &report.rows {
        csv.push_str(&format!(
            "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{}\n",
            row.s,
            row.max_hess_interior,
            row.max_hess_boundary,
            row.max_grad,
            row.residual,
            row.iters
        ));
    }
    std::fs::write(&args.out, csv)?;
    println!(
        "swept {} amplitudes; empirical C1 = {:.6e}; table at {}",
        report.rows.len(),
        report.empirical_c1,
        args.out.display()
    );
    Ok(0)
}

fn run_barrier(args: &BarrierArgs) -> Result<u8, Error> {
    let (p, _) = ProblemConfig::load(&args.problem)?;
    let u = read_scalar_field_on(&args.solution, &p.grid)?;
    let cert = barrier_check(&u, &p.ubar.clone(), &p, args.t, args.n_coeff, args.delta)?;
    println!(
        "barrier: min v = {:.6e}, epsilon = {:.6e}, {:?}",
        cert.min_v, cert.epsilon, cert.verdict
    );
    emit(&args.out, &to_json(&cert)?)?;
    Ok(if cert.verdict == Verdict::Pass { 0 } else { 1 })
}

fn run_config(args: &RunArgs) -> Result<u8, Error> {
    let cfg = RunConfig::load(&args.config)?;
    match cfg.command.as_str() {
        "verify-operator" => {
            let spec = cfg.spec.ok_or_else(|| {
                Error::Parameter("verify-operator run config needs an inline \"spec\"".into())
            })?;
            run_verify_operator(&VerifyOperatorArgs {
                spec: serde_json::to_string(&spec)?,
                conditions: cfg
                    .conditions
                    .map(|c| c.join(","))
                    .unwrap_or_else(|| "all".into()),
                samples: cfg.samples,
                seed: cfg.seed,
                delta0: 0.2,
                psi_inf: 1.0,
                sigma: cfg.sigma,
                out: cfg.out,
            })
        }
        "verify-cone" => {
            let spec = cfg.spec.ok_or_else(|| {
                Error::Parameter("verify-cone run config needs an inline \"spec\"".into())
            })?;
            let mu = cfg
                .mu
                .ok_or_else(|| Error::Parameter("verify-cone needs \"mu\"".into()))?;
            run_verify_cone(&VerifyConeArgs {
                spec: serde_json::to_string(&spec)?,
                sigma: cfg.sigma.unwrap_or(1.0),
                mu: mu
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
                epsilon: cfg.epsilon.unwrap_or(0.05),
                radius: cfg.radius.unwrap_or(10.0),
                samples: cfg.samples,
                seed: cfg.seed,
                out: cfg.out,
            })
        }
        "solve" => {
            let problem = cfg
                .problem
                .ok_or_else(|| Error::Parameter("solve run config needs \"problem\"".into()))?;
            run_solve(&SolveArgs {
                problem,
                method: None,
                tol: None,
                steps: None,
                out: cfg.out,
                field: None,
            })
        }
        other => Err(Error::Parameter(format!("unknown run command '{other}'"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::VerifyOperator(args) => run_verify_operator(args),
        Command::VerifyCone(args) => run_verify_cone(args),
        Command::VerifySubsolution(args) => run_verify_subsolution(args),
        Command::Solve(args) => run_solve(args),
        Command::Sweep(args) => run_sweep(args),
        Command::BarrierCheck(args) => run_barrier(args),
        Command::Run(args) => run_config(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
