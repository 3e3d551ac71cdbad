//! Command-line interface to the reaction-diffusion laboratory.
//!
//! Exit codes: 0 on success, 2 on validation failures, 3 on numerical
//! failures.

use clap::{Args, Parser, Subcommand, ValueEnum};
use plaplab::diagnostics::FitKind;
use plaplab::grid::{Field, Grid};
use plaplab::harness::{
    builtin_scenarios, run_scenario, run_sweep, scenario_by_name, write_profile_csv, RunConfig,
    SweepAxis, SweepConfig,
};
use plaplab::layers::{build_stationary_periodic, build_stationary_subcritical, Sign, StepFunction};
use plaplab::potential::{GammaExponent, PotentialParams};
use plaplab::profiles;
use plaplab::solver::{rhs, Scheme, SolverConfig};
use plaplab::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "plaplab",
    about = "Numerical laboratory for bistable reaction-diffusion dynamics with p-Laplacian diffusion",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Diffusion exponent p > 1
    #[arg(long)]
    p: f64,
    /// Well exponent n > 1
    #[arg(long)]
    n: f64,
    /// Interface width ε > 0
    #[arg(long)]
    eps: f64,
}

impl ParamArgs {
    fn build(&self) -> Result<PotentialParams, Error> {
        PotentialParams::new(self.p, self.n, self.eps)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileKindArg {
    /// Standing wave (closed form when n = p)
    Standing,
    /// Standing wave via the integral-inversion path
    StandingInverted,
    /// Periodic orbit of amplitude --sbar
    Periodic,
}

#[derive(Clone, Copy, ValueEnum)]
enum FitArg {
    /// log t against 1/ε
    Exponential,
    /// log t against log(1/ε)
    Algebraic,
}

#[derive(Subcommand)]
enum Command {
    /// Print the closed-form constants c_p, λ_p, C_p, α, k_m, γ as JSON
    Constants {
        #[command(flatten)]
        params: ParamArgs,
        /// How many terms of the exponent sequence k_m to include
        #[arg(long, default_value_t = 8)]
        k_terms: usize,
    },
    /// Emit a stationary profile as CSV (columns x,u)
    Profile {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = ProfileKindArg::Standing)]
        kind: ProfileKindArg,
        /// Amplitude s̄ ∈ (0,1) for periodic profiles
        #[arg(long)]
        sbar: Option<f64>,
        /// Sampling window [from, to]
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        to: f64,
        #[arg(long, default_value_t = 1001)]
        samples: usize,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a stationary state on [a, b] and report its discrete residual
    Stationary {
        #[command(flatten)]
        params: ParamArgs,
        /// Domain endpoints
        #[arg(long, num_args = 2, allow_hyphen_values = true)]
        domain: Vec<f64>,
        /// Jump positions for the subcritical compacton pattern,
        /// comma separated
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        jumps: Option<Vec<f64>>,
        /// Sign of the state on [a, h_1)
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        first_sign: i8,
        /// Number of zeros for the periodic pattern
        #[arg(long)]
        n_layers: Option<usize>,
        #[arg(long, default_value_t = 8.0)]
        cells_per_eps: f64,
        /// Write the state as CSV here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one simulation from a TOML config (flags override file values)
    Simulate {
        /// Run configuration file
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        n: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        cells_per_eps: Option<f64>,
        #[arg(long, value_enum)]
        scheme: Option<SchemeArg>,
        /// Output directory (overrides the config's)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a parameter sweep from a base TOML config
    Sweep {
        /// Base run configuration file
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = AxisArg::Eps)]
        axis: AxisArg,
        /// Axis values, comma separated and increasing
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[arg(long, value_enum)]
        fit: Option<FitArg>,
        /// Output directory (overrides the config's)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run a built-in scenario by name
    Reproduce {
        /// Scenario name; see --list
        name: Option<String>,
        /// Print the registry and exit
        #[arg(long)]
        list: bool,
        /// Confirm running scenarios projected beyond desk scale
        #[arg(long)]
        allow_long: bool,
        /// Output directory for artifacts
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Explicit,
    SemiImplicit,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    Eps,
    P,
    N,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<(), Error> {
    match command {
        Command::Constants { params, k_terms } => constants_cmd(&params, k_terms),
        Command::Profile { params, kind, sbar, from, to, samples, out } => {
            profile_cmd(&params, kind, sbar, from, to, samples, out)
        }
        Command::Stationary { params, domain, jumps, first_sign, n_layers, cells_per_eps, out } => {
            stationary_cmd(&params, &domain, jumps, first_sign, n_layers, cells_per_eps, out)
        }
        Command::Simulate { config, p, n, eps, t_end, cells_per_eps, scheme, out } => {
            simulate_cmd(config, p, n, eps, t_end, cells_per_eps, scheme, out)
        }
        Command::Sweep { config, axis, values, fit, out } => {
            sweep_cmd(config, axis, values, fit, out)
        }
        Command::Reproduce { name, list, allow_long, out } => {
            reproduce_cmd(name, list, allow_long, out)
        }
    }
}

fn constants_cmd(params: &ParamArgs, k_terms: usize) -> Result<(), Error> {
    let pars = params.build()?;
    let c = pars.constants()?;
    let k: Vec<f64> = c.k_seq().take(k_terms.clamp(1, 64)).collect();
    let gamma = match c.gamma_np {
        GammaExponent::Finite(g) => serde_json::json!(g),
        GammaExponent::Unbounded => serde_json::json!("unbounded"),
    };
    let out = serde_json::json!({
        "p": pars.p,
        "n": pars.n,
        "eps": pars.eps,
        "regime": pars.regime(),
        "c_p": c.c_p,
        "lambda_p": c.lambda_p,
        "C_p": c.cap_c_p,
        "alpha": c.alpha,
        "k": k,
        "gamma_np": gamma,
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

fn profile_cmd(
    params: &ParamArgs,
    kind: ProfileKindArg,
    sbar: Option<f64>,
    from: f64,
    to: f64,
    samples: usize,
    out: Option<PathBuf>,
) -> Result<(), Error> {
    let pars = params.build()?;
    if !(from < to) {
        return Err(Error::invalid("from/to", format!("need from < to, got {from}, {to}")));
    }
    let sampler: Box<dyn Fn(f64) -> f64> = match kind {
        ProfileKindArg::Standing => {
            let prof = profiles::standing_wave(&pars)?;
            Box::new(move |x| prof.sample(x))
        }
        ProfileKindArg::StandingInverted => {
            let prof = profiles::standing_wave_inverted(&pars)?;
            Box::new(move |x| prof.sample(x))
        }
        ProfileKindArg::Periodic => {
            let sbar = sbar.ok_or_else(|| {
                Error::invalid("sbar", "periodic profiles need --sbar".to_string())
            })?;
            let prof = profiles::periodic_profile(&pars, sbar)?;
            Box::new(move |x| prof.sample(x))
        }
    };
    match out {
        Some(path) => write_profile_csv(&path, sampler, from, to, samples)?,
        None => {
            println!("x,u");
            let n = samples.max(2);
            for i in 0..n {
                let x = from + (to - from) * i as f64 / (n - 1) as f64;
                println!("{},{}", x, sampler(x));
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn stationary_cmd(
    params: &ParamArgs,
    domain: &[f64],
    jumps: Option<Vec<f64>>,
    first_sign: i8,
    n_layers: Option<usize>,
    cells_per_eps: f64,
    out: Option<PathBuf>,
) -> Result<(), Error> {
    let pars = params.build()?;
    if domain.len() != 2 {
        return Err(Error::invalid("domain", "expected two endpoints".to_string()));
    }
    let (a, b) = (domain[0], domain[1]);
    let grid = Grid::resolving(a, b, pars.eps, cells_per_eps)?;

    let field: Field = match (&jumps, n_layers) {
        (Some(jumps), None) => {
            let v = StepFunction::new(a, b, jumps.clone(), Sign::try_from(first_sign)?)?;
            build_stationary_subcritical(&v, &pars, &grid)?
        }
        (None, Some(n)) => build_stationary_periodic(n, &pars, &grid)?,
        _ => {
            return Err(Error::invalid(
                "initial",
                "give exactly one of --jumps (subcritical) or --n-layers (periodic)".to_string(),
            ))
        }
    };

    let residual = rhs(&field, &pars, &SolverConfig::default());
    let sup_residual = residual.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let report = serde_json::json!({
        "nodes": grid.m,
        "h": grid.h(),
        "sup_residual": sup_residual,
        "sign_changes": field.sign_changes(),
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    if let Some(path) = out {
        write_profile_csv(&path, |x| {
            let i = ((x - grid.a) / grid.h()).round() as usize;
            field.values[i.min(grid.m - 1)]
        }, a, b, grid.m)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn simulate_cmd(
    config: PathBuf,
    p: Option<f64>,
    n: Option<f64>,
    eps: Option<f64>,
    t_end: Option<f64>,
    cells_per_eps: Option<f64>,
    scheme: Option<SchemeArg>,
    out: Option<PathBuf>,
) -> Result<(), Error> {
    let mut cfg = RunConfig::from_toml_file(&config)?;
    if let Some(p) = p {
        cfg.params.p = p;
    }
    if let Some(n) = n {
        cfg.params.n = n;
    }
    if let Some(eps) = eps {
        cfg.params.eps = eps;
    }
    if let Some(t) = t_end {
        cfg.t_end = t;
    }
    if let Some(c) = cells_per_eps {
        cfg.mesh.cells_per_eps = c;
        cfg.mesh.nodes = None;
    }
    if let Some(s) = scheme {
        cfg.solver.scheme = match s {
            SchemeArg::Explicit => Scheme::Explicit,
            SchemeArg::SemiImplicit => Scheme::SemiImplicitLagged,
        };
    }
    if let Some(dir) = out {
        cfg.output.dir = Some(dir);
    }
    let result = run_scenario(&cfg)?;
    print_run_outcome(&result);
    Ok(())
}

fn print_run_outcome(result: &plaplab::harness::ScenarioResult) {
    let first_collapse = result
        .collapse
        .as_ref()
        .and_then(|scan| scan.events.first().map(|e| e.t_collapse));
    let outcome = serde_json::json!({
        "t_final": result.record.t_final,
        "stop": result.record.stop,
        "initial_energy": result.record.initial_energy,
        "final_energy": result.record.final_energy,
        "steps_accepted": result.record.steps_accepted,
        "steps_rejected": result.record.steps_rejected,
        "first_collapse_time": first_collapse,
        "written": result.written,
    });
    println!("{}", serde_json::to_string_pretty(&outcome).expect("json"));
}

fn sweep_cmd(
    config: PathBuf,
    axis: AxisArg,
    values: Vec<f64>,
    fit: Option<FitArg>,
    out: Option<PathBuf>,
) -> Result<(), Error> {
    let mut base = RunConfig::from_toml_file(&config)?;
    if let Some(dir) = out {
        base.output.dir = Some(dir);
    }
    let sweep = SweepConfig {
        base,
        axis: match axis {
            AxisArg::Eps => SweepAxis::Eps,
            AxisArg::P => SweepAxis::P,
            AxisArg::N => SweepAxis::N,
        },
        values,
        fit: fit.map(|f| match f {
            FitArg::Exponential => FitKind::ExponentialInInverseEps,
            FitArg::Algebraic => FitKind::AlgebraicInEps,
        }),
    };
    let result = run_sweep(&sweep)?;
    println!("{}", serde_json::to_string_pretty(&result)?);
    Ok(())
}

fn reproduce_cmd(
    name: Option<String>,
    list: bool,
    allow_long: bool,
    out: Option<PathBuf>,
) -> Result<(), Error> {
    if list || name.is_none() {
        for s in builtin_scenarios() {
            let marker = if s.long_running { " [long]" } else { "" };
            println!("{:<22}{} — {}", s.name, marker, s.description);
        }
        return Ok(());
    }
    let name = name.expect("checked above");
    let scenario = scenario_by_name(&name).ok_or_else(|| {
        Error::invalid("scenario", format!("unknown scenario '{name}'; try --list"))
    })?;
    if scenario.long_running && !allow_long {
        return Err(Error::invalid(
            "scenario",
            format!(
                "'{name}' is projected to run beyond desk scale; pass --allow-long to confirm"
            ),
        ));
    }
    let mut cfg = scenario.config.clone();
    if let Some(dir) = out {
        cfg.output.dir = Some(dir);
    }
    let result = run_scenario(&cfg)?;
    if let Some(expected) = scenario.expected_first_collapse {
        let measured = result
            .collapse
            .as_ref()
            .and_then(|scan| scan.events.first().map(|e| e.t_collapse));
        let verdict = serde_json::json!({
            "scenario": scenario.name,
            "expected_first_collapse_order": expected,
            "measured_first_collapse": measured,
            "within_factor_10": measured
                .map(|t| t >= expected / 10.0 && t <= expected * 10.0),
        });
        println!("{}", serde_json::to_string_pretty(&verdict)?);
    }
    print_run_outcome(&result);
    Ok(())
}
