//! Command-line front end: solve models by asymptotic iteration, check
//! them against the truncated-matrix oracle, and regenerate the
//! built-in benchmark tables.

mod config;
mod output;
mod tables;

use std::path::PathBuf;
use std::process::ExitCode;

use bosonaim::aim::{
    decompose_chains, solve_expression, solve_su2, ChainDecomposition, EigenResult,
};
use bosonaim::models::{exact_reference, ExactFamily, Su2Model};
use bosonaim::oracle::{
    eig_general, single_mode_matrix, su2_matrix, two_mode_block, Complex, SpectrumReport,
    Truncation,
};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use config::{CliOverrides, ConfigError, Model, RunConfig};
use output::{render_compare, render_oracle, render_solve, CompareOutput, CompareRow, OracleView};

#[derive(Parser)]
#[command(
    name = "bosonaim",
    version,
    about = "Eigenvalues of bosonic and su(2) algebraic Hamiltonians by asymptotic iteration",
    after_help = "Environment:\n  AIM_PRECISION=standard|extended  arithmetic used by the iteration engine"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a model by asymptotic iteration
    Solve(RunArgs),
    /// Diagonalize the truncated or finite matrix of a model
    Oracle(RunArgs),
    /// Side-by-side iteration vs oracle vs closed form
    Compare(RunArgs),
    /// Print a built-in benchmark table (I: anharmonic, II: bistable, III: su(2))
    Table {
        /// Which table: I, II or III
        which: String,
    },
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Model family: anharmonic|bistable|su2|two-mode|custom
    #[arg(long)]
    model: Option<String>,
    /// Quartic strength of the anharmonic oscillator
    #[arg(long)]
    alpha: Option<f64>,
    /// Mode frequency
    #[arg(long)]
    omega: Option<f64>,
    /// Two-photon / exchange coupling strength
    #[arg(long)]
    kappa: Option<f64>,
    /// Kerr-like nonlinearity of the bistable medium
    #[arg(long = "Omega")]
    omega_nl: Option<f64>,
    /// Photons absorbed from mode b per exchange (two-mode)
    #[arg(long)]
    r: Option<u32>,
    /// Photons created in mode a per exchange (two-mode), or the
    /// ladder power of the su(2) coupling
    #[arg(long)]
    s: Option<u32>,
    /// Spin of the su(2) representation (integer or half-integer, e.g. 3 or 1/2)
    #[arg(long)]
    j: Option<String>,
    /// Total boson number of the two-mode block (the conserved charge
    /// itself when r != s)
    #[arg(long = "N")]
    n_total: Option<u64>,
    /// Iteration depth
    #[arg(long)]
    depth: Option<usize>,
    /// Oracle truncation
    #[arg(long)]
    nmax: Option<u64>,
    /// How many eigenvalues to print
    #[arg(long)]
    levels: Option<usize>,
    /// Convergence / comparison tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Output format: text|json|csv
    #[arg(long)]
    output: Option<String>,
    /// JSON config file; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Custom Hamiltonian JSON (model=custom)
    #[arg(long)]
    seed_file: Option<PathBuf>,
}

impl From<&RunArgs> for CliOverrides {
    fn from(a: &RunArgs) -> Self {
        CliOverrides {
            model: a.model.clone(),
            alpha: a.alpha,
            omega: a.omega,
            kappa: a.kappa,
            omega_nl: a.omega_nl,
            r: a.r,
            s: a.s,
            j: a.j.clone(),
            n_total: a.n_total,
            depth: a.depth,
            nmax: a.nmax,
            levels: a.levels,
            tol: a.tol,
            output: a.output.clone(),
            config: a.config.clone(),
            seed_file: a.seed_file.clone(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{e}");
                    ExitCode::from(1)
                }
            }
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    };
    ExitCode::from(code)
}

fn run(cli: Cli) -> Result<u8, ConfigError> {
    match cli.command {
        Command::Solve(args) => cmd_solve(&RunConfig::resolve(&(&args).into())?),
        Command::Oracle(args) => cmd_oracle(&RunConfig::resolve(&(&args).into())?),
        Command::Compare(args) => cmd_compare(&RunConfig::resolve(&(&args).into())?),
        Command::Table { which } => cmd_table(&which),
    }
}

fn engine_error(e: impl std::fmt::Display) -> ConfigError {
    ConfigError(e.to_string())
}

/// Pad the root search window to the Gershgorin enclosure of a finite
/// su(2) model, unless the configuration pinned the interval.
fn su2_interval(model: &Su2Model) -> (f64, f64) {
    let rec = model.recurrence();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..model.dim() {
        let center = rec.coeff(0, i);
        let radius: f64 = rec
            .offsets()
            .iter()
            .filter(|&&d| d != 0)
            .map(|&d| rec.coeff(d, i).abs())
            .sum();
        lo = lo.min(center - radius);
        hi = hi.max(center + radius);
    }
    (lo - 1.0, hi + 1.0)
}

fn aim_result(config: &RunConfig) -> Result<EigenResult, ConfigError> {
    match config.model {
        Model::Su2 | Model::TwoMode => {
            let model = config.su2_model()?;
            let mut options = config.aim.clone();
            if !config.interval_explicit {
                options.root_interval = su2_interval(&model);
            }
            solve_su2(&model, &options).map_err(engine_error)
        }
        _ => {
            let expr = config.expression()?;
            solve_expression(&expr, &config.aim).map_err(engine_error)
        }
    }
}

fn cmd_solve(config: &RunConfig) -> Result<u8, ConfigError> {
    let mut result = aim_result(config)?;
    result.roots.truncate(config.levels);
    print!("{}", render_solve(config, &result));
    let complete = result.roots.len() == config.levels && result.all_converged();
    Ok(if complete { 0 } else { 2 })
}

fn oracle_reports(config: &RunConfig) -> Result<Vec<SpectrumReport>, ConfigError> {
    match config.model {
        Model::Su2 => {
            let report = eig_general(&su2_matrix(&config.su2_model()?)).map_err(engine_error)?;
            Ok(vec![report])
        }
        Model::TwoMode => {
            let matrix = two_mode_block(&config.two_mode_params(), config.two_mode_charge())
                .map_err(engine_error)?;
            let mut report = eig_general(&matrix).map_err(engine_error)?;
            report.truncation = Truncation::Block(format!("charge {}", config.two_mode_charge()));
            Ok(vec![report])
        }
        _ => {
            let expr = config.expression()?;
            let rec = expr.to_recurrence().map_err(engine_error)?;
            match decompose_chains(&rec).map_err(engine_error)? {
                ChainDecomposition::Diagonal => {
                    let eigenvalues = (0..=config.oracle_n_max)
                        .map(|n| Complex::new(rec.coeff(0, n), 0.0))
                        .collect();
                    Ok(vec![SpectrumReport {
                        eigenvalues,
                        truncation: Truncation::NMax(config.oracle_n_max),
                        residual_bound: 0.0,
                    }])
                }
                ChainDecomposition::Chains(chains) => chains
                    .iter()
                    .map(|chain| {
                        let matrix = single_mode_matrix(&expr, chain, config.oracle_n_max)
                            .map_err(engine_error)?;
                        let mut report = eig_general(&matrix).map_err(engine_error)?;
                        report.truncation = Truncation::NMax(config.oracle_n_max);
                        Ok(report)
                    })
                    .collect(),
            }
        }
    }
}

fn cmd_oracle(config: &RunConfig) -> Result<u8, ConfigError> {
    let reports = oracle_reports(config)?;
    let view = OracleView::merge(&reports, config.levels);
    print!("{}", render_oracle(config, &view));
    Ok(0)
}

fn exact_family(config: &RunConfig) -> Option<ExactFamily> {
    match config.model {
        Model::Bistable if config.omega_nl == 0.0 => {
            Some(ExactFamily::Bistable(bosonaim::models::BistableParams {
                omega: config.omega,
                kappa: config.kappa,
                omega_nl: 0.0,
            }))
        }
        Model::Su2 | Model::TwoMode => {
            let model = config.su2_model().ok()?;
            (model.s() == 1 || model.kappa == 0.0).then_some(ExactFamily::Su2(model))
        }
        _ => None,
    }
}

fn cmd_compare(config: &RunConfig) -> Result<u8, ConfigError> {
    let mut aim = aim_result(config)?;
    aim.roots.truncate(config.levels);
    let reports = oracle_reports(config)?;
    let oracle = OracleView::merge(&reports, config.levels);
    let family = exact_family(config);

    let count = aim.roots.len().min(oracle.eigenvalues.len());
    let mut rows = Vec::with_capacity(count);
    let mut max_rel: f64 = 0.0;
    for n in 0..count {
        let aim_value = aim.roots[n].value;
        let oracle_value = oracle.eigenvalues[n].0;
        let exact = family
            .as_ref()
            .and_then(|f| exact_reference(f, n as u64).ok());
        let abs_dev = (aim_value - oracle_value).abs();
        let rel_dev = abs_dev / oracle_value.abs().max(1.0);
        max_rel = max_rel.max(rel_dev);
        rows.push(CompareRow {
            n,
            aim: aim_value,
            oracle: oracle_value,
            exact,
            abs_dev,
            rel_dev,
        });
    }
    let report = CompareOutput {
        model: config.model.name().to_string(),
        parameters: config.describe_parameters(),
        tolerance: config.tol,
        rows,
        max_rel_dev: max_rel,
        within_tolerance: max_rel <= config.tol,
    };
    print!("{}", render_compare(config, &report));
    Ok(if report.within_tolerance && count == config.levels {
        0
    } else {
        2
    })
}

fn cmd_table(which: &str) -> Result<u8, ConfigError> {
    let report = match which.to_ascii_uppercase().as_str() {
        "I" => tables::table_anharmonic(),
        "II" => tables::table_bistable(),
        "III" => tables::table_su2(),
        other => {
            return Err(ConfigError(format!(
                "table: unknown table '{other}' (expected I, II or III)"
            )))
        }
    };
    print!("{}", report.text);
    Ok(0)
}
