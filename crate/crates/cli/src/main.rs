use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use triosc_cli::config::{
    parse_complex, parse_config_file, parse_dims, parse_engines, resolve, ScenarioConfig,
    ScenarioOverrides,
};
use triosc_cli::csv::{gnuplot_script, write_csv};
use triosc_cli::scenario::run_scenario;
use triosc_cli::validate::{validate_scenario, FaultInjection};
use triosc_cli::{presets, ScenarioError};

/// Intrinsic-decoherence dynamics of three coupled quantum harmonic
/// oscillators: closed-form photon numbers plus brute-force engines that
/// cross-check them.
#[derive(Parser)]
#[command(name = "triosc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and emit `t,n1,n2,n3,engine` CSV
    Run(RunArgs),
    /// List the built-in figure presets
    Presets,
    /// Run invariant and engine-equivalence checks for a scenario
    Validate(ValidateArgs),
}

#[derive(Args)]
struct ScenarioArgs {
    /// Config file (`key = value` lines, `#` comments); flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Start from a named preset (see `triosc presets`); default fig1b
    #[arg(long)]
    preset: Option<String>,
    /// Oscillator frequency
    #[arg(long)]
    omega: Option<f64>,
    /// Mode 1-2 coupling
    #[arg(long)]
    lambda: Option<f64>,
    /// Mode 3 coupling
    #[arg(long)]
    g: Option<f64>,
    /// Intrinsic decoherence rate
    #[arg(long)]
    gamma: Option<f64>,
    /// Initial coherent amplitude of mode 1 (complex, e.g. `4` or `1+2i`)
    #[arg(long)]
    alpha: Option<String>,
    /// End of the time grid
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    /// Number of grid points (>= 2)
    #[arg(long)]
    steps: Option<usize>,
    /// Comma-separated subset of analytic,coherent,fock,lindblad
    #[arg(long)]
    engines: Option<String>,
    /// Fock truncation, `n` or `n1,n2,n3` (required by fock/lindblad)
    #[arg(long)]
    dims: Option<String>,
    /// Poisson-series tail tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Also write a gnuplot script next to the CSV
    #[arg(long)]
    gnuplot: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Negative control: corrupt an effective frequency on purpose
    #[arg(long, value_enum, default_value_t = FaultArg::None)]
    inject_fault: FaultArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FaultArg {
    None,
    OmegaSkew,
}

impl From<FaultArg> for FaultInjection {
    fn from(value: FaultArg) -> Self {
        match value {
            FaultArg::None => FaultInjection::None,
            FaultArg::OmegaSkew => FaultInjection::SkewOmegaLower,
        }
    }
}

fn build_config(args: &ScenarioArgs) -> Result<ScenarioConfig, ScenarioError> {
    let file = match &args.config {
        Some(path) => Some(parse_config_file(path)?),
        None => None,
    };
    let bad = |message: String| {
        ScenarioError::Config(triosc_cli::ConfigError::Invalid(message))
    };
    let flags = ScenarioOverrides {
        preset: args.preset.clone(),
        omega: args.omega,
        lambda: args.lambda,
        g: args.g,
        gamma: args.gamma,
        alpha: args.alpha.as_deref().map(parse_complex).transpose().map_err(bad)?,
        t_max: args.t_max,
        steps: args.steps,
        engines: args.engines.as_deref().map(parse_engines).transpose().map_err(bad)?,
        dims: args.dims.as_deref().map(parse_dims).transpose().map_err(bad)?,
        tol: args.tol,
        budget: None,
        step: None,
        out: args.out.clone(),
    };
    Ok(resolve(file.as_ref(), &flags)?)
}

fn cmd_run(args: &RunArgs) -> Result<(), ScenarioError> {
    let config = build_config(&args.scenario)?;
    let output = run_scenario(&config)?;

    match &config.out {
        Some(path) => {
            let file = std::fs::File::create(path)?;
            write_csv(std::io::BufWriter::new(file), &output.series)?;
            eprintln!("wrote {}", path.display());
        }
        None => {
            let stdout = std::io::stdout();
            write_csv(stdout.lock(), &output.series)?;
        }
    }

    if let Some(script_path) = &args.gnuplot {
        let csv_name = config
            .out
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "triosc.csv".to_string());
        let engines: Vec<_> = output.series.iter().map(|s| s.engine).collect();
        std::fs::write(script_path, gnuplot_script(&csv_name, &engines))?;
        eprintln!("wrote {}", script_path.display());
    }

    for pair in &output.pair_deviations {
        eprintln!(
            "max |{} - {}| = {:.4e} at t = {:.4}",
            pair.first, pair.second, pair.max_abs, pair.worst_t
        );
    }
    if let Some(leakage) = output.fock_leakage {
        eprintln!("fock truncation leakage = {leakage:.4e}");
    }
    if let Some(drift) = output.lindblad_trace_drift {
        eprintln!(
            "lindblad: step {:.3e}, halving delta {:.3e}, trace drift {:.3e}",
            output.lindblad_step.unwrap_or(f64::NAN),
            output.lindblad_halving_delta.unwrap_or(f64::NAN),
            drift
        );
    }
    Ok(())
}

fn cmd_presets() {
    let mut stdout = std::io::stdout().lock();
    for preset in presets() {
        let p = preset.config.params;
        let _ = writeln!(
            stdout,
            "{:<7} omega={} lambda={} g={} gamma={} alpha={}  # {}",
            preset.name, p.omega, p.lambda, p.g, p.gamma, p.alpha.re, preset.description
        );
    }
}

fn cmd_validate(args: &ValidateArgs) -> Result<bool, ScenarioError> {
    let config = build_config(&args.scenario)?;
    let report = validate_scenario(&config, args.inject_fault.into())?;
    print!("{}", report.render());
    Ok(report.all_passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome: Result<bool, ScenarioError> = match &cli.command {
        Command::Run(args) => cmd_run(args).map(|()| true),
        Command::Presets => {
            cmd_presets();
            Ok(true)
        }
        Command::Validate(args) => cmd_validate(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
