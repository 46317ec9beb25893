use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bargmann::scenario::{emit_outputs, Check, OutputFormat, Scenario};
use bargmann::Error;

#[derive(Parser)]
#[command(name = "bargmann", version, about = "Extended-space mechanics toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario config (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config)
    #[arg(long)]
    output: Option<PathBuf>,
    /// Trajectory output format (overrides the config)
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Integration step (overrides the config)
    #[arg(long)]
    dt: Option<f64>,
    /// Final time (overrides the config)
    #[arg(long)]
    t_end: Option<f64>,
    /// Also write per-charge time series for plotting
    #[arg(long)]
    plot_data: bool,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the scenario and run its trajectory checks
    Simulate(Common),
    /// Verify the conformal symmetry algebra of the free metric
    CheckSymmetries(Common),
    /// Verify the wave-equation reduction for the scenario's potential
    CheckQuantum(Common),
    /// Run every check requested by the scenario
    CheckAll(Common),
}

fn load(common: &Common) -> Result<Scenario, Error> {
    let mut scenario = Scenario::from_path(&common.config)?;
    if let Some(dir) = &common.output {
        scenario.output_dir = dir.clone();
    }
    if let Some(fmt) = common.format {
        scenario.output_format = match fmt {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        };
    }
    if let Some(dt) = common.dt {
        if !(dt > 0.0) {
            return Err(Error::Config(format!("--dt must be positive, got {dt}")));
        }
        scenario.dt_step = dt;
    }
    if let Some(t_end) = common.t_end {
        if !(t_end > scenario.t0) {
            return Err(Error::Config(format!(
                "--t-end = {t_end} must exceed initial.t0 = {}",
                scenario.t0
            )));
        }
        scenario.t_end = t_end;
    }
    Ok(scenario)
}

fn run(command: &Command) -> Result<bool, Error> {
    let common = match command {
        Command::Simulate(c)
        | Command::CheckSymmetries(c)
        | Command::CheckQuantum(c)
        | Command::CheckAll(c) => c,
    };
    let scenario = load(common)?;
    let checks: Vec<Check> = match command {
        Command::Simulate(_) => scenario
            .checks
            .iter()
            .copied()
            .filter(Check::needs_trajectory)
            .collect(),
        Command::CheckSymmetries(_) => vec![Check::Symmetries],
        Command::CheckQuantum(_) => {
            if !matches!(
                scenario.potential,
                bargmann::Potential::Free | bargmann::Potential::Harmonic { .. }
            ) {
                return Err(Error::Config(
                    "check-quantum requires the free or harmonic potential family".into(),
                ));
            }
            vec![Check::Quantum]
        }
        Command::CheckAll(_) => scenario.checks.clone(),
    };
    finish(common, &scenario, checks)
}

fn finish(common: &Common, scenario: &Scenario, checks: Vec<Check>) -> Result<bool, Error> {
    let outcome = scenario.run(&checks)?;
    emit_outputs(&outcome, scenario, common.plot_data)?;
    for check in &outcome.report.checks {
        println!(
            "{}: {} (value {:.3e}, tolerance {:.3e})",
            check.name, check.status, check.value, check.tolerance
        );
    }
    Ok(outcome.report.all_passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
