//! `ftrsec`: secrecy metrics for wiretap links under fluctuating two-ray
//! fading. Exit codes: 0 ok, 2 configuration/usage error, 3 numerical
//! non-convergence, 4 validation or oracle failure, 1 i/o failure.

use clap::{Args, Parser, Subcommand};
use ftrsec::config::ScenarioConfig;
use ftrsec::report::{
    cmd_metric, cmd_sweep, cmd_truncation, cmd_validate, gnuplot_script, CommandOutput, Metric,
    MetricFlags, SweepRequest, SweepVar,
};
use ftrsec::{FtrError, Result};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "ftrsec",
    version,
    about = "Physical-layer secrecy metrics over fluctuating two-ray fading channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Scenario file: flat `key = value` lines with dotted sections
    #[arg(long)]
    config: PathBuf,
    /// Override mc.seed from the scenario file
    #[arg(long)]
    seed: Option<u64>,
    /// Write the report/CSV to this path instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Series truncation orders and mass defects for both channels
    Truncation {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Evaluate one secrecy metric (closed form)
    Metric {
        #[command(flatten)]
        common: CommonArgs,
        /// asc | sop | sopl | spsc
        #[arg(long)]
        metric: Metric,
        /// Cross-check against the quadrature oracle; disagreement exits 4
        #[arg(long)]
        oracle: bool,
        /// Add a seeded Monte Carlo estimate with its standard error
        #[arg(long)]
        mc: bool,
    },
    /// Sweep one scenario variable and emit CSV
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// asc | sop | sopl | spsc
        #[arg(long)]
        metric: Metric,
        /// gamma_d_db | gamma_e_db | rho_db | rate
        #[arg(long)]
        var: SweepVar,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        /// Grid points, endpoints included
        #[arg(long, default_value_t = 21)]
        points: usize,
        /// Fill the oracle column; any disagreement exits 4
        #[arg(long)]
        oracle: bool,
        /// Fill the Monte Carlo columns
        #[arg(long)]
        mc: bool,
        /// Also write a gnuplot companion script next to --out
        #[arg(long)]
        gnuplot: bool,
    },
    /// Run the full analytic-vs-Monte-Carlo validation gate
    Validate {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn load(common: &CommonArgs) -> Result<ScenarioConfig> {
    let mut config = ScenarioConfig::load(&common.config)?;
    if let Some(seed) = common.seed {
        config.mc.seed = seed;
    }
    Ok(config)
}

fn deliver(common: &CommonArgs, text: &str) -> Result<()> {
    match &common.out {
        Some(path) => std::fs::write(path, text).map_err(FtrError::Io),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<CommandOutput> {
    match cli.command {
        Command::Truncation { common } => {
            let config = load(&common)?;
            let text = cmd_truncation(&config)?;
            deliver(&common, &text)?;
            Ok(CommandOutput {
                text,
                gate_failed: false,
            })
        }
        Command::Metric {
            common,
            metric,
            oracle,
            mc,
        } => {
            let config = load(&common)?;
            let out = cmd_metric(&config, metric, &MetricFlags { oracle, mc })?;
            deliver(&common, &out.text)?;
            Ok(out)
        }
        Command::Sweep {
            common,
            metric,
            var,
            from,
            to,
            points,
            oracle,
            mc,
            gnuplot,
        } => {
            if gnuplot && common.out.is_none() {
                return Err(FtrError::InvalidParam(
                    "--gnuplot needs --out so the script can reference the CSV".into(),
                ));
            }
            let config = load(&common)?;
            let req = SweepRequest {
                var,
                from,
                to,
                points,
                metric,
                oracle,
                mc,
            };
            let out = cmd_sweep(&config, &req)?;
            deliver(&common, &out.text)?;
            if gnuplot {
                let csv = common.out.as_deref().expect("checked above");
                let script_path = csv.with_extension("gp");
                let csv_name = csv
                    .file_name()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| csv.display().to_string());
                std::fs::write(&script_path, gnuplot_script(&csv_name, &req))
                    .map_err(FtrError::Io)?;
            }
            Ok(out)
        }
        Command::Validate { common } => {
            let config = load(&common)?;
            let out = cmd_validate(&config)?;
            deliver(&common, &out.text)?;
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            if out.gate_failed {
                ExitCode::from(4)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
