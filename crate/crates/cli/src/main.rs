use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use magnus_cli::commands::{self, ExternalCurve, RegimeOutput};
use magnus_cli::output::Table;
use magnus_cli::{CliError, ScenarioConfig};

#[derive(Parser)]
#[command(
    name = "magnus",
    version,
    about = "Coarse-grained Magnus effective Hamiltonians for a driven two-level system"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fidelity of each model against exact propagation, as CSV
    Simulate(Common),
    /// Validity ratios for the coarse-graining window
    Regime(Common),
    /// Stark and Bloch-Siegert shifts with a Floquet cross-check
    Shifts(Common),
    /// Simulate and merge an externally computed fidelity curve
    CompareExternal {
        #[command(flatten)]
        common: Common,
        /// CSV with columns t_over_period and fidelity
        #[arg(long)]
        external: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    /// Scenario file of `key = value` lines
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exit with status 3 when the regime check warns
    #[arg(long)]
    strict_regime: bool,
    /// Threshold a ratio must reach to count as "much greater"
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    steps_per_period: Option<usize>,
    /// Frame the propagators are compared in (lab, interaction or bar)
    #[arg(long)]
    frame: Option<String>,
    /// Reserved; every computation is deterministic
    #[arg(long)]
    seed: Option<u64>,
}

impl Common {
    fn load(&self) -> Result<ScenarioConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::config("config", format!("cannot read {}: {e}", path.display())))?;
                ScenarioConfig::parse(&text)?
            }
            None => ScenarioConfig::default(),
        };
        if let Some(k) = self.kappa {
            cfg.kappa = k;
        }
        if let Some(n) = self.steps_per_period {
            cfg.steps_per_period = n;
        }
        if let Some(f) = &self.frame {
            cfg.set("frame", f)?;
        }
        if let Some(out) = &self.out {
            cfg.out = Some(out.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn emit(cfg: &ScenarioConfig, text: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn check_regime(cfg: &ScenarioConfig, strict: bool) -> Result<RegimeOutput, CliError> {
    let r = commands::regime(cfg)?;
    if !r.passes() {
        if strict {
            return Err(CliError::Regime(format!(
                "verdict {} for the {} regime",
                r.report.verdict, r.report.case
            )));
        }
        eprintln!("warning: regime check did not pass; run `magnus regime` for details");
    }
    Ok(r)
}

fn write_table(cfg: &ScenarioConfig, table: &Table, command: &str) -> Result<(), CliError> {
    emit(cfg, &table.to_csv_string(cfg, command)?)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(c) => {
            let cfg = c.load()?;
            check_regime(&cfg, c.strict_regime)?;
            write_table(&cfg, &commands::simulate_table(&cfg)?, "simulate")
        }
        Command::Regime(c) => {
            let cfg = c.load()?;
            let r = commands::regime(&cfg)?;
            emit(&cfg, &commands::render_regime(&r)?)?;
            if c.strict_regime && !r.passes() {
                return Err(CliError::Regime(format!("verdict {}", r.report.verdict)));
            }
            Ok(())
        }
        Command::Shifts(c) => {
            let cfg = c.load()?;
            emit(&cfg, &commands::shifts(&cfg)?)
        }
        Command::CompareExternal { common, external } => {
            let cfg = common.load()?;
            check_regime(&cfg, common.strict_regime)?;
            let curve = ExternalCurve::from_path(&external)?;
            write_table(&cfg, &commands::compare_external(&cfg, &curve)?, "compare-external")
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
