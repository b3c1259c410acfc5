use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use effimetrics::report::{self, RunConfig};

/// Market-efficiency measures and nearest-neighbor direction forecasting
/// over rolling windows of daily price series.
#[derive(Parser)]
#[command(name = "effimetrics", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-window DFA Hurst estimates plus scale,fluctuation CSVs
    Hurst(CommonArgs),
    /// Per-window approximate entropy
    Apen(CommonArgs),
    /// Walk-forward direction forecasts and hit-rates
    Predict(CommonArgs),
    /// Full rolling pipeline: summaries, correlations, flat CSV
    Pipeline(CommonArgs),
    /// Emit the configured synthetic panel as price CSVs
    Synth(CommonArgs),
    /// Project a pipeline summary.json onto scatter axes
    Scatter(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Flat key = value configuration file
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output directory for artifacts
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Seed override (wins over config file and --set)
    #[arg(long)]
    seed: Option<u64>,

    /// Input price CSVs, directories of CSVs, or a summary.json for scatter
    #[arg(long)]
    input: Vec<PathBuf>,

    /// Single-key overrides, e.g. --set nn_k=50 (win over the config file)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl CommonArgs {
    fn build_config(&self) -> Result<RunConfig, report::ReportError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        for pair in &self.set {
            let (key, value) = pair.split_once('=').ok_or_else(|| {
                report::ReportError::BadValue {
                    key: pair.clone(),
                    message: "expected KEY=VALUE".to_string(),
                }
            })?;
            cfg.apply_kv(key.trim(), value.trim())?;
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<report::Artifacts, report::ReportError> {
    match &cli.command {
        Command::Hurst(args) => report::cmd_hurst(&args.build_config()?, &args.input, &args.out),
        Command::Apen(args) => report::cmd_apen(&args.build_config()?, &args.input, &args.out),
        Command::Predict(args) => {
            report::cmd_predict(&args.build_config()?, &args.input, &args.out)
        }
        Command::Pipeline(args) => {
            report::cmd_pipeline(&args.build_config()?, &args.input, &args.out)
        }
        Command::Synth(args) => report::cmd_synth(&args.build_config()?, &args.out),
        Command::Scatter(args) => {
            args.build_config()?;
            report::cmd_scatter(&args.input, &args.out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(artifacts) => {
            for path in &artifacts.written {
                println!("wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
