use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use quantum_forest::cli::{self, ForecastOptions, Mode, ReproduceOptions};
use quantum_forest::forest::{load_forest, ForestParams};
use quantum_forest::metrics::Metric;
use quantum_forest::qae::{QaeConfig, Target};
use quantum_forest::{Error, Result};

#[derive(Parser)]
#[command(name = "qforest", version, about = "Simulated quantum forecasting for random forest regression")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Classical,
    Quantum,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Beta,
    R,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random forest file.
    Generate {
        #[arg(long, default_value_t = 2)]
        trees: usize,
        #[arg(long, default_value_t = 2)]
        height: usize,
        /// Comma-separated attribute kinds: real, binary, discrete:a/b/c
        #[arg(long, default_value = "binary,binary,binary")]
        attrs: String,
        /// Leaf label range lo:hi
        #[arg(long, default_value = "10:20", allow_hyphen_values = true)]
        range: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Forecast one input object classically, on the simulator, or both.
    Forecast {
        #[arg(long)]
        forest: PathBuf,
        /// Comma-separated values or a path to a file holding them
        #[arg(long, allow_hyphen_values = true)]
        input: String,
        #[arg(long, value_enum, default_value = "both")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "beta")]
        target: TargetArg,
        #[arg(long, default_value_t = 32)]
        t: usize,
        /// Target failure probability; sets the repetition count
        #[arg(long, conflicts_with = "reps")]
        delta: Option<f64>,
        /// Odd repetition count
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the two-tree, height-2, t=32 experiment once per seed.
    Reproduce {
        #[arg(long, default_value_t = 10)]
        runs: u64,
        #[arg(long, default_value_t = 0)]
        first_seed: u64,
        #[arg(long, default_value_t = 32)]
        t: usize,
        #[arg(long, default_value = "10:20", allow_hyphen_values = true)]
        range: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Error metrics over a two-column (truth, forecast) file.
    Metrics {
        #[arg(long)]
        pairs: PathBuf,
        /// Comma-separated subset of mae,mse,rmse,mape,wmape,smape
        #[arg(long, default_value = "mae,mse,rmse,mape,wmape,smape")]
        metrics: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn emit(text: String, out: Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate {
            trees,
            height,
            attrs,
            range,
            seed,
            out,
        } => {
            let params = ForestParams {
                num_trees: trees,
                height,
                schema: cli::parse_schema(&attrs)?,
                value_range: cli::parse_range(&range)?,
            };
            cli::cmd_generate(&params, seed, &out)?;
            Ok(())
        }
        Command::Forecast {
            forest,
            input,
            mode,
            target,
            t,
            delta,
            reps,
            seed,
            format,
            out,
        } => {
            let text = fs::read_to_string(&forest)?;
            let forest = load_forest(&text)?;
            let x = cli::parse_input(&input)?;
            let mut qae = QaeConfig::new(t)?.with_seed(seed).with_target(match target {
                TargetArg::Beta => Target::Beta,
                TargetArg::R => Target::R,
            });
            if let Some(d) = delta {
                qae = qae.with_delta(d)?;
            } else if let Some(r) = reps {
                qae = qae.with_repetitions(r)?;
            }
            let opts = ForecastOptions {
                mode: match mode {
                    ModeArg::Classical => Mode::Classical,
                    ModeArg::Quantum => Mode::Quantum,
                    ModeArg::Both => Mode::Both,
                },
                qae,
            };
            let report = cli::cmd_forecast(&forest, &x, &opts)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            emit(
                match format {
                    Format::Text => report.to_text(),
                    Format::Structured => report.to_json(),
                },
                out,
            )
        }
        Command::Reproduce {
            runs,
            first_seed,
            t,
            range,
            format,
            out,
        } => {
            let opts = ReproduceOptions {
                seeds: (first_seed..first_seed + runs).collect(),
                t,
                value_range: cli::parse_range(&range)?,
            };
            let report = cli::cmd_reproduce(&opts)?;
            emit(
                match format {
                    Format::Text => report.to_text(),
                    Format::Structured => report.to_json(),
                },
                out,
            )
        }
        Command::Metrics {
            pairs,
            metrics,
            format,
        } => {
            let pairs = cli::parse_pairs(&fs::read_to_string(pairs)?)?;
            let metrics = metrics
                .split(',')
                .map(|m| m.trim().parse::<Metric>())
                .collect::<Result<Vec<_>>>()?;
            let report = cli::cmd_metrics(&pairs, &metrics);
            emit(
                match format {
                    Format::Text => report.to_text(),
                    Format::Structured => report.to_json(),
                },
                None,
            )
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
