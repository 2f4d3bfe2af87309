use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cauchycert::experiment::{self, ExperimentConfig, RunOptions, Source};
use cauchycert::Error;

#[derive(Parser)]
#[command(
    name = "cauchycert",
    version,
    about = "Cauchy criteria and certificates for db-metric sequences"
)]
struct Cli {
    /// Experiment config (JSON). Reads stdin when omitted or `-`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides `parameters.seed` (and the sampler seed).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Leave wall-clock data out of the report.
    #[arg(long, global = true)]
    no_timestamp: bool,
    /// The CSV source has a header row.
    #[arg(long, global = true)]
    header: bool,
    /// List registered metrics, generators and contractions.
    #[arg(long)]
    list: bool,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sampled axiom checks for the configured metric.
    Axioms,
    /// Conditions (a) and (b) over the delta grid, plus the tail-diameter oracle.
    Check,
    /// Proof replay for every delta of the grid.
    Certify,
    /// Fixed-point iteration with a certificate as stopping rule.
    Solve,
    /// The canned x_n = n experiment.
    Counterexample {
        #[arg(long, default_value_t = 50)]
        len: usize,
        /// Override the deltas; assertions are then reported, not enforced.
        #[arg(long = "delta")]
        deltas: Vec<f64>,
    },
    /// Same as --list.
    List,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CAUCHYCERT_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(experiment::error_exit_code(&err) as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<i32, Error> {
    let opts = RunOptions {
        seed: cli.seed,
        no_timestamp: cli.no_timestamp,
    };
    let report = match &cli.command {
        _ if cli.list => return emit(cli, &(serde_json::to_string_pretty(&experiment::listing())? + "\n")).map(|_| 0),
        None | Some(Cmd::List) => {
            return emit(cli, &(serde_json::to_string_pretty(&experiment::listing())? + "\n")).map(|_| 0)
        }
        Some(Cmd::Counterexample { len, deltas }) => {
            let deltas = (!deltas.is_empty()).then(|| deltas.clone());
            experiment::cmd_counterexample(*len, deltas, &opts)?
        }
        Some(cmd) => {
            let mut cfg = ExperimentConfig::load(cli.config.as_deref())?;
            if cli.header {
                if let Some(Source::Csv(csv)) = &mut cfg.source {
                    csv.header = true;
                }
            }
            match cmd {
                Cmd::Axioms => experiment::cmd_axioms(&cfg, &opts)?,
                Cmd::Check => experiment::cmd_check(&cfg, &opts)?,
                Cmd::Certify => experiment::cmd_certify(&cfg, &opts)?,
                Cmd::Solve => experiment::cmd_solve(&cfg, &opts)?,
                Cmd::Counterexample { .. } | Cmd::List => unreachable!(),
            }
        }
    };
    emit(cli, &report.to_json()?)?;
    Ok(experiment::exit_code(&report))
}

fn emit(cli: &Cli, text: &str) -> Result<(), Error> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
