//! Runs the JSON experiments in examples/configs through the library, the
//! same way the `cauchycert` binary does.
//!
//! cargo run --example run_config [-- path/to/config.json]

use cauchycert::experiment::{cmd_axioms, cmd_certify, cmd_check, cmd_solve, ExperimentConfig, RunOptions};

fn main() -> cauchycert::Result<()> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs");
    let paths: Vec<String> = match std::env::args().nth(1) {
        Some(p) => vec![p],
        None => {
            let mut v: Vec<String> = std::fs::read_dir(dir)?
                .map(|e| e.map(|e| e.path().to_string_lossy().into_owned()))
                .collect::<Result<_, _>>()?;
            v.sort();
            v
        }
    };
    let opts = RunOptions {
        seed: None,
        no_timestamp: true,
    };
    for path in paths {
        let cfg = ExperimentConfig::load(Some(path.as_ref()))?;
        println!("== {path}");
        let report = match path.rsplit('/').next().unwrap_or_default() {
            p if p.starts_with("axioms") => cmd_axioms(&cfg, &opts)?,
            p if p.starts_with("solve") => cmd_solve(&cfg, &opts)?,
            p if p.starts_with("check") => cmd_check(&cfg, &opts)?,
            _ => cmd_certify(&cfg, &opts)?,
        };
        let results = serde_json::to_value(&report.results)?;
        println!("{}", serde_json::to_string_pretty(&results)?);
    }
    Ok(())
}
