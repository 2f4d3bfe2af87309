//! Config-driven experiments and their JSON reports.
//!
//! Each `cmd_*` function corresponds to a subcommand of the `cauchycert`
//! binary. Reports are deterministic for a given config and seed; timing is
//! the only nondeterministic part and can be switched off.

pub mod config;

use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::banach::{derive_p, solve_fixed_point, FixedPointSolution};
use crate::certificate::{certify_outcome, CertificationOutcome, Stage, StageResults, StageStatus};
use crate::error::{Error, Result};
use crate::metric::axioms::{run_axiom_report, AxiomReport};
use crate::metric::builtin::euclid_1d;
use crate::metric::sampler::SamplerConfig;
use crate::metric::Point;
use crate::params::RegistryEntry;
use crate::sequence::{
    brute_force_cauchy_check, check_condition_2a, check_condition_2b, search_witness, Condition2aReport,
    Condition2bReport, SequencePrefix, Witness2b, WitnessSearch,
};

use config::{as_config, Resolved};
pub use config::{Check, ExperimentConfig, Named, Parameters, Source};

pub const REPORT_VERSION: u32 = 1;

/// Published JSON schema for [`RunReport`].
pub const REPORT_SCHEMA: &str = include_str!("../../schema/report.schema.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Axioms,
    Check,
    Certify,
    Solve,
    Counterexample,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Overrides `parameters.seed`.
    pub seed: Option<u64>,
    /// Omit wall-clock data so reports are byte-for-byte reproducible.
    pub no_timestamp: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub generated_at_unix: u64,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaCheck {
    pub delta: f64,
    pub search: Option<WitnessSearch>,
    pub witness: Option<Witness2b>,
    pub condition_2b: Option<Condition2bReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub from: usize,
    pub len: usize,
    pub tail_diameter: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub solved: bool,
    pub solution: Option<FixedPointSolution>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub len: usize,
    pub deltas: Vec<f64>,
    /// False when the deltas were overridden; results are then informational.
    pub assertions_enforced: bool,
    pub condition_2a: Condition2aReport,
    pub condition_2b: Vec<DeltaCheck>,
    pub oracle_full: f64,
    pub oracle_half: f64,
    pub condition_2b_vacuous: bool,
    pub condition_2a_fails: bool,
    pub oracle_grows: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Results {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axioms: Option<AxiomReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition_2a: Option<Condition2aReport>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub deltas: Vec<DeltaCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub certifications: Vec<CertificationOutcome>,
    /// Every delta of the grid was certified.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all_certified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solve: Option<SolveReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub report_version: u32,
    pub tool_version: String,
    pub command: Command,
    pub seed: u64,
    pub config: Option<ExperimentConfig>,
    pub results: Results,
    pub timing: Option<Timing>,
}

impl RunReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

struct Run {
    command: Command,
    started: Instant,
    opts: RunOptions,
}

impl Run {
    fn start(command: Command, opts: &RunOptions) -> Self {
        Run {
            command,
            started: Instant::now(),
            opts: *opts,
        }
    }

    fn finish(self, config: Option<ExperimentConfig>, seed: u64, results: Results) -> RunReport {
        let timing = (!self.opts.no_timestamp).then(|| Timing {
            generated_at_unix: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            elapsed_ms: self.started.elapsed().as_millis() as u64,
        });
        RunReport {
            report_version: REPORT_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: self.command,
            seed,
            config,
            results,
            timing,
        }
    }
}

fn with_seed(cfg: &ExperimentConfig, opts: &RunOptions) -> ExperimentConfig {
    let mut cfg = cfg.clone();
    if let Some(seed) = opts.seed {
        cfg.parameters.seed = seed;
    }
    cfg.parameters.sampler.seed = cfg.parameters.seed;
    cfg
}

fn prefix(cfg: &ExperimentConfig, resolved: &Resolved) -> Result<SequencePrefix> {
    let source = cfg
        .source
        .as_ref()
        .ok_or_else(|| Error::Config("this command needs a `source`".into()))?;
    resolved.sequence(source)
}

pub fn cmd_axioms(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunReport> {
    let run = Run::start(Command::Axioms, opts);
    let cfg = with_seed(cfg, opts);
    let resolved = cfg.resolve()?;
    let report = run_axiom_report(&resolved.metric, &cfg.parameters.sampler).map_err(as_config)?;
    let results = Results {
        axioms: Some(report),
        ..Results::default()
    };
    Ok(run.finish(Some(cfg.clone()), cfg.parameters.seed, results))
}

fn witness_for(cfg: &ExperimentConfig, seq: &SequencePrefix, delta: f64) -> Result<DeltaCheck> {
    if let Some(fw) = cfg.parameters.witness {
        let w = Witness2b::new(delta, fw.p, fw.lambda, fw.n0).map_err(as_config)?;
        return Ok(DeltaCheck {
            delta,
            search: None,
            witness: Some(w),
            condition_2b: None,
        });
    }
    let search = search_witness(seq, delta, &cfg.parameters.search).map_err(as_config)?;
    if search.p_max_shrunk {
        log::warn!("prefix too short for p_max; scanned p <= {}", search.p_max);
    }
    Ok(DeltaCheck {
        delta,
        witness: search.witness,
        search: Some(search),
        condition_2b: None,
    })
}

pub fn cmd_check(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunReport> {
    let run = Run::start(Command::Check, opts);
    let cfg = with_seed(cfg, opts);
    let resolved = cfg.resolve()?;
    let seq = prefix(&cfg, &resolved)?;
    let p = &cfg.parameters;
    let mut results = Results::default();

    let a = check_condition_2a(&seq, &p.tail).map_err(as_config)?;
    let oracle_from = p.oracle_from.unwrap_or(a.window_start);
    if cfg.wants(Check::Condition2a) {
        results.condition_2a = Some(a);
    }
    if cfg.wants(Check::Condition2b) || cfg.wants(Check::Search) {
        for delta in p.deltas() {
            let mut dc = witness_for(&cfg, &seq, delta)?;
            if let Some(w) = dc.witness {
                dc.condition_2b = Some(check_condition_2b(&seq, &w).map_err(as_config)?);
            }
            results.deltas.push(dc);
        }
    }
    results.oracle = Some(OracleReport {
        from: oracle_from,
        len: seq.len(),
        tail_diameter: brute_force_cauchy_check(&seq, oracle_from).map_err(as_config)?,
    });
    Ok(run.finish(Some(cfg.clone()), cfg.parameters.seed, results))
}

pub fn cmd_certify(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunReport> {
    let run = Run::start(Command::Certify, opts);
    let cfg = with_seed(cfg, opts);
    let resolved = cfg.resolve()?;
    let seq = prefix(&cfg, &resolved)?;
    let p = &cfg.parameters;
    let mut results = Results::default();

    for delta in p.deltas() {
        let witness = match (&resolved.contraction, p.witness) {
            (Some(f), None) => {
                let lambda = p.solver.lambda;
                let pp = derive_p(f.c(), lambda, seq.s()).map_err(as_config)?;
                Some(Witness2b::new(delta, pp, lambda, 1).map_err(as_config)?)
            }
            _ => witness_for(&cfg, &seq, delta)?.witness,
        };
        let outcome = match witness {
            Some(w) => certify_outcome(&seq, &w, &p.tail)?,
            None => CertificationOutcome {
                delta,
                witness: None,
                certified: false,
                stages: {
                    let mut st = StageResults::skipped();
                    st.set(Stage::Condition2b, StageStatus::Fail);
                    st
                },
                certificate: None,
                failure: Some("no witness found on the search grid".into()),
            },
        };
        results.certifications.push(outcome);
    }
    results.all_certified = Some(results.certifications.iter().all(|o| o.certified));
    Ok(run.finish(Some(cfg.clone()), cfg.parameters.seed, results))
}

pub fn cmd_solve(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunReport> {
    let run = Run::start(Command::Solve, opts);
    let cfg = with_seed(cfg, opts);
    let resolved = cfg.resolve()?;
    let f = resolved
        .contraction
        .as_ref()
        .ok_or_else(|| Error::Config("`solve` needs a `contraction`".into()))?;
    let p = &cfg.parameters;
    let dim = resolved.metric.dim().unwrap_or(1);
    let x0 = match &p.x0 {
        Some(spec) => spec.to_point().map_err(as_config)?,
        None => Point::new(vec![0.0; dim])?,
    };
    let mut solver = p.solver.clone();
    solver.sampler.seed = p.seed;
    let solve = match solve_fixed_point(f, &resolved.metric, &x0, p.target_delta, &solver) {
        Ok(solution) => SolveReport {
            solved: true,
            solution: Some(solution),
            failure: None,
        },
        Err(e @ (Error::IterationCap { .. } | Error::ContractionViolated { .. })) => SolveReport {
            solved: false,
            solution: None,
            failure: Some(e.to_string()),
        },
        Err(e) => return Err(as_config(e)),
    };
    let results = Results {
        solve: Some(solve),
        ..Results::default()
    };
    Ok(run.finish(Some(cfg.clone()), cfg.parameters.seed, results))
}

/// The canned `x_n = n` experiment: condition (b) holds vacuously for small
/// deltas, condition (a) fails and the tail diameter grows with `N`.
///
/// `deltas = None` uses `{0.5, 0.25}` and enforces the three assertions;
/// explicit deltas only report.
pub fn cmd_counterexample(len: usize, deltas: Option<Vec<f64>>, opts: &RunOptions) -> Result<RunReport> {
    let run = Run::start(Command::Counterexample, opts);
    if len < 4 {
        return Err(Error::Config(format!("counterexample needs len >= 4, got {len}")));
    }
    let enforced = deltas.is_none();
    let deltas = deltas.unwrap_or_else(|| vec![0.5, 0.25]);
    let values: Vec<f64> = (1..=len).map(|n| n as f64).collect();
    let seq = SequencePrefix::from_scalars(&values, euclid_1d())?;
    let tail = Parameters::default().tail;

    let a = check_condition_2a(&seq, &tail)?;
    let mut checks = Vec::new();
    for &delta in &deltas {
        let w = Witness2b::new(delta, 1, 0.5, 1).map_err(as_config)?;
        checks.push(DeltaCheck {
            delta,
            search: None,
            witness: Some(w),
            condition_2b: Some(check_condition_2b(&seq, &w)?),
        });
    }
    let half = SequencePrefix::from_scalars(&values[..len.div_ceil(2)], euclid_1d())?;
    let oracle_full = brute_force_cauchy_check(&seq, 1)?;
    let oracle_half = brute_force_cauchy_check(&half, 1)?;

    let condition_2b_vacuous = checks
        .iter()
        .filter_map(|c| c.condition_2b.as_ref())
        .all(|r| r.holds && r.pairs_triggered == 0);
    let condition_2a_fails = !a.holds;
    let oracle_grows = oracle_full > oracle_half;
    let report = CounterexampleReport {
        len,
        deltas,
        assertions_enforced: enforced,
        condition_2a: a,
        condition_2b: checks,
        oracle_full,
        oracle_half,
        condition_2b_vacuous,
        condition_2a_fails,
        oracle_grows,
        passed: condition_2b_vacuous && condition_2a_fails && oracle_grows,
    };
    let results = Results {
        counterexample: Some(report),
        ..Results::default()
    };
    Ok(run.finish(None, 0, results))
}

/// Exit status for a finished report: `1` only for a failed canned
/// counterexample assertion.
pub fn exit_code(report: &RunReport) -> i32 {
    match &report.results.counterexample {
        Some(c) if c.assertions_enforced && !c.passed => 1,
        _ => 0,
    }
}

/// Exit status for an error: `3` for a proof/oracle divergence, `2`
/// otherwise.
pub fn error_exit_code(err: &Error) -> i32 {
    if err.is_divergence() {
        3
    } else {
        2
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Listing {
    pub metrics: Vec<RegistryEntry>,
    pub generators: Vec<RegistryEntry>,
    pub contractions: Vec<RegistryEntry>,
    pub checks: Vec<Check>,
    pub default_sampler: SamplerConfig,
}

pub fn listing() -> Listing {
    Listing {
        metrics: crate::metric::builtin::registry(),
        generators: config::generator_registry(),
        contractions: crate::banach::registry(),
        checks: vec![
            Check::Axioms,
            Check::Condition2a,
            Check::Condition2b,
            Check::Search,
            Check::Certify,
            Check::Solve,
        ],
        default_sampler: SamplerConfig::default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> RunOptions {
        RunOptions {
            seed: None,
            no_timestamp: true,
        }
    }

    fn cfg(json: &str) -> ExperimentConfig {
        ExperimentConfig::from_json(json).unwrap()
    }

    #[test]
    fn axioms_command() {
        let r = cmd_axioms(&cfg(r#"{"metric": {"name": "sq_abs", "params": {"s": 2}}}"#), &opts()).unwrap();
        assert!(r.results.axioms.unwrap().triangle_ok);
        let r = cmd_axioms(&cfg(r#"{"metric": {"name": "sq_abs", "params": {"s": 1.5}}}"#), &opts()).unwrap();
        assert!(!r.results.axioms.unwrap().triangle_ok);
        let r = cmd_axioms(&cfg(r#"{"metric": {"name": "euclid_1d"}}"#), &opts()).unwrap();
        assert!(r.results.axioms.as_ref().unwrap().all_ok());
        assert_eq!(exit_code(&r), 0);
    }

    #[test]
    fn check_command_on_counterexample_sequence() {
        let r = cmd_check(
            &cfg(r#"{"metric": {"name": "euclid_1d"},
                     "source": {"generator": {"name": "arithmetic", "params": {"len": 50}}},
                     "parameters": {"deltas": [0.5, 0.25]}}"#),
            &opts(),
        )
        .unwrap();
        assert!(!r.results.condition_2a.unwrap().holds);
        for d in &r.results.deltas {
            let b = d.condition_2b.as_ref().unwrap();
            assert!(b.holds && b.pairs_triggered == 0);
        }
    }

    #[test]
    fn checks_filter_stages() {
        let r = cmd_check(
            &cfg(r#"{"metric": {"name": "euclid_1d"},
                     "source": {"inline": [1, 1, 1, 1, 1, 1]},
                     "checks": ["condition2a"]}"#),
            &opts(),
        )
        .unwrap();
        assert!(r.results.condition_2a.is_some());
        assert!(r.results.deltas.is_empty());
    }

    #[test]
    fn certify_command_on_orbit() {
        let r = cmd_certify(
            &cfg(r#"{"metric": {"name": "euclid_1d"},
                     "contraction": {"name": "halving"},
                     "source": {"generator": {"name": "orbit", "params": {"len": 64}}}}"#),
            &opts(),
        )
        .unwrap();
        assert_eq!(r.results.all_certified, Some(true));
        assert_eq!(r.results.certifications.len(), 7);
    }

    #[test]
    fn certify_command_without_witness() {
        let r = cmd_certify(
            &cfg(r#"{"metric": {"name": "euclid_1d"},
                     "source": {"inline": [0, 0.45, 0, 0.45, 0, 0.45, 0, 0.45, 0, 0.45]},
                     "parameters": {"deltas": [0.5]}}"#),
            &opts(),
        )
        .unwrap();
        assert_eq!(r.results.all_certified, Some(false));
        assert!(r.results.certifications[0].witness.is_none());
    }

    #[test]
    fn solve_command() {
        let r = cmd_solve(
            &cfg(r#"{"metric": {"name": "euclid_1d"},
                     "contraction": {"name": "affine_1d", "params": {"a": 0.9, "b": 0.1}},
                     "parameters": {"x0": 0, "target_delta": 0.01}}"#),
            &opts(),
        )
        .unwrap();
        let s = r.results.solve.unwrap();
        assert!(s.solved);
        assert!((s.solution.unwrap().point.coords()[0] - 1.0).abs() < 0.0155);

        let err = cmd_solve(&cfg(r#"{"metric": {"name": "euclid_1d"}}"#), &opts()).unwrap_err();
        assert_eq!(error_exit_code(&err), 2);
    }

    #[test]
    fn counterexample_command() {
        for len in [50, 10] {
            let r = cmd_counterexample(len, None, &opts()).unwrap();
            assert!(r.results.counterexample.as_ref().unwrap().passed);
            assert_eq!(exit_code(&r), 0);
        }
        let r = cmd_counterexample(50, Some(vec![0.5, 2.0]), &opts()).unwrap();
        let c = r.results.counterexample.as_ref().unwrap();
        assert!(!c.passed && !c.condition_2b_vacuous);
        let b = c.condition_2b[1].condition_2b.as_ref().unwrap();
        assert!(!b.holds && b.pairs_triggered > 0);
        assert_eq!(exit_code(&r), 0);
        assert!(cmd_counterexample(3, None, &opts()).is_err());
    }

    #[test]
    fn seed_override_is_echoed() {
        let o = RunOptions {
            seed: Some(7),
            no_timestamp: true,
        };
        let r = cmd_axioms(&cfg(r#"{"metric": {"name": "euclid_1d"}}"#), &o).unwrap();
        assert_eq!(r.seed, 7);
        assert_eq!(r.config.unwrap().parameters.sampler.seed, 7);
        assert!(r.timing.is_none());
    }
}
