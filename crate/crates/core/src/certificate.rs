//! Numeric replay of the Cauchy criterion's proof on a finite prefix.
//!
//! Given a prefix satisfying both conditions and a witness
//! `(delta, p, lambda, n0)`, the replay establishes in order:
//!
//! 1. **offset bound** (`bound_3`): an index `m0 >= n0` beyond which
//!    `rho(x_{n+q}, x_n) < delta (1 - lambda) / s` for `q = 0..=p`. Each
//!    distance is also compared with its proof-side upper bound: the
//!    telescoped [`chain_bound`] for `q >= 2` and [`self_distance_bound`]
//!    for `q = 0`;
//! 2. **induction** (`induction_4`): `rho(x_{n+kp}, x_n) < delta` for every `k` that fits
//!    in the prefix, with the branch (zero base or triggered) that justifies
//!    each step;
//! 3. **decomposition**: every pair `m = n + kp + q` in the verified range is
//!    bounded through the relaxed triangle inequality by
//!    `delta (1 - lambda) + s delta`;
//! 4. **oracle**: the brute-force tail diameter is compared with the bound.
//!
//! Every stage is checked twice, by replaying the proof inequality and by
//! direct evaluation. Disagreement is reported as [`Error::Divergence`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::ETA;
use crate::sequence::{
    brute_force_cauchy_check, check_condition_2a, check_condition_2b, SequencePrefix, TailConfig, Witness2b,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Condition2a,
    Condition2b,
    Bound3,
    Induction4,
    Decomposition,
    Oracle,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Condition2a => "condition_2a",
            Stage::Condition2b => "condition_2b",
            Stage::Bound3 => "bound_3",
            Stage::Induction4 => "induction_4",
            Stage::Decomposition => "decomposition",
            Stage::Oracle => "oracle",
        };
        f.write_str(s)
    }
}

/// `delta (1 - lambda) + s delta`.
pub fn final_bound(w: &Witness2b, s: f64) -> Result<f64> {
    w.validate()?;
    if !(s.is_finite() && s >= 1.0) {
        return Err(Error::InvalidParameter(format!("s must be >= 1, got {s}")));
    }
    Ok(w.delta * (1.0 - w.lambda) + s * w.delta)
}

/// Telescoped upper bound on `rho(x_{n+q}, x_n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainBound {
    pub n: usize,
    pub q: usize,
    /// `s^{min(j, q-1)} rho(x_{n+j-1}, x_{n+j})` for `j = 1..=q`.
    pub terms: Vec<f64>,
    pub total: f64,
    /// `rho(x_{n+q}, x_n)`, evaluated directly.
    pub direct: f64,
}

/// Expands `rho(x_n, x_{n+q}) <= s rho(x_n, x_{n+1}) + s rho(x_{n+1}, x_{n+q})`
/// repeatedly, giving coefficients `s, s^2, ..., s^{q-1}, s^{q-1}`. For
/// `q = 1` the bound is the distance itself.
pub fn chain_bound(seq: &SequencePrefix, n: usize, q: usize) -> Result<ChainBound> {
    if q == 0 || n == 0 || n + q > seq.len() {
        return Err(Error::IndexOutOfRange {
            index: n + q,
            len: seq.len(),
        });
    }
    let s = seq.s();
    let terms = (1..=q)
        .map(|j| Ok(s.powi(j.min(q - 1) as i32) * seq.dist(n + j - 1, n + j)?))
        .collect::<Result<Vec<f64>>>()?;
    let total = terms.iter().sum();
    let direct = seq.dist(n + q, n)?;
    if direct > total + ETA {
        return Err(Error::Divergence {
            stage: Stage::Bound3,
            detail: format!("chain bound {total} below rho(x_{}, x_{n}) = {direct}", n + q),
        });
    }
    Ok(ChainBound {
        n,
        q,
        terms,
        total,
        direct,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfDistanceBound {
    pub n: usize,
    /// `2 s rho(x_{n+1}, x_n)`.
    pub bound: f64,
    /// `rho(x_n, x_n)`.
    pub self_distance: f64,
}

/// `rho(x_n, x_n) <= 2 s rho(x_{n+1}, x_n)`, from the relaxed triangle
/// inequality through `x_{n+1}` and symmetry.
pub fn self_distance_bound(seq: &SequencePrefix, n: usize) -> Result<SelfDistanceBound> {
    if n == 0 || n + 1 > seq.len() {
        return Err(Error::IndexOutOfRange {
            index: n + 1,
            len: seq.len(),
        });
    }
    let bound = 2.0 * seq.s() * seq.dist(n + 1, n)?;
    let self_distance = seq.dist(n, n)?;
    if self_distance > bound + ETA {
        return Err(Error::Divergence {
            stage: Stage::Bound3,
            detail: format!(
                "rho(x_{n}, x_{n}) = {self_distance} exceeds 2 s rho(x_{}, x_{n}) = {bound}",
                n + 1
            ),
        });
    }
    Ok(SelfDistanceBound {
        n,
        bound,
        self_distance,
    })
}

/// Largest proof-side bound and largest direct distance for one offset `q`,
/// taken over the verified indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainSummary {
    pub q: usize,
    pub bound: f64,
    pub direct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bound3 {
    pub m0: usize,
    /// `delta (1 - lambda) / s`.
    pub threshold: f64,
    pub chain_bounds: Vec<ChainSummary>,
}

/// Offsets `0..=min(p, N - n)` checked at index `n`.
fn offsets(seq: &SequencePrefix, w: &Witness2b, n: usize) -> std::ops::RangeInclusive<usize> {
    0..=w.p.min(seq.len() - n)
}

/// Smallest `m0 >= n0` such that `rho(x_{n+q}, x_n) < delta (1 - lambda) / s - eta`
/// for all `m0 < n <= N` and every offset `q <= p` that stays in the prefix.
/// `None` when no index of the prefix qualifies.
pub fn verify_bound_3(seq: &SequencePrefix, w: &Witness2b) -> Result<Option<Bound3>> {
    w.validate()?;
    if seq.len() < w.min_len() {
        return Err(Error::PrefixTooShort {
            needed: w.min_len(),
            len: seq.len(),
        });
    }
    let threshold = w.delta * (1.0 - w.lambda) / seq.s();
    let mut m0 = w.n0;
    for n in (w.n0 + 1..=seq.len()).rev() {
        let mut bad = false;
        for q in offsets(seq, w, n) {
            if seq.dist(n + q, n)? >= threshold - ETA {
                bad = true;
                break;
            }
        }
        if bad {
            m0 = n;
            break;
        }
    }
    // some tail index must see every offset up to p, otherwise the bound is vacuous
    if m0 + w.p >= seq.len() {
        return Ok(None);
    }

    let mut chain_bounds: Vec<ChainSummary> = (0..=w.p)
        .map(|q| ChainSummary {
            q,
            bound: 0.0,
            direct: 0.0,
        })
        .collect();
    for n in m0 + 1..=seq.len() {
        for q in offsets(seq, w, n) {
            let (bound, direct) = match q {
                0 if n < seq.len() => {
                    let b = self_distance_bound(seq, n)?;
                    (b.bound, b.self_distance)
                }
                0 => {
                    let d = seq.dist(n, n)?;
                    (d, d)
                }
                _ => {
                    let c = chain_bound(seq, n, q)?;
                    (c.total, c.direct)
                }
            };
            let slot = &mut chain_bounds[q];
            slot.bound = slot.bound.max(bound);
            slot.direct = slot.direct.max(direct);
        }
    }
    Ok(Some(Bound3 {
        m0,
        threshold,
        chain_bounds,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `k = 1`: directly from the offset bound with `q = p`.
    Base,
    /// The previous step had `rho(x_{n+kp}, x_n) = 0`.
    ZeroBase,
    /// The previous step had `0 < rho(x_{n+kp}, x_n) < delta`, so condition
    /// (b) applies to the pair `(n, n + kp)`.
    Triggered,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InductionStep {
    pub n: usize,
    pub k: usize,
    pub branch: Branch,
    /// `rho(x_{n+kp}, x_n)`.
    pub direct: f64,
    /// Proof-side upper bound for this step.
    pub replay: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InductionTrace {
    pub steps: Vec<InductionStep>,
    /// `(n, max k)` for every start index with at least one step.
    pub max_k: Vec<(usize, usize)>,
}

impl InductionTrace {
    pub fn depth(&self) -> usize {
        self.max_k.iter().map(|&(_, k)| k).max().unwrap_or(0)
    }

    pub fn count(&self, branch: Branch) -> usize {
        self.steps.iter().filter(|s| s.branch == branch).count()
    }
}

/// Checks `rho(x_{n+kp}, x_n) < delta - eta` for all `n > max(m0, n0)` and
/// all `k >= 1` with `n + kp <= N`, replaying the induction step that
/// justifies each bound.
pub fn verify_induction_4(seq: &SequencePrefix, w: &Witness2b, m0: usize) -> Result<InductionTrace> {
    w.validate()?;
    let s = seq.s();
    let low = m0.max(w.n0);
    let mut trace = InductionTrace {
        steps: Vec::new(),
        max_k: Vec::new(),
    };
    for n in low + 1..=seq.len() {
        let mut k = 1;
        let mut prev = 0.0;
        while n + k * w.p <= seq.len() {
            let far = n + k * w.p;
            let direct = seq.dist(far, n)?;
            if direct >= w.delta - ETA {
                return Err(Error::CertificateViolation {
                    stage: Stage::Induction4,
                    detail: format!("(n, k) = ({n}, {k}): rho(x_{far}, x_{n}) = {direct} not below delta"),
                });
            }
            let (branch, replay) = if k == 1 {
                (Branch::Base, direct)
            } else if prev <= ETA {
                // s rho(x_{n+kp}, x_{n+(k-1)p}) + s rho(x_{n+(k-1)p}, x_n)
                let mid = far - w.p;
                let r = s * seq.dist(far, mid)? + s * prev;
                if s * seq.dist(far, mid)? >= w.delta * (1.0 - w.lambda) {
                    return Err(divergence(
                        Stage::Induction4,
                        n,
                        k,
                        "zero-base step exceeds delta (1 - lambda)",
                    ));
                }
                (Branch::ZeroBase, r)
            } else {
                // s rho(x_{n+kp}, x_{n+p}) + s rho(x_{n+p}, x_n) < delta lambda + delta (1 - lambda)
                let symbolic = w.delta * w.lambda + w.delta * (1.0 - w.lambda);
                if (symbolic - w.delta).abs() > ETA {
                    return Err(divergence(Stage::Induction4, n, k, "triggered-step arithmetic"));
                }
                (
                    Branch::Triggered,
                    s * seq.dist(far, n + w.p)? + s * seq.dist(n + w.p, n)?,
                )
            };
            if direct > replay + ETA || replay >= w.delta {
                return Err(divergence(
                    Stage::Induction4,
                    n,
                    k,
                    &format!("direct {direct}, replayed bound {replay}, delta {}", w.delta),
                ));
            }
            trace.steps.push(InductionStep {
                n,
                k,
                branch,
                direct,
                replay,
            });
            prev = direct;
            k += 1;
        }
        if k > 1 {
            trace.max_k.push((n, k - 1));
        }
    }
    Ok(trace)
}

fn divergence(stage: Stage, n: usize, k: usize, what: &str) -> Error {
    Error::Divergence {
        stage,
        detail: format!("(n, k) = ({n}, {k}): {what}"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageResults {
    pub condition_2a: StageStatus,
    pub condition_2b: StageStatus,
    pub bound_3: StageStatus,
    pub induction_4: StageStatus,
    pub decomposition: StageStatus,
    pub oracle: StageStatus,
}

impl StageResults {
    pub fn skipped() -> Self {
        StageResults {
            condition_2a: StageStatus::Skipped,
            condition_2b: StageStatus::Skipped,
            bound_3: StageStatus::Skipped,
            induction_4: StageStatus::Skipped,
            decomposition: StageStatus::Skipped,
            oracle: StageStatus::Skipped,
        }
    }

    pub fn set(&mut self, stage: Stage, status: StageStatus) {
        let slot = match stage {
            Stage::Condition2a => &mut self.condition_2a,
            Stage::Condition2b => &mut self.condition_2b,
            Stage::Bound3 => &mut self.bound_3,
            Stage::Induction4 => &mut self.induction_4,
            Stage::Decomposition => &mut self.decomposition,
            Stage::Oracle => &mut self.oracle,
        };
        *slot = status;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchCounts {
    pub base: usize,
    pub zero_base: usize,
    pub triggered: usize,
}

/// The certificate produced by [`certify`]. Field names are stable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CauchyCertificate {
    pub witness: Witness2b,
    pub s: f64,
    pub m0: usize,
    /// `max(m0, n0)`; the certificate covers pairs `n_low < n <= m <= N`.
    pub n_low: usize,
    pub chain_bounds: Vec<ChainSummary>,
    pub induction_depth: usize,
    pub induction_branches: BranchCounts,
    pub final_bound: f64,
    /// First and last index of the verified range, inclusive.
    pub verified_range: (usize, usize),
    pub pairs_verified: usize,
    /// Brute-force diameter over the verified range.
    pub oracle_tail_diameter: f64,
    pub stages: StageResults,
}

/// Replays the full proof for `w` on `seq`. A certificate is issued only if
/// every stage passes.
pub fn certify(seq: &SequencePrefix, w: &Witness2b, tail: &TailConfig) -> Result<CauchyCertificate> {
    w.validate()?;
    let s = seq.s();
    let bound = final_bound(w, s)?;
    let mut stages = StageResults::skipped();

    let a = check_condition_2a(seq, tail)?;
    if !a.holds {
        return Err(Error::Precondition {
            stage: Stage::Condition2a,
            detail: format!("tail max {} exceeds eps_tail {}", a.tail_max, tail.eps_tail),
        });
    }
    stages.set(Stage::Condition2a, StageStatus::Pass);

    let b = check_condition_2b(seq, w)?;
    if let Some((n, m)) = b.violating_pair {
        return Err(Error::Precondition {
            stage: Stage::Condition2b,
            detail: format!("witness violated at pair ({n}, {m})"),
        });
    }

    let b3 = verify_bound_3(seq, w)?.ok_or_else(|| Error::CertificateViolation {
        stage: Stage::Bound3,
        detail: format!("no m0 >= {} within a prefix of length {}", w.n0, seq.len()),
    })?;
    let n_low = b3.m0.max(w.n0);
    stages.set(Stage::Bound3, StageStatus::Pass);

    // Re-index the witness at n_low and rescan its pairs.
    let shifted = Witness2b { n0: n_low, ..*w };
    if seq.len() >= shifted.min_len() {
        let rescan = check_condition_2b(seq, &shifted)?;
        if !rescan.holds {
            return Err(Error::Divergence {
                stage: Stage::Condition2b,
                detail: format!("rescan above n_low = {n_low} failed at {:?}", rescan.violating_pair),
            });
        }
    }
    stages.set(Stage::Condition2b, StageStatus::Pass);

    let trace = verify_induction_4(seq, w, b3.m0)?;
    stages.set(Stage::Induction4, StageStatus::Pass);

    let mut pairs_verified = 0;
    for n in n_low + 1..=seq.len() {
        for m in n..=seq.len() {
            let k = (m - n) / w.p;
            let q = (m - n) % w.p;
            let mid = n + k * w.p;
            let direct = seq.dist(m, n)?;
            let replay = s * seq.dist(m, mid)? + s * seq.dist(mid, n)?;
            if direct > replay + ETA {
                return Err(Error::Divergence {
                    stage: Stage::Decomposition,
                    detail: format!("pair ({n}, {m}) with k = {k}, q = {q}: relaxed triangle fails"),
                });
            }
            if replay >= bound - ETA {
                return Err(Error::CertificateViolation {
                    stage: Stage::Decomposition,
                    detail: format!("pair ({n}, {m}) with k = {k}, q = {q}: bound {replay} >= {bound}"),
                });
            }
            pairs_verified += 1;
        }
    }
    stages.set(Stage::Decomposition, StageStatus::Pass);

    let oracle = brute_force_cauchy_check(seq, n_low + 1)?;
    if oracle >= bound {
        return Err(Error::Divergence {
            stage: Stage::Oracle,
            detail: format!("oracle tail diameter {oracle} >= final bound {bound}"),
        });
    }
    stages.set(Stage::Oracle, StageStatus::Pass);

    Ok(CauchyCertificate {
        witness: *w,
        s,
        m0: b3.m0,
        n_low,
        chain_bounds: b3.chain_bounds,
        induction_depth: trace.depth(),
        induction_branches: BranchCounts {
            base: trace.count(Branch::Base),
            zero_base: trace.count(Branch::ZeroBase),
            triggered: trace.count(Branch::Triggered),
        },
        final_bound: bound,
        verified_range: (n_low + 1, seq.len()),
        pairs_verified,
        oracle_tail_diameter: oracle,
        stages,
    })
}

/// A certification attempt as it appears in reports: either a certificate
/// or the stage at which the replay stopped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationOutcome {
    pub delta: f64,
    pub witness: Option<Witness2b>,
    pub certified: bool,
    pub stages: StageResults,
    pub certificate: Option<CauchyCertificate>,
    pub failure: Option<String>,
}

/// Runs [`certify`] and folds ordinary failures (unmet preconditions,
/// rejected stages) into the outcome. Divergences and invalid input stay
/// errors.
pub fn certify_outcome(seq: &SequencePrefix, w: &Witness2b, tail: &TailConfig) -> Result<CertificationOutcome> {
    match certify(seq, w, tail) {
        Ok(cert) => Ok(CertificationOutcome {
            delta: w.delta,
            witness: Some(*w),
            certified: true,
            stages: cert.stages.clone(),
            certificate: Some(cert),
            failure: None,
        }),
        Err(err) => {
            let failed = match &err {
                Error::Precondition { stage, .. } | Error::CertificateViolation { stage, .. } => *stage,
                Error::PrefixTooShort { .. } => Stage::Condition2b,
                _ => return Err(err),
            };
            let mut stages = StageResults::skipped();
            for stage in [
                Stage::Condition2a,
                Stage::Condition2b,
                Stage::Bound3,
                Stage::Induction4,
                Stage::Decomposition,
                Stage::Oracle,
            ] {
                if stage == failed {
                    stages.set(stage, StageStatus::Fail);
                    break;
                }
                stages.set(stage, StageStatus::Pass);
            }
            Ok(CertificationOutcome {
                delta: w.delta,
                witness: Some(*w),
                certified: false,
                stages,
                certificate: None,
                failure: Some(err.to_string()),
            })
        }
    }
}

/// The geometric grid `delta_j = delta0 * 2^{-j}`, `j = 0..=steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeltaGrid {
    pub delta0: f64,
    pub steps: u32,
}

impl Default for DeltaGrid {
    fn default() -> Self {
        DeltaGrid { delta0: 0.5, steps: 6 }
    }
}

impl DeltaGrid {
    pub fn deltas(&self) -> Vec<f64> {
        (0..=self.steps).map(|j| self.delta0 * 0.5f64.powi(j as i32)).collect()
    }
}
