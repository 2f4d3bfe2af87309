//! Finite sequence prefixes and the two-condition Cauchy criterion.
//!
//! For a sequence `(x_n)` in a db-metric space the criterion reads:
//!
//! * **(a)** consecutive distances vanish: `rho(x_{n+1}, x_n) -> 0`;
//! * **(b)** for each small `delta > 0` there are `n0, p` and `0 < lambda < 1`
//!   such that `0 < rho(x_n, x_m) < delta` implies
//!   `rho(x_{n+p}, x_{m+p}) < delta * lambda / s` for all `m, n > n0`.
//!
//! Both are evaluated on a finite prefix `x_1..x_N`. Indices are 1-based
//! throughout to keep the shifts in (b) readable. Strict inequalities become
//! bands with margin [`ETA`] on each side.
//!
//! Condition (b) alone is worthless: `x_n = n` satisfies it vacuously for
//! every `delta < 1` without being Cauchy. [`Condition2bReport::pairs_triggered`]
//! exposes that pattern.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{DbMetric, Point, ETA};

/// The points `x_1..x_N` (`N >= 2`) together with the metric they live in.
#[derive(Debug, Clone)]
pub struct SequencePrefix {
    points: Vec<Point>,
    metric: DbMetric,
}

impl SequencePrefix {
    pub fn new(points: Vec<Point>, metric: DbMetric) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::PrefixTooShort {
                needed: 2,
                len: points.len(),
            });
        }
        let dim = points[0].dim();
        for p in &points {
            metric.accepts(p)?;
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: p.dim(),
                });
            }
        }
        Ok(SequencePrefix { points, metric })
    }

    /// Builds a one-dimensional prefix from scalars.
    pub fn from_scalars(values: &[f64], metric: DbMetric) -> Result<Self> {
        let points = values.iter().map(|&v| Point::scalar(v)).collect::<Result<_>>()?;
        SequencePrefix::new(points, metric)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn metric(&self) -> &DbMetric {
        &self.metric
    }

    pub fn s(&self) -> f64 {
        self.metric.s()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// `x_n`, 1-based.
    pub fn point(&self, n: usize) -> Result<&Point> {
        n.checked_sub(1)
            .and_then(|i| self.points.get(i))
            .ok_or(Error::IndexOutOfRange {
                index: n,
                len: self.len(),
            })
    }

    /// `rho(x_n, x_m)`, 1-based.
    pub fn dist(&self, n: usize, m: usize) -> Result<f64> {
        self.metric.eval(self.point(n)?, self.point(m)?)
    }
}

/// Instantiation `(delta, p, lambda, n0)` of the existential quantifiers of
/// condition (b).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness2b {
    pub delta: f64,
    pub p: usize,
    pub lambda: f64,
    pub n0: usize,
}

impl Witness2b {
    pub fn new(delta: f64, p: usize, lambda: f64, n0: usize) -> Result<Self> {
        let w = Witness2b { delta, p, lambda, n0 };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "delta must be > 0, got {}",
                self.delta
            )));
        }
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "lambda must lie in (0, 1), got {}",
                self.lambda
            )));
        }
        if self.p == 0 || self.n0 == 0 {
            return Err(Error::InvalidParameter("p and n0 must be >= 1".into()));
        }
        Ok(())
    }

    /// Smallest prefix length on which the witness can be checked.
    pub fn min_len(&self) -> usize {
        self.n0 + self.p + 2
    }
}

/// Tail window used to approximate the limits on a finite prefix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TailConfig {
    /// The window starts at `ceil(fraction * (N - 1))`.
    pub fraction: f64,
    pub eps_tail: f64,
}

impl Default for TailConfig {
    fn default() -> Self {
        TailConfig {
            fraction: 0.5,
            eps_tail: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition2aReport {
    pub holds: bool,
    /// Max of `rho(x_{n+1}, x_n)` over the tail window.
    pub tail_max: f64,
    /// Smallest `n` with `rho(x_{k+1}, x_k) <= eps_tail` for every `k >= n`.
    pub first_good_index: Option<usize>,
    pub window_start: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition2bReport {
    pub holds: bool,
    pub pairs_checked: usize,
    /// Pairs with `eta < rho(x_n, x_m) < delta - eta`.
    pub pairs_triggered: usize,
    /// Lexicographically smallest violating `(n, m)`.
    pub violating_pair: Option<(usize, usize)>,
}

/// `[rho(x_2, x_1), ..., rho(x_N, x_{N-1})]`.
pub fn consecutive_distances(seq: &SequencePrefix) -> Result<Vec<f64>> {
    (1..seq.len()).map(|n| seq.dist(n + 1, n)).collect()
}

pub fn check_condition_2a(seq: &SequencePrefix, tail: &TailConfig) -> Result<Condition2aReport> {
    if !(0.0..=1.0).contains(&tail.fraction) || tail.eps_tail.is_nan() || tail.eps_tail < 0.0 {
        return Err(Error::InvalidParameter(format!("bad tail config {tail:?}")));
    }
    let d = consecutive_distances(seq)?;
    let last = d.len();
    let window_start = ((tail.fraction * last as f64).ceil() as usize).max(1);
    if window_start > last {
        return Err(Error::PrefixTooShort {
            needed: window_start + 1,
            len: seq.len(),
        });
    }
    let tail_max = d[window_start - 1..].iter().copied().fold(0.0, f64::max);
    let first_good_index = match d.iter().rposition(|&v| v > tail.eps_tail) {
        None => Some(1),
        Some(i) if i + 1 < last => Some(i + 2),
        Some(_) => None,
    };
    Ok(Condition2aReport {
        holds: tail_max <= tail.eps_tail,
        tail_max,
        first_good_index,
        window_start,
    })
}

/// Scans all pairs `n0 < n <= m <= N - p`; a pair is triggered when
/// `eta < rho(x_n, x_m) < delta - eta` and then must satisfy
/// `rho(x_{n+p}, x_{m+p}) < delta * lambda / s - eta`.
pub fn check_condition_2b(seq: &SequencePrefix, w: &Witness2b) -> Result<Condition2bReport> {
    w.validate()?;
    if seq.len() < w.min_len() {
        return Err(Error::PrefixTooShort {
            needed: w.min_len(),
            len: seq.len(),
        });
    }
    let bound = w.delta * w.lambda / seq.s() - ETA;
    let last = seq.len() - w.p;
    let mut report = Condition2bReport {
        holds: true,
        pairs_checked: 0,
        pairs_triggered: 0,
        violating_pair: None,
    };
    for n in w.n0 + 1..=last {
        for m in n..=last {
            report.pairs_checked += 1;
            let d = seq.dist(n, m)?;
            if d > ETA && d < w.delta - ETA {
                report.pairs_triggered += 1;
                if seq.dist(n + w.p, m + w.p)? >= bound && report.violating_pair.is_none() {
                    report.holds = false;
                    report.violating_pair = Some((n, m));
                }
            }
        }
    }
    Ok(report)
}

/// Tail diameter `max rho(x_n, x_m)` over `from <= n <= m <= N`. This is the
/// independent oracle every certificate is compared against.
pub fn brute_force_cauchy_check(seq: &SequencePrefix, from: usize) -> Result<f64> {
    if from == 0 || from > seq.len() {
        return Err(Error::IndexOutOfRange {
            index: from,
            len: seq.len(),
        });
    }
    let mut diam: f64 = 0.0;
    for n in from..=seq.len() {
        for m in n..=seq.len() {
            diam = diam.max(seq.dist(n, m)?);
        }
    }
    Ok(diam)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    pub p_max: usize,
    pub lambda_grid: Vec<f64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            p_max: 8,
            lambda_grid: (1..=9).map(|k| k as f64 / 10.0).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSearch {
    pub delta: f64,
    pub witness: Option<Witness2b>,
    /// The `p_max` actually scanned.
    pub p_max: usize,
    /// Set when the prefix was too short for the configured `p_max`.
    pub p_max_shrunk: bool,
    pub candidates_tried: usize,
}

/// The `n0` candidates `{1, ceil(N/8), ceil(N/4)}`, ascending and deduplicated.
pub fn n0_candidates(len: usize) -> Vec<usize> {
    let mut c = vec![1, len.div_ceil(8).max(1), len.div_ceil(4).max(1)];
    c.dedup();
    c
}

/// Returns the first witness for `delta` under the ordering `p` ascending,
/// then `lambda` ascending, then `n0` ascending.
///
/// Condition (a) is *not* checked here; a vacuous witness exists for
/// sequences that are far from Cauchy.
pub fn search_witness(seq: &SequencePrefix, delta: f64, cfg: &SearchConfig) -> Result<WitnessSearch> {
    if cfg.p_max == 0 || cfg.lambda_grid.is_empty() {
        return Err(Error::InvalidParameter("empty witness search grid".into()));
    }
    // n0 = 1 needs N >= p + 3
    let feasible = seq.len().saturating_sub(3);
    if feasible == 0 {
        return Err(Error::PrefixTooShort {
            needed: 4,
            len: seq.len(),
        });
    }
    let p_max = cfg.p_max.min(feasible);
    let mut out = WitnessSearch {
        delta,
        witness: None,
        p_max,
        p_max_shrunk: p_max < cfg.p_max,
        candidates_tried: 0,
    };
    let n0s = n0_candidates(seq.len());
    for p in 1..=p_max {
        for &lambda in &cfg.lambda_grid {
            for &n0 in &n0s {
                let w = Witness2b::new(delta, p, lambda, n0)?;
                if seq.len() < w.min_len() {
                    continue;
                }
                out.candidates_tried += 1;
                if check_condition_2b(seq, &w)?.holds {
                    out.witness = Some(w);
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}
