//! Contractions, their orbits, and a fixed-point solver that stops on a
//! certificate.
//!
//! If `rho(fx, fy) <= c rho(x, y)` with `c < 1`, the orbit `x_n = f^n x_0`
//! satisfies `rho(x_{n+p}, x_{m+p}) <= c^p rho(x_n, x_m)`, so condition (b)
//! holds for every `delta` as soon as `c^p < lambda / s`. [`derive_p`] picks
//! the smallest such `p`; [`solve_fixed_point`] grows the orbit until
//! [`certify`] succeeds.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::certificate::{certify, CauchyCertificate};
use crate::error::{Error, Result};
use crate::metric::sampler::SamplerConfig;
use crate::metric::{DbMetric, Point, ETA};
use crate::params::{self, get_f64, get_f64_or, get_matrix, get_vec, ParamSpec, Params, RegistryEntry};
use crate::sequence::{check_condition_2a, SequencePrefix, TailConfig, Witness2b};

/// Largest `p` [`derive_p`] will consider.
pub const P_CAP: usize = 100_000;

pub type MapFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

/// A self-map with a declared contraction constant `c < 1`.
#[derive(Clone)]
pub struct Contraction {
    name: String,
    c: f64,
    map: Arc<MapFn>,
}

impl Contraction {
    pub fn new<F>(name: impl Into<String>, c: f64, map: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        if !(0.0..1.0).contains(&c) {
            return Err(Error::InvalidParameter(format!(
                "contraction constant must lie in [0, 1), got {c}"
            )));
        }
        Ok(Contraction {
            name: name.into(),
            c,
            map: Arc::new(map),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        let y = (self.map)(x.coords());
        if y.len() != x.dim() {
            return Err(Error::DimensionMismatch {
                left: x.dim(),
                right: y.len(),
            });
        }
        Point::new(y).map_err(|e| Error::InvalidPoint(format!("`{}` left the ground set: {e}", self.name)))
    }
}

impl fmt::Debug for Contraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Contraction")
            .field("name", &self.name)
            .field("c", &self.c)
            .finish_non_exhaustive()
    }
}

/// `x -> a x + b` on the real line; `c = |a|`.
pub fn affine_1d(a: f64, b: f64) -> Result<Contraction> {
    Contraction::new("affine_1d", a.abs(), move |x| vec![a * x[0] + b])
}

pub fn halving() -> Contraction {
    Contraction::new("halving", 0.5, |x| x.iter().map(|v| v / 2.0).collect()).expect("c = 0.5")
}

/// `x -> gain / (1 + e^{-x})`, Lipschitz with constant `gain / 4`.
pub fn logistic_damped(gain: f64) -> Result<Contraction> {
    if gain.is_nan() || gain < 0.0 {
        return Err(Error::InvalidParameter(format!("gain must be >= 0, got {gain}")));
    }
    Contraction::new("logistic_damped", gain / 4.0, move |x| {
        x.iter().map(|v| gain / (1.0 + (-v).exp())).collect()
    })
}

/// Constant map onto `value`; `c = 0`.
pub fn constant(value: Vec<f64>) -> Result<Contraction> {
    Point::new(value.clone())?;
    Contraction::new("constant", 0.0, move |_| value.clone())
}

/// `x -> A x + b` in `R^d`. The declared `c` should bound the spectral norm
/// of `A`; it is checked only by sampling.
pub fn affine_nd(matrix: Vec<Vec<f64>>, offset: Vec<f64>, c: f64) -> Result<Contraction> {
    let d = offset.len();
    if d == 0 || matrix.len() != d || matrix.iter().any(|row| row.len() != d) {
        return Err(Error::InvalidParameter(format!("affine_nd needs a {d}x{d} matrix")));
    }
    Contraction::new("affine_nd", c, move |x| {
        matrix
            .iter()
            .zip(&offset)
            .map(|(row, b)| row.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() + b)
            .collect()
    })
}

pub fn registry() -> Vec<RegistryEntry> {
    let spec = |name, kind, default, doc| ParamSpec {
        name,
        kind,
        default,
        doc,
    };
    vec![
        RegistryEntry {
            name: "affine_1d",
            doc: "x -> a x + b on R, c = |a|",
            params: vec![
                spec("a", "number, |a| < 1", None, "slope"),
                spec("b", "number", Some("0"), "offset"),
            ],
        },
        RegistryEntry {
            name: "halving",
            doc: "x -> x / 2 (componentwise), c = 0.5",
            params: vec![],
        },
        RegistryEntry {
            name: "logistic_damped",
            doc: "x -> gain / (1 + exp(-x)) (componentwise), c = gain / 4",
            params: vec![spec("gain", "number in [0, 4)", Some("2"), "output scale")],
        },
        RegistryEntry {
            name: "constant",
            doc: "x -> value, c = 0",
            params: vec![spec("value", "number or list", Some("0"), "image point")],
        },
        RegistryEntry {
            name: "affine_nd",
            doc: "x -> A x + b on R^d; declared c is verified by sampling only",
            params: vec![
                spec("matrix", "list of d rows", None, "linear part A"),
                spec("offset", "list of d numbers", None, "translation b"),
                spec("c", "number in [0, 1)", None, "declared contraction constant"),
            ],
        },
    ]
}

pub fn by_name(name: &str, params: &Params) -> Result<Contraction> {
    let entries = registry();
    params::lookup(&entries, "contraction", name)?.check_params(params)?;
    let required = |key: &str| Error::Config(format!("`{name}` requires parameter `{key}`"));
    let built = match name {
        "affine_1d" => affine_1d(
            get_f64(params, "a")?.ok_or_else(|| required("a"))?,
            get_f64_or(params, "b", 0.0)?,
        ),
        "halving" => Ok(halving()),
        "logistic_damped" => logistic_damped(get_f64_or(params, "gain", 2.0)?),
        "constant" => constant(get_vec(params, "value")?.unwrap_or_else(|| vec![0.0])),
        "affine_nd" => affine_nd(
            get_matrix(params, "matrix")?.ok_or_else(|| required("matrix"))?,
            get_vec(params, "offset")?.ok_or_else(|| required("offset"))?,
            get_f64(params, "c")?.ok_or_else(|| required("c"))?,
        ),
        _ => unreachable!("registry and constructor list out of sync"),
    };
    built.map_err(|e| match e {
        Error::InvalidParameter(msg) => Error::Config(msg),
        other => other,
    })
}

/// The prefix `x_1..x_N` with `x_n = f^n x_0`. The seed is not part of the
/// sequence.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub seed: Point,
    pub sequence: SequencePrefix,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn last(&self) -> &Point {
        self.sequence.points().last().expect("orbit has >= 2 points")
    }
}

fn orbit_points(f: &Contraction, x0: &Point, n: usize) -> Result<Vec<Point>> {
    let mut points = Vec::with_capacity(n);
    let mut x = x0.clone();
    for _ in 0..n {
        x = f.apply(&x)?;
        points.push(x.clone());
    }
    Ok(points)
}

pub fn iterate(f: &Contraction, m: &DbMetric, x0: &Point, n: usize) -> Result<Orbit> {
    if n < 2 {
        return Err(Error::PrefixTooShort { needed: 2, len: n });
    }
    m.accepts(x0)?;
    Ok(Orbit {
        seed: x0.clone(),
        sequence: SequencePrefix::new(orbit_points(f, x0, n)?, m.clone())?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContractionEstimate {
    /// Supremum of `rho(fx, fy) / rho(x, y)` over non-degenerate pairs.
    pub ratio: f64,
    pub declared: f64,
    pub pairs_used: usize,
    pub violated: bool,
}

pub fn estimate_contraction_constant(
    f: &Contraction,
    m: &DbMetric,
    sample: &[(Point, Point)],
) -> Result<ContractionEstimate> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut ratio: f64 = 0.0;
    let mut used = 0;
    for (x, y) in sample {
        let d = m.eval(x, y)?;
        if d <= ETA {
            continue;
        }
        used += 1;
        ratio = ratio.max(m.eval(&f.apply(x)?, &f.apply(y)?)? / d);
    }
    if used == 0 {
        return Err(Error::DegenerateSample);
    }
    Ok(ContractionEstimate {
        ratio,
        declared: f.c(),
        pairs_used: used,
        violated: ratio > f.c() * (1.0 + RATIO_RTOL) + ETA,
    })
}

/// Relative slack on sampled ratios; `f(x) - f(y)` cancels badly for close pairs.
pub const RATIO_RTOL: f64 = 1e-7;

/// Smallest `p >= 1` with `c^p < lambda / s - eta`.
pub fn derive_p(c: f64, lambda: f64, s: f64) -> Result<usize> {
    if !(0.0..1.0).contains(&c) {
        return Err(Error::Unsatisfiable(format!("c = {c} is not in [0, 1)")));
    }
    if !(lambda > 0.0 && lambda < 1.0) || !(s.is_finite() && s >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < lambda < 1 and s >= 1, got {lambda}, {s}"
        )));
    }
    let target = lambda / s - ETA;
    if c == 0.0 {
        return Ok(1);
    }
    if target <= 0.0 {
        return Err(Error::Unsatisfiable(format!(
            "lambda / s = {} is not above eta",
            lambda / s
        )));
    }
    // log estimate, then settle the boundary with exact powers
    let mut p = ((target.ln() / c.ln()).floor() as usize).max(1);
    while p > 1 && c.powi(p as i32 - 1) < target {
        p -= 1;
    }
    while c.powi(p as i32) >= target {
        p += 1;
        if p > P_CAP {
            return Err(Error::Unsatisfiable(format!("p exceeds cap {P_CAP}")));
        }
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub lambda: f64,
    pub block: usize,
    pub max_iterations: usize,
    pub tail: TailConfig,
    /// Sample used for the up-front contraction check, together with pairs
    /// taken from the orbit.
    pub sampler: SamplerConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            lambda: 0.5,
            block: 32,
            max_iterations: 10_000,
            tail: TailConfig::default(),
            sampler: SamplerConfig {
                samples: 64,
                ..SamplerConfig::default()
            },
        }
    }
}

/// Residual of the returned point: `rho(x*, f x*)` and the relaxed-triangle
/// bound `s (rho(x*, f x*) + rho(f x*, f x*))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub residual: f64,
    pub self_distance: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointSolution {
    pub point: Point,
    pub iterations: usize,
    pub contraction: ContractionEstimate,
    pub certificate: CauchyCertificate,
    pub residual: Residual,
}

/// Iterates `f` from `x0` in blocks until the orbit carries a certificate
/// for `target_delta` and its last step is below `eps_tail`.
///
/// The certificate bounds the diameter of the orbit's tail, not the distance
/// to the true fixed point.
pub fn solve_fixed_point(
    f: &Contraction,
    m: &DbMetric,
    x0: &Point,
    target_delta: f64,
    cfg: &SolverConfig,
) -> Result<FixedPointSolution> {
    if !(target_delta.is_finite() && target_delta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "target delta must be > 0, got {target_delta}"
        )));
    }
    if cfg.block == 0 {
        return Err(Error::InvalidParameter("block size must be >= 1".into()));
    }
    m.accepts(x0)?;
    let p = derive_p(f.c(), cfg.lambda, m.s())?;
    let w = Witness2b::new(target_delta, p, cfg.lambda, 1)?;

    let grid = cfg.sampler.sample(x0.dim())?;
    let mut pairs = grid.pairs;
    pairs.extend(orbit_points(f, x0, 4)?.windows(2).map(|w| (w[0].clone(), w[1].clone())));
    let mut estimate = estimate_contraction_constant(f, m, &pairs)?;
    if estimate.violated {
        return Err(Error::ContractionViolated {
            name: f.name().to_string(),
            ratio: estimate.ratio,
            declared: f.c(),
        });
    }

    let mut points: Vec<Point> = Vec::new();
    let mut x = x0.clone();
    while points.len() < cfg.max_iterations {
        let start = points.len();
        let end = (start + cfg.block).min(cfg.max_iterations);
        for _ in start..end {
            x = f.apply(&x)?;
            points.push(x.clone());
        }
        check_orbit_ratios(f, m, &points, start.saturating_sub(1), &mut estimate)?;
        if points.len() < w.min_len() {
            continue;
        }
        let seq = SequencePrefix::new(points.clone(), m.clone())?;
        if !check_condition_2a(&seq, &cfg.tail)?.holds {
            continue;
        }
        let last_step = seq.dist(seq.len(), seq.len() - 1)?;
        if last_step > cfg.tail.eps_tail {
            continue;
        }
        match certify(&seq, &w, &cfg.tail) {
            Ok(certificate) => {
                let point = points.last().unwrap().clone();
                let fx = f.apply(&point)?;
                let residual = m.eval(&point, &fx)?;
                let self_distance = m.eval(&fx, &fx)?;
                log::info!(
                    "certified after {} iterations, final bound {}",
                    points.len(),
                    certificate.final_bound
                );
                return Ok(FixedPointSolution {
                    point,
                    iterations: points.len(),
                    contraction: estimate,
                    certificate,
                    residual: Residual {
                        residual,
                        self_distance,
                        bound: m.s() * (residual + self_distance),
                    },
                });
            }
            Err(e) if e.is_divergence() => return Err(e),
            Err(e) => log::debug!("no certificate at N = {}: {e}", points.len()),
        }
    }
    Err(Error::IterationCap {
        iterations: cfg.max_iterations,
    })
}

/// Checks `rho(x_{i+2}, x_{i+1}) <= c rho(x_{i+1}, x_i)` on the new part of
/// the orbit.
fn check_orbit_ratios(
    f: &Contraction,
    m: &DbMetric,
    points: &[Point],
    from: usize,
    estimate: &mut ContractionEstimate,
) -> Result<()> {
    for i in from..points.len().saturating_sub(2) {
        let d = m.eval(&points[i + 1], &points[i])?;
        if d <= ETA {
            continue;
        }
        let ratio = m.eval(&points[i + 2], &points[i + 1])? / d;
        estimate.ratio = estimate.ratio.max(ratio);
        estimate.pairs_used += 1;
        if ratio > f.c() * (1.0 + RATIO_RTOL) + ETA {
            estimate.violated = true;
            return Err(Error::ContractionViolated {
                name: f.name().to_string(),
                ratio,
                declared: f.c(),
            });
        }
    }
    Ok(())
}
