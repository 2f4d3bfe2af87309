//! Sampled checks of the db-metric axioms: zero identity, symmetry and the
//! relaxed triangle inequality.

use serde::{Deserialize, Serialize};

use super::sampler::SamplerConfig;
use super::{DbMetric, Point, ETA};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    ZeroIdentity,
    Symmetry,
    Triangle,
}

/// Outcome of a pairwise check.
#[derive(Debug, Clone, PartialEq)]
pub struct PairCheck {
    pub ok: bool,
    pub counterexample: Option<(Point, Point)>,
}

impl PairCheck {
    fn pass() -> Self {
        PairCheck {
            ok: true,
            counterexample: None,
        }
    }

    fn fail(x: &Point, y: &Point) -> Self {
        PairCheck {
            ok: false,
            counterexample: Some((x.clone(), y.clone())),
        }
    }
}

pub fn check_symmetry(m: &DbMetric, sample: &[(Point, Point)]) -> Result<PairCheck> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    for (x, y) in sample {
        if !symmetric_at(m, x, y)? {
            return Ok(PairCheck::fail(x, y));
        }
    }
    Ok(PairCheck::pass())
}

/// `rho(x, y) <= eta` must force `x = y`. For metrics declared as b-metrics
/// the converse `x = y => rho(x, y) <= eta` is checked as well.
pub fn check_zero_identity(m: &DbMetric, sample: &[(Point, Point)]) -> Result<PairCheck> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    for (x, y) in sample {
        if !zero_identity_at(m, x, y)? {
            return Ok(PairCheck::fail(x, y));
        }
    }
    Ok(PairCheck::pass())
}

fn symmetric_at(m: &DbMetric, x: &Point, y: &Point) -> Result<bool> {
    Ok((m.eval(x, y)? - m.eval(y, x)?).abs() <= ETA)
}

fn zero_identity_at(m: &DbMetric, x: &Point, y: &Point) -> Result<bool> {
    let d = m.eval(x, y)?;
    let same = x.approx_eq(y, ETA);
    if d <= ETA && !same {
        return Ok(false);
    }
    Ok(!(m.is_b_metric() && same && d > ETA))
}

/// Supremum of `rho(x, z) / (rho(x, y) + rho(y, z))` over a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleEstimate {
    pub min_s: f64,
    pub argmax: Option<(Point, Point, Point)>,
    pub triples_used: usize,
    pub skipped: usize,
}

struct TriangleScan {
    estimate: TriangleEstimate,
    unconditional: Option<(Point, Point, Point)>,
}

fn scan_triangle(m: &DbMetric, sample: &[(Point, Point, Point)]) -> Result<TriangleScan> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut est = TriangleEstimate {
        min_s: 0.0,
        argmax: None,
        triples_used: 0,
        skipped: 0,
    };
    let mut unconditional = None;
    for (x, y, z) in sample {
        let xz = m.eval(x, z)?;
        let denom = m.eval(x, y)? + m.eval(y, z)?;
        if denom == 0.0 {
            est.skipped += 1;
            if xz > ETA && unconditional.is_none() {
                unconditional = Some((x.clone(), y.clone(), z.clone()));
            }
            continue;
        }
        est.triples_used += 1;
        let ratio = xz / denom;
        if ratio > est.min_s || est.argmax.is_none() {
            est.min_s = ratio;
            est.argmax = Some((x.clone(), y.clone(), z.clone()));
        }
    }
    Ok(TriangleScan {
        estimate: est,
        unconditional,
    })
}

/// Lower bound on the smallest `s` for which the relaxed triangle inequality
/// holds, computed on `sample`. Triples with a zero denominator are skipped
/// unless `rho(x, z) > eta`, which no `s` can repair.
pub fn estimate_minimal_s(m: &DbMetric, sample: &[(Point, Point, Point)]) -> Result<TriangleEstimate> {
    let scan = scan_triangle(m, sample)?;
    if let Some((x, _, z)) = scan.unconditional {
        return Err(Error::UnconditionalTriangleViolation {
            rho_xz: m.eval(&x, &z)?,
        });
    }
    Ok(scan.estimate)
}

/// A failed axiom together with the points that exhibit it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub points: Vec<Point>,
}

impl Violation {
    /// Re-evaluates the failing check on the stored points.
    pub fn reproduces(&self, m: &DbMetric) -> Result<bool> {
        match (self.axiom, self.points.as_slice()) {
            (Axiom::Symmetry, [x, y]) => Ok(!symmetric_at(m, x, y)?),
            (Axiom::ZeroIdentity, [x, y]) => Ok(!zero_identity_at(m, x, y)?),
            (Axiom::Triangle, [x, y, z]) => {
                let xz = m.eval(x, z)?;
                Ok(xz > m.s() * (m.eval(x, y)? + m.eval(y, z)?) + ETA)
            }
            _ => Err(Error::InvalidParameter("malformed violation record".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub metric: String,
    pub declared_s: f64,
    pub symmetry_ok: bool,
    pub zero_identity_ok: bool,
    pub triangle_ok: bool,
    /// Supremum of the triangle ratio over non-degenerate sampled triples.
    pub estimated_min_s: f64,
    /// A sampled triple had `rho(x,y) + rho(y,z) = 0` but `rho(x,z) > eta`.
    pub unconditional_triangle_violation: bool,
    pub violation: Option<Violation>,
    pub samples_used: usize,
}

impl AxiomReport {
    pub fn all_ok(&self) -> bool {
        self.symmetry_ok && self.zero_identity_ok && self.triangle_ok
    }
}

pub fn run_axiom_report(m: &DbMetric, cfg: &SamplerConfig) -> Result<AxiomReport> {
    let sample = cfg.sample(m.dim().unwrap_or(1))?;
    let sym = check_symmetry(m, &sample.pairs)?;
    let zero = check_zero_identity(m, &sample.pairs)?;
    let scan = scan_triangle(m, &sample.triples)?;

    let est = scan.estimate;
    let worst_triple = scan
        .unconditional
        .clone()
        .or_else(|| est.argmax.clone().filter(|_| est.min_s > m.s() + ETA));
    let triangle_ok = worst_triple.is_none();

    let violation = if let Some((x, y)) = sym.counterexample.clone() {
        Some(Violation {
            axiom: Axiom::Symmetry,
            points: vec![x, y],
        })
    } else if let Some((x, y)) = zero.counterexample.clone() {
        Some(Violation {
            axiom: Axiom::ZeroIdentity,
            points: vec![x, y],
        })
    } else {
        worst_triple.map(|(x, y, z)| Violation {
            axiom: Axiom::Triangle,
            points: vec![x, y, z],
        })
    };

    Ok(AxiomReport {
        metric: m.name().to_string(),
        declared_s: m.s(),
        symmetry_ok: sym.ok,
        zero_identity_ok: zero.ok,
        triangle_ok,
        estimated_min_s: est.min_s,
        unconditional_triangle_violation: scan.unconditional.is_some(),
        violation,
        samples_used: sample.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::builtin::*;

    fn p(x: f64) -> Point {
        Point::scalar(x).unwrap()
    }

    fn default_sample(m: &DbMetric) -> crate::metric::sampler::Sample {
        SamplerConfig::default().sample(m.dim().unwrap_or(1)).unwrap()
    }

    #[test]
    fn symmetry_examples() {
        let m = sq_abs();
        assert!(check_symmetry(&m, &default_sample(&m).pairs).unwrap().ok);
        let m = max_dislocated();
        assert!(check_symmetry(&m, &default_sample(&m).pairs).unwrap().ok);

        let broken = asymmetric_broken();
        let r = check_symmetry(&broken, &[(p(3.0), p(3.0)), (p(0.0), p(1.0))]).unwrap();
        assert!(!r.ok);
        assert_eq!(r.counterexample, Some((p(0.0), p(1.0))));
    }

    #[test]
    fn zero_identity_examples() {
        let m = euclid_1d();
        assert!(check_zero_identity(&m, &default_sample(&m).pairs).unwrap().ok);
        // minimum value is a = 1, so the implication holds vacuously
        let m = shifted_dislocated(1.0).unwrap();
        assert!(check_zero_identity(&m, &default_sample(&m).pairs).unwrap().ok);

        let zero = DbMetric::new("zero", 1.0, |_, _| 0.0).unwrap();
        let (a, b) = (p(0.0), p(1.0));
        let r = check_zero_identity(&zero, &[(a.clone(), a.clone()), (a.clone(), b.clone())]).unwrap();
        assert!(!r.ok);
        assert_eq!(r.counterexample, Some((a, b)));
    }

    #[test]
    fn converse_only_checked_for_b_metrics() {
        // constant 1: positive self-distance
        let one = DbMetric::new("one", 1.0, |_, _| 1.0).unwrap();
        let diag = [(p(2.0), p(2.0))];
        assert!(check_zero_identity(&one, &diag).unwrap().ok);
        let one_b = one.declare_b_metric(true);
        assert!(!check_zero_identity(&one_b, &diag).unwrap().ok);
    }

    #[test]
    fn minimal_s_examples() {
        let m = euclid_1d();
        assert!(estimate_minimal_s(&m, &default_sample(&m).triples).unwrap().min_s <= 1.0 + ETA);

        let m = sq_abs();
        let est = estimate_minimal_s(&m, &[(p(0.0), p(1.0), p(2.0))]).unwrap();
        assert_eq!(est.min_s, 2.0);
        let est = estimate_minimal_s(&m, &default_sample(&m).triples).unwrap();
        assert_eq!(est.min_s, 2.0);

        let m = max_dislocated();
        assert!(estimate_minimal_s(&m, &default_sample(&m).triples).unwrap().min_s <= 1.0 + ETA);
    }

    #[test]
    fn unconditional_violation_is_reported() {
        // zero off a single pair of points, positive between 0 and 2
        let m = DbMetric::new("odd", 1.0, |x, y| if (x[0] - y[0]).abs() == 2.0 { 1.0 } else { 0.0 }).unwrap();
        let t = [(p(0.0), p(1.0), p(2.0))];
        assert!(matches!(
            estimate_minimal_s(&m, &t),
            Err(Error::UnconditionalTriangleViolation { .. })
        ));
        let cfg = SamplerConfig {
            samples: 0,
            grid_points: 3,
            high: 2.0,
            ..Default::default()
        };
        let r = run_axiom_report(&m, &cfg).unwrap();
        assert!(r.unconditional_triangle_violation);
        assert!(!r.triangle_ok);
    }

    #[test]
    fn reports() {
        let r = run_axiom_report(&sq_abs(), &SamplerConfig::default()).unwrap();
        assert!(r.all_ok());
        assert!(r.violation.is_none());

        let m = sq_abs().with_s(1.5).unwrap();
        let r = run_axiom_report(&m, &SamplerConfig::default()).unwrap();
        assert!(!r.triangle_ok && r.symmetry_ok && r.zero_identity_ok);
        let v = r.violation.unwrap();
        assert_eq!(v.axiom, Axiom::Triangle);
        assert!(v.reproduces(&m).unwrap());

        assert!(run_axiom_report(&euclid_1d(), &SamplerConfig::default())
            .unwrap()
            .all_ok());

        let m = asymmetric_broken();
        let r = run_axiom_report(&m, &SamplerConfig::default()).unwrap();
        assert!(!r.symmetry_ok);
        let v = r.violation.unwrap();
        assert_eq!(v.axiom, Axiom::Symmetry);
        assert!(v.reproduces(&m).unwrap());
    }

    #[test]
    fn empty_samples_rejected() {
        assert!(check_symmetry(&euclid_1d(), &[]).is_err());
        assert!(check_zero_identity(&euclid_1d(), &[]).is_err());
        assert!(estimate_minimal_s(&euclid_1d(), &[]).is_err());
    }
}
