//! Dislocated b-metrics.
//!
//! A db-metric on a set `X` is a map `rho: X x X -> [0, inf)` that is
//! symmetric, satisfies `rho(x, y) = 0 => x = y`, and obeys the relaxed
//! triangle inequality `rho(x, z) <= s * (rho(x, y) + rho(y, z))` for some
//! `s >= 1`. Self-distances `rho(x, x)` may be positive.
//!
//! [`DbMetric`] only stores the distance and the *declared* constant `s`.
//! Nothing here assumes the axioms hold; [`axioms`] checks them on samples.

pub mod axioms;
pub mod builtin;
pub mod sampler;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Comparison tolerance used for every equality or strictness test on
/// distances.
pub const ETA: f64 = 1e-9;

/// An element of the ground set: a nonempty vector of finite reals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidPoint("point has no coordinates".into()));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidPoint(format!("non-finite coordinate {bad}")));
        }
        Ok(Point(coords))
    }

    pub fn scalar(x: f64) -> Result<Self> {
        Point::new(vec![x])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Componentwise equality within `tol`.
    pub fn approx_eq(&self, other: &Point, tol: f64) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| (a - b).abs() <= tol)
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Point::new(coords)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let [x] = self.0.as_slice() {
            write!(f, "{x}")
        } else {
            write!(f, "{:?}", self.0)
        }
    }
}

pub type DistanceFn = dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync;

/// A distance oracle plus its declared relaxation constant `s`.
///
/// Cloning is cheap; the distance function is shared.
#[derive(Clone)]
pub struct DbMetric {
    name: String,
    s: f64,
    dim: Option<usize>,
    b_metric: bool,
    distance: Arc<DistanceFn>,
}

impl DbMetric {
    pub fn new<F>(name: impl Into<String>, s: f64, distance: F) -> Result<Self>
    where
        F: Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static,
    {
        check_s(s)?;
        Ok(DbMetric {
            name: name.into(),
            s,
            dim: None,
            b_metric: false,
            distance: Arc::new(distance),
        })
    }

    /// Restricts the ground set to points of dimension `dim`.
    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim = Some(dim);
        self
    }

    /// Declares the metric a b-metric, i.e. `rho(x, y) = 0 <=> x = y`. The
    /// zero-identity check then also tests `x = y => rho(x, y) = 0`.
    pub fn declare_b_metric(mut self, yes: bool) -> Self {
        self.b_metric = yes;
        self
    }

    /// Replaces the declared relaxation constant. The distance is untouched.
    pub fn with_s(mut self, s: f64) -> Result<Self> {
        check_s(s)?;
        self.s = s;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    pub fn is_b_metric(&self) -> bool {
        self.b_metric
    }

    /// Checks that `x` belongs to the ground set.
    pub fn accepts(&self, x: &Point) -> Result<()> {
        match self.dim {
            Some(d) if d != x.dim() => Err(Error::DimensionMismatch {
                left: d,
                right: x.dim(),
            }),
            _ => Ok(()),
        }
    }

    /// Evaluates `rho(x, y)`, rejecting mismatched points and NaN or
    /// negative results.
    pub fn eval(&self, x: &Point, y: &Point) -> Result<f64> {
        if x.dim() != y.dim() {
            return Err(Error::DimensionMismatch {
                left: x.dim(),
                right: y.dim(),
            });
        }
        self.accepts(x)?;
        let value = (self.distance)(x.coords(), y.coords());
        if value.is_nan() || value < 0.0 {
            return Err(Error::MalformedDistance {
                metric: self.name.clone(),
                value,
            });
        }
        Ok(value)
    }
}

impl fmt::Debug for DbMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DbMetric")
            .field("name", &self.name)
            .field("s", &self.s)
            .field("dim", &self.dim)
            .field("b_metric", &self.b_metric)
            .finish_non_exhaustive()
    }
}

fn check_s(s: f64) -> Result<()> {
    if s.is_finite() && s >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "relaxation constant s must be finite and >= 1, got {s}"
        )))
    }
}

/// `rho(x, y)` for metric `m`.
pub fn eval_distance(m: &DbMetric, x: &Point, y: &Point) -> Result<f64> {
    m.eval(x, y)
}

#[cfg(test)]
mod tests {
    use super::builtin::*;
    use super::*;

    fn p(x: f64) -> Point {
        Point::scalar(x).unwrap()
    }

    #[test]
    fn builtin_examples() {
        assert_eq!(eval_distance(&euclid_1d(), &p(3.0), &p(3.0)).unwrap(), 0.0);
        assert_eq!(eval_distance(&sq_abs(), &p(0.0), &p(2.0)).unwrap(), 4.0);
        // dislocated: nonzero self-distance
        assert_eq!(eval_distance(&max_dislocated(), &p(2.0), &p(2.0)).unwrap(), 2.0);
    }

    #[test]
    fn rejects_bad_points() {
        assert!(Point::new(vec![]).is_err());
        assert!(Point::scalar(f64::NAN).is_err());
        assert!(Point::new(vec![1.0, f64::INFINITY]).is_err());
        assert!(serde_json::from_str::<Point>("[]").is_err());
    }

    #[test]
    fn rejects_dimension_mismatch() {
        let m = euclid_nd(3);
        let a = Point::new(vec![0.0, 0.0, 0.0]).unwrap();
        let b = Point::new(vec![0.0, 0.0]).unwrap();
        assert!(matches!(
            m.eval(&a, &b),
            Err(Error::DimensionMismatch { left: 3, right: 2 })
        ));
        assert!(matches!(m.eval(&b, &b), Err(Error::DimensionMismatch { .. })));
        assert!(euclid_1d().eval(&a, &a).is_err());
    }

    #[test]
    fn rejects_malformed_distances() {
        let nan = DbMetric::new("nan", 1.0, |_, _| f64::NAN).unwrap();
        assert!(matches!(
            nan.eval(&p(0.0), &p(1.0)),
            Err(Error::MalformedDistance { .. })
        ));
        // max on negative inputs leaves the nonnegative ground set
        assert!(max_dislocated().eval(&p(-2.0), &p(-1.0)).is_err());
    }

    #[test]
    fn s_must_be_at_least_one() {
        assert!(DbMetric::new("x", 0.5, |_, _| 0.0).is_err());
        assert!(DbMetric::new("x", f64::NAN, |_, _| 0.0).is_err());
        assert!(euclid_1d().with_s(0.99).is_err());
        assert_eq!(sq_abs().with_s(1.5).unwrap().s(), 1.5);
    }
}
