//! Built-in db-metric instances.

use super::DbMetric;
use crate::error::{Error, Result};
use crate::params::{self, get_f64, get_usize, ParamSpec, Params, RegistryEntry};

/// `|x - y|` on the real line. A metric, `s = 1`.
pub fn euclid_1d() -> DbMetric {
    DbMetric::new("euclid_1d", 1.0, |x, y| (x[0] - y[0]).abs())
        .expect("valid s")
        .with_dim(1)
        .declare_b_metric(true)
}

/// Euclidean distance in `R^dim`. A metric, `s = 1`.
pub fn euclid_nd(dim: usize) -> DbMetric {
    DbMetric::new("euclid_nd", 1.0, |x, y| {
        x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    })
    .expect("valid s")
    .with_dim(dim)
    .declare_b_metric(true)
}

/// `(x - y)^2`: a b-metric with `s = 2` that is not a metric.
pub fn sq_abs() -> DbMetric {
    DbMetric::new("sq_abs", 2.0, |x, y| (x[0] - y[0]).powi(2))
        .expect("valid s")
        .with_dim(1)
        .declare_b_metric(true)
}

/// `max(x, y)` on the nonnegative reals: a dislocated metric (`s = 1`) whose
/// self-distance `rho(x, x) = x` is nonzero.
pub fn max_dislocated() -> DbMetric {
    DbMetric::new("max_dislocated", 1.0, |x, y| x[0].max(y[0]))
        .expect("valid s")
        .with_dim(1)
}

/// `|x - y| + a` with `a > 0`: dislocated, `s = 1`, never zero.
pub fn shifted_dislocated(a: f64) -> Result<DbMetric> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::InvalidParameter(format!("shift a must be > 0, got {a}")));
    }
    Ok(DbMetric::new("shifted_dislocated", 1.0, move |x, y| (x[0] - y[0]).abs() + a)?.with_dim(1))
}

/// `max(x - y, 0)`. Deliberately asymmetric; exists for negative tests.
pub fn asymmetric_broken() -> DbMetric {
    DbMetric::new("asymmetric_broken", 1.0, |x, y| (x[0] - y[0]).max(0.0))
        .expect("valid s")
        .with_dim(1)
}

const S_PARAM: ParamSpec = ParamSpec {
    name: "s",
    kind: "number >= 1",
    default: Some("instance default"),
    doc: "declared relaxation constant",
};

pub fn registry() -> Vec<RegistryEntry> {
    let entry = |name, doc, mut extra: Vec<ParamSpec>| {
        extra.insert(0, S_PARAM);
        RegistryEntry {
            name,
            doc,
            params: extra,
        }
    };
    vec![
        entry("euclid_1d", "|x - y| on R (s = 1)", vec![]),
        entry(
            "euclid_nd",
            "Euclidean distance on R^dim (s = 1)",
            vec![ParamSpec {
                name: "dim",
                kind: "integer >= 1",
                default: Some("1"),
                doc: "dimension of the ground set",
            }],
        ),
        entry("sq_abs", "(x - y)^2 on R, a b-metric (s = 2)", vec![]),
        entry("max_dislocated", "max(x, y) on [0, inf), dislocated (s = 1)", vec![]),
        entry(
            "shifted_dislocated",
            "|x - y| + a on R, dislocated (s = 1)",
            vec![ParamSpec {
                name: "a",
                kind: "number > 0",
                default: Some("1"),
                doc: "constant shift, equal to every self-distance",
            }],
        ),
        entry(
            "asymmetric_broken",
            "max(x - y, 0): asymmetric, for negative tests",
            vec![],
        ),
    ]
}

/// Resolves a metric by registry name. A `s` parameter overrides the
/// declared constant.
pub fn by_name(name: &str, params: &Params) -> Result<DbMetric> {
    let entries = registry();
    params::lookup(&entries, "metric", name)?.check_params(params)?;
    let metric = match name {
        "euclid_1d" => euclid_1d(),
        "euclid_nd" => {
            let dim = get_usize(params, "dim")?.unwrap_or(1);
            if dim == 0 {
                return Err(Error::Config("euclid_nd needs dim >= 1".into()));
            }
            euclid_nd(dim)
        }
        "sq_abs" => sq_abs(),
        "max_dislocated" => max_dislocated(),
        "shifted_dislocated" => shifted_dislocated(get_f64(params, "a")?.unwrap_or(1.0))?,
        "asymmetric_broken" => asymmetric_broken(),
        _ => unreachable!("registry and constructor list out of sync"),
    };
    match get_f64(params, "s")? {
        Some(s) => metric.with_s(s),
        None => Ok(metric),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_registered_name_resolves() {
        for e in registry() {
            let m = by_name(e.name, &Params::new()).unwrap();
            assert_eq!(m.name(), e.name);
        }
    }

    #[test]
    fn unknown_names_and_params_are_config_errors() {
        assert!(by_name("nope", &Params::new()).unwrap_err().is_config());
        let mut p = Params::new();
        p.insert("a".into(), 1.0.into());
        assert!(by_name("euclid_1d", &p).unwrap_err().is_config());
    }

    #[test]
    fn declared_s_override() {
        let mut p = Params::new();
        p.insert("s".into(), 1.5.into());
        assert_eq!(by_name("sq_abs", &p).unwrap().s(), 1.5);
    }
}
