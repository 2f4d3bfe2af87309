//! Cauchy criteria for sequences in dislocated b-metric spaces.
//!
//! The crate checks the two-condition Cauchy criterion on finite sequence
//! prefixes, replays its proof as a numeric [`certificate`], and uses the
//! certificate as the stopping rule of a Banach fixed-point iteration.
//!
//! * [`metric`]: db-metrics, built-in instances and sampled axiom checks.
//! * [`sequence`]: prefixes, conditions (a) and (b), witness search and the
//!   brute-force tail-diameter oracle.
//! * [`certificate`]: the proof replay.
//! * [`banach`]: contractions, orbits and the certified solver.
//! * [`experiment`]: JSON-configured experiments behind the `cauchycert` binary.
//!
//! ```
//! use cauchycert::banach::{halving, iterate};
//! use cauchycert::certificate::certify;
//! use cauchycert::metric::{builtin::euclid_1d, Point};
//! use cauchycert::sequence::{TailConfig, Witness2b};
//!
//! let orbit = iterate(&halving(), &euclid_1d(), &Point::scalar(1.0)?, 60)?;
//! let w = Witness2b::new(0.1, 2, 0.5, 1)?;
//! let cert = certify(&orbit.sequence, &w, &TailConfig::default())?;
//! assert!(cert.oracle_tail_diameter < cert.final_bound);
//! # Ok::<(), cauchycert::Error>(())
//! ```

pub mod banach;
pub mod certificate;
pub mod error;
pub mod experiment;
pub mod metric;
pub mod params;
pub mod sequence;

pub use error::{Error, Result};
