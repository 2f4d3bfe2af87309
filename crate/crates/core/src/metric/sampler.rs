//! Deterministic grid-plus-uniform samples of points, pairs and triples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Point;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplerConfig {
    /// Number of uniform pairs and of uniform triples drawn on top of the grid.
    pub samples: usize,
    pub seed: u64,
    /// Sampling box `[low, high]` for every coordinate.
    pub low: f64,
    pub high: f64,
    /// Equispaced grid points along the box diagonal.
    pub grid_points: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            samples: 256,
            seed: 0,
            low: 0.0,
            high: 10.0,
            grid_points: 11,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Sample {
    pub pairs: Vec<(Point, Point)>,
    pub triples: Vec<(Point, Point, Point)>,
}

impl Sample {
    pub fn len(&self) -> usize {
        self.pairs.len() + self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl SamplerConfig {
    fn validate(&self) -> Result<()> {
        if !(self.low.is_finite() && self.high.is_finite() && self.low <= self.high) {
            return Err(Error::InvalidParameter(format!(
                "sampling box [{}, {}] is invalid",
                self.low, self.high
            )));
        }
        if self.grid_points == 0 && self.samples == 0 {
            return Err(Error::EmptySample);
        }
        Ok(())
    }

    /// Grid points on the diagonal of the box, `grid_points` of them.
    pub fn grid(&self, dim: usize) -> Result<Vec<Point>> {
        self.validate()?;
        let n = self.grid_points;
        (0..n)
            .map(|i| {
                let t = if n == 1 {
                    self.low
                } else {
                    self.low + (self.high - self.low) * i as f64 / (n - 1) as f64
                };
                Point::new(vec![t; dim])
            })
            .collect()
    }

    /// All grid pairs and triples (including repeated points) followed by
    /// `samples` seeded uniform pairs and triples.
    pub fn sample(&self, dim: usize) -> Result<Sample> {
        let grid = self.grid(dim)?;
        let mut out = Sample::default();
        for x in &grid {
            for y in &grid {
                out.pairs.push((x.clone(), y.clone()));
                for z in &grid {
                    out.triples.push((x.clone(), y.clone(), z.clone()));
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let draw = |rng: &mut ChaCha8Rng| Point::new((0..dim).map(|_| self.uniform(rng)).collect());
        for _ in 0..self.samples {
            out.pairs.push((draw(&mut rng)?, draw(&mut rng)?));
        }
        for _ in 0..self.samples {
            out.triples.push((draw(&mut rng)?, draw(&mut rng)?, draw(&mut rng)?));
        }
        Ok(out)
    }

    fn uniform(&self, rng: &mut ChaCha8Rng) -> f64 {
        if self.high > self.low {
            rng.gen_range(self.low..=self.high)
        } else {
            self.low
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_equispaced_and_contains_endpoints() {
        let g = SamplerConfig::default().grid(1).unwrap();
        let xs: Vec<f64> = g.iter().map(|p| p.coords()[0]).collect();
        assert_eq!(xs, (0..=10).map(f64::from).collect::<Vec<_>>());
    }

    #[test]
    fn sample_sizes() {
        let cfg = SamplerConfig {
            samples: 7,
            grid_points: 3,
            ..Default::default()
        };
        let s = cfg.sample(2).unwrap();
        assert_eq!(s.pairs.len(), 9 + 7);
        assert_eq!(s.triples.len(), 27 + 7);
        assert!(s.pairs.iter().all(|(a, b)| a.dim() == 2 && b.dim() == 2));
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let cfg = SamplerConfig {
            seed: 99,
            ..Default::default()
        };
        let a = cfg.sample(3).unwrap();
        let b = cfg.sample(3).unwrap();
        assert_eq!(a.pairs, b.pairs);
        assert_eq!(a.triples, b.triples);
        let other = SamplerConfig { seed: 100, ..cfg }.sample(3).unwrap();
        assert_ne!(a.pairs, other.pairs);
    }

    #[test]
    fn bad_box_rejected() {
        let cfg = SamplerConfig {
            low: 1.0,
            high: 0.0,
            ..Default::default()
        };
        assert!(cfg.sample(1).is_err());
    }
}
