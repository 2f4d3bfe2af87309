//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use cauchycert::banach::{affine_1d, affine_nd, iterate, Contraction};
use cauchycert::metric::builtin::{euclid_1d, euclid_nd};
use cauchycert::metric::{DbMetric, Point};
use cauchycert::sequence::SequencePrefix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Case {
    pub seed: u64,
    pub c: f64,
    pub f: Contraction,
    pub metric: DbMetric,
    pub x0: Point,
}

impl Case {
    pub fn dim(&self) -> usize {
        self.x0.dim()
    }

    pub fn orbit(&self, n: usize) -> SequencePrefix {
        iterate(&self.f, &self.metric, &self.x0, n).unwrap().sequence
    }
}

fn rotation(axis: usize, t: f64) -> [[f64; 3]; 3] {
    let (s, c) = t.sin_cos();
    let (i, j) = match axis {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let mut r = [[0.0; 3]; 3];
    for (k, row) in r.iter_mut().enumerate() {
        row[k] = 1.0;
    }
    r[i][i] = c;
    r[j][j] = c;
    r[i][j] = -s;
    r[j][i] = s;
    r
}

fn mul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

/// Seeded affine contraction with constant `c` drawn from [0.1, 0.9].
/// Even seeds are 1D, odd seeds 3D; the 3D matrix is `Q diag(c, cu, cv) Q^T`
/// with `Q` a product of plane rotations, so its spectral norm is `c`.
pub fn random_affine(seed: u64) -> Case {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = rng.gen_range(0.1..=0.9);
    if seed.is_multiple_of(2) {
        let a = if rng.gen_bool(0.5) { c } else { -c };
        let b = rng.gen_range(-1.0..=1.0);
        let x0 = rng.gen_range(-1.0..=1.0);
        return Case {
            seed,
            c,
            f: affine_1d(a, b).unwrap(),
            metric: euclid_1d(),
            x0: Point::scalar(x0).unwrap(),
        };
    }
    let q = mul(
        &mul(
            &rotation(0, rng.gen_range(0.0..std::f64::consts::TAU)),
            &rotation(1, rng.gen_range(0.0..std::f64::consts::TAU)),
        ),
        &rotation(2, rng.gen_range(0.0..std::f64::consts::TAU)),
    );
    let diag = [c, c * rng.gen_range(0.0..=1.0), c * rng.gen_range(0.0..=1.0)];
    let matrix: Vec<Vec<f64>> = (0..3)
        .map(|i| {
            (0..3)
                .map(|j| (0..3).map(|k| q[i][k] * diag[k] * q[j][k]).sum())
                .collect()
        })
        .collect();
    let offset: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let x0: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    Case {
        seed,
        c,
        f: affine_nd(matrix, offset, c).unwrap(),
        metric: euclid_nd(3),
        x0: Point::new(x0).unwrap(),
    }
}

pub fn halving_prefix(n: usize) -> SequencePrefix {
    let v: Vec<f64> = (1..=n as i32).map(|k| 0.5f64.powi(k)).collect();
    SequencePrefix::from_scalars(&v, euclid_1d()).unwrap()
}

pub fn arithmetic_prefix(n: usize) -> SequencePrefix {
    let v: Vec<f64> = (1..=n).map(|k| k as f64).collect();
    SequencePrefix::from_scalars(&v, euclid_1d()).unwrap()
}
