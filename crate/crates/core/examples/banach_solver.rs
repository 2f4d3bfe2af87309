//! Certified fixed-point iteration for the built-in contractions.
//!
//! cargo run --example banach_solver

use cauchycert::banach::{
    affine_1d, affine_nd, constant, halving, logistic_damped, solve_fixed_point, Contraction, SolverConfig,
};
use cauchycert::metric::builtin::{euclid_1d, euclid_nd};
use cauchycert::metric::{DbMetric, Point};

fn main() -> cauchycert::Result<()> {
    let rot = std::f64::consts::FRAC_PI_6;
    let (s, c) = rot.sin_cos();
    let cases: Vec<(Contraction, DbMetric, Point)> = vec![
        (affine_1d(0.9, 0.1)?, euclid_1d(), Point::scalar(0.0)?),
        (halving(), euclid_1d(), Point::scalar(1.0)?),
        (logistic_damped(2.0)?, euclid_1d(), Point::scalar(4.0)?),
        (constant(vec![2.5])?, euclid_1d(), Point::scalar(-3.0)?),
        // rotation scaled by 0.7 plus an offset
        (
            affine_nd(
                vec![vec![0.7 * c, -0.7 * s], vec![0.7 * s, 0.7 * c]],
                vec![1.0, 0.0],
                0.7,
            )?,
            euclid_nd(2),
            Point::new(vec![0.0, 0.0])?,
        ),
    ];
    let cfg = SolverConfig::default();
    for (f, m, x0) in &cases {
        let sol = solve_fixed_point(f, m, x0, 0.01, &cfg)?;
        println!(
            "{:<16} x* = {:<44} N = {:<4} |f(x*) - x*| = {:.2e}  tail bound {}",
            f.name(),
            sol.point.to_string(),
            sol.iterations,
            sol.residual.residual,
            sol.certificate.final_bound
        );
    }
    Ok(())
}
