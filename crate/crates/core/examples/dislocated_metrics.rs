//! Sequences under metrics with non-zero self-distance.
//!
//! cargo run --example dislocated_metrics

use cauchycert::certificate::{certify_outcome, self_distance_bound};
use cauchycert::metric::builtin::{max_dislocated, shifted_dislocated};
use cauchycert::sequence::{brute_force_cauchy_check, SequencePrefix, TailConfig, Witness2b};

fn main() -> cauchycert::Result<()> {
    let v: Vec<f64> = (1..=60).map(|n| 0.5f64.powi(n)).collect();
    let tail = TailConfig::default();

    // max(x, y): the self-distance of x_n is x_n itself and shrinks with it
    let seq = SequencePrefix::from_scalars(&v, max_dislocated())?;
    for n in [1, 2, 10] {
        let b = self_distance_bound(&seq, n)?;
        println!(
            "max_dislocated  rho(x_{n}, x_{n}) = {:.3e} <= {:.3e}",
            b.self_distance, b.bound
        );
    }
    let out = certify_outcome(&seq, &Witness2b::new(0.1, 1, 0.6, 1)?, &tail)?;
    println!(
        "max_dislocated  certified = {}, diameter from 20 = {:.3e}",
        out.certified,
        brute_force_cauchy_check(&seq, 20)?
    );

    // |x - y| + a never drops below a, so condition (a) cannot hold
    let seq = SequencePrefix::from_scalars(&v, shifted_dislocated(0.25)?)?;
    let b = self_distance_bound(&seq, 10)?;
    println!("shifted(0.25)   rho(x_10, x_10) = {} <= {}", b.self_distance, b.bound);
    let out = certify_outcome(&seq, &Witness2b::new(0.1, 1, 0.6, 1)?, &tail)?;
    println!(
        "shifted(0.25)   certified = {}: {}",
        out.certified,
        out.failure.unwrap_or_default()
    );
    Ok(())
}
