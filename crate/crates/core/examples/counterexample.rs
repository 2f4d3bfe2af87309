//! x_n = n: condition (b) holds without a single triggered pair while the
//! sequence runs off to infinity, which is why condition (a) is needed.
//!
//! cargo run --example counterexample

use cauchycert::metric::builtin::euclid_1d;
use cauchycert::sequence::{
    brute_force_cauchy_check, check_condition_2a, check_condition_2b, SequencePrefix, TailConfig, Witness2b,
};

fn main() -> cauchycert::Result<()> {
    for len in [10, 50, 200] {
        let v: Vec<f64> = (1..=len).map(|n| n as f64).collect();
        let seq = SequencePrefix::from_scalars(&v, euclid_1d())?;
        let a = check_condition_2a(&seq, &TailConfig::default())?;
        println!(
            "N = {len}: condition (a) holds = {}, tail max = {}",
            a.holds, a.tail_max
        );
        for delta in [0.5, 0.25, 0.125] {
            let b = check_condition_2b(&seq, &Witness2b::new(delta, 1, 0.5, 1)?)?;
            println!(
                "  delta {delta}: (b) holds = {}, {} pairs, {} triggered",
                b.holds, b.pairs_checked, b.pairs_triggered
            );
        }
        println!("  tail diameter from n = 10: {}", brute_force_cauchy_check(&seq, 10)?);
    }
    Ok(())
}
