//! Witness search over the default delta grid for a few sequences.
//!
//! cargo run --example witness_search

use cauchycert::certificate::DeltaGrid;
use cauchycert::metric::builtin::{euclid_1d, sq_abs};
use cauchycert::sequence::{search_witness, SearchConfig, SequencePrefix};

fn main() -> cauchycert::Result<()> {
    let halving: Vec<f64> = (1..=40).map(|n| 0.5f64.powi(n)).collect();
    let slow: Vec<f64> = (1..=120).map(|n| 0.9f64.powi(n)).collect();
    let alternating: Vec<f64> = (0..40).map(|n| (n % 2) as f64 * 0.3).collect();
    let cases = [
        (
            "halving, euclid_1d",
            SequencePrefix::from_scalars(&halving, euclid_1d())?,
        ),
        ("halving, sq_abs", SequencePrefix::from_scalars(&halving, sq_abs())?),
        ("0.9^n, euclid_1d", SequencePrefix::from_scalars(&slow, euclid_1d())?),
        (
            "0, 0.3, 0, ...",
            SequencePrefix::from_scalars(&alternating, euclid_1d())?,
        ),
    ];
    let cfg = SearchConfig::default();
    for (name, seq) in &cases {
        println!("{name}");
        for delta in DeltaGrid::default().deltas() {
            let r = search_witness(seq, delta, &cfg)?;
            match r.witness {
                Some(w) => println!(
                    "  delta {delta:<9} p = {}, lambda = {}, n0 = {}  ({} tried)",
                    w.p, w.lambda, w.n0, r.candidates_tried
                ),
                None => println!("  delta {delta:<9} none  ({} tried)", r.candidates_tried),
            }
        }
    }
    Ok(())
}
