//! Replays the proof on an orbit of x -> 0.8 x + 0.2 and prints the
//! certificate for one delta, then a summary over the grid.
//!
//! cargo run --example certify_orbit

use cauchycert::banach::{affine_1d, derive_p, iterate};
use cauchycert::certificate::{certify, certify_outcome, DeltaGrid};
use cauchycert::metric::builtin::euclid_1d;
use cauchycert::metric::Point;
use cauchycert::sequence::{TailConfig, Witness2b};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = affine_1d(0.8, 0.2)?;
    let orbit = iterate(&f, &euclid_1d(), &Point::scalar(-1.0)?, 128)?;
    let p = derive_p(f.c(), 0.5, 1.0)?;
    let tail = TailConfig::default();

    let cert = certify(&orbit.sequence, &Witness2b::new(0.1, p, 0.5, 1)?, &tail)?;
    println!("{}", serde_json::to_string_pretty(&cert)?);

    for delta in DeltaGrid::default().deltas() {
        let out = certify_outcome(&orbit.sequence, &Witness2b::new(delta, p, 0.5, 1)?, &tail)?;
        match &out.certificate {
            Some(c) => println!(
                "delta {delta:<9} m0 = {:<3} depth = {:<3} diameter {:.3e} < bound {:.3e}",
                c.m0, c.induction_depth, c.oracle_tail_diameter, c.final_bound
            ),
            None => println!("delta {delta:<9} {}", out.failure.unwrap_or_default()),
        }
    }
    Ok(())
}
