//! Sampled axiom checks for every built-in metric.
//!
//! cargo run --example axiom_report

use cauchycert::metric::axioms::run_axiom_report;
use cauchycert::metric::builtin::{
    asymmetric_broken, euclid_1d, euclid_nd, max_dislocated, shifted_dislocated, sq_abs,
};
use cauchycert::metric::sampler::SamplerConfig;

fn main() -> cauchycert::Result<()> {
    let cfg = SamplerConfig::default();
    let metrics = [
        euclid_1d(),
        euclid_nd(3),
        sq_abs(),
        sq_abs().with_s(1.5)?,
        max_dislocated(),
        shifted_dislocated(0.5)?,
        asymmetric_broken(),
    ];
    println!(
        "{:<20} {:>5} {:>9} {:>5} {:>5} {:>5}",
        "metric", "s", "min s", "sym", "zero", "tri"
    );
    for m in &metrics {
        let r = run_axiom_report(m, &cfg)?;
        println!(
            "{:<20} {:>5} {:>9.6} {:>5} {:>5} {:>5}",
            r.metric, r.declared_s, r.estimated_min_s, r.symmetry_ok, r.zero_identity_ok, r.triangle_ok
        );
        if let Some(v) = &r.violation {
            let pts: Vec<String> = v.points.iter().map(|p| p.to_string()).collect();
            println!(
                "    {:?} fails at {}; reproduces: {}",
                v.axiom,
                pts.join(", "),
                v.reproduces(m)?
            );
        }
    }
    Ok(())
}
