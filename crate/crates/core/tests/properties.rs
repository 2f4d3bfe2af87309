mod common;

use cauchycert::banach::{affine_1d, derive_p, iterate};
use cauchycert::certificate::{certify, chain_bound, final_bound, self_distance_bound};
use cauchycert::experiment::{cmd_check, ExperimentConfig, RunOptions};
use cauchycert::metric::axioms::estimate_minimal_s;
use cauchycert::metric::builtin::{euclid_1d, max_dislocated, shifted_dislocated, sq_abs};
use cauchycert::metric::sampler::SamplerConfig;
use cauchycert::metric::{DbMetric, Point, ETA};
use cauchycert::sequence::{
    brute_force_cauchy_check, check_condition_2b, n0_candidates, search_witness, SearchConfig, SequencePrefix,
    TailConfig, Witness2b,
};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn metric(k: usize) -> DbMetric {
    match k % 4 {
        0 => euclid_1d(),
        1 => sq_abs(),
        2 => max_dislocated(),
        _ => shifted_dislocated(0.25).unwrap(),
    }
}

fn diameter(v: &[f64], m: &DbMetric, from: usize) -> f64 {
    let p: Vec<Point> = v.iter().map(|&x| Point::scalar(x).unwrap()).collect();
    let mut d: f64 = 0.0;
    for i in from - 1..p.len() {
        for j in i..p.len() {
            d = d.max(m.eval(&p[i], &p[j]).unwrap());
        }
    }
    d
}

fn values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..10.0f64, 4..40)
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn minimal_s_matches_second_pass(seed in any::<u64>(), samples in 1usize..64, k in 0usize..4) {
        let m = metric(k);
        let cfg = SamplerConfig { seed, samples, grid_points: 5, ..SamplerConfig::default() };
        let sample = cfg.sample(1).unwrap();
        let est = estimate_minimal_s(&m, &sample.triples).unwrap();
        let mut best: f64 = 0.0;
        let mut used = 0;
        for (x, y, z) in &sample.triples {
            let (a, b, c) = (m.eval(x, z).unwrap(), m.eval(x, y).unwrap(), m.eval(y, z).unwrap());
            if b + c == 0.0 {
                continue;
            }
            used += 1;
            best = best.max(a / (b + c));
        }
        prop_assert_eq!(est.min_s, best);
        prop_assert_eq!(est.triples_used, used);
        prop_assert!(est.min_s <= m.s() + ETA);
    }

    #[test]
    fn oracle_matches_double_loop_and_is_monotone(v in values(), k in 0usize..4, a in 1usize..40, b in 1usize..40) {
        let m = metric(k);
        let seq = SequencePrefix::from_scalars(&v, m.clone()).unwrap();
        let (lo, hi) = (a.min(b).min(v.len()), a.max(b).min(v.len()));
        let d_lo = brute_force_cauchy_check(&seq, lo).unwrap();
        let d_hi = brute_force_cauchy_check(&seq, hi).unwrap();
        prop_assert_eq!(d_lo, diameter(&v, &m, lo));
        prop_assert!(d_hi <= d_lo);
    }

    #[test]
    fn chain_bound_dominates_direct(v in values(), k in 0usize..4, n in 1usize..40, q in 1usize..10) {
        let seq = SequencePrefix::from_scalars(&v, metric(k)).unwrap();
        let n = n.min(v.len() - 1);
        let q = q.min(v.len() - n);
        let c = chain_bound(&seq, n, q).unwrap();
        let s = seq.s();
        let mut total = 0.0;
        for i in 0..q {
            let coeff = if i + 1 < q { s.powi(i as i32 + 1) } else { s.powi(q as i32 - 1) };
            total += coeff * seq.dist(n + i, n + i + 1).unwrap();
        }
        prop_assert!((c.total - total).abs() <= 1e-12 * total.max(1.0));
        prop_assert!(c.direct <= c.total + ETA);
    }

    #[test]
    fn self_distance_is_bounded(v in values(), shift in 0.01..5.0f64, n in 1usize..40) {
        for m in [max_dislocated(), shifted_dislocated(shift).unwrap()] {
            let seq = SequencePrefix::from_scalars(&v, m).unwrap();
            let n = n.min(v.len() - 1);
            let b = self_distance_bound(&seq, n).unwrap();
            prop_assert!(b.self_distance <= b.bound + ETA);
        }
    }

    #[test]
    fn final_bound_is_monotone(d1 in 1e-4..1.0f64, d2 in 1e-4..1.0f64, l1 in 0.05..0.95f64, l2 in 0.05..0.95f64, s in 1.0..8.0f64) {
        let fb = |d: f64, l: f64| final_bound(&Witness2b::new(d, 1, l, 1).unwrap(), s).unwrap();
        prop_assert!((fb(d1, l1) - d1 * (1.0 - l1 + s)).abs() < 1e-12);
        if d1 <= d2 {
            prop_assert!(fb(d1, l1) <= fb(d2, l1));
        }
        if l1 <= l2 {
            prop_assert!(fb(d1, l1) >= fb(d1, l2));
        }
    }

    #[test]
    fn derive_p_matches_loop(c in 0.0..0.99f64, lambda in 0.01..0.99f64, s in 1.0..16.0f64) {
        let target = lambda / s - ETA;
        let mut p = 1;
        while c.powi(p as i32) >= target {
            p += 1;
        }
        prop_assert_eq!(derive_p(c, lambda, s).unwrap(), p);
    }

    #[test]
    fn untriggered_means_holds(v in values(), k in 0usize..4, delta in 0.01..3.0f64, p in 1usize..3, lambda in 0.1..0.9f64) {
        let seq = SequencePrefix::from_scalars(&v, metric(k)).unwrap();
        let w = Witness2b::new(delta, p, lambda, 1).unwrap();
        prop_assume!(seq.len() >= w.min_len());
        let r = check_condition_2b(&seq, &w).unwrap();
        if r.pairs_triggered == 0 {
            prop_assert!(r.holds);
        }
        prop_assert_eq!(r.holds, r.violating_pair.is_none());
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn search_returns_first_candidate(start in 0.1..2.0f64, ratio in -0.9..0.9f64, len in 8usize..32, delta in 0.01..1.0f64) {
        let v: Vec<f64> = (0..len as i32).map(|k| start * ratio.powi(k)).collect();
        let seq = SequencePrefix::from_scalars(&v, euclid_1d()).unwrap();
        let cfg = SearchConfig::default();
        let found = search_witness(&seq, delta, &cfg).unwrap();
        let mut expected = None;
        'scan: for p in 1..=cfg.p_max.min(len - 3) {
            for &lambda in &cfg.lambda_grid {
                for n0 in n0_candidates(len) {
                    let w = Witness2b::new(delta, p, lambda, n0).unwrap();
                    if len >= w.min_len() && check_condition_2b(&seq, &w).unwrap().holds {
                        expected = Some(w);
                        break 'scan;
                    }
                }
            }
        }
        prop_assert_eq!(found.witness, expected);
        prop_assert_eq!(search_witness(&seq, delta, &cfg).unwrap().witness, expected);
    }

    #[test]
    fn contraction_orbits_satisfy_2b_exactly(seed in 0u64..1000, k in 0usize..7) {
        let case = common::random_affine(seed);
        let seq = case.orbit(48);
        let p = derive_p(case.c, 0.5, seq.s()).unwrap();
        let delta = 0.5 * 0.5f64.powi(k as i32);
        let r = check_condition_2b(&seq, &Witness2b::new(delta, p, 0.5, 1).unwrap()).unwrap();
        prop_assert!(r.holds, "{:?}", r.violating_pair);
    }

    #[test]
    fn certificates_are_sound(a in -0.7..0.7f64, b in -1.0..1.0f64, x0 in -1.0..1.0f64, k in 0usize..7) {
        prop_assume!(a.abs() >= 0.05);
        let f = affine_1d(a, b).unwrap();
        let m = euclid_1d();
        let orbit = iterate(&f, &m, &Point::scalar(x0).unwrap(), 128).unwrap();
        let v: Vec<f64> = orbit.sequence.points().iter().map(|p| p.coords()[0]).collect();
        let delta = 0.5 * 0.5f64.powi(k as i32);
        let w = Witness2b::new(delta, derive_p(a.abs(), 0.5, 1.0).unwrap(), 0.5, 1).unwrap();
        let cert = certify(&orbit.sequence, &w, &TailConfig::default()).unwrap();
        let diam = diameter(&v, &m, cert.verified_range.0);
        prop_assert_eq!(cert.oracle_tail_diameter, diam);
        prop_assert!(diam < cert.final_bound);
        prop_assert_eq!(cert.verified_range.1, 128);
    }

    #[test]
    fn check_reports_are_deterministic(seed in any::<u64>(), gain in 0.5..3.5f64, x0 in -5.0..5.0f64) {
        let body = serde_json::json!({
            "metric": {"name": "euclid_1d"},
            "contraction": {"name": "logistic_damped", "params": {"gain": gain}},
            "source": {"generator": {"name": "orbit", "params": {"len": 40, "x0": x0}}},
        });
        let cfg = ExperimentConfig::from_json(&body.to_string()).unwrap();
        let opts = RunOptions { seed: Some(seed), no_timestamp: true };
        let a = cmd_check(&cfg, &opts).unwrap().to_json().unwrap();
        let b = cmd_check(&cfg, &opts).unwrap().to_json().unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn point_json_round_trip(v in prop::collection::vec(-1e6..1e6f64, 1..5)) {
        let p = Point::new(v).unwrap();
        let back: Point = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert_eq!(p, back);
    }
}
