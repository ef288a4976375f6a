use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use qcrt_core::algorithms::{
    estimate_order, modpow, shor_attempt, shor_factor, shor_kernel, ShorConfig, ShorMode,
    ShorParams,
};
use qcrt_core::runtime::{AcceleratorConfig, Runtime};
use qcrt_core::sim::StateVector;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

// exhaustive search over exponents 1..=n
fn brute_order(a: u64, n: u64) -> u64 {
    let mut x = 1;
    for r in 1..=n {
        x = x * a % n;
        if x == 1 {
            return r;
        }
    }
    panic!("{a} has no order mod {n}");
}

// P(m) = sum_j |Q^-1 sum_{k = j mod r} exp(-2 pi i k m / Q)|^2
fn ideal_distribution(a: u64, n: u64, q: u64) -> Vec<f64> {
    let r = brute_order(a, n);
    (0..q)
        .map(|m| {
            (0..r)
                .map(|j| {
                    let amp: Complex64 = (j..q)
                        .step_by(r as usize)
                        .map(|k| Complex64::from_polar(1.0, -2.0 * PI * (k * m) as f64 / q as f64))
                        .sum();
                    (amp / q as f64).norm_sqr()
                })
                .sum()
        })
        .collect()
}

fn simulated_distribution(p: &ShorParams) -> Vec<f64> {
    let c = shor_kernel(p).unwrap();
    let mut s = StateVector::new(c.n_qubits());
    for inst in c.unitary_prefix() {
        s.apply(inst).unwrap();
    }
    let q = p.q() as usize;
    let mut marginal = vec![0.0; q];
    for (i, pr) in s.probabilities().into_iter().enumerate() {
        marginal[i & (q - 1)] += pr;
    }
    marginal
}

#[test]
fn counting_register_matches_phase_estimation() {
    for (a, support) in [(7u64, vec![0u64, 64, 128, 192]), (4, vec![0, 128])] {
        let p = ShorParams::new(15, a);
        let sim = simulated_distribution(&p);
        let oracle = ideal_distribution(a, 15, p.q());
        for (m, (x, y)) in sim.iter().zip(&oracle).enumerate() {
            assert!((x - y).abs() < 1e-9, "a={a} m={m}: {x} vs {y}");
        }
        let heavy: Vec<u64> = (0..p.q()).filter(|&m| sim[m as usize] > 1e-9).collect();
        assert_eq!(heavy, support, "a={a}");
        for m in support {
            assert!((sim[m as usize] - 1.0 / brute_order(a, 15) as f64).abs() < 1e-9);
        }
    }
}

#[test]
fn n21_distribution_matches_oracle() {
    let p = ShorParams::new(21, 2);
    let sim = simulated_distribution(&p);
    let oracle = ideal_distribution(2, 21, p.q());
    let tv: f64 = sim
        .iter()
        .zip(&oracle)
        .map(|(x, y)| (x - y).abs())
        .sum::<f64>()
        / 2.0;
    assert!(tv < 1e-9, "total variation {tv}");
}

#[test]
fn attempt_recovers_every_base_of_fifteen() {
    let rt = Runtime::new();
    for a in [2u64, 4, 7, 8, 11, 13, 14] {
        assert_eq!(gcd(a, 15), 1);
        let mut found = false;
        for seed in 0..4 {
            rt.initialize_worker("statevector", &AcceleratorConfig::default().with_seed(seed))
                .unwrap();
            let report = shor_attempt(&rt, &ShorParams::new(15, a)).unwrap();
            let est = report.estimate.unwrap();
            assert_eq!(est.raw_samples.len(), 10);
            if let Some(r) = est.order {
                assert_eq!(r, brute_order(a, 15), "a={a} seed={seed}");
                found = true;
            }
        }
        assert!(found, "a={a}: no valid estimate in 4 batches");
    }
}

proptest! {
    #[test]
    fn estimate_is_always_a_period(
        a in 2u64..35,
        samples in prop::collection::vec(0u64..1024, 1..12),
    ) {
        let n = 35;
        prop_assume!(gcd(a, n) == 1);
        let est = estimate_order(&samples, 1 << 10, n, a);
        if let Some(r) = est.order {
            prop_assert_eq!(modpow(a, r, n), 1);
            prop_assert_eq!(r % brute_order(a, n), 0);
        }
    }

    #[test]
    fn exact_multiples_recover_the_order(a in 2u64..15, s in 1u64..16) {
        prop_assume!(gcd(a, 15) == 1);
        let r = brute_order(a, 15);
        let q = 256;
        let m = (s % r) * q / r;
        let est = estimate_order(&[m, (m + q / r) % q], q, 15, a);
        prop_assert_eq!(est.order, Some(r));
    }
}

fn assert_valid(n: u64, divisors: &BTreeSet<u64>) {
    for d in divisors {
        assert!(
            *d > 1 && *d < n && n.is_multiple_of(*d),
            "bad divisor {d} of {n}"
        );
    }
}

#[test]
fn factor_fifteen_both_modes() {
    for seed in 0..6 {
        let serial = shor_factor(&ShorConfig::new(15, seed, ShorMode::Serial, 8)).unwrap();
        let parallel = shor_factor(&ShorConfig::new(15, seed, ShorMode::Parallel, 8)).unwrap();
        assert_eq!(serial.divisors, BTreeSet::from([3, 5]), "seed {seed}");
        assert_valid(15, &parallel.divisors);
        assert_eq!(serial.divisors, parallel.divisors, "seed {seed}");
    }
}

#[test]
fn factor_twenty_one() {
    for mode in [ShorMode::Serial, ShorMode::Parallel] {
        let r = shor_factor(&ShorConfig::new(21, 11, mode, 10)).unwrap();
        assert_eq!(r.divisors, BTreeSet::from([3, 7]), "{mode:?}");
    }
}

#[test]
fn exhausted_attempts_are_not_found() {
    let mut cfg = ShorConfig::new(15, 0, ShorMode::Serial, 1).with_forced_bases([14]);
    cfg.n_shots = 10;
    let r = shor_factor(&cfg).unwrap();
    assert!(!r.found());
    assert!(r.divisors.is_empty());
}

#[test]
fn tiny_n_is_an_error() {
    assert!(shor_factor(&ShorConfig::new(2, 0, ShorMode::Serial, 1)).is_err());
}
