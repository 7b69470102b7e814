mod common;

use coupon_core::bell::{estimate_pauli_sq, exact_round_distribution, BellOutcome, BellRecord, StateSampler};
use coupon_core::encoding::{build_state, encode_element, CouponInstance, CouponState, PauliZString};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn coupon(b: usize, s: u64) -> (PauliZString, CouponState) {
    let p = encode_element(s, b).unwrap();
    let st = build_state(&CouponInstance::with_qubits(b, &[p]).unwrap());
    (p, st)
}

fn empirical(st: &CouponState, rounds: u64, seed: u64) -> Vec<f64> {
    let sampler = StateSampler::new(st);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; 1 << (2 * st.num_qubits())];
    for k in 0..rounds {
        counts[sampler.measure(k, &mut rng).outcome_index()] += 1;
    }
    counts.iter().map(|&c| c as f64 / rounds as f64).collect()
}

fn tv(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

#[test]
fn exact_distribution_matches_full_projection() {
    for b in 1..=3usize {
        for s in 1..1u64 << b {
            let bits = format!("{s:0b$b}");
            let rho = common::coupon_density(&[&bits]);
            let oracle = common::bell_projection_distribution(&rho, b);
            let (_, st) = coupon(b, s);
            let exact = exact_round_distribution(&st).unwrap();
            assert_eq!(exact.len(), oracle.len());
            for (x, y) in exact.iter().zip(&oracle) {
                assert!((x - y).abs() < 1e-12, "b={b} s={s}");
            }
            assert!((exact.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
    }
    // also a non-coupon mixture
    let rho = common::coupon_density(&["01", "10"]);
    let st = CouponState::from_weights(2, common::diag(&rho)).unwrap();
    let exact = exact_round_distribution(&st).unwrap();
    let oracle = common::bell_projection_distribution(&rho, 2);
    assert!(exact.iter().zip(&oracle).all(|(x, y)| (x - y).abs() < 1e-12));
}

#[test]
fn zz_joint_distribution_sampled() {
    let (_, st) = coupon(2, 0b11);
    let rho = common::coupon_density(&["11"]);
    let oracle = common::bell_projection_distribution(&rho, 2);
    let emp = empirical(&st, 100_000, 21);
    assert!(tv(&emp, &oracle) < 0.02);
}

#[test]
fn sampler_converges_to_exact_for_small_registers() {
    for b in 1..=4usize {
        for s in 1..1u64 << b {
            let (_, st) = coupon(b, s);
            let exact = exact_round_distribution(&st).unwrap();
            let d = tv(&empirical(&st, 100_000, 1000 + s), &exact);
            assert!(d < 0.02, "b={b} s={s} tv={d}");
        }
    }
}

#[test]
fn matching_code_gives_plus_one_every_round() {
    for b in 1..=8usize {
        for s in [1u64, (1 << b) - 1, 0b1011 & ((1 << b) - 1)] {
            if s == 0 {
                continue;
            }
            let (p, st) = coupon(b, s);
            let sampler = StateSampler::new(&st);
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            for k in 0..2000 {
                assert_eq!(sampler.measure(k, &mut rng).pauli_product(&p).unwrap(), 1);
            }
        }
    }
}

#[test]
fn non_matching_codes_average_to_zero() {
    let (p, st) = coupon(5, 14);
    let sampler = StateSampler::new(&st);
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let n = 10_000;
    let records: Vec<BellRecord> = (0..n).map(|k| sampler.measure(k, &mut rng)).collect();
    for s in 1..32u64 {
        let sigma = encode_element(s, 5).unwrap();
        let est = estimate_pauli_sq(&records, &sigma).unwrap();
        if sigma == p {
            assert_eq!(est, 1.0);
        } else {
            assert!(est.abs() <= 3.0 / (n as f64).sqrt(), "sigma={sigma} estimate={est}");
        }
    }
}

#[test]
fn sign_bit_is_a_fair_coin_within_each_class() {
    let (_, st) = coupon(3, 0b101);
    let exact = exact_round_distribution(&st).unwrap();
    // flipping any pair's sign bit leaves the probability unchanged
    for idx in 0..exact.len() {
        for pair in 0..3 {
            let flipped = idx ^ (1 << (2 * pair));
            assert!((exact[idx] - exact[flipped]).abs() < 1e-12);
        }
    }
}

#[test]
fn ground_state_outcome_frequencies() {
    let (_, st) = coupon(1, 1);
    let emp = empirical(&st, 10_000, 4);
    assert!((emp[BellOutcome::PhiPlus.code() as usize] - 0.5).abs() < 0.02);
    assert!((emp[BellOutcome::PhiMinus.code() as usize] - 0.5).abs() < 0.02);
    assert_eq!(emp[2], 0.0);
    assert_eq!(emp[3], 0.0);
}

proptest! {
    #[test]
    fn record_log_lines_round_trip(round in any::<u64>(), codes in prop::collection::vec(0u8..4, 1..64)) {
        let rec = BellRecord { round, outcomes: codes.iter().map(|&c| BellOutcome::from_code(c).unwrap()).collect() };
        prop_assert_eq!(rec.to_string().parse::<BellRecord>().unwrap(), rec);
    }

    #[test]
    fn sign_never_affects_the_estimate(b in 1usize..=8, raw in any::<u64>(), signs in any::<u64>(), class in any::<u64>()) {
        let mask = (1u64 << b) - 1;
        let sigma = PauliZString::new(coupon_core::Gf2Vector::from_bits(raw & mask, b).unwrap());
        let make = |sign: u64| BellRecord {
            round: 0,
            outcomes: (0..b)
                .map(|i| {
                    let sh = b - 1 - i;
                    BellOutcome::from_code(((((class >> sh) & 1) << 1) | ((sign >> sh) & 1)) as u8).unwrap()
                })
                .collect(),
        };
        prop_assert_eq!(make(signs).pauli_product(&sigma).unwrap(), make(0).pauli_product(&sigma).unwrap());
    }
}
