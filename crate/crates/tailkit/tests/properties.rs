//! Property tests for the model invariants: pmf normalization, the
//! ordered-pair dependency sum, Laplace-transform shape, and the sandwich
//! ordering of every applicable bound against exact enumeration.

use proptest::collection::vec;
use proptest::prelude::*;

use tailkit::bounds::{all_bounds, janson_upper, laplace_lower, laplace_ratio_lower, Direction};
use tailkit::family::{GroundSet, IndicatorFamily};
use tailkit::phi::{phi_neg, varphi_bounds_check};

fn family_strategy() -> impl Strategy<Value = IndicatorFamily> {
    (1..7usize)
        .prop_flat_map(|n| {
            (
                vec(0.0..=1.0f64, n),
                vec(vec(0..n as u32, 0..=n), 0..6usize),
            )
        })
        .prop_map(|(probs, members)| {
            IndicatorFamily::new(GroundSet::new(probs).unwrap(), members).unwrap()
        })
}

proptest! {
    #[test]
    fn pmf_is_normalized_and_consistent(fam in family_strategy()) {
        let dist = fam.exact_distribution().unwrap();
        let stats = fam.compute_stats();
        prop_assert!((dist.total_mass() - 1.0).abs() < 1e-12);
        prop_assert!((dist.mean() - stats.mu).abs() <= 1e-10 * stats.mu.abs().max(1.0));
        prop_assert!(dist.variance() <= stats.lambda + 1e-10);
    }

    #[test]
    fn lambda_counts_ordered_pairs_twice(fam in family_strategy()) {
        let stats = fam.compute_stats();
        // independent oracle: direct sum over ordered pairs
        let probs = fam.ground().probs();
        let mut lambda = 0.0;
        for q in fam.members() {
            lambda += q.iter().map(|&i| probs[i as usize]).product::<f64>();
        }
        let mut unordered = 0.0;
        for (a, qa) in fam.members().iter().enumerate() {
            for qb in fam.members().iter().skip(a + 1) {
                if qa.iter().any(|i| qb.binary_search(i).is_ok()) {
                    let mut union: Vec<u32> = qa.iter().chain(qb.iter()).copied().collect();
                    union.sort_unstable();
                    union.dedup();
                    unordered += union.iter().map(|&i| probs[i as usize]).product::<f64>();
                }
            }
        }
        let oracle = lambda + 2.0 * unordered;
        prop_assert!((stats.lambda - oracle).abs() <= 1e-10 * oracle.abs().max(1.0));
        prop_assert!(stats.ordered_overlap_pairs % 2 == 0);
    }

    #[test]
    fn laplace_is_nonincreasing_and_log_convex(fam in family_strategy()) {
        let dist = fam.exact_distribution().unwrap();
        let vals: Vec<f64> = (0..20).map(|i| dist.laplace(i as f64 * 0.3).ln()).collect();
        for w in vals.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
        for w in vals.windows(3) {
            prop_assert!(w[0] + w[2] - 2.0 * w[1] >= -1e-9);
        }
    }

    #[test]
    fn laplace_bounds_hold_pointwise(fam in family_strategy(), s in 0.0..6.0f64, r in 0.0..3.0f64, dt in 0.0..3.0f64) {
        let stats = fam.compute_stats();
        let dist = fam.exact_distribution().unwrap();
        if let Ok(bound) = laplace_lower(&stats, s) {
            prop_assert!(bound <= dist.laplace(s).ln() + 1e-12);
        }
        let t = r + dt;
        let bound = laplace_ratio_lower(&stats, r, t).unwrap();
        let exact = dist.laplace(r).ln() - dist.laplace(t).ln();
        prop_assert!(bound <= exact + 1e-12);
    }

    #[test]
    fn sandwich_ordering_on_random_families(fam in family_strategy(), ei in 0..=20u32) {
        let eps = ei as f64 / 20.0;
        let dist = fam.exact_distribution().unwrap();
        let threshold = fam.lower_tail_threshold(eps);
        let weak = dist.prob_le(&threshold).ln();
        let strict = dist.prob_lt(&threshold).ln();
        for (name, bound) in all_bounds(&fam, eps) {
            if !bound.applicable {
                continue;
            }
            match bound.direction {
                Direction::UpperBoundOnTail => {
                    prop_assert!(weak <= bound.log_value + 1e-10, "{name} at eps={eps}")
                }
                Direction::LowerBoundOnTail => {
                    let target = if name == "lt3" { strict } else { weak };
                    prop_assert!(bound.log_value <= target + 1e-10, "{name} at eps={eps}");
                }
            }
        }
    }

    #[test]
    fn janson_log_value_nonincreasing_in_eps(fam in family_strategy()) {
        let stats = fam.compute_stats();
        let mut prev = f64::INFINITY;
        for i in 0..=40 {
            let eps = i as f64 / 40.0;
            let b = janson_upper(&stats, eps);
            prop_assert!(b.log_value <= prev + 1e-12);
            prev = b.log_value;
        }
    }

    #[test]
    fn rate_function_squeeze(eps in 0.0..=1.0f64) {
        let check = varphi_bounds_check(eps).unwrap();
        prop_assert!(check.all_hold());
        let phi = phi_neg(eps).unwrap();
        prop_assert!(phi >= eps * eps / 2.0 - 1e-12);
        prop_assert!(phi <= eps * eps + 1e-12);
    }

    #[test]
    fn mc_is_deterministic(fam in family_strategy(), seed in any::<u64>()) {
        let a = fam.mc_lower_tail(0.5, 512, seed).unwrap();
        let b = fam.mc_lower_tail(0.5, 512, seed).unwrap();
        prop_assert_eq!(a, b);
    }
}
