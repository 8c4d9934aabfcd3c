use proptest::prelude::*;

use nqa_lab::cli::parse_sequence_spec;
use nqa_lab::counterexample::{dyadic_multiplicities, CounterexampleModel};
use nqa_lab::majorants::{random_sequence, s_k_value};
use nqa_lab::weight_core::ZeroSequence;

/// Nondecreasing positive lists built from positive increments.
fn explicit_values() -> impl Strategy<Value = Vec<f64>> {
    (0.01f64..5.0, prop::collection::vec(0.0f64..300.0, 0..40)).prop_map(|(first, steps)| {
        let mut v = vec![first];
        for d in steps {
            let next = v.last().unwrap() + d;
            v.push(next);
        }
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn multiplicities_match_direct_counts(values in explicit_values(), j_max in 1u64..16) {
        let s = ZeroSequence::explicit(values.clone()).unwrap();
        let m = dyadic_multiplicities(&s, j_max).unwrap();
        let cum = m.cumulative();
        for j in 1..=j_max {
            let edge = 2f64.powi(j as i32);
            let direct = values.iter().filter(|&&v| v <= edge).count() as u64;
            prop_assert_eq!(cum[j as usize - 1], direct);
        }
        let weighted: f64 = (1..=j_max).map(|j| m.n_j(j) as f64 / 2f64.powi(j as i32)).sum();
        prop_assert!((m.weighted_sum() - weighted).abs() <= 1e-12 * (1.0 + weighted));
    }

    #[test]
    fn log_abs_f_is_even(values in explicit_values(), x in -1e4f64..1e4, y in -1e4f64..1e4) {
        let s = ZeroSequence::explicit(values).unwrap();
        let m = CounterexampleModel::build(&s, 14, 128).unwrap();
        let a = m.log_abs_f(x, y).unwrap();
        prop_assert_eq!(a, m.log_abs_f(-x, y).unwrap());
        prop_assert_eq!(a, m.log_abs_f(x, -y).unwrap());
        prop_assert_eq!(m.log_omega0(x), m.log_omega0(-x));
    }

    #[test]
    fn f_is_dominated_by_omega0_squared(values in explicit_values(), x in -1e5f64..1e5, y in -1e5f64..1e5) {
        let s = ZeroSequence::explicit(values).unwrap();
        let m = CounterexampleModel::build(&s, 14, 128).unwrap();
        let (f, scale) = m.log_abs_f_scaled(x, y).unwrap();
        let bound = 2.0 * m.log_omega0(x.hypot(y));
        prop_assert!(f <= bound + 1e-12 * (1.0 + scale + bound));
    }

    #[test]
    fn explicit_render_round_trips(values in explicit_values()) {
        let s = ZeroSequence::explicit(values).unwrap();
        prop_assert_eq!(parse_sequence_spec(&s.render()).unwrap(), s);
    }

    #[test]
    fn family_render_round_trips(r in 1.0001f64..10.0, a in 1.0001f64..5.0, b in 0.0f64..4.0) {
        for s in [ZeroSequence::geometric(r).unwrap(), ZeroSequence::power(a).unwrap(), ZeroSequence::powlog(a, b).unwrap()] {
            prop_assert_eq!(parse_sequence_spec(&s.render()).unwrap(), s);
        }
    }

    #[test]
    fn s_k_nonnegative(seed in any::<u64>(), k in 1usize..12) {
        let c = random_sequence(k + 2, seed);
        prop_assert!(s_k_value(&c, k).unwrap() >= num_rational::BigRational::from_integer(0.into()));
    }
}
