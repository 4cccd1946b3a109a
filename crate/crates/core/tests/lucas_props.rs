mod common;

use lucas_catalan::cyclotomic::{m_log_sum_u, m_log_sum_v, m_lower_bound_u, m_lower_bound_v, telescoping_sides, ModulusShape, Telescope};
use lucas_catalan::lucas::LucasParams;
use lucas_catalan::num_bigint::BigInt;
use lucas_catalan::runs::lemma1_grid_points;
use num_integer::Integer;
use num_traits::{One, Signed};
use proptest::prelude::*;

fn valid_pair(r_max: i64, s_max: i64) -> impl Strategy<Value = (i64, i64)> {
    (1..=r_max, -s_max..=s_max).prop_filter("valid pair", |&(r, s)| LucasParams::new(r, s).is_ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn recurrence_matches_naive((r, s) in valid_pair(40, 100), n in 0u64..=120) {
        let p = LucasParams::new(r, s).unwrap();
        let (u, v) = p.uv(n);
        prop_assert_eq!((u, v), common::naive_uv(r, s, n));
    }

    #[test]
    fn doubling_and_norm((r, s) in valid_pair(40, 100), n in 0u64..=80) {
        let p = LucasParams::new(r, s).unwrap();
        let (u, v) = p.uv(n);
        prop_assert_eq!(p.u(2 * n), &u * &v);
        let disc = BigInt::from(r * r + 4 * s);
        prop_assert_eq!(&v * &v - disc * &u * &u, BigInt::from(4) * BigInt::from(-s).pow(n as u32));
    }

    #[test]
    fn terms_coprime_to_s((r, s) in valid_pair(40, 100), n in 1u64..=80) {
        let p = LucasParams::new(r, s).unwrap();
        let sb = BigInt::from(s);
        prop_assert!(p.v(n).gcd(&sb).is_one());
        prop_assert!(p.u(n).gcd(&sb).is_one());
    }

    #[test]
    fn strong_divisibility((r, s) in valid_pair(20, 50), m in 1u64..=60, n in 1u64..=60) {
        let p = LucasParams::new(r, s).unwrap();
        prop_assert_eq!(p.u(m).gcd(&p.u(n)), p.u(m.gcd(&n)).abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn telescoping_identities((r, s) in valid_pair(6, 8), idx in any::<prop::sample::Index>()) {
        let points = lemma1_grid_points(72);
        let (n0, t, n, shape) = points[idx.index(points.len())];
        let p = LucasParams::new(r, s).unwrap();
        let which = match shape {
            ModulusShape::PrimePower { .. } => Telescope::U1,
            ModulusShape::TwoPrimes { .. } => Telescope::U2,
        };
        let (a, b) = telescoping_sides(&p, n, n0, t, which).unwrap();
        prop_assert_eq!(a, b);
        if matches!(shape, ModulusShape::PrimePower { p } if p > 2) {
            let (a, b) = telescoping_sides(&p, n, n0, t, Telescope::V1).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn lower_bound_is_sound((r, s) in valid_pair(5, 6), idx in any::<prop::sample::Index>()) {
        let points = lemma1_grid_points(60);
        let (n0, t, n, shape) = points[idx.index(points.len())];
        let p = LucasParams::new(r, s).unwrap();
        if let Ok(bound) = m_lower_bound_u(&p, n, n0, t, 256) {
            let sum = m_log_sum_u(&p, n, n0, 256);
            prop_assert!(!(sum.exact && sum.value.certainly_lt(&bound)), "U: {:?} below bound at n0={} t={} n={}", sum.contributing, n0, t, n);
        }
        if matches!(shape, ModulusShape::PrimePower { p } if p > 2) {
            if let Ok(bound) = m_lower_bound_v(&p, n, n0, t, 256) {
                let sum = m_log_sum_v(&p, n, n0, 256);
                prop_assert!(!(sum.exact && sum.value.certainly_lt(&bound)), "V: below bound at n0={} t={} n={}", n0, t, n);
            }
        }
    }
}
