mod common;

use lucas_catalan::central::{central_value, Kind};
use lucas_catalan::num_bigint::BigInt;
use lucas_catalan::search::{pbc_decompose, Part, PbcOptions};
use proptest::prelude::*;

const M_MAX: u64 = 8;
const N_MAX: u64 = 1_000_000_000_000;

fn part() -> impl Strategy<Value = Part> {
    (1..=M_MAX, prop_oneof![Just(Kind::C), Just(Kind::B)]).prop_map(|(m, kind)| Part { m, kind })
}

/// Products of parts, sometimes times a small cofactor, or plain integers.
fn target() -> impl Strategy<Value = BigInt> {
    let product = (prop::collection::vec(part(), 1..=6), 1u32..=7).prop_map(|(parts, c)| {
        let mut x = BigInt::from(c);
        for p in parts {
            let v = p.value();
            if &x * &v > BigInt::from(N_MAX) {
                break;
            }
            x *= v;
        }
        x
    });
    let plain = (1..=N_MAX).prop_map(BigInt::from);
    (prop_oneof![3 => product, 2 => plain], any::<bool>()).prop_map(|(x, neg)| if neg { -x } else { x })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn matches_brute_force(n in target(), m_min in 1u64..=2) {
        let opts = PbcOptions { m_min, m_cap: Some(M_MAX), max_solutions: usize::MAX };
        let got = pbc_decompose(&n, opts).unwrap();
        for f in &got {
            prop_assert_eq!(f.value(), n.clone());
        }
        let parts: Vec<Vec<Part>> = got.into_iter().map(|f| f.parts).collect();
        prop_assert_eq!(parts, common::brute_pbc(&n, m_min, M_MAX));
    }

    #[test]
    fn part_values_match_product_formula(p in part()) {
        prop_assert_eq!(p.value(), common::naive_central(p.m, p.kind));
        prop_assert_eq!(central_value(p.m, p.kind), common::naive_central(p.m, p.kind));
    }
}
