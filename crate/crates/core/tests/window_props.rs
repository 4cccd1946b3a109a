mod common;

use lucas_catalan::search::{enumerate_rs, is_real_pair, AlphaBound, SSign};
use lucas_catalan::lucas::SequencePair;
use proptest::prelude::*;

/// Every real pair in the box `1 <= r <= 2 c2`, `-r^2/4 <= s <= c2^2` with `c1 <= alpha <= c2`.
fn box_oracle(c1: (i64, i64), c2: (i64, i64), sign: SSign) -> Vec<SequencePair> {
    let r_max = 2 * c2.0 / c2.1;
    let s_max = (c2.0 * c2.0) / (c2.1 * c2.1) + 1;
    let mut out = Vec::new();
    for r in 1..=r_max {
        for s in -(r * r) / 4..=s_max {
            let sign_ok = match sign {
                SSign::Pos => s > 0,
                SSign::Neg => s < 0,
                SSign::Both => true,
            };
            if sign_ok
                && is_real_pair(r, s)
                && common::gcd_i64(r, s) == 1
                && common::alpha_at_least(r, s, c1.0, c1.1)
                && common::alpha_at_most(r, s, c2.0, c2.1)
            {
                out.push(SequencePair { r, s });
            }
        }
    }
    out
}

fn window() -> impl Strategy<Value = ((i64, i64), (i64, i64))> {
    (1i64..=12, 10i64..=150, 1i64..=12, 0i64..=200).prop_filter_map("c1 <= c2 <= 20", |(b1, a1, b2, extra)| {
        let c1 = (a1, b1);
        let a2 = (a1 * b2 + b1 - 1) / b1 + extra;
        let c2 = (a2, b2);
        (a1 * b2 <= a2 * b1 && a2 <= 20 * b2).then_some((c1, c2))
    })
}

fn sign() -> impl Strategy<Value = SSign> {
    prop_oneof![Just(SSign::Both), Just(SSign::Pos), Just(SSign::Neg)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn enumeration_matches_box((c1, c2) in window(), sign in sign()) {
        let w = enumerate_rs(&AlphaBound::Alpha(c1.0 as i128, c1.1 as i128), &AlphaBound::Alpha(c2.0 as i128, c2.1 as i128), sign).unwrap();
        prop_assert!(w.undecided.is_empty());
        prop_assert_eq!(w.pairs, box_oracle(c1, c2, sign));
    }
}

#[test]
fn golden_lower_end_includes_golden_pair() {
    let w = enumerate_rs(&AlphaBound::Golden, &AlphaBound::Alpha(2, 1), SSign::Both).unwrap();
    assert!(w.pairs.contains(&SequencePair { r: 1, s: 1 }));
    assert!(w.pairs.iter().all(|p| common::alpha_at_most(p.r, p.s, 2, 1)));
}
