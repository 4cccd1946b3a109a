//! Independent oracles shared by the integration suites.
#![allow(dead_code)]

use lucas_catalan::central::Kind;
use lucas_catalan::num_bigint::BigInt;
use lucas_catalan::search::Part;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `U_n` and `V_n` from the plain three-term recurrence.
pub fn naive_uv(r: i64, s: i64, n: u64) -> (BigInt, BigInt) {
    let (r, s) = (BigInt::from(r), BigInt::from(s));
    let (mut u0, mut u1) = (BigInt::zero(), BigInt::one());
    let (mut v0, mut v1) = (BigInt::from(2), r.clone());
    for _ in 0..n {
        let u2 = &r * &u1 + &s * &u0;
        let v2 = &r * &v1 + &s * &v0;
        (u0, u1, v0, v1) = (u1, u2, v1, v2);
    }
    (u0, v0)
}

/// `binom(2m, m)` and `binom(2m, m)/(m+1)` from the product formula.
pub fn naive_central(m: u64, kind: Kind) -> BigInt {
    let mut b = BigInt::one();
    for i in 1..=m {
        b = b * BigInt::from(m + i) / BigInt::from(i);
    }
    match kind {
        Kind::B => b,
        Kind::C => b / BigInt::from(m + 1),
    }
}

/// Every multiset of parts `D_m`, `m_min <= m <= m_max`, whose product is `|n|`, by plain division.
pub fn brute_pbc(n: &BigInt, m_min: u64, m_max: u64) -> Vec<Vec<Part>> {
    let parts: Vec<(Part, BigInt)> = (m_min.max(1)..=m_max)
        .flat_map(|m| [Kind::C, Kind::B].map(|kind| Part { m, kind }))
        .map(|p| (p, naive_central(p.m, p.kind)))
        .filter(|(_, v)| *v > BigInt::one())
        .collect();
    fn walk(i: usize, rest: &BigInt, parts: &[(Part, BigInt)], acc: &mut Vec<Part>, out: &mut Vec<Vec<Part>>) {
        if rest.is_one() {
            if !acc.is_empty() {
                let mut v = acc.clone();
                v.sort();
                out.push(v);
            }
            return;
        }
        if i == parts.len() {
            return;
        }
        walk(i + 1, rest, parts, acc, out);
        let (p, v) = &parts[i];
        let (q, r) = rest.div_rem(v);
        if r.is_zero() {
            acc.push(*p);
            walk(i, &q, parts, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if !n.is_zero() {
        walk(0, &n.abs(), &parts, &mut Vec::new(), &mut out);
    }
    out.sort();
    out.dedup();
    out
}

/// `alpha <= a/b` for a real pair, via `sqrt(r^2 + 4s) <= 2a/b - r`.
pub fn alpha_at_most(r: i64, s: i64, a: i64, b: i64) -> bool {
    let (r, s, a, b) = (r as i128, s as i128, a as i128, b as i128);
    let t = 2 * a - r * b;
    t >= 0 && t * t >= (r * r + 4 * s) * b * b
}

/// `alpha >= a/b` for a real pair.
pub fn alpha_at_least(r: i64, s: i64, a: i64, b: i64) -> bool {
    let (r, s, a, b) = (r as i128, s as i128, a as i128, b as i128);
    let t = 2 * a - r * b;
    t <= 0 || t * t <= (r * r + 4 * s) * b * b
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}
