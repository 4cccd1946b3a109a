//! Integer factorization: trial division to 10^6, then Brent's variant of
//! Pollard rho with a fixed seed schedule.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::primality::{is_prime, primes_below_million};
use crate::Error;

const RHO_SEEDS: u64 = 12;
const RHO_ITERATIONS: u64 = 1 << 22;

/// `sign * prod p^e * cofactor`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactoredInteger {
    pub sign: i8,
    pub factors: BTreeMap<BigInt, u32>,
    /// Composite part the rho budget could not split.
    pub unfactored_cofactor: Option<BigInt>,
}

impl FactoredInteger {
    pub fn one() -> Self {
        FactoredInteger { sign: 1, factors: BTreeMap::new(), unfactored_cofactor: None }
    }

    pub fn is_complete(&self) -> bool {
        self.unfactored_cofactor.is_none()
    }

    pub fn value(&self) -> BigInt {
        let mut v = BigInt::from(self.sign);
        for (p, &e) in &self.factors {
            v *= num_traits::pow(p.clone(), e as usize);
        }
        if let Some(c) = &self.unfactored_cofactor {
            v *= c;
        }
        v
    }

    pub fn exponent(&self, p: &BigInt) -> u32 {
        self.factors.get(p).copied().unwrap_or(0)
    }

    pub fn largest_prime(&self) -> Option<&BigInt> {
        self.factors.keys().next_back()
    }

    fn push(&mut self, p: BigInt, e: u32) {
        *self.factors.entry(p).or_insert(0) += e;
    }
}

/// Factors `n != 0`. A composite left over after the rho budget is reported
/// in `unfactored_cofactor` when it is at most 10^40, and is an error above.
pub fn factor(n: &BigInt) -> Result<FactoredInteger, Error> {
    if n.is_zero() {
        return Err(Error::Precondition("cannot factor zero".into()));
    }
    let mut out = FactoredInteger {
        sign: if n.is_negative() { -1 } else { 1 },
        factors: BTreeMap::new(),
        unfactored_cofactor: None,
    };
    let mut m = n.abs();
    let mut prime_checked = false;
    for &p in primes_below_million() {
        if m.is_one() {
            break;
        }
        if let Some(v) = m.to_u64() {
            if p.saturating_mul(p) > v {
                break;
            }
        }
        if p > 1 << 16 && !prime_checked {
            prime_checked = true;
            if is_prime(&m) {
                break;
            }
        }
        let pb = BigInt::from(p);
        let mut e = 0;
        loop {
            let (q, r) = m.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            out.push(pb, e);
        }
    }
    if m.is_one() {
        return Ok(out);
    }
    let mut stack = vec![m];
    while let Some(c) = stack.pop() {
        if c.is_one() {
            continue;
        }
        if is_prime(&c) {
            out.push(c, 1);
            continue;
        }
        if let Some(r) = perfect_power_root(&c) {
            let (root, k) = r;
            for _ in 0..k {
                stack.push(root.clone());
            }
            continue;
        }
        match split(&c) {
            Some(d) => {
                let other = &c / &d;
                stack.push(d);
                stack.push(other);
            }
            None => {
                let limit = num_traits::pow(BigInt::from(10), 40);
                if c > limit {
                    return Err(Error::Unfactored(c.to_string()));
                }
                out.unfactored_cofactor =
                    Some(out.unfactored_cofactor.take().map_or(c.clone(), |u| u * &c));
            }
        }
    }
    Ok(out)
}

/// `(root, k)` with `root^k = n`, `k >= 2`, if such a pair exists.
fn perfect_power_root(n: &BigInt) -> Option<(BigInt, u32)> {
    let bits = n.bits() as u32;
    for k in 2..=bits.max(2) {
        let r = num_integer::Roots::nth_root(n, k);
        if r <= BigInt::one() {
            break;
        }
        if num_traits::pow(r.clone(), k as usize) == *n {
            return Some((r, k));
        }
    }
    None
}

/// Finds a nontrivial divisor of the odd composite `n`.
fn split(n: &BigInt) -> Option<BigInt> {
    if let Some(v) = n.to_u64() {
        return (1..=RHO_SEEDS).find_map(|c| brent_u64(v, c)).map(BigInt::from);
    }
    (1..=RHO_SEEDS).find_map(|c| brent_big(n, c))
}

fn brent_u64(n: u64, c: u64) -> Option<u64> {
    let f = |x: u64| ((x as u128 * x as u128 + c as u128) % n as u128) as u64;
    let mut y = 2u64;
    let mut g = 1u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut x = y;
    let mut ys = y;
    let m = 128u64;
    let mut steps = 0u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = ((q as u128 * x.abs_diff(y) as u128) % n as u128) as u64;
            }
            g = q.gcd(&n);
            k += m;
        }
        r *= 2;
        steps += r;
        if steps > RHO_ITERATIONS {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n && g != 1).then_some(g)
}

fn brent_big(n: &BigInt, c: u64) -> Option<BigInt> {
    let cb = BigInt::from(c);
    let f = |x: &BigInt| (x * x + &cb) % n;
    let mut y = BigInt::from(2);
    let mut g = BigInt::one();
    let mut r = 1u64;
    let mut q = BigInt::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    let m = 128u64;
    let mut steps = 0u64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                q = (&q * (&x - &y).abs()) % n;
            }
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
        steps += r;
        if steps > RHO_ITERATIONS {
            return None;
        }
    }
    if g == *n {
        loop {
            ys = f(&ys);
            g = (&x - &ys).abs().gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (g != *n && !g.is_one()).then_some(g)
}

/// Exponents of `n` over the primes `<= bound`, or `None` if `n` has a larger prime factor.
pub fn smooth_factor(n: &BigInt, primes: &[u64], bound: u64) -> Option<BTreeMap<u64, u32>> {
    let mut m = n.abs();
    if m.is_zero() {
        return None;
    }
    let mut out = BTreeMap::new();
    for &p in primes.iter().take_while(|&&p| p <= bound) {
        if m.is_one() {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = m.div_rem(&BigInt::from(p));
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            out.insert(p, e);
        }
    }
    m.is_one().then_some(out)
}
