//! Cyclotomic values `Phi_l(a, b)`, primitive parts, the `M_{n0}` log sums and
//! the lower bounds they satisfy.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::factor::{factor, FactoredInteger};
use crate::interval::{ln_int, ln_ratio, Interval};
use crate::lucas::{alpha_log_interval, is_primitive_prime, primitive_divisors_by_definition, LucasParams};
use crate::numtheory::{divisors, factor_u64, is_pm1_mod, largest_prime_factor, mobius};
use crate::Error;

/// `M_{n0}(x)`: the log of the part of `x` built from primes `≡ ±1 (mod n0)`.
#[derive(Clone, Debug, Serialize)]
pub struct MLogSum {
    pub n0: u64,
    #[serde(skip)]
    pub value: Interval,
    /// `(q, e)` with every prime of `q` congruent to `±1 (mod n0)`. A `q` is
    /// prime unless it is a primitive block taken whole.
    pub contributing: Vec<(BigInt, u32)>,
    /// False when some piece could not be factored and was left out, making
    /// `value` a lower bound only.
    pub exact: bool,
}

/// `prod_{d | l} us[l/d]^mu(d)` for `l >= 2`, from the terms `us[0..=l]` of a U-sequence.
pub fn cyclotomic_from_terms(us: &[BigInt], l: u64) -> BigInt {
    assert!(l >= 1 && us.len() as u64 > l);
    if l == 1 {
        return BigInt::one();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for d in divisors(l) {
        match mobius(d) {
            1 => num *= &us[(l / d) as usize],
            -1 => den *= &us[(l / d) as usize],
            _ => {}
        }
    }
    let (q, r) = num.div_rem(&den);
    assert!(r.is_zero(), "inexact cyclotomic division at l={l}");
    q
}

pub fn cyclotomic_value(params: &LucasParams, l: u64) -> Result<BigInt, Error> {
    if l < 2 {
        return Err(Error::Precondition("cyclotomic_value needs l >= 2".into()));
    }
    Ok(cyclotomic_from_terms(&params.u_sequence(l), l))
}

/// Terms `U_0..=U_n` of the sequence with coefficients `(r, s)`, signs kept.
pub fn raw_u_sequence(r: &BigInt, s: &BigInt, n: u64) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(), BigInt::one()];
    while (out.len() as u64) <= n {
        let k = out.len();
        out.push(r * &out[k - 1] + s * &out[k - 2]);
    }
    out.truncate(n as usize + 1);
    out
}

/// Coefficients of the sequence in `(a^k, b^k)`: `(V_k, (-1)^(k-1) s^k)`.
pub fn powered_pair(params: &LucasParams, k: u64) -> (BigInt, BigInt) {
    let sk = num_traits::pow(params.s.clone(), k as usize);
    let s1 = if k % 2 == 1 { sk } else { -sk };
    (params.v(k), s1)
}

/// Product of `p^{nu_p(U_n)}` over the primitive primes of `U_n`, from the definition.
pub fn primitive_part(params: &LucasParams, n: u64) -> Result<BigInt, Error> {
    if n < 2 {
        return Err(Error::Precondition("primitive_part needs n >= 2".into()));
    }
    let report = primitive_divisors_by_definition(params, n)?;
    if let Some(c) = report.unfactored_cofactor {
        return Err(Error::Unfactored(c.to_string()));
    }
    let un = params.u(n).abs();
    let mut part = BigInt::one();
    for p in &report.primitive_primes {
        let mut x = un.clone();
        while (&x % p).is_zero() {
            x /= p;
            part *= p;
        }
    }
    if n > 4 && n != 6 && n != 12 {
        let phi = cyclotomic_value(params, n)?.abs();
        let (q, r) = phi.div_rem(&part);
        let p_n = BigInt::from(largest_prime_factor(n));
        assert!(
            r.is_zero() && (q.is_one() || q == BigInt::from(2) || q == p_n),
            "Phi_n / primitive part = {q} at n={n}"
        );
    }
    Ok(part)
}

pub fn m_log_sum(x: &FactoredInteger, n0: u64, prec: u32) -> Result<MLogSum, Error> {
    if let Some(c) = &x.unfactored_cofactor {
        return Err(Error::Unfactored(c.to_string()));
    }
    let mut value = Interval::zero(prec);
    let mut contributing = Vec::new();
    for (p, &e) in &x.factors {
        let keep = pm1(p, n0);
        if keep {
            value = value.add(&ln_ratio(p, &BigInt::one(), prec).mul_int(e));
            contributing.push((p.clone(), e));
        }
    }
    Ok(MLogSum { n0, value, contributing, exact: true })
}

fn pm1(p: &BigInt, n0: u64) -> bool {
    let r = p.mod_floor(&BigInt::from(n0));
    r.is_one() || r == BigInt::from(n0 - 1) || n0 <= 2
}

/// Accumulates the `M_{n0}` contribution of one factor `Phi_d`.
fn add_cyclotomic_piece(acc: &mut MLogSum, phi: &BigInt, d: u64, prec: u32) {
    let mut rest = phi.abs();
    for (q, _) in factor_u64(d) {
        let qb = BigInt::from(q);
        let mut e = 0;
        while !rest.is_zero() && (&rest % &qb).is_zero() {
            rest /= &qb;
            e += 1;
        }
        if e > 0 && is_pm1_mod(q, acc.n0) {
            acc.value = acc.value.add(&ln_int(q, prec).mul_int(e));
            acc.contributing.push((qb, e));
        }
    }
    if rest.is_one() {
        return;
    }
    if d % acc.n0 == 0 {
        // every prime of the primitive block is ±1 mod d, hence mod n0
        acc.value = acc.value.add(&ln_ratio(&rest, &BigInt::one(), prec));
        acc.contributing.push((rest, 1));
        return;
    }
    match factor(&rest) {
        Ok(f) => {
            for (p, &e) in &f.factors {
                if pm1(p, acc.n0) {
                    acc.value = acc.value.add(&ln_ratio(p, &BigInt::one(), prec).mul_int(e));
                    acc.contributing.push((p.clone(), e));
                }
            }
            if f.unfactored_cofactor.is_some() {
                acc.exact = false;
            }
        }
        Err(_) => acc.exact = false,
    }
}

fn merge_contributions(acc: &mut MLogSum) {
    acc.contributing.sort();
    let mut merged: Vec<(BigInt, u32)> = Vec::new();
    for (q, e) in acc.contributing.drain(..) {
        match merged.last_mut() {
            Some((lq, le)) if *lq == q => *le += e,
            _ => merged.push((q, e)),
        }
    }
    acc.contributing = merged;
}

/// `M_{n0}(U_n)` assembled from `U_n = prod_{d | n, d > 1} Phi_d`.
pub fn m_log_sum_u(params: &LucasParams, n: u64, n0: u64, prec: u32) -> MLogSum {
    let us = params.u_sequence(n);
    let mut acc = MLogSum { n0, value: Interval::zero(prec), contributing: Vec::new(), exact: true };
    for d in divisors(n).into_iter().filter(|&d| d > 1) {
        let phi = cyclotomic_from_terms(&us, d);
        add_cyclotomic_piece(&mut acc, &phi, d, prec);
    }
    merge_contributions(&mut acc);
    acc
}

/// `M_{n0}(V_n)` from `V_n = prod_{d | 2n, d ∤ n} Phi_d`.
pub fn m_log_sum_v(params: &LucasParams, n: u64, n0: u64, prec: u32) -> MLogSum {
    let us = params.u_sequence(2 * n);
    let mut acc = MLogSum { n0, value: Interval::zero(prec), contributing: Vec::new(), exact: true };
    for d in divisors(2 * n).into_iter().filter(|&d| n % d != 0) {
        let phi = cyclotomic_from_terms(&us, d);
        add_cyclotomic_piece(&mut acc, &phi, d, prec);
    }
    merge_contributions(&mut acc);
    acc
}

/// Shape of a modulus accepted by the lower bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModulusShape {
    PrimePower { p: u64 },
    TwoPrimes { p: u64, p1: u64 },
}

pub fn modulus_shape(n0: u64) -> Option<ModulusShape> {
    if n0 <= 4 || n0 == 6 || n0 == 12 {
        return None;
    }
    match factor_u64(n0).as_slice() {
        [(p, _)] => Some(ModulusShape::PrimePower { p: *p }),
        [(p, _), (p1, _)] => Some(ModulusShape::TwoPrimes { p: *p, p1: *p1 }),
        _ => None,
    }
}

fn log_abs_ratio(a: &BigInt, b: &BigInt, prec: u32) -> Interval {
    ln_ratio(&a.abs(), &b.abs(), prec)
}

/// Right side of the lower bound for `M_{n0}(U_n)`.
///
/// With `n' = n/p^(t+1)` and `L = log|a|` the correction term
/// `log|(1 - x^n)/(1 - x^n')|` equals `log|U_n/U_n'| - (n - n') L` exactly.
pub fn m_lower_bound_u(params: &LucasParams, n: u64, n0: u64, t: u32, prec: u32) -> Result<Interval, Error> {
    let shape = modulus_shape(n0)
        .ok_or_else(|| Error::Precondition(format!("n0={n0} is not p^h or p^h p1^h1 with n0 > 4, n0 ∉ {{6, 12}}")))?;
    let p = match shape {
        ModulusShape::PrimePower { p } | ModulusShape::TwoPrimes { p, .. } => p,
    };
    let pt = p.pow(t);
    if n % (n0 * pt) != 0 {
        return Err(Error::Precondition(format!("n0 p^t = {} does not divide n = {n}", n0 * pt)));
    }
    let pt1 = pt * p;
    let n1 = n / pt1;
    let w = prec + 16;
    let l = alpha_log_interval(params, w);
    let correction = log_abs_ratio(&params.u(n), &params.u(n1), w).sub(&l.mul_int(n - n1));
    let out = match shape {
        ModulusShape::PrimePower { p } => l
            .mul_int(n - n1)
            .add(&correction)
            .sub(&ln_int(p, w).mul_int(t + 1)),
        ModulusShape::TwoPrimes { p, p1 } => l
            .mul_int((n - n1) * (p1 - 1))
            .div_int(p1)
            .add(&correction)
            .sub(&ln_int(p * p1, w).mul_int(t + 1)),
    };
    Ok(out.with_prec(prec))
}

/// Right side of the lower bound for `M_{n0}(V_n)`, `n0 = p^h` with `p > 2`.
pub fn m_lower_bound_v(params: &LucasParams, n: u64, n0: u64, t: u32, prec: u32) -> Result<Interval, Error> {
    let p = match modulus_shape(n0) {
        Some(ModulusShape::PrimePower { p }) if p > 2 => p,
        _ => return Err(Error::Precondition(format!("n0={n0} must be an odd prime power > 4"))),
    };
    let pt = p.pow(t);
    if n % (n0 * pt) != 0 {
        return Err(Error::Precondition(format!("n0 p^t = {} does not divide n = {n}", n0 * pt)));
    }
    let n1 = n / (pt * p);
    let out = log_abs_ratio(&params.v(n), &params.v(n1), prec + 16).sub(&ln_int(p, prec + 16).mul_int(t + 1));
    Ok(out.with_prec(prec))
}

/// Which telescoping identity to replay.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Telescope {
    U1,
    U2,
    V1,
}

/// Replays a telescoping identity as an exact integer equation on the powered pair.
/// Returns `(lhs, rhs)`.
pub fn telescoping_sides(params: &LucasParams, n: u64, n0: u64, t: u32, which: Telescope) -> Result<(BigInt, BigInt), Error> {
    let shape = modulus_shape(n0).ok_or_else(|| Error::Precondition(format!("bad n0={n0}")))?;
    let p = match shape {
        ModulusShape::PrimePower { p } | ModulusShape::TwoPrimes { p, .. } => p,
    };
    let m = n0 * p.pow(t);
    if n % m != 0 {
        return Err(Error::Precondition(format!("{m} does not divide {n}")));
    }
    let (r1, s1) = powered_pair(params, n / m);
    let top = match which {
        Telescope::V1 => 2 * m,
        _ => m,
    };
    let u1 = raw_u_sequence(&r1, &s1, top);
    let mut prod = BigInt::one();
    for i in 0..=t {
        let l = n0 * p.pow(i);
        let l = if which == Telescope::V1 { 2 * l } else { l };
        prod *= cyclotomic_from_terms(&u1, l);
    }
    let pt1 = p.pow(t + 1);
    Ok(match (which, shape) {
        (Telescope::U1, ModulusShape::PrimePower { .. }) => (prod * params.u(n / pt1), params.u(n)),
        (Telescope::U2, ModulusShape::TwoPrimes { p1, .. }) => (
            prod * params.u(n / pt1) * params.u(n / p1),
            params.u(n) * params.u(n / (p1 * pt1)),
        ),
        (Telescope::V1, ModulusShape::PrimePower { p }) if p > 2 => (prod * params.v(n / pt1), params.v(n)),
        _ => return Err(Error::Precondition("identity does not apply to this modulus".into())),
    })
}

/// Re-checks every prime of an `M_{n0}` sum against the definition of primitivity for index `n`.
pub fn primitive_primes_are_pm1(params: &LucasParams, n: u64) -> bool {
    let us = params.u_sequence(n);
    match primitive_divisors_by_definition(params, n) {
        Ok(r) => r.primitive_primes.iter().all(|p| {
            is_primitive_prime(&us, &params.discriminant, p) && (n <= 2 || pm1(p, n))
        }),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(r: i64, s: i64) -> LucasParams {
        LucasParams::new(r, s).unwrap()
    }

    #[test]
    fn cyclotomic_examples() {
        let f = p(1, 1);
        assert_eq!(cyclotomic_value(&f, 6).unwrap(), BigInt::from(4));
        assert_eq!(cyclotomic_value(&f, 12).unwrap(), BigInt::from(6));
        assert_eq!(cyclotomic_value(&f, 5).unwrap(), BigInt::from(5));
    }

    #[test]
    fn primitive_part_examples() {
        let f = p(1, 1);
        assert_eq!(primitive_part(&f, 7).unwrap(), BigInt::from(13));
        assert_eq!(primitive_part(&f, 5).unwrap(), BigInt::one());
        assert_eq!(primitive_part(&f, 13).unwrap(), BigInt::from(233));
    }

    #[test]
    fn m_log_sum_examples() {
        let s = m_log_sum(&factor(&BigInt::from(22)).unwrap(), 5, 128).unwrap();
        assert!((s.value.to_f64() - 11f64.ln()).abs() < 1e-15);
        let s = m_log_sum(&factor(&BigInt::from(7)).unwrap(), 5, 128).unwrap();
        assert_eq!(s.value.to_f64(), 0.0);
        let s = m_log_sum(&factor(&BigInt::from(46)).unwrap(), 24, 128).unwrap();
        assert!((s.value.to_f64() - 23f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn block_sum_matches_factored_sum() {
        for (r, s) in [(1, 1), (2, 1), (1, -2), (3, -1), (2, -3)] {
            let par = p(r, s);
            for n in [12u64, 20, 24, 25, 30, 36, 45] {
                for n0 in [5u64, 8, 9, 24] {
                    let a = m_log_sum_u(&par, n, n0, 128);
                    let b = m_log_sum(&factor(&par.u(n)).unwrap(), n0, 128).unwrap();
                    assert!(a.exact);
                    assert!((a.value.to_f64() - b.value.to_f64()).abs() < 1e-9, "({r},{s}) n={n} n0={n0}");
                    let av = m_log_sum_v(&par, n, n0, 128);
                    let bv = m_log_sum(&factor(&par.v(n)).unwrap(), n0, 128).unwrap();
                    assert!((av.value.to_f64() - bv.value.to_f64()).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn lower_bound_examples() {
        let f = p(1, 1);
        let b = m_lower_bound_u(&f, 25, 5, 1, 128).unwrap();
        assert!(!m_log_sum_u(&f, 25, 5, 128).value.certainly_lt(&b));
        let q = p(2, 1);
        let b = m_lower_bound_u(&q, 16, 16, 0, 128).unwrap();
        assert!(!m_log_sum_u(&q, 16, 16, 128).value.certainly_lt(&b));
        let b = m_lower_bound_u(&f, 35, 35, 0, 128).unwrap();
        assert!(!m_log_sum_u(&f, 35, 35, 128).value.certainly_lt(&b));
        let b = m_lower_bound_v(&f, 9, 9, 0, 128).unwrap();
        assert!(!m_log_sum_v(&f, 9, 9, 128).value.certainly_lt(&b));
        let b = m_lower_bound_v(&q, 5, 5, 0, 128).unwrap();
        assert!(!m_log_sum_v(&q, 5, 5, 128).value.certainly_lt(&b));
        let b = m_lower_bound_v(&f, 25, 5, 1, 128).unwrap();
        assert!(!m_log_sum_v(&f, 25, 5, 128).value.certainly_lt(&b));
        assert!(m_lower_bound_u(&f, 24, 12, 0, 128).is_err());
        assert!(m_lower_bound_u(&f, 24, 16, 0, 128).is_err());
        assert!(m_lower_bound_v(&f, 16, 16, 0, 128).is_err());
    }

    #[test]
    fn telescoping_examples() {
        let f = p(1, 1);
        let (a, b) = telescoping_sides(&f, 50, 5, 1, Telescope::U1).unwrap();
        assert_eq!(a, b);
        let (a, b) = telescoping_sides(&f, 70, 35, 0, Telescope::U2).unwrap();
        assert_eq!(a, b);
        let (a, b) = telescoping_sides(&p(2, -3), 45, 9, 0, Telescope::V1).unwrap();
        assert_eq!(a, b);
    }
}
