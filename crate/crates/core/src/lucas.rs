//! Lucas sequences `U_n = (a^n - b^n)/(a - b)`, `V_n = a^n + b^n` for the roots
//! `a, b` of `x^2 - r x - s`, and their primitive divisors.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::factor::factor;
use crate::interval::{ln_int, ln_ratio, Interval};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RootClass {
    Real,
    Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamClass {
    Invalid,
    Degenerate,
    Real,
    Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SeqKind {
    U,
    V,
}

/// Raw recurrence coefficients before validation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SequencePair {
    pub r: i64,
    pub s: i64,
}

/// Validated parameters with `r >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LucasParams {
    pub r: BigInt,
    pub s: BigInt,
    pub discriminant: BigInt,
    pub root_class: RootClass,
    /// Set when the input had `r < 0` and was replaced by `(-r, s)`.
    pub normalized: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceTerm {
    pub n: u64,
    pub value: BigInt,
    pub kind: SeqKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimitiveDivisorReport {
    pub n: u64,
    pub primitive_primes: BTreeSet<BigInt>,
    pub has_primitive: bool,
    /// Part of the primitive part left composite by the factoring budget.
    pub unfactored_cofactor: Option<BigInt>,
}

/// Total classification of a coefficient pair.
pub fn classify_params(r: &BigInt, s: &BigInt) -> ParamClass {
    let disc: BigInt = r * r + s * 4;
    if s.is_zero() || disc.is_zero() || !r.gcd(s).is_one() {
        return ParamClass::Invalid;
    }
    // a/b is a root of unity iff (r^2 + 2s)/(-s) is an integer in [-2, 2]
    let num: BigInt = r * r + s * 2;
    let den: BigInt = -s;
    if (&num % &den).is_zero() {
        let q = &num / &den;
        if q.abs() <= BigInt::from(2) {
            return ParamClass::Degenerate;
        }
    }
    if disc.is_positive() {
        ParamClass::Real
    } else {
        ParamClass::Complex
    }
}

impl LucasParams {
    pub fn new<A: Into<BigInt>, B: Into<BigInt>>(r: A, s: B) -> Result<Self, Error> {
        let r: BigInt = r.into();
        let s: BigInt = s.into();
        let class = classify_params(&r, &s);
        let root_class = match class {
            ParamClass::Real => RootClass::Real,
            ParamClass::Complex => RootClass::Complex,
            ParamClass::Invalid => return Err(Error::InvalidParams(r.to_string(), s.to_string(), "invalid")),
            ParamClass::Degenerate => {
                return Err(Error::InvalidParams(r.to_string(), s.to_string(), "degenerate"))
            }
        };
        let normalized = r.is_negative();
        let r = r.abs();
        let discriminant = &r * &r + &s * 4;
        Ok(LucasParams { r, s, discriminant, root_class, normalized })
    }

    pub fn pair(&self) -> Option<SequencePair> {
        Some(SequencePair { r: self.r.to_i64()?, s: self.s.to_i64()? })
    }

    pub fn is_real(&self) -> bool {
        self.root_class == RootClass::Real
    }

    /// `(U_n, V_n)`.
    pub fn uv(&self, n: u64) -> (BigInt, BigInt) {
        if n <= 64 {
            let mut u = (BigInt::zero(), BigInt::one());
            let mut v = (BigInt::from(2), self.r.clone());
            for _ in 0..n {
                let nu = &self.r * &u.1 + &self.s * &u.0;
                let nv = &self.r * &v.1 + &self.s * &v.0;
                u = (u.1, nu);
                v = (v.1, nv);
            }
            return (u.0, v.0);
        }
        let q = -&self.s;
        let mut u = BigInt::zero();
        let mut v = BigInt::from(2);
        let mut qk = BigInt::one();
        for i in (0..64 - n.leading_zeros()).rev() {
            u = &u * &v;
            v = &v * &v - &qk * 2;
            qk = &qk * &qk;
            if (n >> i) & 1 == 1 {
                let nu: BigInt = (&self.r * &u + &v) / 2;
                let nv: BigInt = (&self.discriminant * &u + &self.r * &v) / 2;
                u = nu;
                v = nv;
                qk *= &q;
            }
        }
        (u, v)
    }

    pub fn u(&self, n: u64) -> BigInt {
        self.uv(n).0
    }

    pub fn v(&self, n: u64) -> BigInt {
        self.uv(n).1
    }

    /// `U_0..=U_n`.
    pub fn u_sequence(&self, n: u64) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(), BigInt::one()];
        while (out.len() as u64) <= n {
            let k = out.len();
            out.push(&self.r * &out[k - 1] + &self.s * &out[k - 2]);
        }
        out.truncate(n as usize + 1);
        out
    }

    /// `V_0..=V_n`.
    pub fn v_sequence(&self, n: u64) -> Vec<BigInt> {
        let mut out = vec![BigInt::from(2), self.r.clone()];
        while (out.len() as u64) <= n {
            let k = out.len();
            out.push(&self.r * &out[k - 1] + &self.s * &out[k - 2]);
        }
        out.truncate(n as usize + 1);
        out
    }

    pub fn term(&self, kind: SeqKind, n: u64) -> SequenceTerm {
        let value = match kind {
            SeqKind::U => self.u(n),
            SeqKind::V => self.v(n),
        };
        SequenceTerm { n, value, kind }
    }
}

pub fn u_term(params: &LucasParams, n: u64) -> BigInt {
    params.u(n)
}

pub fn v_term(params: &LucasParams, n: u64) -> BigInt {
    params.v(n)
}

/// Encloses `log|a|`: `log((r + sqrt(D))/2)` for real roots, `log|s| / 2` otherwise.
pub fn alpha_log_interval(params: &LucasParams, prec: u32) -> Interval {
    let w = prec + 32;
    let out = match params.root_class {
        RootClass::Real => Interval::from_int(params.r.clone(), w)
            .add(&Interval::from_int(params.discriminant.clone(), w).sqrt())
            .div_int(2)
            .ln(),
        RootClass::Complex => ln_int(params.s.abs(), w).div_int(2),
    };
    out.with_prec(prec)
}

/// Encloses `log|a - b| = log(sqrt|D|)`.
pub fn alpha_minus_beta_log(params: &LucasParams, prec: u32) -> Interval {
    ln_ratio(&params.discriminant.abs(), &BigInt::one(), prec).div_int(2)
}

/// Strips from `x` every prime dividing `m`.
pub fn remove_primes_of(mut x: BigInt, m: &BigInt) -> BigInt {
    loop {
        let g = x.gcd(m);
        if g.is_one() || g.is_zero() {
            return x;
        }
        while (&x % &g).is_zero() {
            x /= &g;
        }
    }
}

/// Primitive prime divisors of `U_n`.
///
/// A prime dividing `Phi_n(a, b)` but not `n` has rank of apparition `n`, so
/// the primitive part is `Phi_n` with the primes of `n` removed. Each prime
/// found is re-checked against the definition.
pub fn primitive_divisors(params: &LucasParams, n: u64) -> Result<PrimitiveDivisorReport, Error> {
    if n == 0 {
        return Err(Error::Precondition("primitive_divisors needs n >= 1".into()));
    }
    let us = params.u_sequence(n);
    if us[n as usize].is_zero() {
        return Err(Error::Precondition("U_n = 0".into()));
    }
    let phi = crate::cyclotomic::cyclotomic_from_terms(&us, n);
    let part = remove_primes_of(phi.abs(), &BigInt::from(n));
    let part = if n <= 2 { remove_primes_of(part, &params.discriminant) } else { part };
    let mut primes = BTreeSet::new();
    let mut cofactor = None;
    if !part.is_one() {
        let f = factor(&part)?;
        cofactor = f.unfactored_cofactor.clone();
        for p in f.factors.keys() {
            debug_assert!(is_primitive_prime(&us, &params.discriminant, p));
            primes.insert(p.clone());
        }
    }
    Ok(PrimitiveDivisorReport {
        n,
        has_primitive: !part.is_one(),
        primitive_primes: primes,
        unfactored_cofactor: cofactor,
    })
}

/// Definition check: `p | U_n`, `p` divides no earlier term and not the discriminant.
pub fn is_primitive_prime(us: &[BigInt], disc: &BigInt, p: &BigInt) -> bool {
    let n = us.len() - 1;
    (&us[n] % p).is_zero()
        && !(disc % p).is_zero()
        && us[1..n].iter().all(|t| !(t % p).is_zero())
}

/// Primitive divisors straight from the definition: factor `U_n`, screen every prime.
pub fn primitive_divisors_by_definition(
    params: &LucasParams,
    n: u64,
) -> Result<PrimitiveDivisorReport, Error> {
    let us = params.u_sequence(n);
    let f = factor(&us[n as usize])?;
    let primes: BTreeSet<BigInt> = f
        .factors
        .keys()
        .filter(|p| is_primitive_prime(&us, &params.discriminant, p))
        .cloned()
        .collect();
    Ok(PrimitiveDivisorReport {
        n,
        has_primitive: !primes.is_empty(),
        primitive_primes: primes,
        unfactored_cofactor: f.unfactored_cofactor,
    })
}

/// `(n, [(r, s)])` rows of the table of pairs without a primitive divisor, `5 <= n <= 30`, `n != 6`.
pub const BHV_EXCEPTIONS: &[(u64, &[(i64, i64)])] = &[
    (5, &[(1, 1), (1, -2), (1, -3), (1, -4), (2, -11), (12, -55), (12, -377)]),
    (7, &[(1, -2), (1, -5)]),
    (8, &[(1, -2), (2, -7)]),
    (10, &[(2, -3), (5, -7), (5, -18)]),
    (12, &[(1, 1), (1, -2), (1, -3), (1, -4), (1, -5), (2, -15)]),
    (13, &[(1, -2)]),
    (18, &[(1, -2)]),
    (30, &[(1, -2)]),
];

pub fn bhv_exception_table() -> Vec<(u64, SequencePair)> {
    BHV_EXCEPTIONS
        .iter()
        .flat_map(|&(n, rows)| rows.iter().map(move |&(r, s)| (n, SequencePair { r, s })))
        .collect()
}

pub fn bhv_lookup(n: u64) -> Option<Vec<SequencePair>> {
    BHV_EXCEPTIONS
        .iter()
        .find(|&&(m, _)| m == n)
        .map(|&(_, rows)| rows.iter().map(|&(r, s)| SequencePair { r, s }).collect())
}

pub fn is_bhv_exception(n: u64, r: i64, s: i64) -> bool {
    bhv_lookup(n).is_some_and(|rows| rows.contains(&SequencePair { r, s }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(r: i64, s: i64) -> LucasParams {
        LucasParams::new(r, s).unwrap()
    }

    #[test]
    fn classification() {
        let b = BigInt::from;
        assert_eq!(classify_params(&b(1), &b(1)), ParamClass::Real);
        assert_eq!(classify_params(&b(1), &b(-1)), ParamClass::Degenerate);
        assert_eq!(classify_params(&b(2), &b(-1)), ParamClass::Invalid);
        assert_eq!(classify_params(&b(2), &b(2)), ParamClass::Invalid);
        assert_eq!(classify_params(&b(1), &b(-3)), ParamClass::Complex);
        assert_eq!(classify_params(&b(0), &b(-1)), ParamClass::Degenerate);
        assert!(p(-1, 1).normalized);
    }

    #[test]
    fn degeneracy_matches_complex_roots() {
        // a/b is a root of unity of order k <= 12 iff (a/b)^k = 1 numerically
        for r in -10i64..=10 {
            for s in -10i64..=10 {
                let c = classify_params(&BigInt::from(r), &BigInt::from(s));
                if c == ParamClass::Invalid {
                    continue;
                }
                let d = (r * r + 4 * s) as f64;
                let (re, im) = if d >= 0.0 { (d.sqrt(), 0.0) } else { (0.0, (-d).sqrt()) };
                let a = ((r as f64 + re) / 2.0, im / 2.0);
                let b = ((r as f64 - re) / 2.0, -im / 2.0);
                let nb = b.0 * b.0 + b.1 * b.1;
                let z = ((a.0 * b.0 + a.1 * b.1) / nb, (a.1 * b.0 - a.0 * b.1) / nb);
                let root_of_unity = (1..=12).any(|k| {
                    let mut w = (1.0f64, 0.0f64);
                    for _ in 0..k {
                        w = (w.0 * z.0 - w.1 * z.1, w.0 * z.1 + w.1 * z.0);
                    }
                    (w.0 - 1.0).abs() < 1e-9 && w.1.abs() < 1e-9
                });
                assert_eq!(root_of_unity, c == ParamClass::Degenerate, "({r},{s})");
            }
        }
    }

    #[test]
    fn terms() {
        assert_eq!(p(1, 1).u(5), BigInt::from(5));
        assert_eq!(p(2, 1).u(3), BigInt::from(5));
        assert_eq!(p(2, 1).v(3), BigInt::from(14));
        assert_eq!(p(5, 1).v(3), BigInt::from(140));
        assert_eq!(p(3, -7).u(0), BigInt::zero());
        assert_eq!(p(3, -7).v(0), BigInt::from(2));
        let f = p(1, 1);
        let seq = f.u_sequence(300);
        let vs = f.v_sequence(300);
        for n in [65u64, 100, 128, 299, 300] {
            assert_eq!(f.u(n), seq[n as usize]);
            assert_eq!(f.v(n), vs[n as usize]);
        }
        let c = p(3, -7);
        assert_eq!(c.u(97), c.u_sequence(97)[97]);
    }

    #[test]
    fn primitive() {
        assert!(!primitive_divisors(&p(1, 1), 12).unwrap().has_primitive);
        assert!(!primitive_divisors(&p(1, 1), 5).unwrap().has_primitive);
        let r = primitive_divisors(&p(1, 1), 7).unwrap();
        assert_eq!(r.primitive_primes.into_iter().collect::<Vec<_>>(), vec![BigInt::from(13)]);
        for (n, pair) in bhv_exception_table() {
            let r = primitive_divisors(&p(pair.r, pair.s), n).unwrap();
            assert!(!r.has_primitive, "{n} {pair:?}");
        }
    }

    #[test]
    fn primitive_matches_definition() {
        for r in 1i64..=6 {
            for s in -8i64..=8 {
                let Ok(par) = LucasParams::new(r, s) else { continue };
                for n in 1..=30 {
                    let a = primitive_divisors(&par, n).unwrap();
                    let b = primitive_divisors_by_definition(&par, n).unwrap();
                    assert_eq!(a.primitive_primes, b.primitive_primes, "({r},{s}) n={n}");
                    assert_eq!(a.has_primitive, b.has_primitive, "({r},{s}) n={n}");
                }
            }
        }
    }

    #[test]
    fn alpha_logs() {
        let a = alpha_log_interval(&p(1, 1), 128);
        assert!((a.to_f64() - 0.48121182505960347).abs() < 1e-15);
        let a = alpha_log_interval(&p(4, -1), 128);
        assert!((a.to_f64() - (2.0 + 3f64.sqrt()).ln()).abs() < 1e-14);
        let a = alpha_log_interval(&p(1, -3), 128);
        assert!((a.to_f64() - 3f64.ln() / 2.0).abs() < 1e-15);
        assert!(a.width_ulps() < BigInt::from(1u64 << 32));
    }

    #[test]
    fn table_lookup() {
        assert_eq!(bhv_lookup(7).unwrap().len(), 2);
        assert!(bhv_lookup(6).is_none());
        assert_eq!(bhv_lookup(13).unwrap(), vec![SequencePair { r: 1, s: -2 }]);
    }
}
