//! Outward-rounded interval arithmetic over dyadic fixed-point endpoints.
//!
//! An [`Interval`] holds integers `lo`, `hi` and a precision `p`; it stands
//! for the closed real interval `[lo / 2^p, hi / 2^p]`. Every operation rounds
//! the lower endpoint down and the upper endpoint up, so the true value of an
//! expression is always contained in the computed interval.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Precisions tried, in order, by [`decide`].
pub const PRECISION_LADDER: [u32; 4] = [128, 256, 512, 1024];

/// Extra bits carried inside series evaluations.
const GUARD: u32 = 64;

#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

/// `a * 2^k` rounded down (k may be negative).
fn shift_floor(a: &BigInt, k: i64) -> BigInt {
    if k >= 0 {
        a << (k as usize)
    } else {
        a >> ((-k) as usize)
    }
}

fn shift_ceil(a: &BigInt, k: i64) -> BigInt {
    if k >= 0 {
        a << (k as usize)
    } else {
        -((-a) >> ((-k) as usize))
    }
}

impl Interval {
    pub fn from_raw(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi, prec }
    }

    pub fn zero(prec: u32) -> Self {
        Interval::from_raw(BigInt::zero(), BigInt::zero(), prec)
    }

    pub fn from_int<T: Into<BigInt>>(n: T, prec: u32) -> Self {
        let v: BigInt = n.into() << prec as usize;
        Interval::from_raw(v.clone(), v, prec)
    }

    /// Encloses the rational `num / den`.
    pub fn from_ratio<A: Into<BigInt>, B: Into<BigInt>>(num: A, den: B, prec: u32) -> Self {
        let mut num: BigInt = num.into();
        let mut den: BigInt = den.into();
        assert!(!den.is_zero(), "zero denominator");
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let scaled = num << prec as usize;
        Interval::from_raw(floor_div(&scaled, &den), ceil_div(&scaled, &den), prec)
    }

    /// Parses a decimal literal such as `"0.3433"` or `"-2.5"` exactly.
    pub fn from_decimal(s: &str, prec: u32) -> Self {
        let (num, den) = parse_decimal(s);
        Interval::from_ratio(num, den, prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn lo_raw(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi_raw(&self) -> &BigInt {
        &self.hi
    }

    /// Width in units of `2^-prec`.
    pub fn width_ulps(&self) -> BigInt {
        &self.hi - &self.lo
    }

    /// Re-expresses the interval at precision `p`, rounding outward.
    pub fn with_prec(&self, p: u32) -> Self {
        let k = p as i64 - self.prec as i64;
        Interval::from_raw(shift_floor(&self.lo, k), shift_ceil(&self.hi, k), p)
    }

    fn aligned(&self, other: &Interval) -> (Interval, Interval) {
        if self.prec == other.prec {
            (self.clone(), other.clone())
        } else {
            let p = self.prec.min(other.prec);
            (self.with_prec(p), other.with_prec(p))
        }
    }

    pub fn hull(&self, other: &Interval) -> Self {
        let (a, b) = self.aligned(other);
        Interval::from_raw(a.lo.min(b.lo), a.hi.max(b.hi), a.prec)
    }

    /// Widens by `[-e, e]` where `e = ulps * 2^-prec`.
    pub fn widen(&self, ulps: &BigInt) -> Self {
        Interval::from_raw(&self.lo - ulps, &self.hi + ulps, self.prec)
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Sign when it is certain.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn certainly_lt(&self, other: &Interval) -> bool {
        let (a, b) = self.aligned(other);
        a.hi < b.lo
    }

    pub fn certainly_le(&self, other: &Interval) -> bool {
        let (a, b) = self.aligned(other);
        a.hi <= b.lo
    }

    pub fn neg(&self) -> Self {
        Interval::from_raw(-&self.hi, -&self.lo, self.prec)
    }

    pub fn add(&self, other: &Interval) -> Self {
        let (a, b) = self.aligned(other);
        Interval::from_raw(a.lo + b.lo, a.hi + b.hi, a.prec)
    }

    pub fn sub(&self, other: &Interval) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Interval) -> Self {
        let (a, b) = self.aligned(other);
        let p = a.prec as i64;
        let prods = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let mn = prods.iter().min().unwrap();
        let mx = prods.iter().max().unwrap();
        Interval::from_raw(shift_floor(mn, -p), shift_ceil(mx, -p), a.prec)
    }

    pub fn mul_int<T: Into<BigInt>>(&self, k: T) -> Self {
        let k: BigInt = k.into();
        let (x, y) = (&self.lo * &k, &self.hi * &k);
        if k.is_negative() {
            Interval::from_raw(y, x, self.prec)
        } else {
            Interval::from_raw(x, y, self.prec)
        }
    }

    pub fn div_int<T: Into<BigInt>>(&self, k: T) -> Self {
        let k: BigInt = k.into();
        assert!(!k.is_zero(), "division by zero");
        let (x, y) = if k.is_negative() {
            (-&self.hi, -&self.lo)
        } else {
            (self.lo.clone(), self.hi.clone())
        };
        let k = k.abs();
        Interval::from_raw(floor_div(&x, &k), ceil_div(&y, &k), self.prec)
    }

    /// Division; panics if the divisor may be zero.
    pub fn div(&self, other: &Interval) -> Self {
        let (a, b) = self.aligned(other);
        assert!(!b.contains_zero(), "interval division by an interval containing zero");
        let p = a.prec as usize;
        let nums = [&a.lo << p, &a.hi << p];
        let dens = [&b.lo, &b.hi];
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for n in &nums {
            for d in dens {
                let f = floor_div(n, d);
                let c = ceil_div(n, d);
                lo = Some(match lo {
                    Some(v) if v <= f => v,
                    _ => f,
                });
                hi = Some(match hi {
                    Some(v) if v >= c => v,
                    _ => c,
                });
            }
        }
        Interval::from_raw(lo.unwrap(), hi.unwrap(), a.prec)
    }

    pub fn recip(&self) -> Self {
        Interval::from_int(1, self.prec).div(self)
    }

    pub fn sqr(&self) -> Self {
        if self.contains_zero() {
            let m = self.lo.abs().max(self.hi.abs());
            let hi = shift_ceil(&(&m * &m), -(self.prec as i64));
            Interval::from_raw(BigInt::zero(), hi, self.prec)
        } else {
            self.mul(self)
        }
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut acc = Interval::from_int(1, self.prec);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Square root; the interval must be nonnegative.
    pub fn sqrt(&self) -> Self {
        assert!(!self.lo.is_negative(), "sqrt of negative interval");
        let p = self.prec as usize;
        let lo = (&self.lo << p).sqrt();
        let hs = &self.hi << p;
        let mut hi = hs.sqrt();
        if &hi * &hi < hs {
            hi += 1;
        }
        Interval::from_raw(lo, hi, self.prec)
    }

    /// Natural logarithm; the interval must be positive.
    pub fn ln(&self) -> Self {
        assert!(self.lo.is_positive(), "ln of non-positive interval");
        let den = BigInt::one() << self.prec as usize;
        let a = ln_ratio(&self.lo, &den, self.prec);
        let b = if self.lo == self.hi {
            a.clone()
        } else {
            ln_ratio(&self.hi, &den, self.prec)
        };
        Interval::from_raw(a.lo, b.hi, self.prec)
    }

    pub fn exp(&self) -> Self {
        let a = exp_point(&self.lo, self.prec);
        let b = if self.lo == self.hi {
            a.clone()
        } else {
            exp_point(&self.hi, self.prec)
        };
        Interval::from_raw(a.lo, b.hi, self.prec)
    }

    pub fn min(&self, other: &Interval) -> Self {
        let (a, b) = self.aligned(other);
        Interval::from_raw(a.lo.min(b.lo), a.hi.min(b.hi), a.prec)
    }

    pub fn max(&self, other: &Interval) -> Self {
        let (a, b) = self.aligned(other);
        Interval::from_raw(a.lo.max(b.lo), a.hi.max(b.hi), a.prec)
    }

    pub fn to_f64(&self) -> f64 {
        let mid: BigInt = (&self.lo + &self.hi) >> 1usize;
        let (m, e) = to_mantissa(&mid);
        m * 2f64.powi(e - self.prec as i32)
    }

    pub fn lo_f64(&self) -> f64 {
        let (m, e) = to_mantissa(&self.lo);
        m * 2f64.powi(e - self.prec as i32)
    }

    pub fn hi_f64(&self) -> f64 {
        let (m, e) = to_mantissa(&self.hi);
        m * 2f64.powi(e - self.prec as i32)
    }

    /// Lower endpoint as a decimal string with `digits` fractional digits, rounded down.
    pub fn lo_decimal(&self, digits: usize) -> String {
        fixed_decimal(&self.lo, self.prec, digits, false)
    }

    /// Upper endpoint as a decimal string with `digits` fractional digits, rounded up.
    pub fn hi_decimal(&self, digits: usize) -> String {
        fixed_decimal(&self.hi, self.prec, digits, true)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo_decimal(12), self.hi_decimal(12))
    }
}

fn to_mantissa(x: &BigInt) -> (f64, i32) {
    let bits = x.bits() as i64;
    if bits <= 60 {
        let v: i64 = x.try_into().unwrap_or(0);
        (v as f64, 0)
    } else {
        let sh = bits - 60;
        let v: i64 = (x >> sh as usize).try_into().unwrap_or(0);
        (v as f64, sh as i32)
    }
}

fn fixed_decimal(v: &BigInt, prec: u32, digits: usize, up: bool) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let num = v * &scale;
    let den = BigInt::one() << prec as usize;
    let q = if up { ceil_div(&num, &den) } else { floor_div(&num, &den) };
    let neg = q.is_negative();
    let mut s = q.abs().to_string();
    if digits > 0 {
        if s.len() <= digits {
            s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
        }
        s.insert(s.len() - digits, '.');
    }
    if neg {
        format!("-{s}")
    } else {
        s
    }
}

/// Splits a decimal literal into an exact fraction.
pub fn parse_decimal(s: &str) -> (BigInt, BigInt) {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = digits.parse().expect("malformed decimal literal");
    if neg {
        num = -num;
    }
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    (num, den)
}

/// Encloses `ln(num/den)` for positive integers.
pub fn ln_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Interval {
    assert!(num.is_positive() && den.is_positive());
    let w = prec + GUARD;
    // num/den = 2^e * y, 1 <= y < 2
    let mut e = num.bits() as i64 - den.bits() as i64;
    let (mut n, mut d) = if e >= 0 {
        (num.clone(), den << e as usize)
    } else {
        (num << (-e) as usize, den.clone())
    };
    if n < d {
        n <<= 1usize;
        e -= 1;
    }
    if n >= &d << 1usize {
        d <<= 1usize;
        e += 1;
    }
    let mut acc = atanh_ratio(&(&n - &d), &(&n + &d), w).mul_int(2);
    if e != 0 {
        acc = acc.add(&ln2(w).mul_int(e));
    }
    acc.with_prec(prec)
}

pub fn ln_int<T: Into<BigInt>>(n: T, prec: u32) -> Interval {
    ln_ratio(&n.into(), &BigInt::one(), prec)
}

/// Encloses `atanh(a/b)` for `0 <= a/b <= 1/2` at precision `w`.
pub fn atanh_ratio(a: &BigInt, b: &BigInt, w: u32) -> Interval {
    assert!(!a.is_negative() && b.is_positive() && a * 2 <= *b);
    if a.is_zero() {
        return Interval::zero(w);
    }
    let one = BigInt::one() << w as usize;
    // z and z^2 as fixed-point enclosures
    let z = Interval::from_ratio(a.clone(), b.clone(), w);
    let z2 = Interval::from_ratio(a * a, b * b, w);
    let mut pw_lo = z.lo.clone();
    let mut pw_hi = z.hi.clone();
    let mut sum_lo = BigInt::zero();
    let mut sum_hi = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        let dk = BigInt::from(2 * k + 1);
        sum_lo += floor_div(&pw_lo, &dk);
        sum_hi += ceil_div(&pw_hi, &dk);
        pw_lo = (&pw_lo * &z2.lo) >> w as usize;
        pw_hi = shift_ceil(&(&pw_hi * &z2.hi), -(w as i64));
        k += 1;
        if pw_hi <= BigInt::one() {
            // remaining terms sum to at most pw * 1/(1 - z^2) <= 4/3 pw
            sum_hi += 2;
            break;
        }
        debug_assert!(pw_hi < one);
    }
    Interval::from_raw(sum_lo, sum_hi, w)
}

fn const_cache() -> &'static Mutex<HashMap<(u8, u32), Interval>> {
    static CACHE: OnceLock<Mutex<HashMap<(u8, u32), Interval>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(tag: u8, prec: u32, f: impl FnOnce(u32) -> Interval) -> Interval {
    if let Some(v) = const_cache().lock().unwrap().get(&(tag, prec)) {
        return v.clone();
    }
    let v = f(prec);
    const_cache().lock().unwrap().insert((tag, prec), v.clone());
    v
}

/// `ln 2 = 2 atanh(1/3)`.
pub fn ln2(prec: u32) -> Interval {
    cached(0, prec, |p| {
        atanh_ratio(&BigInt::one(), &BigInt::from(3), p + GUARD)
            .mul_int(2)
            .with_prec(p)
    })
}

/// Encloses `atan(1/k)` for an integer `k >= 2` at precision `w`.
fn atan_inv(k: u64, w: u32) -> Interval {
    let kk = BigInt::from(k) * BigInt::from(k);
    let one = BigInt::one() << w as usize;
    let mut pw_lo = floor_div(&one, &BigInt::from(k));
    let mut pw_hi = ceil_div(&one, &BigInt::from(k));
    let mut sum_lo = BigInt::zero();
    let mut sum_hi = BigInt::zero();
    let mut i: u64 = 0;
    loop {
        let d = BigInt::from(2 * i + 1);
        if i % 2 == 0 {
            sum_lo += floor_div(&pw_lo, &d);
            sum_hi += ceil_div(&pw_hi, &d);
        } else {
            sum_lo -= ceil_div(&pw_hi, &d);
            sum_hi -= floor_div(&pw_lo, &d);
        }
        pw_lo = floor_div(&pw_lo, &kk);
        pw_hi = ceil_div(&pw_hi, &kk);
        i += 1;
        if pw_hi <= BigInt::one() {
            sum_lo -= 1;
            sum_hi += 1;
            break;
        }
    }
    Interval::from_raw(sum_lo, sum_hi, w)
}

/// Machin: `pi = 16 atan(1/5) - 4 atan(1/239)`.
pub fn pi(prec: u32) -> Interval {
    cached(1, prec, |p| {
        let w = p + GUARD;
        atan_inv(5, w)
            .mul_int(16)
            .sub(&atan_inv(239, w).mul_int(4))
            .with_prec(p)
    })
}

/// Encloses `exp(x / 2^prec)`.
fn exp_point(x: &BigInt, prec: u32) -> Interval {
    if x.is_negative() {
        return exp_point(&-x, prec).recip();
    }
    // halve until the argument is below 1/2
    let int_bits = (x.bits() as i64 - prec as i64).max(0) as u32;
    let s = int_bits + 2;
    let w = prec + GUARD + 2 * s;
    let xr = shift_floor(x, w as i64 - prec as i64 - s as i64);
    let xr_hi = shift_ceil(x, w as i64 - prec as i64 - s as i64);
    let one = BigInt::one() << w as usize;
    let mut t_lo = one.clone();
    let mut t_hi = one.clone();
    let mut sum_lo = one.clone();
    let mut sum_hi = one;
    let mut k: u64 = 1;
    loop {
        let kb = BigInt::from(k);
        t_lo = floor_div(&((&t_lo * &xr) >> w as usize), &kb);
        t_hi = ceil_div(&shift_ceil(&(&t_hi * &xr_hi), -(w as i64)), &kb);
        sum_lo += &t_lo;
        sum_hi += &t_hi;
        k += 1;
        if t_hi <= BigInt::one() {
            sum_hi += 2;
            break;
        }
    }
    let mut r = Interval::from_raw(sum_lo, sum_hi, w);
    for _ in 0..s {
        r = r.mul(&r);
    }
    r.with_prec(prec)
}

/// Outcome of a rigorous sign decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Positive,
    Negative,
    Undecided,
}

/// Evaluates `f` on the precision ladder until the sign of its value is certain.
///
/// Returns the decision together with the last interval computed.
pub fn decide(start: u32, mut f: impl FnMut(u32) -> Interval) -> (Decision, Interval) {
    let mut last = None;
    for &p in PRECISION_LADDER.iter().filter(|&&p| p >= start.min(1024)) {
        let v = f(p);
        if v.is_positive() {
            return (Decision::Positive, v);
        }
        if v.is_negative() {
            return (Decision::Negative, v);
        }
        last = Some(v);
    }
    (Decision::Undecided, last.unwrap_or_else(|| f(1024)))
}

/// Exact fraction helper for stated constants.
pub fn ratio_of(s: &str) -> (BigInt, BigInt) {
    let (n, d) = parse_decimal(s);
    let g = n.gcd(&d);
    (n / &g, d / g)
}
