//! Primes in arithmetic progressions: a segmented sieve, per-class prefix
//! sums for `pi`, `theta`, `psi`, and the audits built on them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::interval::{decide, ln_int, Interval};
use crate::numtheory::{euler_phi, gcd};
use crate::primality::{is_prime_u64, small_primes};
use crate::report::{AuditReport, ReportRow, Status};
use crate::Error;

/// Fractional bits of the fixed-point log sums.
pub const FIX_BITS: u32 = 64;
const SEGMENT: u64 = 1 << 20;
/// Primes between two direct log evaluations in the incremental scheme.
const LOG_ANCHOR_EVERY: usize = 4096;
/// Upper limit accepted by [`build_tables`].
pub const MAX_LIMIT: u64 = 1 << 31;

/// All primes up to `limit`, from a segmented sieve.
pub fn segmented_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let root = (limit as f64).sqrt() as u64 + 1;
    let base = small_primes(root);
    let mut out = Vec::new();
    let mut lo = 2u64;
    let mut seg = vec![true; SEGMENT as usize];
    while lo <= limit {
        let hi = (lo + SEGMENT - 1).min(limit);
        let len = (hi - lo + 1) as usize;
        seg[..len].fill(true);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let start = (p * p).max(lo.div_ceil(p) * p);
            let mut j = start;
            while j <= hi {
                seg[(j - lo) as usize] = false;
                j += p;
            }
        }
        out.extend((0..len).filter(|&i| seg[i]).map(|i| lo + i as u64));
        lo = hi + 1;
    }
    out
}

/// A nonnegative fixed-point enclosure `[lo, hi] / 2^FIX_BITS`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Fixed {
    pub lo: u128,
    pub hi: u128,
}

impl Fixed {
    fn add(self, o: Fixed) -> Fixed {
        Fixed { lo: self.lo + o.lo, hi: self.hi + o.hi }
    }

    fn sub(self, o: Fixed) -> Fixed {
        Fixed { lo: self.lo.saturating_sub(o.hi), hi: self.hi - o.lo }
    }

    pub fn to_interval(self) -> Interval {
        Interval::from_raw(BigInt::from(self.lo), BigInt::from(self.hi), FIX_BITS)
    }

    fn from_interval(iv: &Interval) -> Fixed {
        let iv = iv.with_prec(FIX_BITS);
        Fixed {
            lo: iv.lo_raw().try_into().expect("log out of range"),
            hi: iv.hi_raw().try_into().expect("log out of range"),
        }
    }
}

/// `2 atanh(a/b)` for small `a/b`, in fixed point.
fn two_atanh_small(a: u64, b: u64) -> Fixed {
    let one: u128 = 1 << FIX_BITS;
    let (a, b) = (a as u128, b as u128);
    let mut lo: u128 = 0;
    let mut hi: u128 = 0;
    // power x^(2k+1) as [plo, phi] in fixed point
    let mut plo = a * one / b;
    let mut phi = (a * one).div_ceil(b);
    let x2_lo = (a * a * one) / (b * b);
    let x2_hi = (a * a * one).div_ceil(b * b);
    let mut k: u128 = 0;
    loop {
        lo += plo / (2 * k + 1);
        hi += phi.div_ceil(2 * k + 1);
        plo = plo * x2_lo >> FIX_BITS;
        phi = (phi * x2_hi).div_ceil(one);
        k += 1;
        if phi <= 1 {
            hi += 2;
            break;
        }
    }
    Fixed { lo: 2 * lo, hi: 2 * hi }
}

/// Fixed-point enclosures of `log p` for an increasing prime list.
pub fn prime_logs(primes: &[u64]) -> Vec<Fixed> {
    let mut out: Vec<Fixed> = Vec::with_capacity(primes.len());
    for (i, &p) in primes.iter().enumerate() {
        let f = if i % LOG_ANCHOR_EVERY == 0 {
            Fixed::from_interval(&ln_int(p, FIX_BITS + 16))
        } else {
            // log p = log p' + 2 atanh((p - p')/(p + p'))
            let q = primes[i - 1];
            out[i - 1].add(two_atanh_small(p - q, p + q))
        };
        out.push(f);
    }
    out
}

#[derive(Clone, Debug, Default)]
struct ClassData {
    primes: Vec<u64>,
    /// prefix sums of log p; `theta[i]` covers `primes[..i]`
    theta: Vec<Fixed>,
    /// proper prime powers `p^k` (k >= 2) in this class, with prefix sums of `log p`
    powers: Vec<u64>,
    power_sums: Vec<Fixed>,
}

/// Sieve-backed `pi`, `theta`, `psi` for every residue class modulo `q`.
pub struct APCountTables {
    pub q: u64,
    pub limit: u64,
    classes: Vec<ClassData>,
    all_primes: Vec<u64>,
}

fn upper_index(v: &[u64], y: u64) -> usize {
    v.partition_point(|&x| x <= y)
}

/// Builds the tables for `y <= limit`.
pub fn build_tables(q: u64, limit: u64) -> Result<APCountTables, Error> {
    if q == 0 || limit < q {
        return Err(Error::Precondition(format!("need q >= 1 and limit >= q, got q={q}, limit={limit}")));
    }
    if limit > MAX_LIMIT {
        return Err(Error::Precondition(format!("limit {limit} exceeds the memory budget {MAX_LIMIT}")));
    }
    let primes = segmented_primes(limit);
    let logs = prime_logs(&primes);
    let mut classes = vec![ClassData::default(); q as usize];
    for c in classes.iter_mut() {
        c.theta.push(Fixed::default());
        c.power_sums.push(Fixed::default());
    }
    let mut powers: Vec<(u64, Fixed)> = Vec::new();
    for (&p, &lg) in primes.iter().zip(&logs) {
        let c = &mut classes[(p % q) as usize];
        let last = *c.theta.last().unwrap();
        c.primes.push(p);
        c.theta.push(last.add(lg));
        if p <= limit / p {
            let mut pk = p * p;
            loop {
                powers.push((pk, lg));
                match pk.checked_mul(p) {
                    Some(v) if v <= limit => pk = v,
                    _ => break,
                }
            }
        }
    }
    powers.sort_by_key(|&(v, _)| v);
    for (v, lg) in powers {
        let c = &mut classes[(v % q) as usize];
        let last = *c.power_sums.last().unwrap();
        c.powers.push(v);
        c.power_sums.push(last.add(lg));
    }
    Ok(APCountTables { q, limit, classes, all_primes: primes })
}

impl APCountTables {
    fn class(&self, y: u64, l: u64) -> &ClassData {
        assert!(y <= self.limit, "query y={y} beyond table limit {}", self.limit);
        &self.classes[(l % self.q) as usize]
    }

    pub fn pi(&self, y: u64, l: u64) -> u64 {
        upper_index(&self.class(y, l).primes, y) as u64
    }

    pub fn theta_fixed(&self, y: u64, l: u64) -> Fixed {
        let c = self.class(y, l);
        c.theta[upper_index(&c.primes, y)]
    }

    pub fn psi_fixed(&self, y: u64, l: u64) -> Fixed {
        let c = self.class(y, l);
        c.theta[upper_index(&c.primes, y)].add(c.power_sums[upper_index(&c.powers, y)])
    }

    pub fn theta(&self, y: u64, l: u64) -> Interval {
        self.theta_fixed(y, l).to_interval()
    }

    /// Chebyshev's `psi(y; q, l) = sum of log p over prime powers p^k <= y, p^k ≡ l`.
    pub fn psi(&self, y: u64, l: u64) -> Interval {
        self.psi_fixed(y, l).to_interval()
    }

    /// `psi - theta`, the contribution of proper prime powers.
    pub fn proper_power_part(&self, y: u64, l: u64) -> Interval {
        self.psi_fixed(y, l).sub(self.theta_fixed(y, l)).to_interval()
    }

    pub fn pi_all(&self, y: u64) -> u64 {
        upper_index(&self.all_primes, y) as u64
    }

    /// Primes in the classes `residues`, in increasing order.
    pub fn primes_in(&self, residues: &[u64]) -> Vec<u64> {
        let mut v: Vec<u64> = residues
            .iter()
            .flat_map(|&l| self.classes[(l % self.q) as usize].primes.iter().copied())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Least prime `p ≡ ±1 (mod n)`.
pub fn least_prime_pm1(n: u64) -> Result<u64, Error> {
    if n < 3 {
        return Err(Error::Precondition("least_prime_pm1 needs n >= 3".into()));
    }
    let mut k = 1u64;
    while k.saturating_mul(n) <= 1_000_000_000 {
        for c in [k * n - 1, k * n + 1] {
            if is_prime_u64(c) {
                return Ok(c);
            }
        }
        k += 1;
    }
    Err(Error::Precondition(format!("no prime ≡ ±1 mod {n} below 10^9")))
}

/// `(q, eps_psi, eps_theta)` as exact decimal strings.
pub const EPS_TABLE: &[(u64, &str, &str)] = &[
    (5, "0.807", "1.413"),
    (7, "0.78", "1.106"),
    (8, "0.927", "1.5"),
    (9, "0.789", "1.11"),
    (12, "0.863", "1.5"),
    (16, "0.774", "1.03"),
    (24, "0.745", "1.5"),
    (11, "0.912", "1.1"),
    (13, "0.912", "1.1"),
    (17, "0.912", "1.1"),
    (19, "0.912", "1.1"),
    (23, "0.912", "1.1"),
];

#[derive(Clone, Debug, Serialize)]
pub struct EpsTable {
    pub entries: BTreeMap<u64, (String, String)>,
}

impl EpsTable {
    pub fn stated() -> Self {
        EpsTable {
            entries: EPS_TABLE
                .iter()
                .map(|&(q, a, b)| (q, (a.to_string(), b.to_string())))
                .collect(),
        }
    }

    pub fn get(&self, q: u64) -> Option<(&str, &str)> {
        self.entries.get(&q).map(|(a, b)| (a.as_str(), b.as_str()))
    }
}

/// Confirms a prime `p ≡ r (mod q)`, `r` in `residues`, with `y+1 < p <= 2y` for each `y_lo <= y <= y_hi`.
pub fn ap_gap_check(q: u64, residues: &[u64], y_lo: u64, y_hi: u64) -> Result<AuditReport, Error> {
    if y_lo < 1 || y_hi < y_lo {
        return Err(Error::Precondition(format!("bad range [{y_lo}, {y_hi}]")));
    }
    let tables = build_tables(q, (2 * y_hi).max(q))?;
    let ps = tables.primes_in(residues);
    let mut first_bad = None;
    let mut idx = 0usize;
    let mut worst = u64::MAX;
    for y in y_lo..=y_hi {
        while idx < ps.len() && ps[idx] <= y + 1 {
            idx += 1;
        }
        match ps.get(idx) {
            Some(&p) if p <= 2 * y => worst = worst.min(2 * y - p),
            _ => {
                first_bad = Some(y);
                break;
            }
        }
    }
    let mut report = AuditReport::new("ap-gap");
    let res = residues.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",");
    report.config("q", q).config("residues", &res).config("y_lo", y_lo).config("y_hi", y_hi);
    let row = ReportRow::check(
        format!("prime ≡ {{{res}}} mod {q} in (y+1, 2y] for {y_lo} <= y <= {y_hi}"),
        first_bad.is_none(),
    )
    .input("q", q)
    .input("residues", &res)
    .input("y_lo", y_lo)
    .input("y_hi", y_hi);
    report.push(match first_bad {
        Some(y) => row.witness(format!("y={y}")),
        None => row.witness(format!("min slack 2y - p = {worst}")),
    });
    Ok(report.finish())
}

fn phi_q(q: u64) -> u64 {
    euler_phi(q)
}

/// Pointwise check of the Brun-Titchmarsh bounds at the sampled `y`. A sanity audit.
pub fn bt_audit(q: u64, l: u64, y_values: &[u64]) -> Result<AuditReport, Error> {
    if gcd(l, q) != 1 {
        return Err(Error::Precondition(format!("gcd({l}, {q}) != 1")));
    }
    if let Some(&y) = y_values.iter().find(|&&y| y <= q) {
        return Err(Error::Precondition(format!("y={y} must exceed q={q}")));
    }
    let y_max = y_values.iter().copied().max().unwrap_or(q + 1);
    let t = build_tables(q, 2 * y_max)?;
    let mut report = AuditReport::new("brun-titchmarsh");
    report.config("q", q).config("l", l);
    report.note("sanity: pointwise samples cannot prove the lemma");
    let f = phi_q(q);
    for &y in y_values {
        let bound = |p: u32| {
            Interval::from_int(2 * y, p)
                .div(&Interval::from_ratio(y, q, p).ln().mul_int(f))
        };
        let a = t.pi(y, l);
        let b = t.pi(2 * y, l) - a;
        for (label, count) in [("pi(y;q,l) <= 2y/(phi(q) log(y/q))", a), ("pi(2y;q,l) - pi(y;q,l) <= 2y/(phi(q) log(y/q))", b)] {
            let (d, v) = decide(128, |p| bound(p).sub(&Interval::from_int(count, p)));
            let d = if d == crate::Decision::Undecided && v.contains_zero() && count as f64 <= v.hi_f64() {
                d
            } else {
                d
            };
            report.push(
                ReportRow::from_decision(label, nonneg(d, &v), &v)
                    .input("q", q)
                    .input("l", l)
                    .input("y", y)
                    .input("count", count),
            );
        }
    }
    Ok(report.finish())
}

/// A claim `v >= 0` (rather than `v > 0`): an exact zero passes.
fn nonneg(d: crate::Decision, v: &Interval) -> crate::Decision {
    if d == crate::Decision::Undecided && v.lo_raw() == v.hi_raw() {
        crate::Decision::Positive
    } else {
        d
    }
}

fn eps_pair(q: u64) -> Result<(&'static str, &'static str), Error> {
    EPS_TABLE
        .iter()
        .find(|e| e.0 == q)
        .map(|e| (e.1, e.2))
        .ok_or_else(|| Error::Precondition(format!("q={q} not in the epsilon table")))
}

/// Pointwise check of the tabulated psi/theta bounds. A sanity audit.
pub fn rr_audit(q: u64, l0: u64, y_values: &[u64]) -> Result<AuditReport, Error> {
    let (ep, et) = eps_pair(q)?;
    if gcd(l0, q) != 1 || l0 % q == 1 % q {
        return Err(Error::Precondition(format!("l0={l0} must be a unit ≢ 1 mod {q}")));
    }
    let y_max = y_values.iter().copied().max().unwrap_or(q);
    let t = build_tables(q, y_max.max(q))?;
    let f = phi_q(q);
    let mut report = AuditReport::new("rr-bounds");
    report.config("q", q).config("l0", l0);
    report.note("sanity: pointwise samples cannot prove the lemma");
    for &y in y_values.iter().filter(|&&y| y >= q) {
        let psi = t.psi(y, 1).add(&t.psi(y, l0));
        let theta = t.theta(y, 1).add(&t.theta(y, l0));
        let p = FIX_BITS;
        let sq = Interval::from_int(y, p).sqrt();
        let base = Interval::from_ratio(2 * y, f, p);
        let up = base.mul(&Interval::from_int(1, p).add(&Interval::from_decimal(ep, p).mul_int(f).div(&sq)));
        let dn = base.mul(&Interval::from_int(1, p).sub(&Interval::from_decimal(et, p).mul_int(f).div(&sq)));
        let m1 = up.sub(&psi);
        let m2 = theta.sub(&dn);
        report.push(row_from_margin("psi(y;q,1)+psi(y;q,l0) upper bound", &m1).input("q", q).input("l0", l0).input("y", y));
        report.push(row_from_margin("theta(y;q,1)+theta(y;q,l0) lower bound", &m2).input("q", q).input("l0", l0).input("y", y));
        if q == 24 && l0 == 23 {
            let th5 = t.theta(y, 5);
            let ps5 = t.psi(y, 5);
            let lo = Interval::from_ratio(y, 8, p).mul(&Interval::from_int(1, p).sub(&Interval::from_int(8, p).div(&sq)));
            let hi = Interval::from_ratio(y, 8, p)
                .mul(&Interval::from_int(1, p).add(&Interval::from_decimal("0.745", p).mul_int(8).div(&sq)));
            report.push(row_from_margin("theta(y;24,5) lower bound", &th5.sub(&lo)).input("y", y));
            report.push(row_from_margin("psi(y;24,5) upper bound", &hi.sub(&ps5)).input("y", y));
        }
    }
    Ok(report.finish())
}

/// Row for `margin >= 0` evaluated once at fixed precision.
pub fn row_from_margin(claim: &str, m: &Interval) -> ReportRow {
    let d = if m.is_positive() {
        crate::Decision::Positive
    } else if m.is_negative() {
        crate::Decision::Negative
    } else {
        crate::Decision::Undecided
    };
    ReportRow::from_decision(claim, nonneg(d, m), m)
}

/// Left and right sides of the combined psi/theta estimate at `y` for the classes `1, l0`.
pub fn combined_estimate(t: &APCountTables, q: u64, l0: u64, y: u64) -> Result<(Interval, Interval), Error> {
    let (ep, et) = eps_pair(q)?;
    let mut lhs = Interval::zero(FIX_BITS);
    for l in [1, l0] {
        lhs = lhs
            .add(&t.psi(2 * y, l))
            .sub(&t.theta(y, l))
            .add(&t.theta(2 * y / 3, l))
            .sub(&t.theta(y / 2, l))
            .add(&t.theta(2 * y / 5, l));
    }
    let p = FIX_BITS;
    let sq = Interval::from_int(y, p).sqrt();
    let s2 = Interval::from_int(2, p).sqrt();
    let inner = Interval::from_int(1, p)
        .add(&Interval::from_int(3, p).sqrt().recip())
        .add(&Interval::from_int(5, p).sqrt().recip());
    let rhs = Interval::from_ratio(47, 15, p)
        .add(&s2.mul_int(2).mul(&Interval::from_decimal(ep, p)).div(&sq).mul(&inner))
        .add(
            &Interval::from_decimal(et, p)
                .mul_int(2)
                .div(&sq)
                .mul(&Interval::from_int(1, p).add(&s2.recip())),
        )
        .mul(&Interval::from_ratio(y, phi_q(q), p));
    Ok((lhs, rhs))
}

/// Samples the combined estimate for `y >= 1500`. A sanity audit.
pub fn combined_estimate_audit(q: u64, l0: u64, y_values: &[u64]) -> Result<AuditReport, Error> {
    let y_max = y_values.iter().copied().max().unwrap_or(1500);
    let t = build_tables(q, 2 * y_max)?;
    let mut report = AuditReport::new("combined-psi-theta");
    report.config("q", q).config("l0", l0);
    report.note("sanity: pointwise samples cannot prove the lemma");
    for &y in y_values {
        let (lhs, rhs) = combined_estimate(&t, q, l0, y)?;
        report.push(row_from_margin("sum over l in {1,l0} of psi(2y)-theta(y)+theta(2y/3)-theta(y/2)+theta(2y/5) bound", &rhs.sub(&lhs)).input("q", q).input("l0", l0).input("y", y));
    }
    Ok(report.finish())
}

pub fn status_of(r: &AuditReport) -> Status {
    r.status
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_matches_simple() {
        assert_eq!(segmented_primes(3_000_000), small_primes(3_000_000));
        assert_eq!(segmented_primes(1), Vec::<u64>::new());
    }

    #[test]
    fn log_chain_is_tight() {
        let ps = segmented_primes(200_000);
        let logs = prime_logs(&ps);
        for (i, (&p, f)) in ps.iter().zip(&logs).enumerate().step_by(997) {
            let exact = ln_int(p, 128);
            let iv = f.to_interval();
            assert!(iv.certainly_le(&exact.add(&Interval::from_ratio(1, 1u64 << 40, 128))), "{i}");
            assert!(iv.lo_raw() << 64usize <= *exact.hi_raw() && iv.hi_raw() << 64usize >= *exact.lo_raw());
            assert!(f.hi - f.lo < 1 << 20);
        }
    }

    #[test]
    fn counts() {
        let t = build_tables(24, 100).unwrap();
        assert_eq!(t.pi(100, 23), 3);
        let t = build_tables(5, 12).unwrap();
        assert_eq!(t.pi(12, 1), 1);
        assert_eq!(t.pi(1, 1), 0);
        assert_eq!(t.theta(1, 1).to_f64(), 0.0);
        let t = build_tables(3, 10).unwrap();
        assert_eq!(t.pi(10, 2), 2);
    }

    #[test]
    fn least_primes() {
        assert_eq!(least_prime_pm1(24).unwrap(), 23);
        assert_eq!(least_prime_pm1(5).unwrap(), 11);
        assert_eq!(least_prime_pm1(6).unwrap(), 5);
    }

    #[test]
    fn gaps() {
        assert_eq!(ap_gap_check(24, &[5], 15, 100_000).unwrap().status, Status::Pass);
        assert_eq!(ap_gap_check(8, &[3, 5], 6, 100_000).unwrap().status, Status::Pass);
        assert_eq!(ap_gap_check(12, &[5], 9, 100_000).unwrap().status, Status::Pass);
        assert_eq!(ap_gap_check(24, &[5], 14, 20).unwrap().status, Status::Fail);
    }

    #[test]
    fn bt_examples() {
        let r = bt_audit(5, 1, &[100]).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.rows[0].inputs["count"], "5");
        assert!(bt_audit(5, 1, &[5]).is_err());
    }

    #[test]
    fn rr_examples() {
        assert_eq!(rr_audit(5, 4, &[10_000]).unwrap().status, Status::Pass);
        assert_eq!(rr_audit(24, 23, &[10_000]).unwrap().status, Status::Pass);
        assert!(rr_audit(5, 1, &[100]).is_err());
    }
}
