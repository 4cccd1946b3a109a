//! Middle binomial coefficients `B_m = binom(2m, m)`, Catalan numbers
//! `C_m = B_m/(m+1)`, their p-adic valuations and Stirling-type log bounds.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::interval::{decide, ln2, ln_int, pi, Decision, Interval};
use crate::primality::small_primes;
use crate::report::{AuditReport, ReportRow, Status};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Kind {
    C,
    B,
}

impl Kind {
    pub fn label(self) -> &'static str {
        match self {
            Kind::C => "C",
            Kind::B => "B",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentralPair {
    pub m: u64,
    pub b: BigInt,
    pub c: BigInt,
}

#[derive(Clone, Debug)]
pub struct StirlingBounds {
    pub m: u64,
    pub sigma: Interval,
    pub tau: Interval,
    /// `m log 4 - sigma_m`
    pub lo: Interval,
    /// `m log 4 - tau_m`
    pub hi: Interval,
}

fn table() -> &'static RwLock<Vec<BigInt>> {
    static T: OnceLock<RwLock<Vec<BigInt>>> = OnceLock::new();
    T.get_or_init(|| RwLock::new(vec![BigInt::one()]))
}

/// `B_m`, from an append-only cache.
pub fn middle_binomial(m: u64) -> BigInt {
    let m = m as usize;
    {
        let t = table().read().unwrap();
        if m < t.len() {
            return t[m].clone();
        }
    }
    let mut t = table().write().unwrap();
    while t.len() <= m {
        let k = t.len() as u64 - 1;
        let next = &t[k as usize] * (2 * (2 * k + 1)) / (k + 1);
        t.push(next);
    }
    t[m].clone()
}

pub fn catalan(m: u64) -> BigInt {
    middle_binomial(m) / (m + 1)
}

pub fn central_numbers(m: u64) -> CentralPair {
    let b = middle_binomial(m);
    let c = &b / (m + 1);
    CentralPair { m, b, c }
}

pub fn central_value(m: u64, kind: Kind) -> BigInt {
    match kind {
        Kind::B => middle_binomial(m),
        Kind::C => catalan(m),
    }
}

/// `nu_p(B_m)` by Legendre's formula.
pub fn nu_p_binomial(p: u64, m: u64) -> u32 {
    let mut e = 0;
    let mut pk = p;
    while pk <= 2 * m {
        e += (2 * m / pk - 2 * (m / pk)) as u32;
        match pk.checked_mul(p) {
            Some(v) => pk = v,
            None => break,
        }
    }
    e
}

pub fn nu_p_int(p: u64, mut n: u64) -> u32 {
    let mut e = 0;
    while n > 0 && n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

pub fn nu_p_central(p: u64, m: u64, kind: Kind) -> u32 {
    let b = nu_p_binomial(p, m);
    match kind {
        Kind::B => b,
        Kind::C => b - nu_p_int(p, m + 1),
    }
}

/// Nonzero valuations of `B_m` or `C_m` over the primes `p <= 2m`.
pub fn valuations(m: u64, kind: Kind, primes: &[u64]) -> Vec<(u64, u32)> {
    primes
        .iter()
        .take_while(|&&p| p <= 2 * m)
        .filter_map(|&p| {
            let e = nu_p_central(p, m, kind);
            (e > 0).then_some((p, e))
        })
        .collect()
}

/// Enclosures of `log p` for all primes up to a bound, at one precision.
pub struct PrimeLogTable {
    pub prec: u32,
    pub limit: u64,
    pub primes: Vec<u64>,
    pub logs: Vec<Interval>,
    index: HashMap<u64, usize>,
}

impl PrimeLogTable {
    pub fn new(limit: u64, prec: u32) -> Self {
        let primes = small_primes(limit);
        let logs = primes.iter().map(|&p| ln_int(p, prec)).collect();
        let index = primes.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        PrimeLogTable { prec, limit, primes, logs, index }
    }

    /// Shared table covering primes `<= limit` at precision `prec`.
    pub fn shared(limit: u64, prec: u32) -> Arc<PrimeLogTable> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<PrimeLogTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut c = cache.lock().unwrap();
        let have = c.get(&prec).map_or(0, |t| t.limit);
        if have >= limit {
            return c[&prec].clone();
        }
        let t = Arc::new(PrimeLogTable::new(limit.max(2 * have).max(64), prec));
        c.insert(prec, t.clone());
        t
    }

    pub fn log(&self, p: u64) -> &Interval {
        &self.logs[self.index[&p]]
    }

    /// `sum e_p log p` over `(p, e)` pairs.
    pub fn weighted(&self, pairs: impl IntoIterator<Item = (u64, u32)>) -> Interval {
        let mut acc = Interval::zero(self.prec);
        for (p, e) in pairs {
            acc = acc.add(&self.log(p).mul_int(e));
        }
        acc
    }

    /// `log B_m` or `log C_m`.
    pub fn log_central(&self, m: u64, kind: Kind) -> Interval {
        assert!(2 * m <= self.limit, "prime log table too short for m={m}");
        self.weighted(valuations(m, kind, &self.primes))
    }
}

/// Bounds `m log 4 - sigma_m < log(C_m/2) < m log 4 - tau_m`.
pub fn stirling_log_interval(m: u64, prec: u32) -> StirlingBounds {
    assert!(m >= 1);
    let w = prec + 16;
    let base = ln2(w)
        .add(&ln_int(m + 1, w))
        .add(&pi(w).mul_int(m).ln().div_int(2));
    let sigma = base
        .add(&Interval::from_ratio(1, 6 * m, w))
        .sub(&Interval::from_ratio(1, 24 * m + 1, w));
    let tau = base
        .add(&Interval::from_ratio(2, 12 * m + 1, w))
        .sub(&Interval::from_ratio(1, 24 * m, w));
    let m_log4 = ln2(w).mul_int(2 * m);
    StirlingBounds {
        m,
        lo: m_log4.sub(&sigma).with_prec(prec),
        hi: m_log4.sub(&tau).with_prec(prec),
        sigma: sigma.with_prec(prec),
        tau: tau.with_prec(prec),
    }
}

/// Exact check that `log(C_m/2)/m` increases on `[m_lo, m_hi]`:
/// `C_m^(m+1) < 2 C_(m+1)^m` for each `m_lo <= m < m_hi`.
pub fn growth_monotonicity_check(m_lo: u64, m_hi: u64) -> Result<AuditReport, Error> {
    if m_lo < 7 || m_lo >= m_hi {
        return Err(Error::Precondition(format!("need 7 <= m_lo < m_hi, got ({m_lo}, {m_hi})")));
    }
    let mut report = AuditReport::new("growth-monotonicity");
    report.config("m_lo", m_lo).config("m_hi", m_hi);
    let mut first_bad = None;
    for m in m_lo..m_hi {
        let lhs = num_traits::pow(catalan(m), (m + 1) as usize);
        let rhs = num_traits::pow(catalan(m + 1), m as usize) * 2;
        if lhs >= rhs {
            first_bad = Some(m);
            break;
        }
    }
    let row = ReportRow::new(
        "log(C_m/2)/m increasing for m >= 7",
        if first_bad.is_none() { Status::Pass } else { Status::Fail },
    )
    .input("m_lo", m_lo)
    .input("m_hi", m_hi);
    report.push(match first_bad {
        Some(m) => row.witness(format!("m={m}")),
        None => row,
    });
    Ok(report.finish())
}

/// `m log 2m / log(C_m/2) * log(C_M/2)/M <= 1.0001 log 2M`.
pub fn weighted_log_bound_check(m: u64, big_m: u64) -> Result<AuditReport, Error> {
    if m < 7 || m > big_m {
        return Err(Error::Precondition(format!("need 7 <= m <= M, got ({m}, {big_m})")));
    }
    let (d, v) = decide(128, |p| {
        let t = PrimeLogTable::shared(2 * big_m, p);
        let lc = t.log_central(m, Kind::C).sub(&ln2(p));
        let lcm = t.log_central(big_m, Kind::C).sub(&ln2(p));
        let lhs = ln_int(2 * m, p)
            .mul_int(m)
            .div(&lc)
            .mul(&lcm)
            .div_int(big_m);
        let rhs = ln_int(2 * big_m, p).mul(&Interval::from_decimal("1.0001", p));
        rhs.sub(&lhs)
    });
    let mut report = AuditReport::new("weighted-log-bound");
    report.config("m", m).config("M", big_m);
    report.push(
        ReportRow::from_decision("m log2m/log(C_m/2) * log(C_M/2)/M <= 1.0001 log 2M", d, &v)
            .input("m", m)
            .input("M", big_m),
    );
    Ok(report.finish())
}

/// `log(C_m/2) > c m` decided exactly from the valuations of `C_m`.
pub fn log_half_catalan_exceeds(m: u64, c: &str, prec: u32) -> (Decision, Interval) {
    decide(prec, |p| {
        let t = PrimeLogTable::shared(2 * m, p);
        t.log_central(m, Kind::C)
            .sub(&ln2(p))
            .sub(&Interval::from_decimal(c, p).mul_int(m))
    })
}
