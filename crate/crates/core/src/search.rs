//! Finite searches: real `(r, s)` windows, membership in the product set of
//! Catalan numbers and middle binomials, the window scans, the cube-root scan
//! for `s = ±1` and the Pell scans.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::central::{central_value, valuations, Kind};
use crate::factor::{factor, smooth_factor};
use crate::interval::{decide, ratio_of, Decision, Interval};
use crate::lucas::{alpha_log_interval, LucasParams, SeqKind, SequencePair};
use crate::numtheory::{factor_u64, gcd};
use crate::primality::small_primes;
use crate::report::{AuditReport, ReportRow};
use crate::Error;

/// One end of a window for the dominant root `alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphaBound {
    /// `(1 + sqrt 5)/2`
    Golden,
    /// `alpha` against the rational `num/den`
    Alpha(i128, i128),
    /// `log alpha` against the rational `num/den`
    LogAlpha(i128, i128),
}

fn ratio_i128(s: &str) -> Result<(i128, i128), Error> {
    if s.trim().is_empty() || !s.trim().chars().all(|c| c.is_ascii_digit() || c == '.') {
        return Err(Error::Plan(format!("bad decimal {s:?}")));
    }
    let (a, b) = ratio_of(s.trim());
    let g = a.gcd(&b);
    match ((&a / &g).to_i128(), (&b / &g).to_i128()) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::Plan(format!("decimal {s:?} out of range"))),
    }
}

impl AlphaBound {
    /// Parses `golden`, `alpha:<decimal>` or `log:<decimal>`.
    pub fn parse(s: &str) -> Result<Self, Error> {
        if s == "golden" {
            return Ok(AlphaBound::Golden);
        }
        if let Some(v) = s.strip_prefix("alpha:") {
            let (a, b) = ratio_i128(v)?;
            return Ok(AlphaBound::Alpha(a, b));
        }
        if let Some(v) = s.strip_prefix("log:") {
            let (a, b) = ratio_i128(v)?;
            return Ok(AlphaBound::LogAlpha(a, b));
        }
        Err(Error::Plan(format!("bad alpha bound {s:?}")))
    }

    /// `log alpha <= total/n`.
    pub fn log_per_n(total: &str, n: u64) -> Result<Self, Error> {
        let (a, b) = ratio_i128(total)?;
        Ok(AlphaBound::LogAlpha(a, b * n as i128))
    }

    pub fn approx(&self) -> f64 {
        match *self {
            AlphaBound::Golden => (1.0 + 5f64.sqrt()) / 2.0,
            AlphaBound::Alpha(a, b) => a as f64 / b as f64,
            AlphaBound::LogAlpha(a, b) => (a as f64 / b as f64).exp(),
        }
    }
}

impl fmt::Display for AlphaBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AlphaBound::Golden => f.write_str("golden"),
            AlphaBound::Alpha(a, b) => write!(f, "alpha={a}/{b}"),
            AlphaBound::LogAlpha(a, b) => write!(f, "log alpha={a}/{b}"),
        }
    }
}

/// Sign of `a + b phi`.
fn sign_golden(a: i128, b: i128) -> Ordering {
    // a + b phi = ((2a + b) + b sqrt 5)/2
    let x = 2 * a + b;
    match (x.cmp(&0), b.cmp(&0)) {
        (Ordering::Equal, o) | (o, Ordering::Equal) => o,
        (o1, o2) if o1 == o2 => o1,
        (Ordering::Greater, _) => (x * x).cmp(&(5 * b * b)),
        _ => (5 * b * b).cmp(&(x * x)),
    }
}

/// Compares the dominant real root of `x^2 - r x - s` with a bound; `None` if undecided.
pub fn alpha_cmp(r: i64, s: i64, bound: &AlphaBound, prec: u32) -> Option<Ordering> {
    let (r128, s128) = (r as i128, s as i128);
    match *bound {
        AlphaBound::Alpha(a, b) => {
            if 2 * a <= r128 * b {
                return Some(Ordering::Greater);
            }
            // q(c) b^2 with q(x) = x^2 - r x - s, increasing past r/2
            Some(0.cmp(&(a * a - r128 * a * b - s128 * b * b)))
        }
        AlphaBound::Golden => {
            if r >= 4 {
                return Some(Ordering::Greater);
            }
            // q(phi) = (1 - r) phi + (1 - s)
            Some(sign_golden(1 - s128, 1 - r128).reverse())
        }
        AlphaBound::LogAlpha(a, b) => {
            let params = LucasParams::new(r, s).ok()?;
            match decide(prec, |p| alpha_log_interval(&params, p).sub(&Interval::from_ratio(a, b, p))).0 {
                Decision::Positive => Some(Ordering::Greater),
                Decision::Negative => Some(Ordering::Less),
                Decision::Undecided => None,
            }
        }
    }
}

/// Rational bounds `lo <= exp(a/b) <= hi` for a log bound.
fn log_bracket(bound: &AlphaBound) -> Option<(AlphaBound, AlphaBound)> {
    let AlphaBound::LogAlpha(a, b) = *bound else { return None };
    let e = Interval::from_ratio(a, b, 96).exp().with_prec(40);
    let (lo, hi) = (e.lo_raw().to_i128()?, e.hi_raw().to_i128()?);
    if lo <= 0 || hi > 1i128 << 60 {
        return None;
    }
    Some((AlphaBound::Alpha(lo, 1 << 40), AlphaBound::Alpha(hi, 1 << 40)))
}

/// [`alpha_cmp`] with the exact rational test tried first when a bracket is given.
fn alpha_cmp_bracketed(r: i64, s: i64, bound: &AlphaBound, bracket: Option<&(AlphaBound, AlphaBound)>) -> Option<Ordering> {
    if let Some((lo, hi)) = bracket {
        if alpha_cmp(r, s, lo, 128) == Some(Ordering::Less) {
            return Some(Ordering::Less);
        }
        if alpha_cmp(r, s, hi, 128) == Some(Ordering::Greater) {
            return Some(Ordering::Greater);
        }
    }
    alpha_cmp(r, s, bound, 128)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SSign {
    Pos,
    Neg,
    Both,
}

impl SSign {
    pub fn parse(s: &str) -> Result<Self, Error> {
        match s {
            "+" | "pos" => Ok(SSign::Pos),
            "-" | "neg" => Ok(SSign::Neg),
            "both" | "±" => Ok(SSign::Both),
            _ => Err(Error::Plan(format!("bad sign {s:?}"))),
        }
    }

    fn admits(self, s: i64) -> bool {
        match self {
            SSign::Pos => s > 0,
            SSign::Neg => s < 0,
            SSign::Both => true,
        }
    }
}

/// Real pairs with `c1 <= alpha <= c2`.
#[derive(Clone, Debug)]
pub struct RSWindow {
    pub c1: AlphaBound,
    pub c2: AlphaBound,
    pub s_sign: SSign,
    pub pairs: Vec<SequencePair>,
    /// pairs whose membership could not be decided
    pub undecided: Vec<SequencePair>,
}

/// Valid, real, non-degenerate pair with `r >= 1`.
pub fn is_real_pair(r: i64, s: i64) -> bool {
    r >= 1 && s != 0 && r * r + 4 * s > 0 && gcd(r as u64, s.unsigned_abs()) == 1
}

/// The integer ranges of the window lemma, widened by one unit to absorb rounding.
fn s_range(r: i64, c1: f64, c2: f64, sign: SSign) -> Vec<(i64, i64)> {
    let rf = r as f64;
    let mut out = Vec::new();
    let upper = (c2 * (c2 - rf)).floor() as i64 + 1;
    let lower = if 2.0 * c1 > rf { (c1 * (c1 - rf)).ceil() as i64 - 1 } else { i64::MIN };
    if sign.admits(1) && rf < c2 + 1e-9 {
        let lo = lower.max(1).max((((c1 * c1 - rf * rf) / 4.0).ceil() as i64) - 1);
        if lo <= upper {
            out.push((lo, upper));
        }
    }
    if sign.admits(-1) {
        let lo = (-(r * r - 1) / 4).max(lower);
        let hi = upper.min(-1);
        if lo <= hi {
            out.push((lo, hi));
        }
    }
    out
}

/// All real pairs with `c1 <= alpha <= c2`, from the window lemma's ranges and an exact membership test.
pub fn enumerate_rs(c1: &AlphaBound, c2: &AlphaBound, s_sign: SSign) -> Result<RSWindow, Error> {
    let (c1f, c2f) = (c1.approx() * (1.0 - 1e-9), c2.approx() * (1.0 + 1e-9));
    if !(c1f > 0.0 && c1.approx() <= c2.approx() * (1.0 + 1e-12)) {
        return Err(Error::Precondition(format!("window needs 0 < c1 <= c2, got {c1}, {c2}")));
    }
    let r_max = (2.0 * c2f).floor() as i64;
    let (b1, b2) = (log_bracket(c1), log_bracket(c2));
    let rows: Vec<(Vec<SequencePair>, Vec<SequencePair>)> = (1..=r_max)
        .into_par_iter()
        .map(|r| {
            let mut keep = Vec::new();
            let mut open = Vec::new();
            for (lo, hi) in s_range(r, c1f, c2f, s_sign) {
                for s in lo..=hi {
                    if !is_real_pair(r, s) {
                        continue;
                    }
                    let lo_ok = alpha_cmp_bracketed(r, s, c1, b1.as_ref());
                    let hi_ok = alpha_cmp_bracketed(r, s, c2, b2.as_ref());
                    match (lo_ok, hi_ok) {
                        (Some(a), Some(b)) => {
                            if a != Ordering::Less && b != Ordering::Greater {
                                keep.push(SequencePair { r, s });
                            }
                        }
                        _ => open.push(SequencePair { r, s }),
                    }
                }
            }
            (keep, open)
        })
        .collect();
    let (mut pairs, mut undecided) = (Vec::new(), Vec::new());
    for (k, o) in rows {
        pairs.extend(k);
        undecided.extend(o);
    }
    pairs.sort();
    undecided.sort();
    Ok(RSWindow { c1: c1.clone(), c2: c2.clone(), s_sign, pairs, undecided })
}

/// The window lemma's inequalities for a real pair, with the sign of its upper bound as in the proof.
pub fn window_lemma_holds(r: i64, s: i64, c1: f64, c2: f64) -> bool {
    let (rf, sf) = (r as f64, s as f64);
    let eps = 1e-9 * (1.0 + c2 * c2);
    if s > 0 {
        rf < c2 + eps
            && sf <= c2 * (c2 - rf) + eps
            && (2.0 * c1 <= rf || sf >= c1 * (c1 - rf) - eps)
            && sf >= (c1 * c1 - rf * rf) / 4.0 - eps
    } else {
        let a = -sf;
        c1 <= rf + eps
            && rf <= 2.0 * c2 + eps
            && a >= c2 * (rf - c2) - eps
            && a < rf * rf / 4.0
            && (rf >= 2.0 * c1 || a <= c1 * (rf - c1) + eps)
    }
}

/// One factor `D_m` of a product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Part {
    pub m: u64,
    pub kind: Kind,
}

impl Part {
    pub fn value(&self) -> BigInt {
        central_value(self.m, self.kind)
    }
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.kind.label(), self.m)
    }
}

/// `sign * prod D_m`, parts ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PBCFactorization {
    pub sign: i8,
    pub parts: Vec<Part>,
}

impl PBCFactorization {
    pub fn value(&self) -> BigInt {
        let v: BigInt = self.parts.iter().map(Part::value).product();
        if self.sign < 0 {
            -v
        } else {
            v
        }
    }
}

impl fmt::Display for PBCFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            f.write_str("-")?;
        }
        let mut counts: BTreeMap<Part, u32> = BTreeMap::new();
        for p in &self.parts {
            *counts.entry(*p).or_default() += 1;
        }
        let terms: Vec<String> = counts
            .into_iter()
            .map(|(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        f.write_str(&terms.join("*"))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PbcOptions {
    /// smallest index allowed; `C_1 = 1` is never used
    pub m_min: u64,
    pub m_cap: Option<u64>,
    pub max_solutions: usize,
}

impl Default for PbcOptions {
    fn default() -> Self {
        PbcOptions { m_min: 2, m_cap: None, max_solutions: 64 }
    }
}

type Target = BTreeMap<u64, u32>;

struct Decomposer {
    parts: Vec<(Part, Vec<(u64, u32)>)>,
    dead: HashSet<(Vec<(u64, u32)>, usize)>,
    max: usize,
    out: Vec<Vec<Part>>,
}

impl Decomposer {
    /// `parts[..bound]` are the factors still allowed, ascending.
    fn run(&mut self, target: &mut Target, bound: usize, acc: &mut Vec<Part>) -> bool {
        if self.out.len() >= self.max {
            return true;
        }
        let Some((&p, _)) = target.iter().next_back() else {
            if !acc.is_empty() {
                let mut sol = acc.clone();
                sol.reverse();
                self.out.push(sol);
                return true;
            }
            return false;
        };
        let key: (Vec<(u64, u32)>, usize) = (target.iter().map(|(&a, &b)| (a, b)).collect(), bound);
        if self.dead.contains(&key) {
            return false;
        }
        let mut found = false;
        // highest index first; the largest prime forces 2m >= p
        for i in (0..bound).rev() {
            if 2 * self.parts[i].0.m < p {
                break;
            }
            let fits = self.parts[i].1.iter().all(|(q, e)| target.get(q).is_some_and(|have| have >= e));
            if !fits {
                continue;
            }
            let vals = self.parts[i].1.clone();
            for (q, e) in &vals {
                let slot = target.get_mut(q).unwrap();
                *slot -= e;
                if *slot == 0 {
                    target.remove(q);
                }
            }
            acc.push(self.parts[i].0);
            found |= self.run(target, i + 1, acc);
            acc.pop();
            for (q, e) in vals {
                *target.entry(q).or_default() += e;
            }
            if self.out.len() >= self.max {
                return true;
            }
        }
        if !found {
            self.dead.insert(key);
        }
        found
    }
}

/// Every way to write `n` as `± prod D_m` with `D_m in {C_m, B_m}` and `m >= m_min`.
pub fn pbc_decompose(n: &BigInt, opts: PbcOptions) -> Result<Vec<PBCFactorization>, Error> {
    if n.is_zero() {
        return Err(Error::Precondition("pbc_decompose needs N != 0".into()));
    }
    let abs = n.abs();
    if abs.is_one() {
        return Ok(Vec::new());
    }
    let f = factor(&abs)?;
    if let Some(c) = f.unfactored_cofactor {
        return Err(Error::Unfactored(c.to_string()));
    }
    let mut target: Target = BTreeMap::new();
    for (p, e) in &f.factors {
        match p.to_u64() {
            Some(p) => {
                target.insert(p, *e);
            }
            None => return Ok(Vec::new()),
        }
    }
    // D_m <= |N| caps the index; C_m <= B_m
    let mut m_hi = opts.m_min.max(1);
    while central_value(m_hi + 1, Kind::C) <= abs {
        m_hi += 1;
    }
    if let Some(c) = opts.m_cap {
        m_hi = m_hi.min(c);
    }
    let primes = small_primes(2 * m_hi + 2);
    let mut parts = Vec::new();
    for m in opts.m_min.max(1)..=m_hi {
        for kind in [Kind::C, Kind::B] {
            if m == 1 && kind == Kind::C {
                continue;
            }
            parts.push((Part { m, kind }, valuations(m, kind, &primes)));
        }
    }
    let mut d = Decomposer { parts, dead: HashSet::new(), max: opts.max_solutions, out: Vec::new() };
    let bound = d.parts.len();
    d.run(&mut target, bound, &mut Vec::new());
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut out: Vec<PBCFactorization> = d.out.into_iter().map(|parts| PBCFactorization { sign, parts }).collect();
    out.sort();
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct ScanConstraints {
    pub p_max: Option<u64>,
    pub required_divisor: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanHit {
    pub r: i64,
    pub s: i64,
    pub n: u64,
    pub seq: SeqKind,
    pub value: BigInt,
    pub factorization: PBCFactorization,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ScanOutcome {
    pub examined: usize,
    /// rejected by the largest-prime or divisor prescreens
    pub prescreened: usize,
    pub hits: Vec<ScanHit>,
    /// `(r, s, reason)` for terms the scan could not settle
    pub undecided: Vec<(i64, i64, String)>,
}

impl ScanOutcome {
    pub fn merge(&mut self, other: ScanOutcome) {
        self.examined += other.examined;
        self.prescreened += other.prescreened;
        self.hits.extend(other.hits);
        self.undecided.extend(other.undecided);
        self.hits.sort_by_key(|h| (h.r, h.s, h.n));
        self.undecided.sort();
    }
}

/// `U_n` or `V_n` modulo `m`.
pub fn term_mod(r: i64, s: i64, n: u64, seq: SeqKind, m: u64) -> u64 {
    let m = m as i128;
    let (r, s) = ((r as i128).rem_euclid(m), (s as i128).rem_euclid(m));
    let (mut a, mut b) = match seq {
        SeqKind::U => (0i128, 1 % m),
        SeqKind::V => (2 % m, r),
    };
    for _ in 0..n {
        let c = (r * b + s * a) % m;
        a = b;
        b = c;
    }
    a as u64
}

fn scan(seq: SeqKind, pairs: &[SequencePair], n: u64, constraints: &ScanConstraints, m_cap: u64) -> ScanOutcome {
    let primes = small_primes(constraints.p_max.unwrap_or(2).max(2));
    let parts: Vec<ScanOutcome> = pairs
        .par_iter()
        .map(|pair| {
            let mut out = ScanOutcome { examined: 1, ..Default::default() };
            if let Some(d) = constraints.required_divisor {
                if term_mod(pair.r, pair.s, n, seq, d) != 0 {
                    out.prescreened = 1;
                    return out;
                }
            }
            let Ok(params) = LucasParams::new(pair.r, pair.s) else {
                out.undecided.push((pair.r, pair.s, "invalid parameters".into()));
                return out;
            };
            let value = match seq {
                SeqKind::U => params.u(n),
                SeqKind::V => params.v(n),
            };
            if value.is_zero() {
                return out;
            }
            if let Some(p) = constraints.p_max {
                if smooth_factor(&value, &primes, p).is_none() {
                    out.prescreened = 1;
                    return out;
                }
            }
            let opts = PbcOptions { m_min: 2, m_cap: Some(m_cap), max_solutions: 1 };
            match pbc_decompose(&value, opts) {
                Ok(sols) => {
                    if let Some(f) = sols.into_iter().next() {
                        out.hits.push(ScanHit { r: pair.r, s: pair.s, n, seq, value, factorization: f });
                    }
                }
                Err(e) => out.undecided.push((pair.r, pair.s, e.to_string())),
            }
            out
        })
        .collect();
    let mut total = ScanOutcome::default();
    for p in parts {
        total.merge(p);
    }
    total
}

/// Terms `U_n` of the given pairs that lie in the product set with every index `<= m_cap`.
pub fn scan_u(pairs: &[SequencePair], n: u64, constraints: &ScanConstraints, m_cap: u64) -> ScanOutcome {
    scan(SeqKind::U, pairs, n, constraints, m_cap)
}

pub fn scan_v(pairs: &[SequencePair], n: u64, constraints: &ScanConstraints, m_cap: u64) -> ScanOutcome {
    scan(SeqKind::V, pairs, n, constraints, m_cap)
}

/// Recomputes a hit from the recurrence and the factorization from the parts.
pub fn reverify_hit(h: &ScanHit) -> bool {
    let Ok(params) = LucasParams::new(h.r, h.s) else {
        return false;
    };
    let seq = match h.seq {
        SeqKind::U => params.u_sequence(h.n),
        SeqKind::V => params.v_sequence(h.n),
    };
    seq.last() == Some(&h.value) && h.factorization.value() == h.value
}

/// Values `C_m, B_m, 2 C_m, 2 B_m` for `2 <= m <= m_max`, with their names.
pub fn doubled_family(m_max: u64) -> BTreeMap<BigInt, Vec<String>> {
    let mut t: BTreeMap<BigInt, Vec<String>> = BTreeMap::new();
    for m in 2..=m_max {
        for kind in [Kind::C, Kind::B] {
            let v = central_value(m, kind);
            t.entry(v.clone() * 2).or_default().push(format!("2{}_{m}", kind.label()));
            t.entry(v).or_default().push(format!("{}_{m}", kind.label()));
        }
    }
    t
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct V23Hit {
    pub r: i64,
    pub s: i64,
    pub n: u64,
    pub value: BigInt,
    pub representation: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct V23Scan {
    pub r_max: i64,
    pub m_max: u64,
    pub hits: Vec<V23Hit>,
    /// `n = 3` solutions found from the cube bracket, any `r`
    pub shortcut: Vec<V23Hit>,
    pub shortcut_agrees: bool,
}

/// `(r, s)` with `s = ±1` solving `V_3 = E` for a given `E`, by the cube bracket:
/// `r^3 < r(r^2 + 3) < (r+1)^3` and `(r-1)^3 < r(r^2 - 3) < r^3` for `r >= 2`.
pub fn cube_shortcut(e: &BigInt) -> Vec<(i64, i64)> {
    let c = e.cbrt();
    let mut out = Vec::new();
    for (r, s) in [(c.clone(), 1i64), (c + 1, -1)] {
        let rr = &r * &r + 3 * s;
        if &r * rr == *e {
            if let Some(r) = r.to_i64() {
                out.push((r, s));
            }
        }
    }
    out
}

/// `V_n` in `{C_m, B_m, 2C_m, 2B_m}` for `n in {2, 3, 6}`, `s = ±1`, `r <= r_max`, `2 <= m <= m_max`.
pub fn v23_scan(r_max: i64, m_max: u64) -> Result<V23Scan, Error> {
    if r_max < 5 {
        return Err(Error::Precondition("v23_scan needs r_max >= 5".into()));
    }
    let fam = doubled_family(m_max);
    let name = |v: &BigInt| fam.get(v).map(|names| names.join("="));
    let mut hits = Vec::new();
    for r in 1..=r_max {
        for s in [1i64, -1] {
            let Ok(params) = LucasParams::new(r, s) else { continue };
            for n in [2u64, 3, 6] {
                let v = params.v(n);
                if let Some(rep) = name(&v) {
                    hits.push(V23Hit { r, s, n, value: v, representation: rep });
                }
            }
        }
    }
    hits.sort();
    let mut shortcut = Vec::new();
    for (e, names) in &fam {
        for (r, s) in cube_shortcut(e) {
            if LucasParams::new(r, s).is_ok() {
                shortcut.push(V23Hit { r, s, n: 3, value: e.clone(), representation: names.join("=") });
            }
        }
    }
    shortcut.sort();
    let direct3: Vec<&V23Hit> = hits.iter().filter(|h| h.n == 3).collect();
    let short_in: Vec<&V23Hit> = shortcut.iter().filter(|h| h.r <= r_max).collect();
    let shortcut_agrees = direct3 == short_in;
    Ok(V23Scan { r_max, m_max, hits, shortcut, shortcut_agrees })
}

/// Every `(r, s)`, `s = ±1`, any `r`, with `V_n` in the doubled family for `n in {2, 3, 6}` and `m <= m_max`.
///
/// Uses `V_2 = r^2 + 2s`, the cube bracket for `V_3`, and `V_6 = W(W^2 - 3)` with `W = V_2`.
pub fn v23_root_scan(m_max: u64) -> Vec<V23Hit> {
    let fam = doubled_family(m_max);
    let mut out = Vec::new();
    let square_roots = |e: &BigInt| -> Vec<(i64, i64)> {
        let mut v = Vec::new();
        for s in [1i64, -1] {
            let t: BigInt = e - 2 * s;
            if t.is_positive() {
                let r = t.sqrt();
                if &r * &r == t {
                    if let Some(r) = r.to_i64() {
                        v.push((r, s));
                    }
                }
            }
        }
        v
    };
    for (e, names) in &fam {
        let rep = names.join("=");
        let mut push = |r: i64, s: i64, n: u64| {
            if LucasParams::new(r, s).is_ok() {
                out.push(V23Hit { r, s, n, value: e.clone(), representation: rep.clone() });
            }
        };
        for (r, s) in square_roots(e) {
            push(r, s, 2);
        }
        for (r, s) in cube_shortcut(e) {
            push(r, s, 3);
        }
        let w: BigInt = e.cbrt() + 1u32;
        if &w * (&w * &w - 3u32) == *e {
            for (r, s) in square_roots(&w) {
                push(r, s, 6);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// `(r-2)^3 < r(r^2 - 3) < (r-1)^3` for `r_lo <= r <= r_hi`, as the `s = -1` bracket is sometimes stated.
pub fn literal_minus_bracket_holds(r_lo: i64, r_hi: i64) -> Option<i64> {
    (r_lo..=r_hi).find(|&r| {
        let e = r as i128 * (r as i128 * r as i128 - 3);
        let (a, b) = ((r - 2) as i128, (r - 1) as i128);
        !(a * a * a < e && e < b * b * b)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum PellForm {
    /// `X^2 - d Y^2 = ±1`
    One,
    /// `W^2 - d Z^2 = ±4`
    Four,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PellSolution {
    pub form: PellForm,
    pub d: u64,
    pub n: u64,
    pub x: BigInt,
    pub y: BigInt,
    pub rhs_sign: i8,
    pub representation: String,
}

pub fn is_squarefree(d: u64) -> bool {
    factor_u64(d).iter().all(|&(_, e)| e == 1)
}

/// Least `x + y sqrt d > 1` with `x^2 - d y^2 = ±1`, from the continued fraction of `sqrt d`.
pub fn pell_fundamental(d: u64) -> (BigInt, BigInt) {
    let a0 = d.sqrt();
    assert!(a0 * a0 != d, "d must not be a square");
    let (mut m, mut q, mut a) = (0u64, 1u64, a0);
    let (mut h0, mut h1) = (BigInt::one(), BigInt::from(a0));
    let (mut k0, mut k1) = (BigInt::zero(), BigInt::one());
    loop {
        let norm: BigInt = &h1 * &h1 - &k1 * &k1 * d;
        if norm.abs().is_one() {
            return (h1, k1);
        }
        m = q * a - m;
        q = (d - m * m) / q;
        a = (a0 + m) / q;
        let h2 = &h1 * a + &h0;
        let k2 = &k1 * a + &k0;
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
    }
}

/// Least `(W + Z sqrt d)/2 > 1` with `W^2 - d Z^2 = ±4`, by a bounded scan of `Z`.
///
/// For `d ≢ 5 (mod 8)` both coordinates are even and the answer is twice the `±1` solution.
/// Otherwise a smaller unit cubes to the `±1` solution, which bounds `Z` by `(2 x_1 + 1)^(1/3)`.
pub fn pell4_fundamental(d: u64) -> (BigInt, BigInt) {
    let (x1, y1) = pell_fundamental(d);
    let doubled = (x1.clone() * 2, y1 * 2);
    if d % 8 != 5 {
        return doubled;
    }
    let t: BigInt = x1 * 2u32 + 1u32;
    let z_bound: BigInt = t.cbrt() + 2u32;
    let z_bound = z_bound.to_u64().unwrap_or(u64::MAX);
    let dz = BigInt::from(d);
    for z in 1..=z_bound {
        let z2 = BigInt::from(z) * z * &dz;
        let candidates: [BigInt; 2] = [&z2 - 4u32, &z2 + 4u32];
        for w2 in candidates {
            if w2.is_positive() {
                let w = w2.sqrt();
                if &w * &w == w2 {
                    return (w, BigInt::from(z));
                }
            }
        }
    }
    doubled
}

/// Values `C_m, B_m` for `2 <= m <= m_max`.
fn central_family(m_max: u64) -> HashMap<BigInt, String> {
    let mut t: HashMap<BigInt, String> = HashMap::new();
    for m in 2..=m_max {
        for kind in [Kind::C, Kind::B] {
            let e = t.entry(central_value(m, kind)).or_default();
            if !e.is_empty() {
                e.push('=');
            }
            e.push_str(&format!("{}_{m}", kind.label()));
        }
    }
    t
}

/// Solutions with `X_n` (for `±1`) or `W_n` (for `±4`) in `{C_m, B_m}`, `1 < d <= d_max` squarefree, `n <= n_max`.
pub fn pell_scan(d_max: u64, n_max: u64, m_max: u64) -> Result<Vec<PellSolution>, Error> {
    if d_max < 2 {
        return Err(Error::Precondition("pell_scan needs d_max >= 2".into()));
    }
    let fam = central_family(m_max);
    let mut out: Vec<PellSolution> = (2..=d_max)
        .into_par_iter()
        .filter(|&d| is_squarefree(d))
        .flat_map_iter(|d| {
            let mut hits = Vec::new();
            let (x1, y1) = pell_fundamental(d);
            let (w1, z1) = pell4_fundamental(d);
            let dd = BigInt::from(d);
            let n1: BigInt = &x1 * &x1 - &y1 * &y1 * &dd;
            let n4: BigInt = (&w1 * &w1 - &z1 * &z1 * &dd) / 4;
            for (form, t1, u1, norm, scale) in [(PellForm::One, x1, y1, n1, 2), (PellForm::Four, w1, z1, n4, 1)] {
                // trace of the unit and the Lucas recurrence it drives
                let trace: BigInt = &t1 * scale;
                let neg = norm.is_negative();
                let (mut a0, mut a1) = (BigInt::from(2 / scale), t1.clone());
                let (mut b0, mut b1) = (BigInt::zero(), u1.clone());
                for n in 1..=n_max {
                    if let Some(rep) = fam.get(&a1) {
                        let rhs_sign = if neg && n % 2 == 1 { -1 } else { 1 };
                        hits.push(PellSolution { form, d, n, x: a1.clone(), y: b1.clone(), rhs_sign, representation: rep.clone() });
                    }
                    let a2 = &trace * &a1 - &norm * &a0;
                    let b2 = &trace * &b1 - &norm * &b0;
                    (a0, a1, b0, b1) = (a1, a2, b1, b2);
                }
            }
            hits
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Checks a Pell solution's defining equation.
pub fn pell_holds(s: &PellSolution) -> bool {
    let k = match s.form {
        PellForm::One => 1,
        PellForm::Four => 4,
    };
    let lhs: BigInt = &s.x * &s.x - &s.y * &s.y * s.d;
    lhs == BigInt::from(k * s.rhs_sign as i64)
}

/// `V_4 = r^2 (r^2 + 4s) + 2 s^2` never hits `14 (mod 8)` for `r` even, `s` odd; and `nu_2(V_4t) <= 1`.
pub fn mod8_obstruction_check() -> AuditReport {
    let mut report = AuditReport::new("v4-mod8");
    let mut seen = BTreeSet::new();
    for r in (0..8i64).step_by(2) {
        for s in (1..8i64).step_by(2) {
            seen.insert((r * r * (r * r + 4 * s) + 2 * s * s).rem_euclid(8));
        }
    }
    report.push(
        ReportRow::check("v-even.mod8: r^2(r^2+4s) + 2s^2 is never 6 mod 8 for r even, s odd", !seen.contains(&6))
            .input("residues", format!("{seen:?}")),
    );
    for (r, s) in [(2i64, 1i64), (4, 1)] {
        let v = LucasParams::new(r, s).unwrap().v(4);
        report.push(
            ReportRow::check("v-even.mod8-example: V_4 mod 8 differs from 14 mod 8", (&v % 8u32) != BigInt::from(6))
                .input("r", r)
                .input("s", s)
                .input("V_4", &v),
        );
    }
    let mut bad = None;
    'grid: for r in 1..=12i64 {
        for s in -12..=12i64 {
            let Ok(p) = LucasParams::new(r, s) else { continue };
            for t in 1..=4u64 {
                let v = p.v(4 * t);
                if !v.is_zero() && v.trailing_zeros().unwrap_or(0) > 1 {
                    bad = Some((r, s, t));
                    break 'grid;
                }
            }
        }
    }
    let row = ReportRow::check("v-even.nu2: nu_2(V_4t) <= 1 for 1 <= r <= 12, |s| <= 12, t <= 4", bad.is_none());
    report.push(match bad {
        Some((r, s, t)) => row.witness(format!("r={r}, s={s}, t={t}")),
        None => row,
    });
    report.finish()
}

/// Products of `D_m`, `2 <= m <= 5`, with `nu_2 <= 1` and every odd prime `≡ ±1 (mod 8)`, at least one such prime.
pub fn v_even_candidates() -> BTreeSet<BigInt> {
    let primes = small_primes(10);
    let allowed: Vec<(BigInt, u32)> = (2..=5u64)
        .flat_map(|m| [Kind::C, Kind::B].map(|k| (m, k)))
        .filter_map(|(m, k)| {
            let v = valuations(m, k, &primes);
            let ok = v.iter().all(|&(p, _)| p == 2 || p % 8 == 1 || p % 8 == 7);
            let two = v.iter().find(|e| e.0 == 2).map_or(0, |e| e.1);
            ok.then(|| (central_value(m, k), two))
        })
        .collect();
    let mut out = BTreeSet::new();
    // at most one even factor; odd admissible factors would be repeated freely, so cap them
    fn walk(i: usize, allowed: &[(BigInt, u32)], acc: BigInt, two: u32, depth: u32, out: &mut BTreeSet<BigInt>) {
        if i == allowed.len() {
            if acc > BigInt::one() {
                out.insert(acc);
            }
            return;
        }
        walk(i + 1, allowed, acc.clone(), two, depth, out);
        let (v, t) = &allowed[i];
        if two + t <= 1 && depth < 4 {
            walk(i, allowed, acc * v, two + t, depth + 1, out);
        }
    }
    walk(0, &allowed, BigInt::one(), 0, 0, &mut out);
    out.retain(|v| {
        let mut odd = v.clone();
        while odd.is_even() {
            odd /= 2;
        }
        !odd.is_one()
    });
    out
}

pub fn v_even_small_m() -> AuditReport {
    let mut report = AuditReport::new("v-even-small-m");
    let got = v_even_candidates();
    let want: BTreeSet<BigInt> = [BigInt::from(14)].into();
    report.push(
        ReportRow::check("v-even.candidates: admissible products of D_m with m <= 5 are exactly {14}", got == want)
            .input("found", format!("{:?}", got.iter().map(|v| v.to_string()).collect::<Vec<_>>())),
    );
    // a primitive prime of V_4t is ≡ ±1 (mod 8t) and at most 2 m_k <= 10
    let ts: Vec<u64> = (1..=10u64)
        .filter(|&t| small_primes(10).iter().any(|&p| p > 2 && ((p + 1) % (8 * t) == 0 || (p - 1) % (8 * t) == 0)))
        .collect();
    report.push(ReportRow::check("v-even.index: only t = 1 admits a prime p <= 10 with p ≡ ±1 (mod 8t)", ts == [1]).input("t", format!("{ts:?}")));
    report.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn golden_window() {
        let w = enumerate_rs(&AlphaBound::Golden, &AlphaBound::Golden, SSign::Both).unwrap();
        assert_eq!(w.pairs, vec![SequencePair { r: 1, s: 1 }]);
        assert!(enumerate_rs(&AlphaBound::Alpha(3, 1), &AlphaBound::Alpha(2, 1), SSign::Both).is_err());
    }

    #[test]
    fn alpha_comparisons() {
        // (3, -2): alpha = 2
        assert_eq!(alpha_cmp(3, -2, &AlphaBound::Alpha(2, 1), 128), Some(Ordering::Equal));
        assert_eq!(alpha_cmp(1, 1, &AlphaBound::Golden, 128), Some(Ordering::Equal));
        assert_eq!(alpha_cmp(1, 2, &AlphaBound::Golden, 128), Some(Ordering::Greater));
        assert_eq!(alpha_cmp(3, -2, &AlphaBound::Golden, 128), Some(Ordering::Greater));
        assert_eq!(alpha_cmp(2, 1, &AlphaBound::LogAlpha(1, 1), 128), Some(Ordering::Less));
    }

    #[test]
    fn positive_s_below_c2() {
        let c2 = AlphaBound::parse("alpha:5.88").unwrap();
        let w = enumerate_rs(&AlphaBound::parse("alpha:1.6").unwrap(), &c2, SSign::Pos).unwrap();
        assert!(!w.pairs.is_empty());
        assert!(w.pairs.iter().all(|p| (p.r as f64) < 5.88));
    }

    #[test]
    fn pbc_examples() {
        let sols = pbc_decompose(&bi(144), PbcOptions::default()).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].to_string(), "C_2^2*B_2^2");
        let sols = pbc_decompose(&bi(144), PbcOptions { m_min: 1, ..Default::default() }).unwrap();
        let names: Vec<String> = sols.iter().map(|s| s.to_string()).collect();
        assert!(names.contains(&"B_1^2*B_2^2".to_string()));
        assert_eq!(pbc_decompose(&bi(5), PbcOptions::default()).unwrap()[0].to_string(), "C_3");
        assert!(pbc_decompose(&bi(3), PbcOptions::default()).unwrap().is_empty());
        assert_eq!(pbc_decompose(&bi(-14), PbcOptions::default()).unwrap()[0].sign, -1);
        assert!(pbc_decompose(&bi(0), PbcOptions::default()).is_err());
    }

    #[test]
    fn scans() {
        let fib = [SequencePair { r: 1, s: 1 }];
        let out = scan_u(&fib, 12, &ScanConstraints::default(), 6);
        assert_eq!(out.hits.len(), 1);
        assert!(reverify_hit(&out.hits[0]));
        let out = scan_v(&[SequencePair { r: 2, s: 1 }], 3, &ScanConstraints::default(), 5);
        assert_eq!(out.hits[0].value, bi(14));
        let out = scan_v(&fib, 3, &ScanConstraints::default(), 5);
        assert_eq!(out.hits[0].factorization.to_string(), "C_2^2");
        assert_eq!(term_mod(1, 1, 12, SeqKind::U, 1000), 144);
        assert_eq!(term_mod(2, -3, 7, SeqKind::V, 97), {
            let v: BigInt = LucasParams::new(2, -3).unwrap().v(7);
            v.mod_floor(&BigInt::from(97)).to_u64().unwrap()
        });
    }

    #[test]
    fn v23_examples() {
        let s = v23_scan(20, 15).unwrap();
        let has = |r, sg, n, v: i64| s.hits.iter().any(|h| h.r == r && h.s == sg && h.n == n && h.value == bi(v));
        assert!(has(2, 1, 2, 6) && has(4, -1, 2, 14) && has(5, 1, 3, 140));
        assert!(s.shortcut_agrees);
        assert_eq!(cube_shortcut(&bi(140)), vec![(5, 1)]);
        assert_eq!(cube_shortcut(&bi(52)), vec![(4, -1)]);
        assert_eq!(literal_minus_bracket_holds(4, 10), Some(4));
    }

    #[test]
    fn pell_fundamentals() {
        assert_eq!(pell_fundamental(29), (bi(70), bi(13)));
        assert_eq!(pell_fundamental(2), (bi(1), bi(1)));
        assert_eq!(pell4_fundamental(2), (bi(2), bi(2)));
        assert_eq!(pell4_fundamental(3), (bi(4), bi(2)));
        assert_eq!(pell4_fundamental(5), (bi(1), bi(1)));
        assert_eq!(pell4_fundamental(13), (bi(3), bi(1)));
        assert_eq!(pell4_fundamental(10), (bi(6), bi(2)));
    }

    #[test]
    fn pell_examples() {
        let sols = pell_scan(30, 6, 10).unwrap();
        assert!(sols.iter().all(pell_holds));
        let find = |form, d, x: i64| sols.iter().find(|s| s.form == form && s.d == d && s.x == bi(x));
        let s = find(PellForm::One, 29, 70).unwrap();
        assert_eq!((s.n, s.rhs_sign), (1, -1));
        assert_eq!(find(PellForm::Four, 2, 6).unwrap().n, 2);
        assert_eq!(find(PellForm::Four, 3, 14).unwrap().n, 2);
        assert_eq!(find(PellForm::Four, 2, 14).unwrap().n, 3);
    }

    #[test]
    fn mod8_and_small_m() {
        assert_eq!(mod8_obstruction_check().status, crate::Status::Pass);
        assert_eq!(v_even_small_m().status, crate::Status::Pass);
    }
}
