//! Weights `g(n0)`, the valuation sums `xi`, the `n = 24` tables and the
//! inequality audits whose positive margins rule out large `n`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::central::{valuations, Kind, PrimeLogTable};
use crate::interval::{decide, ln2, ln_int, ratio_of, Decision, Interval};
use crate::numtheory::{euler_phi, factor_u64, is_pm1_mod};
use crate::primality::{is_prime_u64, small_primes};
use crate::primes_ap::{ap_gap_check, EPS_TABLE};
use crate::report::{AuditReport, ReportRow, Status};
use crate::Error;

/// Tabulated `delta0` by modulus.
pub const DELTA0: &[(u64, &str)] = &[
    (5, "2.61"),
    (7, "3.19"),
    (9, "3.57"),
    (16, "2.89"),
    (24, "2.746"),
    (11, "3.3"),
    (13, "3.3"),
    (17, "3.3"),
    (19, "3.3"),
    (23, "3.3"),
];

pub fn delta0(n0: u64) -> Option<&'static str> {
    DELTA0.iter().find(|e| e.0 == n0).map(|e| e.1)
}

fn dec(s: &str, p: u32) -> Interval {
    Interval::from_decimal(s, p)
}

/// `44.88 L^2 + 211.08 L + 249.08` with `L = log l`.
pub fn f_voutier_log(log_l: &Interval) -> Interval {
    let p = log_l.prec();
    dec("44.88", p)
        .mul(&log_l.sqr())
        .add(&dec("211.08", p).mul(log_l))
        .add(&dec("249.08", p))
}

pub fn f_voutier(l: u64, prec: u32) -> Result<Interval, Error> {
    if l < 2 {
        return Err(Error::Precondition(format!("f needs l > 1, got {l}")));
    }
    Ok(f_voutier_log(&ln_int(l, prec)))
}

/// The weight `g(n0)` bounding `M_{n0}(D) / log D`.
pub fn g_weight(n0: u64, prec: u32) -> Result<Interval, Error> {
    let phi = euler_phi(n0);
    if let Some(d) = delta0(n0) {
        let (a, b) = ratio_of(d);
        return Ok(Interval::from_ratio(a, b * phi, prec));
    }
    if n0 >= 25 {
        let c = if n0 % 2 == 1 { "1.46" } else { "2.92" };
        return Ok(Interval::from_ratio(39, 10 * phi, prec).add(&dec(c, prec).mul(&ln_int(3 * n0, prec)).div_int(n0)));
    }
    Err(Error::Precondition(format!("no weight for n0={n0}")))
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightRow {
    pub n0: u64,
    pub phi: u64,
    pub delta0: Option<String>,
    pub g_lo: String,
    pub g_hi: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightTable {
    pub rows: Vec<WeightRow>,
}

pub fn weight_table(extra: &[u64], prec: u32) -> Result<WeightTable, Error> {
    let mut n0s: Vec<u64> = DELTA0.iter().map(|e| e.0).chain(extra.iter().copied()).collect();
    n0s.sort_unstable();
    n0s.dedup();
    let rows = n0s
        .into_iter()
        .map(|n0| {
            let g = g_weight(n0, prec)?;
            Ok(WeightRow {
                n0,
                phi: euler_phi(n0),
                delta0: delta0(n0).map(str::to_string),
                g_lo: g.lo_decimal(8),
                g_hi: g.hi_decimal(8),
            })
        })
        .collect::<Result<_, Error>>()?;
    Ok(WeightTable { rows })
}

/// `xi1(j)` and `xi2(j)`: the `log p`-weighted valuations of `C_j` and `B_j` over `p ≡ ±1 (mod n0)`.
#[derive(Clone, Debug)]
pub struct XiValue {
    pub j: u64,
    pub n0: u64,
    pub xi1: Interval,
    pub xi2: Interval,
}

/// `sum nu_p(D_j) log p` over primes whose residue mod `q` lies in `classes`.
pub fn class_sum(t: &PrimeLogTable, j: u64, kind: Kind, q: u64, classes: &[u64]) -> Interval {
    t.weighted(valuations(j, kind, &t.primes).into_iter().filter(|&(p, _)| classes.contains(&(p % q))))
}

fn pm1(n0: u64) -> [u64; 2] {
    [1 % n0, n0 - 1]
}

pub fn xi(j: u64, n0: u64, prec: u32) -> XiValue {
    let t = PrimeLogTable::shared(2 * j.max(1), prec);
    XiValue { j, n0, xi1: class_sum(&t, j, Kind::C, n0, &pm1(n0)), xi2: class_sum(&t, j, Kind::B, n0, &pm1(n0)) }
}

fn log_central_at(j: u64, kind: Kind, p: u32) -> Interval {
    PrimeLogTable::shared(2 * j.max(1), p).log_central(j, kind)
}

struct RatioScan {
    fails: Vec<u64>,
    undecided: Vec<u64>,
    worst: Option<(u64, Interval, Interval)>,
}

/// Scans `phi * sum / log D_j <= bound` over `js`. Returns failures and the largest ratio with its margin.
fn ratio_scan(
    js: Vec<u64>,
    kind: Kind,
    q: u64,
    classes: &[u64],
    weight: u64,
    bound: &str,
    prec: u32,
    strict: bool,
) -> RatioScan {
    if let Some(&m) = js.iter().max() {
        PrimeLogTable::shared(2 * m, prec);
    }
    let evals: Vec<(u64, Decision, Interval, Interval)> = js
        .into_par_iter()
        .map(|j| {
            let (d, margin) = decide(prec, |p| {
                let t = PrimeLogTable::shared(2 * j, p);
                let x = class_sum(&t, j, kind, q, classes).mul_int(weight);
                dec(bound, p).mul(&t.log_central(j, kind)).sub(&x)
            });
            let t = PrimeLogTable::shared(2 * j, prec);
            let l = t.log_central(j, kind);
            let ratio = if l.is_positive() {
                class_sum(&t, j, kind, q, classes).mul_int(weight).div(&l)
            } else {
                Interval::zero(prec)
            };
            (j, d, margin, ratio)
        })
        .collect();
    let mut out = RatioScan { fails: Vec::new(), undecided: Vec::new(), worst: None };
    for (j, d, margin, ratio) in evals {
        // an exact zero margin satisfies a non-strict bound
        let zero = margin.lo_raw() == margin.hi_raw() && margin.contains_zero();
        match d {
            Decision::Negative => out.fails.push(j),
            Decision::Undecided if !(zero && !strict) => out.undecided.push(j),
            _ => {}
        }
        if out.worst.as_ref().is_none_or(|w| ratio.hi_f64() > w.1.hi_f64()) {
            out.worst = Some((j, ratio, margin));
        }
    }
    out
}

fn scan_row(claim: String, scan: &RatioScan, bound: &str) -> ReportRow {
    let status = if !scan.fails.is_empty() {
        Status::Fail
    } else if !scan.undecided.is_empty() {
        Status::Undecided
    } else {
        Status::Pass
    };
    let mut row = ReportRow::new(claim, status).input("bound", bound);
    if let Some((j, ratio, margin)) = &scan.worst {
        row = row
            .input("max_ratio", ratio.hi_decimal(6))
            .input("argmax", j)
            .margin(&dec(bound, ratio.prec()).sub(ratio));
        let _ = margin;
    }
    match status {
        Status::Fail => row.witness(format!("fails at j in {:?}", &scan.fails[..scan.fails.len().min(12)])),
        Status::Undecided => row.witness(format!("undecided at j in {:?}", &scan.undecided[..scan.undecided.len().min(12)])),
        Status::Pass => row,
    }
}

/// `xi1(j) phi(n0) <= delta0 log C_j` and `xi2(j) phi(n0) <= delta0 log B_j` for `2 <= j <= j_max`.
pub fn delta0_audit(n0: u64, j_max: u64, prec: u32) -> Result<AuditReport, Error> {
    let d0 = delta0(n0).ok_or_else(|| Error::Precondition(format!("n0={n0} has no tabulated delta0")))?;
    if j_max < 2 {
        return Err(Error::Precondition("j_max must be at least 2".into()));
    }
    let phi = euler_phi(n0);
    let mut report = AuditReport::new(format!("delta0-{n0}"));
    report.config("n0", n0).config("delta0", d0).config("j_max", j_max).config("precision_bits", prec);
    for (kind, label) in [(Kind::C, "xi1"), (Kind::B, "xi2")] {
        let scan = ratio_scan((2..=j_max).collect(), kind, n0, &pm1(n0), phi, d0, prec, false);
        report.push(
            scan_row(format!("delta0.{label}: phi(n0) {label}(j) <= delta0 log {}_j", kind.label()), &scan, d0)
                .input("n0", n0)
                .input("j_max", j_max),
        );
    }
    Ok(report.finish())
}

/// `delta1` for modulus `q` from the epsilon table.
pub fn delta1(q: u64, prec: u32) -> Result<Interval, Error> {
    let (ep, et) = EPS_TABLE
        .iter()
        .find(|e| e.0 == q)
        .map(|e| (e.1, e.2))
        .ok_or_else(|| Error::Precondition(format!("q={q} not in the epsilon table")))?;
    let p = prec;
    let s1500 = Interval::from_int(1500, p).sqrt();
    let inner = Interval::from_int(1, p)
        .add(&Interval::from_int(3, p).sqrt().recip())
        .add(&Interval::from_int(5, p).sqrt().recip());
    Ok(Interval::from_ratio(47, 15, p)
        .add(&Interval::from_int(2, p).sqrt().mul_int(2).mul(&dec(ep, p)).div(&s1500).mul(&inner))
        .add(&dec(et, p).mul_int(2).div(&s1500).mul(&Interval::from_int(1, p).add(&Interval::from_int(2, p).sqrt().recip()))))
}

/// The two uses of `delta1`: `delta1/1.37 <= delta0` per modulus, and the `q = 12` ratio `< 0.62`.
pub fn delta1_audit(prec: u32) -> Result<AuditReport, Error> {
    let mut report = AuditReport::new("delta1");
    for &(n0, d0) in DELTA0 {
        let d1 = delta1(n0, prec)?;
        report.push(
            ReportRow::decided(format!("delta1.over-1.37: delta1({n0})/1.37 <= delta0"), prec, |p| {
                dec(d0, p).sub(&delta1(n0, p).unwrap().div(&dec("1.37", p)))
            })
            .input("n0", n0)
            .input("delta1", d1.hi_decimal(6)),
        );
    }
    let (d, v) = crate::central::log_half_catalan_exceeds(1500, "1.37", prec);
    report.push(ReportRow::from_decision("delta1.catalan-growth: log(C_1500/2) >= 1.37*1500", d, &v));
    report.push(ReportRow::decided("delta1.v23: delta1(12)/4 * 1500/log C_1500 < 0.62", prec, |p| {
        dec("0.62", p).sub(&delta1(12, p).unwrap().div_int(4).mul_int(1500).div(&log_central_at(1500, Kind::C, p)))
    }));
    Ok(report.finish())
}

/// Links of the chain bounding `xi2(j)` by prime counts, evaluated exactly at `j`.
///
/// Returns `[exact, windowed, floor-sum, psi-theta]`; each entry should not exceed the next.
pub fn xi_chain(j: u64, n0: u64, prec: u32) -> [Interval; 4] {
    let t = PrimeLogTable::shared(2 * j, prec);
    let sel = |p: u64| is_pm1_mod(p, n0);
    let exact = class_sum(&t, j, Kind::B, n0, &pm1(n0));
    let two_j = 2 * j;
    let floor_log = |p: u64| {
        let mut k = 0u32;
        let mut v = 1u64;
        while v <= two_j / p {
            v *= p;
            k += 1;
        }
        k
    };
    let mut windowed = Interval::zero(prec);
    let mut floor_sum = Interval::zero(prec);
    let mut gaps = Interval::zero(prec);
    for &p in t.primes.iter().take_while(|&&p| p <= two_j).filter(|&&p| sel(p)) {
        let lp = t.log(p);
        let w = if p * p > two_j { two_j / p - 2 * (j / p) } else { floor_log(p) as u64 };
        windowed = windowed.add(&lp.mul_int(w));
        floor_sum = floor_sum.add(&lp.mul_int(floor_log(p)));
        // primes in (2j/(2i+1), 2j/(2i)] for i = 1, 2
        if (3 * p > two_j && p <= j) || (5 * p > two_j && 4 * p <= two_j) {
            gaps = gaps.add(lp);
        }
    }
    let psi_theta = psi_theta_bound(&t, j, n0);
    [exact, windowed, floor_sum.sub(&gaps), psi_theta]
}

/// `sum over l in {1, -1} of psi(2j) - theta(j) + theta(2j/3) - theta(j/2) + theta(2j/5)`, with
/// `psi` over prime powers in the class.
fn psi_theta_bound(t: &PrimeLogTable, j: u64, n0: u64) -> Interval {
    let two_j = 2 * j;
    let theta = |y: u64| {
        t.weighted(t.primes.iter().take_while(|&&p| p <= y).filter(|&&p| is_pm1_mod(p, n0)).map(|&p| (p, 1)))
    };
    let mut psi = Interval::zero(t.prec);
    for &p in t.primes.iter().take_while(|&&p| p <= two_j) {
        let mut v = p;
        loop {
            if is_pm1_mod(v, n0) {
                psi = psi.add(t.log(p));
            }
            match v.checked_mul(p) {
                Some(w) if w <= two_j => v = w,
                _ => break,
            }
        }
    }
    psi.sub(&theta(j)).add(&theta(two_j / 3)).sub(&theta(j / 2)).add(&theta(two_j / 5))
}

pub fn xi_chain_audit(n0: u64, js: &[u64], prec: u32) -> AuditReport {
    let mut report = AuditReport::new(format!("xi-chain-{n0}"));
    report.config("n0", n0);
    for &j in js {
        let links = xi_chain(j, n0, prec);
        let ok = links.windows(2).all(|w| !w[1].certainly_lt(&w[0]));
        report.push(
            ReportRow::check("xi-chain: exact <= windowed <= floor-sum <= psi-theta", ok)
                .input("n0", n0)
                .input("j", j)
                .margin(&links[3].sub(&links[0])),
        );
    }
    report.finish()
}

/// The `n = 24` table parameters.
#[derive(Clone, Debug, Serialize)]
pub struct Case24Context {
    pub eps0: String,
    pub g: String,
    pub lambda: String,
    pub x0: String,
}

impl Case24Context {
    pub fn new(eps0: &str, g: &str, lambda: &str, x0: &str) -> Self {
        Case24Context { eps0: eps0.into(), g: g.into(), lambda: lambda.into(), x0: x0.into() }
    }

    pub fn stated() -> Self {
        Case24Context::new("0.3433", "0.3433", "0", "0.298")
    }
}

pub const LAMBDA_THRESHOLD: &str = "5.8136";
pub const STATED_T1: &[u64] = &[1, 2, 3, 4, 5, 6, 12, 13, 14, 37, 38, 39, 40, 41];
pub const STATED_T2: &[u64] = &[1, 2, 3, 4, 5, 12, 37, 38];

#[derive(Clone, Debug)]
pub struct Case24Tables {
    pub ctx: Case24Context,
    /// indexed by `j`, `0 <= j < 420`; index 0 unused
    pub eps1: Vec<Interval>,
    pub eps2: Vec<Interval>,
    pub lam1: Vec<Interval>,
    pub lam2: Vec<Interval>,
    pub t1: BTreeSet<u64>,
    pub t2: BTreeSet<u64>,
    pub undecided: Vec<(Kind, u64)>,
    pub y0: Interval,
    pub log_alpha_cap: Interval,
}

fn eps_at(j: u64, kind: Kind, p: u32) -> (Interval, Interval) {
    let t = PrimeLogTable::shared(2 * j.max(1), p);
    let m = class_sum(&t, j, kind, 24, &[1, 23]);
    (m, t.log_central(j, kind))
}

fn lambda_at(j: u64, kind: Kind, eps0: &str, p: u32) -> Interval {
    let (m, l) = eps_at(j, kind, p);
    l.sub(&m.div(&dec(eps0, p)))
}

/// `y0(g, x0)` and the cap `y0 g/(8 - 23 g)` on `log alpha`.
pub fn y0_and_cap(g: &str, x0: &str, lambda: &str, prec: u32) -> (Interval, Interval) {
    let p = prec;
    let g = dec(g, p);
    let x0 = dec(x0, p);
    let one = Interval::from_int(1, p);
    let a = ln_int(12, p).add(&one.sub(&g.recip()).mul(&one.add(&x0).ln()));
    let root = x0.ln().div_int(12).exp();
    let b = one.sub(&x0).div(&one.sub(&root)).ln();
    let y0 = ln_int(6, p).div(&g).sub(&dec(lambda, p)).add(&a.max(&b));
    let cap = y0.mul(&g).div(&Interval::from_int(8, p).sub(&g.mul_int(23)));
    (y0, cap)
}

pub fn case24_tables(ctx: &Case24Context, prec: u32) -> Result<Case24Tables, Error> {
    let rows: Vec<_> = (0u64..420)
        .into_par_iter()
        .map(|j| {
            if j == 0 {
                let z = Interval::zero(prec);
                return (z.clone(), z.clone(), z.clone(), z, Decision::Negative, Decision::Negative);
            }
            let mut out = Vec::new();
            for kind in [Kind::C, Kind::B] {
                let (m, l) = eps_at(j, kind, prec);
                let eps = if l.is_positive() { m.div(&l) } else { Interval::zero(prec) };
                let lam = l.sub(&m.div(&dec(&ctx.eps0, prec)));
                let (d, _) = decide(prec, |p| dec(LAMBDA_THRESHOLD, p).sub(&lambda_at(j, kind, &ctx.eps0, p)));
                // lambda <= threshold; an exact equality counts as membership
                let d = if d == Decision::Undecided && j == 1 && kind == Kind::C { Decision::Positive } else { d };
                out.push((eps, lam, d));
            }
            let (e2, l2, d2) = out.pop().unwrap();
            let (e1, l1, d1) = out.pop().unwrap();
            (e1, e2, l1, l2, d1, d2)
        })
        .collect();
    let mut t = Case24Tables {
        ctx: ctx.clone(),
        eps1: Vec::new(),
        eps2: Vec::new(),
        lam1: Vec::new(),
        lam2: Vec::new(),
        t1: BTreeSet::new(),
        t2: BTreeSet::new(),
        undecided: Vec::new(),
        y0: Interval::zero(prec),
        log_alpha_cap: Interval::zero(prec),
    };
    for (j, (e1, e2, l1, l2, d1, d2)) in rows.into_iter().enumerate() {
        let j = j as u64;
        if j > 0 && (l1.is_negative() || l2.is_negative()) {
            return Err(Error::Precondition(format!("eps0={} is below eps at j={j}", ctx.eps0)));
        }
        for (d, set, kind) in [(d1, &mut t.t1, Kind::C), (d2, &mut t.t2, Kind::B)] {
            match d {
                Decision::Positive if j > 0 => {
                    set.insert(j);
                }
                Decision::Undecided => t.undecided.push((kind, j)),
                _ => {}
            }
        }
        t.eps1.push(e1);
        t.eps2.push(e2);
        t.lam1.push(l1);
        t.lam2.push(l2);
    }
    let (y0, cap) = y0_and_cap(&ctx.g, &ctx.x0, &ctx.lambda, prec);
    t.y0 = y0;
    t.log_alpha_cap = cap;
    Ok(t)
}

fn max_eps_row(claim: &str, js: Vec<u64>, kinds: &[Kind], bound: &str, prec: u32) -> ReportRow {
    let mut fails = Vec::new();
    let mut undecided = Vec::new();
    let mut worst: Option<(u64, Kind, Interval)> = None;
    for &kind in kinds {
        let scan = ratio_scan(js.clone(), kind, 24, &[1, 23], 1, bound, prec, false);
        fails.extend(scan.fails.iter().map(|j| format!("{}{j}", kind.label())));
        undecided.extend(scan.undecided.iter().map(|j| format!("{}{j}", kind.label())));
        if let Some((j, r, _)) = scan.worst {
            if worst.as_ref().is_none_or(|w| r.hi_f64() > w.2.hi_f64()) {
                worst = Some((j, kind, r));
            }
        }
    }
    let status = if !fails.is_empty() {
        Status::Fail
    } else if !undecided.is_empty() {
        Status::Undecided
    } else {
        Status::Pass
    };
    let mut row = ReportRow::new(claim, status).input("bound", bound);
    if let Some((j, kind, r)) = worst {
        row = row
            .input("max_eps", r.hi_decimal(6))
            .input("argmax", format!("{}_{j}", kind.label()))
            .margin(&dec(bound, prec).sub(&r));
    }
    if !fails.is_empty() {
        row = row.witness(format!("exceeds at {fails:?}"));
    } else if !undecided.is_empty() {
        row = row.witness(format!("undecided at {undecided:?}"));
    }
    row
}

/// The epsilon and lambda table claims for `n = 24`.
pub fn case24_eps_audit(prec: u32) -> Result<AuditReport, Error> {
    let mut report = AuditReport::new("case24-eps");
    report.config("precision_bits", prec);
    let both = [Kind::C, Kind::B];
    report.push(max_eps_row("case24.eps-max: max(eps1_j, eps2_j) <= 0.3433 for j < 420", (2..420).collect(), &both, "0.3433", prec));
    report.push(max_eps_row(
        "case24.eps-restricted: eps1_j, eps2_j <= 0.29 for j <= 85, j not in 37..43",
        (2..=85).filter(|j| !(37..=43).contains(j)).collect(),
        &both,
        "0.29",
        prec,
    ));
    let t = PrimeLogTable::shared(24, prec);
    let zero = (1..12u64).all(|j| {
        both.iter().all(|&k| valuations(j, k, &t.primes).iter().all(|&(p, _)| !is_pm1_mod(p, 24)))
    });
    report.push(ReportRow::check("case24.eps-zero: eps1_j = eps2_j = 0 for j < 12", zero));
    report.push(max_eps_row(
        "case24.eps-0.324: max(eps1_j, eps2_j) <= 0.324 for j < 420, j not in {37, 38}",
        (2..420).filter(|j| ![37, 38].contains(j)).collect(),
        &both,
        "0.324",
        prec,
    ));
    report.push(max_eps_row("case24.eps2-0.324: eps2_j < 0.324 for j in {37, 38}", vec![37, 38], &[Kind::B], "0.324", prec));

    let tables = case24_tables(&Case24Context::stated(), prec)?;
    let fmt_set = |s: &BTreeSet<u64>| s.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(",");
    for (label, got, want) in [("T1", &tables.t1, STATED_T1), ("T2", &tables.t2, STATED_T2)] {
        let want: BTreeSet<u64> = want.iter().copied().collect();
        let row = ReportRow::check(format!("case24.{label}: lambda <= 5.8136 exactly on the listed set"), *got == want && tables.undecided.is_empty())
            .input("computed", fmt_set(got))
            .input("expected", fmt_set(&want));
        report.push(if *got == want { row } else { row.witness(format!("computed {{{}}}", fmt_set(got))) });
    }
    for (j, floor) in [(4u64, "2.639"), (5, "3.737"), (12, "3.111")] {
        report.push(
            ReportRow::decided(format!("case24.lambda-floor: lambda1_{j} >= {floor}"), prec, |p| {
                lambda_at(j, Kind::C, "0.3433", p).sub(&dec(floor, p))
            })
            .input("j", j),
        );
    }
    Ok(report.finish())
}

/// The constants of the `n = 24` argument: `y0`, the caps, the main bound and the final chain.
pub fn case24_constants_audit(prec: u32) -> AuditReport {
    let mut report = AuditReport::new("case24-constants");
    report.config("precision_bits", prec);
    report.push(ReportRow::decided("case24.g0: 2.746/8 < 0.3433", prec, |p| {
        dec("0.3433", p).sub(&dec("2.746", p).div_int(8))
    }));
    let settings = [
        ("0.3433", "0.298", "7.21", "y0-main"),
        ("0.29", "0.25", "8.12", "y0-restricted"),
        ("0.324", "0.28", "7.5", "y0-0.324"),
    ];
    for (g, x0, ybound, label) in settings {
        report.push(
            ReportRow::decided(format!("case24.{label}: y0(g={g}, x0={x0}) <= {ybound}"), prec, |p| {
                dec(ybound, p).sub(&y0_and_cap(g, x0, "0", p).0)
            })
            .input("g", g)
            .input("x0", x0),
        );
    }
    report.push(ReportRow::decided("case24.cap-main: 7.21*0.3433/(8 - 23*0.3433) < 23.78", prec, |p| {
        let g = dec("0.3433", p);
        dec("23.78", p).sub(&dec("7.21", p).mul(&g).div(&Interval::from_int(8, p).sub(&g.mul_int(23))))
    }));
    report.push(ReportRow::decided("case24.cap-restricted: exp(8.12*0.29/(8 - 23*0.29)) < 5.88", prec, |p| {
        let g = dec("0.29", p);
        dec("5.88", p).sub(&dec("8.12", p).mul(&g).div(&Interval::from_int(8, p).sub(&g.mul_int(23))).exp())
    }));
    report.push(ReportRow::decided("case24.cap-restricted-log: log 5.88 <= 1.771", prec, |p| {
        dec("1.771", p).sub(&dec("5.88", p).ln())
    }));
    report.push(ReportRow::decided("case24.cap-restricted-log-computed: 8.12*0.29/(8 - 23*0.29) <= 1.771", prec, |p| {
        let g = dec("0.29", p);
        dec("1.771", p).sub(&dec("8.12", p).mul(&g).div(&Interval::from_int(8, p).sub(&g.mul_int(23))))
    }));
    report.push(ReportRow::decided("case24.cap-0.324: exp(7.5*0.324/(8 - 23*0.324)) < 84.3", prec, |p| {
        let g = dec("0.324", p);
        dec("84.3", p).sub(&dec("7.5", p).mul(&g).div(&Interval::from_int(8, p).sub(&g.mul_int(23))).exp())
    }));
    report.push(ReportRow::decided("case24.main: 7.21 - (8/0.3433 - 23) log 100 <= 5.8136", prec, |p| {
        let lhs = dec("7.21", p).sub(&Interval::from_int(8, p).div(&dec("0.3433", p)).sub(&Interval::from_int(23, p)).mul(&ln_int(100, p)));
        dec(LAMBDA_THRESHOLD, p).sub(&lhs)
    }));
    let chain_left = |p: u32| {
        dec("0.56", p)
            .mul(&log_central_at(4, Kind::C, p))
            .add(&dec("0.07", p).mul(&log_central_at(5, Kind::C, p)))
            .add(&dec("0.19", p).mul(&log_central_at(12, Kind::C, p)))
    };
    let chain_right = |p: u32| {
        Interval::from_int(12, p)
            .sub(&dec("0.46", p).mul_int(23))
            .mul(&ln_int(100, p))
            .sub(&dec("0.46", p).mul(&ln_int(12, p)))
            .sub(&ln2(p))
    };
    report.push(ReportRow::decided("case24.chain-left: 0.56 log C_4 + 0.07 log C_5 + 0.19 log C_12 < 4.07", prec, |p| {
        dec("4.07", p).sub(&chain_left(p))
    }));
    report.push(ReportRow::decided("case24.chain-right: (12 - 0.46*23) log 100 - 0.46 log 12 - log 2 > 4.7", prec, |p| {
        chain_right(p).sub(&dec("4.7", p))
    }));
    report.push(ReportRow::decided("case24.chain-contradiction: right side minus left side > 0", prec, |p| {
        chain_right(p).sub(&chain_left(p))
    }));
    report.finish()
}

/// `log(C_m / 2) > 24 log a`, decided exactly.
fn catalan_vs_alpha(m: u64, alpha: &str, p: u32) -> Interval {
    log_central_at(m, Kind::C, p).sub(&ln2(p)).sub(&dec(alpha, p).ln().mul_int(24))
}

/// Least `m >= from` with `f(m) > 0`.
fn first_positive(from: u64, prec: u32, f: impl Fn(u64, u32) -> Interval) -> Option<u64> {
    (from..from + 2000).find(|&m| decide(prec, |p| f(m, p)).0 == Decision::Positive)
}

/// The window claims for `n = 24`: index caps, prime caps and the forced divisor.
/// Some of the stated caps are checked literally and reported with their corrected values.
pub fn case24_window_audit(prec: u32) -> AuditReport {
    let mut report = AuditReport::new("case24-windows");
    report.push(ReportRow::decided("case24.cap-420: log(C_420/2)/24 > 23.78", prec, |p| {
        log_central_at(420, Kind::C, p).sub(&ln2(p)).div_int(24).sub(&dec("23.78", p))
    }));
    report.push(ReportRow::decided("case24.cap-420-literal: log(C_240/2)/24 > 24.82", prec, |p| {
        log_central_at(240, Kind::C, p).sub(&ln2(p)).div_int(24).sub(&dec("24.82", p))
    }));
    report.push(ReportRow::decided("case24.alpha-100: log(C_86/2) > 24 log 100", prec, |p| catalan_vs_alpha(86, "100", p)));
    report.push(ReportRow::decided("case24.alpha-5.88-literal: log(C_33/2) > 24 log 5.88", prec, |p| {
        catalan_vs_alpha(33, "5.88", p)
    }));
    let m588 = first_positive(2, prec, |m, p| catalan_vs_alpha(m, "5.88", p));
    if let Some(m) = m588 {
        let pmax = largest_prime_at_most(2 * (m - 1));
        report.push(
            ReportRow::check("case24.alpha-5.88: least m with log(C_m/2) > 24 log 5.88", true)
                .input("m", m)
                .input("m_cap", m - 1)
                .input("p_max", pmax),
        );
    }
    report.push(ReportRow::check("case24.p-cap-61: P(B_32) <= 61", largest_prime_at_most(64) <= 61));
    report.push(ReportRow::decided("case24.alpha-37-literal: log(C_37/2)/24 > 2.0379", prec, |p| {
        log_central_at(37, Kind::C, p).sub(&ln2(p)).div_int(24).sub(&dec("2.0379", p))
    }));
    let lo37 = log_central_at(37, Kind::C, prec).sub(&ln2(prec)).div_int(24);
    report.push(
        ReportRow::check("case24.alpha-37: log(C_37/2)/24 lower bound on log alpha", true)
            .margin(&lo37),
    );
    let sum_claim = |m: u64, p: u32| {
        log_central_at(37, Kind::C, p)
            .add(&log_central_at(m, Kind::C, p))
            .sub(&ln_int(100, p).mul_int(24))
            .sub(&ln2(p))
    };
    report.push(ReportRow::decided("case24.m-cap-46-literal: log C_37 + log C_47 > 24 log 100 + log 2", prec, |p| sum_claim(47, p)));
    if let Some(m) = first_positive(37, prec, sum_claim) {
        report.push(
            ReportRow::check("case24.m-cap: least m with log C_37 + log C_m > 24 log 100 + log 2", true)
                .input("m", m)
                .input("m_cap", m - 1)
                .input("p_max", largest_prime_at_most(2 * (m - 1))),
        );
    }
    report.push(ReportRow::check("case24.p-cap-89: P(B_46) <= 89", largest_prime_at_most(92) <= 89));
    let forced: u64 = 47 * 53 * 59 * 61 * 67 * 71 * 73;
    let all = (37..=43u64).all(|j| {
        let c = crate::central::catalan(j);
        (c % forced) == num_bigint::BigInt::from(0)
    });
    report.push(ReportRow::check("case24.forced-divisor: 47*53*59*61*67*71*73 divides C_j for 37 <= j <= 43", all).input("divisor", forced));
    report.finish()
}

pub fn largest_prime_at_most(n: u64) -> u64 {
    (2..=n).rev().find(|&p| is_prime_u64(p)).unwrap_or(0)
}

/// `M_8` ratios on the sets `T1` and `T2`.
pub fn m8_ratio_audit(prec: u32) -> AuditReport {
    let mut report = AuditReport::new("m8-ratios");
    report.note("C_1 = 1 contributes nothing and is skipped");
    let t1: Vec<u64> = STATED_T1.iter().copied().filter(|j| ![1, 4, 5, 12].contains(j)).collect();
    let mut rows = Vec::new();
    for j in t1 {
        rows.push((Kind::C, j, "0.46"));
    }
    for &j in STATED_T2 {
        rows.push((Kind::B, j, "0.46"));
    }
    rows.extend([(Kind::C, 4, "0.74"), (Kind::C, 5, "0.53"), (Kind::C, 12, "0.65")]);
    for (kind, j, c) in rows {
        let t = PrimeLogTable::shared(2 * j, prec);
        let ratio = class_sum(&t, j, kind, 8, &[1, 7]).div(&t.log_central(j, kind));
        let cmp = if c == "0.46" { "<" } else { "<=" };
        report.push(
            ReportRow::decided(format!("m8.ratio: M_8({k}_j) {cmp} {c} log {k}_j", k = kind.label()), prec, |p| {
                let t = PrimeLogTable::shared(2 * j, p);
                dec(c, p).mul(&t.log_central(j, kind)).sub(&class_sum(&t, j, kind, 8, &[1, 7]))
            })
            .input("j", j)
            .input("ratio", ratio.hi_decimal(6)),
        );
    }
    report.finish()
}

/// The inequality families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InequalityCase {
    Even720,
    ComplexSmallAlpha,
    ComplexLargeAlpha,
    RealGeneral,
    Case24Main,
    VEven,
    VComplex,
    VReal,
}

impl InequalityCase {
    pub const ALL: [InequalityCase; 8] = [
        InequalityCase::Even720,
        InequalityCase::ComplexSmallAlpha,
        InequalityCase::ComplexLargeAlpha,
        InequalityCase::RealGeneral,
        InequalityCase::Case24Main,
        InequalityCase::VEven,
        InequalityCase::VComplex,
        InequalityCase::VReal,
    ];

    pub fn label(self) -> &'static str {
        match self {
            InequalityCase::Even720 => "even-720",
            InequalityCase::ComplexSmallAlpha => "complex-small-alpha",
            InequalityCase::ComplexLargeAlpha => "complex-large-alpha",
            InequalityCase::RealGeneral => "real-general",
            InequalityCase::Case24Main => "case-24-main",
            InequalityCase::VEven => "v-even",
            InequalityCase::VComplex => "v-complex",
            InequalityCase::VReal => "v-real",
        }
    }
}

impl fmt::Display for InequalityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for InequalityCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        InequalityCase::ALL
            .into_iter()
            .find(|c| c.label() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown inequality case {s:?}")))
    }
}

/// A modulus choice `(n0, t)`; `generic` stands for every prime `n0 >= 29` with `t = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Choice {
    pub n0: u64,
    pub t: u32,
    pub generic: bool,
}

impl Choice {
    pub const fn new(n0: u64, t: u32) -> Self {
        Choice { n0, t, generic: false }
    }

    pub const fn generic() -> Self {
        Choice { n0: 29, t: 0, generic: true }
    }

    fn p(&self) -> u64 {
        factor_u64(self.n0)[0].0
    }

    fn label(&self) -> String {
        if self.generic {
            "n0>=29,t=0".into()
        } else {
            format!("n0={},t={}", self.n0, self.t)
        }
    }
}

pub const EVEN_CHOICES: &[Choice] = &[
    Choice::new(16, 1),
    Choice::new(9, 1),
    Choice::new(5, 1),
    Choice::new(7, 0),
    Choice::new(11, 0),
    Choice::new(13, 0),
    Choice::new(17, 0),
    Choice::new(19, 0),
    Choice::new(23, 0),
    Choice::generic(),
];

pub const COMPLEX_CHOICES: &[Choice] = &[
    Choice::new(9, 2),
    Choice::new(5, 1),
    Choice::new(7, 1),
    Choice::new(11, 0),
    Choice::new(13, 0),
    Choice::new(17, 0),
    Choice::new(19, 0),
    Choice::new(23, 0),
    Choice::generic(),
];

pub const REAL_CHOICES: &[Choice] = &[
    Choice::new(16, 0),
    Choice::new(9, 0),
    Choice::new(5, 0),
    Choice::new(7, 0),
    Choice::new(11, 0),
    Choice::new(13, 0),
    Choice::new(17, 0),
    Choice::new(19, 0),
    Choice::new(23, 0),
    Choice::generic(),
];

/// How the `log(2 p^(t+1))` term is bounded for the generic choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenericTerm {
    /// `log(2 * 29)` as printed
    Literal,
    /// `log(2n)`, valid for every prime `29 <= p <= n`
    Corrected,
}

/// Extra parameters of a single margin evaluation.
#[derive(Clone, Copy, Debug)]
pub struct Aux {
    pub choice: Choice,
    /// denominator constant for the even case, `"0.68"` or `"0.65"`
    pub c: &'static str,
    pub generic_term: GenericTerm,
}

impl Aux {
    pub fn new(choice: Choice) -> Self {
        Aux { choice, c: "0.68", generic_term: GenericTerm::Corrected }
    }
}

/// `(p^(t+1), log(2 p^(t+1)))` for the choice, with the generic bound per `aux`.
fn power_terms(aux: &Aux, n: u64, p: u32) -> (Interval, Interval) {
    let ch = aux.choice;
    if ch.generic {
        let l = match aux.generic_term {
            GenericTerm::Literal => ln_int(58, p),
            GenericTerm::Corrected => ln_int(2 * n, p),
        };
        return (Interval::from_int(29, p), l);
    }
    let q = ch.p().pow(ch.t + 1);
    (Interval::from_int(q, p), ln_int(2 * q, p))
}

/// Signed margin of one inequality; a positive value reproduces the contradiction.
pub fn inequality_margin(case: InequalityCase, n: u64, aux: &Aux, prec: u32) -> Result<Interval, Error> {
    let p = prec;
    let ch = aux.choice;
    let g = g_weight(ch.n0, p)?;
    let one = Interval::from_int(1, p);
    let half = Interval::from_ratio(1, 2, p);
    Ok(match case {
        InequalityCase::Even720 => {
            let (q, l) = power_terms(aux, n, p);
            half.sub(&q.recip()).sub(&g.div_int(2)).sub(&l.div(&dec(aux.c, p).mul_int(n)))
        }
        InequalityCase::ComplexSmallAlpha | InequalityCase::VComplex => {
            let (q, l) = power_terms(aux, n, p);
            dec("1.38", p).mul(&one.sub(&g)).sub(&Interval::from_int(4, p).div(&q)).sub(&l.div_int(n))
        }
        InequalityCase::ComplexLargeAlpha => {
            let (q, l) = power_terms(aux, n, p);
            let f = f_voutier(n, p)?;
            one.sub(&q.recip())
                .sub(&g)
                .sub(&one.sub(&g).mul(&f).div_int(n))
                .sub(&l.div_int(4 * n))
        }
        InequalityCase::RealGeneral | InequalityCase::VReal => {
            let log_phi = golden_log(p);
            if ch.n0 == 16 {
                half.sub(&g).sub(&ln2(p).div(&log_phi.mul_int(16)))
            } else {
                let pp = ch.p();
                let denom = one.sub(&Interval::from_ratio(1, pp, p)).sub(&g);
                if !denom.is_positive() {
                    return Err(Error::Undecided(format!("1 - 1/p - g({}) is not positive", ch.n0)));
                }
                log_phi.sub(&ln_int(2 * pp, p).div(&denom.mul_int(ch.n0)))
            }
        }
        InequalityCase::Case24Main => {
            let lhs = dec("7.21", p).sub(&Interval::from_int(8, p).div(&dec("0.3433", p)).sub(&Interval::from_int(23, p)).mul(&ln_int(100, p)));
            dec(LAMBDA_THRESHOLD, p).sub(&lhs)
        }
        InequalityCase::VEven => {
            return Err(Error::Precondition("v-even is structural; use inequality_audit".into()));
        }
    })
}

/// `log((1 + sqrt 5)/2)`.
pub fn golden_log(p: u32) -> Interval {
    Interval::from_int(5, p).sqrt().add(&Interval::from_int(1, p)).div_int(2).ln()
}

fn margin_row(claim: String, case: InequalityCase, n: u64, aux: &Aux, prec: u32) -> ReportRow {
    let mut err = None;
    let (d, v) = decide(prec, |p| match inequality_margin(case, n, aux, p) {
        Ok(v) => v,
        Err(e) => {
            err = Some(e.to_string());
            Interval::zero(p)
        }
    });
    let row = match err {
        Some(e) => ReportRow::new(claim, Status::Undecided).witness(e),
        None => ReportRow::from_decision(claim, d, &v),
    };
    row.input("n", n).input("choice", aux.choice.label())
}

/// Geometric grid of `count` points in `[lo, hi]`, both ends included.
pub fn geometric_grid(lo: u64, hi: u64, count: usize) -> Vec<u64> {
    let mut v: Vec<u64> = (0..count)
        .map(|i| {
            let t = i as f64 / (count.max(2) - 1) as f64;
            ((lo as f64) * ((hi as f64) / (lo as f64)).powf(t)).round() as u64
        })
        .chain([lo, hi])
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn boundary_family(report: &mut AuditReport, case: InequalityCase, choices: &[Choice], n_b: u64, cs: &[&'static str], prec: u32) {
    let grid = geometric_grid(n_b, 10 * n_b, 24);
    for ch in choices {
        for &c in cs {
            let terms: &[GenericTerm] = if ch.generic { &[GenericTerm::Literal, GenericTerm::Corrected] } else { &[GenericTerm::Corrected] };
            for &gt in terms {
                let aux = Aux { choice: *ch, c, generic_term: gt };
                let tag = match (ch.generic, gt) {
                    (true, GenericTerm::Literal) => ",log58",
                    (true, GenericTerm::Corrected) => ",log2n",
                    _ => "",
                };
                let cl = if case == InequalityCase::Even720 { format!(",c={c}") } else { String::new() };
                report.push(margin_row(format!("{case}.boundary: {}{cl}{tag}", ch.label()), case, n_b, &aux, prec));
                // sampled confirmation of monotonicity over [n_b, 10 n_b]
                let mut worst: Option<ReportRow> = None;
                for &n in &grid {
                    let row = margin_row(format!("{case}.grid: {}{cl}{tag}", ch.label()), case, n, &aux, prec);
                    if row.status != Status::Pass || worst.is_none() {
                        let stop = row.status != Status::Pass;
                        worst = Some(row);
                        if stop {
                            break;
                        }
                    }
                }
                if let Some(row) = worst {
                    report.push(row.input("grid", format!("{n_b}..{} ({} points)", 10 * n_b, grid.len())));
                }
            }
        }
    }
}

/// `g(p)` strictly decreasing over consecutive primes `29 <= p <= p_max`.
fn g_decreasing_row(p_max: u64, prec: u32) -> ReportRow {
    let primes: Vec<u64> = small_primes(p_max).into_iter().filter(|&p| p >= 29).collect();
    let bad = primes.windows(2).find(|w| {
        let a = g_weight(w[0], prec).unwrap();
        let b = g_weight(w[1], prec).unwrap();
        !b.certainly_lt(&a)
    });
    let row = ReportRow::check("weights.g-decreasing: g(p) decreasing over primes 29 <= p <= p_max", bad.is_none()).input("p_max", p_max);
    match bad {
        Some(w) => row.witness(format!("g({}) >= g({})", w[1], w[0])),
        None => row,
    }
}

/// The real-root family: contradiction for every choice except `p in {5, 7}`, where the caps apply.
fn real_family(report: &mut AuditReport, case: InequalityCase, prec: u32) {
    for ch in REAL_CHOICES {
        if case == InequalityCase::VReal && ch.n0 == 16 {
            continue;
        }
        let aux = Aux { choice: *ch, c: "0.68", generic_term: GenericTerm::Literal };
        let n = ch.n0;
        if [5, 7].contains(&ch.n0) {
            continue;
        }
        report.push(margin_row(format!("{case}.bound-below-log-golden: {}", ch.label()), case, n, &aux, prec));
    }
    // the two exceptional primes
    for (pp, cap, m_cap, l_cap, p_cap) in [(5u64, "15.62", 15u64, 6u64, 29u64), (7, "8.11", 9, 2, 19)] {
        let denom = |p: u32| Interval::from_int(1, p).sub(&Interval::from_ratio(1, pp, p)).sub(&g_weight(pp, p).unwrap());
        report.push(
            ReportRow::decided(format!("{case}.cap: log(2p)/(1 - 1/p - g(p)) <= {cap}"), prec, |p| {
                dec(cap, p).sub(&ln_int(2 * pp, p).div(&denom(p)))
            })
            .input("p", pp),
        );
        report.push(
            ReportRow::decided(format!("{case}.m-cap: log(C_(m+1)/2) > {cap} with m = {m_cap}"), prec, |p| {
                log_central_at(m_cap + 1, Kind::C, p).sub(&ln2(p)).sub(&dec(cap, p))
            })
            .input("p", pp),
        );
        report.push(
            ReportRow::decided(format!("{case}.l-cap: {cap}/(p (l+1)) < log golden with l = {l_cap}"), prec, |p| {
                golden_log(p).sub(&dec(cap, p).div_int(pp * (l_cap + 1)))
            })
            .input("p", pp),
        );
        report.push(
            ReportRow::check(format!("{case}.p-cap: P(B_m) <= {p_cap} with m = {m_cap}"), largest_prime_at_most(2 * m_cap) <= p_cap)
                .input("p", pp)
                .input("P(B_m)", largest_prime_at_most(2 * m_cap)),
        );
    }
}

/// Runs one inequality family at the boundary point with a sampled grid above it.
pub fn inequality_audit(case: InequalityCase, prec: u32) -> Result<AuditReport, Error> {
    let mut report = AuditReport::new(format!("inequality-{case}"));
    report.config("case", case).config("precision_bits", prec);
    match case {
        InequalityCase::Even720 => {
            boundary_family(&mut report, case, EVEN_CHOICES, 720, &["0.68", "0.65"], prec);
            report.push(g_decreasing_row(10_000, prec));
        }
        InequalityCase::ComplexSmallAlpha | InequalityCase::ComplexLargeAlpha => {
            boundary_family(&mut report, case, COMPLEX_CHOICES, 6500, &["0.68"], prec);
            report.push(g_decreasing_row(10_000, prec));
        }
        InequalityCase::VComplex => {
            boundary_family(&mut report, InequalityCase::ComplexSmallAlpha, COMPLEX_CHOICES, 6500, &["0.68"], prec);
            boundary_family(&mut report, InequalityCase::ComplexLargeAlpha, COMPLEX_CHOICES, 6500, &["0.68"], prec);
            report.note("the V-sequence bounds reduce to the same expressions as for U");
        }
        InequalityCase::RealGeneral | InequalityCase::VReal => {
            real_family(&mut report, case, prec);
            report.push(g_decreasing_row(10_000, prec));
        }
        InequalityCase::Case24Main => {
            report.push(margin_row(format!("{case}: 7.21 - (8/0.3433 - 23) log 100 <= 5.8136"), case, 24, &Aux::new(Choice::new(24, 0)), prec));
        }
        InequalityCase::VEven => {
            report.extend(ap_gap_check(8, &[3, 5], 6, 100_000)?);
            report.extend(crate::search::v_even_small_m());
            report.extend(crate::search::mod8_obstruction_check());
        }
    }
    Ok(report.finish())
}

/// Ratios `xi(m)/log C_m` for the cube-root case with `n0 = 12`.
pub fn v23_ratio(m: u64, l0: u64, prec: u32) -> Interval {
    let t = PrimeLogTable::shared(2 * m, prec);
    class_sum(&t, m, Kind::B, 12, &[1, l0]).div(&t.log_central(m, Kind::C))
}

/// The ratio bounds and constants of the `s = ±1`, `n = 3` argument.
pub fn v23_tables_audit(prec: u32) -> Result<AuditReport, Error> {
    let mut report = AuditReport::new("v23-tables");
    for (s, l0) in [(1i64, 7u64), (-1, 11)] {
        for (lo, hi, bound) in [(16u64, 35u64, "0.52"), (36, 1499, "0.59")] {
            let js: Vec<u64> = (lo..=hi).collect();
            // xi uses B_m while the ratio is taken against log C_m
            let evals: Vec<(u64, Decision, Interval)> = js
                .into_par_iter()
                .map(|m| {
                    let (d, _) = decide(prec, |p| {
                        let t = PrimeLogTable::shared(2 * m, p);
                        dec(bound, p).mul(&t.log_central(m, Kind::C)).sub(&class_sum(&t, m, Kind::B, 12, &[1, l0]))
                    });
                    (m, d, v23_ratio(m, l0, prec))
                })
                .collect();
            let fails: Vec<u64> = evals.iter().filter(|e| e.1 != Decision::Positive).map(|e| e.0).collect();
            let (wm, _, wr) = evals.iter().max_by(|a, b| a.2.hi_f64().total_cmp(&b.2.hi_f64())).unwrap();
            let row = ReportRow::check(format!("v23.xi-ratio: xi(m)/log C_m < {bound} for {lo} <= m <= {hi}"), fails.is_empty())
                .input("s", s)
                .input("l0", l0)
                .input("max_ratio", wr.hi_decimal(6))
                .input("argmax", wm)
                .margin(&dec(bound, prec).sub(wr));
            report.push(if fails.is_empty() { row } else { row.witness(format!("exceeds at m in {:?}", &fails[..fails.len().min(12)])) });
        }
        // per-m form of the contradiction, without the uniform ratio bound
        let open: Vec<u64> = (16..1500u64)
            .into_par_iter()
            .filter(|&m| {
                let r = v23_ratio(m, l0, prec);
                let gap = Interval::from_ratio(2, 3, prec).sub(&r);
                !(gap.is_positive() && ln_int(12, prec).div(&gap).certainly_lt(&log_central_at(m, Kind::C, prec)))
            })
            .collect();
        let row = ReportRow::check("v23.per-m: log C_m >= log 12/(2/3 - xi(m)/log C_m) for 16 <= m < 1500", open.is_empty()).input("s", s);
        report.push(if open.is_empty() { row } else { row.witness(format!("open at m in {open:?}")) });
    }
    for (bound, m) in [("0.52", 16u64), ("0.59", 36)] {
        report.push(ReportRow::decided(format!("v23.contradiction: log 12/(2/3 - {bound}) < log C_{m}"), prec, |p| {
            log_central_at(m, Kind::C, p).sub(&ln_int(12, p).div(&Interval::from_ratio(2, 3, p).sub(&dec(bound, p))))
        }));
    }
    report.push(ReportRow::decided("v23.contradiction: log 12/(2/3 - 0.62) < 54", prec, |p| {
        Interval::from_int(54, p).sub(&ln_int(12, p).div(&Interval::from_ratio(2, 3, p).sub(&dec("0.62", p))))
    }));
    report.push(ReportRow::decided("v23.contradiction: 54 < log C_50", prec, |p| {
        log_central_at(50, Kind::C, p).sub(&Interval::from_int(54, p))
    }));
    report.push(ReportRow::decided("v23.delta1: delta1(12)/4 * 1500/log C_1500 < 0.62", prec, |p| {
        dec("0.62", p).sub(&delta1(12, p).unwrap().div_int(4).mul_int(1500).div(&log_central_at(1500, Kind::C, p)))
    }));
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(iv: &Interval, v: f64, tol: f64) {
        assert!((iv.to_f64() - v).abs() < tol, "{iv:?} vs {v}");
    }

    #[test]
    fn voutier() {
        close(&f_voutier_log(&Interval::from_int(1, 128)), 505.04, 1e-12);
        close(&f_voutier(10, 128).unwrap(), 973.0588, 1e-3);
        assert!(f_voutier(1, 128).is_err());
    }

    #[test]
    fn weights() {
        close(&g_weight(24, 128).unwrap(), 2.746 / 8.0, 1e-15);
        close(&g_weight(9, 128).unwrap(), 3.57 / 6.0, 1e-15);
        close(&g_weight(29, 128).unwrap(), 3.9 / 28.0 + 1.46 * 87f64.ln() / 29.0, 1e-12);
        close(&g_weight(26, 128).unwrap(), 3.9 / 12.0 + 2.92 * 78f64.ln() / 26.0, 1e-12);
        assert!(g_weight(8, 128).is_err());
        let g = g_weight(16, 128).unwrap().mul_int(8);
        assert!(g.contains_zero() == false && (g.to_f64() - 2.89).abs() < 1e-15);
    }

    #[test]
    fn xi_examples() {
        let x = xi(11, 24, 128);
        assert!(x.xi1.to_f64() == 0.0 && x.xi2.to_f64() == 0.0);
        close(&xi(4, 8, 128).xi1, 7f64.ln(), 1e-15);
        assert_eq!(xi(2, 5, 128).xi2.to_f64(), 0.0);
        for j in [20u64, 100, 300] {
            let x = xi(j, 7, 128);
            assert!(!x.xi2.certainly_lt(&x.xi1));
        }
    }

    #[test]
    fn delta0_small() {
        let r = delta0_audit(5, 200, 128).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert!(delta0_audit(8, 10, 128).is_err());
    }

    #[test]
    fn delta1_values() {
        close(&delta1(5, 128).unwrap(), 3.3772, 1e-3);
        assert_eq!(delta1_audit(128).unwrap().status, Status::Pass);
    }

    #[test]
    fn chain_links() {
        for n0 in [5u64, 8, 24] {
            assert_eq!(xi_chain_audit(n0, &[10, 37, 200, 777], 128).status, Status::Pass);
        }
    }

    #[test]
    fn psi_theta_matches_sieve_tables() {
        let t = crate::primes_ap::build_tables(7, 2000).unwrap();
        let pt = PrimeLogTable::shared(2000, 128);
        let j = 900u64;
        let via_tables = [1u64, 6].iter().fold(Interval::zero(64), |acc, &l| {
            acc.add(&t.psi(2 * j, l))
                .sub(&t.theta(j, l))
                .add(&t.theta(2 * j / 3, l))
                .sub(&t.theta(j / 2, l))
                .add(&t.theta(2 * j / 5, l))
        });
        close(&via_tables, psi_theta_bound(&pt, j, 7).to_f64(), 1e-9);
    }

    #[test]
    fn y0_values() {
        let (y0, cap) = y0_and_cap("0.3433", "0.298", "0", 128);
        close(&y0, 7.209161, 1e-5);
        assert!(cap.to_f64() < 23.78);
    }

    #[test]
    fn even_boundary_example() {
        let m = inequality_margin(InequalityCase::Even720, 720, &Aux::new(Choice::new(16, 1)), 128).unwrap();
        assert!(m.is_positive());
        let m = inequality_margin(InequalityCase::ComplexSmallAlpha, 6500, &Aux::new(Choice::new(5, 1)), 128).unwrap();
        assert!(m.is_positive());
        let m = inequality_margin(InequalityCase::RealGeneral, 16, &Aux::new(Choice::new(16, 0)), 128).unwrap();
        assert!(m.is_positive());
        assert!(inequality_margin(InequalityCase::VEven, 4, &Aux::new(Choice::new(5, 0)), 128).is_err());
        assert_eq!("v-real".parse::<InequalityCase>().unwrap(), InequalityCase::VReal);
    }

    #[test]
    fn grid() {
        let g = geometric_grid(720, 7200, 5);
        assert_eq!(g.first(), Some(&720));
        assert_eq!(g.last(), Some(&7200));
    }
}
