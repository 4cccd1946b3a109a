//! Named runs: every `verify`, `search`, `pell`, `pbc` and `tables` command as one report.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::bounds::{
    case24_constants_audit, case24_eps_audit, case24_tables, case24_window_audit, delta0_audit, delta1_audit,
    inequality_audit, m8_ratio_audit, v23_tables_audit, weight_table, xi_chain_audit, Case24Context, InequalityCase,
    DELTA0,
};
use crate::central::{
    growth_monotonicity_check, log_half_catalan_exceeds, stirling_log_interval, weighted_log_bound_check, Kind,
    PrimeLogTable,
};
use crate::cyclotomic::{
    m_log_sum_u, m_log_sum_v, m_lower_bound_u, m_lower_bound_v, modulus_shape, telescoping_sides, ModulusShape,
    Telescope,
};
use crate::interval::{ln2, Interval};
use crate::lucas::{bhv_exception_table, is_bhv_exception, LucasParams, SeqKind, SequencePair, BHV_EXCEPTIONS};
use crate::plan::{SearchPlan, Window};
use crate::primes_ap::{ap_gap_check, bt_audit, combined_estimate_audit, rr_audit, EPS_TABLE};
use crate::report::{AuditReport, ReportRow, Status};
use crate::search::{
    enumerate_rs, literal_minus_bracket_holds, pbc_decompose, pell_holds, pell_scan, reverify_hit, scan_u, scan_v,
    v23_root_scan, v23_scan, PbcOptions, PellForm, ScanHit, V23Hit,
};
use crate::Error;

/// Caps and precision shared by all runs; `None` means the run's own default.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub precision_bits: u32,
    pub j_max: Option<u64>,
    pub y_max: Option<u64>,
    pub d_max: Option<u64>,
    pub n_max: Option<u64>,
    pub m_max: Option<u64>,
    pub m_min: Option<u64>,
    pub plan: SearchPlan,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            precision_bits: 128,
            j_max: None,
            y_max: None,
            d_max: None,
            n_max: None,
            m_max: None,
            m_min: None,
            plan: SearchPlan::builtin(),
        }
    }
}

impl RunOptions {
    pub fn validate(&self) -> Result<(), Error> {
        if !(64..=1024).contains(&self.precision_bits) {
            return Err(Error::Precondition(format!("precision_bits must lie in [64, 1024], got {}", self.precision_bits)));
        }
        let caps = [
            ("j_max", self.j_max),
            ("y_max", self.y_max),
            ("d_max", self.d_max),
            ("n_max", self.n_max),
            ("m_max", self.m_max),
            ("m_min", self.m_min),
        ];
        for (name, v) in caps {
            if v == Some(0) {
                return Err(Error::Precondition(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    fn echo(&self, report: &mut AuditReport, keys: &[(&str, u64)]) {
        report.config("precision_bits", self.precision_bits);
        for (k, v) in keys {
            report.config(k, v);
        }
    }
}

macro_rules! named_enum {
    ($name:ident { $($variant:ident => $label:literal),+ $(,)? }) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn label(self) -> &'static str {
                match self {
                    $($name::$variant => $label),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.label())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, String> {
                $name::ALL
                    .iter()
                    .copied()
                    .find(|v| v.label() == s)
                    .ok_or_else(|| {
                        let names: Vec<&str> = $name::ALL.iter().map(|v| v.label()).collect();
                        format!("unknown {} {s:?}; expected one of {}", stringify!($name).to_lowercase(), names.join(", "))
                    })
            }
        }
    };
}

named_enum!(Lemma {
    M14 => "m14",
    Pix => "pix",
    Rr => "rr",
    Gaps => "gaps",
    Mnbd => "mnbd",
    Lemma1Grid => "lemma1-grid",
    Case24 => "case24",
    V23Tables => "v23-tables",
});

named_enum!(Case {
    Even720 => "even-720",
    Real57 => "real-57",
    N24 => "n24",
    VCases => "v-cases",
    V23 => "v23",
});

pub fn verify(lemma: Lemma, o: &RunOptions) -> Result<AuditReport, Error> {
    o.validate()?;
    let report = match lemma {
        Lemma::M14 => verify_m14(o)?,
        Lemma::Pix => verify_pix(o)?,
        Lemma::Rr => verify_rr(o)?,
        Lemma::Gaps => verify_gaps(o)?,
        Lemma::Mnbd => verify_mnbd(o)?,
        Lemma::Lemma1Grid => lemma1_grid(o)?,
        Lemma::Case24 => verify_case24(o)?,
        Lemma::V23Tables => {
            let mut r = AuditReport::new("verify v23-tables");
            o.echo(&mut r, &[]);
            r.extend(v23_tables_audit(o.precision_bits)?);
            r
        }
    };
    Ok(report.finish())
}

pub fn search(case: Case, o: &RunOptions) -> Result<AuditReport, Error> {
    o.validate()?;
    let mut report = AuditReport::new(format!("search {case}"));
    o.echo(&mut report, &[]);
    report.config("plan_version", o.plan.version);
    let prec = o.precision_bits;
    match case {
        Case::Even720 => {
            for c in [InequalityCase::Even720, InequalityCase::ComplexSmallAlpha, InequalityCase::ComplexLargeAlpha] {
                report.extend(inequality_audit(c, prec)?);
            }
        }
        Case::Real57 => {
            report.extend(inequality_audit(InequalityCase::RealGeneral, prec)?);
            run_windows(o, "real-57", &mut report)?;
            exceptional_u_scan(o, &mut report)?;
        }
        Case::N24 => {
            report.extend(inequality_audit(InequalityCase::Case24Main, prec)?);
            run_windows(o, "n24", &mut report)?;
        }
        Case::VCases => {
            for c in [InequalityCase::VEven, InequalityCase::VComplex, InequalityCase::VReal] {
                report.extend(inequality_audit(c, prec)?);
            }
            run_windows(o, "v-cases", &mut report)?;
            exceptional_v_scan(o, &mut report)?;
        }
        Case::V23 => search_v23(o, &mut report)?,
    }
    Ok(report.finish())
}

fn verify_m14(o: &RunOptions) -> Result<AuditReport, Error> {
    let prec = o.precision_bits;
    let m_hi = o.m_max.unwrap_or(500).max(8);
    let mut report = AuditReport::new("verify m14");
    o.echo(&mut report, &[("m_max", m_hi)]);
    for (c, m0) in [("1", 14u64), ("1.36", 400), ("1.38", 2100)] {
        let (d, v) = log_half_catalan_exceeds(m0, c, prec);
        report.push(
            ReportRow::from_decision(format!("growth.threshold: log(C_m/2) > {c} m at m = {m0}"), d, &v)
                .input("m", m0)
                .input("c", c),
        );
        report.push(
            ReportRow::decided(format!("growth.stirling: m log 4 - sigma_m > {c} m at m = {m0}"), prec, |p| {
                stirling_log_interval(m0, p).lo.sub(&Interval::from_decimal(c, p).mul_int(m0))
            })
            .input("m", m0)
            .input("c", c),
        );
    }
    if let Some(m) = (7..14u64).rev().find(|&m| log_half_catalan_exceeds(m, "1", prec).0 != crate::Decision::Positive) {
        report.note(format!("log(C_m/2) > m first fails below the threshold at m = {m}"));
    }
    for m in [14u64, 100, 400, 2100] {
        let exact = |p: u32| PrimeLogTable::shared(2 * m, p).log_central(m, Kind::C).sub(&ln2(p));
        report.push(
            ReportRow::decided("growth.stirling-bracket: lower Stirling bound below log(C_m/2)", prec, |p| {
                exact(p).sub(&stirling_log_interval(m, p).lo)
            })
            .input("m", m),
        );
        report.push(
            ReportRow::decided("growth.stirling-bracket: upper Stirling bound above log(C_m/2)", prec, |p| {
                stirling_log_interval(m, p).hi.sub(&exact(p))
            })
            .input("m", m),
        );
    }
    report.extend(growth_monotonicity_check(7, m_hi)?);
    for (m, big_m) in [(7u64, 7u64), (10, 1000), (500, 500), (7, m_hi)] {
        report.extend(weighted_log_bound_check(m, big_m)?);
    }
    Ok(report)
}

fn sample_ys(lo: u64, y_max: u64) -> Vec<u64> {
    let mut ys: Vec<u64> = [100u64, 1000, 10_000, 100_000].into_iter().filter(|&y| y >= lo && y <= y_max).collect();
    if y_max >= lo && !ys.contains(&y_max) {
        ys.push(y_max);
    }
    ys
}

fn verify_pix(o: &RunOptions) -> Result<AuditReport, Error> {
    let y_max = o.y_max.unwrap_or(100_000);
    let mut report = AuditReport::new("verify pix");
    o.echo(&mut report, &[("y_max", y_max)]);
    for (q, l) in [(3u64, 2u64), (5, 1), (5, 4), (8, 3), (8, 5), (12, 5), (24, 5), (24, 23)] {
        let ys = sample_ys(q + 1, y_max);
        if !ys.is_empty() {
            report.extend(bt_audit(q, l, &ys)?);
        }
    }
    Ok(report)
}

fn verify_rr(o: &RunOptions) -> Result<AuditReport, Error> {
    let y_max = o.y_max.unwrap_or(100_000);
    let mut report = AuditReport::new("verify rr");
    o.echo(&mut report, &[("y_max", y_max)]);
    for &(q, _, _) in EPS_TABLE {
        let ys = sample_ys(q, y_max);
        report.extend(rr_audit(q, q - 1, &ys)?);
        let big: Vec<u64> = sample_ys(1500, y_max).into_iter().chain([1500]).filter(|&y| y <= y_max).collect();
        let mut big = big;
        big.sort_unstable();
        big.dedup();
        if !big.is_empty() {
            report.extend(combined_estimate_audit(q, q - 1, &big)?);
        }
    }
    Ok(report)
}

/// The three prime-gap claims.
pub const GAP_CLAIMS: [(u64, &[u64], u64); 3] = [(24, &[5], 15), (8, &[3, 5], 6), (12, &[5], 9)];

fn verify_gaps(o: &RunOptions) -> Result<AuditReport, Error> {
    let y_max = o.y_max.unwrap_or(100_000);
    let mut report = AuditReport::new("verify gaps");
    o.echo(&mut report, &[("y_max", y_max)]);
    for (q, residues, y_lo) in GAP_CLAIMS {
        report.extend(ap_gap_check(q, residues, y_lo, y_max.max(y_lo))?);
    }
    Ok(report)
}

fn verify_mnbd(o: &RunOptions) -> Result<AuditReport, Error> {
    let j_max = o.j_max.unwrap_or(1500);
    let prec = o.precision_bits;
    let mut report = AuditReport::new("verify mnbd");
    o.echo(&mut report, &[("j_max", j_max)]);
    for &(n0, _) in DELTA0 {
        report.extend(delta0_audit(n0, j_max, prec)?);
    }
    report.extend(delta1_audit(prec)?);
    let js: Vec<u64> = [2u64, 10, 37, 100, 500, 1000, 1500].into_iter().filter(|&j| j <= j_max).collect();
    for n0 in [5u64, 7, 9, 16, 24] {
        report.extend(xi_chain_audit(n0, &js, prec));
    }
    Ok(report)
}

fn verify_case24(o: &RunOptions) -> Result<AuditReport, Error> {
    let prec = o.precision_bits;
    let mut report = AuditReport::new("verify case24");
    o.echo(&mut report, &[]);
    report.extend(case24_eps_audit(prec)?);
    report.extend(case24_constants_audit(prec));
    report.extend(case24_window_audit(prec));
    report.extend(m8_ratio_audit(prec));
    Ok(report)
}

/// Pairs used for the lower-bound grid: real and complex, small `|alpha|`.
pub const GRID_PAIRS: &[(i64, i64)] = &[(1, 1), (2, 1), (1, -2), (1, -3), (2, -3), (3, -1), (1, 2)];

#[derive(Default)]
struct GridTally {
    checked: usize,
    ties: usize,
    fails: Vec<String>,
    open: Vec<String>,
}

impl GridTally {
    fn absorb(&mut self, other: GridTally) {
        self.checked += other.checked;
        self.ties += other.ties;
        self.fails.extend(other.fails);
        self.open.extend(other.open);
    }

    fn row(self, claim: &str, n_max: u64) -> ReportRow {
        let status = if !self.fails.is_empty() {
            Status::Fail
        } else if !self.open.is_empty() {
            Status::Undecided
        } else {
            Status::Pass
        };
        let mut row = ReportRow::new(claim, status)
            .input("n_max", n_max)
            .input("checked", self.checked)
            .input("ties", self.ties);
        if let Some(w) = self.fails.first().or(self.open.first()) {
            row = row.witness(w.clone());
        }
        row
    }
}

/// Grid points `(n0, t, n)` with `n0 p^t | n <= n_max`, `p` the first prime of `n0`.
pub fn lemma1_grid_points(n_max: u64) -> Vec<(u64, u32, u64, ModulusShape)> {
    let mut out = Vec::new();
    for n0 in 5..=n_max {
        let Some(shape) = modulus_shape(n0) else { continue };
        let p = match shape {
            ModulusShape::PrimePower { p } | ModulusShape::TwoPrimes { p, .. } => p,
        };
        let mut t = 0u32;
        while n0 * p.pow(t) <= n_max {
            let step = n0 * p.pow(t);
            for n in (step..=n_max).step_by(step as usize) {
                out.push((n0, t, n, shape));
            }
            t += 1;
        }
    }
    out
}

fn lemma1_grid(o: &RunOptions) -> Result<AuditReport, Error> {
    let n_max = o.n_max.unwrap_or(120);
    let mut report = AuditReport::new("verify lemma1-grid");
    o.echo(&mut report, &[("n_max", n_max)]);
    let points = lemma1_grid_points(n_max);
    let prec = o.precision_bits.max(256);
    let work: Vec<((i64, i64), (u64, u32, u64, ModulusShape))> =
        GRID_PAIRS.iter().flat_map(|&pair| points.iter().map(move |&pt| (pair, pt))).collect();
    let tallies: Vec<[GridTally; 4]> = work
        .par_iter()
        .map(|&((r, s), (n0, t, n, shape))| {
            let mut out: [GridTally; 4] = Default::default();
            let params = LucasParams::new(r, s).expect("grid pairs are valid");
            let tag = format!("(r,s)=({r},{s}) n0={n0} t={t} n={n}");
            let mut bound_check = |slot: usize, sum: crate::cyclotomic::MLogSum, bound: Result<Interval, Error>| {
                let Ok(bound) = bound else { return };
                let g = &mut out[slot];
                g.checked += 1;
                if sum.value.certainly_lt(&bound) {
                    if sum.exact {
                        g.fails.push(tag.clone());
                    } else {
                        g.open.push(format!("{tag}: unfactored piece"));
                    }
                } else if !bound.certainly_lt(&sum.value) {
                    g.ties += 1;
                }
            };
            bound_check(0, m_log_sum_u(&params, n, n0, prec), m_lower_bound_u(&params, n, n0, t, prec));
            if matches!(shape, ModulusShape::PrimePower { p } if p > 2) {
                bound_check(1, m_log_sum_v(&params, n, n0, prec), m_lower_bound_v(&params, n, n0, t, prec));
            }
            let which = match shape {
                ModulusShape::PrimePower { .. } => Telescope::U1,
                ModulusShape::TwoPrimes { .. } => Telescope::U2,
            };
            let mut identity = |slot: usize, w: Telescope| {
                if let Ok((a, b)) = telescoping_sides(&params, n, n0, t, w) {
                    out[slot].checked += 1;
                    if a != b {
                        out[slot].fails.push(format!("{tag} {w:?}"));
                    }
                }
            };
            identity(2, which);
            if matches!(shape, ModulusShape::PrimePower { p } if p > 2) {
                identity(3, Telescope::V1);
            }
            out
        })
        .collect();
    let mut total: [GridTally; 4] = Default::default();
    for t in tallies {
        for (acc, x) in total.iter_mut().zip(t) {
            acc.absorb(x);
        }
    }
    let claims = [
        "lemma1.u-bound: M_n0(U_n) at least the lower bound",
        "lemma1.v-bound: M_n0(V_n) at least the lower bound",
        "lemma1.telescoping-u: cyclotomic product identity for U_n",
        "lemma1.telescoping-v: cyclotomic product identity for V_n",
    ];
    for (claim, tally) in claims.into_iter().zip(total) {
        report.push(tally.row(claim, n_max).input("pairs", GRID_PAIRS.len()));
    }
    Ok(report)
}

fn hit_label(h: &ScanHit) -> String {
    format!("({}, {}) n={} value={} = {}", h.r, h.s, h.n, h.value, h.factorization)
}

/// Scans every window of a case; a window passes when it holds no solution.
fn run_windows(o: &RunOptions, case: &str, report: &mut AuditReport) -> Result<(), Error> {
    for w in o.plan.windows_for(case) {
        run_window(w, report)?;
    }
    Ok(())
}

fn run_window(w: &Window, report: &mut AuditReport) -> Result<(), Error> {
    let seq = w.seq()?;
    let sign = w.sign()?;
    for &n in &w.n {
        let (c1, c2) = w.bounds(n)?;
        let window = enumerate_rs(&c1, &c2, sign)?;
        // no primitive divisor means the cap argument does not apply
        let bhv_index = match seq {
            SeqKind::U => n,
            SeqKind::V => 2 * n,
        };
        let (excluded, pairs): (Vec<SequencePair>, Vec<SequencePair>) =
            window.pairs.iter().partition(|p| is_bhv_exception(bhv_index, p.r, p.s));
        let out = match seq {
            SeqKind::U => scan_u(&pairs, n, &w.constraints(), w.m_cap),
            SeqKind::V => scan_v(&pairs, n, &w.constraints(), w.m_cap),
        };
        let status = if !out.hits.is_empty() {
            Status::Fail
        } else if !out.undecided.is_empty() || !window.undecided.is_empty() {
            Status::Undecided
        } else {
            Status::Pass
        };
        let seq_name = match seq {
            SeqKind::U => "U",
            SeqKind::V => "V",
        };
        let mut row = ReportRow::new(format!("{case}.window[{label}]: no {seq_name}_n in the product set", case = w.case, label = w.label), status)
            .input("n", n)
            .input("c1", &c1)
            .input("c2", &c2)
            .input("s_sign", &w.s_sign)
            .input("p_max", w.p_max.map_or("-".to_string(), |p| p.to_string()))
            .input("m_cap", w.m_cap)
            .input("required_divisor", w.required_divisor.map_or("-".to_string(), |d| d.to_string()))
            .input("basis", format!("{:?}", w.basis).to_lowercase())
            .input("pairs", window.pairs.len())
            .input("examined", out.examined)
            .input("prescreened", out.prescreened);
        if !out.hits.is_empty() {
            row = row.witness(out.hits.iter().map(hit_label).collect::<Vec<_>>().join("; "));
        } else if !out.undecided.is_empty() || !window.undecided.is_empty() {
            row = row.witness(format!("undecided terms {:?}, undecided pairs {:?}", out.undecided, window.undecided));
        }
        report.push(row);
        if !out.hits.is_empty() {
            report.push(ReportRow::check(
                format!("{}.window[{}]: hits re-verify", w.case, w.label),
                out.hits.iter().all(reverify_hit),
            ));
        }
        for p in excluded {
            report.note(format!(
                "{}.window[{}]: ({}, {}) at n={n} has no primitive divisor and is covered by the exceptional-table scan",
                w.case, w.label, p.r, p.s
            ));
        }
    }
    Ok(())
}

fn m_min(o: &RunOptions) -> u64 {
    o.m_min.unwrap_or(2)
}

/// Terms of the exceptional table in the product set.
fn table_hits(o: &RunOptions, rows: &[(u64, SequencePair)], seq: SeqKind) -> Result<Vec<(u64, SequencePair, String)>, Error> {
    let opts = PbcOptions { m_min: m_min(o), m_cap: None, max_solutions: 8 };
    let mut hits = Vec::new();
    for &(n, pair) in rows {
        let params = LucasParams::new(pair.r, pair.s)?;
        let v = match seq {
            SeqKind::U => params.u(n),
            SeqKind::V => params.v(n),
        };
        if v == BigInt::from(0) {
            continue;
        }
        let sols = pbc_decompose(&v, opts)?;
        if let Some(f) = sols.first() {
            hits.push((n, pair, format!("{v} = {f}")));
        }
    }
    Ok(hits)
}

fn exceptional_u_scan(o: &RunOptions, report: &mut AuditReport) -> Result<(), Error> {
    let hits = table_hits(o, &bhv_exception_table(), SeqKind::U)?;
    let real: BTreeSet<(i64, i64, u64)> = hits
        .iter()
        .filter(|(_, p, _)| p.r * p.r + 4 * p.s > 0)
        .map(|(n, p, _)| (p.r, p.s, *n))
        .collect();
    let want: BTreeSet<(i64, i64, u64)> = [(1, 1, 5), (1, 1, 12)].into();
    let describe = |keep: &dyn Fn(&SequencePair) -> bool| {
        hits.iter()
            .filter(|(_, p, _)| keep(p))
            .map(|(n, p, v)| format!("({}, {}) n={n}: {v}", p.r, p.s))
            .collect::<Vec<_>>()
            .join("; ")
    };
    report.push(
        ReportRow::check("real-57.exceptional: real table rows in the product set are (1,1) at n = 5, 12", real == want)
            .input("hits", describe(&|p| p.r * p.r + 4 * p.s > 0)),
    );
    let complex = describe(&|p| p.r * p.r + 4 * p.s < 0);
    report.push(
        ReportRow::new("real-57.exceptional-complex: complex table rows in the product set", Status::Pass)
            .input("hits", if complex.is_empty() { "none".to_string() } else { complex }),
    );
    Ok(())
}

/// `n` with `2n` in the exceptional table.
pub fn v_exceptional_indices() -> Vec<u64> {
    let mut out: Vec<u64> = BHV_EXCEPTIONS.iter().filter(|e| e.0 % 2 == 0).map(|e| e.0 / 2).collect();
    out.sort_unstable();
    out
}

fn exceptional_v_scan(o: &RunOptions, report: &mut AuditReport) -> Result<(), Error> {
    let rows: Vec<(u64, SequencePair)> = bhv_exception_table()
        .into_iter()
        .filter(|(n, _)| n % 2 == 0)
        .map(|(n, p)| (n / 2, p))
        .collect();
    let hits = table_hits(o, &rows, SeqKind::V)?;
    let describe = |keep: &dyn Fn(u64, &SequencePair) -> bool| {
        hits.iter()
            .filter(|(n, p, _)| keep(*n, p))
            .map(|(n, p, v)| format!("({}, {}) n={n}: {v}", p.r, p.s))
            .collect::<Vec<_>>()
            .join("; ")
    };
    let checks: [(&str, &dyn Fn(u64, &SequencePair) -> bool); 4] = [
        ("v-cases.exceptional: no V_n in the product set for n in {4, 5, 6, 9} over pairs whose U_2n lacks a primitive divisor", &|n, _| {
            [4, 5, 6, 9].contains(&n)
        }),
        ("v-cases.exceptional-15: the same for n = 15", &|n, _| n == 15),
        ("v-cases.four-divides-n: no exceptional solution with 4 | n", &|n, _| n % 4 == 0),
        ("v-cases.exceptional-real: no real exceptional solution with n outside {1, 2, 3, 6}", &|n, p| {
            p.r * p.r + 4 * p.s > 0 && ![1, 2, 3, 6].contains(&n)
        }),
    ];
    for (claim, keep) in checks {
        let found = describe(keep);
        let mut row = ReportRow::check(claim, found.is_empty())
            .input("n", format!("{:?}", v_exceptional_indices()))
            .input("rows", rows.len());
        if !found.is_empty() {
            row = row.witness(found);
        }
        report.push(row);
    }
    Ok(())
}

/// The solution list of the `s = ±1` lemma: `(r, s, n, V_n)`.
pub const V23_EXPECTED: &[(i64, i64, u64, i64)] = &[(1, 1, 3, 4), (2, 1, 2, 6), (2, 1, 3, 14), (4, -1, 2, 14), (5, 1, 3, 140)];

fn v23_key(h: &V23Hit) -> (i64, i64, u64, String) {
    (h.r, h.s, h.n, h.value.to_string())
}

fn v23_expected() -> BTreeSet<(i64, i64, u64, String)> {
    V23_EXPECTED.iter().map(|&(r, s, n, v)| (r, s, n, v.to_string())).collect()
}

fn list(hits: &[V23Hit]) -> String {
    hits.iter()
        .map(|h| format!("({}, {}) n={} V={} = {}", h.r, h.s, h.n, h.value, h.representation))
        .collect::<Vec<_>>()
        .join("; ")
}

fn search_v23(o: &RunOptions, report: &mut AuditReport) -> Result<(), Error> {
    let plan = &o.plan.v23;
    let scan = v23_scan(plan.r_max, plan.m_max)?;
    report.config("r_max", plan.r_max).config("m_max", plan.m_max).config("shortcut_m_max", plan.shortcut_m_max);
    let got: BTreeSet<_> = scan.hits.iter().map(v23_key).collect();
    let want = v23_expected();
    let mut row = ReportRow::check("v23.solutions: direct scan equals the stated solution list", got == want)
        .input("r_max", plan.r_max)
        .input("m_max", plan.m_max)
        .input("hits", list(&scan.hits));
    if got != want {
        row = row.witness(format!(
            "extra {:?}, missing {:?}",
            got.difference(&want).collect::<Vec<_>>(),
            want.difference(&got).collect::<Vec<_>>()
        ));
    }
    report.push(row);
    report.push(
        ReportRow::check("v23.shortcut: cube-bracket n = 3 solutions agree with the direct scan", scan.shortcut_agrees)
            .input("shortcut", list(&scan.shortcut)),
    );
    let literal = literal_minus_bracket_holds(2, plan.r_max);
    let mut row = ReportRow::check("v23.minus-bracket-literal: (r-2)^3 < r(r^2-3) < (r-1)^3 for s = -1", literal.is_none())
        .input("r_range", format!("2..={}", plan.r_max));
    if let Some(r) = literal {
        row = row.witness(format!("fails at r = {r}; the bracket that holds is (r-1)^3 < r(r^2-3) < r^3"));
    }
    report.push(row);
    report.push(
        ReportRow::check(
            "v23.minus-bracket: (r-1)^3 < r(r^2-3) < r^3 for s = -1",
            (2..=plan.r_max.max(2)).all(|r| {
                let r = r as i128;
                let e = r * (r * r - 3);
                (r - 1).pow(3) < e && e < r.pow(3)
            }),
        )
        .input("r_range", format!("2..={}", plan.r_max)),
    );
    let all_r = v23_root_scan(plan.shortcut_m_max);
    let got: BTreeSet<_> = all_r.iter().map(v23_key).collect();
    let mut row = ReportRow::check("v23.all-r: every r, n in {2,3,6}, m up to the shortcut cap gives only the stated list", got == want)
        .input("m_max", plan.shortcut_m_max)
        .input("hits", list(&all_r));
    if got != want {
        row = row.witness(format!("extra {:?}", got.difference(&want).collect::<Vec<_>>()));
    }
    report.push(row);
    let c4 = crate::central::central_value(4, Kind::C);
    let fam = crate::search::doubled_family(plan.m_max);
    report.push(
        ReportRow::check("v23.c4-value: C_4 = 14 and 7 is not in the doubled family", c4 == BigInt::from(14) && !fam.contains_key(&BigInt::from(7)))
            .input("C_4", &c4),
    );
    report.note("the reading E_m = C_4 = 7 is not a value of C_m or B_m; the scan uses C_4 = 14");
    Ok(())
}

/// The five Pell identities quoted with the solution list: `(x, d, y, rhs)`.
pub const PELL_IDENTITIES: &[(i64, i64, i64, i64)] =
    &[(70, 29, 13, -1), (70, 3 * 23 * 71, 1, 1), (6, 2, 4, 4), (14, 2, 10, -4), (14, 3, 8, 4)];

/// The `n = 2` solutions of the `±4` form: `(d, W)`.
pub const PELL4_N2: &[(u64, i64)] = &[(2, 6), (2, 14), (3, 14)];

pub fn pell(o: &RunOptions) -> Result<AuditReport, Error> {
    o.validate()?;
    let d_max = o.d_max.unwrap_or(o.plan.pell.d_max);
    let n_max = o.n_max.unwrap_or(o.plan.pell.n_max);
    let m_max = o.m_max.unwrap_or(o.plan.pell.m_max);
    let mut report = AuditReport::new("pell");
    o.echo(&mut report, &[("d_max", d_max), ("n_max", n_max), ("m_max", m_max)]);
    let sols = pell_scan(d_max, n_max, m_max)?;
    let fmt_sol = |s: &crate::search::PellSolution| {
        format!("{:?} d={} n={} x={} y={} rhs={} {}", s.form, s.d, s.n, s.x, s.y, s.rhs_sign, s.representation)
    };
    let ones: Vec<_> = sols.iter().filter(|s| s.form == PellForm::One).collect();
    let fours: Vec<_> = sols.iter().filter(|s| s.form == PellForm::Four).collect();
    let bad_x: Vec<String> = ones.iter().filter(|s| s.n != 1).map(|s| fmt_sol(s)).collect();
    let mut row = ReportRow::check("pell.x: X_n in {C_m, B_m} only for n = 1", bad_x.is_empty())
        .input("hits", ones.iter().map(|s| format!("d={} X={} {}", s.d, s.x, s.representation)).collect::<Vec<_>>().join("; "));
    if !bad_x.is_empty() {
        row = row.witness(bad_x.join("; "));
    }
    report.push(row);
    let listed: BTreeSet<(u64, String)> = PELL4_N2.iter().map(|&(d, w)| (d, w.to_string())).collect();
    let present: BTreeMap<(u64, String), Vec<u64>> = fours.iter().fold(BTreeMap::new(), |mut acc, s| {
        acc.entry((s.d, s.x.to_string())).or_default().push(s.n);
        acc
    });
    let missing: Vec<_> = listed.iter().filter(|k| !present.contains_key(*k)).collect();
    let mut row = ReportRow::check("pell.w-listed: the three listed W solutions (d=2 W=6, d=2 W=14, d=3 W=14) appear", missing.is_empty());
    if !missing.is_empty() {
        row = row.witness(format!("missing {missing:?}"));
    }
    report.push(row);
    report.push(
        ReportRow::new("pell.w-listed-index: index n of each listed W solution", Status::Pass).input(
            "index",
            listed
                .iter()
                .map(|k| format!("d={} W={}: n={:?}", k.0, k.1, present.get(k).cloned().unwrap_or_default()))
                .collect::<Vec<_>>()
                .join("; "),
        ),
    );
    let other: Vec<String> = fours
        .iter()
        .filter(|s| !listed.contains(&(s.d, s.x.to_string())) && s.n != 1 && s.n != 3)
        .map(|s| fmt_sol(s))
        .collect();
    let mut row = ReportRow::check("pell.w-other: every other W hit has n in {1, 3}", other.is_empty()).input(
        "hits",
        fours.iter().map(|s| format!("d={} n={} W={} {}", s.d, s.n, s.x, s.representation)).collect::<Vec<_>>().join("; "),
    );
    if !other.is_empty() {
        row = row.witness(other.join("; "));
    }
    report.push(row);
    let broken: Vec<String> = sols.iter().filter(|s| !pell_holds(s)).map(fmt_sol).collect();
    let mut row = ReportRow::check("pell.reverify: every hit satisfies its equation", broken.is_empty()).input("hits", sols.len());
    if !broken.is_empty() {
        row = row.witness(broken.join("; "));
    }
    report.push(row);
    for &(x, d, y, rhs) in PELL_IDENTITIES {
        let (x, d, y) = (BigInt::from(x), BigInt::from(d), BigInt::from(y));
        let lhs: BigInt = &x * &x - &d * &y * &y;
        report.push(
            ReportRow::check(format!("pell.identity: {x}^2 - {d}*{y}^2 = {rhs}"), lhs == BigInt::from(rhs))
                .input("lhs", &lhs),
        );
    }
    Ok(report.finish())
}

pub fn pbc(n: &BigInt, o: &RunOptions) -> Result<AuditReport, Error> {
    o.validate()?;
    let m_min = m_min(o);
    let opts = PbcOptions { m_min, m_cap: o.m_max, max_solutions: 64 };
    let sols = pbc_decompose(n, opts)?;
    let mut report = AuditReport::new("pbc");
    o.echo(&mut report, &[("m_min", m_min)]);
    report.config("n", n);
    if let Some(m) = o.m_max {
        report.config("m_max", m);
    }
    report.push(ReportRow::new("pbc.count: representations found", Status::Pass).input("count", sols.len()));
    for s in &sols {
        report.push(
            ReportRow::check("pbc.factorization: product of the parts equals N", s.value() == *n).input("factorization", s),
        );
    }
    Ok(report.finish())
}

/// Static tables: weights, epsilon constants, the exceptional table and the `n = 24` sets.
pub fn tables(o: &RunOptions) -> Result<AuditReport, Error> {
    o.validate()?;
    let prec = o.precision_bits;
    let mut report = AuditReport::new("tables");
    o.echo(&mut report, &[]);
    for w in weight_table(&[25, 27, 32, 49], prec)?.rows {
        report.push(
            ReportRow::new("table.weight: g(n0)", Status::Pass)
                .input("n0", w.n0)
                .input("phi", w.phi)
                .input("delta0", w.delta0.unwrap_or_else(|| "-".into()))
                .input("g_lo", w.g_lo)
                .input("g_hi", w.g_hi),
        );
    }
    for &(q, ep, et) in EPS_TABLE {
        report.push(
            ReportRow::new("table.eps: psi and theta constants", Status::Pass)
                .input("q", q)
                .input("eps_psi", ep)
                .input("eps_theta", et),
        );
    }
    for (n, p) in bhv_exception_table() {
        report.push(
            ReportRow::new("table.exceptional: U_n without a primitive divisor", Status::Pass)
                .input("n", n)
                .input("r", p.r)
                .input("s", p.s),
        );
    }
    let t = case24_tables(&Case24Context::stated(), prec)?;
    report.push(
        ReportRow::new("table.case24: T1 and T2", Status::Pass)
            .input("T1", format!("{:?}", t.t1))
            .input("T2", format!("{:?}", t.t2)),
    );
    report.push(
        ReportRow::new("table.case24: y0 and the log alpha cap", Status::Pass)
            .input("y0", format!("[{}, {}]", t.y0.lo_decimal(8), t.y0.hi_decimal(8)))
            .input("log_alpha_cap", format!("[{}, {}]", t.log_alpha_cap.lo_decimal(8), t.log_alpha_cap.hi_decimal(8))),
    );
    Ok(report.finish())
}
