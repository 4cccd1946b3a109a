//! Acceptance criteria 1 to 10. Prints one line per criterion and exits non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lucas_catalan::bounds::{case24_eps_audit, case24_tables, delta0_audit, inequality_audit, Case24Context, InequalityCase, DELTA0};
use lucas_catalan::central::Kind;
use lucas_catalan::interval::Interval;
use lucas_catalan::lucas::{bhv_exception_table, is_bhv_exception, primitive_divisors, LucasParams, SeqKind, SequencePair};
use lucas_catalan::num_bigint::BigInt;
use lucas_catalan::plan::{Basis, SearchPlan};
use lucas_catalan::primes_ap::ap_gap_check;
use lucas_catalan::report::{AuditReport, Status};
use lucas_catalan::runs::{self, Lemma, RunOptions, GAP_CLAIMS, V23_EXPECTED};
use lucas_catalan::search::{enumerate_rs, pbc_decompose, scan_u, scan_v, v23_scan, Part, PbcOptions};
use num_integer::Integer;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PREC: u32 = 128;
const J_MAX: u64 = 1500;
const Y0_MAX: &str = "7.21";
const CAP_MAX: &str = "23.78";
const BHV_RANDOM_PAIRS: usize = 200;
const GAP_Y_MAX: u64 = 100_000;
const GAP_TIME_LIMIT: Duration = Duration::from_secs(60);
const IDENTITY_CASES: usize = 1000;
const PBC_TARGETS: usize = 1000;
const PBC_M_MAX: u64 = 8;
const PBC_N_MAX: u64 = 1_000_000_000_000;
const SEED: u64 = 0x5eed_1ca5;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

fn failing_rows(r: &AuditReport) -> Vec<String> {
    r.failures().map(|row| format!("{} ({})", row.claim_ref, row.status.label())).collect()
}

fn summarize(r: &AuditReport) -> Outcome {
    let bad = failing_rows(r);
    if bad.is_empty() {
        Outcome::new(true, format!("{} rows pass", r.rows.len()))
    } else {
        Outcome::new(false, format!("{} of {} rows not passing: {}", bad.len(), r.rows.len(), bad.join("; ")))
    }
}

fn c1_delta0() -> Outcome {
    let mut bad = Vec::new();
    let mut rows = 0;
    for &(n0, _) in DELTA0 {
        match delta0_audit(n0, J_MAX, PREC) {
            Ok(r) => {
                rows += r.rows.len();
                bad.extend(failing_rows(&r));
            }
            Err(e) => bad.push(format!("n0={n0}: {e}")),
        }
    }
    let pass = bad.is_empty();
    Outcome::new(pass, format!("{} moduli, j <= {J_MAX}, {rows} rows{}", DELTA0.len(), if pass { String::new() } else { format!("; {}", bad.join("; ")) }))
}

fn c2_eps() -> Outcome {
    match case24_eps_audit(PREC) {
        Ok(r) => summarize(&r),
        Err(e) => Outcome::new(false, e.to_string()),
    }
}

fn c3_case24() -> Outcome {
    const PREFIXES: [&str; 6] =
        ["case24.y0-main", "case24.cap-main", "case24.main", "case24.chain-left", "case24.chain-right", "case24.chain-contradiction"];
    let o = RunOptions::default();
    let r = match runs::verify(Lemma::Case24, &o) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let mut notes = Vec::new();
    for p in PREFIXES {
        let rows: Vec<_> = r.rows.iter().filter(|row| row.claim_ref.starts_with(&format!("{p}:"))).collect();
        if rows.is_empty() {
            notes.push(format!("{p} missing"));
        }
        for row in rows {
            if row.status != Status::Pass {
                notes.push(format!("{} ({})", row.claim_ref, row.status.label()));
            }
        }
    }
    match case24_tables(&Case24Context::stated(), PREC) {
        Ok(t) => {
            if !t.y0.certainly_le(&Interval::from_decimal(Y0_MAX, PREC)) {
                notes.push(format!("y0 = {} not <= {Y0_MAX}", t.y0.to_f64()));
            }
            if !t.log_alpha_cap.certainly_lt(&Interval::from_decimal(CAP_MAX, PREC)) {
                notes.push(format!("cap = {} not < {CAP_MAX}", t.log_alpha_cap.to_f64()));
            }
            if notes.is_empty() {
                return Outcome::new(true, format!("y0 = {:.6}, cap = {:.4}, main and chain rows pass", t.y0.to_f64(), t.log_alpha_cap.to_f64()));
            }
        }
        Err(e) => notes.push(e.to_string()),
    }
    Outcome::new(false, notes.join("; "))
}

fn c4_bhv() -> Outcome {
    let table = bhv_exception_table();
    let mut bad = Vec::new();
    for (n, p) in &table {
        match LucasParams::new(p.r, p.s).and_then(|params| primitive_divisors(&params, *n)) {
            Ok(rep) if !rep.has_primitive && rep.unfactored_cofactor.is_none() => {}
            Ok(rep) => bad.push(format!("table ({}, {}) n={n}: primitive {:?}", p.r, p.s, rep.primitive_primes)),
            Err(e) => bad.push(format!("table ({}, {}) n={n}: {e}", p.r, p.s)),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let mut seen = BTreeSet::new();
    let mut tested = 0;
    while tested < BHV_RANDOM_PAIRS {
        let (n, base) = table[rng.gen_range(0..table.len())];
        let r = base.r + rng.gen_range(-3..=3);
        let s = base.s + rng.gen_range(-12..=12);
        if r < 1 || is_bhv_exception(n, r, s) || !seen.insert((n, r, s)) {
            continue;
        }
        let Ok(params) = LucasParams::new(r, s) else { continue };
        tested += 1;
        match primitive_divisors(&params, n) {
            Ok(rep) if rep.has_primitive => {}
            Ok(_) => bad.push(format!("({r}, {s}) n={n}: no primitive divisor")),
            Err(e) => bad.push(format!("({r}, {s}) n={n}: {e}")),
        }
    }
    let pass = bad.is_empty();
    Outcome::new(pass, format!("{} table rows defective, {tested} nearby pairs primitive{}", table.len(), if pass { String::new() } else { format!("; {}", bad.join("; ")) }))
}

fn c5_solutions() -> Outcome {
    let mut notes = Vec::new();
    let golden = LucasParams::new(1, 1).expect("valid");
    let u5 = golden.u(5);
    let c3 = vec![Part { m: 3, kind: Kind::C }];
    match pbc_decompose(&u5, PbcOptions::default()) {
        Ok(f) if u5 == BigInt::from(5) && f.iter().any(|x| x.parts == c3) => {}
        other => notes.push(format!("U_5 = {u5}: {:?}", other.map(|v| v.len()))),
    }
    let u12 = golden.u(12);
    let want = vec![Part { m: 1, kind: Kind::B }, Part { m: 1, kind: Kind::B }, Part { m: 2, kind: Kind::B }, Part { m: 2, kind: Kind::B }];
    let opts = PbcOptions { m_min: 1, ..PbcOptions::default() };
    match pbc_decompose(&u12, opts) {
        Ok(f) if u12 == BigInt::from(144) && f.iter().any(|x| x.parts == want) => {}
        other => notes.push(format!("U_12 = {u12}: {:?}", other.map(|v| v.len()))),
    }
    match v23_scan(100, 15) {
        Ok(scan) => {
            let got: Vec<(i64, i64, u64, BigInt)> = scan.hits.iter().map(|h| (h.r, h.s, h.n, h.value.clone())).collect();
            let want: Vec<(i64, i64, u64, BigInt)> = V23_EXPECTED.iter().map(|&(r, s, n, v)| (r, s, n, BigInt::from(v))).collect();
            let extra: Vec<String> = got.iter().filter(|h| !want.contains(h)).map(|(r, s, n, v)| format!("({r}, {s}) V_{n} = {v}")).collect();
            let missing: Vec<String> = want.iter().filter(|h| !got.contains(h)).map(|(r, s, n, v)| format!("({r}, {s}) V_{n} = {v}")).collect();
            if !extra.is_empty() {
                notes.push(format!("v23 scan has extra rows {}", extra.join(", ")));
            }
            if !missing.is_empty() {
                notes.push(format!("v23 scan misses {}", missing.join(", ")));
            }
        }
        Err(e) => notes.push(e.to_string()),
    }
    let plan = SearchPlan::builtin();
    let mut windows = 0;
    for w in plan.windows.iter().filter(|w| w.basis == Basis::Stated && (w.case == "real-57" || w.case == "v-cases")) {
        let (seq, sign) = (w.seq().expect("plan"), w.sign().expect("plan"));
        for &n in &w.n {
            windows += 1;
            let (c1, c2) = w.bounds(n).expect("plan");
            let win = match enumerate_rs(&c1, &c2, sign) {
                Ok(win) => win,
                Err(e) => {
                    notes.push(format!("{} {}: {e}", w.case, w.label));
                    continue;
                }
            };
            let bhv_index = if seq == SeqKind::U { n } else { 2 * n };
            let pairs: Vec<SequencePair> = win.pairs.iter().copied().filter(|p| !is_bhv_exception(bhv_index, p.r, p.s)).collect();
            let out = match seq {
                SeqKind::U => scan_u(&pairs, n, &w.constraints(), w.m_cap),
                SeqKind::V => scan_v(&pairs, n, &w.constraints(), w.m_cap),
            };
            if !out.hits.is_empty() || !out.undecided.is_empty() || !win.undecided.is_empty() {
                notes.push(format!("{} {} n={n}: {} hits, {} undecided", w.case, w.label, out.hits.len(), out.undecided.len() + win.undecided.len()));
            }
        }
    }
    let pass = notes.is_empty();
    Outcome::new(pass, if pass { format!("U_5 = C_3, U_12 = B_1^2 B_2^2, v23 list exact, {windows} stated windows empty") } else { notes.join("; ") })
}

fn c6_pell() -> Outcome {
    match runs::pell(&RunOptions::default()) {
        Ok(r) => summarize(&r),
        Err(e) => Outcome::new(false, e.to_string()),
    }
}

fn c7_gaps() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for (q, residues, y_lo) in GAP_CLAIMS {
        match ap_gap_check(q, residues, y_lo, GAP_Y_MAX) {
            Ok(r) => bad.extend(failing_rows(&r)),
            Err(e) => bad.push(format!("q={q}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= GAP_TIME_LIMIT {
        bad.push(format!("took {elapsed:?}"));
    }
    let pass = bad.is_empty();
    Outcome::new(pass, format!("{} gap claims to y = {GAP_Y_MAX} in {:.2}s{}", GAP_CLAIMS.len(), elapsed.as_secs_f64(), if pass { String::new() } else { format!("; {}", bad.join("; ")) }))
}

fn c8_inequalities() -> Outcome {
    let mut bad = Vec::new();
    let mut rows = 0;
    for case in InequalityCase::ALL {
        match inequality_audit(case, PREC) {
            Ok(r) => {
                rows += r.rows.len();
                bad.extend(failing_rows(&r).into_iter().map(|s| format!("{case}: {s}")));
            }
            Err(e) => bad.push(format!("{case}: {e}")),
        }
    }
    let pass = bad.is_empty();
    Outcome::new(pass, format!("{} cases, {rows} rows{}", InequalityCase::ALL.len(), if pass { String::new() } else { format!("; failing: {}", bad.join("; ")) }))
}

fn identity_failures(rng: &mut ChaCha8Rng) -> Vec<String> {
    let mut bad = Vec::new();
    let mut done = 0;
    while done < IDENTITY_CASES {
        let r: i64 = rng.gen_range(1..=30);
        let s: i64 = rng.gen_range(-60..=60);
        let n: u64 = rng.gen_range(0..=80);
        let Ok(p) = LucasParams::new(r, s) else { continue };
        done += 1;
        let (u, v) = p.uv(n);
        let (nu, nv) = common::naive_uv(r, s, n);
        let sb = BigInt::from(s);
        let disc = BigInt::from(r * r + 4 * s);
        let ok = u == nu
            && v == nv
            && p.u(2 * n) == &u * &v
            && &v * &v - &disc * &u * &u == BigInt::from(4) * (-&sb).pow(n as u32)
            && (n == 0 || (v.gcd(&sb).is_one() && u.gcd(&sb).is_one()));
        if !ok {
            bad.push(format!("identities at ({r}, {s}, {n})"));
        }
    }
    bad
}

fn pbc_target(rng: &mut ChaCha8Rng, parts: &[(Part, BigInt)]) -> BigInt {
    let limit = BigInt::from(PBC_N_MAX);
    let mut x = if rng.gen_bool(0.6) {
        let mut x = BigInt::one();
        for _ in 0..rng.gen_range(1..=5) {
            let (_, v) = &parts[rng.gen_range(0..parts.len())];
            if &x * v > limit {
                break;
            }
            x *= v;
        }
        if rng.gen_bool(0.2) {
            x *= rng.gen_range(2u32..=7);
        }
        x
    } else {
        BigInt::from(rng.gen_range(1..=PBC_N_MAX))
    };
    if x > limit {
        x = limit;
    }
    if rng.gen_bool(0.5) {
        -x
    } else {
        x
    }
}

fn pbc_failures(rng: &mut ChaCha8Rng) -> Vec<String> {
    let parts: Vec<(Part, BigInt)> = (1..=PBC_M_MAX)
        .flat_map(|m| [Kind::C, Kind::B].map(|kind| Part { m, kind }))
        .map(|p| (p, common::naive_central(p.m, p.kind)))
        .collect();
    let mut bad = Vec::new();
    for _ in 0..PBC_TARGETS {
        let n = pbc_target(rng, &parts);
        let m_min = rng.gen_range(1..=2);
        let opts = PbcOptions { m_min, m_cap: Some(PBC_M_MAX), max_solutions: usize::MAX };
        let want = common::brute_pbc(&n, m_min, PBC_M_MAX);
        match pbc_decompose(&n, opts) {
            Ok(got) => {
                let sign_ok = got.iter().all(|f| f.value() == n);
                let got: Vec<Vec<Part>> = got.into_iter().map(|f| f.parts).collect();
                if got != want || !sign_ok {
                    bad.push(format!("pbc({n}, m_min={m_min}): {} vs {}", got.len(), want.len()));
                }
            }
            Err(e) => bad.push(format!("pbc({n}): {e}")),
        }
    }
    bad
}

fn c9_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut bad = identity_failures(&mut rng);
    bad.extend(pbc_failures(&mut rng));
    match runs::verify(Lemma::Lemma1Grid, &RunOptions::default()) {
        Ok(r) => bad.extend(failing_rows(&r)),
        Err(e) => bad.push(e.to_string()),
    }
    let pass = bad.is_empty();
    bad.truncate(10);
    Outcome::new(
        pass,
        format!(
            "{IDENTITY_CASES} identity cases, {PBC_TARGETS} product targets, lower-bound grid{}",
            if pass { String::new() } else { format!("; {}", bad.join("; ")) }
        ),
    )
}

fn main() -> ExitCode {
    let checks: [(u32, &str, fn() -> Outcome); 9] = [
        (1, "delta0 bounds", c1_delta0),
        (2, "n = 24 epsilon table", c2_eps),
        (3, "n = 24 constants and contradiction", c3_case24),
        (4, "primitive divisor exceptions", c4_bhv),
        (5, "small solutions and stated windows", c5_solutions),
        (6, "Pell coordinates", c6_pell),
        (7, "prime gaps in progressions", c7_gaps),
        (8, "case inequalities", c8_inequalities),
        (9, "deterministic property checks", c9_properties),
    ];
    let mut passed = Vec::new();
    let mut all = true;
    for (id, name, f) in checks {
        let start = Instant::now();
        let o = f();
        println!("criterion {id} [{}] {name}: {} ({:.2}s)", if o.pass { "PASS" } else { "FAIL" }, o.detail, start.elapsed().as_secs_f64());
        if o.pass {
            passed.push(id);
        }
        all &= o.pass;
    }
    let core = [1, 2, 3, 8];
    let c10 = core.iter().all(|c| passed.contains(c));
    let missing: Vec<String> = core.iter().filter(|c| !passed.contains(c)).map(|c| c.to_string()).collect();
    println!(
        "criterion 10 [{}] main theorem chain: {}",
        if c10 { "PASS" } else { "FAIL" },
        if c10 { "criteria 1, 2, 3 and 8 pass".to_string() } else { format!("failing among criteria 1, 2, 3, 8: {}", missing.join(", ")) }
    );
    all &= c10;
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
