use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use lucas_catalan::num_bigint::BigInt;
use lucas_catalan::plan::SearchPlan;
use lucas_catalan::report::Meta;
use lucas_catalan::runs::{self, Case, Lemma, RunOptions};
use lucas_catalan::{AuditReport, Error};

const USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "lucat", version, about = "Audits and searches for Lucas terms that are products of Catalan and middle binomial numbers")]
struct Cli {
    /// Working precision in bits, 64 to 1024
    #[arg(long, global = true, env = "LUCAT_PRECISION_BITS", default_value_t = 128)]
    precision_bits: u32,
    #[arg(long, global = true, env = "LUCAT_J_MAX")]
    j_max: Option<u64>,
    #[arg(long, global = true, env = "LUCAT_Y_MAX")]
    y_max: Option<u64>,
    #[arg(long, global = true, env = "LUCAT_D_MAX")]
    d_max: Option<u64>,
    #[arg(long, global = true, env = "LUCAT_N_MAX")]
    n_max: Option<u64>,
    #[arg(long, global = true, env = "LUCAT_M_MAX")]
    m_max: Option<u64>,
    /// Smallest index allowed in a product (2 excludes B_1)
    #[arg(long, global = true, env = "LUCAT_M_MIN")]
    m_min: Option<u64>,
    /// Worker threads; output does not depend on it
    #[arg(long, global = true, env = "LUCAT_WORKERS")]
    workers: Option<usize>,
    #[arg(long, global = true, env = "LUCAT_FORMAT", value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Omit runtime and version from the report
    #[arg(long, global = true, env = "LUCAT_NO_META")]
    no_meta: bool,
    /// Search plan to use instead of the built-in one
    #[arg(long, global = true, env = "LUCAT_PLAN")]
    plan: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Re-check a lemma's finite computations
    Verify {
        #[arg(value_parser = parse_lemma)]
        lemma: Lemma,
    },
    /// Run the inequality audits and window scans of a case
    Search {
        #[arg(value_parser = parse_case)]
        case: Case,
    },
    /// Pell solutions whose coordinate is a Catalan or middle binomial number
    Pell,
    /// Write N as a signed product of C_m and B_m
    Pbc {
        #[arg(allow_negative_numbers = true)]
        n: BigInt,
    },
    /// Print the static tables
    Tables,
}

fn parse_lemma(s: &str) -> Result<Lemma, String> {
    s.parse()
}

fn parse_case(s: &str) -> Result<Case, String> {
    s.parse()
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Undecided(_) | Error::Unfactored(_) => 2,
        Error::InvalidParams(..) | Error::Precondition(_) | Error::Plan(_) => USAGE,
    }
}

fn run(cli: &Cli) -> Result<AuditReport, Error> {
    let plan = match &cli.plan {
        Some(p) => SearchPlan::load(p)?,
        None => SearchPlan::builtin(),
    };
    let o = RunOptions {
        precision_bits: cli.precision_bits,
        j_max: cli.j_max,
        y_max: cli.y_max,
        d_max: cli.d_max,
        n_max: cli.n_max,
        m_max: cli.m_max,
        m_min: cli.m_min,
        plan,
    };
    match &cli.command {
        Command::Verify { lemma } => runs::verify(*lemma, &o),
        Command::Search { case } => runs::search(*case, &o),
        Command::Pell => runs::pell(&o),
        Command::Pbc { n } => runs::pbc(n, &o),
        Command::Tables => runs::tables(&o),
    }
}

fn render(report: &AuditReport, format: Format) -> anyhow::Result<String> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(report)? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["report", "report_status", "claim_ref", "status", "inputs", "margin_lo", "margin_hi", "witness"])?;
            for row in &report.rows {
                let inputs: Vec<String> = row.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
                w.write_record([
                    report.name.as_str(),
                    report.status.label(),
                    &row.claim_ref,
                    row.status.label(),
                    &inputs.join(";"),
                    row.margin_lo.as_deref().unwrap_or(""),
                    row.margin_hi.as_deref().unwrap_or(""),
                    row.witness.as_deref().unwrap_or(""),
                ])?;
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Text => {
            let mut s = format!("{}: {}\n", report.name, report.status.label());
            for (k, v) in &report.config {
                s += &format!("  config {k} = {v}\n");
            }
            for row in &report.rows {
                s += &format!("  [{}] {}", row.status.label(), row.claim_ref);
                let inputs: Vec<String> = row.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
                if !inputs.is_empty() {
                    s += &format!(" ({})", inputs.join(", "));
                }
                if let (Some(lo), Some(hi)) = (&row.margin_lo, &row.margin_hi) {
                    s += &format!(" margin [{lo}, {hi}]");
                }
                if let Some(w) = &row.witness {
                    s += &format!("\n      witness: {w}");
                }
                s.push('\n');
            }
            for n in &report.notes {
                s += &format!("  note: {n}\n");
            }
            if let Some(m) = &report.meta {
                s += &format!("  runtime {} ms, version {}\n", m.runtime_ms, m.version);
            }
            s
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    let result = match cli.workers {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(|| run(&cli)),
            Err(e) => {
                eprintln!("lucat: cannot start {n} workers: {e}");
                return ExitCode::from(USAGE);
            }
        },
        None => run(&cli),
    };
    let mut report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("lucat: {e}");
            return ExitCode::from(exit_for(&e));
        }
    };
    if !cli.no_meta {
        report.meta = Some(Meta { runtime_ms: start.elapsed().as_millis(), version: env!("CARGO_PKG_VERSION").to_string() });
    }
    let out = render(&report, cli.format).context("rendering report");
    match out {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
        }
        Err(e) => {
            eprintln!("lucat: {e:#}");
            return ExitCode::from(1);
        }
    }
    ExitCode::from(report.status.exit_code() as u8)
}
