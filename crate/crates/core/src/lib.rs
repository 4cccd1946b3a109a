//! Exact and interval arithmetic for Lucas sequences whose terms are products
//! of Catalan numbers and middle binomial coefficients.
//!
//! The crate covers sequence arithmetic and primitive divisors ([`lucas`]),
//! central binomials and their valuations ([`central`]), cyclotomic values and
//! lower bounds for the `M_{n0}` log sums ([`cyclotomic`]), primes in
//! progressions ([`primes_ap`]), the inequality audits ([`bounds`]) and the
//! exhaustive searches ([`search`]). [`runs`] assembles them into named
//! reports.

pub mod bounds;
pub mod central;
pub mod cyclotomic;
pub mod factor;
pub mod interval;
pub mod lucas;
pub mod numtheory;
pub mod plan;
pub mod primality;
pub mod primes_ap;
pub mod report;
pub mod runs;
pub mod search;

pub use factor::FactoredInteger;
pub use num_bigint;
pub use interval::{Decision, Interval};
pub use lucas::{LucasParams, PrimitiveDivisorReport, RootClass, SequencePair, SequenceTerm};
pub use report::{AuditReport, ReportRow, Status};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters ({0}, {1}): {2}")]
    InvalidParams(String, String, &'static str),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("composite cofactor {0} could not be factored")]
    Unfactored(String),
    #[error("comparison undecided at 1024 bits: {0}")]
    Undecided(String),
    #[error("search plan: {0}")]
    Plan(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
