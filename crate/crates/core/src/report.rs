//! Audit reports: named outcomes with per-claim rows, margins and witnesses.

use std::collections::BTreeMap;
use std::fmt::Display;

use serde::Serialize;

use crate::interval::{decide, Decision, Interval};

/// Decimal digits kept in margin strings.
pub const MARGIN_DIGITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Undecided,
    Fail,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Undecided => "undecided",
        }
    }

    /// Fail dominates undecided, which dominates pass.
    pub fn combine(self, other: Status) -> Status {
        self.max(other)
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Undecided => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub claim_ref: String,
    pub inputs: BTreeMap<String, String>,
    pub margin_lo: Option<String>,
    pub margin_hi: Option<String>,
    pub witness: Option<String>,
    pub status: Status,
}

impl ReportRow {
    pub fn new(claim_ref: impl Into<String>, status: Status) -> Self {
        ReportRow {
            claim_ref: claim_ref.into(),
            inputs: BTreeMap::new(),
            margin_lo: None,
            margin_hi: None,
            witness: None,
            status,
        }
    }

    pub fn check(claim_ref: impl Into<String>, ok: bool) -> Self {
        ReportRow::new(claim_ref, if ok { Status::Pass } else { Status::Fail })
    }

    /// Row for a claim "value > 0": positive passes, negative fails.
    pub fn from_decision(claim_ref: impl Into<String>, d: Decision, margin: &Interval) -> Self {
        let status = match d {
            Decision::Positive => Status::Pass,
            Decision::Negative => Status::Fail,
            Decision::Undecided => Status::Undecided,
        };
        let row = ReportRow::new(claim_ref, status).margin(margin);
        if status == Status::Pass {
            row
        } else {
            let w = format!("margin in [{}, {}]", row.margin_lo.clone().unwrap(), row.margin_hi.clone().unwrap());
            row.witness(w)
        }
    }

    /// Decides `f > 0` on the precision ladder and records the outcome.
    pub fn decided(claim_ref: impl Into<String>, start: u32, f: impl FnMut(u32) -> Interval) -> Self {
        let (d, v) = decide(start, f);
        ReportRow::from_decision(claim_ref, d, &v)
    }

    pub fn input(mut self, key: &str, value: impl Display) -> Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    pub fn margin(mut self, v: &Interval) -> Self {
        self.margin_lo = Some(v.lo_decimal(MARGIN_DIGITS));
        self.margin_hi = Some(v.hi_decimal(MARGIN_DIGITS));
        self
    }

    pub fn witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    /// Fail and undecided rows always carry a witness.
    fn normalized(mut self) -> Self {
        if self.status != Status::Pass && self.witness.is_none() {
            self.witness = Some(format!("inputs {:?}", self.inputs));
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Meta {
    pub runtime_ms: u128,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub name: String,
    pub status: Status,
    pub config: BTreeMap<String, String>,
    pub rows: Vec<ReportRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
}

impl AuditReport {
    pub fn new(name: impl Into<String>) -> Self {
        AuditReport {
            name: name.into(),
            status: Status::Pass,
            config: BTreeMap::new(),
            rows: Vec::new(),
            notes: Vec::new(),
            meta: None,
        }
    }

    pub fn config(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.config.insert(key.to_string(), value.to_string());
        self
    }

    pub fn push(&mut self, row: ReportRow) -> &mut Self {
        self.rows.push(row.normalized());
        self
    }

    pub fn note(&mut self, s: impl Into<String>) -> &mut Self {
        self.notes.push(s.into());
        self
    }

    pub fn extend(&mut self, other: AuditReport) -> &mut Self {
        for r in other.rows {
            self.push(r);
        }
        self.notes.extend(other.notes);
        self
    }

    /// Recomputes the overall status from the rows.
    pub fn finish(mut self) -> Self {
        self.status = self.rows.iter().fold(Status::Pass, |s, r| s.combine(r.status));
        self
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| r.status != Status::Pass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_aggregation() {
        let mut r = AuditReport::new("x");
        r.push(ReportRow::check("a", true));
        assert_eq!(r.clone().finish().status, Status::Pass);
        r.push(ReportRow::new("b", Status::Undecided));
        assert_eq!(r.clone().finish().status, Status::Undecided);
        r.push(ReportRow::check("c", false));
        let r = r.finish();
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.status.exit_code(), 1);
        assert!(r.failures().all(|row| row.witness.is_some()));
    }

    #[test]
    fn margins() {
        let v = Interval::from_ratio(1, 3, 128);
        let row = ReportRow::from_decision("m", Decision::Positive, &v);
        assert_eq!(row.margin_lo.as_deref(), Some("0.333333333333"));
        assert_eq!(row.margin_hi.as_deref(), Some("0.333333333334"));
    }
}
