//! The search plan: windows, caps and constraints for each case scan.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::lucas::SeqKind;
use crate::search::{AlphaBound, SSign, ScanConstraints};
use crate::Error;

pub const DEFAULT_PLAN: &str = include_str!("../data/search_plan.toml");

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct SearchPlan {
    pub version: u32,
    pub pell: PellPlan,
    pub v23: V23Plan,
    #[serde(rename = "window", default)]
    pub windows: Vec<Window>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct PellPlan {
    pub d_max: u64,
    pub n_max: u64,
    pub m_max: u64,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct V23Plan {
    pub r_max: i64,
    pub m_max: u64,
    pub shortcut_m_max: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Stated,
    Corrected,
    Supplementary,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub case: String,
    pub label: String,
    pub sequence: String,
    pub n: Vec<u64>,
    pub alpha_min: String,
    pub alpha_max: Option<String>,
    pub n_log_alpha_max: Option<String>,
    pub s_sign: String,
    pub p_max: Option<u64>,
    pub m_cap: u64,
    pub required_divisor: Option<u64>,
    pub basis: Basis,
}

impl Window {
    pub fn seq(&self) -> Result<SeqKind, Error> {
        match self.sequence.as_str() {
            "U" => Ok(SeqKind::U),
            "V" => Ok(SeqKind::V),
            s => Err(Error::Plan(format!("window {}: unknown sequence {s:?}", self.label))),
        }
    }

    pub fn sign(&self) -> Result<SSign, Error> {
        SSign::parse(&self.s_sign)
    }

    /// `(c1, c2)` for one `n` of the window.
    pub fn bounds(&self, n: u64) -> Result<(AlphaBound, AlphaBound), Error> {
        let c1 = AlphaBound::parse(&self.alpha_min)?;
        let c2 = match (&self.alpha_max, &self.n_log_alpha_max) {
            (Some(a), None) => AlphaBound::parse(a)?,
            (None, Some(t)) => AlphaBound::log_per_n(t, n)?,
            _ => {
                return Err(Error::Plan(format!(
                    "window {}: give exactly one of alpha_max and n_log_alpha_max",
                    self.label
                )))
            }
        };
        Ok((c1, c2))
    }

    pub fn constraints(&self) -> ScanConstraints {
        ScanConstraints { p_max: self.p_max, required_divisor: self.required_divisor }
    }

    pub fn validate(&self) -> Result<(), Error> {
        self.seq()?;
        self.sign()?;
        if self.n.is_empty() || self.n.iter().any(|&n| n < 2) {
            return Err(Error::Plan(format!("window {}: needs indices n >= 2", self.label)));
        }
        for &n in &self.n {
            self.bounds(n)?;
        }
        if self.m_cap < 2 {
            return Err(Error::Plan(format!("window {}: m_cap must be at least 2", self.label)));
        }
        Ok(())
    }
}

impl SearchPlan {
    pub fn parse(text: &str) -> Result<Self, Error> {
        let plan: SearchPlan = toml::from_str(text).map_err(|e| Error::Plan(e.to_string()))?;
        if plan.version != 1 {
            return Err(Error::Plan(format!("unsupported plan version {}", plan.version)));
        }
        for w in &plan.windows {
            w.validate()?;
        }
        Ok(plan)
    }

    pub fn builtin() -> Self {
        SearchPlan::parse(DEFAULT_PLAN).expect("built-in plan parses")
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Plan(format!("{}: {e}", path.display())))?;
        SearchPlan::parse(&text)
    }

    pub fn windows_for<'a>(&'a self, case: &'a str) -> impl Iterator<Item = &'a Window> + 'a {
        self.windows.iter().filter(move |w| w.case == case)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_plan() {
        let plan = SearchPlan::builtin();
        assert_eq!(plan.pell.d_max, 200);
        assert_eq!(plan.windows_for("real-57").count(), 4);
        let w = plan.windows_for("n24").nth(1).unwrap();
        assert_eq!(w.constraints().required_divisor, Some(47 * 53 * 59 * 61 * 67 * 71 * 73));
        let (c1, c2) = plan.windows_for("real-57").next().unwrap().bounds(10).unwrap();
        assert_eq!(c1, AlphaBound::Golden);
        assert_eq!(c2, AlphaBound::LogAlpha(781, 500));
    }

    #[test]
    fn rejects_bad_windows() {
        let bad = DEFAULT_PLAN.replacen("sequence = \"U\"", "sequence = \"W\"", 1);
        assert!(SearchPlan::parse(&bad).is_err());
        let both = DEFAULT_PLAN.replacen("n_log_alpha_max = \"15.62\"", "n_log_alpha_max = \"15.62\"\nalpha_max = \"alpha:3\"", 1);
        assert!(SearchPlan::parse(&both).is_err());
        assert!(SearchPlan::parse("version = 2").is_err());
    }
}
