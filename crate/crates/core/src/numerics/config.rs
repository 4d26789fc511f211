use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Series acceleration applied to sums with a non-root boundary argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AccelMode {
    None,
    AitkenIterated,
    LevinU,
    RichardsonOnPartialTotals,
}

impl fmt::Display for AccelMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AccelMode::None => "none",
            AccelMode::AitkenIterated => "aitken",
            AccelMode::LevinU => "levin",
            AccelMode::RichardsonOnPartialTotals => "richardson",
        };
        f.write_str(s)
    }
}

impl FromStr for AccelMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(AccelMode::None),
            "aitken" => Ok(AccelMode::AitkenIterated),
            "levin" => Ok(AccelMode::LevinU),
            "richardson" => Ok(AccelMode::RichardsonOnPartialTotals),
            other => Err(Error::Parse(format!("unknown acceleration mode {other}"))),
        }
    }
}

/// Evaluation settings shared by all evaluators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Requested absolute accuracy.
    pub target_tol: f64,
    /// Accuracy requested from accelerated sums on the unit circle.
    pub boundary_tol: f64,
    /// Budget of summed terms per series.
    pub max_terms: u64,
    pub accel_mode: AccelMode,
    /// Euler–Maclaurin order for the Hurwitz zeta tail.
    pub hurwitz_em_terms: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            target_tol: 1e-8,
            boundary_tol: 1e-6,
            max_terms: 2_000_000,
            accel_mode: AccelMode::LevinU,
            hurwitz_em_terms: 8,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.target_tol >= 1e-14) || !self.target_tol.is_finite() {
            return Err(Error::Domain(format!("target_tol {} below 1e-14", self.target_tol)));
        }
        if !(self.boundary_tol >= 1e-14) || !self.boundary_tol.is_finite() {
            return Err(Error::Domain(format!("boundary_tol {} below 1e-14", self.boundary_tol)));
        }
        if self.max_terms < 10 {
            return Err(Error::Domain(format!("max_terms {} below 10", self.max_terms)));
        }
        if self.hurwitz_em_terms == 0 || self.hurwitz_em_terms > 14 {
            return Err(Error::Domain("hurwitz_em_terms must lie in 1..=14".into()));
        }
        Ok(())
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.target_tol = tol;
        self
    }

    /// Stable text used in memo-cache keys.
    pub fn cache_tag(&self) -> String {
        format!(
            "tol={:e};btol={:e};max={};acc={};em={}",
            self.target_tol, self.boundary_tol, self.max_terms, self.accel_mode, self.hurwitz_em_terms
        )
    }
}
