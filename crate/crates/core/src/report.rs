//! Structured verification results.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::fmt;

/// Outcome of checking one claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// A precondition of the claim does not hold for the input.
    Inapplicable,
    /// The search budget ran out before a decision was reached.
    Unknown,
    /// Consumed as an external fact, not machine-checked.
    Assumed,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inapplicable => "inapplicable",
            Verdict::Unknown => "unknown",
            Verdict::Assumed => "assumed",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A verification result for a single claim.
///
/// `evaluations` counts the elementary operations spent (assignments
/// evaluated, relation checks, ...). It is deterministic for a fixed
/// configuration, unlike wall-clock time, which is kept out of reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub claim: String,
    pub verdict: Verdict,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default)]
    pub evaluations: u64,
}

impl Report {
    pub fn new(claim: impl Into<String>, verdict: Verdict, detail: impl Into<String>) -> Self {
        Report {
            claim: claim.into(),
            verdict,
            detail: detail.into(),
            witness: None,
            evaluations: 0,
        }
    }

    pub fn pass(claim: impl Into<String>, detail: impl Into<String>) -> Self {
        Self::new(claim, Verdict::Pass, detail)
    }

    pub fn fail(claim: impl Into<String>, detail: impl Into<String>) -> Self {
        Self::new(claim, Verdict::Fail, detail)
    }

    pub fn inapplicable(claim: impl Into<String>, detail: impl Into<String>) -> Self {
        Self::new(claim, Verdict::Inapplicable, detail)
    }

    pub fn unknown(claim: impl Into<String>, detail: impl Into<String>) -> Self {
        Self::new(claim, Verdict::Unknown, detail)
    }

    pub fn with_witness(mut self, witness: Value) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn with_evaluations(mut self, evaluations: u64) -> Self {
        self.evaluations = evaluations;
        self
    }

    pub fn with_claim(mut self, claim: impl Into<String>) -> Self {
        self.claim = claim.into();
        self
    }

    pub fn is_pass(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.verdict.as_str().to_uppercase(), self.claim, self.detail)
    }
}

/// Folds several sub-results into one verdict: any fail wins, then unknown,
/// then inapplicable (only if nothing passed), otherwise pass.
pub fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
    let mut seen_fail = false;
    let mut seen_unknown = false;
    let mut seen_pass = false;
    let mut seen_inapplicable = false;
    for v in verdicts {
        match v {
            Verdict::Fail => seen_fail = true,
            Verdict::Unknown => seen_unknown = true,
            Verdict::Pass | Verdict::Assumed => seen_pass = true,
            Verdict::Inapplicable => seen_inapplicable = true,
        }
    }
    if seen_fail {
        Verdict::Fail
    } else if seen_unknown {
        Verdict::Unknown
    } else if seen_inapplicable && !seen_pass {
        Verdict::Inapplicable
    } else {
        Verdict::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combine_precedence() {
        use Verdict::*;
        assert_eq!(combine([Pass, Unknown, Fail]), Fail);
        assert_eq!(combine([Pass, Unknown]), Unknown);
        assert_eq!(combine([Inapplicable, Pass]), Pass);
        assert_eq!(combine([Inapplicable]), Inapplicable);
        assert_eq!(combine([Pass, Assumed]), Pass);
    }

    #[test]
    fn verdict_serializes_lowercase() {
        let r = Report::pass("x", "ok");
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"verdict\":\"pass\""));
        assert!(!s.contains("witness"));
    }
}
