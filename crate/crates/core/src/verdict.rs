use serde::Serialize;
use serde_json::Value;

/// Three-valued outcome of a check.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    /// `evidence` summarizes the domain that was covered.
    Verified { evidence: String },
    /// `witness` is enough to replay the failing case.
    Refuted { witness: Value },
    /// A budget ran out before the check could be decided.
    Inconclusive { budget: String },
}

impl Verdict {
    pub fn verified(evidence: impl Into<String>) -> Verdict {
        Verdict::Verified { evidence: evidence.into() }
    }

    pub fn refuted(witness: Value) -> Verdict {
        Verdict::Refuted { witness }
    }

    pub fn inconclusive(budget: impl Into<String>) -> Verdict {
        Verdict::Inconclusive { budget: budget.into() }
    }

    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    /// Severity used when several verdicts are merged: refuted dominates
    /// inconclusive, which dominates verified.
    pub fn severity(&self) -> u8 {
        match self {
            Verdict::Verified { .. } => 0,
            Verdict::Inconclusive { .. } => 1,
            Verdict::Refuted { .. } => 2,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Verified { .. } => "verified",
            Verdict::Refuted { .. } => "refuted",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }
}
