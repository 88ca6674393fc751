//! Structured audit outcomes: one inequality per report, with the margin
//! convention pass <=> margin = rhs - lhs >= 0.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditStatus {
    Pass,
    Fail,
    Inconclusive,
}

/// Outcome of one inequality audit. `anchor` states the inequality being
/// checked, `params` the instance it was checked on.
#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub name: String,
    pub anchor: String,
    pub params: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub status: AuditStatus,
}

impl AuditReport {
    /// Build a pass/fail report for the claim lhs <= rhs.
    pub fn from_bound(
        name: impl Into<String>,
        anchor: impl Into<String>,
        params: impl Into<String>,
        lhs: f64,
        rhs: f64,
    ) -> Self {
        let margin = rhs - lhs;
        AuditReport {
            name: name.into(),
            anchor: anchor.into(),
            params: params.into(),
            lhs,
            rhs,
            margin,
            status: if margin >= 0.0 {
                AuditStatus::Pass
            } else {
                AuditStatus::Fail
            },
        }
    }

    /// A report whose precondition could not be verified; lhs/rhs are kept
    /// for the record but assert nothing.
    pub fn inconclusive(
        name: impl Into<String>,
        anchor: impl Into<String>,
        params: impl Into<String>,
        lhs: f64,
        rhs: f64,
    ) -> Self {
        AuditReport {
            name: name.into(),
            anchor: anchor.into(),
            params: params.into(),
            lhs,
            rhs,
            margin: rhs - lhs,
            status: AuditStatus::Inconclusive,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == AuditStatus::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn margin_sign_convention() {
        let pass = AuditReport::from_bound("a", "x <= y", "", 1.0, 2.0);
        assert!(pass.passed());
        assert_eq!(pass.margin, 1.0);
        let fail = AuditReport::from_bound("a", "x <= y", "", 2.0, 1.0);
        assert_eq!(fail.status, AuditStatus::Fail);
    }
}
