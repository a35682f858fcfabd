use std::collections::BTreeMap;

use serde::Serialize;

use crate::scalar::{Mode, Scalar};

/// Default absolute tolerance on float slacks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Outcome of one inequality or identity check.
///
/// `slack` is oriented so that the check passes iff `slack >= -tol`
/// (float) or `slack >= 0` (exact).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub check: String,
    pub params: BTreeMap<String, Scalar>,
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub slack: Scalar,
    pub pass: bool,
    pub tol: f64,
    pub mode: Mode,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Scalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerifyReport {
    /// Builds a report from `lhs >= rhs`, with `slack = lhs - rhs` supplied by the
    /// caller (it is often cheaper or more precise to compute directly).
    pub fn new(
        check: impl Into<String>,
        lhs: impl Into<Scalar>,
        rhs: impl Into<Scalar>,
        slack: impl Into<Scalar>,
        tol: f64,
    ) -> Self {
        let slack = slack.into();
        let mode = slack.mode();
        let tol = if mode == Mode::Exact { 0.0 } else { tol };
        Self {
            check: check.into(),
            params: BTreeMap::new(),
            lhs: lhs.into(),
            rhs: rhs.into(),
            pass: slack.passes(tol),
            slack,
            tol,
            mode,
            details: BTreeMap::new(),
            note: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Scalar>) -> Self {
        self.params.insert(key.to_owned(), value.into());
        self
    }

    pub fn detail(mut self, key: &str, value: impl Into<Scalar>) -> Self {
        self.details.insert(key.to_owned(), value.into());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Forces a failure (used when a secondary condition of the check fails).
    pub fn fail(mut self, note: impl Into<String>) -> Self {
        self.pass = false;
        self.note = Some(note.into());
        self
    }

    /// `key=value` pairs joined by `;`, in key order.
    pub fn params_string(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Fixed CSV header used by [`VerifyReport::csv_record`].
pub const CSV_HEADER: [&str; 9] = [
    "check", "params", "lhs", "rhs", "slack", "pass", "tol", "mode", "note",
];

impl VerifyReport {
    pub fn csv_record(&self) -> [String; 9] {
        [
            self.check.clone(),
            self.params_string(),
            self.lhs.to_string(),
            self.rhs.to_string(),
            self.slack.to_string(),
            self.pass.to_string(),
            format!("{:e}", self.tol),
            self.mode.to_string(),
            self.note.clone().unwrap_or_default(),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn pass_iff_slack_within_tol() {
        let r = VerifyReport::new("t", 1.0, 1.0 + 5e-10, -5e-10, 1e-9);
        assert!(r.pass);
        let r = VerifyReport::new("t", 1.0, 1.1, -0.1, 1e-9);
        assert!(!r.pass);
        let neg = Rational::new((-1).into(), 10i64.pow(15).into());
        let r = VerifyReport::new("t", Scalar::int(0), neg.clone(), -neg, 1e-9);
        assert!(r.pass);
        assert_eq!(r.tol, 0.0);
        assert_eq!(r.mode, Mode::Exact);
    }

    #[test]
    fn params_render_in_key_order() {
        let r = VerifyReport::new("t", 0.0, 0.0, 0.0, 1e-9)
            .param("b", 2i64)
            .param("a", Scalar::Exact(Rational::new(5.into(), 3.into())));
        assert_eq!(r.params_string(), "a=5/3;b=2");
    }
}
