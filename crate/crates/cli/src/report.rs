//! Output documents. Every subcommand emits a [`Document`] with the keys
//! `input`, `value`, `error_bound` and `provenance`; `verify` puts a
//! [`VerificationReport`] in `value`.

use serde::Serialize;
use serde_json::Value;

use k3mahler::numeric::BigReal;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Document {
    pub input: Value,
    pub value: Value,
    /// Absolute error bound of `value`; `None` for exact results.
    pub error_bound: Option<f64>,
    pub provenance: String,
}

impl Document {
    pub fn new(input: &impl Serialize, value: &impl Serialize, error_bound: Option<f64>, provenance: String) -> Self {
        Document {
            input: serde_json::to_value(input).expect("serializable input"),
            value: serde_json::to_value(value).expect("serializable value"),
            error_bound,
            provenance,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable document")
    }
}

/// One side of an identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Side {
    pub value: f64,
    pub error_bound: f64,
    pub method: String,
}

impl Side {
    pub fn new(x: &BigReal, method: impl Into<String>) -> Self {
        Side { value: x.to_f64(), error_bound: x.error_bound(), method: method.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub provenance: String,
}

impl SubCheck {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>, provenance: &str) -> Self {
        SubCheck { name: name.into(), pass, detail: detail.into(), provenance: provenance.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub identity: String,
    pub k: i64,
    pub lhs: Side,
    pub rhs: Side,
    pub abs_diff: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub sub_checks: Vec<SubCheck>,
}

impl VerificationReport {
    /// `pass` is set from the difference and the sub-checks.
    pub fn new(identity: String, k: i64, lhs: Side, rhs: Side, abs_diff: f64, tolerance: f64, sub_checks: Vec<SubCheck>) -> Self {
        let pass = abs_diff <= tolerance && sub_checks.iter().all(|c| c.pass);
        VerificationReport { identity, k, lhs, rhs, abs_diff, tolerance, pass, sub_checks }
    }

    pub fn to_text(&self) -> String {
        let mark = |b: bool| if b { "PASS" } else { "FAIL" };
        let mut s = format!(
            "{}  {}\n  lhs = {:.15} ± {:.1e}  [{}]\n  rhs = {:.15} ± {:.1e}  [{}]\n  |lhs - rhs| = {:.3e}  (tolerance {:.1e})\n",
            mark(self.pass),
            self.identity,
            self.lhs.value,
            self.lhs.error_bound,
            self.lhs.method,
            self.rhs.value,
            self.rhs.error_bound,
            self.rhs.method,
            self.abs_diff,
            self.tolerance
        );
        for c in &self.sub_checks {
            s.push_str(&format!("  {} {}: {}\n", mark(c.pass), c.name, c.detail));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn side(v: f64) -> Side {
        Side { value: v, error_bound: 0.0, method: "m".into() }
    }

    #[test]
    fn pass_needs_every_sub_check() {
        let ok = SubCheck::new("a", true, "", "");
        let bad = SubCheck::new("b", false, "", "");
        assert!(VerificationReport::new("x".into(), 0, side(1.0), side(1.0), 0.0, 1e-6, vec![ok.clone()]).pass);
        assert!(!VerificationReport::new("x".into(), 0, side(1.0), side(1.0), 0.0, 1e-6, vec![ok, bad]).pass);
        assert!(!VerificationReport::new("x".into(), 0, side(1.0), side(2.0), 1.0, 1e-6, vec![]).pass);
    }

    #[test]
    fn document_keys() {
        let d = Document::new(&1, &2, None, "p".into());
        let v: Value = serde_json::from_str(&d.to_json()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, ["error_bound", "input", "provenance", "value"]);
    }
}
