//! Report types shared by the verifiers and the CLI.
//!
//! Every verifier emits the same JSON shape — `{name, params,
//! per_radius: [{r, lhs, rhs, margin}], pass}` — so downstream tooling
//! can treat them uniformly. Floats inside reports are rounded to 12
//! significant digits at construction time, which makes serialized
//! output byte-reproducible across runs and platforms.

use serde::{Deserialize, Serialize};

/// Rounds to 12 significant digits (the report serialization grain).
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("scientific notation round trip")
}

/// One radius entry of a verifier report. `margin = rhs − lhs`; the
/// verified inequality is `lhs ≤ rhs`, i.e. `margin ≥ 0`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RadiusRow {
    pub r: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

impl RadiusRow {
    pub fn new(r: f64, lhs: f64, rhs: f64) -> Self {
        RadiusRow { r: sig12(r), lhs: sig12(lhs), rhs: sig12(rhs), margin: sig12(rhs - lhs) }
    }
}

/// Uniform verifier report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifierReport {
    pub name: String,
    pub params: serde_json::Value,
    pub per_radius: Vec<RadiusRow>,
    pub pass: bool,
    /// Fraction of radii violating the inequality, for verifiers whose
    /// statements allow an exceptional set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation_fraction: Option<f64>,
    /// Free-form diagnostics (skipped-node fractions, outlier radii…).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerifierReport {
    pub fn new(name: impl Into<String>, params: serde_json::Value) -> Self {
        VerifierReport {
            name: name.into(),
            params,
            per_radius: Vec::new(),
            pass: false,
            violation_fraction: None,
            notes: Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_rounds_to_twelve_digits() {
        assert_eq!(sig12(1.0 / 3.0), 0.333333333333);
        assert_eq!(sig12(123456789012345.0), 123456789012000.0);
        assert_eq!(sig12(0.0), 0.0);
        assert_eq!(sig12(-2.5e-7), -2.5e-7);
        assert!(sig12(f64::INFINITY).is_infinite());
    }

    #[test]
    fn report_serializes_with_documented_shape() {
        let mut rep = VerifierReport::new("demo", serde_json::json!({"eps": 0.5}));
        rep.per_radius.push(RadiusRow::new(2.0, 1.0, 3.0));
        rep.pass = true;
        let v = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["name"], "demo");
        assert_eq!(v["per_radius"][0]["margin"], 2.0);
        assert_eq!(v["pass"], true);
        assert!(v.get("violation_fraction").is_none());
    }
}
