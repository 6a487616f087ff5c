//! Instance files: JSON documents carrying lists of expressions
//! (curves, hyperplane coefficient rows, vanishing-sum summands) that
//! are too structured for command-line flags.

use std::path::Path;

use nevlab_core::{
    parse_exact, parse_float, ExactExpPoly, FixedHyperplane, GaussianRational, GrowthScale,
    HoloCurve, MovingHyperplane, Scalar,
};
use num_complex::Complex64;
use serde::Deserialize;

use crate::CliError;

/// On-disk instance schema. Unused sections may be omitted.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    /// Curve components `[f₀, …, f_n]` as expression strings.
    #[serde(default)]
    pub curve: Vec<String>,
    /// Hyperplane coefficient rows; entries are expression strings
    /// (constants for fixed targets, slow-growth functions for moving
    /// ones).
    #[serde(default)]
    pub hyperplanes: Vec<Vec<String>>,
    /// Summands of a vanishing sum `f₀ + … + f_{n+1} = 0`.
    #[serde(default)]
    pub summands: Vec<String>,
    /// Coefficient-space degree for moving-target verification.
    #[serde(default)]
    pub t: Option<usize>,
}

impl InstanceFile {
    pub fn load(path: &Path) -> Result<InstanceFile, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Io(format!("cannot read instance file {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text).map_err(|e| {
            CliError::Usage(format!("malformed instance file {}: {e}", path.display()))
        })
    }

    pub fn exact_curve(&self) -> Result<HoloCurve<GaussianRational>, CliError> {
        if self.curve.is_empty() {
            return Err(CliError::Usage("instance file has no \"curve\" section".into()));
        }
        let comps = self
            .curve
            .iter()
            .map(|s| parse_exact(s).map_err(CliError::Core))
            .collect::<Result<Vec<_>, _>>()?;
        HoloCurve::new(comps).map_err(CliError::Core)
    }

    pub fn exact_summands(&self) -> Result<Vec<ExactExpPoly>, CliError> {
        if self.summands.is_empty() {
            return Err(CliError::Usage("instance file has no \"summands\" section".into()));
        }
        self.summands
            .iter()
            .map(|s| parse_exact(s).map_err(CliError::Core))
            .collect()
    }

    /// Hyperplanes with constant coefficients (fixed targets).
    pub fn fixed_hyperplanes(&self) -> Result<Vec<FixedHyperplane<GaussianRational>>, CliError> {
        if self.hyperplanes.is_empty() {
            return Err(CliError::Usage("instance file has no \"hyperplanes\" section".into()));
        }
        self.hyperplanes
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let coeffs = row
                    .iter()
                    .map(|s| {
                        let e = parse_exact(s).map_err(CliError::Core)?;
                        exact_constant(&e).ok_or_else(|| {
                            CliError::Usage(format!(
                                "hyperplane {i} coefficient {s:?} is not a constant; use \
                                 verify-moving-smt for function coefficients"
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                FixedHyperplane::new(coeffs).map_err(CliError::Core)
            })
            .collect()
    }

    /// Hyperplanes with slow-growth function coefficients, validated
    /// against the growth scale of the curve they will target.
    pub fn moving_hyperplanes(
        &self,
        scale: &GrowthScale,
    ) -> Result<Vec<MovingHyperplane>, CliError> {
        if self.hyperplanes.is_empty() {
            return Err(CliError::Usage("instance file has no \"hyperplanes\" section".into()));
        }
        self.hyperplanes
            .iter()
            .map(|row| {
                let coeffs = row
                    .iter()
                    .map(|s| parse_exact(s).map_err(CliError::Core))
                    .collect::<Result<Vec<_>, _>>()?;
                MovingHyperplane::new(coeffs, scale).map_err(CliError::Core)
            })
            .collect()
    }
}

/// The constant value of an exponential polynomial, if it is one.
fn exact_constant(e: &ExactExpPoly) -> Option<GaussianRational> {
    if e.is_zero() {
        return Some(GaussianRational::zero());
    }
    let terms = e.terms();
    if terms.len() == 1 && Scalar::is_zero(&terms[0].freq) && terms[0].coef.is_constant() {
        Some(terms[0].coef.constant_term())
    } else {
        None
    }
}

/// Parses an expression that must denote a single complex constant
/// (targets like `0`, `1`, `2i`, `1+1i`, `-1/2`).
pub fn constant_value(text: &str) -> Result<Complex64, CliError> {
    let f = parse_float(text).map_err(CliError::Core)?;
    if f.is_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if !f.is_polynomial() || f.max_poly_degree() != 0 {
        return Err(CliError::Usage(format!("{text:?} is not a constant value")));
    }
    f.eval(Complex64::new(0.0, 0.0)).map_err(CliError::Core)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_parse_and_functions_are_rejected() {
        assert_eq!(constant_value("2i").unwrap(), Complex64::new(0.0, 2.0));
        assert_eq!(constant_value("1+1i").unwrap(), Complex64::new(1.0, 1.0));
        assert_eq!(constant_value("-1/2").unwrap(), Complex64::new(-0.5, 0.0));
        assert!(constant_value("exp(z)").is_err());
        assert!(constant_value("z").is_err());
    }

    #[test]
    fn fixed_rows_require_constant_entries() {
        let inst = InstanceFile {
            curve: vec!["1".into(), "exp(z)".into()],
            hyperplanes: vec![vec!["1".into(), "z".into()]],
            ..Default::default()
        };
        assert!(matches!(inst.fixed_hyperplanes(), Err(CliError::Usage(_))));
    }
}
