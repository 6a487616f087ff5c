//! Radius-grid specifications: `min:max:count` with an optional fourth
//! field `linear` (default) or `log`.

use crate::CliError;

/// Parses a grid spec into a strictly increasing radius vector.
///
/// `count = 1` yields the single radius `min`; log spacing requires
/// `min > 0` (which every grid does anyway).
pub fn parse_radii(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 && parts.len() != 4 {
        return Err(CliError::Usage(format!(
            "radius grid must be min:max:count[:linear|log], got {spec:?}"
        )));
    }
    let min: f64 = parts[0]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad grid minimum {:?}", parts[0])))?;
    let max: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad grid maximum {:?}", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad grid count {:?}", parts[2])))?;
    let log = match parts.get(3).copied() {
        None | Some("linear") => false,
        Some("log") => true,
        Some(other) => {
            return Err(CliError::Usage(format!(
                "grid spacing must be linear or log, got {other:?}"
            )))
        }
    };
    if !(min.is_finite() && min > 0.0) {
        return Err(CliError::Usage(format!("grid minimum must be positive, got {min}")));
    }
    if count == 0 {
        return Err(CliError::Usage("grid count must be at least 1".into()));
    }
    if count == 1 {
        return Ok(vec![min]);
    }
    if !(max.is_finite() && max > min) {
        return Err(CliError::Usage(format!(
            "grid maximum must exceed the minimum, got {min}:{max}"
        )));
    }
    let n = (count - 1) as f64;
    let radii: Vec<f64> = (0..count)
        .map(|i| {
            let f = i as f64 / n;
            if log {
                (min.ln() + f * (max.ln() - min.ln())).exp()
            } else {
                min + f * (max - min)
            }
        })
        .collect();
    Ok(radii)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_and_log_grids() {
        assert_eq!(parse_radii("1:3:3").unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(parse_radii("2:2:1").unwrap(), vec![2.0]);
        let lg = parse_radii("1:100:3:log").unwrap();
        assert!((lg[1] - 10.0).abs() < 1e-12);
        assert_eq!(lg.len(), 3);
    }

    #[test]
    fn rejected_specs() {
        for bad in ["1:40", "0:40:5", "5:1:3", "1:40:0", "1:40:5:cubic", "x:40:5"] {
            assert!(parse_radii(bad).is_err(), "spec {bad:?} should be rejected");
        }
    }
}
