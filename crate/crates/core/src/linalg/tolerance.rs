use crate::error::{Error, Result};

/// Residual thresholds shared by every check in the toolkit.
///
/// `rtol` bounds relative residuals (eigen-equations, round trips, unitarity);
/// `atol` bounds quantities that are expected to vanish outright.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    pub rtol: f64,
    pub atol: f64,
}

impl TolerancePolicy {
    pub const DEFAULT_RTOL: f64 = 1e-9;
    pub const DEFAULT_ATOL: f64 = 1e-10;

    pub fn new(rtol: f64, atol: f64) -> Result<Self> {
        if !(rtol > 0.0 && rtol.is_finite()) {
            return Err(Error::InvalidInput(format!("rtol must be positive, got {rtol}")));
        }
        if !(atol > 0.0 && atol.is_finite()) {
            return Err(Error::InvalidInput(format!("atol must be positive, got {atol}")));
        }
        Ok(Self { rtol, atol })
    }

    /// `|a − b| ≤ rtol · max(1, |a|, |b|)`.
    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.rtol * 1f64.max(a.abs()).max(b.abs())
    }
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            rtol: Self::DEFAULT_RTOL,
            atol: Self::DEFAULT_ATOL,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive() {
        assert!(TolerancePolicy::new(0.0, 1e-10).is_err());
        assert!(TolerancePolicy::new(1e-9, -1.0).is_err());
        assert!(TolerancePolicy::new(1e-9, f64::NAN).is_err());
        assert_eq!(
            TolerancePolicy::new(1e-9, 1e-10).unwrap(),
            TolerancePolicy::default()
        );
    }

    #[test]
    fn close_is_relative_above_one() {
        let tol = TolerancePolicy::default();
        assert!(tol.close(1e6, 1e6 + 1e-4));
        assert!(!tol.close(1.0, 1.0 + 1e-8));
    }
}
