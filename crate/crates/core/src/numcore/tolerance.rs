use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative thresholds shared by every rank decision and every approximate comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceProfile {
    /// Singular values below `tol_rank * sigma_max` are treated as zero.
    pub tol_rank: f64,
    /// Matrix residuals are compared against `tol_eq * max(1, norm)`.
    pub tol_eq: f64,
    /// Scalar comparisons.
    pub tol_norm: f64,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        Self {
            tol_rank: 1e-10,
            tol_eq: 1e-8,
            tol_norm: 1e-8,
        }
    }
}

impl ToleranceProfile {
    pub fn new(tol_rank: f64, tol_eq: f64, tol_norm: f64) -> Result<Self> {
        for (name, value) in [("tol_rank", tol_rank), ("tol_eq", tol_eq), ("tol_norm", tol_norm)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidTolerance(format!(
                    "{name} must be finite and strictly positive, got {value}"
                )));
            }
        }
        let profile = Self {
            tol_rank,
            tol_eq,
            tol_norm,
        };
        if !profile.is_recommended() {
            log::warn!("tol_rank ({tol_rank:e}) exceeds tol_eq ({tol_eq:e})");
        }
        Ok(profile)
    }

    /// `tol_rank <= tol_eq`.
    pub fn is_recommended(&self) -> bool {
        self.tol_rank <= self.tol_eq
    }

    /// Threshold for a matrix residual measured against an operator of norm `scale`.
    pub fn eq_threshold(&self, scale: f64) -> f64 {
        self.tol_eq * scale.max(1.0)
    }

    /// Lower bound a minimum eigenvalue may reach and still count as nonnegative.
    pub fn psd_threshold(&self, scale: f64) -> f64 {
        -self.tol_rank * scale.max(1.0)
    }
}
