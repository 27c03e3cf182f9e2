//! Outlier eigenvalues of structural-change precision matrices.
//!
//! An outlier is a limit of eigenvalues that stays outside the support
//! `[a, b]` of the limiting spectral law as `n` grows. The solvers here
//! return the limits themselves, which finite matrices approach
//! geometrically fast in the distance from the change to either end.

mod break_point;
mod closed_form;
mod determinant;
mod general;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::model::check_rho;
use crate::spectral::support_bounds;

pub use break_point::{locate_break_heuristic, locate_break_seeded, BreakEstimate};
pub use closed_form::{epsilon_limit_checks, single_scm_outliers, single_scm_roots};
pub use determinant::{
    bracket_intervals, determinant_matrix, determinant_value, interval_scm_outliers, interval_scm_outliers_with,
    BracketReport, RootScan, DEFAULT_PANELS,
};
pub use general::{general_scm_outliers, identify_magnitudes, outlier_report, OutlierReport};

/// Left outliers below `a` and right outliers above `b`, as ascending multisets.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OutlierSet {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

impl OutlierSet {
    pub fn new(mut left: Vec<f64>, mut right: Vec<f64>) -> Self {
        left.sort_by(f64::total_cmp);
        right.sort_by(f64::total_cmp);
        OutlierSet { left, right }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty() && self.right.is_empty()
    }

    pub fn len(&self) -> usize {
        self.left.len() + self.right.len()
    }

    /// All values, left then right, ascending.
    pub fn values(&self) -> Vec<f64> {
        self.left.iter().chain(&self.right).copied().collect()
    }

    /// Multiset union.
    pub fn union(&self, other: &OutlierSet) -> OutlierSet {
        OutlierSet::new(
            self.left.iter().chain(&other.left).copied().collect(),
            self.right.iter().chain(&other.right).copied().collect(),
        )
    }

    /// Outliers of the precision matrix when the innovation variance is `sigma2`.
    /// The precision scales as `1 / sigma2`, and so do its outliers.
    pub fn for_variance(&self, sigma2: f64) -> OutlierSet {
        OutlierSet {
            left: self.left.iter().map(|v| v / sigma2).collect(),
            right: self.right.iter().map(|v| v / sigma2).collect(),
        }
    }
}

/// `1 + rho^2 - rho (x + 1/x)` for `0 < |x| < 1`.
pub fn f_transform(rho: f64, x: f64) -> Result<f64> {
    check_rho(rho)?;
    if !(x.abs() < 1.0) || x == 0.0 {
        return Err(domain(format!("f_transform needs 0 < |x| < 1, got {x}")));
    }
    Ok(f_raw(rho, x))
}

#[inline]
pub(crate) fn f_raw(rho: f64, x: f64) -> f64 {
    1.0 + rho * rho - rho * (x + 1.0 / x)
}

/// The root of `rho x^2 - (1 + rho^2 - z) x + rho = 0` inside the unit disc.
pub fn f_inverse(rho: f64, z: f64) -> Result<f64> {
    let (a, b) = support_bounds(rho)?;
    if !(z > 0.0) || !z.is_finite() || (z >= a && z <= b) {
        return Err(domain(format!("f_inverse needs z > 0 outside [{a}, {b}], got {z}")));
    }
    Ok(f_inverse_raw(rho, z))
}

#[inline]
pub(crate) fn f_inverse_raw(rho: f64, z: f64) -> f64 {
    let s = 1.0 + rho * rho - z;
    let disc = (s * s - 4.0 * rho * rho).max(0.0).sqrt();
    // the two roots multiply to one; take the large one stably and invert it
    let big = (s + s.signum() * disc) / (2.0 * rho);
    1.0 / big
}
