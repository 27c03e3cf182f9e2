use serde::{Deserialize, Serialize};

use crate::dense::{householder_tridiagonalize, Matrix};
use crate::error::{invalid, Result};
use crate::model::PanelData;
use crate::model::CoefficientSchedule;
use crate::outlier::{general_scm_outliers, OutlierSet};
use crate::panel::{
    clime_estimate, hausdorff_distance, mean_absolute_error, sample_covariance, yule_walker_rho, Centering,
    LambdaRule, SymmetrizeRule,
};
use crate::spectral::{eigenvalues_symtridiag, support_bounds, Spectrum, DEFAULT_TOL};

/// How estimated outliers are read off the estimated spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutlierMode {
    /// The `left` smallest and `right` largest eigenvalues, whatever their position.
    KnownCount { left: usize, right: usize },
    /// Eigenvalues outside `[a, b]` computed at the estimated coefficient.
    Threshold,
}

impl Default for OutlierMode {
    fn default() -> Self {
        OutlierMode::KnownCount { left: 1, right: 1 }
    }
}

/// Settings for panel-based outlier estimation.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EstimationConfig {
    pub lambda: LambdaRule,
    pub mode: OutlierMode,
    #[serde(default)]
    pub symmetrize: SymmetrizeRule,
    #[serde(default)]
    pub centering: Centering,
}

/// Eigenvalues of a dense symmetric matrix.
pub fn dense_eigenvalues(m: &Matrix) -> Result<Spectrum> {
    if !m.is_symmetric(1e-10 * m.frobenius().max(1.0)) {
        return Err(invalid("matrix must be symmetric"));
    }
    eigenvalues_symtridiag(&householder_tridiagonalize(m), DEFAULT_TOL)
}

/// Estimated outliers of a symmetric precision estimate.
pub fn estimate_outliers(omega_hat: &Matrix, rho_hat: f64, mode: OutlierMode) -> Result<OutlierSet> {
    let eigs = dense_eigenvalues(omega_hat)?;
    outliers_from_spectrum(&eigs, rho_hat, mode)
}

fn outliers_from_spectrum(eigs: &Spectrum, rho_hat: f64, mode: OutlierMode) -> Result<OutlierSet> {
    let ev = eigs.eigenvalues();
    match mode {
        OutlierMode::KnownCount { left, right } => {
            if left + right > ev.len() {
                return Err(invalid(format!("cannot take {left} + {right} eigenvalues of {}", ev.len())));
            }
            Ok(OutlierSet::new(ev[..left].to_vec(), ev[ev.len() - right..].to_vec()))
        }
        OutlierMode::Threshold => {
            let (a, b) = support_bounds(rho_hat)?;
            let (l, r) = eigs.outside(a, b);
            Ok(OutlierSet::new(l, r))
        }
    }
}

/// Outcome of one panel estimation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub rho_hat: f64,
    pub lambda: f64,
    pub outliers_hat: OutlierSet,
    /// Smallest and largest estimated eigenvalues.
    pub lambda1_hat: f64,
    pub lambdan_hat: f64,
    /// Distance between estimated and true outlier sets, when the truth is known.
    pub hausdorff: Option<f64>,
    /// Mean absolute error of the extreme eigenvalues against the first left and
    /// last right true outliers, when the truth has both.
    pub mae: Option<f64>,
}

/// Full pipeline: covariance, precision estimate, coefficient estimate, outliers and scores.
pub fn detect(panel: &PanelData, config: &EstimationConfig, truth: Option<&OutlierSet>) -> Result<DetectionReport> {
    let sigma_hat = sample_covariance(panel, config.centering)?;
    let lambda = config.lambda.value(panel.n(), panel.b())?;
    let omega = clime_estimate(&sigma_hat, lambda, config.symmetrize)?;
    let rho_hat = yule_walker_rho(panel)?;
    let eigs = dense_eigenvalues(&omega)?;
    let outliers_hat = outliers_from_spectrum(&eigs, rho_hat, config.mode)?;
    let lambda1_hat = eigs.min();
    let lambdan_hat = eigs.max();
    let hausdorff = truth.map(|t| hausdorff_distance(&outliers_hat.values(), &t.values()));
    let mae = truth.and_then(|t| match (t.left.first(), t.right.last()) {
        (Some(&l), Some(&r)) => Some(mean_absolute_error((lambda1_hat, lambdan_hat), (l, r))),
        _ => None,
    });
    Ok(DetectionReport { rho_hat, lambda, outliers_hat, lambda1_hat, lambdan_hat, hausdorff, mae })
}

/// Analytic outliers of a generating schedule, or `None` when it has none.
pub fn analytic_truth(schedule: &CoefficientSchedule, sigma2: f64) -> Result<Option<OutlierSet>> {
    let set = general_scm_outliers(schedule)?.for_variance(sigma2);
    Ok((!set.is_empty()).then_some(set))
}
