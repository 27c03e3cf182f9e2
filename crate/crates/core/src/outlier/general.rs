use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Result, ScmError};
use crate::model::{check_rho, CoefficientSchedule};
use crate::outlier::{
    bracket_intervals, f_inverse, interval_scm_outliers, single_scm_outliers, BracketReport, OutlierSet,
};

/// Root tolerance used for segments longer than one.
const ROOT_TOL: f64 = 1e-12;

/// Gaps shorter than this trigger a warning about interaction between segments.
const SHORT_GAP: usize = 50;

/// Multiset union of the per-segment outliers of a schedule.
///
/// Segments with `|rho + eps| <= |rho|` contribute nothing and are skipped with a warning.
pub fn general_scm_outliers(schedule: &CoefficientSchedule) -> Result<OutlierSet> {
    let rho = schedule.rho();
    if let Some(gap) = schedule.min_gap() {
        if gap < SHORT_GAP {
            log::warn!("segments are only {gap} steps apart; outliers interact at this range");
        }
    }
    let mut total = OutlierSet::empty();
    for s in schedule.segments() {
        if (rho + s.eps).abs() <= rho.abs() {
            log::warn!("segment at k={} has |rho + eps| <= |rho| and produces no outliers", s.k);
            continue;
        }
        let part = if s.h == 1 { single_scm_outliers(rho, s.eps)? } else { interval_scm_outliers(rho, s.eps, s.h, ROOT_TOL)? };
        total = total.union(&part);
    }
    Ok(total)
}

/// Recovers the change magnitudes of length-one segments from paired outliers.
///
/// Left values are sorted ascending and right values descending, then paired by
/// position. Each pair satisfies `finv(m) finv(M) = -rho^2 / (rho + eps)^2`,
/// and `eps` is taken with the sign of `rho`.
pub fn identify_magnitudes(rho: f64, outliers: &OutlierSet) -> Result<Vec<f64>> {
    check_rho(rho)?;
    if outliers.left.len() != outliers.right.len() {
        return Err(ScmError::InconsistentInput(format!(
            "{} left and {} right outliers cannot be paired",
            outliers.left.len(),
            outliers.right.len()
        )));
    }
    let mut left = outliers.left.clone();
    let mut right = outliers.right.clone();
    left.sort_by(f64::total_cmp);
    right.sort_by(|x, y| y.total_cmp(x));
    let mut out = Vec::with_capacity(left.len());
    for (&m, &big_m) in left.iter().zip(&right) {
        let prod = f_inverse(rho, m)? * f_inverse(rho, big_m)?;
        if !(prod < 0.0) {
            return Err(ScmError::InconsistentInput(format!(
                "pair ({m}, {big_m}) gives a non-negative product {prod}"
            )));
        }
        let shifted = rho.signum() * (-rho * rho / prod).sqrt();
        let eps = shifted - rho;
        if eps * rho <= 0.0 {
            return Err(ScmError::InconsistentInput(format!(
                "pair ({m}, {big_m}) implies eps = {eps}, whose sign differs from rho"
            )));
        }
        out.push(eps);
    }
    Ok(out)
}

/// Serialized outlier report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlierReport {
    pub rho: f64,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    /// Bracketing data at unit variance, keyed by 1-based segment number; segments
    /// without outliers are absent.
    pub brackets: BTreeMap<String, BracketReport>,
    /// `closed_form` when every contributing segment has length one, else `determinantal`.
    pub method: String,
}

/// Outliers of `schedule` together with their brackets, scaled for innovation variance `sigma2`.
pub fn outlier_report(schedule: &CoefficientSchedule, sigma2: f64) -> Result<OutlierReport> {
    let set = general_scm_outliers(schedule)?.for_variance(sigma2);
    let rho = schedule.rho();
    let mut brackets = BTreeMap::new();
    let mut all_single = true;
    for (i, s) in schedule.segments().iter().enumerate() {
        if (rho + s.eps).abs() <= rho.abs() {
            continue;
        }
        all_single &= s.h == 1;
        brackets.insert((i + 1).to_string(), bracket_intervals(rho, s.eps, s.h)?);
    }
    let method = if all_single { "closed_form" } else { "determinantal" };
    Ok(OutlierReport { rho, left: set.left, right: set.right, brackets, method: method.to_string() })
}
