use crate::error::{invalid, Result};
use crate::model::check_rho;
use crate::outlier::{f_raw, OutlierSet};
use crate::spectral::support_bounds;

fn check_eps(eps: f64) -> Result<()> {
    if !eps.is_finite() || eps == 0.0 {
        return Err(invalid(format!("change magnitude must be finite and nonzero, got {eps}")));
    }
    Ok(())
}

/// The two roots `(s, t)`, `s < t`, of the length-one determinantal equation in
/// the unit-disc variable. Their product is `-rho^2 / (rho + eps)^2`.
pub fn single_scm_roots(rho: f64, eps: f64) -> Result<(f64, f64)> {
    check_rho(rho)?;
    check_eps(eps)?;
    let c = eps + rho;
    if c == 0.0 {
        return Err(crate::error::ScmError::SingularParameter("rho + eps = 0".into()));
    }
    let e = eps * (eps + 2.0 * rho);
    let re = rho * e;
    let disc = (re * re + 4.0 * rho * rho * c * c).sqrt();
    let denom = 2.0 * c * c;
    Ok(((re - disc) / denom, (re + disc) / denom))
}

/// Outliers of the length-one change `(rho, eps)`: empty when `|rho| >= |rho + eps|`,
/// otherwise one left value `m` and one right value `M`.
pub fn single_scm_outliers(rho: f64, eps: f64) -> Result<OutlierSet> {
    check_rho(rho)?;
    check_eps(eps)?;
    if rho.abs() >= (rho + eps).abs() {
        return Ok(OutlierSet::empty());
    }
    let (s, t) = single_scm_roots(rho, eps)?;
    let (m, big_m) = if rho > 0.0 { (f_raw(rho, t), f_raw(rho, s)) } else { (f_raw(rho, s), f_raw(rho, t)) };
    Ok(OutlierSet { left: vec![m], right: vec![big_m] })
}

/// `(m, (M - b) / eps^2)`; tends to `(0, 1)` as `|eps|` grows.
pub fn epsilon_limit_checks(rho: f64, eps: f64) -> Result<(f64, f64)> {
    let set = single_scm_outliers(rho, eps)?;
    if set.is_empty() {
        return Err(invalid(format!("(rho, eps) = ({rho}, {eps}) produces no outliers")));
    }
    let (_, b) = support_bounds(rho)?;
    Ok((set.left[0], (set.right[0] - b) / (eps * eps)))
}
