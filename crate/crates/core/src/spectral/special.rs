//! Closed-form eigenpairs of the Toeplitz precision and related special functions.

use std::f64::consts::PI;

use crate::error::{domain, invalid, Result};
use crate::model::check_rho;

/// The `k`-th smallest (1-based) eigenpair of the Toeplitz tridiagonal matrix
/// with diagonal `1 + rho^2` and off-diagonal `-rho`.
///
/// The sine family is indexed in decreasing eigenvalue order when `rho < 0`,
/// so the index is reversed there.
pub fn perturbed_eigenpair_closed_form(rho: f64, n: usize, k: usize) -> Result<(f64, Vec<f64>)> {
    check_rho(rho)?;
    if k < 1 || k > n {
        return Err(invalid(format!("eigen index {k} outside 1..={n}")));
    }
    let theta = angle(rho, n, k);
    let c = (2.0 / (n + 1) as f64).sqrt();
    let v = (1..=n).map(|j| c * (j as f64 * theta).sin()).collect();
    Ok((toeplitz_symbol(rho, theta), v))
}

fn angle(rho: f64, n: usize, k: usize) -> f64 {
    let kk = if rho > 0.0 { k } else { n + 1 - k };
    kk as f64 * PI / (n + 1) as f64
}

fn toeplitz_symbol(rho: f64, theta: f64) -> f64 {
    1.0 - 2.0 * rho * theta.cos() + rho * rho
}

/// All closed-form eigenvalues in ascending order.
pub fn perturbed_eigenvalues_closed_form(rho: f64, n: usize) -> Result<Vec<f64>> {
    check_rho(rho)?;
    Ok((1..=n).map(|k| toeplitz_symbol(rho, angle(rho, n, k))).collect())
}

/// `(1/pi) int_0^{2pi} sin(k1 x) sin(k2 x) / (a + cos x) dx` for `|a| > 1`.
pub fn sine_kernel_g(a: f64, k1: u32, k2: u32) -> Result<f64> {
    if !(a.abs() > 1.0) || !a.is_finite() {
        return Err(domain(format!("sine kernel needs |a| > 1, got {a}")));
    }
    if k1 == 0 || k2 == 0 {
        return Err(invalid("sine kernel indices must be positive"));
    }
    let s = (a * a - 1.0).sqrt();
    let z1 = -a - s;
    let z2 = -a + s;
    // the root inside the unit disc carries the closed form
    let (inner, outer) = if a > 1.0 { (z2, z1) } else { (z1, z2) };
    let diff = k1.abs_diff(k2) as i32;
    let half = (inner.powi(diff) - inner.powi((k1 + k2) as i32)) / (inner - outer);
    Ok(2.0 * half)
}

/// Chebyshev polynomial of the second kind by its three-term recurrence.
pub fn chebyshev_u(nn: u32, x: f64) -> f64 {
    let mut prev = 1.0;
    if nn == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for _ in 1..nn {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Determinant of the `nn x nn` tridiagonal matrix with unit off-diagonals,
/// diagonal `2x`, first diagonal entry `2x + f` and last `2x + g`.
pub fn det_bordered_tridiag(x: f64, f: f64, g: f64, nn: u32) -> Result<f64> {
    if nn < 2 {
        return Err(invalid("bordered determinant needs nn >= 2"));
    }
    Ok((2.0 * x + f + g) * chebyshev_u(nn - 1, x) + (f * g - 1.0) * chebyshev_u(nn - 2, x))
}
