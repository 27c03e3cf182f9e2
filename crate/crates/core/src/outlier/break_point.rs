use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::precision::SymTridiagonal;
use crate::spectral::{eigenvalues_by_index, eigenvector_seeded, eigenvector_symtridiag, DEFAULT_TOL};

/// Break-point guesses from the eigenvectors of the extreme eigenvalues.
///
/// This is a heuristic: it works well empirically for isolated length-one
/// changes but carries no guarantee.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakEstimate {
    /// 1-based argmax of `|u_1|`, the eigenvector of the smallest eigenvalue.
    pub k_from_min: usize,
    /// 1-based argmax of `|u_n|`, the eigenvector of the largest eigenvalue.
    pub k_from_max: usize,
    pub peak_min: f64,
    pub peak_max: f64,
    /// False when both peaks are below `3 / sqrt(n)`, i.e. no entry stands out.
    pub localized: bool,
}

fn argmax_abs(v: &[f64]) -> (usize, f64) {
    let mut best = (0, 0.0);
    for (i, x) in v.iter().enumerate() {
        if x.abs() > best.1 {
            best = (i, x.abs());
        }
    }
    (best.0 + 1, best.1)
}

fn estimate(t: &SymTridiagonal, u1: Vec<f64>, un: Vec<f64>) -> BreakEstimate {
    let (k_from_min, peak_min) = argmax_abs(&u1);
    let (k_from_max, peak_max) = argmax_abs(&un);
    let floor = 3.0 / (t.n() as f64).sqrt();
    BreakEstimate { k_from_min, k_from_max, peak_min, peak_max, localized: peak_min >= floor || peak_max >= floor }
}

fn extremes(t: &SymTridiagonal) -> Result<(f64, f64)> {
    let n = t.n();
    let lo = eigenvalues_by_index(t, 0..1, DEFAULT_TOL)?[0];
    let hi = eigenvalues_by_index(t, n - 1..n, DEFAULT_TOL)?[0];
    Ok((lo, hi))
}

/// Argmax locations of the extreme eigenvectors of `t`.
pub fn locate_break_heuristic(t: &SymTridiagonal) -> Result<BreakEstimate> {
    let (lo, hi) = extremes(t)?;
    Ok(estimate(t, eigenvector_symtridiag(t, lo)?, eigenvector_symtridiag(t, hi)?))
}

/// As [`locate_break_heuristic`], with inverse iteration started from Gaussian vectors drawn from `seed`.
pub fn locate_break_seeded(t: &SymTridiagonal, seed: u64) -> Result<BreakEstimate> {
    let (lo, hi) = extremes(t)?;
    Ok(estimate(t, eigenvector_seeded(t, lo, seed)?, eigenvector_seeded(t, hi, seed.wrapping_add(1))?))
}
