use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dense::Matrix;
use crate::error::{invalid, Result, ScmError};
use crate::panel::simplex::{solve_box_lp, LpFailure};

/// How the column solutions are merged into a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetrizeRule {
    /// Keep whichever of `w_ij`, `w_ji` has the smaller magnitude.
    #[default]
    SmallerMagnitude,
    /// Keep the plain minimum `min(w_ij, w_ji)`.
    Minimum,
}

/// Constraint level for the column programs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaRule {
    Fixed(f64),
    /// `c * sqrt(ln n / B)`.
    Auto { c: f64 },
}

impl Default for LambdaRule {
    fn default() -> Self {
        LambdaRule::Auto { c: 2.0 }
    }
}

impl LambdaRule {
    pub fn value(&self, n: usize, b: usize) -> Result<f64> {
        let v = match *self {
            LambdaRule::Fixed(l) => l,
            LambdaRule::Auto { c } => c * ((n as f64).ln() / b as f64).sqrt(),
        };
        if !(v > 0.0) || !v.is_finite() {
            return Err(invalid(format!("constraint level must be positive, got {v}")));
        }
        Ok(v)
    }
}

/// Solves `min |w|_1  s.t.  |S w - e_col|_inf <= lambda`.
pub fn clime_column(sigma_hat: &Matrix, col: usize, lambda: f64) -> Result<Vec<f64>> {
    let n = sigma_hat.n();
    if col >= n {
        return Err(invalid(format!("column {col} out of range for n = {n}")));
    }
    // split w = u - v with u, v >= 0, so the constraint matrix is [S, -S]
    let cols = 2 * n;
    let mut a = vec![0.0; n * cols];
    for i in 0..n {
        for j in 0..n {
            let s = sigma_hat.get(i, j);
            a[i * cols + j] = s;
            a[i * cols + n + j] = -s;
        }
    }
    let target = |i: usize| if i == col { 1.0 } else { 0.0 };
    let lo: Vec<f64> = (0..n).map(|i| target(i) - lambda).collect();
    let hi: Vec<f64> = (0..n).map(|i| target(i) + lambda).collect();
    let sol = solve_box_lp(&a, n, cols, &lo, &hi).map_err(|f| ScmError::EstimationFailure {
        column: col,
        reason: match f {
            LpFailure::Infeasible => format!("no column meets the residual bound {lambda}"),
            LpFailure::IterationLimit => "simplex iteration limit reached".to_string(),
        },
    })?;
    Ok((0..n).map(|j| sol.x[j] - sol.x[n + j]).collect())
}

/// Column-wise solutions, unsymmetrized: column `i` of the result solves program `i`.
pub fn clime_columns(sigma_hat: &Matrix, lambda: f64) -> Result<Matrix> {
    let n = sigma_hat.n();
    if !sigma_hat.is_symmetric(1e-12 * sigma_hat.frobenius().max(1.0)) {
        return Err(invalid("covariance estimate must be symmetric"));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(invalid(format!("lambda must be positive, got {lambda}")));
    }
    let cols: Vec<Vec<f64>> = (0..n).into_par_iter().map(|i| clime_column(sigma_hat, i, lambda)).collect::<Result<_>>()?;
    Ok(Matrix::from_fn(n, |i, j| cols[j][i]))
}

/// Merges `w_ij` and `w_ji` by `rule`.
pub fn symmetrize(w: &Matrix, rule: SymmetrizeRule) -> Matrix {
    Matrix::from_fn(w.n(), |i, j| {
        let (x, y) = (w.get(i, j), w.get(j, i));
        match rule {
            SymmetrizeRule::SmallerMagnitude => {
                if x.abs() <= y.abs() {
                    x
                } else {
                    y
                }
            }
            SymmetrizeRule::Minimum => x.min(y),
        }
    })
}

/// Constrained l1 precision estimate followed by symmetrization.
pub fn clime_estimate(sigma_hat: &Matrix, lambda: f64, rule: SymmetrizeRule) -> Result<Matrix> {
    Ok(symmetrize(&clime_columns(sigma_hat, lambda)?, rule))
}
