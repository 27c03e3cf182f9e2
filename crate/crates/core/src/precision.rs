//! Precision matrices of the null, structural-change and heteroscedastic models.

use std::io::Write;

use crate::dense::Matrix;
use crate::error::{invalid, numerical, Result};
use crate::model::{check_rho, CoefficientSchedule, VarianceSchedule};

/// Symmetric tridiagonal matrix stored as its diagonal and first off-diagonal.
///
/// `diag[i]` is entry `(i+1, i+1)` in 1-based notation and `offdiag[i]` is
/// entry `(i+1, i+2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(invalid("tridiagonal matrix needs n >= 1"));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(invalid(format!(
                "off-diagonal length {} does not match diagonal length {}",
                offdiag.len(),
                diag.len()
            )));
        }
        Ok(SymTridiagonal { diag, offdiag })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn is_finite(&self) -> bool {
        self.diag.iter().chain(&self.offdiag).all(|v| v.is_finite())
    }

    pub fn scaled(&self, c: f64) -> Self {
        SymTridiagonal {
            diag: self.diag.iter().map(|d| d * c).collect(),
            offdiag: self.offdiag.iter().map(|e| e * c).collect(),
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.offdiag[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.offdiag[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    /// Union of the Gershgorin discs as an interval.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.offdiag[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Max-row-sum norm.
    pub fn norm_inf(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }

    pub fn to_dense(&self) -> Matrix {
        let n = self.n();
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m.set(i, i, self.diag[i]);
            if i + 1 < n {
                m.set(i, i + 1, self.offdiag[i]);
                m.set(i + 1, i, self.offdiag[i]);
            }
        }
        m
    }

    /// Writes the nonzero band as `i,j,value` triplets (1-based).
    pub fn write_band_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["i", "j", "value"])?;
        for i in 0..self.n() {
            if i > 0 {
                wtr.write_record(&[(i + 1).to_string(), i.to_string(), self.offdiag[i - 1].to_string()])?;
            }
            wtr.write_record(&[(i + 1).to_string(), (i + 1).to_string(), self.diag[i].to_string()])?;
            if i + 1 < self.n() {
                wtr.write_record(&[(i + 1).to_string(), (i + 2).to_string(), self.offdiag[i].to_string()])?;
            }
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Inverse covariance of `(y_1, ..., y_n)` for the schedule, with innovation variance `sigma2`.
pub fn precision_matrix(schedule: &CoefficientSchedule, n: usize, sigma2: f64) -> Result<SymTridiagonal> {
    if n < 2 {
        return Err(invalid("precision matrix needs n >= 2"));
    }
    if !sigma2.is_finite() || sigma2 <= 0.0 {
        return Err(invalid(format!("variance must be positive, got {sigma2}")));
    }
    schedule.check_fits(n)?;
    let coef = schedule.coefficients(n);
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let next = coef[i + 1];
        diag.push((1.0 + next * next) / sigma2);
        off.push(-next / sigma2);
    }
    diag.push(1.0 / sigma2);
    SymTridiagonal::new(diag, off)
}

/// Null precision with the last diagonal entry raised to `1 + rho^2`, a Toeplitz matrix.
pub fn perturbed_null_precision(rho: f64, n: usize) -> Result<SymTridiagonal> {
    check_rho(rho)?;
    if n < 1 {
        return Err(invalid("n must be >= 1"));
    }
    SymTridiagonal::new(vec![1.0 + rho * rho; n], vec![-rho; n - 1])
}

/// Exact inverse covariance of `y_t = rho y_{t-1} + sigma_t z_t`:
/// diagonal `1/sigma_i^2 + rho^2/sigma_{i+1}^2`, last `1/sigma_n^2`,
/// off-diagonal `-rho/sigma_{i+1}^2`.
pub fn hetero_precision(rho: f64, vs: &VarianceSchedule, n: usize) -> Result<SymTridiagonal> {
    let s2 = hetero_inputs(rho, vs, n)?;
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        diag.push(1.0 / s2[i] + rho * rho / s2[i + 1]);
        off.push(-rho / s2[i + 1]);
    }
    diag.push(1.0 / s2[n - 1]);
    SymTridiagonal::new(diag, off)
}

/// The heteroscedastic matrix with the variances multiplying rather than dividing:
/// diagonal `sigma_i^2 + sigma_{i+1}^2 rho^2`, last `sigma_n^2`, off-diagonal
/// `-sigma_{i+1}^2 rho`.
///
/// This is [`hetero_precision`] evaluated at the reciprocal variances, so its
/// outliers sit on the opposite side of the bulk.
pub fn hetero_display_matrix(rho: f64, vs: &VarianceSchedule, n: usize) -> Result<SymTridiagonal> {
    let s2 = hetero_inputs(rho, vs, n)?;
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        diag.push(s2[i] + s2[i + 1] * rho * rho);
        off.push(-s2[i + 1] * rho);
    }
    diag.push(s2[n - 1]);
    SymTridiagonal::new(diag, off)
}

fn hetero_inputs(rho: f64, vs: &VarianceSchedule, n: usize) -> Result<Vec<f64>> {
    check_rho(rho)?;
    if n < 2 {
        return Err(invalid("heteroscedastic matrix needs n >= 2"));
    }
    if let Some(s) = vs.segments().iter().find(|s| s.k + s.h - 1 > n) {
        return Err(invalid(format!("variance segment at k={} exceeds n={n}", s.k)));
    }
    Ok(vs.variances(n))
}

/// Cholesky factor of a positive definite tridiagonal matrix: `T = L L^T`
/// with `L` lower bidiagonal. Returns `(diag(L), subdiag(L))`.
pub(crate) fn tridiagonal_cholesky(t: &SymTridiagonal) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = t.n();
    let mut l = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n.saturating_sub(1));
    let mut prev = 0.0;
    for i in 0..n {
        let mut d = t.diag()[i];
        if i > 0 {
            let si = t.offdiag()[i - 1] / prev;
            s.push(si);
            d -= si * si;
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(numerical(format!("matrix is not positive definite (pivot {i} = {d})")));
        }
        prev = d.sqrt();
        l.push(prev);
    }
    Ok((l, s))
}

/// Dense inverse of a positive definite tridiagonal matrix.
pub fn covariance_from_precision(t: &SymTridiagonal) -> Result<Matrix> {
    let n = t.n();
    let (l, s) = tridiagonal_cholesky(t)?;
    let mut out = Matrix::zeros(n);
    let mut w = vec![0.0; n];
    for col in 0..n {
        // forward: L w = e_col
        for i in 0..n {
            let rhs = if i == col { 1.0 } else { 0.0 };
            w[i] = if i == 0 { rhs / l[0] } else { (rhs - s[i - 1] * w[i - 1]) / l[i] };
        }
        // backward: L^T x = w
        for i in (0..n).rev() {
            w[i] = if i + 1 == n { w[i] / l[i] } else { (w[i] - s[i] * w[i + 1]) / l[i] };
        }
        for i in 0..n {
            out.set(i, col, w[i]);
        }
    }
    for i in 0..n {
        for j in 0..i {
            let avg = 0.5 * (out.get(i, j) + out.get(j, i));
            out.set(i, j, avg);
            out.set(j, i, avg);
        }
    }
    Ok(out)
}
