//! Closed-form outliers of a single coefficient change against computed eigenvalues.

use scm_spectra::model::CoefficientSchedule;
use scm_spectra::outlier::{single_scm_outliers, single_scm_roots};
use scm_spectra::precision::precision_matrix;
use scm_spectra::spectral::{extreme_eigenvalues, support_bounds, DEFAULT_TOL};

fn main() -> scm_spectra::error::Result<()> {
    for (rho, eps) in [(0.3, 0.2), (0.3, -0.2), (-0.5, -0.4), (0.1, 1.5)] {
        let (a, b) = support_bounds(rho)?;
        let set = single_scm_outliers(rho, eps)?;
        let t = precision_matrix(&CoefficientSchedule::single(rho, 1000, eps)?, 2000, 1.0)?;
        let (lo, hi) = extreme_eigenvalues(&t, 1, DEFAULT_TOL)?;
        println!("rho {rho:5}, eps {eps:5}: bulk [{a:.4}, {b:.4}], eigenvalues {:.6} / {:.6}", lo[0], hi[0]);
        if set.is_empty() {
            println!("    no outliers");
        } else {
            let (s, t) = single_scm_roots(rho, eps)?;
            println!("    roots {s:.6}, {t:.6}; outliers {:.6} / {:.6}", set.left[0], set.right[0]);
        }
    }
    Ok(())
}
