//! Outliers of a change lasting several periods: bracketing intervals and determinant roots.

use scm_spectra::model::{ChangeSegment, CoefficientSchedule};
use scm_spectra::outlier::{interval_scm_outliers_with, DEFAULT_PANELS};
use scm_spectra::precision::precision_matrix;
use scm_spectra::spectral::{extreme_eigenvalues, DEFAULT_TOL};

fn main() -> scm_spectra::error::Result<()> {
    let (rho, eps) = (0.2, 1.0);
    for h in [1, 2, 3, 5] {
        let (set, report, scans) = interval_scm_outliers_with(rho, eps, h, 1e-12, DEFAULT_PANELS)?;
        println!("h = {h}: at least {} left and {} right, upper bound {:.4}", report.p, report.q, report.upper_bound);
        for scan in &scans {
            println!("    [{:.4}, {:.4}] roots {:?}", scan.interval.0, scan.interval.1, scan.roots);
        }
        let s = CoefficientSchedule::new(rho, vec![ChangeSegment::new(1000, h, eps)?])?;
        let count = set.left.len().max(set.right.len());
        let (lo, hi) = extreme_eigenvalues(&precision_matrix(&s, 2000, 1.0)?, count, DEFAULT_TOL)?;
        println!("    outliers {:?} {:?}", set.left, set.right);
        println!("    eigenvalues {lo:?} {hi:?}");
    }
    Ok(())
}
