//! Variance changes instead of coefficient changes: which side the outlier lands on.

use scm_spectra::model::{VarianceSchedule, VarianceSegment};
use scm_spectra::precision::{hetero_display_matrix, hetero_precision};
use scm_spectra::spectral::{eigenvalues_symtridiag, support_bounds, DEFAULT_TOL};

fn main() -> scm_spectra::error::Result<()> {
    let rho = 0.3;
    let (a, b) = support_bounds(rho)?;
    for xi in [0.3, -0.3] {
        let vs = VarianceSchedule::new(1.0, vec![VarianceSegment { k: 50, h: 1, xi }])?;
        for (name, t) in [("variance-multiplied", hetero_display_matrix(rho, &vs, 1000)?), ("exact inverse", hetero_precision(rho, &vs, 1000)?)] {
            let eigs = eigenvalues_symtridiag(&t, DEFAULT_TOL)?;
            let (left, right) = eigs.outside(a, b);
            println!("xi {xi:+}: {name:20} below {left:?} above {right:?}");
        }
    }
    Ok(())
}
