//! Compares the eigenvalue histogram of a null precision matrix with its limiting law.

use scm_spectra::model::CoefficientSchedule;
use scm_spectra::precision::precision_matrix;
use scm_spectra::spectral::{eigenvalues_symtridiag, kolmogorov_distance, SpectralLaw, DEFAULT_TOL};

fn main() -> scm_spectra::error::Result<()> {
    let rho = 0.5;
    let n = 2000;
    let t = precision_matrix(&CoefficientSchedule::null(rho)?, n, 1.0)?;
    let eigs = eigenvalues_symtridiag(&t, DEFAULT_TOL)?;
    let law = SpectralLaw::new(rho)?;
    println!("support [{:.4}, {:.4}], extremes {:.4} / {:.4}", law.a(), law.b(), eigs.min(), eigs.max());
    for (lo, hi, count) in eigs.histogram(10, law.a(), law.b()) {
        let expected = (law.cdf(hi) - law.cdf(lo)) * n as f64;
        println!("[{lo:.3}, {hi:.3})  {count:5}  expected {expected:7.1}  {}", "#".repeat(count / 10));
    }
    println!("Kolmogorov distance {:.4}", kolmogorov_distance(eigs.eigenvalues(), |x| law.cdf(x)));
    Ok(())
}
