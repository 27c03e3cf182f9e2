//! Closed forms behind the spectral results: sine kernel, Chebyshev determinants, Stieltjes transform.

use scm_spectra::spectral::{chebyshev_u, det_bordered_tridiag, sine_kernel_g, SpectralLaw};

fn main() -> scm_spectra::error::Result<()> {
    for (a, k1, k2) in [(1.25, 1, 1), (1.25, 2, 3), (-2.0, 4, 4)] {
        println!("G({a}, {k1}, {k2}) = {:.10}", sine_kernel_g(a, k1, k2)?);
    }
    for nn in 2..6 {
        println!("U_{nn}(0.4) = {:.8}, bordered det = {:.8}", chebyshev_u(nn, 0.4), det_bordered_tridiag(0.4, 0.0, 0.0, nn)?);
    }
    let law = SpectralLaw::new(0.3)?;
    for z in [0.2, 2.0] {
        println!("Stieltjes({z}) = {:.6}", law.stieltjes(z)?);
    }
    for k in 1..=4 {
        println!("moment {k} = {:.6}", law.moment(k));
    }
    Ok(())
}
