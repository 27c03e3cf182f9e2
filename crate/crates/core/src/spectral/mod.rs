//! Eigenvalues of tridiagonal matrices and the limiting spectral law.

mod eigen;
mod law;
pub mod quadrature;
mod special;

pub use eigen::{
    eigenvalues_by_index, eigenvalues_symtridiag, eigenvector_from_start, eigenvector_seeded,
    eigenvector_symtridiag, extreme_eigenvalues, sturm_count, Spectrum, DEFAULT_TOL,
};
pub use law::{kolmogorov_distance, support_bounds, MixtureLaw, SpectralLaw};
pub use special::{
    chebyshev_u, det_bordered_tridiag, perturbed_eigenpair_closed_form, perturbed_eigenvalues_closed_form,
    sine_kernel_g,
};
