//! Two separated changes: the outlier set is the union of the single-change sets.

use scm_spectra::model::{ChangeSegment, CoefficientSchedule};
use scm_spectra::outlier::{general_scm_outliers, identify_magnitudes, outlier_report};
use scm_spectra::panel::hausdorff_distance;
use scm_spectra::precision::precision_matrix;
use scm_spectra::spectral::{extreme_eigenvalues, DEFAULT_TOL};

fn main() -> scm_spectra::error::Result<()> {
    let s = CoefficientSchedule::new(0.3, vec![ChangeSegment::new(800, 1, 0.2)?, ChangeSegment::new(3200, 1, 0.3)?])?;
    let set = general_scm_outliers(&s)?;
    let (lo, hi) = extreme_eigenvalues(&precision_matrix(&s, 4000, 1.0)?, 2, DEFAULT_TOL)?;
    let observed: Vec<f64> = lo.iter().chain(&hi).copied().collect();
    println!("analytic {:?}", set.values());
    println!("observed {observed:?}");
    println!("Hausdorff distance {:.2e}", hausdorff_distance(&set.values(), &observed));
    println!("recovered magnitudes {:?}", identify_magnitudes(0.3, &set)?);
    println!("{}", serde_json::to_string_pretty(&outlier_report(&s, 1.0)?)?);
    Ok(())
}
