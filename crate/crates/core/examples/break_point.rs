//! Locates a break point from the peaks of the extreme eigenvectors.

use scm_spectra::model::CoefficientSchedule;
use scm_spectra::outlier::{locate_break_heuristic, locate_break_seeded};
use scm_spectra::precision::precision_matrix;

fn main() -> scm_spectra::error::Result<()> {
    for k in [50, 400, 900] {
        let t = precision_matrix(&CoefficientSchedule::single(0.3, k, 0.2)?, 1000, 1.0)?;
        let est = locate_break_heuristic(&t)?;
        println!(
            "true k {k}: from smallest {} (peak {:.3}), from largest {} (peak {:.3}), localized {}",
            est.k_from_min, est.peak_min, est.k_from_max, est.peak_max, est.localized
        );
    }
    let t = precision_matrix(&CoefficientSchedule::single(0.3, 50, 0.2)?, 1000, 1.0)?;
    let hits = (0..20).filter(|&s| locate_break_seeded(&t, s).map(|e| e.k_from_min == 50).unwrap_or(false)).count();
    println!("random starts finding k = 50: {hits}/20");
    let null = precision_matrix(&CoefficientSchedule::null(0.3)?, 1000, 1.0)?;
    println!("null model localized: {}", locate_break_heuristic(&null)?.localized);
    Ok(())
}
