//! One cell pair of the Monte Carlo MAE grid at a reduced replication count.

use scm_spectra::experiment::{mae_decreases_in_b, run_grid, ExperimentGrid};

fn main() -> scm_spectra::error::Result<()> {
    let reps = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let grid = ExperimentGrid { rho_list: vec![0.3], eps_ratio_list: vec![1.0], replications: reps, ..Default::default() };
    let (summaries, _) = run_grid(&grid, None)?;
    for s in &summaries {
        println!("rho {} ratio {} B {:5}: MAE {:.4} ({:.4}), median Hausdorff {:.4}", s.rho, s.eps_ratio, s.b, s.mae_mean, s.mae_sd, s.hausdorff_median);
    }
    println!("decreasing in B: {:?}", mae_decreases_in_b(&summaries).values().collect::<Vec<_>>());
    Ok(())
}
