//! Simulates one path with a coefficient change and a small panel, then prints summaries.

use scm_spectra::model::{simulate_panel, simulate_path, CoefficientSchedule};

fn main() -> scm_spectra::error::Result<()> {
    let schedule = CoefficientSchedule::single(0.3, 50, 0.2)?;
    let y = simulate_path(&schedule, 200, 1.0, 7)?;
    let var = y.iter().map(|v| v * v).sum::<f64>() / y.len() as f64;
    println!("path of length {}: first values {:?}", y.len(), &y[..4]);
    println!("mean square {var:.4} (stationary variance {:.4})", 1.0 / (1.0 - 0.09));

    let panel = simulate_panel(&schedule, 100, 500, 1.0, 7)?;
    let mut lag1 = 0.0;
    let mut lag0 = 0.0;
    for row in panel.rows() {
        for w in row.windows(2) {
            lag1 += w[0] * w[1];
            lag0 += w[0] * w[0];
        }
    }
    println!("panel {} x {}: pooled lag-one ratio {:.4}", panel.b(), panel.n(), lag1 / lag0);
    Ok(())
}
