//! Estimates outliers from a simulated panel by constrained l1 precision estimation.

use scm_spectra::model::{simulate_panel, CoefficientSchedule};
use scm_spectra::panel::{analytic_truth, detect, EstimationConfig, LambdaRule, OutlierMode};

fn main() -> scm_spectra::error::Result<()> {
    let s = CoefficientSchedule::single(0.3, 25, 0.3)?;
    let truth = analytic_truth(&s, 1.0)?.expect("the change enlarges the coefficient");
    println!("truth {:?}", truth.values());
    for b in [100, 400, 1600] {
        let panel = simulate_panel(&s, 50, b, 1.0, 1)?;
        for mode in [OutlierMode::default(), OutlierMode::Threshold] {
            let config = EstimationConfig { lambda: LambdaRule::Auto { c: 0.5 }, mode, ..Default::default() };
            let r = detect(&panel, &config, Some(&truth))?;
            println!(
                "B = {b:4} {mode:?}: rho_hat {:.4}, estimate {:?}, Hausdorff {:.4}",
                r.rho_hat,
                r.outliers_hat.values(),
                r.hausdorff.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
