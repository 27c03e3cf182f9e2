use crate::error::{invalid, Result, ScmError};
use crate::model::PanelData;

/// Pooled lag-one ratio `sum y_t y_{t-1} / sum y_{t-1}^2`, clipped into `(-1, 1)`.
pub fn yule_walker_rho(panel: &PanelData) -> Result<f64> {
    if panel.b() * panel.n() < 10 {
        return Err(invalid("Yule-Walker estimate needs B * n >= 10"));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for row in panel.rows() {
        for w in row.windows(2) {
            num += w[1] * w[0];
            den += w[0] * w[0];
        }
    }
    if den == 0.0 {
        return Err(ScmError::EstimationFailure { column: 0, reason: "zero lagged sum of squares".into() });
    }
    let bound = 1.0 - 1e-6;
    Ok((num / den).clamp(-bound, bound))
}
