use serde::{Deserialize, Serialize};

use crate::dense::Matrix;
use crate::error::{invalid, Result};
use crate::model::PanelData;

/// How each observation vector is centered before forming outer products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Centering {
    /// Subtract each series' own time average. Every centered row is then
    /// orthogonal to the ones vector, so the estimate is singular.
    SeriesMean,
    /// Subtract the panel average at each time point.
    #[default]
    CrossSectional,
    /// Use raw observations; the model mean is known to be zero.
    None,
}

/// Average outer product of the centered rows, `B^{-1} sum_j c_j c_j'`.
pub fn sample_covariance(panel: &PanelData, centering: Centering) -> Result<Matrix> {
    let b = panel.b();
    let n = panel.n();
    if b < 2 {
        return Err(invalid("sample covariance needs B >= 2"));
    }
    let time_mean: Vec<f64> = match centering {
        Centering::CrossSectional => {
            let mut mean = vec![0.0; n];
            for row in panel.rows() {
                for (m, y) in mean.iter_mut().zip(row) {
                    *m += y;
                }
            }
            mean.iter().map(|m| m / b as f64).collect()
        }
        _ => vec![0.0; n],
    };
    let mut acc = vec![0.0; n * n];
    let mut c = vec![0.0; n];
    for row in panel.rows() {
        let shift = match centering {
            Centering::SeriesMean => row.iter().sum::<f64>() / n as f64,
            _ => 0.0,
        };
        for t in 0..n {
            c[t] = row[t] - shift - time_mean[t];
        }
        for i in 0..n {
            let ci = c[i];
            let dst = &mut acc[i * n..i * n + i + 1];
            for (a, cj) in dst.iter_mut().zip(&c[..=i]) {
                *a += ci * cj;
            }
        }
    }
    let mut out = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let v = acc[i * n + j] / b as f64;
            out.set(i, j, v);
            out.set(j, i, v);
        }
    }
    Ok(out)
}
