//! Precision estimation from panels of independent series and outlier scoring.

mod clime;
mod covariance;
mod estimate;
mod metrics;
pub mod simplex;
mod yule_walker;

pub use clime::{clime_column, clime_columns, clime_estimate, symmetrize, LambdaRule, SymmetrizeRule};
pub use covariance::{sample_covariance, Centering};
pub use estimate::{analytic_truth, dense_eigenvalues, detect, estimate_outliers, DetectionReport, EstimationConfig, OutlierMode};
pub use metrics::{hausdorff_distance, mean_absolute_error};
pub use yule_walker::yule_walker_rho;
