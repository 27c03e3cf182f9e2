pub mod commands;
pub mod dense;
pub mod error;
pub mod experiment;
pub mod model;
pub mod outlier;
pub mod precision;
pub mod spectral;
pub mod panel;
