//! Configurations and drivers behind the `scm` subcommands.
//!
//! Every driver takes a fully resolved configuration and an output directory,
//! writes its artifacts plus `manifest.json`, and returns a printable summary.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::experiment::{mae_decreases_in_b, run_grid, write_grid_outputs, write_manifest, CellSummary, ExperimentGrid};
use crate::model::{simulate_hetero_path, simulate_panel, simulate_path, PanelData, ScheduleDoc, VarianceSchedule, VarianceSegment};
use crate::outlier::{interval_scm_outliers, outlier_report, single_scm_outliers, OutlierReport};
use crate::panel::{detect, analytic_truth, Centering, DetectionReport, EstimationConfig, LambdaRule, OutlierMode, SymmetrizeRule};
use crate::precision::{hetero_display_matrix, hetero_precision, precision_matrix, SymTridiagonal};
use crate::spectral::{eigenvalues_symtridiag, support_bounds, DEFAULT_TOL};

pub const DEFAULT_SEED: u64 = 20240607;

/// Reads a JSON config, or returns the default when no path is given.
pub fn load_config<T: Default + for<'de> Deserialize<'de>>(path: Option<&Path>) -> Result<T> {
    match path {
        Some(p) => Ok(serde_json::from_str(&fs::read_to_string(p)?)?),
        None => Ok(T::default()),
    }
}

fn default_schedule() -> ScheduleDoc {
    ScheduleDoc { rho: 0.3, segments: Vec::new(), sigma2: 1.0 }
}

/// Heteroscedastic variant: constant coefficient, variance changes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeteroDoc {
    #[serde(default = "unit")]
    pub sigma2: f64,
    pub segments: Vec<VarianceSegment>,
    /// Which matrix `spectrum` diagonalizes.
    #[serde(default)]
    pub form: HeteroForm,
}

fn unit() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeteroForm {
    /// Variances multiply the entries; see [`hetero_display_matrix`].
    #[default]
    Display,
    /// Exact inverse covariance; see [`hetero_precision`].
    Exact,
}

impl HeteroDoc {
    fn schedule(&self) -> Result<VarianceSchedule> {
        VarianceSchedule::new(self.sigma2, self.segments.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimulateConfig {
    pub schedule: ScheduleDoc,
    pub n: usize,
    /// Number of series; 1 writes a single path.
    pub b: usize,
    pub seed: u64,
    /// When present the coefficient stays at `schedule.rho` and these variance changes apply.
    pub hetero: Option<HeteroDoc>,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        SimulateConfig { schedule: default_schedule(), n: 1000, b: 1, seed: DEFAULT_SEED, hetero: None }
    }
}

/// Writes `path.csv` (`t,y`) for one series or `panel.csv` (`j,t,y`) for several.
pub fn run_simulate(cfg: &SimulateConfig, out: &Path) -> Result<String> {
    fs::create_dir_all(out)?;
    let file = if cfg.b == 1 {
        let path = match &cfg.hetero {
            Some(h) => simulate_hetero_path(cfg.schedule.rho, &h.schedule()?, cfg.n, cfg.seed)?,
            None => {
                let s = cfg.schedule.schedule()?;
                s.check_fits(cfg.n)?;
                simulate_path(&s, cfg.n, cfg.schedule.sigma2, cfg.seed)?
            }
        };
        let target = out.join("path.csv");
        let mut w = csv::Writer::from_path(&target)?;
        w.write_record(["t", "y"])?;
        for (t, y) in path.iter().enumerate() {
            w.write_record([(t + 1).to_string(), y.to_string()])?;
        }
        w.flush()?;
        target
    } else {
        if cfg.hetero.is_some() {
            return Err(invalid("heteroscedastic simulation supports a single path only"));
        }
        let s = cfg.schedule.schedule()?;
        s.check_fits(cfg.n)?;
        let panel = simulate_panel(&s, cfg.n, cfg.b, cfg.schedule.sigma2, cfg.seed)?;
        let target = out.join("panel.csv");
        panel.write_csv(BufWriter::new(File::create(&target)?))?;
        target
    };
    write_manifest(out, "simulate", cfg.seed, cfg)?;
    Ok(format!("seed {}\nwrote {}", cfg.seed, file.display()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpectrumConfig {
    pub schedule: ScheduleDoc,
    pub n: usize,
    pub bins: usize,
    pub hetero: Option<HeteroDoc>,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig { schedule: default_schedule(), n: 1000, bins: 50, hetero: None }
    }
}

/// Summary of one computed spectrum, written as `spectrum.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub n: usize,
    pub support: (f64, f64),
    pub min: f64,
    pub max: f64,
    pub left_outside: Vec<f64>,
    pub right_outside: Vec<f64>,
}

/// The matrix `spectrum` diagonalizes and the bulk interval it is compared with.
pub fn spectrum_matrix(cfg: &SpectrumConfig) -> Result<(SymTridiagonal, (f64, f64))> {
    let rho = cfg.schedule.rho;
    let (a, b) = support_bounds(rho)?;
    match &cfg.hetero {
        Some(h) => {
            let vs = h.schedule()?;
            match h.form {
                HeteroForm::Display => Ok((hetero_display_matrix(rho, &vs, cfg.n)?, (a * h.sigma2, b * h.sigma2))),
                HeteroForm::Exact => Ok((hetero_precision(rho, &vs, cfg.n)?, (a / h.sigma2, b / h.sigma2))),
            }
        }
        None => {
            let s2 = cfg.schedule.sigma2;
            Ok((precision_matrix(&cfg.schedule.schedule()?, cfg.n, s2)?, (a / s2, b / s2)))
        }
    }
}

/// Writes `eigenvalues.csv`, `histogram.csv` and `spectrum.json`.
pub fn run_spectrum(cfg: &SpectrumConfig, out: &Path) -> Result<String> {
    if cfg.bins < 1 {
        return Err(invalid("histogram needs at least one bin"));
    }
    let (t, support) = spectrum_matrix(cfg)?;
    let eigs = eigenvalues_symtridiag(&t, DEFAULT_TOL)?;
    fs::create_dir_all(out)?;
    eigs.write_csv(BufWriter::new(File::create(out.join("eigenvalues.csv"))?))?;
    eigs.write_histogram_csv(BufWriter::new(File::create(out.join("histogram.csv"))?), cfg.bins)?;
    let (left, right) = eigs.outside(support.0, support.1);
    let summary = SpectrumSummary { n: cfg.n, support, min: eigs.min(), max: eigs.max(), left_outside: left, right_outside: right };
    fs::write(out.join("spectrum.json"), serde_json::to_string_pretty(&summary)?)?;
    write_manifest(out, "spectrum", 0, cfg)?;
    Ok(format!(
        "n = {}, bulk [{:.6}, {:.6}], extremes {:.6} / {:.6}\n{} eigenvalue(s) below, {} above\nwrote {}",
        cfg.n,
        support.0,
        support.1,
        summary.min,
        summary.max,
        summary.left_outside.len(),
        summary.right_outside.len(),
        out.join("eigenvalues.csv").display()
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OutliersConfig {
    pub schedule: ScheduleDoc,
}

impl Default for OutliersConfig {
    fn default() -> Self {
        OutliersConfig { schedule: ScheduleDoc { rho: 0.3, segments: vec![crate::model::ChangeSegment { k: 50, h: 1, eps: 0.2 }], sigma2: 1.0 } }
    }
}

/// Closed form against the determinant root finder for one length-one segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub segment: usize,
    pub closed_form: Vec<f64>,
    pub determinantal: Vec<f64>,
    pub max_abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutliersOutput {
    pub report: OutlierReport,
    pub cross_checks: Vec<CrossCheck>,
}

/// Analytic outliers of a schedule, written as `outliers.json`.
pub fn compute_outliers(cfg: &OutliersConfig) -> Result<OutliersOutput> {
    let schedule = cfg.schedule.schedule()?;
    let report = outlier_report(&schedule, cfg.schedule.sigma2)?;
    let rho = schedule.rho();
    let mut cross_checks = Vec::new();
    for (i, s) in schedule.segments().iter().enumerate() {
        if s.h != 1 || (rho + s.eps).abs() <= rho.abs() {
            continue;
        }
        let closed = single_scm_outliers(rho, s.eps)?.values();
        let det = interval_scm_outliers(rho, s.eps, 1, 1e-13)?.values();
        let diff = if closed.len() == det.len() {
            closed.iter().zip(&det).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        cross_checks.push(CrossCheck { segment: i + 1, closed_form: closed, determinantal: det, max_abs_diff: diff });
    }
    Ok(OutliersOutput { report, cross_checks })
}

pub fn run_outliers(cfg: &OutliersConfig, out: &Path) -> Result<String> {
    let result = compute_outliers(cfg)?;
    fs::create_dir_all(out)?;
    fs::write(out.join("outliers.json"), serde_json::to_string_pretty(&result)?)?;
    write_manifest(out, "outliers", 0, cfg)?;
    let r = &result.report;
    let mut text = String::new();
    if r.left.is_empty() && r.right.is_empty() {
        text.push_str("no outliers: every segment has |rho + eps| <= |rho|\n");
    } else {
        text.push_str(&format!("method: {}\nleft:  {:?}\nright: {:?}\n", r.method, r.left, r.right));
    }
    for c in &result.cross_checks {
        text.push_str(&format!("segment {}: closed form vs determinant max diff {:.3e}\n", c.segment, c.max_abs_diff));
    }
    text.push_str(&format!("wrote {}", out.join("outliers.json").display()));
    Ok(text)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EstimateConfig {
    /// Generating schedule; also supplies the truth when it has one length-one change.
    pub schedule: ScheduleDoc,
    pub n: usize,
    pub b: usize,
    pub seed: u64,
    /// Read the panel from this CSV instead of simulating it.
    pub panel: Option<PathBuf>,
    pub lambda: LambdaRule,
    pub mode: OutlierMode,
    pub centering: Centering,
    pub symmetrize: SymmetrizeRule,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        EstimateConfig {
            schedule: ScheduleDoc { rho: 0.3, segments: vec![crate::model::ChangeSegment { k: 50, h: 1, eps: 0.3 }], sigma2: 1.0 },
            n: 100,
            b: 1000,
            seed: DEFAULT_SEED,
            panel: None,
            lambda: LambdaRule::Auto { c: crate::experiment::TABLE_LAMBDA_C },
            mode: OutlierMode::default(),
            centering: Centering::default(),
            symmetrize: SymmetrizeRule::default(),
        }
    }
}

/// Estimates outliers from a panel, written as `estimate.json`.
pub fn run_estimate(cfg: &EstimateConfig, out: &Path) -> Result<(DetectionReport, String)> {
    let (panel, truth) = match &cfg.panel {
        Some(p) => (PanelData::read_csv_path(p)?, None),
        None => {
            let s = cfg.schedule.schedule()?;
            s.check_fits(cfg.n)?;
            let panel = simulate_panel(&s, cfg.n, cfg.b, cfg.schedule.sigma2, cfg.seed)?;
            (panel, analytic_truth(&s, cfg.schedule.sigma2)?)
        }
    };
    let config = EstimationConfig { lambda: cfg.lambda, mode: cfg.mode, symmetrize: cfg.symmetrize, centering: cfg.centering };
    let report = detect(&panel, &config, truth.as_ref())?;
    fs::create_dir_all(out)?;
    fs::write(out.join("estimate.json"), serde_json::to_string_pretty(&report)?)?;
    write_manifest(out, "estimate", cfg.seed, cfg)?;
    let mut text = format!(
        "n = {}, B = {}, rho_hat = {:.4}, lambda = {:.4}\nleft:  {:?}\nright: {:?}",
        panel.n(),
        panel.b(),
        report.rho_hat,
        report.lambda,
        report.outliers_hat.left,
        report.outliers_hat.right
    );
    if let Some(m) = report.mae {
        text.push_str(&format!("\nMAE {m:.4}"));
    }
    if let Some(h) = report.hausdorff {
        text.push_str(&format!("\nHausdorff {h:.4}"));
    }
    Ok((report, text))
}

/// Runs the grid with checkpoints under `out/cells`, then writes `batch.csv` and `summary.csv`.
pub fn run_table1(grid: &ExperimentGrid, out: &Path) -> Result<(Vec<CellSummary>, String)> {
    let (summaries, records) = run_grid(grid, Some(out))?;
    write_grid_outputs(out, &summaries, &records)?;
    write_manifest(out, "table1", grid.seed, grid)?;
    let mut text = String::from("rho   eps/rho  B      mean MAE (sd)      failures\n");
    for s in &summaries {
        text.push_str(&format!(
            "{:<5} {:<8} {:<6} {:.4} ({:.4})    {}\n",
            s.rho, s.eps_ratio, s.b, s.mae_mean, s.mae_sd, s.failures
        ));
    }
    let mono = mae_decreases_in_b(&summaries);
    let all = mono.values().all(|&v| v);
    text.push_str(&format!("mean MAE non-increasing in B for every pair: {all}\n"));
    text.push_str(&format!("wrote {}", out.join("summary.csv").display()));
    Ok((summaries, text))
}
