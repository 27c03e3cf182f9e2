//! Monte Carlo grid over `(rho, eps / rho, B)` for panel estimation of single-change outliers.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::{simulate_panel, CoefficientSchedule};
use crate::outlier::single_scm_outliers;
use crate::panel::{detect, Centering, EstimationConfig, LambdaRule, OutlierMode, SymmetrizeRule};

/// Constant of the automatic constraint level used by the grid. The library default
/// of 2 overshrinks at `n = 100`; 0.5 was picked once from a coarse sweep and is
/// applied to every cell.
pub const TABLE_LAMBDA_C: f64 = 0.5;

/// Grid definition. Every field has a desk-scale default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentGrid {
    pub rho_list: Vec<f64>,
    pub eps_ratio_list: Vec<f64>,
    pub b_list: Vec<usize>,
    pub n: usize,
    pub k: usize,
    pub replications: usize,
    pub seed: u64,
    pub lambda: LambdaRule,
    pub mode: OutlierMode,
    pub centering: Centering,
    pub symmetrize: SymmetrizeRule,
}

impl Default for ExperimentGrid {
    fn default() -> Self {
        ExperimentGrid {
            rho_list: vec![0.1, 0.3, 0.5],
            eps_ratio_list: vec![0.5, 1.0, 2.0],
            b_list: vec![100, 1000],
            n: 100,
            k: 50,
            replications: 200,
            seed: 20240607,
            lambda: LambdaRule::Auto { c: TABLE_LAMBDA_C },
            mode: OutlierMode::KnownCount { left: 1, right: 1 },
            centering: Centering::default(),
            symmetrize: SymmetrizeRule::default(),
        }
    }
}

/// One `(rho, eps / rho, B)` combination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub rho: f64,
    pub eps_ratio: f64,
    pub b: usize,
}

/// Result of one replication; `None` scores mark an estimation failure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepRecord {
    pub rho: f64,
    pub eps_ratio: f64,
    #[serde(rename = "B")]
    pub b: usize,
    pub rep: usize,
    pub mae: Option<f64>,
    pub hausdorff: Option<f64>,
    pub lambda1_hat: Option<f64>,
    pub lambdan_hat: Option<f64>,
}

/// Aggregate over the replications of one cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub rho: f64,
    pub eps_ratio: f64,
    #[serde(rename = "B")]
    pub b: usize,
    pub reps: usize,
    pub failures: usize,
    pub mae_mean: f64,
    pub mae_sd: f64,
    pub hausdorff_median: f64,
}

impl ExperimentGrid {
    pub fn validate(&self) -> Result<()> {
        if self.rho_list.is_empty() || self.eps_ratio_list.is_empty() || self.b_list.is_empty() {
            return Err(invalid("grid lists must be nonempty"));
        }
        if self.replications < 1 {
            return Err(invalid("replications must be >= 1"));
        }
        if self.b_list.iter().any(|&b| b < 2) {
            return Err(invalid("every B must be >= 2"));
        }
        if self.k < 2 || self.k > self.n {
            return Err(invalid(format!("break point k = {} must lie in [2, n = {}]", self.k, self.n)));
        }
        for &rho in &self.rho_list {
            for &r in &self.eps_ratio_list {
                CoefficientSchedule::single(rho, self.k, rho * r)?;
            }
        }
        self.lambda.value(self.n, self.b_list[0])?;
        Ok(())
    }

    /// Cells in `rho`, then ratio, then `B` order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &rho in &self.rho_list {
            for &eps_ratio in &self.eps_ratio_list {
                for &b in &self.b_list {
                    out.push(Cell { rho, eps_ratio, b });
                }
            }
        }
        out
    }

    fn config(&self) -> EstimationConfig {
        EstimationConfig { lambda: self.lambda, mode: self.mode, symmetrize: self.symmetrize, centering: self.centering }
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replication `rep` in `cell`; depends only on the cell parameters, not its position.
pub fn rep_seed(seed: u64, cell: &Cell, rep: usize) -> u64 {
    let mut h = splitmix(seed);
    for v in [cell.rho.to_bits(), cell.eps_ratio.to_bits(), cell.b as u64, rep as u64] {
        h = splitmix(h ^ v);
    }
    h
}

/// Runs one replication.
pub fn run_rep(grid: &ExperimentGrid, cell: &Cell, rep: usize) -> Result<RepRecord> {
    let eps = cell.rho * cell.eps_ratio;
    let schedule = CoefficientSchedule::single(cell.rho, grid.k, eps)?;
    let truth = single_scm_outliers(cell.rho, eps)?;
    let panel = simulate_panel(&schedule, grid.n, cell.b, 1.0, rep_seed(grid.seed, cell, rep))?;
    let rec = |mae, hd, l1, ln| RepRecord {
        rho: cell.rho,
        eps_ratio: cell.eps_ratio,
        b: cell.b,
        rep,
        mae,
        hausdorff: hd,
        lambda1_hat: l1,
        lambdan_hat: ln,
    };
    match detect(&panel, &grid.config(), Some(&truth)) {
        Ok(r) => Ok(rec(r.mae, r.hausdorff, Some(r.lambda1_hat), Some(r.lambdan_hat))),
        Err(e) => {
            log::warn!("cell {cell:?} rep {rep}: {e}");
            Ok(rec(None, None, None, None))
        }
    }
}

/// Runs all replications of a cell in parallel.
pub fn run_cell(grid: &ExperimentGrid, cell: &Cell) -> Result<Vec<RepRecord>> {
    (0..grid.replications).into_par_iter().map(|rep| run_rep(grid, cell, rep)).collect()
}

pub fn summarize(cell: &Cell, records: &[RepRecord]) -> CellSummary {
    let maes: Vec<f64> = records.iter().filter_map(|r| r.mae).collect();
    let mut hds: Vec<f64> = records.iter().filter_map(|r| r.hausdorff).collect();
    hds.sort_by(f64::total_cmp);
    let k = maes.len() as f64;
    let mean = maes.iter().sum::<f64>() / k;
    let sd = if maes.len() > 1 { (maes.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt() } else { 0.0 };
    let median = if hds.is_empty() {
        f64::NAN
    } else if hds.len() % 2 == 1 {
        hds[hds.len() / 2]
    } else {
        0.5 * (hds[hds.len() / 2 - 1] + hds[hds.len() / 2])
    };
    CellSummary {
        rho: cell.rho,
        eps_ratio: cell.eps_ratio,
        b: cell.b,
        reps: records.len(),
        failures: records.len() - maes.len(),
        mae_mean: mean,
        mae_sd: sd,
        hausdorff_median: median,
    }
}

fn checkpoint_path(dir: &Path, cell: &Cell) -> PathBuf {
    dir.join("cells").join(format!("rho{}_ratio{}_B{}.csv", cell.rho, cell.eps_ratio, cell.b))
}

fn write_records(path: &Path, records: &[RepRecord]) -> Result<()> {
    let tmp = path.with_extension("csv.tmp");
    {
        let mut wtr = csv::Writer::from_path(&tmp)?;
        for r in records {
            wtr.serialize(r)?;
        }
        wtr.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn read_records(path: &Path) -> Result<Vec<RepRecord>> {
    let mut rdr = csv::Reader::from_path(path)?;
    rdr.deserialize().map(|r| r.map_err(Into::into)).collect()
}

/// Runs the grid cell by cell. With `out_dir`, each finished cell is checkpointed and a
/// rerun reuses checkpoints whose replication count matches.
pub fn run_grid(grid: &ExperimentGrid, out_dir: Option<&Path>) -> Result<(Vec<CellSummary>, Vec<RepRecord>)> {
    grid.validate()?;
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir.join("cells"))?;
    }
    let mut summaries = Vec::new();
    let mut all = Vec::new();
    for cell in grid.cells() {
        let cached = match out_dir {
            Some(dir) if checkpoint_path(dir, &cell).exists() => {
                let recs = read_records(&checkpoint_path(dir, &cell))?;
                (recs.len() == grid.replications).then_some(recs)
            }
            _ => None,
        };
        let records = match cached {
            Some(r) => {
                log::info!("cell {cell:?}: reusing checkpoint");
                r
            }
            None => {
                let r = run_cell(grid, &cell)?;
                if let Some(dir) = out_dir {
                    write_records(&checkpoint_path(dir, &cell), &r)?;
                }
                r
            }
        };
        summaries.push(summarize(&cell, &records));
        all.extend(records);
    }
    Ok((summaries, all))
}

/// Writes `batch.csv` and `summary.csv` under `dir`.
pub fn write_grid_outputs(dir: &Path, summaries: &[CellSummary], records: &[RepRecord]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut wtr = csv::Writer::from_path(dir.join("batch.csv"))?;
    for r in records {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    let mut wtr = csv::Writer::from_path(dir.join("summary.csv"))?;
    for s in summaries {
        wtr.serialize(s)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Monotone decrease of mean MAE in `B` for each `(rho, ratio)` pair present in `summaries`.
pub fn mae_decreases_in_b(summaries: &[CellSummary]) -> HashMap<(u64, u64), bool> {
    let mut by_pair: HashMap<(u64, u64), Vec<(usize, f64)>> = HashMap::new();
    for s in summaries {
        by_pair.entry((s.rho.to_bits(), s.eps_ratio.to_bits())).or_default().push((s.b, s.mae_mean));
    }
    by_pair
        .into_iter()
        .map(|(key, mut v)| {
            v.sort_by_key(|x| x.0);
            (key, v.windows(2).all(|w| w[1].1 <= w[0].1))
        })
        .collect()
}

/// Provenance written next to every output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub params: serde_json::Value,
}

pub fn write_manifest(dir: &Path, command: &str, seed: u64, params: &impl Serialize) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let m = Manifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: command.to_string(),
        seed,
        params: serde_json::to_value(params)?,
    };
    let path = dir.join("manifest.json");
    fs::write(&path, serde_json::to_string_pretty(&m)?)?;
    Ok(path)
}
