//! Coefficient schedules and simulation of AR(1) paths and panels.
//!
//! Time is 1-based throughout: segment `(k, h, eps)` changes the coefficient
//! on `t = k, ..., k + h - 1`.

use std::io::{Read, Write};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, ScmError};

/// One change of the AR coefficient: `eps` added on `[k, k + h - 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChangeSegment {
    pub k: usize,
    pub h: usize,
    pub eps: f64,
}

impl ChangeSegment {
    pub fn new(k: usize, h: usize, eps: f64) -> Result<Self> {
        let seg = ChangeSegment { k, h, eps };
        seg.validate()?;
        Ok(seg)
    }

    fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(invalid("segment break point k must be >= 1"));
        }
        if self.h < 1 {
            return Err(invalid("segment length h must be >= 1"));
        }
        if !self.eps.is_finite() || self.eps == 0.0 {
            return Err(invalid(format!("segment magnitude must be finite and nonzero, got {}", self.eps)));
        }
        Ok(())
    }

    /// Last time index covered by the segment.
    pub fn end(&self) -> usize {
        self.k + self.h - 1
    }

    pub fn contains(&self, t: usize) -> bool {
        t >= self.k && t <= self.end()
    }
}

/// Base coefficient plus disjoint, increasing change segments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientSchedule {
    rho: f64,
    segments: Vec<ChangeSegment>,
}

impl CoefficientSchedule {
    pub fn new(rho: f64, segments: Vec<ChangeSegment>) -> Result<Self> {
        check_rho(rho)?;
        for s in &segments {
            s.validate()?;
        }
        for w in segments.windows(2) {
            if w[1].k <= w[0].end() {
                return Err(invalid(format!(
                    "segments must be disjoint and increasing: [{}, {}] then [{}, {}]",
                    w[0].k,
                    w[0].end(),
                    w[1].k,
                    w[1].end()
                )));
            }
        }
        for s in &segments {
            if (rho + s.eps).abs() >= 1.0 {
                log::warn!(
                    "segment at k={} has |rho + eps| = {} >= 1; the path is locally explosive",
                    s.k,
                    (rho + s.eps).abs()
                );
            }
        }
        Ok(CoefficientSchedule { rho, segments })
    }

    pub fn null(rho: f64) -> Result<Self> {
        Self::new(rho, Vec::new())
    }

    /// A single change of length one at `k`.
    pub fn single(rho: f64, k: usize, eps: f64) -> Result<Self> {
        Self::new(rho, vec![ChangeSegment::new(k, 1, eps)?])
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn segments(&self) -> &[ChangeSegment] {
        &self.segments
    }

    /// Number of change segments.
    pub fn m(&self) -> usize {
        self.segments.len()
    }

    pub fn is_null(&self) -> bool {
        self.segments.is_empty()
    }

    /// Coefficient in force at time `t >= 1`.
    pub fn coefficient_at(&self, t: usize) -> f64 {
        match self.segments.iter().find(|s| s.contains(t)) {
            Some(s) => self.rho + s.eps,
            None => self.rho,
        }
    }

    /// `[rho_1, ..., rho_n]`.
    pub fn coefficients(&self, n: usize) -> Vec<f64> {
        (1..=n).map(|t| self.coefficient_at(t)).collect()
    }

    /// Errors when some segment does not fit inside `[1, n]`.
    pub fn check_fits(&self, n: usize) -> Result<()> {
        if let Some(s) = self.segments.iter().find(|s| s.end() > n) {
            return Err(invalid(format!(
                "segment [{}, {}] exceeds series length {n}",
                s.k,
                s.end()
            )));
        }
        Ok(())
    }

    /// Smallest gap between the end of one segment and the start of the next.
    pub fn min_gap(&self) -> Option<usize> {
        self.segments.windows(2).map(|w| w[1].k - w[0].end()).min()
    }
}

pub(crate) fn check_rho(rho: f64) -> Result<()> {
    if !rho.is_finite() || rho.abs() >= 1.0 || rho == 0.0 {
        return Err(invalid(format!("base coefficient must satisfy 0 < |rho| < 1, got {rho}")));
    }
    Ok(())
}

/// A change of the innovation variance: `xi` added to `sigma2` on `[k, k + h - 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceSegment {
    pub k: usize,
    pub h: usize,
    pub xi: f64,
}

/// Time-varying innovation variance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceSchedule {
    sigma2: f64,
    segments: Vec<VarianceSegment>,
}

impl VarianceSchedule {
    pub fn new(sigma2: f64, segments: Vec<VarianceSegment>) -> Result<Self> {
        if !sigma2.is_finite() || sigma2 <= 0.0 {
            return Err(invalid(format!("base variance must be positive, got {sigma2}")));
        }
        for s in &segments {
            if s.k < 1 || s.h < 1 {
                return Err(invalid("variance segment needs k >= 1 and h >= 1"));
            }
            if !s.xi.is_finite() || s.xi == 0.0 {
                return Err(invalid("variance change xi must be finite and nonzero"));
            }
            if s.xi <= -sigma2 {
                return Err(invalid(format!("variance change xi = {} makes sigma_t^2 non-positive", s.xi)));
            }
        }
        for w in segments.windows(2) {
            if w[1].k < w[0].k + w[0].h {
                return Err(invalid("variance segments must be disjoint and increasing"));
            }
        }
        Ok(VarianceSchedule { sigma2, segments })
    }

    pub fn constant(sigma2: f64) -> Result<Self> {
        Self::new(sigma2, Vec::new())
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn segments(&self) -> &[VarianceSegment] {
        &self.segments
    }

    pub fn variance_at(&self, t: usize) -> f64 {
        match self.segments.iter().find(|s| t >= s.k && t < s.k + s.h) {
            Some(s) => self.sigma2 + s.xi,
            None => self.sigma2,
        }
    }

    pub fn variances(&self, n: usize) -> Vec<f64> {
        (1..=n).map(|t| self.variance_at(t)).collect()
    }
}

/// `b` series of common length `n`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelData {
    b: usize,
    n: usize,
    values: Vec<f64>,
}

impl PanelData {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let b = rows.len();
        if b < 1 {
            return Err(invalid("panel needs at least one row"));
        }
        let n = rows[0].len();
        if n < 2 {
            return Err(invalid("panel rows need length >= 2"));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(invalid("panel rows have unequal lengths"));
        }
        Ok(PanelData { b, n, values: rows.concat() })
    }

    /// Panel count.
    pub fn b(&self) -> usize {
        self.b
    }

    /// Series length.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.values[j * self.n..(j + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.n)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["j", "t", "y"])?;
        for (j, row) in self.rows().enumerate() {
            for (t, y) in row.iter().enumerate() {
                wtr.write_record(&[(j + 1).to_string(), (t + 1).to_string(), y.to_string()])?;
            }
        }
        wtr.flush()?;
        Ok(())
    }

    /// Reads the `j,t,y` format written by [`PanelData::write_csv`]. Indices are 1-based.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let mut cells: Vec<(usize, usize, f64)> = Vec::new();
        for rec in rdr.deserialize() {
            let (j, t, y): (usize, usize, f64) = rec?;
            if j < 1 || t < 1 {
                return Err(invalid("panel csv indices are 1-based"));
            }
            cells.push((j, t, y));
        }
        let b = cells.iter().map(|c| c.0).max().unwrap_or(0);
        let n = cells.iter().map(|c| c.1).max().unwrap_or(0);
        if cells.len() != b * n {
            return Err(invalid(format!("panel csv has {} cells, expected {b} x {n}", cells.len())));
        }
        let mut values = vec![f64::NAN; b * n];
        for (j, t, y) in cells {
            values[(j - 1) * n + (t - 1)] = y;
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(invalid("panel csv has duplicate or missing cells"));
        }
        if b < 1 || n < 2 {
            return Err(invalid("panel csv needs at least one row of length >= 2"));
        }
        Ok(PanelData { b, n, values })
    }

    pub fn read_csv_path(path: &Path) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }
}

/// Generator for substream `stream` of `seed`. Row `j` of a panel uses stream `j`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn ar_recursion(coef: impl Fn(usize) -> f64, scale: impl Fn(usize) -> f64, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut prev = 0.0;
    for t in 1..=n {
        let z: f64 = StandardNormal.sample(rng);
        let y = coef(t) * prev + scale(t) * z;
        out.push(y);
        prev = y;
    }
    out
}

fn check_sigma2(sigma2: f64) -> Result<()> {
    if !sigma2.is_finite() || sigma2 < 0.0 {
        return Err(invalid(format!("noise variance must be >= 0, got {sigma2}")));
    }
    Ok(())
}

/// One path of `y_t = rho_t y_{t-1} + z_t` with `y_0 = 0` and Gaussian noise.
pub fn simulate_path(schedule: &CoefficientSchedule, n: usize, sigma2: f64, seed: u64) -> Result<Vec<f64>> {
    if n < 1 {
        return Err(invalid("path length must be >= 1"));
    }
    check_sigma2(sigma2)?;
    let sd = sigma2.sqrt();
    Ok(ar_recursion(|t| schedule.coefficient_at(t), |_| sd, n, &mut substream(seed, 0)))
}

/// `b` independent paths; row `j` is driven by substream `j` of `seed`.
pub fn simulate_panel(schedule: &CoefficientSchedule, n: usize, b: usize, sigma2: f64, seed: u64) -> Result<PanelData> {
    if b < 1 {
        return Err(invalid("panel count B must be >= 1"));
    }
    if n < 2 {
        return Err(invalid("panel series length must be >= 2"));
    }
    check_sigma2(sigma2)?;
    let sd = sigma2.sqrt();
    let coefs = schedule.coefficients(n);
    let rows: Vec<Vec<f64>> = (0..b)
        .into_par_iter()
        .map(|j| ar_recursion(|t| coefs[t - 1], |_| sd, n, &mut substream(seed, j as u64)))
        .collect();
    Ok(PanelData { b, n, values: rows.concat() })
}

/// One path of `y_t = rho y_{t-1} + sigma_t z_t`. Shares its noise draws with
/// [`simulate_path`] under the same seed.
pub fn simulate_hetero_path(rho: f64, vs: &VarianceSchedule, n: usize, seed: u64) -> Result<Vec<f64>> {
    if !rho.is_finite() || rho.abs() >= 1.0 {
        return Err(invalid(format!("coefficient must satisfy |rho| < 1, got {rho}")));
    }
    if n < 1 {
        return Err(invalid("path length must be >= 1"));
    }
    let sds: Vec<f64> = vs.variances(n).into_iter().map(f64::sqrt).collect();
    Ok(ar_recursion(|_| rho, |t| sds[t - 1], n, &mut substream(seed, 0)))
}

/// Serialized form of a schedule: `{"rho", "segments": [{"k","h","eps"}], "sigma2"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleDoc {
    pub rho: f64,
    #[serde(default)]
    pub segments: Vec<ChangeSegment>,
    #[serde(default = "one")]
    pub sigma2: f64,
}

fn one() -> f64 {
    1.0
}

impl ScheduleDoc {
    pub fn from_schedule(schedule: &CoefficientSchedule, sigma2: f64) -> Self {
        ScheduleDoc { rho: schedule.rho(), segments: schedule.segments().to_vec(), sigma2 }
    }

    pub fn schedule(&self) -> Result<CoefficientSchedule> {
        CoefficientSchedule::new(self.rho, self.segments.clone())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(ScmError::from)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
