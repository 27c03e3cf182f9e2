use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, numerical, Result, ScmError};
use crate::model::check_rho;
use crate::outlier::{f_inverse_raw, OutlierSet};
use crate::precision::SymTridiagonal;
use crate::spectral::support_bounds;

/// Sign-scan panels per bracketing interval.
pub const DEFAULT_PANELS: usize = 512;

fn check_params(rho: f64, eps: f64, h: usize) -> Result<()> {
    check_rho(rho)?;
    if !eps.is_finite() || eps == 0.0 {
        return Err(invalid(format!("change magnitude must be finite and nonzero, got {eps}")));
    }
    if h < 1 {
        return Err(invalid("change length h must be >= 1"));
    }
    if rho + eps == 0.0 {
        return Err(ScmError::SingularParameter("rho + eps = 0 makes the determinant undefined".into()));
    }
    Ok(())
}

/// Corner, interior and last diagonal entries of the `(h+1) x (h+1)` matrix at unit-disc point `x`.
fn entries(rho: f64, eps: f64, x: f64) -> (f64, f64, f64) {
    let c = eps + rho;
    let e = eps * (eps + 2.0 * rho);
    let first = (rho / x + e) / c;
    let mid = (rho * (x + 1.0 / x) + e) / c;
    let last = rho / (x * c);
    (first, mid, last)
}

fn continuant(first: f64, mid: f64, last: f64, h: usize) -> f64 {
    // leading principal minors of tridiag(-1, [first, mid x (h-1), last], -1)
    let mut prev = 1.0;
    let mut cur = first;
    for _ in 1..h {
        let next = mid * cur - prev;
        prev = cur;
        cur = next;
    }
    last * cur - prev
}

/// The `(h+1) x (h+1)` tridiagonal matrix whose determinant vanishes exactly at the outliers.
pub fn determinant_matrix(rho: f64, eps: f64, h: usize, z: f64) -> Result<SymTridiagonal> {
    check_params(rho, eps, h)?;
    let x = checked_inverse(rho, z)?;
    let (first, mid, last) = entries(rho, eps, x);
    let mut diag = vec![mid; h + 1];
    diag[0] = first;
    diag[h] = last;
    SymTridiagonal::new(diag, vec![-1.0; h])
}

fn checked_inverse(rho: f64, z: f64) -> Result<f64> {
    let (a, b) = support_bounds(rho)?;
    if !z.is_finite() || (z >= a && z <= b) {
        return Err(domain(format!("z = {z} lies in the support [{a}, {b}]")));
    }
    Ok(f_inverse_raw(rho, z))
}

/// Determinant of the outlier matrix at `z`, by the continuant recurrence.
pub fn determinant_value(rho: f64, eps: f64, h: usize, z: f64) -> Result<f64> {
    check_params(rho, eps, h)?;
    let x = checked_inverse(rho, z)?;
    let (first, mid, last) = entries(rho, eps, x);
    Ok(continuant(first, mid, last, h))
}

fn det_unchecked(rho: f64, eps: f64, h: usize, z: f64) -> f64 {
    let x = f_inverse_raw(rho, z);
    let (first, mid, last) = entries(rho, eps, x);
    continuant(first, mid, last, h)
}

/// Guaranteed outlier counts and the intervals that each hold at least one outlier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketReport {
    pub p: usize,
    pub q: usize,
    pub left_intervals: Vec<(f64, f64)>,
    pub right_intervals: Vec<(f64, f64)>,
    /// Bound on the largest eigenvalue, `b + sqrt(h) |eps| sqrt((eps + 2 rho)^2 + 2)`.
    pub upper_bound: f64,
    /// Interior nodes `1 + c^2 - 2c cos(j pi / h)`, `c = rho + eps`, ascending.
    pub nodes: Vec<f64>,
    /// True when nearly coincident nodes were merged.
    pub merged_nodes: bool,
}

/// Bracketing intervals for the length-`h` change `(rho, eps)`.
///
/// The nodes are sorted ascending and padded with `-inf` and `+inf`, which
/// covers both signs of `rho` and of `rho + eps` with one rule.
pub fn bracket_intervals(rho: f64, eps: f64, h: usize) -> Result<BracketReport> {
    check_params(rho, eps, h)?;
    if (rho + eps).abs() <= rho.abs() {
        return Err(invalid(format!(
            "brackets need |rho + eps| > |rho|; got |{}| <= |{rho}|",
            rho + eps
        )));
    }
    let (a, b) = support_bounds(rho)?;
    let c = rho + eps;
    let mut nodes: Vec<f64> = (1..h)
        .map(|j| 1.0 + c * c - 2.0 * c * (j as f64 * std::f64::consts::PI / h as f64).cos())
        .collect();
    nodes.sort_by(f64::total_cmp);
    let before = nodes.len();
    nodes.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    let merged_nodes = nodes.len() != before;
    for &x in &nodes {
        if (x - a).abs() < 1e-12 || (x - b).abs() < 1e-12 {
            return Err(ScmError::DegenerateConfiguration(format!(
                "node {x} coincides with a support endpoint ({a}, {b}); perturb eps slightly"
            )));
        }
    }
    let upper_bound = b + (h as f64).sqrt() * eps.abs() * ((eps + 2.0 * rho).powi(2) + 2.0).sqrt();
    let mut padded = Vec::with_capacity(nodes.len() + 2);
    padded.push(f64::NEG_INFINITY);
    padded.extend(&nodes);
    padded.push(f64::INFINITY);
    let top = padded.len() - 1;
    let p = padded.iter().filter(|&&x| x < a).count();
    let q = padded.iter().filter(|&&x| x > b).count();
    let left_intervals = (1..=p).map(|j| (padded[j - 1].max(0.0), padded[j].min(a))).collect();
    let right_intervals = (1..=q).map(|l| (padded[top - l].max(b), padded[top + 1 - l].min(upper_bound))).collect();
    Ok(BracketReport { p, q, left_intervals, right_intervals, upper_bound, nodes, merged_nodes })
}

/// Roots found in one bracketing interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootScan {
    pub interval: (f64, f64),
    pub roots: Vec<f64>,
}

fn scan_interval(rho: f64, eps: f64, h: usize, lo: f64, hi: f64, panels: usize, tol: f64) -> Vec<f64> {
    // stay strictly inside: the endpoints may be 0 or a support bound
    let width = hi - lo;
    let inset = (width * 1e-13).max(f64::MIN_POSITIVE);
    let grid: Vec<f64> = (0..=panels)
        .map(|i| {
            let z = lo + width * i as f64 / panels as f64;
            z.clamp(lo + inset, hi - inset)
        })
        .collect();
    let vals: Vec<f64> = grid.iter().map(|&z| det_unchecked(rho, eps, h, z)).collect();
    let mut roots = Vec::new();
    for i in 0..panels {
        let (mut l, mut r) = (grid[i], grid[i + 1]);
        let (mut fl, fr) = (vals[i], vals[i + 1]);
        if fl == 0.0 {
            roots.push(l);
            continue;
        }
        if fr == 0.0 {
            if i + 1 == panels {
                roots.push(r);
            }
            continue;
        }
        if (fl > 0.0) == (fr > 0.0) {
            continue;
        }
        for _ in 0..200 {
            if r - l <= tol {
                break;
            }
            let mid = 0.5 * (l + r);
            if mid <= l || mid >= r {
                break;
            }
            let fm = det_unchecked(rho, eps, h, mid);
            if fm == 0.0 {
                l = mid;
                r = mid;
                break;
            }
            if (fm > 0.0) == (fl > 0.0) {
                l = mid;
                fl = fm;
            } else {
                r = mid;
            }
        }
        roots.push(0.5 * (l + r));
    }
    roots
}

/// Outliers of the length-`h` change `(rho, eps)` by sign scan and bisection inside each bracket.
pub fn interval_scm_outliers(rho: f64, eps: f64, h: usize, tol: f64) -> Result<OutlierSet> {
    interval_scm_outliers_with(rho, eps, h, tol, DEFAULT_PANELS).map(|(set, _, _)| set)
}

/// As [`interval_scm_outliers`], also returning the brackets and the roots found in each.
pub fn interval_scm_outliers_with(
    rho: f64,
    eps: f64,
    h: usize,
    tol: f64,
    panels: usize,
) -> Result<(OutlierSet, BracketReport, Vec<RootScan>)> {
    if !(tol > 0.0) {
        return Err(invalid("root tolerance must be positive"));
    }
    if panels < 1 {
        return Err(invalid("sign scan needs at least one panel"));
    }
    let report = bracket_intervals(rho, eps, h)?;
    let mut scans = Vec::new();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (side, intervals) in [(0, &report.left_intervals), (1, &report.right_intervals)] {
        for &(lo, hi) in intervals {
            let roots = if hi > lo { scan_interval(rho, eps, h, lo, hi, panels, tol) } else { Vec::new() };
            if roots.is_empty() {
                return Err(numerical(format!(
                    "no sign change of the determinant in guaranteed interval ({lo}, {hi}) for rho={rho}, eps={eps}, h={h}"
                )));
            }
            if side == 0 {
                left.extend(&roots);
            } else {
                right.extend(&roots);
            }
            scans.push(RootScan { interval: (lo, hi), roots });
        }
    }
    Ok((OutlierSet::new(left, right), report, scans))
}
