//! Dense dual simplex for `min 1'x  s.t.  lo <= A x <= hi,  x >= 0`.
//!
//! Row activities `r = A x` are carried as boxed basic variables. The start
//! basis is all row activities with `x = 0`, which is dual feasible because
//! every cost is one, so only dual simplex pivots are needed.

use crate::dense::Matrix;

/// Solution of one linear program.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    /// Row duals; dual feasibility is `A' y <= 1`.
    pub duals: Vec<f64>,
    pub objective: f64,
    pub pivots: usize,
}

/// Why the solver stopped without a solution.
#[derive(Debug, Clone, PartialEq)]
pub enum LpFailure {
    Infeasible,
    IterationLimit,
}

const PIVOT_TOL: f64 = 1e-9;
/// Consecutive degenerate pivots before switching to smallest-index choices.
const STALL_LIMIT: usize = 50;

/// Solves the program with constraint matrix `a` (m rows, `cols` columns, row-major).
pub fn solve_box_lp(a: &[f64], m: usize, cols: usize, lo: &[f64], hi: &[f64]) -> Result<LpSolution, LpFailure> {
    debug_assert_eq!(a.len(), m * cols);
    let width = cols + m;
    // tableau of B^{-1} [A, -I]; the start basis is the row block with B = -I
    let mut tab = vec![0.0; m * width];
    for i in 0..m {
        for j in 0..cols {
            tab[i * width + j] = -a[i * cols + j];
        }
        tab[i * width + cols + i] = 1.0;
    }
    let mut basis: Vec<usize> = (cols..width).collect();
    let mut is_basic = vec![false; width];
    for &b in &basis {
        is_basic[b] = true;
    }
    let mut d = vec![0.0; width];
    d[..cols].fill(1.0);
    let bound_lo = |j: usize| if j < cols { 0.0 } else { lo[j - cols] };
    let bound_hi = |j: usize| if j < cols { f64::INFINITY } else { hi[j - cols] };
    // nonbasic values: x at 0, row variables at one of their bounds
    let mut val = vec![0.0; width];
    let scale = a.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(1.0);
    let feas_tol = 1e-11 * scale;
    let max_pivots = 50 * (m + cols) + 1000;
    let mut stall = 0usize;
    let mut pivots = 0usize;

    loop {
        // leaving row: largest bound violation, or smallest index while stalled
        let mut leave: Option<(usize, f64)> = None;
        for (k, &bk) in basis.iter().enumerate() {
            let v = val[bk];
            let viol = if v < bound_lo(bk) - feas_tol {
                bound_lo(bk) - v
            } else if v > bound_hi(bk) + feas_tol {
                v - bound_hi(bk)
            } else {
                continue;
            };
            let better = match leave {
                None => true,
                Some((kk, vv)) => {
                    if stall >= STALL_LIMIT {
                        bk < basis[kk]
                    } else {
                        viol > vv
                    }
                }
            };
            if better {
                leave = Some((k, viol));
            }
        }
        let Some((k, _)) = leave else {
            break;
        };
        if pivots >= max_pivots {
            return Err(LpFailure::IterationLimit);
        }
        let bk = basis[k];
        let to_lower = val[bk] < bound_lo(bk);
        let target = if to_lower { bound_lo(bk) } else { bound_hi(bk) };
        let row = &tab[k * width..(k + 1) * width];
        // x_B = const - sum alpha_j x_j over nonbasic j
        let mut enter: Option<(usize, f64)> = None;
        for j in 0..width {
            if is_basic[j] {
                continue;
            }
            let alpha = row[j];
            if alpha.abs() <= PIVOT_TOL {
                continue;
            }
            let at_upper = j >= cols && val[j] == bound_hi(j) && bound_hi(j) > bound_lo(j);
            let at_lower = !at_upper;
            let fixed = j >= cols && bound_hi(j) == bound_lo(j);
            if fixed {
                continue;
            }
            let eligible = if to_lower {
                (at_lower && alpha < 0.0) || (at_upper && alpha > 0.0)
            } else {
                (at_lower && alpha > 0.0) || (at_upper && alpha < 0.0)
            };
            if !eligible {
                continue;
            }
            let ratio = (d[j] / alpha).abs();
            match enter {
                Some((_, r)) if ratio >= r => {}
                _ => enter = Some((j, ratio)),
            }
        }
        let Some((q, ratio)) = enter else {
            return Err(LpFailure::Infeasible);
        };
        stall = if ratio <= 1e-14 { stall + 1 } else { 0 };
        let alpha_q = row[q];
        // primal step
        let delta = (val[bk] - target) / alpha_q;
        for (i, &bi) in basis.iter().enumerate() {
            val[bi] -= tab[i * width + q] * delta;
        }
        val[q] += delta;
        val[bk] = target;
        // dual step
        let theta = d[q] / alpha_q;
        let pivot_row: Vec<f64> = tab[k * width..(k + 1) * width].iter().map(|v| v / alpha_q).collect();
        for j in 0..width {
            d[j] -= theta * alpha_q * pivot_row[j];
        }
        d[q] = 0.0;
        // tableau pivot
        for i in 0..m {
            if i == k {
                continue;
            }
            let f = tab[i * width + q];
            if f == 0.0 {
                continue;
            }
            let dst = &mut tab[i * width..(i + 1) * width];
            for (t, p) in dst.iter_mut().zip(&pivot_row) {
                *t -= f * p;
            }
        }
        tab[k * width..(k + 1) * width].copy_from_slice(&pivot_row);
        is_basic[bk] = false;
        is_basic[q] = true;
        basis[k] = q;
        pivots += 1;
        if pivots % 64 == 0 {
            refresh_basic_values(&tab, &basis, &is_basic, &mut val, m, cols, width);
        }
    }
    refresh_basic_values(&tab, &basis, &is_basic, &mut val, m, cols, width);
    let x: Vec<f64> = val[..cols].iter().map(|v| v.max(0.0)).collect();
    let duals = d[cols..].to_vec();
    let objective = x.iter().sum();
    Ok(LpSolution { x, duals, objective, pivots })
}

/// Recomputes basic values from the nonbasic ones, `x_B = -B^{-1} N x_N`. Only
/// nonbasic row variables can be nonzero, and their columns are `-e_j`.
fn refresh_basic_values(
    tab: &[f64],
    basis: &[usize],
    is_basic: &[bool],
    val: &mut [f64],
    m: usize,
    cols: usize,
    width: usize,
) {
    // column cols + j of the tableau is B^{-1}(-e_j), so x_B = -sum_j tab[:, cols + j] * r_j
    let nonbasic_rows: Vec<(usize, f64)> =
        (0..m).filter(|&j| !is_basic[cols + j] && val[cols + j] != 0.0).map(|j| (j, val[cols + j])).collect();
    for (i, &bi) in basis.iter().enumerate() {
        let s: f64 = nonbasic_rows.iter().map(|&(j, r)| tab[i * width + cols + j] * r).sum();
        val[bi] = -s;
    }
    for j in 0..cols {
        if !is_basic[j] {
            val[j] = 0.0;
        }
    }
}

/// Dual objective `sum_k (y_k > 0 ? y_k lo_k : y_k hi_k)`, a lower bound on any feasible objective
/// whenever `A' y <= 1`.
pub fn dual_objective(duals: &[f64], lo: &[f64], hi: &[f64]) -> f64 {
    duals.iter().zip(lo.iter().zip(hi)).map(|(&y, (&l, &h))| if y > 0.0 { y * l } else { y * h }).sum()
}

/// `A^T y` for a square matrix.
pub fn transpose_times(a: &Matrix, y: &[f64]) -> Vec<f64> {
    let n = a.n();
    let mut out = vec![0.0; n];
    for i in 0..n {
        for (j, o) in out.iter_mut().enumerate() {
            *o += a.get(i, j) * y[i];
        }
    }
    out
}
