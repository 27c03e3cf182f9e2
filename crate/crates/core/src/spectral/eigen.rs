//! Sturm-sequence bisection and inverse iteration for symmetric tridiagonal matrices.

use std::collections::BTreeMap;
use std::io::Write;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, numerical, Result};
use crate::model::substream;
use crate::precision::SymTridiagonal;

/// Default relative bisection tolerance.
pub const DEFAULT_TOL: f64 = 1e-14;

/// Ascending eigenvalues with optional eigenvectors keyed by 0-based index.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: BTreeMap<usize, Vec<f64>>,
}

impl Spectrum {
    pub fn new(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(f64::total_cmp);
        Spectrum { eigenvalues, eigenvectors: BTreeMap::new() }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.len() - 1]
    }

    pub fn eigenvector(&self, index: usize) -> Option<&[f64]> {
        self.eigenvectors.get(&index).map(Vec::as_slice)
    }

    pub fn insert_eigenvector(&mut self, index: usize, v: Vec<f64>) {
        self.eigenvectors.insert(index, v);
    }

    /// Eigenvalues strictly below `lo` and strictly above `hi`.
    pub fn outside(&self, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
        let left = self.eigenvalues.iter().copied().filter(|&v| v < lo).collect();
        let right = self.eigenvalues.iter().copied().filter(|&v| v > hi).collect();
        (left, right)
    }

    /// `(1/n) sum_i 1/(z - lambda_i)`.
    pub fn resolvent_mean(&self, z: f64) -> f64 {
        self.eigenvalues.iter().map(|l| 1.0 / (z - l)).sum::<f64>() / self.len() as f64
    }

    /// `(1/n) sum_i lambda_i^k`.
    pub fn moment(&self, k: u32) -> f64 {
        self.eigenvalues.iter().map(|l| l.powi(k as i32)).sum::<f64>() / self.len() as f64
    }

    /// Fraction of eigenvalues `<= t`.
    pub fn empirical_cdf(&self, t: f64) -> f64 {
        self.eigenvalues.partition_point(|&v| v <= t) as f64 / self.len() as f64
    }

    /// Bin counts over `bins` equal-width bins spanning `[lo, hi]`.
    pub fn histogram(&self, bins: usize, lo: f64, hi: f64) -> Vec<(f64, f64, usize)> {
        let width = (hi - lo) / bins as f64;
        let mut counts = vec![0usize; bins];
        for &v in &self.eigenvalues {
            if v < lo || v > hi {
                continue;
            }
            let idx = (((v - lo) / width) as usize).min(bins - 1);
            counts[idx] += 1;
        }
        counts
            .into_iter()
            .enumerate()
            .map(|(i, c)| (lo + i as f64 * width, lo + (i + 1) as f64 * width, c))
            .collect()
    }

    /// `index,eigenvalue` with 1-based indices.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["index", "eigenvalue"])?;
        for (i, v) in self.eigenvalues.iter().enumerate() {
            wtr.write_record(&[(i + 1).to_string(), v.to_string()])?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// `bin_left,bin_right,count`.
    pub fn write_histogram_csv<W: Write>(&self, w: W, bins: usize) -> Result<()> {
        if bins == 0 {
            return Err(invalid("histogram needs at least one bin"));
        }
        let (lo, hi) = (self.min(), self.max());
        let hi = if hi > lo { hi } else { lo + 1.0 };
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["bin_left", "bin_right", "count"])?;
        for (l, r, c) in self.histogram(bins, lo, hi) {
            wtr.write_record(&[format!("{l:.12e}"), format!("{r:.12e}"), c.to_string()])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Number of eigenvalues strictly less than `x`.
///
/// Counts sign changes in the leading principal minors of `T - x I`, built by
/// the three-term recurrence `p_i = (d_i - x) p_{i-1} - e_{i-1}^2 p_{i-2}`.
/// The pair `(p_{i-1}, p_i)` is rescaled by a power of two when it leaves
/// `[2^-500, 2^500]`, so any `n` is safe. A zero minor takes the sign opposite to
/// its predecessor.
pub fn sturm_count(t: &SymTridiagonal, x: f64) -> usize {
    let (d, e2, s) = normalized(t);
    sturm_minors(&d, &e2, x / s).0
}

/// Diagonal and squared off-diagonal divided by a power of two near the largest
/// entry, so squaring neither overflows nor underflows. Returns the divisor too.
fn normalized(t: &SymTridiagonal) -> (Vec<f64>, Vec<f64>, f64) {
    let top = t.diag().iter().chain(t.offdiag()).fold(0.0f64, |m, v| m.max(v.abs()));
    let s = if top > 0.0 && top.is_finite() { 2f64.powi(top.log2().round() as i32) } else { 1.0 };
    let d = t.diag().iter().map(|v| v / s).collect();
    let e2 = t.offdiag().iter().map(|v| (v / s) * (v / s)).collect();
    (d, e2, s)
}

const BIG: f64 = 3.273_390_607_896_142e150; // 2^500
const SMALL: f64 = 3.054_936_363_499_605e-151; // 2^-500

/// `(count, m, k)` with `det(T - x I) = m * 2^(500 k)`.
#[inline]
fn sturm_minors(d: &[f64], e2: &[f64], x: f64) -> (usize, f64, i32) {
    let mut prev = 1.0f64;
    let mut cur = d[0] - x;
    if cur == 0.0 {
        cur = -f64::MIN_POSITIVE;
    }
    let mut count = (cur < 0.0) as usize;
    let mut k = 0;
    for (di, ei2) in d[1..].iter().zip(e2) {
        let mut next = (di - x) * cur - ei2 * prev;
        if next == 0.0 {
            next = if cur < 0.0 { f64::MIN_POSITIVE } else { -f64::MIN_POSITIVE };
        }
        count += ((next < 0.0) != (cur < 0.0)) as usize;
        prev = cur;
        cur = next;
        let mag = cur.abs();
        if mag > BIG {
            cur *= SMALL;
            prev *= SMALL;
            k += 1;
        } else if mag < SMALL && prev.abs() < SMALL {
            cur *= BIG;
            prev *= BIG;
            k -= 1;
        }
    }
    (count, cur, k)
}

/// Brings two scaled determinants to a common exponent.
fn common_scale(fa: (f64, i32), fb: (f64, i32)) -> (f64, f64) {
    let top = fa.1.max(fb.1);
    let shift = |f: (f64, i32)| match top - f.1 {
        0 => f.0,
        1 => f.0 * SMALL,
        _ => 0.0,
    };
    (shift(fa), shift(fb))
}

fn check_input(t: &SymTridiagonal, tol: f64) -> Result<()> {
    if !t.is_finite() {
        return Err(invalid("matrix contains NaN or infinite entries"));
    }
    if !(tol > 0.0) {
        return Err(invalid(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

struct Bisector<'a> {
    d: &'a [f64],
    e2: Vec<f64>,
    abs_tol: f64,
}

impl Bisector<'_> {
    /// Eigenvalues with index in `[want_lo, want_hi)` lying in `[lo, hi)`, where
    /// `count(lo) = clo` and `count(hi) = chi`.
    #[allow(clippy::too_many_arguments)]
    fn run(&self, lo: f64, hi: f64, clo: usize, chi: usize, want_lo: usize, want_hi: usize, out: &mut Vec<f64>) {
        if chi <= clo || chi <= want_lo || clo >= want_hi {
            return;
        }
        let mid = 0.5 * (lo + hi);
        if hi - lo <= self.abs_tol || mid <= lo || mid >= hi {
            let first = clo.max(want_lo);
            let last = chi.min(want_hi);
            out.extend(std::iter::repeat_n(mid, last - first));
            return;
        }
        if chi - clo == 1 {
            out.push(self.refine(lo, hi));
            return;
        }
        let cmid = sturm_minors(self.d, &self.e2, mid).0;
        self.run(lo, mid, clo, cmid, want_lo, want_hi, out);
        self.run(mid, hi, cmid, chi, want_lo, want_hi, out);
    }

    fn det(&self, x: f64) -> (f64, i32) {
        let (_, m, k) = sturm_minors(self.d, &self.e2, x);
        (m, k)
    }

    /// Isolated eigenvalue in `(lo, hi)` by Illinois-modified regula falsi on
    /// `det(T - x I)`, with a bisection step whenever the bracket fails to halve.
    fn refine(&self, lo: f64, hi: f64) -> f64 {
        let (mut a, mut b) = (lo, hi);
        let (mut fa, mut fb) = (self.det(a), self.det(b));
        if (fa.0 < 0.0) == (fb.0 < 0.0) {
            return self.bisect_only(a, b, fa);
        }
        let mut weight_a = 1.0;
        let mut weight_b = 1.0;
        let mut side = 0i8;
        let mut width_mark = b - a;
        for iter in 0..200 {
            let width = b - a;
            if width <= self.abs_tol {
                break;
            }
            let (va, vb) = common_scale(fa, fb);
            let (va, vb) = (va * weight_a, vb * weight_b);
            let mut c = if iter % 4 == 3 && width > 0.5 * width_mark {
                0.5 * (a + b)
            } else {
                (a * vb - b * va) / (vb - va)
            };
            if iter % 4 == 3 {
                width_mark = width;
            }
            let guard = 0.25 * self.abs_tol;
            if !(c > a + guard && c < b - guard) {
                c = 0.5 * (a + b);
            }
            let fc = self.det(c);
            if fc.0 == 0.0 {
                return c;
            }
            if (fc.0 < 0.0) == (fa.0 < 0.0) {
                a = c;
                fa = fc;
                weight_a = 1.0;
                if side == -1 {
                    weight_b *= 0.5;
                }
                side = -1;
            } else {
                b = c;
                fb = fc;
                weight_b = 1.0;
                if side == 1 {
                    weight_a *= 0.5;
                }
                side = 1;
            }
        }
        if b - a > self.abs_tol {
            return self.bisect_only(a, b, fa);
        }
        0.5 * (a + b)
    }

    fn bisect_only(&self, mut a: f64, mut b: f64, fa: (f64, i32)) -> f64 {
        let neg_a = fa.0 < 0.0;
        while b - a > self.abs_tol {
            let c = 0.5 * (a + b);
            if c <= a || c >= b {
                break;
            }
            if (self.det(c).0 < 0.0) == neg_a {
                a = c;
            } else {
                b = c;
            }
        }
        0.5 * (a + b)
    }
}

fn bisect_range(t: &SymTridiagonal, tol: f64, want_lo: usize, want_hi: usize) -> Vec<f64> {
    let (d, e2, s) = normalized(t);
    let (glo, ghi) = t.gershgorin();
    let (glo, ghi) = (glo / s, ghi / s);
    let scale = glo.abs().max(ghi.abs()).max(f64::MIN_POSITIVE);
    let pad = scale * 1e-12 + f64::MIN_POSITIVE;
    let (lo, hi) = (glo - pad, ghi + pad);
    let bis = Bisector { d: &d, e2, abs_tol: tol * scale };
    let mut out = Vec::with_capacity(want_hi - want_lo);
    bis.run(lo, hi, 0, t.n(), want_lo, want_hi, &mut out);
    out.iter_mut().for_each(|v| *v *= s);
    out
}

/// All eigenvalues in ascending order, each within `tol * max|Gershgorin bound|`.
pub fn eigenvalues_symtridiag(t: &SymTridiagonal, tol: f64) -> Result<Spectrum> {
    check_input(t, tol)?;
    Ok(Spectrum::new(bisect_range(t, tol, 0, t.n())))
}

/// Eigenvalues with 0-based ascending indices in `range`.
pub fn eigenvalues_by_index(t: &SymTridiagonal, range: std::ops::Range<usize>, tol: f64) -> Result<Vec<f64>> {
    check_input(t, tol)?;
    if range.start >= range.end || range.end > t.n() {
        return Err(invalid(format!("index range {range:?} invalid for n = {}", t.n())));
    }
    Ok(bisect_range(t, tol, range.start, range.end))
}

/// The `count` smallest and `count` largest eigenvalues.
pub fn extreme_eigenvalues(t: &SymTridiagonal, count: usize, tol: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = t.n();
    let c = count.min(n);
    let low = eigenvalues_by_index(t, 0..c, tol)?;
    let high = eigenvalues_by_index(t, n - c..n, tol)?;
    Ok((low, high))
}

/// LU factorization of `T - sigma I` with partial pivoting.
struct ShiftedLu {
    /// `u0[i]`, `u1[i]`, `u2[i]`: entries `(i,i)`, `(i,i+1)`, `(i,i+2)` of U.
    u0: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    /// Multiplier eliminating row `i+1` and whether rows `i`, `i+1` were swapped.
    mult: Vec<f64>,
    swap: Vec<bool>,
}

impl ShiftedLu {
    fn new(t: &SymTridiagonal, sigma: f64) -> Self {
        let n = t.n();
        let d = t.diag();
        let e = t.offdiag();
        let tiny = f64::EPSILON * t.norm_inf().max(1.0);
        let mut u0 = vec![0.0; n];
        let mut u1 = vec![0.0; n];
        let mut u2 = vec![0.0; n];
        let mut mult = vec![0.0; n.saturating_sub(1)];
        let mut swap = vec![false; n.saturating_sub(1)];
        // current row i holds (a, b, c) in columns (i, i+1, i+2)
        let mut a = d[0] - sigma;
        let mut b = if n > 1 { e[0] } else { 0.0 };
        let mut c = 0.0;
        for i in 0..n {
            if i + 1 == n {
                u0[i] = if a == 0.0 { tiny } else { a };
                break;
            }
            // next row i+1 has (sub, diag, super) in columns (i, i+1, i+2)
            let sub = e[i];
            let nd = d[i + 1] - sigma;
            let ns = if i + 2 < n { e[i + 1] } else { 0.0 };
            if sub.abs() > a.abs() {
                swap[i] = true;
                let m = a / sub;
                mult[i] = m;
                u0[i] = sub;
                u1[i] = nd;
                u2[i] = ns;
                a = b - m * nd;
                b = c - m * ns;
                c = 0.0;
            } else {
                let piv = if a == 0.0 { tiny } else { a };
                let m = sub / piv;
                mult[i] = m;
                u0[i] = piv;
                u1[i] = b;
                u2[i] = c;
                a = nd - m * b;
                b = ns - m * c;
                c = 0.0;
            }
        }
        ShiftedLu { u0, u1, u2, mult, swap }
    }

    fn solve(&self, rhs: &mut [f64]) {
        let n = rhs.len();
        for i in 0..n.saturating_sub(1) {
            if self.swap[i] {
                rhs.swap(i, i + 1);
            }
            rhs[i + 1] -= self.mult[i] * rhs[i];
        }
        for i in (0..n).rev() {
            let mut s = rhs[i];
            if i + 1 < n {
                s -= self.u1[i] * rhs[i + 1];
            }
            if i + 2 < n {
                s -= self.u2[i] * rhs[i + 2];
            }
            rhs[i] = s / self.u0[i];
        }
    }
}

fn normalize_sign(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut imax = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[imax].abs() {
            imax = i;
        }
    }
    let s = if v[imax] < 0.0 { -1.0 / norm } else { 1.0 / norm };
    for x in v.iter_mut() {
        *x *= s;
    }
}

fn residual_inf(t: &SymTridiagonal, lambda: f64, v: &[f64]) -> f64 {
    t.matvec(v).iter().zip(v).map(|(tv, x)| (tv - lambda * x).abs()).fold(0.0, f64::max)
}

/// Unit eigenvector for an eigenvalue `lambda` by inverse iteration from `start`.
pub fn eigenvector_from_start(t: &SymTridiagonal, lambda: f64, start: &[f64]) -> Result<Vec<f64>> {
    if !t.is_finite() || !lambda.is_finite() {
        return Err(invalid("matrix and eigenvalue must be finite"));
    }
    let n = t.n();
    if start.len() != n {
        return Err(invalid("start vector length must equal n"));
    }
    let target = 1e-8 * t.norm_inf().max(f64::MIN_POSITIVE);
    let lu = ShiftedLu::new(t, lambda);
    let mut v = start.to_vec();
    normalize_sign(&mut v);
    for _ in 0..8 {
        lu.solve(&mut v);
        if v.iter().any(|x| !x.is_finite()) {
            return Err(numerical("inverse iteration overflowed"));
        }
        normalize_sign(&mut v);
        if residual_inf(t, lambda, &v) <= target {
            // a small residual still allows error of order residual / gap in the
            // vector; one more solve shrinks that by another factor of |shift error| / gap
            lu.solve(&mut v);
            if v.iter().any(|x| !x.is_finite()) {
                return Err(numerical("inverse iteration overflowed"));
            }
            normalize_sign(&mut v);
            return Ok(v);
        }
    }
    Err(numerical(format!("inverse iteration did not converge for eigenvalue {lambda}")))
}

/// Unit eigenvector for `lambda`, sign fixed so the largest-magnitude entry is positive.
pub fn eigenvector_symtridiag(t: &SymTridiagonal, lambda: f64) -> Result<Vec<f64>> {
    let n = t.n();
    // a fixed, non-symmetric start avoids being orthogonal to the target by accident
    let start: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64) * 0.618_033_988_749_895).fract()).collect();
    eigenvector_from_start(t, lambda, &start)
}

/// Inverse iteration from a Gaussian start vector drawn from `seed`.
pub fn eigenvector_seeded(t: &SymTridiagonal, lambda: f64, seed: u64) -> Result<Vec<f64>> {
    let mut rng = substream(seed, 0);
    let start: Vec<f64> = (0..t.n()).map(|_| rng.sample(StandardNormal)).collect();
    eigenvector_from_start(t, lambda, &start)
}
