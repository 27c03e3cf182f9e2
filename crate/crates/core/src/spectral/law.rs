//! The limiting spectral law of AR(1) precision matrices and its mixtures.

use std::f64::consts::PI;

use crate::error::{domain, invalid, Result};
use crate::model::{check_rho, CoefficientSchedule};
use crate::spectral::quadrature::integrate;

/// `((1 - |rho|)^2, (1 + |rho|)^2)`.
pub fn support_bounds(rho: f64) -> Result<(f64, f64)> {
    check_rho(rho)?;
    let r = rho.abs();
    Ok(((1.0 - r) * (1.0 - r), (1.0 + r) * (1.0 + r)))
}

/// Law of `1 + rho^2 - 2 rho cos X` with `X` uniform on `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralLaw {
    rho: f64,
    a: f64,
    b: f64,
}

impl SpectralLaw {
    pub fn new(rho: f64) -> Result<Self> {
        let (a, b) = support_bounds(rho)?;
        Ok(SpectralLaw { rho, a, b })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Lower support bound.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Upper support bound.
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn contains(&self, z: f64) -> bool {
        z >= self.a && z <= self.b
    }

    /// Distribution function, by inverting `1 + rho^2 - 2|rho| cos x = t` on `[0, pi]`.
    pub fn cdf(&self, t: f64) -> f64 {
        if t < self.a {
            return 0.0;
        }
        if t >= self.b {
            return 1.0;
        }
        let r = self.rho.abs();
        let c = ((1.0 + r * r - t) / (2.0 * r)).clamp(-1.0, 1.0);
        let v = c.acos() / PI;
        if v.is_finite() {
            v
        } else {
            self.cdf_quadrature(t)
        }
    }

    /// Distribution function by direct integration of the indicator over `[0, 2 pi]`.
    pub fn cdf_quadrature(&self, t: f64) -> f64 {
        let rho = self.rho;
        let ind = |x: f64| if 1.0 + rho * rho - 2.0 * rho * x.cos() <= t { 1.0 } else { 0.0 };
        (integrate(ind, 0.0, 2.0 * PI, 1e-10) / (2.0 * PI)).clamp(0.0, 1.0)
    }

    /// Stieltjes transform `int 1/(z - x) dmu(x)` for real `z` outside the support.
    pub fn stieltjes(&self, z: f64) -> Result<f64> {
        if !z.is_finite() || self.contains(z) {
            return Err(domain(format!("z = {z} lies in the support [{}, {}]", self.a, self.b)));
        }
        let root = ((z - self.a) * (z - self.b)).sqrt();
        Ok(if z > self.b { 1.0 / root } else { -1.0 / root })
    }

    /// `k`-th moment in closed form; odd cosine powers integrate to zero.
    pub fn moment(&self, k: u32) -> f64 {
        let c = 1.0 + self.rho * self.rho;
        let two_rho = 2.0 * self.rho;
        let mut total = 0.0;
        for j in (0..=k).step_by(2) {
            let mean_cos_pow = binomial(j, j / 2) / 2f64.powi(j as i32);
            total += binomial(k, j) * c.powi((k - j) as i32) * two_rho.powi(j as i32) * mean_cos_pow;
        }
        total
    }

    /// `k`-th moment by quadrature.
    pub fn moment_quadrature(&self, k: u32) -> f64 {
        let rho = self.rho;
        integrate(|x| (1.0 + rho * rho - 2.0 * rho * x.cos()).powi(k as i32), 0.0, 2.0 * PI, 1e-12) / (2.0 * PI)
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Convex combination of spectral laws.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureLaw {
    components: Vec<(f64, SpectralLaw)>,
}

impl MixtureLaw {
    pub fn new(components: Vec<(f64, SpectralLaw)>) -> Result<Self> {
        if components.is_empty() {
            return Err(invalid("mixture needs at least one component"));
        }
        if components.iter().any(|(w, _)| !(0.0..=1.0).contains(w)) {
            return Err(invalid("mixture weights must lie in [0, 1]"));
        }
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(invalid(format!("mixture weights sum to {total}, not 1")));
        }
        Ok(MixtureLaw { components })
    }

    /// Limit law for a schedule whose segments occupy fractions `h_j / n`.
    pub fn from_schedule(schedule: &CoefficientSchedule, n: usize) -> Result<Self> {
        let mut comps = Vec::new();
        let mut used = 0.0;
        for s in schedule.segments() {
            let tau = s.h as f64 / n as f64;
            used += tau;
            comps.push((tau, SpectralLaw::new(schedule.rho() + s.eps)?));
        }
        if used > 1.0 {
            return Err(invalid("segments cover more than the whole series"));
        }
        comps.insert(0, (1.0 - used, SpectralLaw::new(schedule.rho())?));
        Self::new(comps)
    }

    pub fn components(&self) -> &[(f64, SpectralLaw)] {
        &self.components
    }

    pub fn cdf(&self, t: f64) -> f64 {
        self.components.iter().map(|(w, law)| w * law.cdf(t)).sum()
    }
}

/// `sup_t |F_emp(t) - cdf(t)|` over the jump points of the empirical distribution
/// of the ascending sample `sorted`.
pub fn kolmogorov_distance(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs());
    }
    d
}
