/// Hausdorff distance between two finite sets of reals.
///
/// Two empty sets are at distance 0; an empty and a nonempty set at `+inf`.
pub fn hausdorff_distance(x: &[f64], y: &[f64]) -> f64 {
    match (x.is_empty(), y.is_empty()) {
        (true, true) => return 0.0,
        (true, false) | (false, true) => return f64::INFINITY,
        _ => {}
    }
    directed(x, y).max(directed(y, x))
}

fn directed(from: &[f64], to: &[f64]) -> f64 {
    from.iter()
        .map(|p| to.iter().map(|q| (p - q).abs()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

/// `(|est_l - true_l| + |est_r - true_r|) / 2`.
pub fn mean_absolute_error(est: (f64, f64), truth: (f64, f64)) -> f64 {
    0.5 * ((est.0 - truth.0).abs() + (est.1 - truth.1).abs())
}
