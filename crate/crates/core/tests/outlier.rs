use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scm_spectra::error::ScmError;
use scm_spectra::model::{ChangeSegment, CoefficientSchedule};
use scm_spectra::outlier::*;
use scm_spectra::precision::precision_matrix;
use scm_spectra::spectral::{extreme_eigenvalues, support_bounds, DEFAULT_TOL};

fn extremes(schedule: &CoefficientSchedule, n: usize, count: usize) -> (Vec<f64>, Vec<f64>) {
    extreme_eigenvalues(&precision_matrix(schedule, n, 1.0).unwrap(), count, DEFAULT_TOL).unwrap()
}

/// Interior unit-disc root of `rho x^2 - (1 + rho^2 - z) x + rho`, by the plain quadratic formula.
fn quadratic_inside(rho: f64, z: f64) -> f64 {
    let b = -(1.0 + rho * rho - z);
    let disc = (b * b - 4.0 * rho * rho).sqrt();
    let r1 = (-b + disc) / (2.0 * rho);
    let r2 = (-b - disc) / (2.0 * rho);
    if r1.abs() < 1.0 {
        r1
    } else {
        r2
    }
}

#[test]
fn f_transform_examples() {
    assert!((f_transform(0.3, 0.5).unwrap() - 0.34).abs() < 1e-15);
    assert!((f_transform(0.3, 1.0 - 1e-9).unwrap() - 0.49).abs() < 1e-8);
    assert!(f_transform(0.3, 0.0).is_err());
    assert!(f_transform(0.3, 1.0).is_err());
    assert!(f_transform(0.3, -1.5).is_err());
    let f = |x: f64| 1.0 + 0.09 - 0.3 * (x + 1.0 / x);
    assert!((f(0.4) - f(1.0 / 0.4)).abs() < 1e-14);
}

#[test]
fn f_inverse_examples() {
    assert!((f_inverse(0.3, 0.34).unwrap() - 0.5).abs() < 1e-14);
    let x = f_inverse(0.3, 2.0).unwrap();
    assert!(x > -1.0 && x < 0.0);
    assert!((x - quadratic_inside(0.3, 2.0)).abs() < 1e-14);
    assert!(f_inverse(0.3, 1.0).is_err());
    assert!(f_inverse(0.3, -0.1).is_err());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let rho: f64 = rng.random_range(-0.95..0.95);
        if rho.abs() < 0.01 {
            continue;
        }
        let mut x: f64 = rng.random_range(-0.99..0.99);
        if x.abs() < 0.01 {
            x = 0.5;
        }
        let z = f_transform(rho, x).unwrap();
        if z <= 0.0 {
            continue;
        }
        assert!((f_inverse(rho, z).unwrap() - x).abs() < 1e-9, "rho {rho} x {x}");
    }
}

#[test]
fn dichotomy_examples() {
    assert!(single_scm_outliers(0.3, -0.2).unwrap().is_empty());
    assert!(single_scm_outliers(0.5, -1.0).unwrap().is_empty());
    assert!(single_scm_outliers(-0.4, 0.8).unwrap().is_empty());
    assert!(single_scm_outliers(0.3, 0.0).is_err());
}

#[test]
fn single_change_values_against_eigenvalues() {
    let set = single_scm_outliers(0.3, 0.2).unwrap();
    assert!((set.left[0] - 0.45255).abs() < 1e-5);
    assert!((set.right[0] - 1.82985).abs() < 1e-5);
    let (lo, hi) = extremes(&CoefficientSchedule::single(0.3, 2000, 0.2).unwrap(), 4000, 1);
    assert!((lo[0] - set.left[0]).abs() < 1e-4);
    assert!((hi[0] - set.right[0]).abs() < 1e-4);
}

#[test]
fn single_change_negative_rho() {
    for (rho, eps) in [(-0.3, -0.2), (-0.6, -0.3), (-0.2, 0.9)] {
        let set = single_scm_outliers(rho, eps).unwrap();
        assert_eq!((set.left.len(), set.right.len()), (1, 1));
        let (lo, hi) = extremes(&CoefficientSchedule::single(rho, 1000, eps).unwrap(), 2000, 1);
        assert!((lo[0] - set.left[0]).abs() < 1e-6, "rho {rho} eps {eps}");
        assert!((hi[0] - set.right[0]).abs() < 1e-6);
    }
}

#[test]
fn roots_multiply_as_expected() {
    let (s, t) = single_scm_roots(0.3, 0.2).unwrap();
    assert!(s < t);
    assert!((s * t + 0.09 / 0.25).abs() < 1e-14);
    assert!(matches!(single_scm_roots(0.3, -0.3), Err(ScmError::SingularParameter(_))));
}

#[test]
fn spike_count_on_random_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut tested = 0;
    while tested < 25 {
        let rho: f64 = rng.random_range(-0.8..0.8);
        let eps: f64 = rng.random_range(-1.5..1.5);
        let c = rho + eps;
        if rho.abs() < 0.05 || c.abs() > 0.95 || c.abs() < rho.abs() + 0.1 {
            continue;
        }
        tested += 1;
        let (a, b) = support_bounds(rho).unwrap();
        let (lo, hi) = extremes(&CoefficientSchedule::single(rho, 1000, eps).unwrap(), 2000, 2);
        assert!(lo[0] < a && hi[1] > b);
        assert!(lo[1] > a - 0.02 && hi[0] < b + 0.02, "rho {rho} eps {eps}: {lo:?} {hi:?}");
    }
}

#[test]
fn finite_break_point_error_decays() {
    let set = single_scm_outliers(0.3, 0.2).unwrap();
    let errs: Vec<f64> = [2, 4, 8, 16, 32]
        .iter()
        .map(|&k| {
            let (lo, _) = extremes(&CoefficientSchedule::single(0.3, k, 0.2).unwrap(), 2000, 1);
            (lo[0] - set.left[0]).abs()
        })
        .collect();
    for w in errs[..4].windows(2) {
        assert!(w[1] < 0.5 * w[0], "{errs:?}");
    }
    assert!(errs[4] < 1e-10);
}

fn dense_outlier_matrix(rho: f64, eps: f64, h: usize, z: f64) -> DMatrix<f64> {
    let x = quadratic_inside(rho, z);
    let c = rho + eps;
    let e = eps * (eps + 2.0 * rho);
    let alpha = (rho / x + e) / c;
    let beta = (rho * (x + 1.0 / x) + e) / c;
    let gamma = rho / (x * c);
    DMatrix::from_fn(h + 1, h + 1, |i, j| {
        if i == j {
            if i == 0 {
                alpha
            } else if i == h {
                gamma
            } else {
                beta
            }
        } else if i.abs_diff(j) == 1 {
            -1.0
        } else {
            0.0
        }
    })
}

#[test]
fn determinant_against_dense() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for h in [1, 2, 3, 5] {
        for _ in 0..50 {
            let z = if rng.random_bool(0.5) { rng.random_range(0.01..0.48) } else { rng.random_range(1.7..4.0) };
            let got = determinant_value(0.3, 0.2, h, z).unwrap();
            let want = dense_outlier_matrix(0.3, 0.2, h, z).determinant();
            assert!((got - want).abs() < 1e-10 * want.abs().max(1.0), "h {h} z {z}");
            if h == 1 {
                let m = dense_outlier_matrix(0.3, 0.2, 1, z);
                assert!((got - (m[(0, 0)] * m[(1, 1)] - 1.0)).abs() < 1e-12 * got.abs().max(1.0));
            }
        }
    }
    let m = single_scm_outliers(0.3, 0.2).unwrap().left[0];
    assert!(determinant_value(0.3, 0.2, 1, m).unwrap().abs() < 1e-10);
    assert!(determinant_value(0.3, 0.2, 1, 1.0).is_err());
    assert!(matches!(determinant_value(0.3, -0.3, 1, 0.2), Err(ScmError::SingularParameter(_))));
    let t = determinant_matrix(0.3, 0.2, 3, 2.0).unwrap();
    assert_eq!(t.n(), 4);
}

#[test]
fn brackets() {
    let r = bracket_intervals(0.3, 0.2, 1).unwrap();
    assert_eq!((r.p, r.q), (1, 1));
    assert!(r.nodes.is_empty());
    let r = bracket_intervals(0.3, 0.2, 2).unwrap();
    assert_eq!((r.p, r.q), (1, 1));
    assert!((r.nodes[0] - 1.25).abs() < 1e-14);
    let r = bracket_intervals(0.2, 1.0, 2).unwrap();
    assert_eq!((r.p, r.q), (1, 2));
    assert!((r.nodes[0] - 2.44).abs() < 1e-14);
    let bound = 1.44 + 2f64.sqrt() * (1.4f64.powi(2) + 2.0).sqrt();
    assert!((r.upper_bound - bound).abs() < 1e-14);
    let (a, b) = support_bounds(0.2).unwrap();
    for &(lo, hi) in &r.left_intervals {
        assert!(lo >= 0.0 && hi <= a && lo < hi);
    }
    for &(lo, hi) in &r.right_intervals {
        assert!(lo >= b && hi <= r.upper_bound && lo < hi);
    }
    assert!(bracket_intervals(0.3, -0.2, 2).is_err());
}

#[test]
fn degenerate_node_is_reported() {
    // h = 2 has the single node 1 + c^2, which equals b when c^2 = 2 rho + rho^2
    let rho = 0.3;
    let c = (2.0 * rho + rho * rho as f64).sqrt();
    let r = bracket_intervals(rho, c - rho, 2);
    assert!(matches!(r, Err(ScmError::DegenerateConfiguration(_))), "{r:?}");
    // the documented workaround: nudge eps
    assert!(bracket_intervals(rho, c - rho + 1e-9, 2).is_ok());
}

#[test]
fn length_one_root_finder_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut tested = 0;
    while tested < 100 {
        let rho: f64 = rng.random_range(-0.9..0.9);
        let eps: f64 = rng.random_range(-2.0..2.0);
        if rho.abs() < 0.02 || (rho + eps).abs() <= rho.abs() + 1e-3 {
            continue;
        }
        tested += 1;
        let closed = single_scm_outliers(rho, eps).unwrap();
        let det = interval_scm_outliers(rho, eps, 1, 1e-13).unwrap();
        assert_eq!(det.left.len(), 1);
        assert_eq!(det.right.len(), 1);
        assert!((closed.left[0] - det.left[0]).abs() < 1e-9, "rho {rho} eps {eps}");
        assert!((closed.right[0] - det.right[0]).abs() < 1e-9 * closed.right[0].max(1.0));
    }
}

#[test]
fn interval_changes_against_eigenvalues() {
    let n = 4000;
    for (rho, eps, h) in [(0.3, 0.2, 2), (0.3, 0.2, 3), (0.2, 1.0, 2), (-0.3, -0.2, 3), (-0.4, 0.9, 2)] {
        let (set, report, scans) = interval_scm_outliers_with(rho, eps, h, 1e-12, DEFAULT_PANELS).unwrap();
        assert!(set.left.len() >= report.p && set.right.len() >= report.q);
        for scan in &scans {
            assert!(!scan.roots.is_empty());
            assert!(scan.roots.iter().all(|&r| r > scan.interval.0 && r < scan.interval.1));
        }
        let s = CoefficientSchedule::new(rho, vec![ChangeSegment::new(n / 2, h, eps).unwrap()]).unwrap();
        let (lo, hi) = extremes(&s, n, set.left.len().max(set.right.len()));
        for (i, &l) in set.left.iter().enumerate() {
            assert!((lo[i] - l).abs() < 1e-3, "rho {rho} eps {eps} h {h}");
        }
        for (i, &r) in set.right.iter().rev().enumerate() {
            assert!((hi[hi.len() - 1 - i] - r).abs() < 1e-3);
        }
    }
}

#[test]
fn variance_divides_outliers() {
    let s = CoefficientSchedule::single(0.3, 1000, 0.2).unwrap();
    let set = single_scm_outliers(0.3, 0.2).unwrap().for_variance(2.0);
    let t = precision_matrix(&s, 2000, 2.0).unwrap();
    let (lo, hi) = extreme_eigenvalues(&t, 1, DEFAULT_TOL).unwrap();
    assert!((lo[0] - set.left[0]).abs() < 1e-8);
    assert!((hi[0] - set.right[0]).abs() < 1e-8);
}

#[test]
fn union_of_two_changes() {
    let s = CoefficientSchedule::new(0.3, vec![ChangeSegment::new(800, 1, 0.2).unwrap(), ChangeSegment::new(3200, 1, 0.3).unwrap()])
        .unwrap();
    let set = general_scm_outliers(&s).unwrap();
    assert_eq!((set.left.len(), set.right.len()), (2, 2));
    let (lo, hi) = extremes(&s, 4000, 2);
    for (x, y) in lo.iter().zip(&set.left).chain(hi.iter().zip(&set.right)) {
        assert!((x - y).abs() < 1e-3);
    }
}

#[test]
fn identical_changes_repeat_outliers() {
    let s = CoefficientSchedule::new(0.3, vec![ChangeSegment::new(1000, 1, 0.2).unwrap(), ChangeSegment::new(3000, 1, 0.2).unwrap()])
        .unwrap();
    let set = general_scm_outliers(&s).unwrap();
    assert_eq!(set.left[0], set.left[1]);
    assert_eq!(set.right[0], set.right[1]);
    let (lo, hi) = extremes(&s, 4000, 2);
    for (x, y) in lo.iter().zip(&set.left).chain(hi.iter().zip(&set.right)) {
        assert!((x - y).abs() < 1e-3);
    }
}

#[test]
fn union_skips_non_producing_segments() {
    let s = CoefficientSchedule::new(0.3, vec![ChangeSegment::new(100, 1, -0.2).unwrap(), ChangeSegment::new(900, 2, 0.2).unwrap()])
        .unwrap();
    let set = general_scm_outliers(&s).unwrap();
    assert_eq!(set, interval_scm_outliers(0.3, 0.2, 2, 1e-12).unwrap());
    assert!(general_scm_outliers(&CoefficientSchedule::null(0.3).unwrap()).unwrap().is_empty());
}

#[test]
fn magnitudes_round_trip() {
    let set = single_scm_outliers(0.3, 0.2).unwrap();
    let eps = identify_magnitudes(0.3, &set).unwrap();
    assert!((eps[0] - 0.2).abs() < 1e-8);
    let neg = single_scm_outliers(-0.4, -0.35).unwrap();
    assert!((identify_magnitudes(-0.4, &neg).unwrap()[0] + 0.35).abs() < 1e-8);

    let both = single_scm_outliers(0.3, 0.2).unwrap().union(&single_scm_outliers(0.3, 0.5).unwrap());
    let mut got = identify_magnitudes(0.3, &both).unwrap();
    // smallest left pairs with largest right and belongs to the larger change
    assert!(got[0] > got[1]);
    got.sort_by(f64::total_cmp);
    assert!((got[0] - 0.2).abs() < 1e-8 && (got[1] - 0.5).abs() < 1e-8);

    let unpaired = OutlierSet::new(vec![0.3], vec![]);
    assert!(matches!(identify_magnitudes(0.3, &unpaired), Err(ScmError::InconsistentInput(_))));
}

#[test]
fn large_change_limits() {
    let (m, ratio) = epsilon_limit_checks(0.3, 100.0).unwrap();
    assert!(m < 1e-2);
    assert!((ratio - 1.0).abs() < 0.05);
    let ms: Vec<f64> = [10.0, 100.0, 1000.0].iter().map(|&e| epsilon_limit_checks(0.3, e).unwrap().0).collect();
    assert!(ms[0] > ms[1] && ms[1] > ms[2]);
    assert!(epsilon_limit_checks(0.3, -0.1).is_err());
}

#[test]
fn break_point_heuristic() {
    let t = precision_matrix(&CoefficientSchedule::single(0.3, 50, 0.2).unwrap(), 1000, 1.0).unwrap();
    let est = locate_break_heuristic(&t).unwrap();
    assert_eq!(est.k_from_min, 50);
    assert!(est.k_from_max == 49 || est.k_from_max == 50);
    assert!(est.localized);
    let null = precision_matrix(&CoefficientSchedule::null(0.3).unwrap(), 1000, 1.0).unwrap();
    assert!(!locate_break_heuristic(&null).unwrap().localized);
}

#[test]
fn report_document() {
    let s = CoefficientSchedule::new(0.3, vec![ChangeSegment::new(100, 1, -0.2).unwrap(), ChangeSegment::new(900, 2, 0.2).unwrap()])
        .unwrap();
    let r = outlier_report(&s, 1.0).unwrap();
    assert_eq!(r.method, "determinantal");
    assert_eq!(r.brackets.keys().collect::<Vec<_>>(), vec!["2"]);
    let json = serde_json::to_value(&r).unwrap();
    for key in ["rho", "left", "right", "brackets", "method"] {
        assert!(json.get(key).is_some());
    }
    let single = outlier_report(&CoefficientSchedule::single(0.3, 10, 0.2).unwrap(), 1.0).unwrap();
    assert_eq!(single.method, "closed_form");
}
