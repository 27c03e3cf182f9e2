use scm_spectra::error::ScmError;
use scm_spectra::model::*;

fn base_schedule() -> CoefficientSchedule {
    CoefficientSchedule::single(0.3, 50, 0.2).unwrap()
}

#[test]
fn coefficient_lookup() {
    let null = CoefficientSchedule::null(0.3).unwrap();
    assert_eq!(null.coefficient_at(7), 0.3);
    let s = base_schedule();
    assert!((s.coefficient_at(50) - 0.5).abs() < 1e-15);
    assert_eq!(s.coefficient_at(51), 0.3);
    assert_eq!(s.coefficient_at(49), 0.3);
}

#[test]
fn coefficient_lookup_interval() {
    let s = CoefficientSchedule::new(
        -0.4,
        vec![ChangeSegment::new(3, 2, -0.2).unwrap(), ChangeSegment::new(10, 3, 0.1).unwrap()],
    )
    .unwrap();
    let c = s.coefficients(14);
    let want = [-0.4, -0.4, -0.6, -0.6, -0.4, -0.4, -0.4, -0.4, -0.4, -0.3, -0.3, -0.3, -0.4, -0.4];
    for (x, y) in c.iter().zip(want) {
        assert!((x - y).abs() < 1e-15);
    }
    assert_eq!(s.m(), 2);
    assert_eq!(s.min_gap(), Some(6));
}

#[test]
fn schedule_validation() {
    assert!(matches!(CoefficientSchedule::null(0.0), Err(ScmError::InvalidArgument(_))));
    assert!(CoefficientSchedule::null(1.0).is_err());
    assert!(CoefficientSchedule::null(-1.2).is_err());
    assert!(ChangeSegment::new(0, 1, 0.1).is_err());
    assert!(ChangeSegment::new(1, 0, 0.1).is_err());
    assert!(ChangeSegment::new(1, 1, 0.0).is_err());
    // overlapping
    let overlap = vec![ChangeSegment::new(5, 3, 0.1).unwrap(), ChangeSegment::new(7, 1, 0.1).unwrap()];
    assert!(CoefficientSchedule::new(0.3, overlap).is_err());
    // out of order
    let unordered = vec![ChangeSegment::new(9, 1, 0.1).unwrap(), ChangeSegment::new(2, 1, 0.1).unwrap()];
    assert!(CoefficientSchedule::new(0.3, unordered).is_err());
    // explosive segments are allowed
    assert!(CoefficientSchedule::single(0.5, 10, 0.7).is_ok());
    assert!(base_schedule().check_fits(49).is_err());
    assert!(base_schedule().check_fits(50).is_ok());
}

#[test]
fn zero_noise_paths_are_zero() {
    let p = simulate_path(&base_schedule(), 5, 0.0, 1).unwrap();
    assert_eq!(p, vec![0.0; 5]);
    let panel = simulate_panel(&base_schedule(), 60, 3, 0.0, 1).unwrap();
    assert_eq!(panel.b(), 3);
    assert!(panel.rows().all(|r| r.iter().all(|&v| v == 0.0)));
    assert!(simulate_path(&base_schedule(), 0, 1.0, 1).is_err());
    assert!(simulate_panel(&base_schedule(), 60, 0, 1.0, 1).is_err());
}

#[test]
fn seeded_paths_repeat() {
    let s = base_schedule();
    assert_eq!(simulate_path(&s, 200, 1.0, 42).unwrap(), simulate_path(&s, 200, 1.0, 42).unwrap());
    assert_ne!(simulate_path(&s, 200, 1.0, 42).unwrap(), simulate_path(&s, 200, 1.0, 43).unwrap());
    let a = simulate_panel(&s, 80, 20, 1.0, 9).unwrap();
    let b = simulate_panel(&s, 80, 20, 1.0, 9).unwrap();
    assert_eq!(a, b);
}

#[test]
fn path_obeys_recursion() {
    // replaying the same noise draws through the recursion
    let s = base_schedule();
    let y = simulate_path(&s, 120, 1.0, 5).unwrap();
    let null = simulate_path(&CoefficientSchedule::null(0.3).unwrap(), 120, 1.0, 5).unwrap();
    // innovations coincide, so z_t = y_t - rho_t y_{t-1} must match between the two paths
    let mut prev_y = 0.0;
    let mut prev_n = 0.0;
    for t in 1..=120 {
        let zy = y[t - 1] - s.coefficient_at(t) * prev_y;
        let zn = null[t - 1] - 0.3 * prev_n;
        assert!((zy - zn).abs() < 1e-12, "t = {t}");
        prev_y = y[t - 1];
        prev_n = null[t - 1];
    }
    assert_eq!(y[..49], null[..49]);
    assert_ne!(y[49], null[49]);
}

#[test]
fn stationary_variance() {
    let s = CoefficientSchedule::null(0.5).unwrap();
    let y = simulate_path(&s, 100_000, 1.0, 2024).unwrap();
    let tail = &y[1000..];
    let mean = tail.iter().sum::<f64>() / tail.len() as f64;
    let var = tail.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (tail.len() - 1) as f64;
    let target = 1.0 / (1.0 - 0.25);
    assert!((var / target - 1.0).abs() < 0.02, "variance {var}");
}

#[test]
fn long_path_autocorrelation() {
    let rho = 0.6;
    let y = simulate_path(&CoefficientSchedule::null(rho).unwrap(), 200_000, 1.0, 77).unwrap();
    let tail = &y[100..];
    let num: f64 = tail.windows(2).map(|w| w[0] * w[1]).sum();
    let den: f64 = tail[..tail.len() - 1].iter().map(|v| v * v).sum();
    let se = ((1.0 - rho * rho) / tail.len() as f64).sqrt();
    assert!((num / den - rho).abs() < 3.0 * se);
}

#[test]
fn panel_lag_one_moment() {
    let panel = simulate_panel(&CoefficientSchedule::null(0.3).unwrap(), 50, 5000, 1.0, 11).unwrap();
    let (mut num, mut den) = (0.0, 0.0);
    for row in panel.rows() {
        for w in row.windows(2) {
            num += w[0] * w[1];
            den += w[0] * w[0];
        }
    }
    assert!((num / den - 0.3).abs() < 0.02);
}

#[test]
fn panel_rows_use_their_own_substream() {
    let s = base_schedule();
    let big = simulate_panel(&s, 60, 6, 1.0, 3).unwrap();
    let small = simulate_panel(&s, 60, 3, 1.0, 3).unwrap();
    for j in 0..3 {
        assert_eq!(big.row(j), small.row(j));
    }
    // row 0 is the single path under the same seed
    assert_eq!(big.row(0), simulate_path(&s, 60, 1.0, 3).unwrap().as_slice());
}

#[test]
fn hetero_path_differs_only_from_the_change() {
    let vs = VarianceSchedule::new(1.0, vec![VarianceSegment { k: 5, h: 1, xi: 0.3 }]).unwrap();
    let het = simulate_hetero_path(0.3, &vs, 20, 8).unwrap();
    let hom = simulate_path(&CoefficientSchedule::null(0.3).unwrap(), 20, 1.0, 8).unwrap();
    assert_eq!(het[..4], hom[..4]);
    // the difference from t = 5 on is the extra innovation propagated by rho
    let z5 = hom[4] - 0.3 * hom[3];
    let extra = ((1.3f64).sqrt() - 1.0) * z5;
    for t in 5..=20 {
        let want = extra * 0.3f64.powi((t - 5) as i32);
        assert!((het[t - 1] - hom[t - 1] - want).abs() < 1e-12);
    }
    let flat = VarianceSchedule::constant(1.0).unwrap();
    assert_eq!(simulate_hetero_path(0.3, &flat, 20, 8).unwrap(), hom);
}

#[test]
fn variance_schedule_validation() {
    assert!(VarianceSchedule::new(1.0, vec![VarianceSegment { k: 5, h: 1, xi: -1.0 }]).is_err());
    assert!(VarianceSchedule::new(1.0, vec![VarianceSegment { k: 5, h: 1, xi: 0.0 }]).is_err());
    assert!(VarianceSchedule::new(0.0, vec![]).is_err());
    let vs = VarianceSchedule::new(2.0, vec![VarianceSegment { k: 2, h: 2, xi: -0.5 }]).unwrap();
    assert_eq!(vs.variances(4), vec![2.0, 1.5, 1.5, 2.0]);
    assert!(simulate_hetero_path(1.0, &vs, 10, 1).is_err());
}

#[test]
fn panel_csv_round_trip() {
    let panel = simulate_panel(&base_schedule(), 55, 4, 1.0, 21).unwrap();
    let mut buf = Vec::new();
    panel.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("j,t,y\n1,1,"));
    assert_eq!(text.lines().count(), 1 + 4 * 55);
    let back = PanelData::read_csv(buf.as_slice()).unwrap();
    assert_eq!(back, panel);
}

#[test]
fn panel_csv_rejects_ragged_input() {
    let ragged = "j,t,y\n1,1,0.5\n1,2,0.1\n2,1,0.3\n";
    assert!(PanelData::read_csv(ragged.as_bytes()).is_err());
    assert!(PanelData::from_rows(vec![vec![1.0, 2.0], vec![1.0]]).is_err());
    assert!(PanelData::from_rows(vec![vec![1.0]]).is_err());
}

#[test]
fn schedule_document_round_trip() {
    let doc = ScheduleDoc::from_schedule(&base_schedule(), 2.0);
    let text = doc.to_json().unwrap();
    let back = ScheduleDoc::from_json(&text).unwrap();
    assert_eq!(back, doc);
    assert_eq!(back.schedule().unwrap(), base_schedule());
    let minimal = ScheduleDoc::from_json(r#"{"rho": 0.3}"#).unwrap();
    assert_eq!(minimal.sigma2, 1.0);
    assert!(minimal.schedule().unwrap().is_null());
    let bad = ScheduleDoc::from_json(r#"{"rho": 0.3, "segments": [{"k": 0, "h": 1, "eps": 0.2}]}"#).unwrap();
    assert!(bad.schedule().is_err());
}
