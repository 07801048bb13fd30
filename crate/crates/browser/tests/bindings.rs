use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use trotterlab_browser::{continuous_curve, discrete_curve, localization_run};

#[test]
fn continuous_curve_peaks_at_v2() {
    let ys = continuous_curve(2, 0.1, 0.1, 1.0, 15.0, -4.0, 4.0, 801).unwrap();
    assert_eq!(ys.len(), 801);
    let best = (0..ys.len()).fold(0, |b, i| if ys[i] > ys[b] { i } else { b });
    assert!((-4.0 + 0.01 * best as f64 - 1.0).abs() < 0.011);
}

#[test]
fn discrete_curve_matches_two_qubit_closed_form() {
    let theta = 0.6f64;
    let ys = discrete_curve(2, 2, theta, theta, 0.4, 21).unwrap();
    for (k, y) in ys.iter().enumerate() {
        let phi = -PI + 2.0 * PI * k as f64 / 20.0;
        let expected = 2.0 * (theta.sin() * theta.cos()).powi(2) * (1.0 + (0.4 - phi).cos());
        assert!((y - expected).abs() < 1e-12);
    }
}

#[test]
fn localization_run_shapes_and_bounds() {
    let run = localization_run(9, 20, FRAC_PI_4, FRAC_PI_2, 1.0, 5, false).unwrap();
    assert_eq!((run.qubits(), run.steps()), (9, 20));
    assert_eq!(run.occupations().len(), 9 * 20);
    assert_eq!(run.ipr().len(), 20);
    assert!(run.ipr().iter().all(|&v| (1.0 / 9.0 - 1e-12..=1.0 + 1e-12).contains(&v)));
    assert_eq!(run.z_angles().len(), 9);

    let crx = localization_run(6, 5, FRAC_PI_2, FRAC_PI_2, 0.5, 5, true).unwrap();
    assert!(crx.ipr().is_empty());
    assert_eq!(crx.tail().len(), 5);
}

#[test]
fn invalid_requests_are_errors() {
    assert!(continuous_curve(7, 0.1, 0.1, 0.0, 1.0, -1.0, 1.0, 11).is_err());
    assert!(discrete_curve(2, 2, 0.1, 0.1, 0.0, 2).is_err());
    assert!(localization_run(1, 5, 0.1, 0.1, 0.0, 0, false).is_err());
    assert!(localization_run(20, 5, 0.1, 0.1, 0.0, 0, true).is_err());
}
