use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::Matrix3;
use proptest::prelude::*;
use rfsq_core::bloch::spectral_gap_bound;
use rfsq_core::scan::{figure_axes, scan_with_threads};
use rfsq_core::search::golden_section_min;
use rfsq_core::squeezing::pure_bloch_vector;
use rfsq_core::*;

fn params_strategy() -> impl Strategy<Value = AtomFieldParams> {
    (
        0.0..2.0f64,
        0.0..TAU,
        0.0..30.0f64,
        -30.0..30.0f64,
        0.0..=1.0f64,
    )
        .prop_map(|(n, phi, omega, delta, eta)| {
            AtomFieldParams::new(n, phi, omega, delta).with_eta(eta)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn drift_eigenvalues_decay_at_least_at_gap_rate(p in params_strategy()) {
        let sys = build_system(&p).unwrap();
        let a = sys.a_matrix;
        let m = Matrix3::from_fn(|i, j| a[i][j]);
        let bound = spectral_gap_bound(&p).unwrap();
        for ev in m.complex_eigenvalues().iter() {
            prop_assert!(ev.re <= -bound + 1e-9 * (1.0 + sys.scale()), "{ev} vs {bound}");
        }
    }

    #[test]
    fn steady_state_never_leaves_the_ball(p in params_strategy()) {
        let s = steady_state(&p).unwrap();
        prop_assert!(s.purity() < 1.0 + 1e-9);
    }

    #[test]
    fn pure_points_lie_on_the_predicted_sphere_point(n in 0.01..1.5f64) {
        for sol in [condition_phi0(n, 1.0).unwrap(), condition_phi_half_pi(n, 1.0).unwrap()] {
            let s = steady_state(&sol.params()).unwrap();
            let expected = pure_bloch_vector(sol.alpha, sol.beta);
            prop_assert!((sol.sigma_achieved - 1.0).abs() < 1e-9);
            prop_assert!(s.max_abs_diff(&expected) < 1e-9, "{s:?} vs {expected:?}");
        }
    }
}

#[test]
fn no_perfect_squeezing_outside_the_eighth() {
    let bounds = SearchBox::new((0.0, 4.0), (-2.0, 4.0));
    for n in [0.05, 0.25, 0.5] {
        let opt = minimize_variance(n, FRAC_PI_2, bounds).unwrap();
        assert!(opt.gap_to_bound > 1e-4, "N = {n}: {opt:?}");
    }
    let at_eighth = minimize_variance(0.125, FRAC_PI_2, bounds).unwrap();
    assert!(at_eighth.gap_to_bound.abs() < 1e-8);
}

#[test]
fn optimum_purity_peaks_at_the_eighth() {
    let bounds = SearchBox::new((0.0, 4.0), (-2.0, 4.0));
    let sigma = |n: f64| minimize_variance(n, FRAC_PI_2, bounds).unwrap().sigma;
    let peak = sigma(0.125);
    assert!((peak - 1.0).abs() < 1e-9);
    for k in 0..=8 {
        let n = 0.085 + 0.01 * k as f64;
        let s = sigma(n);
        assert!(s <= peak + 1e-9, "N = {n}: {s}");
        assert!(s >= 0.999, "N = {n}: {s}");
    }
}

#[test]
fn large_detuning_valley_follows_root_three() {
    for delta in [5.0, 10.0, 15.0, 20.0, 25.0] {
        let s_x = |w: f64| {
            let p = AtomFieldParams::new(0.125, PI, w, delta);
            variance_theta(&steady_state(&p).unwrap(), 0.0)
        };
        let found = golden_section_min(s_x, 0.5 * delta, 3.0 * delta, 1e-9);
        let ratio = found.x / delta;
        assert!(
            (ratio - 3f64.sqrt()).abs() < 0.02,
            "delta = {delta}: ratio {ratio}"
        );
    }
}

#[test]
fn in_phase_squeezing_absent_at_zero_phase() {
    let spec = figure_axes::fig2();
    let result = scan(&spec).unwrap();
    for i in 0..spec.axis1.count {
        let v = result.get(i, 0).unwrap();
        assert!(v >= -1e-12, "Omega = {}: {v}", spec.axis1.value(i));
    }
}

#[test]
fn scans_do_not_depend_on_thread_count() {
    let spec = ScanSpec::two_d(
        Axis::new(AxisName::Omega, 0.0, 3.0, 41),
        Axis::new(AxisName::Delta, -1.0, 1.0, 23),
        AtomFieldParams::new(0.2, 1.0, 0.0, 0.0),
        Metric::SOpt,
    );
    let one = scan_with_threads(&spec, 1).unwrap();
    let many = scan_with_threads(&spec, 4).unwrap();
    assert_eq!(one.values, many.values);
}

#[test]
fn pure_curve_at_phase_pi_tracks_closed_form() {
    for delta in [50.0, 100.0, 200.0] {
        let curve = find_pure_curve(PI, 0.125, delta, 1.0).unwrap();
        let closed = condition_phi_pi(0.125, delta, 1.0).unwrap();
        let defect = (1.0 - curve.sigma) * delta * delta;
        assert!(
            (defect - 9.0 / 64.0).abs() < 2e-3,
            "delta = {delta}: {defect}"
        );
        assert!((curve.omega - closed.omega).abs() / closed.omega < 1e-4);
    }
    assert!(find_pure_curve(PI, 0.125, 10.0, 1.0).is_err());
}
