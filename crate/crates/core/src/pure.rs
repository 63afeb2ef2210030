//! Parameter choices that drive the atom into a pure steady state.
//!
//! Closed forms exist for relative phases 0, pi/2 and (asymptotically) pi,
//! and for the whole `N = 1/8` family where the pure state also has
//! `sz = -1/2`, i.e. maximal squeezing. Other slices are searched numerically.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::bloch::steady_state;
use crate::error::{Error, Result};
use crate::params::{correlation_strength, AtomFieldParams};
use crate::search::golden_section_max;
use crate::squeezing::sphere_angles;

/// Photon number at which pure states can also be maximally squeezed.
pub const N_EIGHTH: f64 = 0.125;

/// Ratio `delta / (Gamma - gamma M)` below which the phase-pi condition is flagged.
pub const ASYMPTOTIC_RATIO: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PureStateSolution {
    pub phi: f64,
    pub n_sq: f64,
    pub eta: f64,
    pub delta: f64,
    pub omega: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Purity of the steady state at the returned parameters.
    pub sigma_achieved: f64,
    /// False when the condition only holds for large detuning.
    pub exact: bool,
    /// Set when an asymptotic condition is used outside its comfortable range.
    pub asymptotic_warning: bool,
}

impl PureStateSolution {
    pub fn params(&self) -> AtomFieldParams {
        AtomFieldParams::new(self.n_sq, self.phi, self.omega, self.delta).with_eta(self.eta)
    }

    fn evaluate(
        phi: f64,
        n_sq: f64,
        eta: f64,
        delta: f64,
        omega: f64,
        exact: bool,
    ) -> Result<Self> {
        let params = AtomFieldParams::new(n_sq, phi, omega, delta).with_eta(eta);
        let state = steady_state(&params)?;
        let (alpha, beta) = sphere_angles(&params)?;
        Ok(Self {
            phi,
            n_sq,
            eta,
            delta,
            omega,
            alpha,
            beta,
            sigma_achieved: state.purity(),
            exact,
            asymptotic_warning: false,
        })
    }
}

fn require_positive(field: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParam {
            field,
            reason: format!("must be positive and finite, got {value}"),
        })
    }
}

fn root_sum(n_sq: f64) -> f64 {
    (n_sq + 1.0).sqrt() + n_sq.sqrt()
}

/// Resonant drive at zero relative phase: `Omega = gamma sqrt(M) / (sqrt(N+1) + sqrt(N))`.
pub fn condition_phi0(n_sq: f64, eta: f64) -> Result<PureStateSolution> {
    require_positive("n_sq", n_sq)?;
    let m = correlation_strength(n_sq, eta);
    let omega = m.sqrt() / root_sum(n_sq);
    PureStateSolution::evaluate(0.0, n_sq, eta, 0.0, omega, true)
}

/// Quarter-period relative phase: `Delta = Gamma - gamma M`,
/// `Omega = gamma sqrt(2M) / (sqrt(N+1) + sqrt(N))`.
pub fn condition_phi_half_pi(n_sq: f64, eta: f64) -> Result<PureStateSolution> {
    require_positive("n_sq", n_sq)?;
    let m = correlation_strength(n_sq, eta);
    let delta = n_sq + 0.5 - m;
    let omega = (2.0 * m).sqrt() / root_sum(n_sq);
    PureStateSolution::evaluate(FRAC_PI_2, n_sq, eta, delta, omega, true)
}

/// Relative phase pi at large detuning: `Omega = 2 Delta sqrt(M) / (sqrt(N+1) - sqrt(N))`.
///
/// Only asymptotically pure; `asymptotic_warning` is set when
/// `Delta < 10 (Gamma - gamma M)`.
pub fn condition_phi_pi(n_sq: f64, delta: f64, eta: f64) -> Result<PureStateSolution> {
    require_positive("n_sq", n_sq)?;
    require_positive("delta", delta)?;
    let m = correlation_strength(n_sq, eta);
    let omega = 2.0 * delta * m.sqrt() / ((n_sq + 1.0).sqrt() - n_sq.sqrt());
    let mut sol = PureStateSolution::evaluate(PI, n_sq, eta, delta, omega, false)?;
    sol.asymptotic_warning = delta < ASYMPTOTIC_RATIO * (n_sq + 0.5 - m);
    Ok(sol)
}

/// A point of the `N = 1/8` maximal-squeezing family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaximalPoint {
    pub solution: PureStateSolution,
    /// Optimal quadrature phase, equal to the Bloch longitude.
    pub theta_0: f64,
}

/// Parameters giving `S = -1/4` at `N = 1/8`:
/// `Delta = t/4`, `Omega = sqrt(3 (1 + t^2)) / 4`, `theta_0 = atan2(1, t)`
/// with `t = tan(phi / 2)`.
///
/// `phi = pi` is a pole (`Delta -> inf`, `Omega -> sqrt(3) Delta`) and is
/// reported as [`Error::PhaseOutOfRange`].
pub fn maximal_family(phi: f64) -> Result<MaximalPoint> {
    if !(0.0..TAU).contains(&phi) {
        return Err(Error::InvalidParam {
            field: "phi",
            reason: format!("must lie in [0, 2pi), got {phi}"),
        });
    }
    if (phi - PI).abs() < 1e-8 {
        return Err(Error::PhaseOutOfRange {
            phi,
            omega_over_delta: 3f64.sqrt(),
        });
    }
    let t = (phi / 2.0).tan();
    let delta = t / 4.0;
    let omega = (3.0 * (1.0 + t * t)).sqrt() / 4.0;
    let theta_0 = 1f64.atan2(t);
    let solution = PureStateSolution::evaluate(phi, N_EIGHTH, 1.0, delta, omega, true)?;
    Ok(MaximalPoint { solution, theta_0 })
}

/// Closed form of `sz + 1/2` in units where `gamma = 1`.
pub fn sz_plus_half(params: &AtomFieldParams) -> Result<f64> {
    params.validate()?;
    if params.gamma != 1.0 {
        return Err(Error::UnitMismatch {
            gamma: params.gamma,
        });
    }
    let n = params.n_sq;
    let m = correlation_strength(n, params.eta);
    let drive = (n + 0.5 + m * params.phi.cos()) * params.omega * params.omega;
    let detune = params.delta * params.delta + 0.25;
    Ok((drive + (2.0 * n - 1.0) * detune) / (2.0 * (drive + detune * (2.0 * n + 1.0))))
}

/// Purity threshold above which [`find_pure_curve`] labels a point pure.
pub const PURE_CURVE_THRESHOLD: f64 = 1.0 - 1e-7;
/// Below this maximal purity the slice is declared to have no pure state.
pub const NO_PURE_STATE_THRESHOLD: f64 = 1.0 - 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PureCurvePoint {
    pub omega: f64,
    pub sigma: f64,
    pub pure: bool,
}

/// Rabi frequency maximizing the purity on a `(phi, N, Delta)` slice.
///
/// A 256-point scan of `(0, max(10, 4|Delta|)]` brackets the peak, which is
/// then refined by golden-section search.
pub fn find_pure_curve(phi: f64, n_sq: f64, delta: f64, eta: f64) -> Result<PureCurvePoint> {
    require_positive("n_sq", n_sq)?;
    let base = AtomFieldParams::new(n_sq, phi, 0.0, delta).with_eta(eta);
    base.validate()?;
    let purity = |omega: f64| {
        steady_state(&base.with_omega(omega))
            .map(|s| s.purity())
            .unwrap_or(f64::NEG_INFINITY)
    };

    const COARSE: usize = 256;
    let omega_hi = 10f64.max(4.0 * delta.abs());
    let node = |i: usize| omega_hi * i as f64 / COARSE as f64;
    let mut best = (1, f64::NEG_INFINITY);
    for i in 1..=COARSE {
        let v = purity(node(i));
        if v > best.1 {
            best = (i, v);
        }
    }
    let lo = node(best.0 - 1);
    let hi = node((best.0 + 1).min(COARSE));
    let refined = golden_section_max(purity, lo, hi, 1e-12 * omega_hi);
    let (omega, sigma) = if refined.value >= best.1 {
        (refined.x, refined.value)
    } else {
        (node(best.0), best.1)
    };
    if sigma < NO_PURE_STATE_THRESHOLD {
        return Err(Error::NoPureState {
            omega,
            sigma_max: sigma,
        });
    }
    Ok(PureCurvePoint {
        omega,
        sigma,
        pure: sigma >= PURE_CURVE_THRESHOLD,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::squeezing::{full_report, optimal_variance, pure_bloch_vector};
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn phase_zero_condition() {
        let sol = condition_phi0(0.125, 1.0).unwrap();
        assert!((sol.omega - 3f64.sqrt() / 4.0).abs() < 1e-15);
        assert_eq!(sol.delta, 0.0);
        assert_eq!(sol.alpha, FRAC_PI_2);
        assert!((sol.sigma_achieved - 1.0).abs() < 1e-9);
        assert!(sol.exact);

        // Omega ~ N^(1/4) as N -> 0
        let tiny = condition_phi0(1e-16, 1.0).unwrap();
        assert!(tiny.omega < 1e-4);

        // sqrt(M) with M = sqrt(0.75), over sqrt(1.5) + sqrt(0.5).
        let sol = condition_phi0(0.5, 1.0).unwrap();
        let expected = 0.75f64.sqrt().sqrt() / (1.5f64.sqrt() + 0.5f64.sqrt());
        assert!((sol.omega - expected).abs() < 1e-15);
        assert!((sol.omega - 0.481_717).abs() < 1e-6);
        assert!((sol.sigma_achieved - 1.0).abs() < 1e-9);
    }

    #[test]
    fn half_pi_condition() {
        let sol = condition_phi_half_pi(0.125, 1.0).unwrap();
        assert!((sol.delta - 0.25).abs() < 1e-15);
        assert!((sol.omega - 6f64.sqrt() / 4.0).abs() < 1e-15);
        assert!((sol.alpha - FRAC_PI_4).abs() < 1e-15);
        assert!((sol.sigma_achieved - 1.0).abs() < 1e-9);

        let tiny = condition_phi_half_pi(1e-16, 1.0).unwrap();
        assert!((tiny.delta - 0.5).abs() < 1e-7);
        assert!(tiny.omega < 2e-4);

        let sol = condition_phi_half_pi(0.05, 1.0).unwrap();
        assert!((sol.delta - 0.320_871).abs() < 1e-6);
        assert!((sol.omega - 0.542_3).abs() < 1e-3);
        assert!((sol.sigma_achieved - 1.0).abs() < 1e-9);
    }

    #[test]
    fn phase_pi_condition() {
        let sol = condition_phi_pi(0.125, 12.5, 1.0).unwrap();
        assert!((sol.omega - 12.5 * 3f64.sqrt()).abs() < 1e-12);
        assert!((sol.omega - 21.6506).abs() < 1e-4);
        assert!(!sol.exact);
        assert!(!sol.asymptotic_warning);

        let sol = condition_phi_pi(0.1, 10.0, 1.0).unwrap();
        assert!((sol.omega - 15.72).abs() < 0.01);

        // purity defect falls off as (9/64) / Delta^2
        for delta in [100.0, 1000.0, 10_000.0] {
            let sol = condition_phi_pi(0.125, delta, 1.0).unwrap();
            let defect = (1.0 - sol.sigma_achieved) * delta * delta;
            assert!((defect - 9.0 / 64.0).abs() < 1e-3, "{delta}: {defect}");
            assert!((sol.alpha - (0.25 / delta).atan()).abs() < 1e-15);
        }

        let near = condition_phi_pi(0.125, 1.0, 1.0).unwrap();
        assert!(near.asymptotic_warning);
    }

    #[test]
    fn conditions_reject_bad_inputs() {
        assert!(condition_phi0(0.0, 1.0).is_err());
        assert!(condition_phi_half_pi(-1.0, 1.0).is_err());
        assert!(condition_phi_pi(0.1, 0.0, 1.0).is_err());
    }

    #[test]
    fn maximal_family_examples() {
        let p = maximal_family(FRAC_PI_2).unwrap();
        assert!((p.solution.delta - 0.25).abs() < 1e-15);
        assert!((p.solution.omega - 6f64.sqrt() / 4.0).abs() < 1e-15);
        assert!((p.theta_0 - FRAC_PI_4).abs() < 1e-15);

        let p = maximal_family(0.0).unwrap();
        assert_eq!(p.solution.delta, 0.0);
        assert!((p.solution.omega - 3f64.sqrt() / 4.0).abs() < 1e-15);
        assert_eq!(p.theta_0, FRAC_PI_2);

        let p = maximal_family(2.0 * 4f64.atan()).unwrap();
        assert!((p.solution.delta - 1.0).abs() < 1e-14);
        assert!((p.solution.omega - 51f64.sqrt() / 4.0).abs() < 1e-14);
        assert!((p.solution.omega - 1.785_357).abs() < 1e-6);
        assert!((p.theta_0 - 0.244_979).abs() < 1e-6);
        let r = full_report(&p.solution.params()).unwrap();
        assert!((r.sigma - 1.0).abs() < 1e-9);
        assert!((r.s_theta_o + 0.25).abs() < 1e-9);
    }

    #[test]
    fn maximal_family_pole_and_range() {
        match maximal_family(PI) {
            Err(Error::PhaseOutOfRange {
                omega_over_delta, ..
            }) => {
                assert!((omega_over_delta - 3f64.sqrt()).abs() < 1e-15)
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(maximal_family(-0.1).is_err());
        assert!(maximal_family(TAU).is_err());
    }

    #[test]
    fn maximal_family_beyond_pi_has_negative_detuning() {
        let p = maximal_family(1.5 * PI).unwrap();
        assert!(p.solution.delta < 0.0);
        let state = steady_state(&p.solution.params()).unwrap();
        assert!((optimal_variance(&state) + 0.25).abs() < 1e-9);
        assert!(p.theta_0 > FRAC_PI_2 && p.theta_0 < PI);
    }

    #[test]
    fn sz_closed_form_examples() {
        let v = sz_plus_half(&AtomFieldParams::new(0.125, 0.0, 3f64.sqrt() / 4.0, 0.0)).unwrap();
        assert!(v.abs() < 1e-15);
        let v = sz_plus_half(&AtomFieldParams::new(0.6, 1.0, 0.0, 3.0)).unwrap();
        assert!((v - 0.2 / 4.4).abs() < 1e-15);
        let v = sz_plus_half(&AtomFieldParams::default()).unwrap();
        assert_eq!(v, -0.5);
    }

    #[test]
    fn sz_closed_form_needs_unit_gamma() {
        let p = AtomFieldParams::new(0.1, 0.0, 1.0, 0.0).with_gamma(2.0);
        assert!(matches!(sz_plus_half(&p), Err(Error::UnitMismatch { .. })));
    }

    #[test]
    fn pure_curve_recovers_closed_forms() {
        let hit = find_pure_curve(FRAC_PI_2, 0.125, 0.25, 1.0).unwrap();
        assert!((hit.omega - 6f64.sqrt() / 4.0).abs() < 1e-5, "{hit:?}");
        assert!(hit.pure);

        let hit = find_pure_curve(0.0, 0.125, 0.0, 1.0).unwrap();
        assert!((hit.omega - 3f64.sqrt() / 4.0).abs() < 1e-5, "{hit:?}");
        assert!(hit.pure);
    }

    #[test]
    fn no_pure_state_off_resonance_at_zero_phase() {
        match find_pure_curve(0.0, 0.125, 5.0, 1.0) {
            Err(Error::NoPureState { sigma_max, .. }) => assert!(sigma_max < 1.0),
            Ok(hit) => {
                assert!(hit.sigma < 1.0 && !hit.pure, "{hit:?}");
            }
            Err(e) => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn pure_points_sit_on_the_sphere() {
        let sols = [
            condition_phi0(0.3, 1.0).unwrap(),
            condition_phi_half_pi(0.3, 1.0).unwrap(),
            maximal_family(2.0).unwrap().solution,
        ];
        for sol in sols {
            let state = steady_state(&sol.params()).unwrap();
            let expected = pure_bloch_vector(sol.alpha, sol.beta);
            assert!(state.max_abs_diff(&expected) < 1e-8, "{sol:?}");
        }
    }
}
