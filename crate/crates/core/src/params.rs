//! Physical inputs and the reservoir-modified decay rates.
//!
//! All rates and frequencies are measured in units of the spontaneous decay
//! rate `gamma`, which defaults to 1.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inputs for a driven two-level atom damped by a broadband squeezed vacuum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomFieldParams {
    /// Spontaneous decay rate into ordinary vacuum modes.
    pub gamma: f64,
    /// Squeezed photon number N.
    pub n_sq: f64,
    /// Ideality of the two-photon correlations, 1 for an ideal squeezed vacuum.
    pub eta: f64,
    /// Relative phase between laser and squeezed vacuum, `2 phi_l - phi_s`.
    pub phi: f64,
    /// Rabi frequency.
    pub omega: f64,
    /// Detuning, atomic minus laser frequency.
    pub delta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_l: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_s: Option<f64>,
}

impl Default for AtomFieldParams {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            n_sq: 0.0,
            eta: 1.0,
            phi: 0.0,
            omega: 0.0,
            delta: 0.0,
            phi_l: None,
            phi_s: None,
        }
    }
}

impl AtomFieldParams {
    /// Ideal squeezing (`eta = 1`) in units where `gamma = 1`.
    pub fn new(n_sq: f64, phi: f64, omega: f64, delta: f64) -> Self {
        Self {
            n_sq,
            phi,
            omega,
            delta,
            ..Self::default()
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_phi(mut self, phi: f64) -> Self {
        self.phi = phi;
        self
    }

    pub fn with_n_sq(mut self, n_sq: f64) -> Self {
        self.n_sq = n_sq;
        self
    }

    /// Sets the laser and squeeze phases and derives `phi = 2 phi_l - phi_s`.
    pub fn with_source_phases(mut self, phi_l: f64, phi_s: f64) -> Self {
        self.phi_l = Some(phi_l);
        self.phi_s = Some(phi_s);
        self.phi = 2.0 * phi_l - phi_s;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("gamma", self.gamma),
            ("n_sq", self.n_sq),
            ("eta", self.eta),
            ("phi", self.phi),
            ("omega", self.omega),
            ("delta", self.delta),
        ];
        for (field, value) in finite {
            if !value.is_finite() {
                return Err(invalid(field, format!("must be finite, got {value}")));
            }
        }
        for (field, value) in [("phi_l", self.phi_l), ("phi_s", self.phi_s)] {
            if let Some(v) = value {
                if !v.is_finite() {
                    return Err(invalid(field, format!("must be finite, got {v}")));
                }
            }
        }
        if self.gamma <= 0.0 {
            return Err(invalid("gamma", format!("must be > 0, got {}", self.gamma)));
        }
        if self.n_sq < 0.0 {
            return Err(invalid("n_sq", format!("must be >= 0, got {}", self.n_sq)));
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(invalid(
                "eta",
                format!("must lie in [0, 1], got {}", self.eta),
            ));
        }
        if self.omega < 0.0 {
            return Err(invalid(
                "omega",
                format!("must be >= 0, got {}", self.omega),
            ));
        }
        if let (Some(phi_l), Some(phi_s)) = (self.phi_l, self.phi_s) {
            let mismatch = wrap_to_pi(self.phi - (2.0 * phi_l - phi_s));
            if mismatch.abs() >= 1e-12 {
                return Err(invalid(
                    "phi",
                    format!("must equal 2*phi_l - phi_s modulo 2pi (off by {mismatch:e})"),
                ));
            }
        }
        Ok(())
    }
}

fn invalid(field: &'static str, reason: String) -> Error {
    Error::InvalidParam { field, reason }
}

/// Maps an angle onto (-pi, pi].
pub(crate) fn wrap_to_pi(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r > std::f64::consts::PI {
        r - TAU
    } else {
        r
    }
}

/// Rates derived from [`AtomFieldParams`], in the same units as `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedRates {
    /// Two-photon correlation strength M.
    pub m_corr: f64,
    /// Gamma (N + 1/2).
    pub big_gamma: f64,
    /// Decay rate of the in-phase polarization.
    pub gamma_x: f64,
    /// Decay rate of the out-of-phase polarization.
    pub gamma_y: f64,
    /// Decay rate of the population inversion.
    pub gamma_z: f64,
}

/// `M = eta sqrt(N (N + 1))`.
pub fn correlation_strength(n_sq: f64, eta: f64) -> f64 {
    eta * (n_sq * (n_sq + 1.0)).sqrt()
}

pub fn derive_rates(params: &AtomFieldParams) -> Result<DerivedRates> {
    params.validate()?;
    let g = params.gamma;
    let m_corr = correlation_strength(params.n_sq, params.eta);
    let big_gamma = g * (params.n_sq + 0.5);
    let coupling = g * m_corr * params.phi.cos();
    Ok(DerivedRates {
        m_corr,
        big_gamma,
        gamma_x: big_gamma + coupling,
        gamma_y: big_gamma - coupling,
        gamma_z: 2.0 * big_gamma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn n_eighth_rates_at_zero_phase() {
        let r = derive_rates(&AtomFieldParams::new(0.125, 0.0, 0.0, 0.0)).unwrap();
        assert!((r.m_corr - 0.375).abs() < 1e-15);
        assert!((r.big_gamma - 0.625).abs() < 1e-15);
        assert!((r.gamma_x - 1.0).abs() < 1e-15);
        assert!((r.gamma_y - 0.25).abs() < 1e-15);
        assert!((r.gamma_z - 1.25).abs() < 1e-15);
    }

    #[test]
    fn ordinary_vacuum_rates() {
        for phi in [0.0, 1.0, PI, 5.0] {
            let r = derive_rates(&AtomFieldParams::new(0.0, phi, 0.0, 0.0)).unwrap();
            assert_eq!(r.m_corr, 0.0);
            assert_eq!(r.big_gamma, 0.5);
            assert_eq!(r.gamma_x, 0.5);
            assert_eq!(r.gamma_y, 0.5);
            assert_eq!(r.gamma_z, 1.0);
        }
    }

    #[test]
    fn phase_pi_swaps_fast_and_slow_quadratures() {
        let r = derive_rates(&AtomFieldParams::new(0.1, PI, 0.0, 0.0)).unwrap();
        let m = 0.11f64.sqrt();
        assert!((r.m_corr - 0.331_662_479_035_54).abs() < 1e-12);
        assert!((r.gamma_x - (0.6 - m)).abs() < 1e-15);
        assert!((r.gamma_x - 0.268_337_520_964_46).abs() < 1e-12);
        assert!((r.gamma_y - 0.931_662_479_035_54).abs() < 1e-12);
        assert!((r.gamma_x + r.gamma_y - 1.2).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_finite_inputs_by_name() {
        let bad = AtomFieldParams::new(f64::NAN, 0.0, 0.0, 0.0);
        match derive_rates(&bad) {
            Err(Error::InvalidParam { field, .. }) => assert_eq!(field, "n_sq"),
            other => panic!("unexpected {other:?}"),
        }
        let bad = AtomFieldParams::new(0.1, 0.0, f64::INFINITY, 0.0);
        match bad.validate() {
            Err(Error::InvalidParam { field, .. }) => assert_eq!(field, "omega"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_out_of_range_inputs() {
        let base = AtomFieldParams::new(0.1, 0.0, 1.0, 0.0);
        assert!(base.with_gamma(0.0).validate().is_err());
        assert!(base.with_n_sq(-0.1).validate().is_err());
        assert!(base.with_eta(1.5).validate().is_err());
        assert!(base.with_omega(-1.0).validate().is_err());
    }

    #[test]
    fn source_phases_must_match_relative_phase() {
        let p = AtomFieldParams::new(0.1, 0.0, 1.0, 0.0).with_source_phases(0.4, 0.3);
        assert!((p.phi - 0.5).abs() < 1e-15);
        p.validate().unwrap();
        let shifted = p.with_phi(0.5 + TAU);
        shifted.validate().unwrap();
        assert!(p.with_phi(0.6).validate().is_err());
    }

    proptest! {
        #[test]
        fn rates_stay_positive_and_sum(n in 0.0f64..50.0, eta in 0.0f64..=1.0, phi in 0.0f64..TAU) {
            let r = derive_rates(&AtomFieldParams::new(n, phi, 0.0, 0.0).with_eta(eta)).unwrap();
            prop_assert!(r.gamma_x > 0.0);
            prop_assert!(r.gamma_y > 0.0);
            prop_assert!(((r.gamma_x + r.gamma_y) - r.gamma_z).abs() <= 1e-14 * r.gamma_z);
            prop_assert!(r.m_corr < n + 0.5);
        }

        #[test]
        fn correlation_exceeds_photon_number(n in 1e-9f64..10.0, dn in 1e-6f64..1.0) {
            prop_assert!(correlation_strength(n, 1.0) > n);
            prop_assert!(correlation_strength(n + dn, 1.0) > correlation_strength(n, 1.0));
        }
    }
}
