//! Normally-ordered quadrature variances of the fluorescent field.
//!
//! Variances are normalized so that -1/4 is the largest possible squeezing
//! and 0 is the shot-noise level.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::bloch::{steady_state, BlochState};
use crate::error::{Error, Result};
use crate::params::{correlation_strength, derive_rates, AtomFieldParams};

/// Variance reference for 100 % squeezing.
pub const MAX_SQUEEZING: f64 = -0.25;

/// Purity threshold above which a state is flagged as pure.
pub const PURE_THRESHOLD: f64 = 1.0 - 1e-6;

const DEGENERATE_COHERENCE: f64 = 1e-20;

/// `S_theta = 1 + sz - (sx cos(theta) - sy sin(theta))^2`.
pub fn variance_theta(state: &BlochState, theta: f64) -> f64 {
    let projection = state.sx * theta.cos() - state.sy * theta.sin();
    1.0 + state.sz - projection * projection
}

/// Reduces an angle into `[0, pi)`.
pub fn reduce_mod_pi(angle: f64) -> f64 {
    let r = angle.rem_euclid(PI);
    if r >= PI {
        r - PI
    } else {
        r
    }
}

/// Distance between two phases on the circle of period pi.
pub fn phase_distance_mod_pi(a: f64, b: f64) -> f64 {
    let d = reduce_mod_pi(a - b);
    d.min(PI - d)
}

/// Quadrature phase of minimal variance predicted from the parameters:
/// `atan2(Gamma + gamma M cos(phi), delta + gamma M sin(phi))` in `[0, pi)`.
pub fn optimal_phase_analytic(params: &AtomFieldParams) -> Result<f64> {
    let rates = derive_rates(params)?;
    let g_m = params.gamma * rates.m_corr;
    let num = rates.big_gamma + g_m * params.phi.cos();
    let den = params.delta + g_m * params.phi.sin();
    if den == 0.0 {
        return Ok(FRAC_PI_2);
    }
    Ok(reduce_mod_pi(num.atan2(den)))
}

/// Phase maximizing the coherent projection of `state`, `atan2(-sy, sx)` mod pi.
pub fn optimal_phase_numeric(state: &BlochState) -> Result<f64> {
    let coherence = state.sx * state.sx + state.sy * state.sy;
    if coherence <= DEGENERATE_COHERENCE {
        return Err(Error::DegeneratePhase { coherence });
    }
    Ok(reduce_mod_pi((-state.sy).atan2(state.sx)))
}

/// Minimum of [`variance_theta`] over all phases, `1 + sz - sx^2 - sy^2`.
pub fn optimal_variance(state: &BlochState) -> f64 {
    let value = 1.0 + state.sz - state.sx * state.sx - state.sy * state.sy;
    debug_assert!(
        (value - (state.sz * (1.0 + state.sz) + 1.0 - state.purity())).abs() < 1e-14,
        "purity form of the optimal variance disagrees"
    );
    value
}

/// Longitude `alpha` and colatitude `beta` of a completely polarized atom.
///
/// `alpha` equals the optimal quadrature phase; `beta` is `pi` when `N = 0`.
pub fn sphere_angles(params: &AtomFieldParams) -> Result<(f64, f64)> {
    let alpha = optimal_phase_analytic(params)?;
    let n = params.n_sq;
    let m = correlation_strength(n, params.eta);
    let beta = if m + n == 0.0 {
        PI
    } else {
        (-(m - n) / (m + n)).clamp(-1.0, 1.0).acos()
    };
    Ok((alpha, beta))
}

/// Bloch vector of the pure state `(sqrt(M)|0> - e^{i alpha} sqrt(N)|1>) / sqrt(M + N)`.
///
/// With `sigma_y = i(sigma_- - sigma_+)` the in-phase component carries a
/// minus sign: `(-cos(alpha) sin(beta), sin(alpha) sin(beta), cos(beta))`.
pub fn pure_bloch_vector(alpha: f64, beta: f64) -> BlochState {
    BlochState::new(
        -alpha.cos() * beta.sin(),
        alpha.sin() * beta.sin(),
        beta.cos(),
    )
}

/// Optimal-quadrature variance of the pure steady state, `(N - M) / (N + M + 1/2)`.
pub fn pure_state_variance(n_sq: f64, eta: f64) -> f64 {
    let m = correlation_strength(n_sq, eta);
    (n_sq - m) / (n_sq + m + 0.5)
}

/// Normally-ordered variance of the squeezed quadrature of the input vacuum, `(N - M) / 2`.
pub fn input_vacuum_variance(n_sq: f64, eta: f64) -> f64 {
    (n_sq - correlation_strength(n_sq, eta)) / 2.0
}

/// Squeezing relative to the 100 % reference, in percent.
pub fn degree_percent(variance: f64) -> f64 {
    variance / MAX_SQUEEZING * 100.0
}

/// Every squeezing quantity for one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezingReport {
    pub inputs: AtomFieldParams,
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
    pub theta_o: f64,
    /// Set when the steady state carries no coherence and every phase ties.
    pub phase_degenerate: bool,
    pub s_theta_o: f64,
    pub s_x: f64,
    pub s_y: f64,
    pub s_pi4: f64,
    pub sigma: f64,
    pub alpha: f64,
    pub beta: f64,
    pub is_pure: bool,
    pub degree_percent: f64,
}

impl SqueezingReport {
    pub fn state(&self) -> BlochState {
        BlochState::new(self.sx, self.sy, self.sz)
    }
}

pub fn full_report(params: &AtomFieldParams) -> Result<SqueezingReport> {
    let state = steady_state(params)?;
    let theta_o = optimal_phase_analytic(params)?;
    let (alpha, beta) = sphere_angles(params)?;
    let phase_degenerate = state.sx * state.sx + state.sy * state.sy <= DEGENERATE_COHERENCE;
    let s_theta_o = optimal_variance(&state);
    let sigma = state.purity();
    Ok(SqueezingReport {
        inputs: *params,
        sx: state.sx,
        sy: state.sy,
        sz: state.sz,
        theta_o,
        phase_degenerate,
        s_theta_o,
        s_x: variance_theta(&state, 0.0),
        s_y: variance_theta(&state, FRAC_PI_2),
        s_pi4: variance_theta(&state, FRAC_PI_4),
        sigma,
        alpha,
        beta,
        is_pure: sigma > PURE_THRESHOLD,
        degree_percent: degree_percent(s_theta_o),
    })
}
