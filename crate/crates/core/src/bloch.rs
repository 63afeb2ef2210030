//! Optical Bloch equations for the atom in a squeezed vacuum.
//!
//! The dynamics are linear, `ds/dt = A s + b`, so the steady state is a
//! single 3x3 solve. A fixed-step RK4 integrator is kept alongside as an
//! independent route to the same fixed point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{derive_rates, AtomFieldParams};

/// Expectation values of the Pauli operators.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BlochState {
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
}

impl BlochState {
    pub const GROUND: BlochState = BlochState {
        sx: 0.0,
        sy: 0.0,
        sz: -1.0,
    };

    pub fn new(sx: f64, sy: f64, sz: f64) -> Self {
        Self { sx, sy, sz }
    }

    /// Squared length of the Bloch vector; 1 for a pure state.
    pub fn purity(&self) -> f64 {
        self.sx * self.sx + self.sy * self.sy + self.sz * self.sz
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.sx, self.sy, self.sz]
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn max_abs_diff(&self, other: &BlochState) -> f64 {
        (self.sx - other.sx)
            .abs()
            .max((self.sy - other.sy).abs())
            .max((self.sz - other.sz).abs())
    }

    fn max_abs(&self) -> f64 {
        self.sx.abs().max(self.sy.abs()).max(self.sz.abs())
    }
}

/// Coefficients of `ds/dt = A s + b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochSystem {
    pub a_matrix: [[f64; 3]; 3],
    pub b_vector: [f64; 3],
}

impl BlochSystem {
    pub fn derivative(&self, s: &BlochState) -> BlochState {
        let v = s.as_array();
        let mut out = self.b_vector;
        for (i, row) in self.a_matrix.iter().enumerate() {
            out[i] += row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
        }
        BlochState::from_array(out)
    }

    pub fn determinant(&self) -> f64 {
        let a = &self.a_matrix;
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    }

    /// Largest entry magnitude, used to scale the singularity threshold.
    pub fn scale(&self) -> f64 {
        self.a_matrix
            .iter()
            .flatten()
            .fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    /// Solves `A s = -b` by Gaussian elimination with partial pivoting.
    pub fn fixed_point(&self) -> Result<BlochState> {
        let scale = self.scale();
        let det = self.determinant();
        let threshold = 1e-12 * scale.powi(3);
        if !(det.abs() >= threshold) || scale == 0.0 {
            return Err(Error::SingularSystem { det, threshold });
        }

        let mut m = self.a_matrix;
        let mut rhs = self.b_vector.map(|v| -v);
        for col in 0..3 {
            let pivot = (col..3)
                .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
                .unwrap();
            if pivot != col {
                m.swap(pivot, col);
                rhs.swap(pivot, col);
            }
            for row in col + 1..3 {
                let factor = m[row][col] / m[col][col];
                if factor != 0.0 {
                    for k in col..3 {
                        m[row][k] -= factor * m[col][k];
                    }
                    rhs[row] -= factor * rhs[col];
                }
            }
        }
        let mut x = [0.0; 3];
        for row in (0..3).rev() {
            let tail: f64 = (row + 1..3).map(|k| m[row][k] * x[k]).sum();
            x[row] = (rhs[row] - tail) / m[row][row];
        }
        Ok(BlochState::from_array(x))
    }

    fn rk4_step(&self, s: &BlochState, dt: f64) -> BlochState {
        let add = |a: &BlochState, k: &BlochState, h: f64| {
            BlochState::new(a.sx + h * k.sx, a.sy + h * k.sy, a.sz + h * k.sz)
        };
        let k1 = self.derivative(s);
        let k2 = self.derivative(&add(s, &k1, 0.5 * dt));
        let k3 = self.derivative(&add(s, &k2, 0.5 * dt));
        let k4 = self.derivative(&add(s, &k3, dt));
        BlochState::new(
            s.sx + dt / 6.0 * (k1.sx + 2.0 * k2.sx + 2.0 * k3.sx + k4.sx),
            s.sy + dt / 6.0 * (k1.sy + 2.0 * k2.sy + 2.0 * k3.sy + k4.sy),
            s.sz + dt / 6.0 * (k1.sz + 2.0 * k2.sz + 2.0 * k3.sz + k4.sz),
        )
    }
}

pub fn build_system(params: &AtomFieldParams) -> Result<BlochSystem> {
    let rates = derive_rates(params)?;
    let g = params.gamma;
    let shift = g * rates.m_corr * params.phi.sin();
    let d = params.delta;
    let w = params.omega;
    Ok(BlochSystem {
        a_matrix: [
            [-rates.gamma_x, -(d + shift), 0.0],
            [d - shift, -rates.gamma_y, -w],
            [0.0, w, -rates.gamma_z],
        ],
        b_vector: [0.0, 0.0, -g],
    })
}

/// Unique stationary solution of the Bloch equations.
pub fn steady_state(params: &AtomFieldParams) -> Result<BlochState> {
    build_system(params)?.fixed_point()
}

pub type Trajectory = Vec<(f64, BlochState)>;

/// Step size used by the relaxation oracle: `0.01 / max(gamma, omega, |delta|, gamma_z)`.
pub fn default_step(params: &AtomFieldParams) -> Result<f64> {
    let rates = derive_rates(params)?;
    let fastest = params
        .gamma
        .max(params.omega)
        .max(params.delta.abs())
        .max(rates.gamma_z);
    Ok(0.01 / fastest)
}

const INSTABILITY_BOUND: f64 = 10.0;

/// Fixed-step RK4 integration from `s0` up to `t_final`.
///
/// The last step is shortened so the trajectory ends exactly at `t_final`.
pub fn evolve(
    params: &AtomFieldParams,
    s0: BlochState,
    t_final: f64,
    dt: f64,
) -> Result<Trajectory> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParam {
            field: "dt",
            reason: format!("must be positive and finite, got {dt}"),
        });
    }
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidParam {
            field: "t_final",
            reason: format!("must be >= 0 and finite, got {t_final}"),
        });
    }
    let system = build_system(params)?;
    let steps = (t_final / dt).ceil() as usize;
    let mut out = Vec::with_capacity(steps + 1);
    let mut s = s0;
    out.push((0.0, s));
    for k in 0..steps {
        let t = k as f64 * dt;
        let h = dt.min(t_final - t);
        if h <= 0.0 {
            break;
        }
        s = system.rk4_step(&s, h);
        if !(s.max_abs() <= INSTABILITY_BOUND) {
            return Err(Error::StepTooLarge {
                time: t + h,
                magnitude: s.max_abs(),
            });
        }
        let t_next = if k + 1 == steps { t_final } else { t + h };
        out.push((t_next, s));
    }
    Ok(out)
}

/// Slowest possible relaxation rate, `gamma (N + 1/2) - gamma M`.
///
/// Every eigenvalue of `A` has real part at most minus this value.
pub fn spectral_gap_bound(params: &AtomFieldParams) -> Result<f64> {
    let rates = derive_rates(params)?;
    Ok(rates.big_gamma - params.gamma * rates.m_corr)
}

/// Integrates until `|ds/dt|_inf < tol * gamma`.
///
/// Gives up with [`Error::NoConvergence`] once `t` passes `200 / gap`, where
/// `gap` is [`spectral_gap_bound`].
pub fn relax_to_steady(params: &AtomFieldParams, s0: BlochState, tol: f64) -> Result<BlochState> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParam {
            field: "tol",
            reason: format!("must be > 0, got {tol}"),
        });
    }
    let system = build_system(params)?;
    let dt = default_step(params)?;
    let t_max = 200.0 / spectral_gap_bound(params)?;
    let target = tol * params.gamma;

    let mut s = s0;
    let mut t = 0.0;
    loop {
        let residual = system.derivative(&s).max_abs();
        if residual < target {
            return Ok(s);
        }
        if t > t_max {
            return Err(Error::NoConvergence { time: t, residual });
        }
        s = system.rk4_step(&s, dt);
        t += dt;
        if !(s.max_abs() <= INSTABILITY_BOUND) {
            return Err(Error::StepTooLarge {
                time: t,
                magnitude: s.max_abs(),
            });
        }
    }
}
