//! Resonance fluorescence of a coherently driven two-level atom in a
//! broadband squeezed vacuum.
//!
//! The crate solves the squeezed-vacuum optical Bloch equations for their
//! steady state and derives from it the normally-ordered quadrature
//! variances of the fluorescent field, the pure-state conditions, and the
//! parameters of maximal squeezing.
//!
//! ```
//! use rfsq_core::{full_report, AtomFieldParams};
//! use std::f64::consts::FRAC_PI_2;
//!
//! let p = AtomFieldParams::new(0.125, FRAC_PI_2, 6f64.sqrt() / 4.0, 0.25);
//! let r = full_report(&p).unwrap();
//! assert!((r.s_pi4 + 0.25).abs() < 1e-9);
//! ```

pub mod bloch;
pub mod error;
pub mod figures;
pub mod params;
pub mod pure;
pub mod scan;
pub mod search;
pub mod squeezing;
pub mod verify;

pub use bloch::{
    build_system, evolve, relax_to_steady, steady_state, BlochState, BlochSystem, Trajectory,
};
pub use error::{Error, Result};
pub use params::{derive_rates, AtomFieldParams, DerivedRates};
pub use pure::{
    condition_phi0, condition_phi_half_pi, condition_phi_pi, find_pure_curve, maximal_family,
    sz_plus_half, MaximalPoint, PureCurvePoint, PureStateSolution,
};
pub use scan::{
    certify_n_eighth, find_crossover, minimize_variance, minimize_variance_for, scan, Axis,
    AxisName, CertifyConfig, CertifyReport, Metric, OptimumReport, ScanResult, ScanSpec, SearchBox,
};
pub use squeezing::{
    full_report, input_vacuum_variance, optimal_phase_analytic, optimal_phase_numeric,
    optimal_variance, pure_state_variance, sphere_angles, variance_theta, SqueezingReport,
};
