use thiserror::Error;

/// Errors raised by parameter validation and the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParam { field: &'static str, reason: String },

    #[error("singular Bloch system: |det A| = {det:e} below threshold {threshold:e}")]
    SingularSystem { det: f64, threshold: f64 },

    #[error("integration unstable at t = {time}: state component reached {magnitude}")]
    StepTooLarge { time: f64, magnitude: f64 },

    #[error("relaxation did not converge by t = {time}: residual {residual:e}")]
    NoConvergence { time: f64, residual: f64 },

    #[error("quadrature phase is degenerate: sx^2 + sy^2 = {coherence:e}, all phases tie")]
    DegeneratePhase { coherence: f64 },

    #[error(
        "phase {phi} is at the t -> infinity pole; asymptote is omega = {omega_over_delta} * delta"
    )]
    PhaseOutOfRange { phi: f64, omega_over_delta: f64 },

    #[error("closed form requires gamma = 1, got {gamma}")]
    UnitMismatch { gamma: f64 },

    #[error("no pure state on this slice: max sigma = {sigma_max} at omega = {omega}")]
    NoPureState { omega: f64, sigma_max: f64 },

    #[error("optimizer not converged after {n_evals} evaluations (best value {value} at omega = {omega}, delta = {delta})")]
    NotConverged {
        omega: f64,
        delta: f64,
        value: f64,
        n_evals: usize,
    },

    #[error("no sign change of the crossover function on [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },

    #[error("certification failed at (n, phi) = {offenders:?}")]
    CertificationFailed { offenders: Vec<(f64, f64)> },

    #[error("invalid scan: {0}")]
    InvalidScan(String),
}

impl Error {
    /// Short machine-readable tag used in CLI error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParam { .. } => "invalid_param",
            Error::SingularSystem { .. } => "singular_system",
            Error::StepTooLarge { .. } => "step_too_large",
            Error::NoConvergence { .. } => "no_convergence",
            Error::DegeneratePhase { .. } => "degenerate_phase",
            Error::PhaseOutOfRange { .. } => "phase_out_of_range",
            Error::UnitMismatch { .. } => "unit_mismatch",
            Error::NoPureState { .. } => "no_pure_state",
            Error::NotConverged { .. } => "not_converged",
            Error::NoRoot { .. } => "no_root",
            Error::CertificationFailed { .. } => "certification_failed",
            Error::InvalidScan(_) => "invalid_scan",
        }
    }

    /// True for errors caused by bad inputs rather than numerical trouble.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParam { .. }
                | Error::UnitMismatch { .. }
                | Error::InvalidScan(_)
                | Error::PhaseOutOfRange { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
