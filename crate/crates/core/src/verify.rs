//! Self-verification suite behind `rfsq verify`.
//!
//! Each check re-derives a known result through an independent route and
//! reports pass/fail with a short detail string.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bloch::{relax_to_steady, steady_state, BlochState};
use crate::params::{correlation_strength, derive_rates, AtomFieldParams};
use crate::pure::{condition_phi0, condition_phi_half_pi, maximal_family, sz_plus_half};
use crate::scan::{certify_n_eighth, find_crossover, CertifyConfig};
use crate::squeezing::{
    degree_percent, full_report, input_vacuum_variance, optimal_phase_analytic,
    optimal_phase_numeric, optimal_variance, phase_distance_mod_pi, pure_state_variance,
    variance_theta,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Smaller random sweeps and no certification run.
    pub fast: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 42,
            fast: false,
        }
    }
}

/// Random parameter point with `gamma = 1`, `N` in [0, 2], `phi` in [0, 2pi),
/// `Omega` in [0, 30] and `Delta` in [-30, 30].
pub fn random_params<R: Rng>(rng: &mut R) -> AtomFieldParams {
    AtomFieldParams::new(
        rng.random_range(0.0..2.0),
        rng.random_range(0.0..TAU),
        rng.random_range(0.0..30.0),
        rng.random_range(-30.0..30.0),
    )
}

fn outcome(name: &str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome {
        name: name.into(),
        passed,
        detail,
    }
}

pub fn run_all(opts: VerifyOptions) -> Vec<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let sweep = if opts.fast { 100 } else { 1000 };
    let mut out = vec![
        check_rates(&mut rng, sweep),
        check_oracle(&mut rng, if opts.fast { 50 } else { 1000 }),
        check_inversion_closed_form(&mut rng, sweep),
        check_phase_optimality(&mut rng, if opts.fast { 50 } else { 500 }),
        check_maximal_family(),
        check_closed_conditions(),
        check_pure_law(),
        check_input_benchmark(),
        check_crossover(),
    ];
    if !opts.fast {
        out.push(check_certification());
    }
    out
}

fn check_rates(rng: &mut ChaCha8Rng, count: usize) -> CheckOutcome {
    let mut worst = 0.0f64;
    let mut positive = true;
    for _ in 0..count {
        let p = random_params(rng).with_eta(rng.random_range(0.0..=1.0));
        let r = derive_rates(&p).expect("valid random params");
        positive &= r.gamma_x > 0.0 && r.gamma_y > 0.0;
        worst = worst.max(((r.gamma_x + r.gamma_y) - r.gamma_z).abs() / r.gamma_z);
    }
    outcome(
        "decay rates positive and summing to 2 Gamma",
        positive && worst <= 1e-14,
        format!("max relative sum error {worst:.2e}"),
    )
}

fn check_oracle(rng: &mut ChaCha8Rng, count: usize) -> CheckOutcome {
    let mut worst = 0.0f64;
    let mut failures = 0;
    for _ in 0..count {
        let p = random_params(rng);
        match (
            steady_state(&p),
            relax_to_steady(&p, BlochState::GROUND, 1e-10),
        ) {
            (Ok(a), Ok(b)) => worst = worst.max(a.max_abs_diff(&b)),
            _ => failures += 1,
        }
    }
    outcome(
        "direct solve agrees with RK4 relaxation",
        failures == 0 && worst < 1e-7,
        format!("{count} points, max deviation {worst:.2e}, {failures} failures"),
    )
}

fn check_inversion_closed_form(rng: &mut ChaCha8Rng, count: usize) -> CheckOutcome {
    let mut worst = 0.0f64;
    for _ in 0..count {
        let p = random_params(rng);
        let solved = steady_state(&p).expect("non-singular").sz + 0.5;
        let closed = sz_plus_half(&p).expect("gamma = 1");
        worst = worst.max((solved - closed).abs());
    }
    outcome(
        "closed-form sz + 1/2 matches solver",
        worst < 1e-10,
        format!("max deviation {worst:.2e}"),
    )
}

fn check_phase_optimality(rng: &mut ChaCha8Rng, count: usize) -> CheckOutcome {
    let mut worst_phase = 0.0f64;
    let mut worst_bound = 0.0f64;
    let mut checked = 0;
    for _ in 0..count {
        let p = random_params(rng);
        let s = steady_state(&p).expect("non-singular");
        let s_opt = optimal_variance(&s);
        for k in 0..360 {
            let theta = PI * k as f64 / 360.0;
            worst_bound = worst_bound.max(s_opt - variance_theta(&s, theta));
        }
        if let Ok(numeric) = optimal_phase_numeric(&s) {
            if s.sx * s.sx + s.sy * s.sy > 1e-12 {
                let analytic = optimal_phase_analytic(&p).expect("valid");
                worst_phase = worst_phase.max(phase_distance_mod_pi(analytic, numeric));
                checked += 1;
            }
        }
    }
    outcome(
        "optimal quadrature phase and variance",
        worst_phase < 1e-7 && worst_bound <= 1e-12,
        format!("{checked} phases, max phase error {worst_phase:.2e}, max bound violation {worst_bound:.2e}"),
    )
}

fn check_maximal_family() -> CheckOutcome {
    let mut worst = 0.0f64;
    for k in 0..100 {
        let phi = 0.05 + (PI - 0.1) * k as f64 / 99.0;
        let point = maximal_family(phi).expect("phi away from pi");
        let s = steady_state(&point.solution.params()).expect("non-singular");
        worst = worst
            .max((s.purity() - 1.0).abs())
            .max((s.sz + 0.5).abs())
            .max((optimal_variance(&s) + 0.25).abs());
    }
    outcome(
        "N = 1/8 family is pure with S = -1/4",
        worst < 1e-9,
        format!("max deviation {worst:.2e}"),
    )
}

fn check_closed_conditions() -> CheckOutcome {
    let mut worst = 0.0f64;
    for n in [0.01, 0.05, 0.125, 0.3, 0.5, 1.0, 2.0] {
        for sol in [condition_phi0(n, 1.0), condition_phi_half_pi(n, 1.0)] {
            let sol = sol.expect("n > 0");
            worst = worst.max((sol.sigma_achieved - 1.0).abs());
        }
    }
    outcome(
        "zero and quarter phase conditions give pure states",
        worst < 1e-9,
        format!("max purity defect {worst:.2e}"),
    )
}

fn check_pure_law() -> CheckOutcome {
    let mut worst = (pure_state_variance(0.125, 1.0) + 0.25).abs();
    for k in 1..=50 {
        let n = 0.04 * k as f64;
        let m = correlation_strength(n, 1.0);
        let sz = (n - m) / (n + m);
        worst = worst.max((pure_state_variance(n, 1.0) - sz * (1.0 + sz)).abs());
    }
    outcome(
        "pure-state variance law",
        worst < 1e-14,
        format!("max deviation {worst:.2e}"),
    )
}

fn check_input_benchmark() -> CheckOutcome {
    let degree = degree_percent(input_vacuum_variance(0.1, 1.0));
    outcome(
        "input vacuum squeezing at N = 0.1",
        (degree - 46.3).abs() < 0.5,
        format!("{degree:.2} %"),
    )
}

fn check_crossover() -> CheckOutcome {
    match find_crossover(1.0) {
        Ok(n) => outcome(
            "amplification crossover",
            (n - 0.5625).abs() < 1e-3,
            format!("N* = {n:.6}"),
        ),
        Err(e) => outcome("amplification crossover", false, e.to_string()),
    }
}

fn check_certification() -> CheckOutcome {
    match certify_n_eighth(&CertifyConfig::standard(1e-6)) {
        Ok(report) => outcome(
            "perfect squeezing only at N = 1/8",
            true,
            format!(
                "best N = {}, value {:.3e}",
                report.best_n, report.best_value
            ),
        ),
        Err(e) => outcome("perfect squeezing only at N = 1/8", false, e.to_string()),
    }
}

/// Full report at the quarter-phase pure point, used as a smoke check.
pub fn reference_report() -> crate::error::Result<crate::squeezing::SqueezingReport> {
    full_report(&AtomFieldParams::new(
        0.125,
        FRAC_PI_2,
        6f64.sqrt() / 4.0,
        0.25,
    ))
}
