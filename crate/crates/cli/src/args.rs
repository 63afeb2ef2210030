use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rfsq_core::{AtomFieldParams, Axis, AxisName, SearchBox};

#[derive(Debug, Parser)]
#[command(
    name = "rfsq",
    version,
    about = "Squeezing in the resonance fluorescence of a two-level atom driven in a squeezed vacuum"
)]
pub struct Cli {
    #[command(flatten)]
    pub globals: Globals,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Globals {
    /// Spontaneous decay rate; closed forms require 1.
    #[arg(
        long,
        global = true,
        default_value_t = 1.0,
        allow_negative_numbers = true
    )]
    pub gamma: f64,
    /// Mean photon number of the squeezed vacuum.
    #[arg(long = "n", global = true, allow_negative_numbers = true)]
    pub n_sq: Option<f64>,
    /// Squeezing purity parameter in [0, 1].
    #[arg(
        long,
        global = true,
        default_value_t = 1.0,
        allow_negative_numbers = true
    )]
    pub eta: f64,
    /// Relative phase, radians or `<f>pi`.
    #[arg(long, global = true, value_parser = parse_angle, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// Rabi frequency.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Detuning of the laser from the atomic transition.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for the randomized sweeps of `verify`.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
}

impl Globals {
    pub fn params(&self) -> AtomFieldParams {
        AtomFieldParams::new(
            self.n_sq.unwrap_or(0.0),
            self.phi.unwrap_or(0.0),
            self.omega.unwrap_or(0.0),
            self.delta.unwrap_or(0.0),
        )
        .with_gamma(self.gamma)
        .with_eta(self.eta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Steady-state Bloch vector.
    Steady,
    /// Every squeezing quantity at one parameter point.
    Report,
    /// Evaluate a metric over a one- or two-dimensional grid.
    Scan {
        /// s_x, s_y, s_pi4, s_opt, sigma, sz, s_theta or s_theta=<rad>.
        #[arg(long, default_value = "s_x")]
        metric: String,
        /// name:start:stop:count
        #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
        axis1: Axis,
        #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
        axis2: Option<Axis>,
    },
    /// Write the dataset of a figure (2 to 7) with metadata and a gnuplot script.
    Figure {
        number: u8,
        /// Skip the gnuplot script.
        #[arg(long)]
        no_script: bool,
    },
    /// Minimize the optimal-quadrature variance over Omega and Delta.
    Optimize {
        /// omega:lo:hi,delta:lo:hi
        #[arg(long = "box", value_parser = parse_box, allow_hyphen_values = true)]
        bounds: Option<SearchBox>,
    },
    /// Parameters of a pure steady state.
    Pure {
        /// Search the Rabi frequency of maximal purity at the given phi, N, Delta.
        #[arg(long)]
        solve_omega: bool,
    },
    /// Photon number where output and input squeezing are equal.
    Crossover,
    /// Run the self-verification suite.
    Verify {
        #[arg(long)]
        fast: bool,
    },
}

pub const DEFAULT_BOX: SearchBox = SearchBox {
    omega: (0.0, 4.0),
    delta: (-2.0, 4.0),
};

/// Parses `<f>`, `<f>pi`, `pi` or `-pi` into radians.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let value = match s.strip_suffix("pi") {
        Some(coeff) => {
            let coeff = coeff.trim_end_matches('*');
            let c = match coeff {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c
                    .parse::<f64>()
                    .map_err(|e| format!("bad angle `{s}`: {e}"))?,
            };
            c * PI
        }
        None => s
            .parse::<f64>()
            .map_err(|e| format!("bad angle `{s}`: {e}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("angle `{s}` is not finite"))
    }
}

pub fn parse_axis(s: &str) -> Result<Axis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [name, start, stop, count] = parts[..] else {
        return Err(format!("axis `{s}` must look like name:start:stop:count"));
    };
    let name: AxisName = name.parse().map_err(|e: rfsq_core::Error| e.to_string())?;
    let count = count
        .parse::<usize>()
        .map_err(|e| format!("bad node count in `{s}`: {e}"))?;
    Ok(Axis::new(
        name,
        parse_angle(start)?,
        parse_angle(stop)?,
        count,
    ))
}

pub fn parse_box(s: &str) -> Result<SearchBox, String> {
    let mut bounds = DEFAULT_BOX;
    for part in s.split(',') {
        let fields: Vec<&str> = part.split(':').collect();
        let [name, lo, hi] = fields[..] else {
            return Err(format!("box entry `{part}` must look like name:lo:hi"));
        };
        let lo = lo
            .parse::<f64>()
            .map_err(|e| format!("bad bound in `{part}`: {e}"))?;
        let hi = hi
            .parse::<f64>()
            .map_err(|e| format!("bad bound in `{part}`: {e}"))?;
        match name {
            "omega" => bounds.omega = (lo, hi),
            "delta" => bounds.delta = (lo, hi),
            other => return Err(format!("box axis must be omega or delta, got `{other}`")),
        }
    }
    Ok(bounds)
}
