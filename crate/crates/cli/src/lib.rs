//! Command-line front end for `rfsq-core`.
//!
//! [`run`] parses the arguments, executes one command and returns the
//! process exit code: 0 on success, 1 for invalid input, 2 for numerical
//! failures and 3 when `verify` finds a failing check.

pub mod args;
pub mod figure;
pub mod table;

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use clap::Parser;
use rfsq_core::verify::{run_all, VerifyOptions};
use rfsq_core::{
    condition_phi0, condition_phi_half_pi, condition_phi_pi, find_crossover, find_pure_curve,
    full_report, maximal_family, minimize_variance_for, scan, steady_state, Error, Metric,
    ScanSpec,
};
use serde::Serialize;
use serde_json::{json, Value};

use args::{Cli, Command, Format, Globals, DEFAULT_BOX};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

/// A failed command, printed as `error: <kind>: <detail>`.
#[derive(Debug)]
pub struct Failure {
    pub kind: String,
    pub detail: String,
    pub code: i32,
}

impl Failure {
    fn invalid(kind: &str, detail: impl Into<String>) -> Self {
        Self {
            kind: kind.into(),
            detail: detail.into(),
            code: EXIT_INVALID,
        }
    }

    fn io(path: &Path, e: io::Error) -> Self {
        Self::invalid("io", format!("{}: {e}", path.display()))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            kind: e.kind().into(),
            detail: e.to_string(),
            code: if e.is_validation() {
                EXIT_INVALID
            } else {
                EXIT_NUMERICAL
            },
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut io::stdout().lock(), &mut io::stderr().lock())
}

/// As [`run`], with explicit standard output and error streams.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{}", e.render());
            return EXIT_OK;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let first = rendered.lines().next().unwrap_or_default();
            let detail = first.strip_prefix("error: ").unwrap_or(first);
            let _ = writeln!(stderr, "error: usage: {detail}");
            return EXIT_INVALID;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}: {}", f.kind, f.detail);
            f.code
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let g = &cli.globals;
    match &cli.command {
        Command::Steady => {
            let s = steady_state(&g.params())?;
            emit_object(g, stdout, &json!({"sx": s.sx, "sy": s.sy, "sz": s.sz}))?;
        }
        Command::Report => emit_object(g, stdout, &full_report(&g.params())?)?,
        Command::Scan {
            metric,
            axis1,
            axis2,
        } => {
            let metric: Metric = metric.parse()?;
            let spec = match axis2 {
                Some(a2) => ScanSpec::two_d(*axis1, *a2, g.params(), metric),
                None => ScanSpec::one_d(*axis1, g.params(), metric),
            };
            run_scan(g, &spec, stdout, stderr)?;
        }
        Command::Figure { number, no_script } => {
            figure::emit(*number, g, !no_script, stdout)?;
        }
        Command::Optimize { bounds } => {
            let report = minimize_variance_for(&g.params(), bounds.unwrap_or(DEFAULT_BOX))?;
            let mut v = json!({"n_sq": g.params().n_sq, "phi": g.params().phi, "eta": g.eta});
            merge(&mut v, &report);
            emit_object(g, stdout, &v)?;
        }
        Command::Pure { solve_omega } => emit_object(g, stdout, &pure(g, *solve_omega)?)?,
        Command::Crossover => {
            let n_star = find_crossover(g.eta)?;
            emit_object(g, stdout, &json!({"eta": g.eta, "n_star": n_star}))?;
        }
        Command::Verify { fast } => return verify(g, *fast, stdout),
    }
    Ok(EXIT_OK)
}

fn merge<T: Serialize>(target: &mut Value, extra: &T) {
    if let (Value::Object(t), Ok(Value::Object(e))) = (target, serde_json::to_value(extra)) {
        t.extend(e);
    }
}

fn pure(g: &Globals, solve_omega: bool) -> Result<Value, Failure> {
    let p = g.params();
    let to_value = |v: Result<_, serde_json::Error>| {
        v.map_err(|e: serde_json::Error| Failure::invalid("serialize", e.to_string()))
    };
    if solve_omega {
        let point = find_pure_curve(p.phi, p.n_sq, p.delta, p.eta)?;
        let mut v = json!({"phi": p.phi, "n_sq": p.n_sq, "delta": p.delta, "eta": p.eta});
        merge(&mut v, &point);
        return Ok(v);
    }
    let phi = p.phi.rem_euclid(TAU);
    let near = |target: f64| (phi - target).abs() < 1e-12;
    if near(0.0) || near(TAU) {
        to_value(serde_json::to_value(condition_phi0(p.n_sq, p.eta)?))
    } else if near(FRAC_PI_2) {
        to_value(serde_json::to_value(condition_phi_half_pi(p.n_sq, p.eta)?))
    } else if near(PI) {
        to_value(serde_json::to_value(condition_phi_pi(
            p.n_sq, p.delta, p.eta,
        )?))
    } else if p.n_sq == 0.125 && p.eta == 1.0 {
        to_value(serde_json::to_value(maximal_family(phi)?))
    } else {
        Err(Failure::invalid(
            "invalid_param",
            "closed-form conditions exist for phi in {0, pi/2, pi} or N = 0.125 with eta = 1; \
             pass --solve-omega to search the Rabi frequency instead",
        ))
    }
}

fn run_scan(
    g: &Globals,
    spec: &ScanSpec,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), Failure> {
    let result = scan(spec)?;
    if !result.errors.is_empty() {
        let _ = writeln!(
            stderr,
            "warning: {} of {} nodes failed; first: {}",
            result.errors.len(),
            result.values.len(),
            result.errors[0].message
        );
    }
    if g.format == Some(Format::Json) {
        return write_json(g, stdout, &result);
    }
    let mut columns = vec![spec.axis1.name.to_string()];
    if let Some(a2) = spec.axis2 {
        columns.push(a2.name.to_string());
    }
    columns.push(spec.metric.name().to_string());
    let rows: Vec<Vec<f64>> = result
        .values
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let (a, b) = spec.coordinates(k);
            let mut row = vec![a];
            row.extend(b);
            row.push(v.unwrap_or(f64::NAN));
            row
        })
        .collect();
    write_output(g.out.as_deref(), stdout, |w| {
        table::write_table(w, &columns, &rows)
    })
}

fn verify(g: &Globals, fast: bool, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let outcomes = run_all(VerifyOptions { seed: g.seed, fast });
    let all_passed = outcomes.iter().all(|o| o.passed);
    if g.format == Some(Format::Json) {
        write_json(g, stdout, &outcomes)?;
    } else {
        let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
        let mut text = String::new();
        for o in &outcomes {
            let mark = if o.passed { "PASS" } else { "FAIL" };
            text.push_str(&format!("{mark}  {:width$}  {}\n", o.name, o.detail));
        }
        let passed = outcomes.iter().filter(|o| o.passed).count();
        text.push_str(&format!("{passed}/{} checks passed\n", outcomes.len()));
        write_output(g.out.as_deref(), stdout, |w| w.write_all(text.as_bytes()))?;
    }
    Ok(if all_passed { EXIT_OK } else { EXIT_VERIFY })
}

/// Writes a single object as pretty JSON (the default) or as a one-row CSV.
fn emit_object<T: Serialize>(
    g: &Globals,
    stdout: &mut dyn Write,
    value: &T,
) -> Result<(), Failure> {
    if g.format == Some(Format::Csv) {
        let v = serde_json::to_value(value)
            .map_err(|e| Failure::invalid("serialize", e.to_string()))?;
        let (columns, values): (Vec<String>, Vec<String>) = table::flatten(&v).into_iter().unzip();
        write_output(g.out.as_deref(), stdout, |w| {
            table::write_record(w, &columns, &values)
        })
    } else {
        write_json(g, stdout, value)
    }
}

fn write_json<T: Serialize + ?Sized>(
    g: &Globals,
    stdout: &mut dyn Write,
    value: &T,
) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::invalid("serialize", e.to_string()))?;
    write_output(g.out.as_deref(), stdout, |w| writeln!(w, "{text}"))
}

/// Sends output to `path`, creating its directory, or to `stdout`.
pub(crate) fn write_output<F>(
    path: Option<&Path>,
    stdout: &mut dyn Write,
    write: F,
) -> Result<(), Failure>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match path {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))?;
            }
            let mut file =
                io::BufWriter::new(fs::File::create(path).map_err(|e| Failure::io(path, e))?);
            write(&mut file)
                .and_then(|_| file.flush())
                .map_err(|e| Failure::io(path, e))
        }
        None => write(stdout).map_err(|e| Failure::io(Path::new("<stdout>"), e)),
    }
}
