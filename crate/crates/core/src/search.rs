//! Derivative-free one- and low-dimensional search routines.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineOptimum {
    pub x: f64,
    pub value: f64,
    pub n_evals: usize,
}

/// Golden-section search for the minimum of a unimodal `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `x_tol`.
pub fn golden_section_min<F>(mut f: F, lo: f64, hi: f64, x_tol: f64) -> LineOptimum
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut n_evals = 2;
    while (b - a) > x_tol && n_evals < 400 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        n_evals += 1;
    }
    if fc <= fd {
        LineOptimum {
            x: c,
            value: fc,
            n_evals,
        }
    } else {
        LineOptimum {
            x: d,
            value: fd,
            n_evals,
        }
    }
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
pub fn golden_section_max<F>(mut f: F, lo: f64, hi: f64, x_tol: f64) -> LineOptimum
where
    F: FnMut(f64) -> f64,
{
    let found = golden_section_min(|x| -f(x), lo, hi, x_tol);
    LineOptimum {
        value: -found.value,
        ..found
    }
}

/// Bisection for a root of `f` on `[lo, hi]`; `None` if the endpoints share a sign.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, f_tol: f64, max_iter: usize) -> Option<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    let mut mid = 0.5 * (a + b);
    for _ in 0..max_iter {
        mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm.abs() < f_tol || mid == a || mid == b {
            return Some(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Some(mid)
}

/// Termination and budget settings for [`nelder_mead`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    /// Largest vertex distance from the best vertex at convergence.
    pub x_tol: f64,
    /// Largest spread of vertex values at convergence.
    pub f_tol: f64,
    pub max_evals: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            x_tol: 1e-8,
            f_tol: 1e-12,
            max_evals: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOutcome<const D: usize> {
    pub x: [f64; D],
    pub value: f64,
    pub n_evals: usize,
    pub converged: bool,
}

/// Nelder-Mead minimization inside the box `bounds`, with standard
/// coefficients (reflection 1, expansion 2, contraction 0.5, shrink 0.5).
///
/// Trial points are projected onto the box before evaluation.
pub fn nelder_mead<const D: usize, F>(
    mut f: F,
    start: [f64; D],
    step: [f64; D],
    bounds: [(f64, f64); D],
    opts: SimplexOptions,
) -> SimplexOutcome<D>
where
    F: FnMut(&[f64; D]) -> f64,
{
    let clamp = |mut x: [f64; D]| {
        for (xi, (lo, hi)) in x.iter_mut().zip(bounds) {
            *xi = xi.clamp(lo, hi);
        }
        x
    };
    let mut n_evals = 0usize;
    let mut eval = |x: &[f64; D], n: &mut usize| {
        *n += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let x0 = clamp(start);
    let mut simplex: Vec<([f64; D], f64)> = Vec::with_capacity(D + 1);
    simplex.push((x0, eval(&x0, &mut n_evals)));
    for i in 0..D {
        let mut xi = x0;
        xi[i] += step[i];
        if xi[i] > bounds[i].1 {
            xi[i] = x0[i] - step[i];
        }
        let xi = clamp(xi);
        simplex.push((xi, eval(&xi, &mut n_evals)));
    }

    let combine = |a: &[f64; D], b: &[f64; D], t: f64| {
        let mut out = [0.0; D];
        for k in 0..D {
            out[k] = a[k] + t * (b[k] - a[k]);
        }
        out
    };

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0];
        let worst = simplex[D];
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(best.0.iter())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0f64, f64::max);
        let spread = worst.1 - best.1;
        if diameter < opts.x_tol && spread < opts.f_tol {
            return SimplexOutcome {
                x: best.0,
                value: best.1,
                n_evals,
                converged: true,
            };
        }
        if n_evals >= opts.max_evals {
            return SimplexOutcome {
                x: best.0,
                value: best.1,
                n_evals,
                converged: false,
            };
        }

        let mut centroid = [0.0; D];
        for (x, _) in &simplex[..D] {
            for k in 0..D {
                centroid[k] += x[k] / D as f64;
            }
        }

        let reflected = clamp(combine(&centroid, &worst.0, -1.0));
        let f_r = eval(&reflected, &mut n_evals);
        if f_r < best.1 {
            let expanded = clamp(combine(&centroid, &worst.0, -2.0));
            let f_e = eval(&expanded, &mut n_evals);
            simplex[D] = if f_e < f_r {
                (expanded, f_e)
            } else {
                (reflected, f_r)
            };
            continue;
        }
        if f_r < simplex[D - 1].1 {
            simplex[D] = (reflected, f_r);
            continue;
        }

        let (contracted, f_c) = if f_r < worst.1 {
            let x = clamp(combine(&centroid, &reflected, 0.5));
            (x, eval(&x, &mut n_evals))
        } else {
            let x = clamp(combine(&centroid, &worst.0, 0.5));
            (x, eval(&x, &mut n_evals))
        };
        if f_c < worst.1.min(f_r) {
            simplex[D] = (contracted, f_c);
            continue;
        }

        for vertex in simplex.iter_mut().skip(1) {
            let x = combine(&best.0, &vertex.0, 0.5);
            *vertex = (x, eval(&x, &mut n_evals));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_finds_parabola_vertex() {
        let found = golden_section_min(|x| (x - 0.3).powi(2) + 1.0, -2.0, 5.0, 1e-10);
        assert!((found.x - 0.3).abs() < 1e-7);
        assert!((found.value - 1.0).abs() < 1e-15);
        let found = golden_section_max(|x| -(x - 2.0).powi(2), 0.0, 3.0, 1e-10);
        assert!((found.x - 2.0).abs() < 1e-7);
    }

    #[test]
    fn golden_section_handles_edge_minimum() {
        let found = golden_section_min(|x| x, 1.0, 2.0, 1e-9);
        assert!((found.x - 1.0).abs() < 1e-8);
    }

    #[test]
    fn bisection_finds_sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14, 200).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 100).is_none());
    }

    #[test]
    fn nelder_mead_rosenbrock() {
        let out = nelder_mead(
            |x: &[f64; 2]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            [-1.2, 1.0],
            [0.1, 0.1],
            [(-5.0, 5.0), (-5.0, 5.0)],
            SimplexOptions {
                x_tol: 1e-10,
                f_tol: 1e-20,
                max_evals: 20_000,
            },
        );
        assert!(out.converged);
        assert!(
            (out.x[0] - 1.0).abs() < 1e-6 && (out.x[1] - 1.0).abs() < 1e-6,
            "{out:?}"
        );
    }

    #[test]
    fn nelder_mead_respects_box() {
        let out = nelder_mead(
            |x: &[f64; 2]| (x[0] + 3.0).powi(2) + (x[1] - 0.5).powi(2),
            [0.5, 0.0],
            [0.1, 0.1],
            [(0.0, 1.0), (0.0, 1.0)],
            SimplexOptions::default(),
        );
        assert!(out.converged);
        assert!(out.x[0].abs() < 1e-8);
        assert!((out.x[1] - 0.5).abs() < 1e-6);
    }

    #[test]
    fn nelder_mead_reports_budget_exhaustion() {
        let out = nelder_mead(
            |x: &[f64; 1]| (x[0] - 0.25).abs().sqrt(),
            [0.9],
            [0.1],
            [(0.0, 1.0)],
            SimplexOptions {
                max_evals: 5,
                ..SimplexOptions::default()
            },
        );
        assert!(!out.converged);
        assert!(out.n_evals >= 5);
    }
}
