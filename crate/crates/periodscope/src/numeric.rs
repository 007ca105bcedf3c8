//! Small floating-point utilities shared by the numeric layers: Horner
//! evaluation over pre-baked coefficients, a safeguarded bisection/Newton
//! hybrid for monotone brackets, and grid builders.

use crate::error::{Error, Result};

pub fn horner(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Solves `f(x) = target` on a bracket where `f(lo) - target` and
/// `f(hi) - target` have opposite (or zero) signs. Newton steps are taken
/// when a derivative is supplied and they stay inside the bracket; otherwise
/// the step falls back to bisection. Converges to relative tolerance `rtol`.
pub fn solve_bracketed(
    f: impl Fn(f64) -> f64,
    df: Option<&dyn Fn(f64) -> f64>,
    mut lo: f64,
    mut hi: f64,
    target: f64,
    rtol: f64,
) -> Result<f64> {
    let mut flo = f(lo) - target;
    let fhi = f(hi) - target;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NonConvergence(format!(
            "no sign change on bracket [{}, {}]",
            lo, hi
        )));
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = f(x) - target;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        let width = hi - lo;
        if width.abs() <= rtol * x.abs().max(1e-300) || width.abs() < f64::MIN_POSITIVE * 4.0 {
            return Ok(0.5 * (lo + hi));
        }
        let mut next = f64::NAN;
        if let Some(d) = df {
            let dx = d(x);
            if dx != 0.0 && dx.is_finite() {
                let cand = x - fx / dx;
                if cand > lo && cand < hi {
                    next = cand;
                }
            }
        }
        if !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= rtol * x.abs().max(1e-300) {
            // polish once and stop
            return Ok(next);
        }
        x = next;
    }
    Ok(0.5 * (lo + hi))
}

/// Geometric grid from `a` to `b` (both positive), inclusive.
pub fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(a > 0.0 && b > a && n >= 2);
    let la = a.ln();
    let lb = b.ln();
    (0..n)
        .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Energy grid on (0, h_s) clustering toward both ends when `h_s` is finite
/// (log-uniform in `min(h, h_s - h)`), plain log grid up to `h_max` when the
/// annulus is unbounded.
pub fn energy_grid(h_s: f64, h_max_cap: f64, n: usize) -> Vec<f64> {
    if h_s.is_finite() {
        let lo_frac = 1e-6;
        let hi_frac = 1e-8;
        let half = n / 2;
        let mut grid: Vec<f64> = log_grid(h_s * lo_frac, h_s * 0.5, half)
            .into_iter()
            .collect();
        let upper: Vec<f64> = log_grid(h_s * hi_frac, h_s * 0.5, n - half)
            .into_iter()
            .map(|d| h_s - d)
            .collect();
        grid.extend(upper);
        grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
        grid.dedup();
        grid
    } else {
        log_grid(1e-6 * h_max_cap.min(1.0), h_max_cap, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_sqrt() {
        let x = solve_bracketed(|x| x * x, Some(&|x| 2.0 * x), 0.0, 3.0, 2.0, 1e-15).unwrap();
        assert!((x - std::f64::consts::SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn grid_shapes() {
        let g = energy_grid(1.0, 1e6, 40);
        assert!(g[0] < 2e-6 && *g.last().unwrap() > 1.0 - 1e-7);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }
}
