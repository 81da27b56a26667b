//! One-dimensional quadrature rules used to cross-check normalizations.

use libm::fabs;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadratureError {
    #[error("invalid interval [{a}, {b}]")]
    Interval { a: f64, b: f64 },
    #[error("adaptive Simpson did not reach tolerance {tol:e} within depth {depth}")]
    Depth { tol: f64, depth: u32 },
    #[error("integrand is not finite at x = {0}")]
    NonFinite(f64),
}

/// Composite trapezoid rule on `n` equal panels.
pub fn trapezoid<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> Result<f64, QuadratureError> {
    if !(a.is_finite() && b.is_finite() && a < b) || n == 0 {
        return Err(QuadratureError::Interval { a, b });
    }
    let h = (b - a) / n as f64;
    let mut sum = 0.5 * (f(a) + f(b));
    for k in 1..n {
        sum += f(a + k as f64 * h);
    }
    if !sum.is_finite() {
        return Err(QuadratureError::NonFinite(a));
    }
    Ok(sum * h)
}

/// Trapezoid rule on an arbitrary strictly increasing set of nodes.
pub fn trapezoid_samples(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2).zip(y.windows(2)).map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1])).sum()
}

const MAX_DEPTH: u32 = 50;

/// Adaptive Simpson with Richardson correction.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64, QuadratureError> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(QuadratureError::Interval { a, b });
    }
    // seed on a few panels so that narrow features are not skipped
    let panels = 16;
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let lo = a + k as f64 * h;
        let hi = if k + 1 == panels { b } else { lo + h };
        let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
        if let Some(&(x, _)) = [(lo, fa), (0.5 * (lo + hi), fm), (hi, fb)].iter().find(|(_, v)| !v.is_finite()) {
            return Err(QuadratureError::NonFinite(x));
        }
        let whole = simpson(lo, hi, fa, fm, fb);
        total += refine(&f, lo, hi, fa, fm, fb, whole, tol / panels as f64, MAX_DEPTH)?;
    }
    Ok(total)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> Result<f64, QuadratureError> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    if !(flm.is_finite() && frm.is_finite()) {
        return Err(QuadratureError::NonFinite(if flm.is_finite() { rm } else { lm }));
    }
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if fabs(delta) <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(QuadratureError::Depth { tol, depth: MAX_DEPTH });
    }
    Ok(refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)? + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_integrals() {
        let f = |x: f64| libm::exp(-x * x);
        let exact = libm::sqrt(core::f64::consts::PI);
        assert!((adaptive_simpson(f, -10.0, 10.0, 1e-13).unwrap() - exact).abs() < 1e-12);
        assert!((trapezoid(f, -10.0, 10.0, 200).unwrap() - exact).abs() < 1e-13);
    }

    #[test]
    fn polynomials_are_exact_for_simpson() {
        let v = adaptive_simpson(|x| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 0.0).abs() < 1e-13);
        let nodes = [0.0, 0.5, 2.0];
        assert!((trapezoid_samples(&nodes, &nodes) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn bad_intervals() {
        assert!(trapezoid(|x| x, 1.0, 0.0, 4).is_err());
        assert!(adaptive_simpson(|x| x, 0.0, f64::NAN, 1e-6).is_err());
        assert!(matches!(adaptive_simpson(|x| 1.0 / x, -1.0, 1.0, 1e-6), Err(QuadratureError::NonFinite(_))));
    }
}
