//! Mellin-Barnes contour quadrature backend for the Meijer G-function
//! kernels.
//!
//! Both kernels are integrals of `prod_n Gamma(m_n + s) x^{-s}` (times
//! `-1/s` for the cdf kernel) along a vertical line `Re(s) = c`. The pdf
//! kernel takes `c = -min(m)/2`, which keeps every `Gamma(m_n + s)` pole
//! strictly to the left; the cdf kernel uses the same line, which also
//! separates the `s = 0` pole of the `-1/s` factor to the right. Since the
//! shapes and `x` are real the integrand is conjugate-symmetric, so only
//! `t >= 0` is integrated:
//!
//! ```text
//! K(x) = (1/pi) * Re  integral_0^T  f(c + i t) dt
//! ```
//!
//! `|Gamma(a + it)|` decays like `e^{-pi |t| / 2}` per factor, so the tail
//! is cut at the `T` where the integrand magnitude falls 16 decades below
//! its peak, and the trapezoid rule (spectrally accurate for analytic
//! decaying integrands) is refined by step halving until two successive
//! refinements agree. Repeated shapes cost nothing here, which is why this
//! backend is the default whenever pole families collide.

use num_complex::Complex64;

use super::gamma::ln_gamma_complex;
use super::residue::SeriesOutcome;

/// Refinement floor from the step-halving loop.
const REFINE_ABS_TOL: f64 = 1e-12;
const REFINE_REL_TOL: f64 = 1e-11;
const MAX_REFINEMENTS: usize = 14;
const INITIAL_PANELS: usize = 64;

struct Integrand<'a> {
    shapes: &'a [f64],
    c: f64,
    ln_x: f64,
    cdf_weight: bool,
    /// log-magnitude normalizer so exp() stays in range
    ln_peak: f64,
}

impl Integrand<'_> {
    /// Complex integrand value at height t, scaled by exp(-ln_peak).
    fn eval(&self, t: f64) -> Complex64 {
        let s = Complex64::new(self.c, t);
        let mut ln_f = Complex64::new(-self.ln_peak - self.c * self.ln_x, -t * self.ln_x);
        for &m in self.shapes {
            ln_f += ln_gamma_complex(s + m);
        }
        let f = ln_f.exp();
        if self.cdf_weight {
            -f / s
        } else {
            f
        }
    }

    /// Magnitude envelope (log scale) ignoring the oscillatory part.
    fn ln_envelope(&self, t: f64) -> f64 {
        let s = Complex64::new(self.c, t);
        let mut ln_mag = -self.c * self.ln_x;
        for &m in self.shapes {
            ln_mag += ln_gamma_complex(s + m).re;
        }
        if self.cdf_weight {
            ln_mag -= s.norm().ln();
        }
        ln_mag
    }
}

pub(crate) fn kernel_quadrature(
    x: f64,
    shapes: &[f64],
    cdf_weight: bool,
    ln_scale: f64,
) -> Result<SeriesOutcome, String> {
    debug_assert!(x > 0.0);
    let min_shape = shapes.iter().cloned().fold(f64::INFINITY, f64::min);
    let c = -min_shape / 2.0;
    let mut ig = Integrand {
        shapes,
        c,
        ln_x: x.ln(),
        cdf_weight,
        ln_peak: 0.0,
    };
    let ln_peak = ig.ln_envelope(0.0);
    ig.ln_peak = ln_peak;

    // walk out until the envelope has dropped 16 decades below the peak
    let mut t_max = 4.0;
    while ig.ln_envelope(t_max) - ln_peak > -37.0 {
        t_max *= 1.5;
        if t_max > 4000.0 {
            return Err(format!(
                "integrand tail did not decay by t = {t_max} (x = {x})"
            ));
        }
    }

    // trapezoid with step halving; also accumulate integral of |f| for the
    // round-off part of the error estimate
    let mut n = INITIAL_PANELS;
    let mut h = t_max / n as f64;
    let mut sum_re = 0.5 * (ig.eval(0.0).re + ig.eval(t_max).re);
    let mut sum_abs = 0.5 * (ig.eval(0.0).norm() + ig.eval(t_max).norm());
    for i in 1..n {
        let v = ig.eval(i as f64 * h);
        sum_re += v.re;
        sum_abs += v.norm();
    }
    let mut estimate = sum_re * h;
    let mut abs_integral = sum_abs * h;
    let mut last_diff = f64::INFINITY;
    let mut converged = false;
    for _ in 0..MAX_REFINEMENTS {
        // midpoints of the current grid
        let mut mid_re = 0.0;
        let mut mid_abs = 0.0;
        for i in 0..n {
            let v = ig.eval((i as f64 + 0.5) * h);
            mid_re += v.re;
            mid_abs += v.norm();
        }
        let refined = 0.5 * estimate + 0.5 * h * mid_re;
        abs_integral = 0.5 * abs_integral + 0.5 * h * mid_abs;
        last_diff = (refined - estimate).abs();
        estimate = refined;
        n *= 2;
        h *= 0.5;
        if last_diff < REFINE_ABS_TOL + REFINE_REL_TOL * estimate.abs() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(format!(
            "trapezoid refinement stalled at diff {last_diff:.3e} after {MAX_REFINEMENTS} halvings (x = {x})"
        ));
    }

    let scale = (ln_peak - ln_scale).exp() / std::f64::consts::PI;
    let value = estimate * scale;
    // successive-refinement difference plus round-off on the total mass moved
    let abs_error = (last_diff + f64::EPSILON * abs_integral * (n as f64).sqrt() + 1e-16) * scale;
    Ok(SeriesOutcome { value, abs_error })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m1_quadrature_matches_closed_form() {
        for &(x, m) in &[(0.5, 1.3), (2.0, 0.4), (7.0, 2.2), (1.0, 1.0)] {
            let got = kernel_quadrature(x, &[m], false, 0.0).unwrap();
            let want = (m * x.ln() - x).exp();
            assert!(
                (got.value - want).abs() < 1e-10 * want.max(1.0),
                "x={x}, m={m}: {} vs {want} (err est {})",
                got.value,
                got.abs_error
            );
        }
    }

    #[test]
    fn coincident_shapes_bessel_anchor() {
        // G^{2,0}_{0,2}[x | 1,1] = x * 2 K0(2 sqrt x); at x = 1 this is
        // 2 K0(2) = 0.2277877454990668713 (mpmath quadrature anchor).
        let got = kernel_quadrature(1.0, &[1.0, 1.0], false, 0.0).unwrap();
        assert!(
            (got.value - 0.2277877454990668713).abs() < 1e-10,
            "got {} err {}",
            got.value,
            got.abs_error
        );
    }

    #[test]
    fn cdf_weight_bessel_anchor() {
        // G^{2,1}_{1,3}[1 | 1; 1,1,0] = 1 - 2 K1(2) = 0.7202682363669551454
        let got = kernel_quadrature(1.0, &[1.0, 1.0], true, 0.0).unwrap();
        assert!(
            (got.value - 0.7202682363669551454).abs() < 1e-10,
            "got {} err {}",
            got.value,
            got.abs_error
        );
    }
}
