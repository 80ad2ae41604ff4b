//! Residue-series backend for the restricted Meijer G-function kernels.
//!
//! Both kernels are Mellin-Barnes integrals whose integrand has one family
//! of poles per shape parameter, at `s = -(m_j + k)` for `k = 0, 1, ...`.
//! Closing the contour to the left turns the integral into
//!
//! ```text
//! pdf:  sum_j sum_k  (-1)^k / k! * prod_{n != j} Gamma(m_n - m_j - k) * x^(m_j + k)
//! cdf:  same terms, each divided by (m_j + k)
//! ```
//!
//! valid when the shifted poles are pairwise distinct, i.e. no two shapes
//! differ by an integer. The series converges for every `x > 0` (the terms
//! decay like a reciprocal power of `(k!)^(M-1)`), but for large `x` the
//! partial sums cancel heavily; the returned error estimate tracks the
//! largest intermediate magnitude so the dispatcher can fall back to
//! quadrature when too many digits have been lost.

use super::gamma::ln_gamma_signed_shifted;

/// Hard cap on series terms per pole family before giving up.
const MAX_TERMS_PER_POLE: usize = 500;
/// Stop a pole family after this many consecutive negligible terms.
const CONSECUTIVE_SMALL: usize = 3;
const REL_TERM_TOL: f64 = 1e-14;

/// Two shapes closer than this (mod 1) make the pole families collide.
pub(crate) const POLE_SEPARATION_TOL: f64 = 1e-9;

/// True when all pairwise shape differences stay away from the integers,
/// so every pole of the integrand is simple.
pub(crate) fn poles_are_simple(shapes: &[f64]) -> bool {
    for (i, &a) in shapes.iter().enumerate() {
        for &b in &shapes[i + 1..] {
            let d = a - b;
            if (d - d.round()).abs() < POLE_SEPARATION_TOL {
                return false;
            }
        }
    }
    true
}

pub(crate) struct SeriesOutcome {
    pub value: f64,
    pub abs_error: f64,
}

/// Evaluate one kernel by the residue series. `cdf_weight` adds the
/// `1/(m_j + k)` factor of the cdf kernel; the result is scaled by
/// `exp(-ln_scale)` term by term (used to fold in the `prod Gamma(m_n)`
/// normalization without overflow).
pub(crate) fn kernel_series(
    x: f64,
    shapes: &[f64],
    cdf_weight: bool,
    ln_scale: f64,
) -> Result<SeriesOutcome, String> {
    debug_assert!(x > 0.0);
    let ln_x = x.ln();
    let mut total = 0.0_f64;
    let mut peak = 0.0_f64; // largest |term| seen, for the cancellation estimate
    let mut tail = 0.0_f64; // truncation bookkeeping
    let mut n_terms = 0usize;

    for (j, &mj) in shapes.iter().enumerate() {
        let mut small_run = 0;
        let mut converged = false;
        let mut ln_k_fact = 0.0; // ln k!
        for k in 0..MAX_TERMS_PER_POLE {
            if k > 0 {
                ln_k_fact += (k as f64).ln();
            }
            let mut ln_mag = -ln_k_fact + (mj + k as f64) * ln_x - ln_scale;
            let mut sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            for (n, &mn) in shapes.iter().enumerate() {
                if n == j {
                    continue;
                }
                let (l, s) = ln_gamma_signed_shifted(mn - mj, k as f64);
                ln_mag += l;
                sign *= s;
            }
            if cdf_weight {
                ln_mag -= (mj + k as f64).ln();
            }
            let term = sign * ln_mag.exp();
            if !term.is_finite() {
                return Err(format!(
                    "non-finite term at pole family j={j}, k={k} (x={x})"
                ));
            }
            total += term;
            peak = peak.max(term.abs());
            n_terms += 1;
            // terms may grow until k ~ x before the factorial decay wins, so
            // only trust a run of negligible terms past that point
            let past_growth = k as f64 >= (x - 1.0).min(300.0);
            if past_growth && term.abs() < REL_TERM_TOL * total.abs().max(peak * 1e-16) {
                small_run += 1;
                if small_run >= CONSECUTIVE_SMALL {
                    converged = true;
                    tail = tail.max(term.abs());
                    break;
                }
            } else {
                small_run = 0;
            }
        }
        if !converged {
            return Err(format!(
                "pole family j={j} did not converge within {MAX_TERMS_PER_POLE} terms (x={x})"
            ));
        }
    }

    // Cancellation loss: f64 round-off on the largest partial magnitude,
    // accumulated over every summed term.
    let abs_error = f64::EPSILON * peak * n_terms as f64 + tail;
    Ok(SeriesOutcome {
        value: total,
        abs_error,
    })
}

/// Shapes jittered by `1e-6 * rank` to split tied pole families. Test-only
/// cross-check of the quadrature path for coincident shapes; the jitter
/// perturbs the kernel value by O(1e-6 * d/dm), which the caller must
/// tolerate.
pub fn perturbed_shapes(shapes: &[f64]) -> Vec<f64> {
    let mut out = shapes.to_vec();
    for (rank, v) in out.iter_mut().enumerate() {
        *v += 1e-6 * rank as f64;
    }
    out
}
