//! Special-function numerics: Gamma-family functions, `erf`, and the two
//! restricted Meijer G-function kernels behind the product-of-Gamma
//! distribution, plus the Laplace transform of the shifted product variable.
//!
//! The kernels are
//!
//! ```text
//! pdf kernel  K(x; m) = G^{M,0}_{0,M}[ x | - ; m_1 .. m_M ]
//! cdf kernel  C(x; m) = G^{M,1}_{1,M+1}[ x | 1 ; m_1 .. m_M, 0 ]
//! ```
//!
//! For a product `Z = prod Z_n` of independent `Gamma(m_n, 1)` variables,
//! `K(z)/z / prod Gamma(m_n)` is the density of `Z` and
//! `C(z) / prod Gamma(m_n)` its cdf. Two backends evaluate them: a pole
//! residue series (fast; valid when no two shapes differ by an integer) and
//! a Mellin-Barnes contour quadrature (handles coincident shapes, and the
//! fallback when the series has cancelled too many digits). Every result
//! carries an absolute error estimate and records which backend produced it.
//!
//! All functions here are pure; the module holds no mutable state.

mod gamma;
mod quadrature;
mod residue;

use crate::channel::ProductGammaDist;
use crate::{Error, Result};

pub use gamma::{erf, ln_gamma, lower_regularized_gamma};
pub use residue::perturbed_shapes;

pub(crate) use gamma::ln_gamma_unchecked;

/// Vector of Gamma shape parameters (the Nakagami fading coefficients of
/// one allocation set). Nonempty, every entry finite and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeVector(Vec<f64>);

impl ShapeVector {
    pub fn new(m: Vec<f64>) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::Domain("shape vector must be nonempty".into()));
        }
        for (i, &v) in m.iter().enumerate() {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!(
                    "shape[{i}] must be a positive finite real, got {v}"
                )));
            }
        }
        Ok(Self(m))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructor guarantees nonempty
    }

    /// `sum_n ln Gamma(m_n)`, the log of the kernel normalization constant.
    pub fn ln_gamma_product(&self) -> f64 {
        self.0.iter().map(|&m| ln_gamma_unchecked(m)).sum()
    }
}

/// Which evaluation path produced a kernel value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelBackend {
    ResidueSeries,
    ContourQuadrature,
}

/// A kernel value with its absolute error estimate and provenance.
#[derive(Debug, Clone, Copy)]
pub struct KernelResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub backend: KernelBackend,
}

/// Residue-series error small enough to skip the quadrature cross-check.
fn series_is_good(value: f64, err: f64) -> bool {
    err <= f64::max(1e-12, 1e-9 * value.abs())
}

fn dispatch(x: f64, shapes: &ShapeVector, cdf: bool, ln_scale: f64) -> Result<KernelResult> {
    let m = shapes.as_slice();
    if residue::poles_are_simple(m) {
        match residue::kernel_series(x, m, cdf, ln_scale) {
            Ok(series) if series_is_good(series.value, series.abs_error) => Ok(KernelResult {
                value: series.value,
                abs_error_estimate: series.abs_error,
                backend: KernelBackend::ResidueSeries,
            }),
            Ok(series) => {
                // heavy cancellation; see whether the contour does better
                match quadrature::kernel_quadrature(x, m, cdf, ln_scale) {
                    Ok(q) if q.abs_error < series.abs_error => Ok(KernelResult {
                        value: q.value,
                        abs_error_estimate: q.abs_error,
                        backend: KernelBackend::ContourQuadrature,
                    }),
                    _ => Ok(KernelResult {
                        value: series.value,
                        abs_error_estimate: series.abs_error,
                        backend: KernelBackend::ResidueSeries,
                    }),
                }
            }
            Err(series_diag) => match quadrature::kernel_quadrature(x, m, cdf, ln_scale) {
                Ok(q) => Ok(KernelResult {
                    value: q.value,
                    abs_error_estimate: q.abs_error,
                    backend: KernelBackend::ContourQuadrature,
                }),
                Err(quad_diag) => Err(Error::Evaluation {
                    residue: series_diag,
                    quadrature: quad_diag,
                }),
            },
        }
    } else {
        // coincident pole families: the plain series does not apply
        match quadrature::kernel_quadrature(x, m, cdf, ln_scale) {
            Ok(q) => Ok(KernelResult {
                value: q.value,
                abs_error_estimate: q.abs_error,
                backend: KernelBackend::ContourQuadrature,
            }),
            Err(quad_diag) => Err(Error::Evaluation {
                residue: "inapplicable: pole families coincide (shapes differ by an integer)"
                    .into(),
                quadrature: quad_diag,
            }),
        }
    }
}

/// `G^{M,0}_{0,M}[x | - ; m_1..m_M]`, the density kernel of a product of
/// unit-scale Gamma variables. Nonnegative; reduces to `x^m e^-x` for M = 1.
pub fn meijer_pdf_kernel(x: f64, shapes: &ShapeVector) -> Result<KernelResult> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "pdf kernel requires finite x > 0, got {x}"
        )));
    }
    if shapes.len() == 1 {
        let m = shapes.as_slice()[0];
        let value = (m * x.ln() - x).exp();
        return Ok(KernelResult {
            value,
            abs_error_estimate: 4.0 * f64::EPSILON * value,
            backend: KernelBackend::ResidueSeries,
        });
    }
    let mut r = dispatch(x, shapes, false, 0.0)?;
    // the kernel is a density (times x); clamp round-off undershoot
    if r.value < 0.0 && -r.value <= r.abs_error_estimate {
        r.value = 0.0;
    }
    Ok(r)
}

/// Pdf kernel already divided by `prod Gamma(m_n)`, computed without ever
/// materializing the normalization (stable for arbitrarily large shapes).
pub(crate) fn normalized_pdf_kernel(x: f64, shapes: &ShapeVector) -> Result<KernelResult> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "pdf kernel requires finite x > 0, got {x}"
        )));
    }
    let ln_norm = shapes.ln_gamma_product();
    if shapes.len() == 1 {
        let m = shapes.as_slice()[0];
        let value = (m * x.ln() - x - ln_norm).exp();
        return Ok(KernelResult {
            value,
            abs_error_estimate: 4.0 * f64::EPSILON * value,
            backend: KernelBackend::ResidueSeries,
        });
    }
    let mut r = dispatch(x, shapes, false, ln_norm)?;
    if r.value < 0.0 && -r.value <= r.abs_error_estimate {
        r.value = 0.0;
    }
    Ok(r)
}

/// Cdf kernel already divided by `prod Gamma(m_n)`: a proper cdf in [0, 1].
pub(crate) fn normalized_cdf_kernel(x: f64, shapes: &ShapeVector) -> Result<KernelResult> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!(
            "cdf kernel requires x >= 0, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(KernelResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            backend: KernelBackend::ResidueSeries,
        });
    }
    if x.is_infinite() {
        return Ok(KernelResult {
            value: 1.0,
            abs_error_estimate: 4.0 * f64::EPSILON,
            backend: KernelBackend::ResidueSeries,
        });
    }
    if shapes.len() == 1 {
        let m = shapes.as_slice()[0];
        let value = lower_regularized_gamma(m, x)?;
        return Ok(KernelResult {
            value,
            abs_error_estimate: 1e-13,
            backend: KernelBackend::ResidueSeries,
        });
    }
    let mut r = dispatch(x, shapes, true, shapes.ln_gamma_product())?;
    r.value = r.value.clamp(0.0, 1.0);
    Ok(r)
}

/// `G^{M,1}_{1,M+1}[x | 1 ; m_1..m_M, 0]`, the (unnormalized) cdf kernel.
/// Nondecreasing in x from 0 to `prod Gamma(m_n)`; reduces to the lower
/// incomplete gamma `gamma(m, x)` for M = 1.
pub fn meijer_cdf_kernel(x: f64, shapes: &ShapeVector) -> Result<KernelResult> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!(
            "cdf kernel requires x >= 0, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(KernelResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            backend: KernelBackend::ResidueSeries,
        });
    }
    let norm = shapes.ln_gamma_product().exp();
    if x.is_infinite() {
        return Ok(KernelResult {
            value: norm,
            abs_error_estimate: 4.0 * f64::EPSILON * norm,
            backend: KernelBackend::ResidueSeries,
        });
    }
    if shapes.len() == 1 {
        let m = shapes.as_slice()[0];
        let p = lower_regularized_gamma(m, x)?;
        let value = p * norm;
        return Ok(KernelResult {
            value,
            abs_error_estimate: 1e-13 * norm,
            backend: KernelBackend::ResidueSeries,
        });
    }
    let mut r = dispatch(x, shapes, true, 0.0)?;
    r.value = r.value.clamp(0.0, norm);
    Ok(r)
}

/// Force a single backend; used by verification suites to cross-check the
/// two evaluation paths against each other.
pub fn kernel_via_backend(
    x: f64,
    shapes: &ShapeVector,
    cdf: bool,
    backend: KernelBackend,
) -> Result<KernelResult> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("kernel requires finite x > 0, got {x}")));
    }
    let outcome = match backend {
        KernelBackend::ResidueSeries => residue::kernel_series(x, shapes.as_slice(), cdf, 0.0),
        KernelBackend::ContourQuadrature => {
            quadrature::kernel_quadrature(x, shapes.as_slice(), cdf, 0.0)
        }
    };
    match outcome {
        Ok(o) => Ok(KernelResult {
            value: o.value,
            abs_error_estimate: o.abs_error,
            backend,
        }),
        Err(diag) => match backend {
            KernelBackend::ResidueSeries => Err(Error::Evaluation {
                residue: diag,
                quadrature: "not attempted".into(),
            }),
            KernelBackend::ContourQuadrature => Err(Error::Evaluation {
                residue: "not attempted".into(),
                quadrature: diag,
            }),
        },
    }
}

/// Laplace transform / MGF `E[exp(s Y)]` of the shifted product variable
/// `Y = 1 + prod chi_n` for `s <= 0`.
///
/// Evaluated by quadrature of `exp(s y)` against the closed-form density
/// rather than through a G-function of the transform argument itself; the
/// density path reuses the one well-tested kernel. Diverges for `s > 0`
/// whenever more than one subcarrier is aggregated, so positive `s` is a
/// domain error.
pub fn laplace_y(s: f64, dist: &ProductGammaDist) -> Result<f64> {
    if s > 0.0 || s.is_nan() {
        return Err(Error::Domain(format!(
            "laplace_y requires s <= 0 (E[exp(sY)] diverges otherwise), got {s}"
        )));
    }
    if s == 0.0 {
        return Ok(1.0);
    }
    let shapes = dist.shapes();
    let scale = dist.scale_product();
    let m0 = shapes
        .as_slice()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);

    let failure: std::cell::RefCell<Option<Error>> = std::cell::RefCell::new(None);
    // integrand over the kernel argument z = (y - 1)/scale, with the kernel
    // already normalized by prod Gamma(m_n):
    //   E[exp(sY)] = e^s * int_0^inf exp(s*scale*z) K(z)/z dz
    let mut g = |z: f64| -> f64 {
        if z <= 0.0 {
            return 0.0;
        }
        match normalized_pdf_kernel(z, shapes) {
            Ok(k) => (s * scale * z).exp() * k.value / z,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };

    // [0, 1]: substitute z = w^(1/m0) to flatten the z^(m0-1) edge. For a
    // unique minimal shape the substituted integrand tends to the finite
    // limit c0/m0 at w = 0 (c0 the leading kernel coefficient); tied minimal
    // shapes add a log factor, probed just off the endpoint instead.
    let min_is_unique = shapes
        .as_slice()
        .iter()
        .filter(|&&v| (v - m0).abs() < 1e-12)
        .count()
        == 1;
    let limit0 = if min_is_unique {
        let ln_c0: f64 = shapes
            .as_slice()
            .iter()
            .filter(|&&v| (v - m0).abs() >= 1e-12)
            .map(|&v| ln_gamma_unchecked(v - m0))
            .sum::<f64>()
            - shapes.ln_gamma_product();
        ln_c0.exp() / m0
    } else {
        f64::NAN // filled lazily below
    };
    let mut left = |w: f64| -> f64 {
        if w == 0.0 && min_is_unique {
            return limit0;
        }
        let w = w.max(1e-290);
        let z = w.powf(1.0 / m0);
        if z == 0.0 {
            return 0.0;
        }
        g(z) * z / (m0 * w)
    };
    let left_scale = if min_is_unique { limit0.abs() } else { left(1e-6).abs() };
    let mut total = adaptive_simpson(&mut left, 0.0, 1.0, 1e-11 * (1.0 + left_scale), 30);

    // [1, inf): doubling segments until the survival bound kills the tail
    let mut a = 1.0_f64;
    loop {
        let b = a * 2.0;
        total += adaptive_simpson(&mut g, a, b, 1e-12 * total.abs().max(1e-300), 30);
        let survival = match normalized_cdf_kernel(b, shapes) {
            Ok(c) => (1.0 - c.value).max(0.0),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        };
        let tail_bound = (s * scale * b).exp() * survival;
        if tail_bound < 1e-13 * total.abs() || b > 1e12 {
            break;
        }
        a = b;
    }
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let value = (s + total.ln()).exp();
    // the transform of a distribution on [1, inf) lies in (0, e^s]
    Ok(value.min(s.exp()))
}

/// Plain adaptive Simpson; tolerances split across bisections.
fn adaptive_simpson(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    simpson_step(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, depth)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &mut impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1)
    }
}
