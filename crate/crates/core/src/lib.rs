//! Closed-form rate outage probabilities for OFDMA links over Nakagami-m
//! fading channels, together with the numerical machinery they stand on.
//!
//! The crate is organized around one model: the aggregate (effective) SNR of
//! a set of allocated subcarriers is the product of the per-subcarrier SNRs,
//! each Gamma distributed, so the rate variable `Y = 1 + prod(chi_n)` is a
//! shifted product of independent non-identical Gamma random variables. Its
//! distribution is expressed through two restricted Meijer G-function
//! kernels which [`specfun`] evaluates by a pole residue series with a
//! Mellin-Barnes contour quadrature fallback.
//!
//! Modules:
//! - [`specfun`]: Gamma-family functions, `erf`, the G-function kernels and
//!   the Laplace transform of the rate variable.
//! - [`channel`]: per-subcarrier Nakagami/link parameters and construction
//!   of the product-Gamma distribution.
//! - [`outage`]: closed-form pdf/cdf of the rate variable and single-hop /
//!   multi-hop (bottleneck) rate outage probabilities.
//! - [`mcsim`]: seedable, deterministic Monte Carlo simulator used as the
//!   verification oracle for every closed form.
//! - [`ratestats`]: AMC-quantized rate pmf, exponential average rate and its
//!   normal approximation, and the erf-window probability.
//! - [`allocator`]: greedy subcarrier/power allocation with a per-user
//!   probabilistic rate-window constraint.

// frozen reference constants keep their full mpmath digits
#![allow(clippy::excessive_precision)]
// domain checks use `!(v > 0.0)` deliberately: unlike `v <= 0.0` it also
// rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod allocator;
pub mod channel;
pub mod mcsim;
pub mod outage;
pub mod ratestats;
pub mod specfun;

/// Crate-wide error type.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),
    /// Both kernel evaluation backends failed to converge.
    #[error("kernel evaluation failed; residue series: {residue}; contour quadrature: {quadrature}")]
    Evaluation {
        residue: String,
        quadrature: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
