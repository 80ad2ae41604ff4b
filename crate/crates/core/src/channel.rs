//! Link and channel parameterization.
//!
//! Each subcarrier sees flat Nakagami-m fading: the envelope power
//! `H = h^2` is `Gamma(m, omega/m)` with `omega = E[H]`, so the
//! instantaneous SNR `chi = p H / (N0 B_sc)` is `Gamma(m, S)` with scale
//! `S = p omega / (m N0 B_sc)`. Aggregating an allocation set multiplies
//! the per-subcarrier SNRs into the effective SNR `chi_eff = prod chi_n`,
//! and the rate variable is `Y = 1 + chi_eff`, a shifted product of
//! independent non-identical Gamma variables. This module owns the value
//! types for all of that plus the rate/threshold conversions.

use crate::specfun::ShapeVector;
use crate::{Error, Result};

/// Per-subcarrier Nakagami and link parameters.
///
/// `m` is the fading severity (dimensionless, > 0), `omega = E[h^2]` the
/// power spread (dimensionless, > 0), `p` the transmit power allocated to
/// this subcarrier (W, >= 0), `n0` the noise PSD (W/Hz, > 0) and `b_sc`
/// the subcarrier bandwidth (Hz, > 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubcarrierChannel {
    m: f64,
    omega: f64,
    p: f64,
    n0: f64,
    b_sc: f64,
}

impl SubcarrierChannel {
    pub fn new(m: f64, omega: f64, p: f64, n0: f64, b_sc: f64) -> Result<Self> {
        fn positive(name: &str, v: f64) -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Domain(format!(
                    "subcarrier {name} must be positive and finite, got {v}"
                )))
            }
        }
        positive("m", m)?;
        positive("omega", omega)?;
        positive("n0", n0)?;
        positive("b_sc", b_sc)?;
        if !(p >= 0.0) || !p.is_finite() {
            return Err(Error::Domain(format!(
                "subcarrier power must be finite and >= 0, got {p}"
            )));
        }
        let ch = Self { m, omega, p, n0, b_sc };
        if !ch.mean_snr().is_finite() {
            return Err(Error::Domain(
                "derived mean SNR p*omega/(n0*b_sc) is not finite".into(),
            ));
        }
        Ok(ch)
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn power(&self) -> f64 {
        self.p
    }

    pub fn n0(&self) -> f64 {
        self.n0
    }

    pub fn b_sc(&self) -> f64 {
        self.b_sc
    }

    /// Mean SNR `chi_bar = p omega / (n0 b_sc)`.
    pub fn mean_snr(&self) -> f64 {
        self.p * self.omega / (self.n0 * self.b_sc)
    }

    /// Copy with a different allocated power.
    pub fn with_power(&self, p: f64) -> Result<Self> {
        Self::new(self.m, self.omega, p, self.n0, self.b_sc)
    }
}

/// The Gamma scale `S = p omega / (m n0 b_sc)` of the per-subcarrier SNR.
///
/// `chi = p H / (n0 b_sc)` with `H ~ Gamma(m, omega/m)` is `Gamma(m, S)`,
/// so `E[chi] = m S = chi_bar`.
pub fn gamma_scale(ch: &SubcarrierChannel) -> f64 {
    ch.mean_snr() / ch.m
}

/// The nonempty set of subcarriers allocated to one user on one link.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationSet {
    subcarriers: Vec<SubcarrierChannel>,
}

impl AllocationSet {
    pub fn new(subcarriers: Vec<SubcarrierChannel>) -> Result<Self> {
        if subcarriers.is_empty() {
            return Err(Error::Domain(
                "allocation set must contain at least one subcarrier".into(),
            ));
        }
        Ok(Self { subcarriers })
    }

    pub fn subcarriers(&self) -> &[SubcarrierChannel] {
        &self.subcarriers
    }

    pub fn len(&self) -> usize {
        self.subcarriers.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructor guarantees nonempty
    }

    /// The common subcarrier bandwidth, or a domain error when the set
    /// mixes bandwidths (the aggregate rate model assumes one B/N).
    pub fn uniform_b_sc(&self) -> Result<f64> {
        let b = self.subcarriers[0].b_sc;
        for ch in &self.subcarriers[1..] {
            if ch.b_sc != b {
                return Err(Error::Domain(format!(
                    "allocation mixes subcarrier bandwidths ({} Hz vs {} Hz)",
                    b, ch.b_sc
                )));
            }
        }
        Ok(b)
    }
}

/// Distribution object for the rate variable `Y = 1 + prod chi_n`:
/// the shape vector, the individual Gamma scales, and their product.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductGammaDist {
    shapes: ShapeVector,
    scales: Vec<f64>,
    scale_product: f64,
}

impl ProductGammaDist {
    pub fn from_parts(shapes: Vec<f64>, scales: Vec<f64>) -> Result<Self> {
        if shapes.len() != scales.len() {
            return Err(Error::Domain(format!(
                "{} shapes but {} scales",
                shapes.len(),
                scales.len()
            )));
        }
        for (i, &s) in scales.iter().enumerate() {
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::Domain(format!(
                    "scale[{i}] must be positive and finite, got {s}"
                )));
            }
        }
        let shapes = ShapeVector::new(shapes)?;
        let scale_product = scales.iter().product();
        Ok(Self {
            shapes,
            scales,
            scale_product,
        })
    }

    pub fn shapes(&self) -> &ShapeVector {
        &self.shapes
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn scale_product(&self) -> f64 {
        self.scale_product
    }
}

/// Build the product distribution of an allocation set, preserving
/// subcarrier order and multiplicity.
///
/// A zero-power subcarrier has no Gamma SNR model (its SNR is identically
/// zero), so any such entry is a domain error here.
pub fn build_product_dist(alloc: &AllocationSet) -> Result<ProductGammaDist> {
    for (i, ch) in alloc.subcarriers().iter().enumerate() {
        if ch.power() == 0.0 {
            return Err(Error::Domain(format!(
                "subcarrier {i} has zero power; its SNR is not Gamma distributed"
            )));
        }
    }
    let shapes: Vec<f64> = alloc.subcarriers().iter().map(|c| c.m()).collect();
    let scales: Vec<f64> = alloc.subcarriers().iter().map(gamma_scale).collect();
    ProductGammaDist::from_parts(shapes, scales)
}

/// Whole-link parameters: total bandwidth `B`, subcarrier count `N`, and
/// the noise PSD. The subcarrier bandwidth is `B/N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkConfig {
    b_total: f64,
    n_subcarriers: u32,
    n0: f64,
}

impl LinkConfig {
    pub fn new(b_total: f64, n_subcarriers: u32, n0: f64) -> Result<Self> {
        if !(b_total > 0.0) || !b_total.is_finite() {
            return Err(Error::Domain(format!(
                "total bandwidth must be positive, got {b_total}"
            )));
        }
        if n_subcarriers == 0 {
            return Err(Error::Domain("subcarrier count must be >= 1".into()));
        }
        if !(n0 > 0.0) || !n0.is_finite() {
            return Err(Error::Domain(format!(
                "noise PSD must be positive, got {n0}"
            )));
        }
        Ok(Self {
            b_total,
            n_subcarriers,
            n0,
        })
    }

    pub fn b_total(&self) -> f64 {
        self.b_total
    }

    pub fn n_subcarriers(&self) -> u32 {
        self.n_subcarriers
    }

    pub fn n0(&self) -> f64 {
        self.n0
    }

    pub fn b_sc(&self) -> f64 {
        self.b_total / self.n_subcarriers as f64
    }
}

/// Rate carried by an aggregate variable `y >= 1`: `b_sc * log2(y)` bits/s.
pub fn rate_from_y(y: f64, b_sc: f64) -> Result<f64> {
    if !(y >= 1.0) {
        return Err(Error::Domain(format!(
            "rate variable must satisfy y >= 1, got {y}"
        )));
    }
    Ok(b_sc * y.log2())
}

/// The outage threshold on `Y` for a required rate: `2^(r_min / b_sc)`.
/// Equals 1 exactly when `r_min` is 0.
pub fn rate_threshold(r_min: f64, b_sc: f64) -> Result<f64> {
    if !(r_min >= 0.0) {
        return Err(Error::Domain(format!(
            "required rate must be >= 0, got {r_min}"
        )));
    }
    if !(b_sc > 0.0) {
        return Err(Error::Domain(format!(
            "subcarrier bandwidth must be positive, got {b_sc}"
        )));
    }
    Ok((r_min / b_sc).exp2())
}
