//! Closed-form distribution of the rate variable and the single-hop /
//! multi-hop rate outage probabilities.
//!
//! A user is in outage when its attainable rate falls at or below the
//! required minimum, i.e. when `Y <= 2^(r_min / B_sc)`. Outage is defined
//! with `<=`; `Y` is continuous, so the boundary carries no probability
//! and the choice is a convention, not a model change. Across hops the
//! bottleneck rate governs: the route is in outage when any hop is, and
//! hops fade independently, so the route outage is `1 - prod(1 - p_i)`.

use crate::channel::{build_product_dist, rate_threshold, AllocationSet, ProductGammaDist};
use crate::specfun::{normalized_cdf_kernel, normalized_pdf_kernel};
use crate::{Error, Result};

/// Ordered BS-to-SS route: one allocation set per hop.
#[derive(Debug, Clone, PartialEq)]
pub struct HopPath {
    hops: Vec<AllocationSet>,
}

impl HopPath {
    pub fn new(hops: Vec<AllocationSet>) -> Result<Self> {
        if hops.is_empty() {
            return Err(Error::Domain("a path needs at least one hop".into()));
        }
        Ok(Self { hops })
    }

    pub fn hops(&self) -> &[AllocationSet] {
        &self.hops
    }

    pub fn len(&self) -> usize {
        self.hops.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// An outage probability with its numerical error estimate; multi-hop
/// results also carry the per-hop breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct OutageResult {
    pub probability: f64,
    pub per_hop: Vec<f64>,
    pub abs_error_estimate: f64,
}

/// Density of the rate variable `Y = 1 + prod chi_n` at `y > 1`:
/// `(y-1)^-1 K((y-1)/S) / prod Gamma(m_n)` with `S` the scale product.
pub fn product_pdf(dist: &ProductGammaDist, y: f64) -> Result<f64> {
    if !(y > 1.0) {
        return Err(Error::Domain(format!(
            "product_pdf requires y > 1, got {y}"
        )));
    }
    let z = (y - 1.0) / dist.scale_product();
    let k = normalized_pdf_kernel(z, dist.shapes())?;
    Ok(k.value / (y - 1.0))
}

/// Cdf of the rate variable at `y >= 1`: `C((y-1)/S) / prod Gamma(m_n)`,
/// zero at the support edge and nondecreasing.
pub fn product_cdf(dist: &ProductGammaDist, y: f64) -> Result<f64> {
    product_cdf_with_error(dist, y).map(|(f, _)| f)
}

/// [`product_cdf`] together with the kernel's absolute error estimate,
/// already normalized.
pub fn product_cdf_with_error(dist: &ProductGammaDist, y: f64) -> Result<(f64, f64)> {
    if !(y >= 1.0) {
        return Err(Error::Domain(format!(
            "product_cdf requires y >= 1, got {y}"
        )));
    }
    if y == 1.0 {
        return Ok((0.0, 0.0));
    }
    let z = (y - 1.0) / dist.scale_product();
    let k = normalized_cdf_kernel(z, dist.shapes())?;
    Ok((k.value, k.abs_error_estimate))
}

/// Closed-form rate outage probability of one allocation set.
///
/// `r_min = 0` returns exactly zero without touching the kernels: the rate
/// variable is continuous with support above 1, so `P(Y <= 1) = 0`.
pub fn single_hop_outage(alloc: &AllocationSet, r_min: f64) -> Result<OutageResult> {
    if !(r_min >= 0.0) {
        return Err(Error::Domain(format!(
            "required rate must be >= 0, got {r_min}"
        )));
    }
    if r_min == 0.0 {
        return Ok(OutageResult {
            probability: 0.0,
            per_hop: Vec::new(),
            abs_error_estimate: 0.0,
        });
    }
    let b_sc = alloc.uniform_b_sc()?;
    let threshold = rate_threshold(r_min, b_sc)?;
    let dist = build_product_dist(alloc)?;
    let (probability, abs_error_estimate) = product_cdf_with_error(&dist, threshold)?;
    Ok(OutageResult {
        probability,
        per_hop: Vec::new(),
        abs_error_estimate,
    })
}

/// Combine independent per-hop outage probabilities into the route outage
/// `1 - prod(1 - p_i)`.
pub fn combine_hop_outages(per_hop: &[f64]) -> f64 {
    1.0 - per_hop.iter().map(|p| 1.0 - p).product::<f64>()
}

/// Bottleneck rate outage probability of a multi-hop route.
///
/// Hops are assumed independent; each hop's outage is the single-hop
/// closed form for its own allocation set.
pub fn multi_hop_outage(path: &HopPath, r_min: f64) -> Result<OutageResult> {
    let mut per_hop = Vec::with_capacity(path.len());
    let mut errs = Vec::with_capacity(path.len());
    for hop in path.hops() {
        let r = single_hop_outage(hop, r_min)?;
        per_hop.push(r.probability);
        errs.push(r.abs_error_estimate);
    }
    // keep the degenerate path bit-identical to the single-hop form
    let probability = if per_hop.len() == 1 {
        per_hop[0]
    } else {
        combine_hop_outages(&per_hop)
    };
    // first-order propagation: dP/dp_i = prod_{j != i} (1 - p_j)
    let abs_error_estimate = per_hop
        .iter()
        .zip(&errs)
        .enumerate()
        .map(|(i, (_, e))| {
            let others: f64 = per_hop
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, p)| 1.0 - p)
                .product();
            e * others
        })
        .sum();
    Ok(OutageResult {
        probability,
        per_hop,
        abs_error_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::SubcarrierChannel;

    fn ch(m: f64, omega: f64, p: f64, n0: f64, b_sc: f64) -> SubcarrierChannel {
        SubcarrierChannel::new(m, omega, p, n0, b_sc).unwrap()
    }

    fn alloc(chs: Vec<SubcarrierChannel>) -> AllocationSet {
        AllocationSet::new(chs).unwrap()
    }

    #[test]
    fn pdf_shifted_exponential() {
        // M=1, m=1, scale=1: density of 1 + Exp(1) at 2 is e^-1
        let d = ProductGammaDist::from_parts(vec![1.0], vec![1.0]).unwrap();
        let got = product_pdf(&d, 2.0).unwrap();
        assert!((got - (-1.0f64).exp()).abs() < 1e-13);
    }

    #[test]
    fn pdf_matches_gamma_density() {
        // M=1, m=2.5, scale=0.8 at y=1.5 equals the Gamma(2.5, 0.8) density
        // at x=0.5: 0.2486908393403940468 (mpmath)
        let d = ProductGammaDist::from_parts(vec![2.5], vec![0.8]).unwrap();
        let got = product_pdf(&d, 1.5).unwrap();
        assert!(
            (got - 0.2486908393403940468).abs() < 1e-12,
            "got {got}"
        );
    }

    #[test]
    fn pdf_bessel_anchor() {
        // M=2 unit shapes/scales at y=2: 2 K0(2)
        let d = ProductGammaDist::from_parts(vec![1.0, 1.0], vec![1.0, 1.0]).unwrap();
        let got = product_pdf(&d, 2.0).unwrap();
        assert!((got - 0.2277877454990668713).abs() < 1e-9, "got {got}");
    }

    #[test]
    fn cdf_edges_and_exponential() {
        let d = ProductGammaDist::from_parts(vec![0.5, 3.0], vec![1.0, 2.0]).unwrap();
        assert_eq!(product_cdf(&d, 1.0).unwrap(), 0.0);

        let e = ProductGammaDist::from_parts(vec![1.0], vec![1.0]).unwrap();
        let got = product_cdf(&e, 2.0).unwrap();
        assert!((got - (1.0 - (-1.0f64).exp())).abs() < 1e-13);
    }

    #[test]
    fn single_hop_zero_rate_is_zero() {
        let a = alloc(vec![ch(1.0, 1.0, 10.0, 1.0, 1.0)]);
        let r = single_hop_outage(&a, 0.0).unwrap();
        assert_eq!(r.probability, 0.0);
        assert!(r.per_hop.is_empty());
    }

    #[test]
    fn single_hop_rayleigh_closed_form() {
        // one subcarrier, m=1, mean SNR 10, r_min = b_sc: threshold-1 = 1,
        // P = 1 - exp(-1/10)
        let a = alloc(vec![ch(1.0, 1.0, 10.0, 1.0, 1.0)]);
        let r = single_hop_outage(&a, 1.0).unwrap();
        assert!(
            (r.probability - 0.09516258196404043).abs() < 1e-12,
            "got {}",
            r.probability
        );
    }

    #[test]
    fn single_hop_rejects_mixed_bandwidth() {
        let a = alloc(vec![
            ch(1.0, 1.0, 1.0, 1.0, 1.0),
            ch(1.0, 1.0, 1.0, 1.0, 2.0),
        ]);
        assert!(single_hop_outage(&a, 0.5).is_err());
    }

    #[test]
    fn single_hop_monotone_in_r_min() {
        let a = alloc(vec![
            ch(1.0, 1.0, 5.0, 1.0, 1.0),
            ch(2.0, 1.0, 8.0, 1.0, 1.0),
        ]);
        let mut last = 0.0;
        for i in 1..=20 {
            let p = single_hop_outage(&a, 0.3 * i as f64).unwrap().probability;
            assert!(p >= last, "outage not monotone at step {i}: {p} < {last}");
            last = p;
        }
        assert!(last > 0.0 && last <= 1.0);
    }

    #[test]
    fn combine_matches_hand_arithmetic() {
        assert!((combine_hop_outages(&[0.1, 0.2]) - 0.28).abs() < 1e-15);
        assert_eq!(combine_hop_outages(&[0.0, 0.0]), 0.0);
        assert_eq!(combine_hop_outages(&[1.0, 0.3]), 1.0);
    }

    #[test]
    fn multi_hop_degenerate_path_equals_single() {
        let a = alloc(vec![ch(1.0, 1.0, 10.0, 1.0, 1.0)]);
        let path = HopPath::new(vec![a.clone()]).unwrap();
        let single = single_hop_outage(&a, 1.0).unwrap();
        let multi = multi_hop_outage(&path, 1.0).unwrap();
        assert_eq!(multi.probability, single.probability);
        assert_eq!(multi.per_hop.len(), 1);
    }

    #[test]
    fn multi_hop_identical_hops_identity() {
        let a = alloc(vec![ch(1.3, 1.0, 6.0, 1.0, 1.0)]);
        let path = HopPath::new(vec![a.clone(), a.clone(), a.clone()]).unwrap();
        let r = multi_hop_outage(&path, 0.8).unwrap();
        let p1 = r.per_hop[0];
        let want = 1.0 - (1.0 - p1).powi(3);
        assert!((r.probability - want).abs() < 1e-12);
    }

    #[test]
    fn multi_hop_bottleneck_bounds() {
        let a = alloc(vec![ch(1.0, 1.0, 5.0, 1.0, 1.0)]);
        let b = alloc(vec![ch(2.0, 1.0, 3.0, 1.0, 1.0), ch(0.7, 2.0, 4.0, 1.0, 1.0)]);
        let path = HopPath::new(vec![a, b]).unwrap();
        let r = multi_hop_outage(&path, 1.1).unwrap();
        let max_hop = r.per_hop.iter().cloned().fold(0.0, f64::max);
        let sum_hop: f64 = r.per_hop.iter().sum();
        assert!(r.probability >= max_hop - 1e-15);
        assert!(r.probability <= sum_hop.min(1.0) + 1e-15);
    }
}
