//! Rate statistics under adaptive modulation and coding (AMC).
//!
//! AMC quantizes the per-frame rate: the effective SNR falls into one of
//! seven regions (plus a below-threshold region carrying zero rate), each
//! mapped to a fixed number of information bits per symbol. Per-frame rates
//! are i.i.d. across frames, so the exponential average over a window of
//! `T` frames is a weighted sum of i.i.d. draws and, for large `t`,
//! approximately normal. The probability that the average sits inside the
//! user's rate window `[r_min, rho r_min]` then reduces to two error
//! functions; that probability is the QoS constraint of the allocator.
//!
//! Units: thresholds compare against the *linear* effective SNR (the
//! built-in table is specified in dB and converted on construction, since
//! values like 6.4..24.4 are only physically plausible in dB; a linear
//! constructor exists for sensitivity checks). Per-symbol bits are scaled
//! by the subcarrier bandwidth to keep rates in bits/s.

use crate::channel::{build_product_dist, AllocationSet};
use crate::outage::product_cdf_with_error;
use crate::specfun::erf;
use crate::{Error, Result};

/// Number of non-zero-rate AMC regions.
const REGIONS: usize = 7;

/// IEEE 802.16 modulation-and-coding table: seven SNR region boundaries
/// (stored linear) and the information bits per symbol of each region.
/// Below the first threshold the link carries no data; the top region is
/// unbounded.
#[derive(Debug, Clone, PartialEq)]
pub struct AmcTable {
    thresholds_linear: Vec<f64>,
    bits: Vec<f64>,
}

impl AmcTable {
    /// Thresholds given in dB (the conventional form).
    pub fn from_db(thresholds_db: Vec<f64>, bits: Vec<f64>) -> Result<Self> {
        let linear = thresholds_db
            .iter()
            .map(|db| 10f64.powf(db / 10.0))
            .collect();
        Self::from_linear(linear, bits)
    }

    /// Thresholds already on the linear SNR axis.
    pub fn from_linear(thresholds_linear: Vec<f64>, bits: Vec<f64>) -> Result<Self> {
        if thresholds_linear.len() != REGIONS || bits.len() != REGIONS {
            return Err(Error::Domain(format!(
                "AMC table needs exactly {REGIONS} thresholds and {REGIONS} bit loads, got {} and {}",
                thresholds_linear.len(),
                bits.len()
            )));
        }
        for w in thresholds_linear.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Domain(
                    "AMC thresholds must be strictly ascending".into(),
                ));
            }
        }
        for w in bits.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Domain(
                    "AMC bit loads must be strictly ascending".into(),
                ));
            }
        }
        if !(thresholds_linear[0] > 0.0) || !(bits[0] > 0.0) {
            return Err(Error::Domain(
                "AMC thresholds and bit loads must be positive".into(),
            ));
        }
        Ok(Self {
            thresholds_linear,
            bits,
        })
    }

    /// Threshold boundaries on the linear SNR axis, ascending.
    pub fn thresholds_linear(&self) -> &[f64] {
        &self.thresholds_linear
    }

    /// Information bits per symbol for each region.
    pub fn bits(&self) -> &[f64] {
        &self.bits
    }
}

impl Default for AmcTable {
    /// BPSK(1/2) through 64-QAM(3/4) with the usual required-SNR points,
    /// interpreted in dB.
    fn default() -> Self {
        Self::from_db(
            vec![6.4, 9.4, 11.2, 16.4, 18.2, 22.7, 24.4],
            vec![0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 4.5],
        )
        .expect("built-in table is valid")
    }
}

/// Discrete distribution of the AMC-quantized per-frame rate. The first
/// support point is the zero-rate region.
#[derive(Debug, Clone, PartialEq)]
pub struct RatePmf {
    support: Vec<f64>,
    probs: Vec<f64>,
}

impl RatePmf {
    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Per-frame mean rate.
    pub fn mean(&self) -> f64 {
        self.support
            .iter()
            .zip(&self.probs)
            .map(|(s, p)| s * p)
            .sum()
    }

    /// Per-frame rate variance.
    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        let m2: f64 = self
            .support
            .iter()
            .zip(&self.probs)
            .map(|(s, p)| s * s * p)
            .sum();
        (m2 - mu * mu).max(0.0)
    }
}

/// Cdf of the effective SNR `chi_eff = Y - 1` of an allocation set at
/// `y >= 0`; the product-variable cdf shifted onto the SNR axis.
pub fn effective_snr_cdf(alloc: &AllocationSet, y: f64) -> Result<f64> {
    if !(y >= 0.0) {
        return Err(Error::Domain(format!(
            "effective SNR must be >= 0, got {y}"
        )));
    }
    let dist = build_product_dist(alloc)?;
    product_cdf_with_error(&dist, 1.0 + y).map(|(f, _)| f)
}

/// Pmf of the AMC-quantized per-frame rate of an allocation set.
///
/// Region probabilities are consecutive differences of the effective-SNR
/// cdf at the table thresholds; mass below the first threshold lands on
/// rate zero, so the pmf always sums to one. Rates are `bits * B_sc` in
/// bits/s.
pub fn amc_pmf(alloc: &AllocationSet, table: &AmcTable) -> Result<RatePmf> {
    let b_sc = alloc.uniform_b_sc()?;
    let dist = build_product_dist(alloc)?;
    let mut cdf_at = Vec::with_capacity(REGIONS);
    let mut err_at = Vec::with_capacity(REGIONS);
    for &thr in table.thresholds_linear() {
        let (f, e) = product_cdf_with_error(&dist, 1.0 + thr)?;
        cdf_at.push(f);
        err_at.push(e);
    }
    let mut support = Vec::with_capacity(REGIONS + 1);
    let mut probs = Vec::with_capacity(REGIONS + 1);
    support.push(0.0);
    probs.push(cdf_at[0]);
    for i in 0..REGIONS {
        let hi = if i + 1 < REGIONS { cdf_at[i + 1] } else { 1.0 };
        let mut psi = hi - cdf_at[i];
        if psi < 0.0 {
            let budget = err_at[i] + err_at.get(i + 1).copied().unwrap_or(0.0);
            if -psi > budget + 1e-12 {
                log::warn!(
                    "AMC region {} probability {psi:.3e} negative beyond the kernel error budget {budget:.3e}; clamping",
                    i + 1
                );
            }
            psi = 0.0;
        }
        support.push(table.bits()[i] * b_sc);
        probs.push(psi);
    }
    Ok(RatePmf { support, probs })
}

/// One step of the exponential average with window `T`:
/// `(1 - 1/T) prev + r_now / T`. With the chain started at zero this
/// telescopes to `(1/T) sum_{n=0}^{t} (1-1/T)^{t-n} r(n)`.
pub fn exp_avg_update(prev: f64, r_now: f64, window: u32) -> f64 {
    assert!(window >= 1, "window must be a positive frame count");
    let inv = 1.0 / window as f64;
    (1.0 - inv) * prev + inv * r_now
}

/// Mean and standard deviation of the exponential average rate at frame
/// `t`, for i.i.d. per-frame rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AvgRateStats {
    pub mu: f64,
    pub sigma: f64,
    pub t: u64,
    pub window: u32,
}

/// Moments of the exponential average `R(t)` for a stationary per-frame
/// pmf, by the closed geometric sums of the weight sequence
/// `(1/T)(1-1/T)^(t-n)`, `n = 0..=t`:
///
/// ```text
/// mu      = mu_r (1 - q^(t+1))                       q = 1 - 1/T
/// sigma^2 = sigma_r^2 (1 - q^(2(t+1))) / (T^2 (1 - q^2))
/// ```
pub fn avg_rate_stats(pmf: &RatePmf, t: u64, window: u32) -> AvgRateStats {
    assert!(window >= 1, "window must be a positive frame count");
    let t_f = window as f64;
    let q = 1.0 - 1.0 / t_f;
    let mu_r = pmf.mean();
    let var_r = pmf.variance();
    let steps = (t + 1) as f64;
    let mu = mu_r * (1.0 - q.powf(steps));
    let sigma2 = if window == 1 {
        var_r
    } else {
        var_r * (1.0 - q.powf(2.0 * steps)) / (t_f * t_f * (1.0 - q * q))
    };
    AvgRateStats {
        mu,
        sigma: sigma2.max(0.0).sqrt(),
        t,
        window,
    }
}

/// Normal-approximation probability that the average rate lies inside the
/// window `[r_min, rho r_min]`.
///
/// When `sigma` is zero the normal degenerates to a point mass and the
/// result is the indicator of `mu` in the window.
pub fn window_probability(stats: &AvgRateStats, r_min: f64, rho: f64) -> Result<f64> {
    if !(rho >= 1.0) {
        return Err(Error::Domain(format!(
            "window factor rho must be >= 1, got {rho}"
        )));
    }
    if !(r_min >= 0.0) {
        return Err(Error::Domain(format!(
            "required rate must be >= 0, got {r_min}"
        )));
    }
    if stats.sigma == 0.0 {
        let inside = stats.mu >= r_min && stats.mu <= rho * r_min;
        return Ok(if inside { 1.0 } else { 0.0 });
    }
    let denom = std::f64::consts::SQRT_2 * stats.sigma;
    let hi = erf((rho * r_min - stats.mu) / denom);
    let lo = erf((r_min - stats.mu) / denom);
    Ok((0.5 * (hi - lo)).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::SubcarrierChannel;
    use crate::mcsim::sample_effective_snr;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ch(m: f64, omega: f64, p: f64) -> SubcarrierChannel {
        SubcarrierChannel::new(m, omega, p, 1.0, 1.0).unwrap()
    }

    fn alloc(chs: Vec<SubcarrierChannel>) -> AllocationSet {
        AllocationSet::new(chs).unwrap()
    }

    #[test]
    fn table_validation() {
        assert!(AmcTable::from_db(vec![1.0; 7], vec![0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 4.5]).is_err());
        assert!(AmcTable::from_db(vec![1., 2., 3., 4., 5., 6., 7.], vec![1.0; 7]).is_err());
        assert!(AmcTable::from_db(vec![1., 2., 3.], vec![1., 2., 3.]).is_err());
        let t = AmcTable::default();
        assert_eq!(t.bits().len(), 7);
        // 6.4 dB -> 10^0.64
        assert!((t.thresholds_linear()[0] - 10f64.powf(0.64)).abs() < 1e-12);
    }

    #[test]
    fn effective_snr_cdf_examples() {
        let a = alloc(vec![ch(1.0, 1.0, 1.0)]);
        assert_eq!(effective_snr_cdf(&a, 0.0).unwrap(), 0.0);
        let got = effective_snr_cdf(&a, 1.0).unwrap();
        assert!((got - (1.0 - (-1.0f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn pmf_point_mass_for_non_fading_channel() {
        // m huge, effective SNR pinned at 50 (between the 16.4 dB and
        // 18.2 dB thresholds): all mass on region 4 (2 bits/symbol)
        let a = alloc(vec![ch(1e6, 1.0, 50.0)]);
        let pmf = amc_pmf(&a, &AmcTable::default()).unwrap();
        assert!(pmf.probs()[4] > 0.999999, "{:?}", pmf.probs());
        assert!((pmf.support()[4] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn pmf_collapses_to_zero_rate_without_power() {
        let a = alloc(vec![ch(1.0, 1.0, 1e-9)]);
        let pmf = amc_pmf(&a, &AmcTable::default()).unwrap();
        assert!(pmf.probs()[0] > 0.999999, "{:?}", pmf.probs());
    }

    #[test]
    fn pmf_sums_to_one() {
        let cases = vec![
            alloc(vec![ch(1.0, 1.0, 20.0)]),
            alloc(vec![ch(0.7, 2.0, 30.0), ch(2.5, 1.0, 40.0)]),
            alloc(vec![ch(1.0, 1.0, 15.0), ch(1.0, 0.5, 25.0), ch(3.0, 1.0, 10.0)]),
        ];
        for a in cases {
            let pmf = amc_pmf(&a, &AmcTable::default()).unwrap();
            let sum: f64 = pmf.probs().iter().sum();
            assert!((sum - 1.0).abs() < 1e-10, "sum {sum}");
            assert!(pmf.probs().iter().all(|&p| p >= 0.0));
        }
    }

    #[test]
    fn pmf_matches_region_occupancy_frequencies() {
        let a = alloc(vec![ch(1.0, 1.0, 25.0), ch(2.0, 1.0, 35.0)]);
        let table = AmcTable::default();
        let pmf = amc_pmf(&a, &table).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4242);
        let n = 1_000_000;
        let mut counts = [0u64; 8];
        for _ in 0..n {
            let snr = sample_effective_snr(&a, &mut rng);
            let region = table
                .thresholds_linear()
                .partition_point(|&thr| thr <= snr);
            counts[region] += 1;
        }
        for (i, &c) in counts.iter().enumerate() {
            let freq = c as f64 / n as f64;
            let p = pmf.probs()[i];
            let se = (p.max(1e-12) * (1.0 - p) / n as f64).sqrt();
            assert!(
                (freq - p).abs() <= 4.0 * se + 1e-9,
                "region {i}: freq {freq} vs pmf {p}"
            );
        }
    }

    #[test]
    fn exp_avg_basic_identities() {
        // first step from the zero start: r/T
        assert_eq!(exp_avg_update(0.0, 6.0, 3), 2.0);
        // memoryless window
        assert_eq!(exp_avg_update(123.0, 7.0, 1), 7.0);
        // constant input r for t+1 steps: r (1 - (1-1/T)^(t+1))
        let (r, t_window) = (5.0, 8u32);
        let mut acc = 0.0;
        for _ in 0..=20 {
            acc = exp_avg_update(acc, r, t_window);
        }
        let want = r * (1.0 - (1.0 - 1.0 / t_window as f64).powi(21));
        assert!((acc - want).abs() < 1e-12);
    }

    #[test]
    fn exp_avg_telescopes_to_weighted_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let window = 12u32;
        let rates: Vec<f64> = (0..100).map(|_| rand::Rng::random::<f64>(&mut rng) * 4.0).collect();
        let mut rec = 0.0;
        for &r in &rates {
            rec = exp_avg_update(rec, r, window);
        }
        let q = 1.0 - 1.0 / window as f64;
        let t = rates.len() - 1;
        let explicit: f64 = rates
            .iter()
            .enumerate()
            .map(|(n, &r)| q.powi((t - n) as i32) * r / window as f64)
            .sum();
        assert!((rec - explicit).abs() < 1e-12, "{rec} vs {explicit}");
    }

    #[test]
    fn avg_stats_point_mass() {
        let pmf = RatePmf {
            support: vec![0.0, 2.0],
            probs: vec![0.0, 1.0],
        };
        let s = avg_rate_stats(&pmf, 40, 10);
        let want = 2.0 * (1.0 - 0.9f64.powi(41));
        assert!((s.mu - want).abs() < 1e-12);
        assert_eq!(s.sigma, 0.0);
    }

    #[test]
    fn avg_stats_two_point_pmf() {
        let pmf = RatePmf {
            support: vec![0.5, 1.5],
            probs: vec![0.5, 0.5],
        };
        assert!((pmf.mean() - 1.0).abs() < 1e-15);
        assert!((pmf.variance() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn avg_stats_matches_direct_summation() {
        // the closed geometric forms against brute-force summation of the
        // weight series, including deep into the stationary regime
        let pmf = RatePmf {
            support: vec![0.0, 1.0, 3.0],
            probs: vec![0.2, 0.5, 0.3],
        };
        let window = 50u32;
        let t_f = window as f64;
        let q = 1.0 - 1.0 / t_f;
        for &t in &[0u64, 7, 499, 100_000] {
            let s = avg_rate_stats(&pmf, t, window);
            let mut w_sum = 0.0;
            let mut w2_sum = 0.0;
            for j in 0..=t {
                w_sum += q.powf(j as f64) / t_f;
                w2_sum += q.powf(2.0 * j as f64) / (t_f * t_f);
            }
            let mu_direct = pmf.mean() * w_sum;
            let sigma_direct = (pmf.variance() * w2_sum).sqrt();
            assert!((s.mu - mu_direct).abs() < 1e-10 * (1.0 + mu_direct), "t={t}");
            assert!(
                (s.sigma - sigma_direct).abs() < 1e-10 * (1.0 + sigma_direct),
                "t={t}"
            );
        }
        // stationary limit of the variance sum
        let s = avg_rate_stats(&pmf, 1_000_000, window);
        let limit = pmf.variance() / (t_f * t_f * (1.0 - q * q));
        assert!((s.sigma * s.sigma - limit).abs() < 1e-12);
    }

    #[test]
    fn window_probability_one_sigma() {
        // window = mu +/- sigma in both parameterizations
        let s = AvgRateStats { mu: 2.0, sigma: 1.0, t: 100, window: 10 };
        let got = window_probability(&s, 1.0, 3.0).unwrap();
        assert!((got - 0.6826894921370859).abs() < 1e-12, "{got}");

        let r_min = 4.0;
        let rho = 1.5;
        let s = AvgRateStats {
            mu: (1.0 + rho) / 2.0 * r_min,
            sigma: (rho - 1.0) * r_min / 2.0,
            t: 100,
            window: 10,
        };
        let got = window_probability(&s, r_min, rho).unwrap();
        assert!((got - 0.6826894921370859).abs() < 1e-12, "{got}");
    }

    #[test]
    fn window_probability_edges() {
        let s = AvgRateStats { mu: 2.0, sigma: 1.0, t: 1, window: 2 };
        assert_eq!(window_probability(&s, 2.0, 1.0).unwrap(), 0.0);
        assert!(window_probability(&s, 1.0, 0.5).is_err());
        assert!(window_probability(&s, -1.0, 2.0).is_err());

        // degenerate normal: indicator of mu in the window
        let d = AvgRateStats { mu: 2.0, sigma: 0.0, t: 9, window: 3 };
        assert_eq!(window_probability(&d, 1.0, 3.0).unwrap(), 1.0);
        assert_eq!(window_probability(&d, 3.0, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn window_probability_monotone_in_rho_and_vanishes() {
        let s = AvgRateStats { mu: 5.0, sigma: 2.0, t: 50, window: 10 };
        let mut last = 0.0;
        for i in 0..30 {
            let rho = 1.0 + 0.2 * i as f64;
            let p = window_probability(&s, 2.0, rho).unwrap();
            assert!(p >= last - 1e-15 && (0.0..=1.0).contains(&p));
            last = p;
        }
        let far = window_probability(&s, 1e9, 2.0).unwrap();
        assert!(far < 1e-12);
    }
}
