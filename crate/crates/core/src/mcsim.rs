//! Seedable Monte Carlo oracle for the closed forms.
//!
//! Every simulation draws the per-subcarrier envelope powers frame by
//! frame, forms the effective SNR of each allocation set as the product of
//! the per-subcarrier SNRs (the same aggregation the closed forms
//! describe), and scores rates and outages against the required minimum.
//! Channels are block fading: independent across frames and subcarriers.
//!
//! Determinism contract: trials are partitioned into fixed-size blocks,
//! each driven by its own counter-derived ChaCha stream, and the reduction
//! over blocks is order-insensitive (integer outage counts, compensated
//! summation for rate totals in fixed block order). Reports are therefore
//! bit-identical for a given seed regardless of thread count or
//! scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;

use crate::channel::{gamma_scale, AllocationSet, SubcarrierChannel};
use crate::outage::HopPath;
use crate::{Error, Result};

/// Frames per RNG stream; the parallel work unit.
const BLOCK_FRAMES: u64 = 1 << 16;

/// Simulation inputs: RNG seed, trial count, and the (descriptive) frame
/// duration. The channel re-draws every frame regardless of duration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub seed: u64,
    pub n_frames: u64,
    pub frame_duration: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            n_frames: 100_000,
            frame_duration: 0.01,
        }
    }
}

impl SimConfig {
    fn validate(&self) -> Result<()> {
        if self.n_frames == 0 {
            return Err(Error::Domain("n_frames must be >= 1".into()));
        }
        if !(self.frame_duration > 0.0) {
            return Err(Error::Domain(format!(
                "frame duration must be positive, got {}",
                self.frame_duration
            )));
        }
        Ok(())
    }
}

/// Empirical outage and rate statistics of one simulation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimReport {
    pub empirical_outage: f64,
    pub mean_rate: f64,
    pub stderr_outage: f64,
    pub n_frames: u64,
}

/// One draw of the Nakagami envelope power `H = h^2 ~ Gamma(m, omega/m)`.
pub fn sample_nakagami_power<R: Rng + ?Sized>(ch: &SubcarrierChannel, rng: &mut R) -> f64 {
    let g = Gamma::new(ch.m(), ch.omega() / ch.m()).expect("channel invariants");
    g.sample(rng)
}

/// One draw of the effective SNR of an allocation set: the product of the
/// per-subcarrier SNR draws. A zero-power subcarrier contributes an exact
/// zero (its SNR is degenerate at the origin).
pub fn sample_effective_snr<R: Rng + ?Sized>(alloc: &AllocationSet, rng: &mut R) -> f64 {
    alloc
        .subcarriers()
        .iter()
        .map(|ch| {
            if ch.power() == 0.0 {
                return 0.0;
            }
            let g = Gamma::new(ch.m(), gamma_scale(ch)).expect("channel invariants");
            g.sample(rng)
        })
        .product()
}

/// Pre-built per-hop samplers plus the outage threshold in SNR units.
struct HopEngine {
    samplers: Vec<Gamma<f64>>,
    /// a zero-power subcarrier pins the whole hop product at zero
    dead: bool,
    b_sc: f64,
    /// outage iff effective SNR <= threshold; exactly 0 when r_min = 0
    snr_threshold: f64,
}

fn build_engines(hops: &[AllocationSet], r_min: f64) -> Result<Vec<HopEngine>> {
    if !(r_min >= 0.0) {
        return Err(Error::Domain(format!(
            "required rate must be >= 0, got {r_min}"
        )));
    }
    hops.iter()
        .map(|alloc| {
            let b_sc = alloc.uniform_b_sc()?;
            let dead = alloc.subcarriers().iter().any(|ch| ch.power() == 0.0);
            let samplers = if dead {
                Vec::new()
            } else {
                alloc
                    .subcarriers()
                    .iter()
                    .map(|ch| Gamma::new(ch.m(), gamma_scale(ch)).expect("channel invariants"))
                    .collect()
            };
            Ok(HopEngine {
                samplers,
                dead,
                b_sc,
                snr_threshold: (std::f64::consts::LN_2 * r_min / b_sc).exp_m1(),
            })
        })
        .collect()
}

struct BlockStats {
    outages: u64,
    rate_sum: f64,
}

fn run_block(engines: &[HopEngine], seed: u64, block: u64, frames: u64) -> BlockStats {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    let mut outages = 0u64;
    let mut rate_sum = 0.0f64;
    let mut rate_comp = 0.0f64; // Kahan compensation
    for _ in 0..frames {
        let mut bottleneck = f64::INFINITY;
        let mut in_outage = false;
        for engine in engines {
            let snr: f64 = if engine.dead {
                0.0
            } else {
                engine.samplers.iter().map(|g| g.sample(&mut rng)).product()
            };
            in_outage |= snr <= engine.snr_threshold;
            let rate = engine.b_sc * snr.ln_1p() / std::f64::consts::LN_2;
            bottleneck = bottleneck.min(rate);
        }
        if in_outage {
            outages += 1;
        }
        let y = bottleneck - rate_comp;
        let t = rate_sum + y;
        rate_comp = (t - rate_sum) - y;
        rate_sum = t;
    }
    BlockStats { outages, rate_sum }
}

fn simulate_path(hops: &[AllocationSet], r_min: f64, cfg: &SimConfig) -> Result<SimReport> {
    cfg.validate()?;
    let engines = build_engines(hops, r_min)?;
    let n = cfg.n_frames;
    let n_blocks = n.div_ceil(BLOCK_FRAMES);
    let blocks: Vec<BlockStats> = (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let frames = BLOCK_FRAMES.min(n - b * BLOCK_FRAMES);
            run_block(&engines, cfg.seed, b, frames)
        })
        .collect();
    let outages: u64 = blocks.iter().map(|b| b.outages).sum();
    let mut rate_sum = 0.0f64;
    let mut comp = 0.0f64;
    for b in &blocks {
        let y = b.rate_sum - comp;
        let t = rate_sum + y;
        comp = (t - rate_sum) - y;
        rate_sum = t;
    }
    let p = outages as f64 / n as f64;
    Ok(SimReport {
        empirical_outage: p,
        mean_rate: rate_sum / n as f64,
        stderr_outage: (p * (1.0 - p) / n as f64).sqrt(),
        n_frames: n,
    })
}

/// Simulate one allocation set: per frame, draw all subcarrier SNRs, form
/// the effective SNR, and count frames whose rate falls at or below
/// `r_min`. Deterministic for a fixed seed.
pub fn simulate_single_hop(
    alloc: &AllocationSet,
    r_min: f64,
    cfg: &SimConfig,
) -> Result<SimReport> {
    simulate_path(std::slice::from_ref(alloc), r_min, cfg)
}

/// Simulate a multi-hop route: all hops fade independently each frame, the
/// bottleneck (minimum) hop rate carries the frame, and a frame is in
/// outage when any hop's rate is at or below `r_min`. A one-hop path
/// reproduces [`simulate_single_hop`] bit for bit.
pub fn simulate_multi_hop(path: &HopPath, r_min: f64, cfg: &SimConfig) -> Result<SimReport> {
    simulate_path(path.hops(), r_min, cfg)
}

/// Empirical cdf of the rate variable `Y = 1 + chi_eff` on a sorted grid.
pub fn empirical_cdf_y(
    alloc: &AllocationSet,
    grid: &[f64],
    cfg: &SimConfig,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    for &y in grid {
        if !y.is_finite() || y < 1.0 {
            return Err(Error::Domain(format!(
                "grid values must be finite and >= 1 (support of Y), got {y}"
            )));
        }
    }
    for w in grid.windows(2) {
        if w[1] < w[0] {
            return Err(Error::Domain("grid must be sorted ascending".into()));
        }
    }
    // a zero-power subcarrier pins Y at exactly 1, below every grid point
    if alloc.subcarriers().iter().any(|ch| ch.power() == 0.0) {
        return Ok(vec![1.0; grid.len()]);
    }
    let samplers: Vec<Gamma<f64>> = alloc
        .subcarriers()
        .iter()
        .map(|ch| Gamma::new(ch.m(), gamma_scale(ch)).expect("channel invariants"))
        .collect();
    // count in SNR units: Y <= y  <=>  chi_eff <= y - 1
    let snr_grid: Vec<f64> = grid.iter().map(|y| y - 1.0).collect();
    let n = cfg.n_frames;
    let n_blocks = n.div_ceil(BLOCK_FRAMES);
    let counts: Vec<Vec<u64>> = (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(b);
            let frames = BLOCK_FRAMES.min(n - b * BLOCK_FRAMES);
            let mut counts = vec![0u64; snr_grid.len()];
            for _ in 0..frames {
                let snr: f64 = samplers.iter().map(|g| g.sample(&mut rng)).product();
                // grid is ascending: find first bin the sample fits under
                let idx = snr_grid.partition_point(|&t| t < snr);
                for c in &mut counts[idx..] {
                    *c += 1;
                }
            }
            counts
        })
        .collect();
    let mut total = vec![0u64; snr_grid.len()];
    for block in counts {
        for (t, c) in total.iter_mut().zip(block) {
            *t += c;
        }
    }
    Ok(total.iter().map(|&c| c as f64 / n as f64).collect())
}
