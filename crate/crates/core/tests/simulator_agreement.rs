//! Closed forms against the Monte Carlo simulator, and the sampling-level
//! moment checks that anchor the channel parameterization.

use nakarate_core::channel::{gamma_scale, AllocationSet, SubcarrierChannel};
use nakarate_core::mcsim::{
    sample_nakagami_power, simulate_multi_hop, simulate_single_hop, SimConfig,
};
use nakarate_core::outage::{multi_hop_outage, single_hop_outage, HopPath};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ch(m: f64, omega: f64, p: f64) -> SubcarrierChannel {
    SubcarrierChannel::new(m, omega, p, 1.0, 1.0).unwrap()
}

#[test]
fn snr_mean_matches_shape_times_scale() {
    // E[chi] = m * gamma_scale within 4 standard errors, 10^6 draws
    let cases = [
        ch(1.0, 1.0, 1.0),
        ch(0.5, 2.0, 1.0),
        ch(2.5, 0.7, 3.0),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(2718);
    for c in cases {
        let scale = gamma_scale(&c);
        let n = 1_000_000;
        let mut sum = 0.0;
        let mut sum2 = 0.0;
        for _ in 0..n {
            let chi = c.power() * sample_nakagami_power(&c, &mut rng) / (c.n0() * c.b_sc());
            sum += chi;
            sum2 += chi * chi;
        }
        let mean = sum / n as f64;
        let var = sum2 / n as f64 - mean * mean;
        let se = (var / n as f64).sqrt();
        let want = c.m() * scale;
        assert!(
            (mean - want).abs() <= 4.0 * se,
            "m={}, E[chi] {mean} vs m*S {want} (se {se})",
            c.m()
        );
    }
}

#[test]
fn gamma_scale_monte_carlo_oracle() {
    // S = chi_bar / m: mean of chi/m over 10^6 draws approaches S = 4 for
    // the (m=0.5, omega=2, p=1, n0=1e-3, b_sc=1e3) channel
    let c = SubcarrierChannel::new(0.5, 2.0, 1.0, 1e-3, 1e3).unwrap();
    assert!((gamma_scale(&c) - 4.0).abs() < 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 1_000_000;
    let mut sum = 0.0;
    for _ in 0..n {
        let chi = c.power() * sample_nakagami_power(&c, &mut rng) / (c.n0() * c.b_sc());
        sum += chi / c.m();
    }
    let mean = sum / n as f64;
    // Var[chi/m] = S^2 / m = 32; SE = sqrt(32/n)
    let se = (32.0f64 / n as f64).sqrt();
    assert!((mean - 4.0).abs() <= 4.0 * se, "mean chi/m = {mean}");
}

#[test]
fn single_hop_closed_form_vs_monte_carlo_mixed_orders() {
    // quick agreement sweep; the full 20-configuration suite lives in the
    // acceptance tests
    let configs: Vec<(AllocationSet, f64)> = vec![
        (
            AllocationSet::new(vec![ch(1.0, 1.0, 10.0)]).unwrap(),
            1.0,
        ),
        (
            AllocationSet::new(vec![ch(1.0, 1.0, 5.0), ch(2.0, 1.0, 8.0)]).unwrap(),
            2.0,
        ),
        (
            AllocationSet::new(vec![
                ch(0.5, 1.0, 6.0),
                ch(1.7, 1.5, 4.0),
                ch(2.5, 0.8, 9.0),
            ])
            .unwrap(),
            3.4,
        ),
    ];
    for (alloc, r_min) in configs {
        let closed = single_hop_outage(&alloc, r_min).unwrap();
        let cfg = SimConfig { seed: 1234, n_frames: 400_000, ..Default::default() };
        let sim = simulate_single_hop(&alloc, r_min, &cfg).unwrap();
        let tol = 4.0 * sim.stderr_outage + closed.abs_error_estimate + 1e-9;
        assert!(
            (closed.probability - sim.empirical_outage).abs() <= tol,
            "M={}: closed {} vs empirical {} (stderr {})",
            alloc.len(),
            closed.probability,
            sim.empirical_outage,
            sim.stderr_outage
        );
    }
}

#[test]
fn multi_hop_closed_form_vs_monte_carlo() {
    let hop1 = AllocationSet::new(vec![ch(1.0, 1.0, 7.0), ch(1.7, 0.9, 5.0)]).unwrap();
    let hop2 = AllocationSet::new(vec![ch(2.5, 1.2, 6.0)]).unwrap();
    let hop3 = AllocationSet::new(vec![ch(0.5, 1.0, 9.0), ch(1.0, 2.0, 3.0)]).unwrap();
    let path = HopPath::new(vec![hop1, hop2, hop3]).unwrap();
    let r_min = 1.4;
    let closed = multi_hop_outage(&path, r_min).unwrap();
    let cfg = SimConfig { seed: 97, n_frames: 400_000, ..Default::default() };
    let sim = simulate_multi_hop(&path, r_min, &cfg).unwrap();
    let tol = 4.0 * sim.stderr_outage + closed.abs_error_estimate + 1e-9;
    assert!(
        (closed.probability - sim.empirical_outage).abs() <= tol,
        "closed {} vs empirical {}",
        closed.probability,
        sim.empirical_outage
    );
    // per-hop independence identity on the closed side
    let recombined = 1.0 - closed.per_hop.iter().map(|p| 1.0 - p).product::<f64>();
    assert!((closed.probability - recombined).abs() < 1e-12);
}

#[test]
fn outage_monotone_in_power_omega_and_bandwidth() {
    // outage falls when any of p, omega rises, or when b_sc rises at fixed
    // absolute r_min (wider subcarriers lower the threshold exponent)
    let base = single_hop_outage(
        &AllocationSet::new(vec![SubcarrierChannel::new(1.3, 1.0, 5.0, 1e-3, 1e3).unwrap()])
            .unwrap(),
        2e3,
    )
    .unwrap()
    .probability;
    let more_power = single_hop_outage(
        &AllocationSet::new(vec![SubcarrierChannel::new(1.3, 1.0, 8.0, 1e-3, 1e3).unwrap()])
            .unwrap(),
        2e3,
    )
    .unwrap()
    .probability;
    let more_omega = single_hop_outage(
        &AllocationSet::new(vec![SubcarrierChannel::new(1.3, 1.6, 5.0, 1e-3, 1e3).unwrap()])
            .unwrap(),
        2e3,
    )
    .unwrap()
    .probability;
    let more_bandwidth = single_hop_outage(
        &AllocationSet::new(vec![SubcarrierChannel::new(1.3, 1.0, 5.0, 1e-3, 4e3).unwrap()])
            .unwrap(),
        2e3,
    )
    .unwrap()
    .probability;
    assert!(more_power < base, "{more_power} !< {base}");
    assert!(more_omega < base, "{more_omega} !< {base}");
    assert!(more_bandwidth < base, "{more_bandwidth} !< {base}");
}
