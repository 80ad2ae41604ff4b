//! Property tests for the channel parameterization.

use nakarate_core::channel::{
    build_product_dist, gamma_scale, rate_from_y, rate_threshold, AllocationSet,
    SubcarrierChannel,
};
use proptest::prelude::*;

proptest! {
    #[test]
    fn rate_and_threshold_round_trip(
        r_min in 0.0f64..1e7,
        b_exp in -1.0f64..7.0,
    ) {
        let b_sc = 10f64.powf(b_exp);
        let y = rate_threshold(r_min, b_sc).unwrap();
        prop_assume!(y.is_finite());
        let back = rate_from_y(y, b_sc).unwrap();
        prop_assert!(
            (back - r_min).abs() <= 1e-12 * r_min.max(1.0),
            "{r_min} -> {y} -> {back}"
        );
    }

    #[test]
    fn product_dist_mirrors_the_allocation(
        params in prop::collection::vec((0.3f64..6.0, 0.1f64..4.0, 0.0f64..20.0), 1..6),
    ) {
        let chs: Vec<SubcarrierChannel> = params
            .iter()
            .map(|&(m, omega, p)| SubcarrierChannel::new(m, omega, p, 1e-3, 1e3).unwrap())
            .collect();
        let alloc = AllocationSet::new(chs.clone()).unwrap();
        let dist = build_product_dist(&alloc).unwrap();
        prop_assert_eq!(dist.shapes().len(), chs.len());
        for ((shape, scale), ch) in dist
            .shapes()
            .as_slice()
            .iter()
            .zip(dist.scales())
            .zip(&chs)
        {
            prop_assert_eq!(*shape, ch.m());
            prop_assert_eq!(*scale, gamma_scale(ch));
        }
        let prod: f64 = dist.scales().iter().product();
        prop_assert!((dist.scale_product() - prod).abs() <= 1e-12 * prod.abs());
    }
}
