mod common;

use common::bounded_hypergraph;
use hypercount::counting::{
    approx_log_partition, approx_partition, elimination_order, CountOptions, CountingError,
    Regime, VertexOrder,
};
use hypercount::decay::critical_activity;
use hypercount::exact::{exact_partition, matching_partition};
use hypercount::sawtree::EdgeOrdering;
use hypercount::{ActivityVector, Hypergraph, Pinning};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random instance together with an activity strictly inside uniqueness.
fn subcritical(seed: u64) -> (Hypergraph, f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = rng.gen_range(1..=3);
    let k = rng.gen_range(1..=4);
    let n = rng.gen_range(1..=11);
    let h = bounded_hypergraph(&mut rng, n, d + 1, k + 1, 3 * n);
    let s = h.stats();
    let lc = critical_activity(s.d.max(1), s.k.max(1));
    let lambda = if lc.is_finite() {
        lc * rng.gen_range(0.1..0.95)
    } else {
        rng.gen_range(0.1..3.0)
    };
    let z = exact_partition(&h, &ActivityVector::uniform(lambda).unwrap(), &Pinning::new())
        .unwrap()
        .partition;
    (h, lambda, z)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn estimate_is_within_eps(seed in any::<u64>(), eps in prop::sample::select(vec![0.2, 0.05, 0.01])) {
        let (h, lambda, z) = subcritical(seed);
        let r = approx_partition(&h, lambda, eps, &CountOptions::default()).unwrap();
        prop_assert!(r.guaranteed);
        prop_assert_eq!(r.regime, Regime::Fptas);
        prop_assert!(r.certified_error <= eps);
        prop_assert!((r.estimate / z - 1.0).abs() <= eps);
        prop_assert!(r.log_lower <= z.ln() + 1e-9 && z.ln() <= r.log_upper + 1e-9);
    }

    #[test]
    fn vertex_order_does_not_matter(seed in any::<u64>()) {
        let (h, lambda, z) = subcritical(seed);
        let eps = 0.02;
        let mut results = Vec::new();
        for order in [VertexOrder::Input, VertexOrder::MinDegree] {
            let opts = CountOptions { order, ..CountOptions::default() };
            let r = approx_partition(&h, lambda, eps, &opts).unwrap();
            prop_assert!((r.estimate / z - 1.0).abs() <= eps);
            results.push(r.estimate);
        }
        let shuffled = CountOptions {
            edge_ordering: Some(EdgeOrdering::shuffled(&h, &mut ChaCha8Rng::seed_from_u64(seed ^ 1))),
            ..CountOptions::default()
        };
        let r = approx_partition(&h, lambda, eps, &shuffled).unwrap();
        prop_assert!((r.estimate / z - 1.0).abs() <= eps);
        results.push(r.estimate);
        for pair in results.windows(2) {
            prop_assert!((pair[0] / pair[1] - 1.0).abs() <= 2.0 * eps + 1e-12);
        }
    }

    #[test]
    fn elimination_order_is_a_permutation(seed in any::<u64>()) {
        let (h, _, _) = subcritical(seed);
        for order in [VertexOrder::Input, VertexOrder::MinDegree] {
            let mut o = elimination_order(&h, order);
            o.sort_unstable();
            prop_assert_eq!(o, (0..h.num_vertices()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn tighter_eps_never_uses_less_depth(seed in any::<u64>()) {
        let (h, lambda, _) = subcritical(seed);
        let mut prev = 0;
        for eps in [0.3, 0.1, 0.03, 0.01, 0.003] {
            let r = approx_partition(&h, lambda, eps, &CountOptions::default()).unwrap();
            prop_assert!(r.depth_used >= prev);
            prop_assert!(r.per_marginal_budget > 0.0);
            prev = r.depth_used;
        }
    }

    #[test]
    fn matchings_through_the_dual(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=9);
        // line graphs of degree <= 2 hypergraphs stay in uniqueness at small λ
        let h = bounded_hypergraph(&mut rng, n, 2, 3, 2 * n);
        let dual = h.dualize();
        if dual.num_vertices() == 0 {
            return Ok(());
        }
        let lambda = 0.3;
        let want = matching_partition(&h, &lambda, 24).unwrap();
        let r = approx_partition(&dual, lambda, 0.05, &CountOptions::default()).unwrap();
        prop_assert!((r.estimate / want - 1.0).abs() <= 0.05);
    }

    #[test]
    fn log_variant_is_within_eps(seed in any::<u64>()) {
        let (h, lambda, z) = subcritical(seed);
        if z.ln() <= 0.0 {
            return Ok(());
        }
        let r = approx_log_partition(&h, lambda, 0.05, &CountOptions::default()).unwrap();
        prop_assert!((r.estimate / z.ln() - 1.0).abs() <= 0.05);
        prop_assert!((r.estimate - r.log_estimate).abs() <= 1e-12);
    }
}

#[test]
fn critical_log_partition_on_degree_three_five_uniform() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut done = 0;
    while done < 25 {
        let n = rng.gen_range(5..=10);
        let h = bounded_hypergraph(&mut rng, n, 3, 5, 3 * n);
        let s = h.stats();
        if (s.d, s.k) != (2, 4) {
            continue;
        }
        done += 1;
        let z = exact_partition(&h, &ActivityVector::uniform(1.0).unwrap(), &Pinning::new())
            .unwrap()
            .partition;
        let r = approx_log_partition(&h, 1.0, 0.1, &CountOptions::default()).unwrap();
        assert_eq!(r.regime, Regime::CriticalPtas);
        assert!((r.estimate / z.ln() - 1.0).abs() <= 0.1);
    }
}

#[test]
fn invalid_eps_rejected() {
    let h = Hypergraph::new(2, vec![vec![0, 1]]).unwrap();
    for eps in [0.0, 1.0, -0.5, f64::NAN] {
        assert!(matches!(
            approx_partition(&h, 0.5, eps, &CountOptions::default()),
            Err(CountingError::InvalidEpsilon(_))
        ));
    }
}

#[test]
fn above_threshold_is_labelled() {
    // triangle of 3-edges on 4 vertices: d = 2, k = 2, λ_c = 2
    let h = Hypergraph::new(4, vec![vec![0, 1, 2], vec![1, 2, 3], vec![0, 3, 2]]).unwrap();
    let opts = CountOptions {
        max_depth: Some(12),
        ..CountOptions::default()
    };
    match approx_partition(&h, 6.0, 0.5, &opts) {
        Ok(r) => {
            assert!(!r.guaranteed);
            assert_ne!(r.regime, Regime::Fptas);
        }
        Err(e) => assert!(matches!(e, CountingError::DepthCap { .. } | CountingError::NoGuarantee { .. }), "{e}"),
    }
}
