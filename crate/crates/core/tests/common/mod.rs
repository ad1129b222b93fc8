//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use hypercount::{Hypergraph, Pinning, Spin};
use rand::seq::SliceRandom;
use rand::Rng;

/// `n` in `1..=max_n`, `m` in `0..=max_m`, edge sizes in `1..=max_edge`.
pub fn random_hypergraph<R: Rng>(rng: &mut R, max_n: usize, max_m: usize, max_edge: usize) -> Hypergraph {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(0..=max_m);
    let vertices: Vec<usize> = (0..n).collect();
    let edges = (0..m)
        .map(|_| {
            let size = rng.gen_range(1..=max_edge.min(n));
            vertices.choose_multiple(rng, size).copied().collect()
        })
        .collect();
    Hypergraph::new(n, edges).unwrap()
}

/// Hypergraph with every degree at most `max_degree` and every edge of
/// size at most `max_edge`, built by adding random edges while they fit.
pub fn bounded_hypergraph<R: Rng>(
    rng: &mut R,
    n: usize,
    max_degree: usize,
    max_edge: usize,
    attempts: usize,
) -> Hypergraph {
    let mut degree = vec![0usize; n];
    let mut edges: Vec<Vec<usize>> = Vec::new();
    for _ in 0..attempts {
        let free: Vec<usize> = (0..n).filter(|&v| degree[v] < max_degree).collect();
        if free.len() < 2 {
            break;
        }
        let size = rng.gen_range(2..=max_edge.min(free.len()));
        let mut e: Vec<usize> = free.choose_multiple(rng, size).copied().collect();
        e.sort_unstable();
        if edges.contains(&e) {
            continue;
        }
        for &v in &e {
            degree[v] += 1;
        }
        edges.push(e);
    }
    Hypergraph::new(n, edges).unwrap()
}

/// Pins each vertex with probability `p`, occupied only when that keeps
/// the pinning valid.
pub fn random_pinning<R: Rng>(rng: &mut R, h: &Hypergraph, p: f64) -> Pinning {
    let mut order: Vec<usize> = (0..h.num_vertices()).collect();
    order.shuffle(rng);
    let mut occupied_edge = vec![false; h.num_edges()];
    let mut pinning = Pinning::new();
    for v in order {
        if !rng.gen_bool(p) {
            continue;
        }
        let can_occupy = h.incident_edges(v).iter().all(|&e| !occupied_edge[e]);
        if can_occupy && rng.gen_bool(0.5) {
            for &e in h.incident_edges(v) {
                occupied_edge[e] = true;
            }
            pinning.pin(v, Spin::Occupied);
        } else {
            pinning.pin(v, Spin::Unoccupied);
        }
    }
    pinning
}

/// Proptest strategy: `n` in `1..=max_n` and up to `max_m` edges of size
/// `1..=max_edge` with distinct vertices.
pub fn hypergraph_strategy(
    max_n: usize,
    max_m: usize,
    max_edge: usize,
) -> impl proptest::strategy::Strategy<Value = Hypergraph> {
    use proptest::prelude::*;
    (1..=max_n).prop_flat_map(move |n| {
        let edge = proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 1..=max_edge.min(n));
        proptest::collection::vec(edge, 0..=max_m).prop_map(move |edges| Hypergraph::new(n, edges).unwrap())
    })
}
