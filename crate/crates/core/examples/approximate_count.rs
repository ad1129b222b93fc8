//! Deterministic approximate counting, below and at the uniqueness threshold.
//!
//!     cargo run --release --example approximate_count

use hypercount::counting::{approx_log_partition, approx_partition, CountOptions};
use hypercount::decay::critical_activity;
use hypercount::exact::exact_partition;
use hypercount::{ActivityVector, Hypergraph, Pinning};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random hypergraph with all degrees 3 and all edges of size 5 (d = 2, k = 4),
/// from a configuration pairing that skips collisions.
fn three_regular_five_uniform(edges: usize, seed: u64) -> Hypergraph {
    let n = edges * 5 / 3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| [v; 3]).collect();
        stubs.shuffle(&mut rng);
        let es: Vec<Vec<usize>> = stubs.chunks(5).map(<[usize]>::to_vec).collect();
        if let Ok(h) = Hypergraph::new(n, es) {
            return h;
        }
    }
}

fn main() {
    let h = three_regular_five_uniform(12, 1);
    let s = h.stats();
    let lc = critical_activity(s.d, s.k);
    println!("n = {}, d = {}, k = {}, lambda_c = {lc}", h.num_vertices(), s.d, s.k);

    for lambda in [0.5 * lc, lc] {
        let z = exact_partition(&h, &ActivityVector::uniform(lambda).unwrap(), &Pinning::new())
            .unwrap()
            .partition;
        let opts = CountOptions::default();
        let r = if lambda < lc {
            approx_partition(&h, lambda, 0.01, &opts).unwrap()
        } else {
            approx_log_partition(&h, lambda, 0.05, &opts).unwrap()
        };
        println!(
            "lambda = {lambda:.3} [{}]: ln Z ~ {:.6} (exact {:.6}), depth {}, certified error {:.2e}",
            r.regime,
            r.log_estimate,
            z.ln(),
            r.depth_used,
            r.certified_error
        );
    }
}
