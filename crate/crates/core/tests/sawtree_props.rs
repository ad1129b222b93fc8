mod common;

use common::{random_hypergraph, random_pinning};
use hypercount::exact::exact_partition;
use hypercount::sawtree::{saw_marginal_exact_with, EdgeOrdering, DEFAULT_EXPANSION_LIMIT};
use hypercount::ActivityVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn marginal_matches_oracle_under_random_orderings_and_pins() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let h = random_hypergraph(&mut rng, 8, 8, 4);
        let pin = random_pinning(&mut rng, &h, 0.3);
        let act = ActivityVector::uniform(rng.gen_range(0.05..4.0)).unwrap();
        let exact = exact_partition(&h, &act, &pin).unwrap();
        let ord = EdgeOrdering::shuffled(&h, &mut rng);
        for v in 0..h.num_vertices() {
            let p = saw_marginal_exact_with(&h, v, &ord, &pin, &act, DEFAULT_EXPANSION_LIMIT).unwrap();
            assert!((p - exact.marginal(v)).abs() <= 1e-9, "{h:?} {pin:?} v={v}: {p} vs {}", exact.marginal(v));
        }
    }
}
