//! Hypergraph matchings as independent sets of the dual.
//!
//!     cargo run --example matchings

use hypercount::counting::{approx_partition, CountOptions};
use hypercount::exact::matching_partition;
use hypercount::format::{parse_hypergraph, write_hypergraph};

fn main() {
    let h = parse_hypergraph(include_str!("data/fano.hg")).unwrap();
    let dual = h.dualize();
    // the Fano plane is self-dual: lines through a point form a line of the dual
    print!("dual of the Fano plane:\n{}", write_hypergraph(&dual));

    let lambda = 0.2;
    let exact = matching_partition(&h, &lambda, 24).unwrap();
    let r = approx_partition(&dual, lambda, 0.01, &CountOptions::default()).unwrap();
    println!("matching polynomial at {lambda}: exact {exact:.8}, via the dual {:.8} ({})", r.estimate, r.regime);
}
