//! Embedding hardcore graph instances into hypergraphs.
//!
//!     cargo run --example gadget

use hypercount::exact::partition_rational;
use hypercount::gadget::gadget_reduce;
use hypercount::Hypergraph;
use num::{BigInt, BigRational};

fn main() {
    // 5-cycle plus an isolated vertex
    let g = Hypergraph::new(6, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![0, 4]]).unwrap();
    let lambda = BigRational::new(BigInt::from(2), BigInt::from(7));
    for k in [2, 3, 4, 5] {
        let gadget = gadget_reduce(&g, k).unwrap();
        let t = gadget.copies;
        let h = &gadget.hypergraph;
        let zh = partition_rational(h, &lambda, 40).unwrap();
        let zg = partition_rational(&g, &(&lambda * BigInt::from(t)), 40).unwrap();
        println!(
            "k = {k}: t = {t}, {} vertices, max edge {}, Z_H(2/7) = {zh}, Z_G({}·2/7) = {zg}",
            h.num_vertices(),
            h.stats().max_edge_size,
            t
        );
        assert_eq!(zh, zg);
    }
}
