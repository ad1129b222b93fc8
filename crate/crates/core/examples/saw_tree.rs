//! Self-avoiding-walk tree of a small hypergraph, and its root marginal
//! against brute-force enumeration.
//!
//!     cargo run --example saw_tree

use hypercount::exact::exact_partition;
use hypercount::sawtree::{build_saw_tree, EdgeOrdering};
use hypercount::{ActivityVector, Hypergraph, Pinning, Spin};

fn main() {
    // two 3-edges sharing vertex 2, plus a 2-edge closing a cycle
    let h = Hypergraph::new(5, vec![vec![0, 1, 2], vec![2, 3, 4], vec![0, 4]]).unwrap();
    let act = ActivityVector::uniform(1.5).unwrap();
    let ord = EdgeOrdering::input_order(&h);

    let tree = build_saw_tree(&h, 0, &ord, &Pinning::new(), &act, None).unwrap();
    println!("{} nodes, height {}", tree.node_count(), tree.height());
    print!("{}", tree.dump());

    let exact = exact_partition(&h, &act, &Pinning::new()).unwrap();
    println!("tree marginal  {:.12}", tree.marginal());
    println!("brute force    {:.12}", exact.marginal(0));

    // pins leave the shape alone and only change the evaluation
    let mut pin = Pinning::new();
    pin.pin(3, Spin::Occupied);
    let pinned = build_saw_tree(&h, 0, &ord, &pin, &act, None).unwrap();
    let exact = exact_partition(&h, &act, &pin).unwrap();
    println!("with 3 occupied: tree {:.12}, brute force {:.12}", pinned.marginal(), exact.marginal(0));
}
