//! The plain-text formats: hypergraphs, pinnings, branching matrices and
//! typed hypergraphs, each parsed and written back.
//!
//!     cargo run --example formats

use hypercount::branching::{
    generate_hn, parse_branching, parse_typed_hypergraph, write_branching, write_typed_hypergraph,
};
use hypercount::format::{parse_hypergraph, parse_pinning, write_hypergraph, write_pinning};

fn main() {
    let h = parse_hypergraph("# a path of two 3-edges\n5 2\n0 1 2\n2 3 4\n").unwrap();
    print!("hypergraph:\n{}", write_hypergraph(&h));

    let pin = parse_pinning("0 1\n4 0\n").unwrap();
    pin.validate(&h).unwrap();
    print!("pinning:\n{}", write_pinning(&pin));

    let b = parse_branching(include_str!("data/star.br")).unwrap();
    print!("branching matrices:\n{}", write_branching(&b));

    let typed = generate_hn(&b, 6, 0).unwrap();
    let text = write_typed_hypergraph(&typed);
    print!("typed hypergraph:\n{text}");
    assert_eq!(parse_typed_hypergraph(&text).unwrap(), typed);
}
