//! Typed branching matrices: reversibility, a random realization, and how
//! tree-like its neighborhoods are.
//!
//!     cargo run --release --example branching

use hypercount::branching::{
    generate_hn, hat_matrices, local_convergence_rate, next_feasible_n, parse_branching,
    reversibility, stationary_distributions, tree_neighborhood, verify_incidence_counts,
    Reversibility,
};

fn main() {
    let hat = hat_matrices(2, 4);
    match reversibility(&hat).unwrap() {
        Reversibility::NotReversible { vertex_type, edge_type } => {
            println!("hat(2, 4): not reversible, balance breaks at ({vertex_type}, {edge_type})")
        }
        Reversibility::Reversible(_) => unreachable!(),
    }
    println!("hat(2, 4) radius-1 tree: {}", tree_neighborhood(&hat, 0, 1).canonical());

    let b = parse_branching(include_str!("data/star.br")).unwrap();
    let Reversibility::Reversible(sol) = reversibility(&b).unwrap() else {
        unreachable!()
    };
    let st = stationary_distributions(&b).unwrap();
    let show = |v: &[num::BigRational]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    println!("star: p = {}, q = {}, vertex-stationary {}", show(&sol.p), show(&sol.q), show(&st.p));

    for n in [100, 1_000, 10_000, 100_000] {
        let n = next_feasible_n(&b, &sol, n);
        let h = generate_hn(&b, n, 7).unwrap();
        verify_incidence_counts(&h, &b).unwrap();
        let frac = local_convergence_rate(&h, &b, 2, 5_000, 7).unwrap();
        println!("n = {n:>6}: {} vertices, {} edges, tree-like at radius 2: {frac:?}", h.num_vertices(), h.num_edges());
    }
}
