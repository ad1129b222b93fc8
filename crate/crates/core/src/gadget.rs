//! Reduction from hardcore instances on graphs to hypergraph independent sets.
//!
//! Every graph vertex `v` becomes `t = ⌊(k+1)/2⌋` copies `w_{v,1..t}`, and
//! every graph edge `uv` becomes one hyperedge holding all `2t` copies of
//! `u` and `v`. An independent set of the graph with `j` vertices lifts to
//! `t^j` independent sets of the hypergraph, hence `Z_H(λ) = Z_G(tλ)`.
//!
//! An isolated graph vertex has no edge to tie its copies together, so
//! for `t >= 2` its copies get one hyperedge of their own. Without it they
//! would contribute `(1+λ)^t` instead of `1 + tλ`.

use crate::error::HypergraphError;
use crate::hypergraph::Hypergraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    pub hypergraph: Hypergraph,
    /// Copies per graph vertex.
    pub copies: usize,
}

impl Gadget {
    /// Index of copy `i` (0-based) of graph vertex `v`.
    pub fn copy_index(&self, v: usize, i: usize) -> usize {
        v * self.copies + i
    }
}

pub fn gadget_reduce(graph: &Hypergraph, k: usize) -> Result<Gadget, HypergraphError> {
    if k == 0 {
        return Err(HypergraphError::BadGadgetParameter);
    }
    if let Some((edge, e)) = graph.edges().iter().enumerate().find(|(_, e)| e.len() != 2) {
        return Err(HypergraphError::NotAGraph {
            edge,
            size: e.len(),
        });
    }
    let t = k.div_ceil(2);
    let mut edges: Vec<Vec<usize>> = graph
        .edges()
        .iter()
        .map(|e| {
            e.iter()
                .flat_map(|&v| (0..t).map(move |i| v * t + i))
                .collect()
        })
        .collect();
    if t >= 2 {
        for v in (0..graph.num_vertices()).filter(|&v| graph.degree(v) == 0) {
            edges.push((0..t).map(|i| v * t + i).collect());
        }
    }
    let hypergraph = Hypergraph::new(graph.num_vertices() * t, edges)?;
    Ok(Gadget {
        hypergraph,
        copies: t,
    })
}
