//! Branching matrices of typed regular hypertrees, the detailed-balance
//! criterion for realizing them by finite hypergraphs, a random generator
//! for the realizable ones, and an empirical local-convergence tester.
//!
//! `D` is `τ_v × τ_e`: a type-`i` vertex lies in `d_ij` hyperedges of type
//! `j`. `K` is `τ_e × τ_v`: a type-`j` hyperedge holds `k_ji` vertices of
//! type `i`.
//!
//! File format:
//!
//! ```text
//! 2 2 2 2      <- "tau_v tau_e d k"
//! 1 2          <- tau_v rows of D
//! 2 1
//! 2 1          <- tau_e rows of K
//! 1 2
//! ```

mod balance;
mod generator;
mod neighborhood;

use std::collections::VecDeque;
use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::error::{HypergraphError, ParseError};
use crate::format::{content_lines, parse_usize};

pub use balance::{
    hat_marginals_from_ratios, invariant_marginal_residual, reversibility, reversibility_witness,
    stationary_distributions, BalanceSolution, Reversibility, Stationary,
};
pub use generator::{
    feasible_sizes, generate_hn, next_feasible_n, parse_typed_hypergraph, verify_incidence_counts,
    write_typed_hypergraph, IncidenceDefect, TypedHypergraph,
};
pub use neighborhood::{local_convergence_rate, tree_neighborhood, NodeKind, TypedNeighborhood};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchingMatrices {
    tau_v: usize,
    tau_e: usize,
    d: usize,
    k: usize,
    /// Row-major `τ_v × τ_e`.
    d_mat: Vec<u32>,
    /// Row-major `τ_e × τ_v`.
    k_mat: Vec<u32>,
}

/// A vertex type or a hyperedge type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeRef {
    Vertex(usize),
    Edge(usize),
}

impl fmt::Display for TypeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeRef::Vertex(i) => write!(f, "vertex type {i}"),
            TypeRef::Edge(j) => write!(f, "edge type {j}"),
        }
    }
}

/// First condition a pair of matrices fails.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BranchingViolation {
    #[error("matrix shape: {0}")]
    Shape(String),
    #[error("row {row} of D sums to {sum}, expected d+1 = {expected}")]
    DRowSum { row: usize, sum: u64, expected: u64 },
    #[error("row {row} of K sums to {sum}, expected k+1 = {expected}")]
    KRowSum { row: usize, sum: u64, expected: u64 },
    #[error("zero pattern differs at vertex type {vertex_type}, edge type {edge_type}: d = {d}, k = {k}")]
    ZeroPattern {
        vertex_type: usize,
        edge_type: usize,
        d: u32,
        k: u32,
    },
    #[error("type graph is not strongly connected: {0} is unreachable from vertex type 0")]
    Reducible(TypeRef),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BranchingError {
    #[error("invalid branching matrices: {0}")]
    Invalid(#[from] BranchingViolation),
    #[error("not reversible: detailed balance fails at vertex type {vertex_type}, edge type {edge_type}")]
    NotReversible { vertex_type: usize, edge_type: usize },
    #[error("n = {requested} does not give integral type counts; next feasible n is {next}")]
    Infeasible { requested: usize, next: usize },
    #[error("edge type {edge_type} has occupation sum {sum} >= 1")]
    Domain { edge_type: usize, sum: f64 },
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

impl BranchingMatrices {
    /// Checks shapes only; see [`validate_branching`] for the rest.
    pub fn new(
        d: usize,
        k: usize,
        d_rows: &[Vec<u32>],
        k_rows: &[Vec<u32>],
    ) -> Result<Self, BranchingViolation> {
        let tau_v = d_rows.len();
        let tau_e = k_rows.len();
        if tau_v == 0 || tau_e == 0 {
            return Err(BranchingViolation::Shape(
                "need at least one vertex type and one edge type".into(),
            ));
        }
        if let Some(i) = d_rows.iter().position(|r| r.len() != tau_e) {
            return Err(BranchingViolation::Shape(format!(
                "row {i} of D has {} entries, expected {tau_e}",
                d_rows[i].len()
            )));
        }
        if let Some(j) = k_rows.iter().position(|r| r.len() != tau_v) {
            return Err(BranchingViolation::Shape(format!(
                "row {j} of K has {} entries, expected {tau_v}",
                k_rows[j].len()
            )));
        }
        Ok(BranchingMatrices {
            tau_v,
            tau_e,
            d,
            k,
            d_mat: d_rows.concat(),
            k_mat: k_rows.concat(),
        })
    }

    /// Builds from row-major slices without allocating per row.
    pub fn from_flat(
        d: usize,
        k: usize,
        tau_v: usize,
        tau_e: usize,
        d_mat: &[u32],
        k_mat: &[u32],
    ) -> Result<Self, BranchingViolation> {
        if tau_v == 0 || tau_e == 0 || d_mat.len() != tau_v * tau_e || k_mat.len() != tau_v * tau_e {
            return Err(BranchingViolation::Shape(format!(
                "expected two {tau_v}x{tau_e} blocks, got {} and {} entries",
                d_mat.len(),
                k_mat.len()
            )));
        }
        Ok(BranchingMatrices {
            tau_v,
            tau_e,
            d,
            k,
            d_mat: d_mat.to_vec(),
            k_mat: k_mat.to_vec(),
        })
    }

    /// The single-type pair `D = [d+1]`, `K = [k+1]`.
    pub fn single_type(d: usize, k: usize) -> Self {
        BranchingMatrices {
            tau_v: 1,
            tau_e: 1,
            d,
            k,
            d_mat: vec![d as u32 + 1],
            k_mat: vec![k as u32 + 1],
        }
    }

    pub fn num_vertex_types(&self) -> usize {
        self.tau_v
    }

    pub fn num_edge_types(&self) -> usize {
        self.tau_e
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `d_ij`.
    pub fn d_entry(&self, i: usize, j: usize) -> u32 {
        self.d_mat[i * self.tau_e + j]
    }

    /// `k_ji`.
    pub fn k_entry(&self, j: usize, i: usize) -> u32 {
        self.k_mat[j * self.tau_v + i]
    }

    pub fn d_row(&self, i: usize) -> &[u32] {
        &self.d_mat[i * self.tau_e..(i + 1) * self.tau_e]
    }

    pub fn k_row(&self, j: usize) -> &[u32] {
        &self.k_mat[j * self.tau_v..(j + 1) * self.tau_v]
    }
}

/// Row sums, matching zero patterns, and connectivity of the bipartite
/// type graph, in that order.
pub fn validate_branching(b: &BranchingMatrices) -> Result<(), BranchingViolation> {
    let (tv, te) = (b.tau_v, b.tau_e);
    for i in 0..tv {
        let sum: u64 = b.d_row(i).iter().map(|&x| x as u64).sum();
        if sum != b.d as u64 + 1 {
            return Err(BranchingViolation::DRowSum {
                row: i,
                sum,
                expected: b.d as u64 + 1,
            });
        }
    }
    for j in 0..te {
        let sum: u64 = b.k_row(j).iter().map(|&x| x as u64).sum();
        if sum != b.k as u64 + 1 {
            return Err(BranchingViolation::KRowSum {
                row: j,
                sum,
                expected: b.k as u64 + 1,
            });
        }
    }
    for i in 0..tv {
        for j in 0..te {
            let (d, k) = (b.d_entry(i, j), b.k_entry(j, i));
            if (d == 0) != (k == 0) {
                return Err(BranchingViolation::ZeroPattern {
                    vertex_type: i,
                    edge_type: j,
                    d,
                    k,
                });
            }
        }
    }
    // With matching zero patterns the type graph is symmetric, so strong
    // connectivity is plain connectivity.
    let mut seen_v = vec![false; tv];
    let mut seen_e = vec![false; te];
    let mut queue = VecDeque::from([TypeRef::Vertex(0)]);
    seen_v[0] = true;
    while let Some(node) = queue.pop_front() {
        match node {
            TypeRef::Vertex(i) => {
                for j in 0..te {
                    if b.d_entry(i, j) > 0 && !seen_e[j] {
                        seen_e[j] = true;
                        queue.push_back(TypeRef::Edge(j));
                    }
                }
            }
            TypeRef::Edge(j) => {
                for i in 0..tv {
                    if b.k_entry(j, i) > 0 && !seen_v[i] {
                        seen_v[i] = true;
                        queue.push_back(TypeRef::Vertex(i));
                    }
                }
            }
        }
    }
    if let Some(i) = seen_v.iter().position(|&s| !s) {
        return Err(BranchingViolation::Reducible(TypeRef::Vertex(i)));
    }
    if let Some(j) = seen_e.iter().position(|&s| !s) {
        return Err(BranchingViolation::Reducible(TypeRef::Edge(j)));
    }
    Ok(())
}

/// `D̂ = [[1, d], [d, 1]]`, `K̂ = [[k, 1], [1, k]]`; type 0 is `+`, type 1 is `−`.
///
/// At `k = 1` both edge types are `{+, −}` pairs; see [`merged_hat_matrices`].
pub fn hat_matrices(d: usize, k: usize) -> BranchingMatrices {
    let (d, k) = (d.max(1), k.max(1));
    let (du, ku) = (d as u32, k as u32);
    BranchingMatrices {
        tau_v: 2,
        tau_e: 2,
        d,
        k,
        d_mat: vec![1, du, du, 1],
        k_mat: vec![ku, 1, 1, ku],
    }
}

/// The `k = 1` hat symmetry with its two identical edge types merged:
/// `D = [[d+1], [d+1]]`, `K = [[1, 1]]`. This is the bipartite hardcore
/// model on graphs and is reversible. Only applied on request.
pub fn merged_hat_matrices(d: usize) -> BranchingMatrices {
    let d = d.max(1);
    BranchingMatrices {
        tau_v: 2,
        tau_e: 1,
        d,
        k: 1,
        d_mat: vec![d as u32 + 1, d as u32 + 1],
        k_mat: vec![1, 1],
    }
}

pub fn parse_branching(text: &str) -> Result<BranchingMatrices, ParseError> {
    let mut lines = content_lines(text);
    let (ln, header) = lines
        .next()
        .ok_or_else(|| ParseError::Truncated("missing \"tau_v tau_e d k\" header".into()))?;
    let toks = header
        .split_whitespace()
        .map(|t| parse_usize(ln, t))
        .collect::<Result<Vec<_>, _>>()?;
    let [tau_v, tau_e, d, k] = toks[..] else {
        return Err(ParseError::syntax(ln, "header must be \"tau_v tau_e d k\""));
    };
    let mut read_rows = |count: usize, width: usize, name: &str| -> Result<Vec<Vec<u32>>, ParseError> {
        let mut rows = Vec::with_capacity(count);
        for r in 0..count {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| ParseError::Truncated(format!("{name} has {r} of {count} rows")))?;
            let row = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| ParseError::syntax(ln, format!("bad matrix entry {t:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != width {
                return Err(ParseError::syntax(
                    ln,
                    format!("row of {name} has {} entries, expected {width}", row.len()),
                ));
            }
            rows.push(row);
        }
        Ok(rows)
    };
    let d_rows = read_rows(tau_v, tau_e, "D")?;
    let k_rows = read_rows(tau_e, tau_v, "K")?;
    if let Some((ln, _)) = lines.next() {
        return Err(ParseError::syntax(ln, "trailing content after K"));
    }
    BranchingMatrices::new(d, k, &d_rows, &k_rows).map_err(|e| ParseError::syntax(ln, e.to_string()))
}

pub fn write_branching(b: &BranchingMatrices) -> String {
    let mut out = String::new();
    writeln!(out, "{} {} {} {}", b.tau_v, b.tau_e, b.d, b.k).unwrap();
    let join = |row: &[u32]| row.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
    for i in 0..b.tau_v {
        writeln!(out, "{}", join(b.d_row(i))).unwrap();
    }
    for j in 0..b.tau_e {
        writeln!(out, "{}", join(b.k_row(j))).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hat_is_valid() {
        let h = hat_matrices(2, 2);
        assert_eq!(h.d_row(0), &[1, 2]);
        assert_eq!(h.k_row(1), &[1, 2]);
        for d in 1..=6 {
            for k in 1..=6 {
                assert_eq!(validate_branching(&hat_matrices(d, k)), Ok(()));
            }
        }
        assert_eq!(hat_matrices(1, 1).d_row(0), &[1, 1]);
        assert_eq!(validate_branching(&merged_hat_matrices(3)), Ok(()));
    }

    #[test]
    fn violations() {
        assert_eq!(validate_branching(&BranchingMatrices::single_type(2, 2)), Ok(()));
        let b = BranchingMatrices::new(2, 2, &[vec![2, 0], vec![0, 3]], &[vec![3, 0], vec![0, 3]]).unwrap();
        assert!(matches!(
            validate_branching(&b),
            Err(BranchingViolation::DRowSum { row: 0, sum: 2, expected: 3 })
        ));
        let b = BranchingMatrices::new(2, 2, &[vec![3, 0], vec![0, 3]], &[vec![3, 0], vec![0, 3]]).unwrap();
        assert_eq!(
            validate_branching(&b),
            Err(BranchingViolation::Reducible(TypeRef::Vertex(1)))
        );
        let b = BranchingMatrices::new(2, 2, &[vec![1, 2], vec![2, 1]], &[vec![3, 0], vec![1, 2]]).unwrap();
        assert!(matches!(
            validate_branching(&b),
            Err(BranchingViolation::ZeroPattern { vertex_type: 1, edge_type: 0, .. })
        ));
        assert!(BranchingMatrices::new(1, 1, &[vec![1, 1]], &[vec![2]]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let b = hat_matrices(3, 2);
        let text = write_branching(&b);
        assert_eq!(text, "2 2 3 2\n1 3\n3 1\n2 1\n1 2\n");
        assert_eq!(parse_branching(&text).unwrap(), b);
        assert!(parse_branching("1 1 2 2\n3\n").is_err());
        assert!(parse_branching("1 1 2 2\n3 1\n3\n").is_err());
    }
}
