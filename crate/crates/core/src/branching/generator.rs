//! Random typed hypergraphs realizing a reversible pair `(D, K)`.
//!
//! With normalized balance weights `p, q`, there are `⌈p_s n⌉` vertices of
//! type `s` and `⌈q_t n⌉` hyperedges of type `t`. For every type pair with
//! `d_st > 0`, `N = ⌈p_s n⌉ d_st` vertex stubs are matched to as many edge
//! stubs through a uniform permutation; stub `a` belongs to vertex
//! `a mod |V_s|` and stub `b` to edge `b mod |E_t|`. Multi-incidences are
//! kept.
//!
//! Typed file format:
//!
//! ```text
//! 4 2          <- "n m"
//! 0 t=0        <- n vertex lines "<v> t=<type>"
//! 1 t=0
//! 2 t=1
//! 3 t=1
//! 0 1 2 t=0    <- m edge lines "<vertices> t=<type>", repeats allowed
//! 2 3 3 t=1
//! ```

use std::fmt::Write as _;

use num::{BigInt, BigRational, ToPrimitive};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{HypergraphError, ParseError};
use crate::format::{content_lines, parse_header, parse_usize};
use crate::hypergraph::{Hypergraph, Typing};

use super::balance::{reversibility, BalanceSolution, Reversibility};
use super::{BranchingError, BranchingMatrices};

/// A hypergraph whose edges are vertex multisets, with a type per vertex
/// and per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedHypergraph {
    vertex_types: Vec<usize>,
    edge_types: Vec<usize>,
    /// Sorted; a vertex may repeat.
    edges: Vec<Vec<usize>>,
    /// One entry per incidence, so an edge may repeat.
    incident: Vec<Vec<usize>>,
}

impl TypedHypergraph {
    pub fn new(
        vertex_types: Vec<usize>,
        edge_types: Vec<usize>,
        mut edges: Vec<Vec<usize>>,
    ) -> Result<Self, HypergraphError> {
        let n = vertex_types.len();
        if edge_types.len() != edges.len() {
            return Err(HypergraphError::TypeLength {
                got: edge_types.len(),
                expected: edges.len(),
            });
        }
        let mut incident = vec![Vec::new(); n];
        for (idx, edge) in edges.iter_mut().enumerate() {
            edge.sort_unstable();
            for &v in edge.iter() {
                if v >= n {
                    return Err(HypergraphError::VertexOutOfRange {
                        edge: idx,
                        vertex: v,
                        num_vertices: n,
                    });
                }
                incident[v].push(idx);
            }
        }
        Ok(TypedHypergraph {
            vertex_types,
            edge_types,
            edges,
            incident,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_types.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: usize) -> &[usize] {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// Incident edges with multiplicity.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn vertex_type(&self, v: usize) -> usize {
        self.vertex_types[v]
    }

    pub fn edge_type(&self, e: usize) -> usize {
        self.edge_types[e]
    }

    pub fn vertex_types(&self) -> &[usize] {
        &self.vertex_types
    }

    pub fn edge_types(&self) -> &[usize] {
        &self.edge_types
    }

    pub fn has_multi_incidence(&self) -> bool {
        self.edges.iter().any(|e| e.windows(2).any(|w| w[0] == w[1]))
    }

    /// Drops to a plain hypergraph with typing attached; fails on a
    /// multi-incidence.
    pub fn to_hypergraph(&self) -> Result<Hypergraph, HypergraphError> {
        Hypergraph::new(self.num_vertices(), self.edges.clone())?.with_typing(Typing {
            vertex: self.vertex_types.clone(),
            edge: self.edge_types.clone(),
        })
    }

    /// Lifts a plain hypergraph with typing; untyped hypergraphs get type 0
    /// everywhere.
    pub fn from_hypergraph(h: &Hypergraph) -> Self {
        let (vt, et) = match h.typing() {
            Some(t) => (t.vertex.clone(), t.edge.clone()),
            None => (vec![0; h.num_vertices()], vec![0; h.num_edges()]),
        };
        TypedHypergraph::new(vt, et, h.edges().to_vec()).expect("hypergraph is already valid")
    }
}

/// `(|V_s|, |E_t|)` for a given `n`, or `None` unless every
/// `⌈p_s n⌉ d_st = ⌈q_t n⌉ k_ts`.
pub fn feasible_sizes(
    b: &BranchingMatrices,
    sol: &BalanceSolution,
    n: usize,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let nn = BigRational::from_integer(BigInt::from(n));
    let ceil = |x: &BigRational| (x * &nn).ceil().to_integer().to_usize();
    let vs = sol.p.iter().map(ceil).collect::<Option<Vec<_>>>()?;
    let es = sol.q.iter().map(ceil).collect::<Option<Vec<_>>>()?;
    for s in 0..b.num_vertex_types() {
        for t in 0..b.num_edge_types() {
            let lhs = vs[s] as u128 * b.d_entry(s, t) as u128;
            let rhs = es[t] as u128 * b.k_entry(t, s) as u128;
            if lhs != rhs {
                return None;
            }
        }
    }
    Some((vs, es))
}

/// Smallest feasible `n' >= n`. Every multiple of the common denominator
/// of `p, q` is feasible, so the search is bounded.
pub fn next_feasible_n(b: &BranchingMatrices, sol: &BalanceSolution, n: usize) -> usize {
    (n.max(1)..)
        .find(|&m| feasible_sizes(b, sol, m).is_some())
        .expect("multiples of the common denominator are feasible")
}

/// Samples `H_n`. All randomness comes from one ChaCha8 stream seeded with
/// `seed`, consumed type pair by type pair in `(s, t)` order.
pub fn generate_hn(b: &BranchingMatrices, n: usize, seed: u64) -> Result<TypedHypergraph, BranchingError> {
    let sol = match reversibility(b)? {
        Reversibility::Reversible(sol) => sol,
        Reversibility::NotReversible {
            vertex_type,
            edge_type,
        } => {
            return Err(BranchingError::NotReversible {
                vertex_type,
                edge_type,
            })
        }
    };
    let Some((vs, es)) = feasible_sizes(b, &sol, n) else {
        return Err(BranchingError::Infeasible {
            requested: n,
            next: next_feasible_n(b, &sol, n),
        });
    };
    let offsets = |sizes: &[usize]| {
        sizes
            .iter()
            .scan(0, |acc, &s| {
                let start = *acc;
                *acc += s;
                Some(start)
            })
            .collect::<Vec<_>>()
    };
    let (v_off, e_off) = (offsets(&vs), offsets(&es));
    let vertex_types: Vec<usize> = vs.iter().enumerate().flat_map(|(s, &c)| std::iter::repeat_n(s, c)).collect();
    let edge_types: Vec<usize> = es.iter().enumerate().flat_map(|(t, &c)| std::iter::repeat_n(t, c)).collect();
    let mut edges = vec![Vec::new(); edge_types.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in 0..b.num_vertex_types() {
        for t in 0..b.num_edge_types() {
            let d_st = b.d_entry(s, t) as usize;
            if d_st == 0 {
                continue;
            }
            let mut perm: Vec<usize> = (0..vs[s] * d_st).collect();
            perm.shuffle(&mut rng);
            for (a, &stub) in perm.iter().enumerate() {
                edges[e_off[t] + stub % es[t]].push(v_off[s] + a % vs[s]);
            }
        }
    }
    Ok(TypedHypergraph::new(vertex_types, edge_types, edges)?)
}

/// A place where a typed hypergraph departs from the `(D, K)` counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IncidenceDefect {
    Vertex { vertex: usize, edge_type: usize, got: usize, expected: u32 },
    Edge { edge: usize, vertex_type: usize, got: usize, expected: u32 },
    TypeOutOfRange(String),
}

/// Every type-`s` vertex has exactly `d_st` incidences with type-`t`
/// edges and every type-`t` edge exactly `k_ts` with type-`s` vertices.
pub fn verify_incidence_counts(h: &TypedHypergraph, b: &BranchingMatrices) -> Result<(), IncidenceDefect> {
    check_types(h, b).map_err(IncidenceDefect::TypeOutOfRange)?;
    let (tv, te) = (b.num_vertex_types(), b.num_edge_types());
    let mut counts = vec![0usize; te.max(tv)];
    for v in 0..h.num_vertices() {
        counts[..te].fill(0);
        for &e in h.incident_edges(v) {
            counts[h.edge_type(e)] += 1;
        }
        let s = h.vertex_type(v);
        for (t, &got) in counts[..te].iter().enumerate() {
            if got != b.d_entry(s, t) as usize {
                return Err(IncidenceDefect::Vertex { vertex: v, edge_type: t, got, expected: b.d_entry(s, t) });
            }
        }
    }
    for e in 0..h.num_edges() {
        counts[..tv].fill(0);
        for &v in h.edge(e) {
            counts[h.vertex_type(v)] += 1;
        }
        let t = h.edge_type(e);
        for (s, &got) in counts[..tv].iter().enumerate() {
            if got != b.k_entry(t, s) as usize {
                return Err(IncidenceDefect::Edge { edge: e, vertex_type: s, got, expected: b.k_entry(t, s) });
            }
        }
    }
    Ok(())
}

pub(crate) fn check_types(h: &TypedHypergraph, b: &BranchingMatrices) -> Result<(), String> {
    if let Some(v) = h.vertex_types.iter().position(|&t| t >= b.num_vertex_types()) {
        return Err(format!(
            "vertex {v} has type {} but there are {} vertex types",
            h.vertex_types[v],
            b.num_vertex_types()
        ));
    }
    if let Some(e) = h.edge_types.iter().position(|&t| t >= b.num_edge_types()) {
        return Err(format!(
            "edge {e} has type {} but there are {} edge types",
            h.edge_types[e],
            b.num_edge_types()
        ));
    }
    Ok(())
}

fn split_type(ln: usize, line: &str) -> Result<(Vec<&str>, usize), ParseError> {
    let mut toks: Vec<&str> = line.split_whitespace().collect();
    let last = toks
        .pop()
        .and_then(|t| t.strip_prefix("t="))
        .ok_or_else(|| ParseError::syntax(ln, "line must end with \"t=<type>\""))?;
    Ok((toks, parse_usize(ln, last)?))
}

pub fn parse_typed_hypergraph(text: &str) -> Result<TypedHypergraph, ParseError> {
    let mut lines = content_lines(text);
    let (n, m) = parse_header(&mut lines, "typed hypergraph")?;
    let mut vertex_types = Vec::with_capacity(n);
    for v in 0..n {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| ParseError::Truncated(format!("expected {n} vertex lines, found {v}")))?;
        let (toks, ty) = split_type(ln, line)?;
        if toks.len() != 1 || parse_usize(ln, toks[0])? != v {
            return Err(ParseError::syntax(ln, format!("expected \"{v} t=<type>\"")));
        }
        vertex_types.push(ty);
    }
    let mut edge_types = Vec::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    for idx in 0..m {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| ParseError::Truncated(format!("expected {m} edge lines, found {idx}")))?;
        let (toks, ty) = split_type(ln, line)?;
        let edge = if toks == ["-"] {
            Vec::new()
        } else {
            toks.iter().map(|t| parse_usize(ln, t)).collect::<Result<Vec<_>, _>>()?
        };
        edges.push(edge);
        edge_types.push(ty);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(ParseError::syntax(ln, "trailing content after the last edge"));
    }
    Ok(TypedHypergraph::new(vertex_types, edge_types, edges)?)
}

pub fn write_typed_hypergraph(h: &TypedHypergraph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", h.num_vertices(), h.num_edges()).unwrap();
    for (v, t) in h.vertex_types.iter().enumerate() {
        writeln!(out, "{v} t={t}").unwrap();
    }
    for (edge, t) in h.edges.iter().zip(&h.edge_types) {
        writeln!(out, "{} t={t}", crate::format::edge_line(edge)).unwrap();
    }
    out
}
