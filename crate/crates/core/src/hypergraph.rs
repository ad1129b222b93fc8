//! Hypergraphs, partial configurations and activity vectors.
//!
//! Vertices are `0..n`. A hyperedge is a set of distinct vertices, stored
//! sorted. Independent sets use the packing convention: `I` is independent
//! when `|I ∩ e| <= 1` for every hyperedge `e`, so edges of size 0 or 1
//! never constrain anything.

use std::collections::BTreeMap;

use crate::error::HypergraphError;

/// Optional vertex and edge type labels carried alongside a hypergraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Typing {
    pub vertex: Vec<usize>,
    pub edge: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    num_vertices: usize,
    edges: Vec<Vec<usize>>,
    incident: Vec<Vec<usize>>,
    typing: Option<Typing>,
}

/// Degree and edge-size statistics, always recomputed from the edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stats {
    pub max_degree: usize,
    pub max_edge_size: usize,
    /// `max_degree - 1`, clamped at 0.
    pub d: usize,
    /// `max_edge_size - 1`, clamped at 0.
    pub k: usize,
}

impl Hypergraph {
    /// Builds a hypergraph, rejecting out-of-range and repeated vertices.
    /// Each edge is stored sorted; edge order is preserved.
    pub fn new(num_vertices: usize, edges: Vec<Vec<usize>>) -> Result<Self, HypergraphError> {
        let mut sorted_edges = Vec::with_capacity(edges.len());
        for (idx, mut edge) in edges.into_iter().enumerate() {
            edge.sort_unstable();
            for w in edge.windows(2) {
                if w[0] == w[1] {
                    return Err(HypergraphError::RepeatedVertex {
                        edge: idx,
                        vertex: w[0],
                    });
                }
            }
            if let Some(&v) = edge.last() {
                if v >= num_vertices {
                    return Err(HypergraphError::VertexOutOfRange {
                        edge: idx,
                        vertex: v,
                        num_vertices,
                    });
                }
            }
            sorted_edges.push(edge);
        }
        let mut incident = vec![Vec::new(); num_vertices];
        for (idx, edge) in sorted_edges.iter().enumerate() {
            for &v in edge {
                incident[v].push(idx);
            }
        }
        Ok(Hypergraph {
            num_vertices,
            edges: sorted_edges,
            incident,
            typing: None,
        })
    }

    pub fn empty(num_vertices: usize) -> Self {
        Hypergraph::new(num_vertices, Vec::new()).expect("edgeless hypergraph is valid")
    }

    /// Attaches vertex and edge types.
    pub fn with_typing(mut self, typing: Typing) -> Result<Self, HypergraphError> {
        if typing.vertex.len() != self.num_vertices {
            return Err(HypergraphError::TypeLength {
                got: typing.vertex.len(),
                expected: self.num_vertices,
            });
        }
        if typing.edge.len() != self.edges.len() {
            return Err(HypergraphError::TypeLength {
                got: typing.edge.len(),
                expected: self.edges.len(),
            });
        }
        self.typing = Some(typing);
        Ok(self)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> &[usize] {
        &self.edges[idx]
    }

    /// Indices of the edges containing `v`, in input order.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    pub fn typing(&self) -> Option<&Typing> {
        self.typing.as_ref()
    }

    pub fn stats(&self) -> Stats {
        let max_degree = self.incident.iter().map(Vec::len).max().unwrap_or(0);
        let max_edge_size = self.edges.iter().map(Vec::len).max().unwrap_or(0);
        Stats {
            max_degree,
            max_edge_size,
            d: max_degree.saturating_sub(1),
            k: max_edge_size.saturating_sub(1),
        }
    }

    /// The dual hypergraph: vertex `e*` for every edge `e`, edge `v*` for
    /// every vertex `v`, with `e* ∈ v*` iff `v ∈ e`. Types are swapped.
    pub fn dualize(&self) -> Hypergraph {
        let edges = self.incident.clone();
        let mut dual =
            Hypergraph::new(self.edges.len(), edges).expect("transposed incidence is valid");
        if let Some(t) = &self.typing {
            dual.typing = Some(Typing {
                vertex: t.edge.clone(),
                edge: t.vertex.clone(),
            });
        }
        dual
    }

    /// Whether `a` and `b` share an edge (or are equal).
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        a == b
            || self.incident[a]
                .iter()
                .any(|&e| self.edges[e].binary_search(&b).is_ok())
    }

    /// Checks the packing condition on a full vertex set.
    pub fn is_independent(&self, set: &[bool]) -> bool {
        self.edges
            .iter()
            .all(|e| e.iter().filter(|&&v| set[v]).count() <= 1)
    }

    /// Whether the incidence graph is a forest.
    pub fn is_hyperforest(&self) -> bool {
        // |incidences| = |nodes| - |components| for a forest.
        let nodes = self.num_vertices + self.edges.len();
        let incidences: usize = self.edges.iter().map(Vec::len).sum();
        let mut parent: Vec<usize> = (0..nodes).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut components = nodes;
        for (e, edge) in self.edges.iter().enumerate() {
            for &v in edge {
                let a = find(&mut parent, v);
                let b = find(&mut parent, self.num_vertices + e);
                if a != b {
                    parent[a] = b;
                    components -= 1;
                }
            }
        }
        incidences + components == nodes
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Unoccupied,
    Occupied,
}

impl Spin {
    pub fn symbol(self) -> char {
        match self {
            Spin::Occupied => 'O',
            Spin::Unoccupied => 'U',
        }
    }
}

/// A partial configuration: some vertices fixed occupied or unoccupied.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Pinning {
    assignments: BTreeMap<usize, Spin>,
}

impl Pinning {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Spin)>) -> Self {
        Pinning {
            assignments: pairs.into_iter().collect(),
        }
    }

    /// All listed vertices pinned unoccupied.
    pub fn unoccupied(vertices: impl IntoIterator<Item = usize>) -> Self {
        Self::from_pairs(vertices.into_iter().map(|v| (v, Spin::Unoccupied)))
    }

    pub fn pin(&mut self, v: usize, spin: Spin) -> &mut Self {
        self.assignments.insert(v, spin);
        self
    }

    pub fn get(&self, v: usize) -> Option<Spin> {
        self.assignments.get(&v).copied()
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Spin)> + '_ {
        self.assignments.iter().map(|(&v, &s)| (v, s))
    }

    /// Dense lookup table for `h`.
    pub fn to_dense(&self, num_vertices: usize) -> Vec<Option<Spin>> {
        let mut out = vec![None; num_vertices];
        for (v, s) in self.iter() {
            if v < num_vertices {
                out[v] = Some(s);
            }
        }
        out
    }

    /// A pinning is valid when its vertices exist and no edge holds two
    /// occupied vertices.
    pub fn validate(&self, h: &Hypergraph) -> Result<(), HypergraphError> {
        for (v, _) in self.iter() {
            if v >= h.num_vertices() {
                return Err(HypergraphError::PinOutOfRange {
                    vertex: v,
                    num_vertices: h.num_vertices(),
                });
            }
        }
        for (idx, edge) in h.edges().iter().enumerate() {
            let mut occupied = edge
                .iter()
                .copied()
                .filter(|&v| self.get(v) == Some(Spin::Occupied));
            if let (Some(first), Some(second)) = (occupied.next(), occupied.next()) {
                return Err(HypergraphError::InvalidPinning {
                    edge: idx,
                    first,
                    second,
                });
            }
        }
        Ok(())
    }
}

/// Per-vertex activities: a positive default with nonnegative overrides.
/// An override of 0 behaves like pinning the vertex unoccupied.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivityVector {
    default: f64,
    overrides: BTreeMap<usize, f64>,
}

impl ActivityVector {
    pub fn uniform(lambda: f64) -> Result<Self, HypergraphError> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(HypergraphError::InvalidActivity(lambda));
        }
        Ok(ActivityVector {
            default: lambda,
            overrides: BTreeMap::new(),
        })
    }

    pub fn with_override(mut self, v: usize, value: f64) -> Result<Self, HypergraphError> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(HypergraphError::InvalidOverride { vertex: v, value });
        }
        self.overrides.insert(v, value);
        Ok(self)
    }

    /// Builds a vector from explicit per-vertex values; the default becomes
    /// their maximum (or 1 when all are zero).
    pub fn from_values(values: &[f64]) -> Result<Self, HypergraphError> {
        let default = values
            .iter()
            .copied()
            .fold(0.0_f64, f64::max)
            .max(f64::MIN_POSITIVE);
        let default = if default <= f64::MIN_POSITIVE { 1.0 } else { default };
        let mut out = ActivityVector::uniform(default)?;
        for (v, &x) in values.iter().enumerate() {
            if x != default {
                out = out.with_override(v, x)?;
            }
        }
        Ok(out)
    }

    pub fn default_activity(&self) -> f64 {
        self.default
    }

    pub fn get(&self, v: usize) -> f64 {
        self.overrides.get(&v).copied().unwrap_or(self.default)
    }

    /// Largest activity among vertices `0..n`.
    pub fn max_activity(&self, num_vertices: usize) -> f64 {
        (0..num_vertices)
            .map(|v| self.get(v))
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self, num_vertices: usize) -> Vec<f64> {
        (0..num_vertices).map(|v| self.get(v)).collect()
    }
}
