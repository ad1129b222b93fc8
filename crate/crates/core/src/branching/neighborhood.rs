//! Typed `t`-neighborhoods, as rooted trees in the incidence graph, and
//! their comparison against the `(D, K)` expansion.
//!
//! A radius-`t` neighborhood spans incidence distance `2t` from the root
//! vertex. Two typed rooted trees are isomorphic exactly when their
//! canonical encodings agree: `V<type>(...)` or `E<type>(...)` around the
//! sorted encodings of the children.

use std::collections::{HashSet, VecDeque};

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::generator::{check_types, TypedHypergraph};
use super::{BranchingError, BranchingMatrices};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Vertex,
    Edge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Node {
    kind: NodeKind,
    ty: usize,
    children: Vec<usize>,
}

/// Rooted typed hypertree; node 0 is the root vertex and children always
/// come after their parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedNeighborhood {
    nodes: Vec<Node>,
}

impl TypedNeighborhood {
    fn push(&mut self, parent: Option<usize>, kind: NodeKind, ty: usize) -> usize {
        let idx = self.nodes.len();
        self.nodes.push(Node {
            kind,
            ty,
            children: Vec::new(),
        });
        if let Some(p) = parent {
            self.nodes[p].children.push(idx);
        }
        idx
    }

    pub fn root_type(&self) -> usize {
        self.nodes[0].ty
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn kind(&self, node: usize) -> NodeKind {
        self.nodes[node].kind
    }

    pub fn node_type(&self, node: usize) -> usize {
        self.nodes[node].ty
    }

    pub fn children(&self, node: usize) -> &[usize] {
        &self.nodes[node].children
    }

    pub fn num_vertices(&self) -> usize {
        self.nodes.iter().filter(|n| n.kind == NodeKind::Vertex).count()
    }

    pub fn num_edges(&self) -> usize {
        self.nodes.len() - self.num_vertices()
    }

    pub fn canonical(&self) -> String {
        let mut enc = vec![String::new(); self.nodes.len()];
        for idx in (0..self.nodes.len()).rev() {
            let node = &self.nodes[idx];
            let mut kids: Vec<String> = node
                .children
                .iter()
                .map(|&c| std::mem::take(&mut enc[c]))
                .collect();
            kids.sort_unstable();
            let tag = match node.kind {
                NodeKind::Vertex => 'V',
                NodeKind::Edge => 'E',
            };
            enc[idx] = format!("{tag}{}({})", node.ty, kids.concat());
        }
        std::mem::take(&mut enc[0])
    }

    /// The radius-`t` ball around `v`, or `None` when it is not a tree
    /// (a cycle, or a vertex repeated inside an edge).
    pub fn of_vertex(h: &TypedHypergraph, v: usize, radius: usize) -> Option<Self> {
        let mut tree = TypedNeighborhood { nodes: Vec::new() };
        let root = tree.push(None, NodeKind::Vertex, h.vertex_type(v));
        let mut seen_v = HashSet::from([v]);
        let mut seen_e = HashSet::new();
        // (tree node, graph id, parent graph id, incidence depth)
        let mut queue = VecDeque::from([(root, v, usize::MAX, 0usize)]);
        while let Some((node, id, parent, depth)) = queue.pop_front() {
            if depth == 2 * radius {
                continue;
            }
            let mut parent_skipped = false;
            if tree.kind(node) == NodeKind::Vertex {
                for &e in h.incident_edges(id) {
                    if e == parent && !parent_skipped {
                        parent_skipped = true;
                        continue;
                    }
                    if !seen_e.insert(e) {
                        return None;
                    }
                    let child = tree.push(Some(node), NodeKind::Edge, h.edge_type(e));
                    queue.push_back((child, e, id, depth + 1));
                }
            } else {
                for &x in h.edge(id) {
                    if x == parent && !parent_skipped {
                        parent_skipped = true;
                        continue;
                    }
                    if !seen_v.insert(x) {
                        return None;
                    }
                    let child = tree.push(Some(node), NodeKind::Vertex, h.vertex_type(x));
                    queue.push_back((child, x, id, depth + 1));
                }
            }
        }
        Some(tree)
    }
}

/// The radius-`t` ball of a type-`root_type` vertex in the typed infinite
/// hypertree. Children are listed by type.
pub fn tree_neighborhood(b: &BranchingMatrices, root_type: usize, radius: usize) -> TypedNeighborhood {
    assert!(root_type < b.num_vertex_types(), "root type out of range");
    let mut tree = TypedNeighborhood { nodes: Vec::new() };
    let root = tree.push(None, NodeKind::Vertex, root_type);
    // (tree node, parent type, hop depth of the vertex or its parent)
    let mut queue = VecDeque::from([(root, None::<usize>, 0usize)]);
    while let Some((node, parent_ty, hops)) = queue.pop_front() {
        let ty = tree.node_type(node);
        match tree.kind(node) {
            NodeKind::Vertex => {
                if hops == radius {
                    continue;
                }
                for j in 0..b.num_edge_types() {
                    let count = b.d_entry(ty, j) as usize - usize::from(parent_ty == Some(j));
                    for _ in 0..count {
                        let child = tree.push(Some(node), NodeKind::Edge, j);
                        queue.push_back((child, Some(ty), hops));
                    }
                }
            }
            NodeKind::Edge => {
                for i in 0..b.num_vertex_types() {
                    let count = b.k_entry(ty, i) as usize - usize::from(parent_ty == Some(i));
                    for _ in 0..count {
                        let child = tree.push(Some(node), NodeKind::Vertex, i);
                        queue.push_back((child, Some(ty), hops + 1));
                    }
                }
            }
        }
    }
    tree
}

/// Per vertex type, the fraction of sampled vertices whose radius-`t`
/// neighborhood is isomorphic to the tree expansion; `None` for a type
/// with no vertices. Samples are drawn without replacement from one
/// ChaCha8 stream, type by type; asking for at least as many samples as
/// there are vertices takes them all.
pub fn local_convergence_rate(
    h: &TypedHypergraph,
    b: &BranchingMatrices,
    radius: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<Option<f64>>, BranchingError> {
    check_types(h, b).map_err(BranchingError::TypeMismatch)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(b.num_vertex_types());
    for ty in 0..b.num_vertex_types() {
        let members: Vec<usize> = (0..h.num_vertices()).filter(|&v| h.vertex_type(v) == ty).collect();
        if members.is_empty() {
            out.push(None);
            continue;
        }
        let chosen: Vec<usize> = if samples >= members.len() {
            members
        } else {
            index::sample(&mut rng, members.len(), samples)
                .into_iter()
                .map(|i| members[i])
                .collect()
        };
        let target = tree_neighborhood(b, ty, radius).canonical();
        let hits = chosen
            .par_iter()
            .filter(|&&v| {
                TypedNeighborhood::of_vertex(h, v, radius).is_some_and(|t| t.canonical() == target)
            })
            .count();
        out.push(Some(hits as f64 / chosen.len() as f64));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branching::hat_matrices;

    #[test]
    fn expansion_shapes() {
        let b = BranchingMatrices::single_type(2, 3);
        let t0 = tree_neighborhood(&b, 0, 0);
        assert_eq!((t0.num_vertices(), t0.num_edges()), (1, 0));
        let t1 = tree_neighborhood(&b, 0, 1);
        assert_eq!((t1.num_vertices(), t1.num_edges()), (1 + 3 * 3, 3));
        let t2 = tree_neighborhood(&b, 0, 2);
        assert_eq!(t2.num_vertices(), 10 + 9 * 2 * 3);
    }

    #[test]
    fn hat_expansion_by_hand() {
        // root '+': one '+' edge holding k-1 '+' and one '−', and d '−'
        // edges holding k '−' each
        let (d, k) = (2, 3);
        let t = tree_neighborhood(&hat_matrices(d, k), 0, 1);
        assert_eq!(t.canonical(), "V0(E0(V0()V0()V1())E1(V1()V1()V1())E1(V1()V1()V1()))");
    }

    #[test]
    fn cycle_and_multi_incidence_rejected() {
        let tri = TypedHypergraph::new(vec![0; 3], vec![0; 3], vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert!(TypedNeighborhood::of_vertex(&tri, 0, 1).is_some());
        assert!(TypedNeighborhood::of_vertex(&tri, 0, 2).is_none());
        let multi = TypedHypergraph::new(vec![0; 2], vec![0], vec![vec![0, 0, 1]]).unwrap();
        assert!(TypedNeighborhood::of_vertex(&multi, 0, 1).is_none());
        assert!(TypedNeighborhood::of_vertex(&multi, 1, 1).is_none());
        assert!(TypedNeighborhood::of_vertex(&multi, 1, 0).is_some());
    }

    #[test]
    fn radius_zero_always_matches() {
        let b = BranchingMatrices::single_type(2, 2);
        let h = crate::branching::generate_hn(&b, 60, 3).unwrap();
        assert_eq!(local_convergence_rate(&h, &b, 0, 10, 0).unwrap(), vec![Some(1.0)]);
        let bad = TypedHypergraph::new(vec![1], vec![], vec![]).unwrap();
        assert!(local_convergence_rate(&bad, &b, 1, 10, 0).is_err());
    }
}
