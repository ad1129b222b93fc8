//! The hypergraph self-avoiding-walk tree.
//!
//! A node is a self-avoiding walk `(v_0, e_1, v_1, ..., e_l, v_l)` from the
//! root: consecutive edges differ, vertices are distinct, and `v_i` lies in
//! none of `e_1..e_{i-1}`. The children of a node are grouped by the edge
//! that extends the walk.
//!
//! Walks that would close a cycle are not nodes. Instead the cycle-closing
//! rule decides the fate of the endpoint: if `v_l` sits in an extension
//! edge `f` that also contains an earlier walk vertex `v_m`, and `f` ranks
//! before `e_{m+1}` at `v_m`, the node `v_l` is deleted with its subtree.
//! Otherwise `v_m` simply does not appear in the group of `f`.
//!
//! [`SawWalker`] generates the tree lazily with push/pop bookkeeping, and
//! [`build_saw_tree`] materializes it for inspection.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::decay::{tree_recursion_step, ExtRatio};
use crate::error::HypergraphError;
use crate::hypergraph::{ActivityVector, Hypergraph, Pinning, Spin};

/// Per-vertex ranking of incident edges; earlier means ranked higher.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeOrdering {
    order: Vec<Vec<usize>>,
}

impl EdgeOrdering {
    /// Input edge order, restricted to each vertex.
    pub fn input_order(h: &Hypergraph) -> Self {
        EdgeOrdering {
            order: (0..h.num_vertices())
                .map(|v| h.incident_edges(v).to_vec())
                .collect(),
        }
    }

    pub fn from_orders(h: &Hypergraph, order: Vec<Vec<usize>>) -> Result<Self, HypergraphError> {
        if order.len() != h.num_vertices() {
            return Err(HypergraphError::ActivityLength {
                got: order.len(),
                expected: h.num_vertices(),
            });
        }
        for (v, ranked) in order.iter().enumerate() {
            let mut a = ranked.clone();
            a.sort_unstable();
            let mut b = h.incident_edges(v).to_vec();
            b.sort_unstable();
            if a != b {
                return Err(HypergraphError::BadOrdering { vertex: v });
            }
        }
        Ok(EdgeOrdering { order })
    }

    /// Independent uniform shuffle of every vertex's incident edges.
    pub fn shuffled<R: Rng + ?Sized>(h: &Hypergraph, rng: &mut R) -> Self {
        let mut out = Self::input_order(h);
        for ranked in &mut out.order {
            ranked.shuffle(rng);
        }
        out
    }

    /// Incident edges of `v`, best ranked first.
    pub fn ranked(&self, v: usize) -> &[usize] {
        &self.order[v]
    }

    /// Position of `e` in the ranking at `v`.
    pub fn rank(&self, v: usize, e: usize) -> usize {
        self.order[v]
            .iter()
            .position(|&f| f == e)
            .expect("edge is incident to the vertex")
    }
}

/// One child group of a walk endpoint: the extension edge and the new endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub edge: usize,
    pub children: Vec<usize>,
}

/// Outcome of expanding the current walk endpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expansion {
    /// Removed by the cycle-closing rule.
    Deleted,
    /// Nonempty child groups in rank order; empty for a leaf.
    Groups(Vec<Extension>),
}

const NOT_ON_WALK: usize = usize::MAX;

/// Incremental self-avoiding walk with O(edge size) push and pop.
#[derive(Debug, Clone)]
pub struct SawWalker<'a> {
    h: &'a Hypergraph,
    ord: &'a EdgeOrdering,
    vertices: Vec<usize>,
    /// `edges[i]` is the edge between `vertices[i]` and `vertices[i + 1]`.
    edges: Vec<usize>,
    pos_on_walk: Vec<usize>,
    /// Number of walk edges containing each vertex.
    blocked: Vec<u32>,
}

impl<'a> SawWalker<'a> {
    pub fn new(h: &'a Hypergraph, ord: &'a EdgeOrdering, root: usize) -> Self {
        let mut pos_on_walk = vec![NOT_ON_WALK; h.num_vertices()];
        pos_on_walk[root] = 0;
        SawWalker {
            h,
            ord,
            vertices: vec![root],
            edges: Vec::new(),
            pos_on_walk,
            blocked: vec![0; h.num_vertices()],
        }
    }

    pub fn endpoint(&self) -> usize {
        *self.vertices.last().expect("walk is never empty")
    }

    /// Number of edges on the walk, i.e. the depth of the current node.
    pub fn depth(&self) -> usize {
        self.edges.len()
    }

    pub fn expand(&self) -> Expansion {
        let v = self.endpoint();
        let entered = self.edges.last().copied();
        let mut groups = Vec::new();
        for &f in self.ord.ranked(v) {
            if Some(f) == entered {
                continue;
            }
            let mut children = Vec::new();
            for &x in self.h.edge(f) {
                if x == v {
                    continue;
                }
                let m = self.pos_on_walk[x];
                if m != NOT_ON_WALK {
                    if self.ord.rank(x, f) < self.ord.rank(x, self.edges[m]) {
                        return Expansion::Deleted;
                    }
                } else if self.blocked[x] == 0 {
                    children.push(x);
                }
            }
            if !children.is_empty() {
                groups.push(Extension { edge: f, children });
            }
        }
        Expansion::Groups(groups)
    }

    /// Extends the walk by `edge` to `x`; `x` must come from [`Self::expand`].
    pub fn push(&mut self, edge: usize, x: usize) {
        for &y in self.h.edge(edge) {
            self.blocked[y] += 1;
        }
        self.edges.push(edge);
        self.pos_on_walk[x] = self.vertices.len();
        self.vertices.push(x);
    }

    pub fn pop(&mut self) {
        assert!(!self.edges.is_empty(), "cannot pop the root");
        let x = self.vertices.pop().unwrap();
        self.pos_on_walk[x] = NOT_ON_WALK;
        let edge = self.edges.pop().unwrap();
        for &y in self.h.edge(edge) {
            self.blocked[y] -= 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SawGroup {
    pub edge: usize,
    pub children: Vec<SawNode>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SawNode {
    pub end_vertex: usize,
    pub pinned: Option<Spin>,
    pub activity: f64,
    pub child_groups: Vec<SawGroup>,
}

impl SawNode {
    pub fn node_count(&self) -> usize {
        1 + self
            .child_groups
            .iter()
            .flat_map(|g| &g.children)
            .map(SawNode::node_count)
            .sum::<usize>()
    }

    /// Length of the longest root-to-leaf path, counted in edges.
    pub fn height(&self) -> usize {
        self.child_groups
            .iter()
            .flat_map(|g| &g.children)
            .map(|c| 1 + c.height())
            .max()
            .unwrap_or(0)
    }

    /// Occupation ratio of this node given the pins it carries.
    pub fn ratio(&self) -> ExtRatio {
        match self.pinned {
            Some(Spin::Occupied) => ExtRatio::Infinite,
            Some(Spin::Unoccupied) => ExtRatio::Finite(0.0),
            None => {
                let groups: Vec<Vec<ExtRatio>> = self
                    .child_groups
                    .iter()
                    .map(|g| g.children.iter().map(SawNode::ratio).collect())
                    .collect();
                tree_recursion_step(&groups, self.activity)
            }
        }
    }

    /// Copy cut off below `depth` edges from this node.
    pub fn truncate(&self, depth: usize) -> SawNode {
        SawNode {
            end_vertex: self.end_vertex,
            pinned: self.pinned,
            activity: self.activity,
            child_groups: if depth == 0 {
                Vec::new()
            } else {
                self.child_groups
                    .iter()
                    .map(|g| SawGroup {
                        edge: g.edge,
                        children: g.children.iter().map(|c| c.truncate(depth - 1)).collect(),
                    })
                    .collect()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SawTree {
    pub root: SawNode,
}

impl SawTree {
    pub fn node_count(&self) -> usize {
        self.root.node_count()
    }

    pub fn height(&self) -> usize {
        self.root.height()
    }

    /// Root occupation probability.
    pub fn marginal(&self) -> f64 {
        self.root.ratio().to_probability()
    }

    /// One line per node, two spaces of indent per level:
    /// `vertex=<id> pinned=<O|U|-> group=<edge-id|->`.
    pub fn dump(&self) -> String {
        fn rec(node: &SawNode, group: Option<usize>, indent: usize, out: &mut String) {
            let pinned = node.pinned.map_or('-', Spin::symbol);
            let group = group.map_or_else(|| "-".to_string(), |g| g.to_string());
            writeln!(
                out,
                "{:indent$}vertex={} pinned={} group={}",
                "",
                node.end_vertex,
                pinned,
                group,
                indent = 2 * indent
            )
            .unwrap();
            for g in &node.child_groups {
                for c in &g.children {
                    rec(c, Some(g.edge), indent + 1, out);
                }
            }
        }
        let mut out = String::new();
        rec(&self.root, None, 0, &mut out);
        out
    }
}

/// Materializes the SAW tree from `root`, down to `depth_limit` edges when given.
///
/// The shape never depends on `pinning`; pins are only recorded on the nodes.
pub fn build_saw_tree(
    h: &Hypergraph,
    root: usize,
    ord: &EdgeOrdering,
    pinning: &Pinning,
    activities: &ActivityVector,
    depth_limit: Option<usize>,
) -> Result<SawTree, HypergraphError> {
    if root >= h.num_vertices() {
        return Err(HypergraphError::NoSuchVertex(root));
    }
    pinning.validate(h)?;
    fn rec(
        w: &mut SawWalker<'_>,
        pinning: &Pinning,
        activities: &ActivityVector,
        depth_limit: Option<usize>,
        groups: Vec<Extension>,
    ) -> SawNode {
        let v = w.endpoint();
        let mut child_groups = Vec::with_capacity(groups.len());
        if depth_limit.is_none_or(|t| w.depth() < t) {
            for ext in groups {
                let mut children = Vec::with_capacity(ext.children.len());
                for &x in &ext.children {
                    w.push(ext.edge, x);
                    if let Expansion::Groups(sub) = w.expand() {
                        children.push(rec(w, pinning, activities, depth_limit, sub));
                    }
                    w.pop();
                }
                if !children.is_empty() {
                    child_groups.push(SawGroup {
                        edge: ext.edge,
                        children,
                    });
                }
            }
        }
        SawNode {
            end_vertex: v,
            pinned: pinning.get(v),
            activity: activities.get(v),
            child_groups,
        }
    }
    let mut walker = SawWalker::new(h, ord, root);
    let Expansion::Groups(groups) = walker.expand() else {
        unreachable!("the root is never deleted")
    };
    Ok(SawTree {
        root: rec(&mut walker, pinning, activities, depth_limit, groups),
    })
}

/// Default cap on nodes visited by [`saw_marginal_exact`].
pub const DEFAULT_EXPANSION_LIMIT: usize = 50_000_000;

/// Root marginal from a full lazy traversal of the SAW tree.
pub fn saw_marginal_exact(
    h: &Hypergraph,
    v: usize,
    pinning: &Pinning,
    activities: &ActivityVector,
) -> Result<f64, HypergraphError> {
    saw_marginal_exact_with(
        h,
        v,
        &EdgeOrdering::input_order(h),
        pinning,
        activities,
        DEFAULT_EXPANSION_LIMIT,
    )
}

pub fn saw_marginal_exact_with(
    h: &Hypergraph,
    v: usize,
    ord: &EdgeOrdering,
    pinning: &Pinning,
    activities: &ActivityVector,
    limit: usize,
) -> Result<f64, HypergraphError> {
    if v >= h.num_vertices() {
        return Err(HypergraphError::NoSuchVertex(v));
    }
    pinning.validate(h)?;
    let pins = pinning.to_dense(h.num_vertices());
    let act = activities.to_dense(h.num_vertices());
    let mut walker = SawWalker::new(h, ord, v);
    let mut budget = limit;
    let r = exact_ratio(&mut walker, &pins, &act, &mut budget)
        .map_err(|_| HypergraphError::ExpansionLimit(limit))?;
    Ok(r.to_probability())
}

fn exact_ratio(
    w: &mut SawWalker<'_>,
    pins: &[Option<Spin>],
    act: &[f64],
    budget: &mut usize,
) -> Result<ExtRatio, HypergraphError> {
    if *budget == 0 {
        return Err(HypergraphError::ExpansionLimit(0));
    }
    *budget -= 1;
    let v = w.endpoint();
    match pins[v] {
        Some(Spin::Occupied) => return Ok(ExtRatio::Infinite),
        Some(Spin::Unoccupied) => return Ok(ExtRatio::Finite(0.0)),
        None => {}
    }
    if act[v] == 0.0 {
        return Ok(ExtRatio::Finite(0.0));
    }
    let groups = match w.expand() {
        Expansion::Deleted => return Ok(ExtRatio::Finite(0.0)),
        Expansion::Groups(g) => g,
    };
    let mut factor = 1.0;
    for ext in groups {
        let mut sum = 0.0;
        let mut infinite = false;
        for &x in &ext.children {
            w.push(ext.edge, x);
            let r = exact_ratio(w, pins, act, budget);
            w.pop();
            match r? {
                ExtRatio::Infinite => {
                    infinite = true;
                    break;
                }
                ExtRatio::Finite(r) => sum += r,
            }
        }
        if infinite {
            return Ok(ExtRatio::Finite(0.0));
        }
        factor /= 1.0 + sum;
    }
    Ok(ExtRatio::Finite(act[v] * factor))
}
