//! Tree recursion, certified truncated marginals, and the threshold and
//! rate mathematics of the uniform regular hypertree.
//!
//! Occupation ratios `R = p / (1 - p)` live in `[0, +∞]`. A vertex pinned
//! occupied has ratio `+∞`, which is kept symbolic: it zeroes the factor of
//! its group instead of flowing through float arithmetic.

mod rates;
mod threshold;

use std::cmp::Ordering;

pub use rates::{
    decay_rate_bounds, extremal_ratio_sequences, regular_tree_root_ratio, tree_gap,
    CriticalConstants, ExtremalSequences, RateBounds, WsmBound,
};
pub use threshold::{
    contraction_ratio, critical_activity, f_map, fixed_point, g_map, is_critical,
    two_periodic_points, ModelParams, CRITICAL_RTOL,
};

use crate::error::HypergraphError;
use crate::hypergraph::{ActivityVector, Hypergraph, Pinning, Spin};
use crate::sawtree::{EdgeOrdering, Expansion, SawWalker};

/// An occupation ratio in `[0, +∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtRatio {
    Finite(f64),
    Infinite,
}

impl ExtRatio {
    pub const ZERO: ExtRatio = ExtRatio::Finite(0.0);

    /// `f64::INFINITY` maps to [`ExtRatio::Infinite`].
    pub fn from_f64(x: f64) -> Self {
        if x == f64::INFINITY {
            ExtRatio::Infinite
        } else {
            ExtRatio::Finite(x)
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            ExtRatio::Finite(x) => x,
            ExtRatio::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == ExtRatio::Infinite
    }

    /// `R / (1 + R)`, with `+∞ ↦ 1`.
    pub fn to_probability(self) -> f64 {
        match self {
            ExtRatio::Finite(r) => r / (1.0 + r),
            ExtRatio::Infinite => 1.0,
        }
    }

    /// `p / (1 - p)`, with `1 ↦ +∞`.
    pub fn from_probability(p: f64) -> Self {
        if p >= 1.0 {
            ExtRatio::Infinite
        } else {
            ExtRatio::Finite(p / (1.0 - p))
        }
    }
}

impl PartialOrd for ExtRatio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ExtRatio::Infinite, ExtRatio::Infinite) => Some(Ordering::Equal),
            (ExtRatio::Infinite, _) => Some(Ordering::Greater),
            (_, ExtRatio::Infinite) => Some(Ordering::Less),
            (ExtRatio::Finite(a), ExtRatio::Finite(b)) => a.partial_cmp(b),
        }
    }
}

/// `λ_v · Π_i 1 / (1 + Σ_j R_ij)`.
///
/// A group holding `+∞` contributes a factor 0; no groups gives `λ_v`.
pub fn tree_recursion_step(groups: &[Vec<ExtRatio>], lambda_v: f64) -> ExtRatio {
    let mut out = lambda_v;
    for group in groups {
        let mut sum = 0.0;
        for r in group {
            match r {
                ExtRatio::Infinite => return ExtRatio::ZERO,
                ExtRatio::Finite(x) => sum += x,
            }
        }
        out /= 1.0 + sum;
    }
    ExtRatio::Finite(out)
}

/// Certified bounds `[lo, hi]` on an occupation ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioInterval {
    pub lo: ExtRatio,
    pub hi: ExtRatio,
}

impl RatioInterval {
    pub fn exact(r: ExtRatio) -> Self {
        RatioInterval { lo: r, hi: r }
    }

    pub const UNKNOWN: RatioInterval = RatioInterval {
        lo: ExtRatio::ZERO,
        hi: ExtRatio::Infinite,
    };

    pub fn contains(&self, r: ExtRatio) -> bool {
        self.lo <= r && r <= self.hi
    }

    /// Matching bounds on the occupation probability.
    pub fn probability_bounds(&self) -> (f64, f64) {
        (self.lo.to_probability(), self.hi.to_probability())
    }

    pub fn probability_width(&self) -> f64 {
        let (lo, hi) = self.probability_bounds();
        hi - lo
    }

    pub fn probability_midpoint(&self) -> f64 {
        let (lo, hi) = self.probability_bounds();
        0.5 * (lo + hi)
    }
}

/// Result of a depth-limited traversal of the SAW tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedMarginal {
    pub interval: RatioInterval,
    /// False when no node at the depth limit had children, so the
    /// interval is exact.
    pub truncated: bool,
    pub nodes_visited: usize,
}

/// Bounds on the ratio at `v` from the SAW tree cut at depth `t`.
///
/// Nodes at depth `t` that still have children are replaced by the
/// trivial interval `[0, +∞]`; everything above is combined with interval
/// arithmetic (`lo` from the children's `hi`, and vice versa), so both
/// extremal frontier initializations are covered in one traversal.
pub fn truncated_marginal(
    h: &Hypergraph,
    v: usize,
    pinning: &Pinning,
    activities: &ActivityVector,
    t: usize,
) -> Result<TruncatedMarginal, HypergraphError> {
    truncated_marginal_with(h, v, &EdgeOrdering::input_order(h), pinning, activities, t)
}

pub fn truncated_marginal_with(
    h: &Hypergraph,
    v: usize,
    ord: &EdgeOrdering,
    pinning: &Pinning,
    activities: &ActivityVector,
    t: usize,
) -> Result<TruncatedMarginal, HypergraphError> {
    if v >= h.num_vertices() {
        return Err(HypergraphError::NoSuchVertex(v));
    }
    pinning.validate(h)?;
    let pins = pinning.to_dense(h.num_vertices());
    let act = activities.to_dense(h.num_vertices());
    Ok(truncated_marginal_dense(h, v, ord, &pins, &act, t))
}

/// Unchecked variant for callers that already hold dense pins and activities.
pub(crate) fn truncated_marginal_dense(
    h: &Hypergraph,
    v: usize,
    ord: &EdgeOrdering,
    pins: &[Option<Spin>],
    act: &[f64],
    t: usize,
) -> TruncatedMarginal {
    let mut walker = SawWalker::new(h, ord, v);
    let mut state = Traversal {
        pins,
        act,
        depth: t,
        truncated: false,
        nodes: 0,
    };
    let interval = state.visit(&mut walker);
    TruncatedMarginal {
        interval,
        truncated: state.truncated,
        nodes_visited: state.nodes,
    }
}

struct Traversal<'a> {
    pins: &'a [Option<Spin>],
    act: &'a [f64],
    depth: usize,
    truncated: bool,
    nodes: usize,
}

impl Traversal<'_> {
    fn visit(&mut self, w: &mut SawWalker<'_>) -> RatioInterval {
        self.nodes += 1;
        let v = w.endpoint();
        match self.pins[v] {
            Some(Spin::Occupied) => return RatioInterval::exact(ExtRatio::Infinite),
            Some(Spin::Unoccupied) => return RatioInterval::exact(ExtRatio::ZERO),
            None => {}
        }
        let lambda = self.act[v];
        if lambda == 0.0 {
            return RatioInterval::exact(ExtRatio::ZERO);
        }
        let groups = match w.expand() {
            Expansion::Deleted => return RatioInterval::exact(ExtRatio::ZERO),
            Expansion::Groups(g) => g,
        };
        if groups.is_empty() {
            return RatioInterval::exact(ExtRatio::Finite(lambda));
        }
        if w.depth() >= self.depth {
            self.truncated = true;
            return RatioInterval::UNKNOWN;
        }
        let mut hi = lambda;
        let mut lo = lambda;
        for ext in groups {
            let mut sum_lo = 0.0;
            let mut sum_hi = ExtRatio::ZERO;
            for &x in &ext.children {
                w.push(ext.edge, x);
                let c = self.visit(w);
                w.pop();
                if c.lo.is_infinite() {
                    return RatioInterval::exact(ExtRatio::ZERO);
                }
                sum_lo += c.lo.as_f64();
                sum_hi = match (sum_hi, c.hi) {
                    (ExtRatio::Finite(a), ExtRatio::Finite(b)) => ExtRatio::Finite(a + b),
                    _ => ExtRatio::Infinite,
                };
            }
            hi /= 1.0 + sum_lo;
            lo = match sum_hi {
                ExtRatio::Finite(s) => lo / (1.0 + s),
                ExtRatio::Infinite => 0.0,
            };
        }
        RatioInterval {
            lo: ExtRatio::Finite(lo),
            hi: ExtRatio::Finite(hi),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::exact_partition;

    #[test]
    fn recursion_base_cases() {
        assert_eq!(tree_recursion_step(&[], 2.5), ExtRatio::Finite(2.5));
        let r = ExtRatio::Finite(0.5);
        let groups = vec![vec![r; 4]; 2];
        let out = tree_recursion_step(&groups, 1.0).as_f64();
        assert!((out - 1.0 / 9.0).abs() < 1e-15);
        let groups = vec![vec![ExtRatio::Finite(1.0), ExtRatio::Infinite]];
        assert_eq!(tree_recursion_step(&groups, 3.0), ExtRatio::ZERO);
    }

    #[test]
    fn ratio_probability_conversions() {
        assert_eq!(ExtRatio::Infinite.to_probability(), 1.0);
        assert_eq!(ExtRatio::Finite(1.0).to_probability(), 0.5);
        assert_eq!(ExtRatio::from_probability(1.0), ExtRatio::Infinite);
        assert_eq!(ExtRatio::from_probability(0.25), ExtRatio::Finite(1.0 / 3.0));
        assert!(ExtRatio::Finite(1e300) < ExtRatio::Infinite);
    }

    #[test]
    fn single_vertex_is_exact_at_any_depth() {
        let h = Hypergraph::empty(1);
        let act = ActivityVector::uniform(1.0).unwrap();
        for t in 0..3 {
            let m = truncated_marginal(&h, 0, &Pinning::new(), &act, t).unwrap();
            assert_eq!(m.interval, RatioInterval::exact(ExtRatio::Finite(1.0)));
            assert!(!m.truncated);
        }
    }

    #[test]
    fn triangle_interval_contains_oracle() {
        let h = Hypergraph::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let act = ActivityVector::uniform(1.0).unwrap();
        let m = truncated_marginal(&h, 0, &Pinning::new(), &act, 6).unwrap();
        assert!(m.interval.contains(ExtRatio::Finite(1.0 / 3.0)));
        assert!((m.interval.probability_midpoint() - 0.25).abs() < 1e-15);
        let m0 = truncated_marginal(&h, 0, &Pinning::new(), &act, 0).unwrap();
        assert_eq!(m0.interval, RatioInterval::UNKNOWN);
        assert!(m0.truncated);
    }

    #[test]
    fn width_shrinks_with_depth() {
        // 3x3 grid of hyperedges: rows and columns of a 3x3 vertex array,
        // plus the diagonal.
        let edges = vec![
            vec![0, 1, 2],
            vec![3, 4, 5],
            vec![6, 7, 8],
            vec![0, 3, 6],
            vec![1, 4, 7],
            vec![2, 5, 8],
            vec![0, 4, 8],
        ];
        let h = Hypergraph::new(9, edges).unwrap();
        let act = ActivityVector::uniform(0.7).unwrap();
        let exact = exact_partition(&h, &act, &Pinning::new()).unwrap();
        let target = ExtRatio::from_probability(exact.marginal(4));
        let mut last = f64::INFINITY;
        for t in 0..10 {
            let m = truncated_marginal(&h, 4, &Pinning::new(), &act, t).unwrap();
            let w = m.interval.probability_width();
            assert!(w <= last + 1e-15);
            let (lo, hi) = m.interval.probability_bounds();
            let p = target.to_probability();
            assert!(lo - 1e-12 <= p && p <= hi + 1e-12);
            last = w;
        }
        assert!(last < 1e-12);
    }
}
