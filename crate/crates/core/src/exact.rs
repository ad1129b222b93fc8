//! Brute-force ground truth: enumeration of independent sets and matchings.
//!
//! Everything here is exponential and guarded by a vertex cap. The
//! enumerator walks vertices in index order and prunes a branch as soon as
//! an edge would hold two occupied vertices.

use std::ops::{Add, Mul};

use num::{BigRational, One, Zero};

use crate::error::HypergraphError;
use crate::hypergraph::{ActivityVector, Hypergraph, Pinning, Spin};

pub const DEFAULT_MAX_VERTICES: usize = 24;

/// Partition function and occupation marginals of a pinned instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactResult<T> {
    pub partition: T,
    /// Total weight of configurations with `v` occupied, per vertex.
    pub occupied_weight: Vec<T>,
}

impl ExactResult<f64> {
    pub fn marginal(&self, v: usize) -> f64 {
        self.occupied_weight[v] / self.partition
    }

    pub fn marginals(&self) -> Vec<f64> {
        (0..self.occupied_weight.len())
            .map(|v| self.marginal(v))
            .collect()
    }
}

impl ExactResult<BigRational> {
    pub fn marginal(&self, v: usize) -> BigRational {
        &self.occupied_weight[v] / &self.partition
    }
}

/// Float oracle with the default vertex cap.
pub fn exact_partition(
    h: &Hypergraph,
    activities: &ActivityVector,
    pinning: &Pinning,
) -> Result<ExactResult<f64>, HypergraphError> {
    exact_partition_capped(h, activities, pinning, DEFAULT_MAX_VERTICES)
}

pub fn exact_partition_capped(
    h: &Hypergraph,
    activities: &ActivityVector,
    pinning: &Pinning,
    max_vertices: usize,
) -> Result<ExactResult<f64>, HypergraphError> {
    let weights = activities.to_dense(h.num_vertices());
    enumerate(h, &weights, pinning, max_vertices)
}

/// Rational oracle: one exact activity per vertex.
pub fn exact_partition_rational(
    h: &Hypergraph,
    activities: &[BigRational],
    pinning: &Pinning,
    max_vertices: usize,
) -> Result<ExactResult<BigRational>, HypergraphError> {
    if activities.len() != h.num_vertices() {
        return Err(HypergraphError::ActivityLength {
            got: activities.len(),
            expected: h.num_vertices(),
        });
    }
    enumerate(h, activities, pinning, max_vertices)
}

/// Z(λ) with the same rational activity on every vertex.
pub fn partition_rational(
    h: &Hypergraph,
    lambda: &BigRational,
    max_vertices: usize,
) -> Result<BigRational, HypergraphError> {
    let act = vec![lambda.clone(); h.num_vertices()];
    Ok(exact_partition_rational(h, &act, &Pinning::new(), max_vertices)?.partition)
}

/// Number of independent sets of each size; `Z(λ) = Σ c_j λ^j`.
pub fn independence_polynomial(
    h: &Hypergraph,
    max_vertices: usize,
) -> Result<Vec<u128>, HypergraphError> {
    check_cap(h, max_vertices)?;
    let mut counts = vec![0u128; h.num_vertices() + 1];
    let mut edge_busy = vec![false; h.num_edges()];
    fn rec(
        h: &Hypergraph,
        v: usize,
        size: usize,
        edge_busy: &mut [bool],
        counts: &mut [u128],
    ) {
        if v == h.num_vertices() {
            counts[size] += 1;
            return;
        }
        rec(h, v + 1, size, edge_busy, counts);
        if h.incident_edges(v).iter().all(|&e| !edge_busy[e]) {
            for &e in h.incident_edges(v) {
                edge_busy[e] = true;
            }
            rec(h, v + 1, size + 1, edge_busy, counts);
            for &e in h.incident_edges(v) {
                edge_busy[e] = false;
            }
        }
    }
    rec(h, 0, 0, &mut edge_busy, &mut counts);
    Ok(counts)
}

fn check_cap(h: &Hypergraph, max_vertices: usize) -> Result<(), HypergraphError> {
    if h.num_vertices() > max_vertices {
        return Err(HypergraphError::TooLarge {
            num_vertices: h.num_vertices(),
            cap: max_vertices,
        });
    }
    Ok(())
}

fn enumerate<T>(
    h: &Hypergraph,
    weights: &[T],
    pinning: &Pinning,
    max_vertices: usize,
) -> Result<ExactResult<T>, HypergraphError>
where
    T: Clone + Zero + One + Add<Output = T> + for<'a> Mul<&'a T, Output = T>,
{
    check_cap(h, max_vertices)?;
    pinning.validate(h)?;
    let n = h.num_vertices();
    let pins = pinning.to_dense(n);
    let mut state = Enumeration {
        h,
        weights,
        pins: &pins,
        edge_busy: vec![false; h.num_edges()],
        occupied: Vec::new(),
        partition: T::zero(),
        occupied_weight: vec![T::zero(); n],
    };
    state.rec(0, T::one());
    Ok(ExactResult {
        partition: state.partition,
        occupied_weight: state.occupied_weight,
    })
}

struct Enumeration<'a, T> {
    h: &'a Hypergraph,
    weights: &'a [T],
    pins: &'a [Option<Spin>],
    edge_busy: Vec<bool>,
    occupied: Vec<usize>,
    partition: T,
    occupied_weight: Vec<T>,
}

impl<T> Enumeration<'_, T>
where
    T: Clone + Zero + One + Add<Output = T> + for<'a> Mul<&'a T, Output = T>,
{
    fn rec(&mut self, v: usize, weight: T) {
        if v == self.h.num_vertices() {
            for &u in &self.occupied {
                let acc = std::mem::replace(&mut self.occupied_weight[u], T::zero());
                self.occupied_weight[u] = acc + weight.clone();
            }
            let acc = std::mem::replace(&mut self.partition, T::zero());
            self.partition = acc + weight;
            return;
        }
        let pin = self.pins[v];
        if pin != Some(Spin::Occupied) {
            self.rec(v + 1, weight.clone());
        }
        if pin != Some(Spin::Unoccupied)
            && self
                .h
                .incident_edges(v)
                .iter()
                .all(|&e| !self.edge_busy[e])
        {
            for &e in self.h.incident_edges(v) {
                self.edge_busy[e] = true;
            }
            self.occupied.push(v);
            self.rec(v + 1, weight * &self.weights[v]);
            self.occupied.pop();
            for &e in self.h.incident_edges(v) {
                self.edge_busy[e] = false;
            }
        }
    }
}

/// Σ over matchings (sets of pairwise disjoint edges) of λ^{|M|}.
///
/// Independent of the vertex enumerator: it walks edges, not vertices.
pub fn matching_partition<T>(h: &Hypergraph, lambda: &T, max_edges: usize) -> Result<T, HypergraphError>
where
    T: Clone + Zero + One + Add<Output = T> + for<'a> Mul<&'a T, Output = T>,
{
    if h.num_edges() > max_edges {
        return Err(HypergraphError::TooLarge {
            num_vertices: h.num_edges(),
            cap: max_edges,
        });
    }
    fn rec<T>(h: &Hypergraph, e: usize, used: &mut [bool], weight: T, lambda: &T, acc: &mut T)
    where
        T: Clone + Zero + One + Add<Output = T> + for<'a> Mul<&'a T, Output = T>,
    {
        if e == h.num_edges() {
            let prev = std::mem::replace(acc, T::zero());
            *acc = prev + weight;
            return;
        }
        rec(h, e + 1, used, weight.clone(), lambda, acc);
        let edge = h.edge(e);
        if edge.iter().all(|&v| !used[v]) {
            for &v in edge {
                used[v] = true;
            }
            rec(h, e + 1, used, weight * lambda, lambda, acc);
            for &v in edge {
                used[v] = false;
            }
        }
    }
    let mut used = vec![false; h.num_vertices()];
    let mut acc = T::zero();
    rec(h, 0, &mut used, T::one(), lambda, &mut acc);
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn single_vertex() {
        let h = Hypergraph::empty(1);
        let r = exact_partition(&h, &ActivityVector::uniform(2.0).unwrap(), &Pinning::new()).unwrap();
        assert_eq!(r.partition, 3.0);
        assert!((r.marginal(0) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn single_hyperedge() {
        let h = Hypergraph::new(3, vec![vec![0, 1, 2]]).unwrap();
        let r = exact_partition(&h, &ActivityVector::uniform(1.0).unwrap(), &Pinning::new()).unwrap();
        assert_eq!(r.partition, 4.0);
        for v in 0..3 {
            assert_eq!(r.marginal(v), 0.25);
        }
    }

    #[test]
    fn pinned_occupied_forces_neighbors_out() {
        let h = Hypergraph::new(3, vec![vec![0, 1, 2]]).unwrap();
        let pin = Pinning::from_pairs([(0, Spin::Occupied)]);
        let r = exact_partition(&h, &ActivityVector::uniform(1.0).unwrap(), &pin).unwrap();
        // the only configuration is {0}, weight λ = 1
        assert_eq!(r.partition, 1.0);
        assert_eq!(r.marginal(0), 1.0);
        assert_eq!(r.marginal(1), 0.0);
        assert_eq!(r.marginal(2), 0.0);
    }

    #[test]
    fn rational_matches_float() {
        let h = Hypergraph::new(4, vec![vec![0, 1], vec![1, 2, 3], vec![0, 3]]).unwrap();
        let act: Vec<_> = (0..4).map(|v| rat(v + 1, 2)).collect();
        let exact = exact_partition_rational(&h, &act, &Pinning::new(), 24).unwrap();
        let floats = ActivityVector::from_values(&[0.5, 1.0, 1.5, 2.0]).unwrap();
        let approx = exact_partition(&h, &floats, &Pinning::new()).unwrap();
        let z: f64 = num::ToPrimitive::to_f64(&exact.partition).unwrap();
        assert!((z - approx.partition).abs() < 1e-12);
    }

    #[test]
    fn size_guard() {
        let h = Hypergraph::empty(25);
        let err = exact_partition(&h, &ActivityVector::uniform(1.0).unwrap(), &Pinning::new());
        assert_eq!(
            err.unwrap_err(),
            HypergraphError::TooLarge {
                num_vertices: 25,
                cap: 24
            }
        );
        assert!(exact_partition_capped(&h, &ActivityVector::uniform(1.0).unwrap(), &Pinning::new(), 25).is_ok());
    }

    #[test]
    fn invalid_pinning_rejected() {
        let h = Hypergraph::new(2, vec![vec![0, 1]]).unwrap();
        let pin = Pinning::from_pairs([(0, Spin::Occupied), (1, Spin::Occupied)]);
        assert!(exact_partition(&h, &ActivityVector::uniform(1.0).unwrap(), &pin).is_err());
    }

    #[test]
    fn polynomial_of_triangle() {
        let h = Hypergraph::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert_eq!(independence_polynomial(&h, 24).unwrap(), vec![1, 3, 0, 0]);
    }

    #[test]
    fn matchings_of_path() {
        // path 0-1-2-3: matchings {}, 3 singles, {01,23}
        let h = Hypergraph::new(4, vec![vec![0, 1], vec![1, 2], vec![2, 3]]).unwrap();
        let z = matching_partition(&h, &rat(1, 1), 24).unwrap();
        assert_eq!(z, rat(5, 1));
        let z = matching_partition(&h, &2.0_f64, 24).unwrap();
        assert_eq!(z, 1.0 + 3.0 * 2.0 + 4.0);
    }
}
