//! Detailed balance `p_i d_ij = q_j k_ji`, decided exactly.
//!
//! Ratios are propagated along a spanning tree of the type graph from
//! `p_0 = 1`, each kept as an unreduced fraction. Every remaining equation
//! is then checked by cross-multiplication. Machine integers are tried
//! first; on overflow the whole computation is redone with big integers.

use std::collections::VecDeque;

use num::{BigInt, BigRational, Zero};

use crate::error::HypergraphError;

use super::{validate_branching, BranchingError, BranchingMatrices};

/// Normalized solution: `Σp + Σq = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BalanceSolution {
    pub p: Vec<BigRational>,
    pub q: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Reversibility {
    Reversible(BalanceSolution),
    /// A balance equation that fails once all others on the spanning tree hold.
    NotReversible { vertex_type: usize, edge_type: usize },
}

impl Reversibility {
    pub fn is_reversible(&self) -> bool {
        matches!(self, Reversibility::Reversible(_))
    }
}

/// Vertex- and edge-stationary distributions.
#[derive(Debug, Clone, PartialEq)]
pub struct Stationary {
    pub p: Vec<BigRational>,
    pub q: Vec<BigRational>,
}

impl Stationary {
    pub fn p_f64(&self) -> Vec<f64> {
        self.p.iter().map(to_f64).collect()
    }

    pub fn q_f64(&self) -> Vec<f64> {
        self.q.iter().map(to_f64).collect()
    }
}

pub(crate) fn to_f64(x: &BigRational) -> f64 {
    num::ToPrimitive::to_f64(x).unwrap_or(f64::NAN)
}

trait Exact: Clone + PartialEq + Sized {
    fn from_u32(x: u32) -> Self;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn into_big(self) -> BigInt;
}

impl Exact for i128 {
    fn from_u32(x: u32) -> Self {
        x as i128
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn into_big(self) -> BigInt {
        BigInt::from(self)
    }
}

impl Exact for BigInt {
    fn from_u32(x: u32) -> Self {
        BigInt::from(x)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn into_big(self) -> BigInt {
        self
    }
}

type Frac<T> = (T, T);

enum Propagation<T> {
    Consistent(Vec<Frac<T>>, Vec<Frac<T>>),
    Witness(usize, usize),
}

/// `None` on overflow.
fn propagate<T: Exact>(b: &BranchingMatrices) -> Option<Propagation<T>> {
    let (tv, te) = (b.num_vertex_types(), b.num_edge_types());
    let mut p: Vec<Option<Frac<T>>> = vec![None; tv];
    let mut q: Vec<Option<Frac<T>>> = vec![None; te];
    // tree[i][j]: the equation was used to set one side from the other
    let mut tree = vec![false; tv * te];
    p[0] = Some((T::from_u32(1), T::from_u32(1)));
    let mut queue = VecDeque::from([(true, 0usize)]);
    while let Some((is_vertex, idx)) = queue.pop_front() {
        if is_vertex {
            let (pn, pd) = p[idx].clone().expect("queued types are set");
            for j in 0..te {
                let dij = b.d_entry(idx, j);
                if dij > 0 && q[j].is_none() {
                    // q_j = p_i d_ij / k_ji
                    let num = pn.mul(&T::from_u32(dij))?;
                    let den = pd.mul(&T::from_u32(b.k_entry(j, idx)))?;
                    q[j] = Some((num, den));
                    tree[idx * te + j] = true;
                    queue.push_back((false, j));
                }
            }
        } else {
            let (qn, qd) = q[idx].clone().expect("queued types are set");
            for i in 0..tv {
                let kji = b.k_entry(idx, i);
                if kji > 0 && p[i].is_none() {
                    // p_i = q_j k_ji / d_ij
                    let num = qn.mul(&T::from_u32(kji))?;
                    let den = qd.mul(&T::from_u32(b.d_entry(i, idx)))?;
                    p[i] = Some((num, den));
                    tree[i * te + idx] = true;
                    queue.push_back((true, i));
                }
            }
        }
    }
    let p: Vec<Frac<T>> = p.into_iter().map(|x| x.expect("type graph is connected")).collect();
    let q: Vec<Frac<T>> = q.into_iter().map(|x| x.expect("type graph is connected")).collect();
    for i in 0..tv {
        for j in 0..te {
            let dij = b.d_entry(i, j);
            if dij == 0 || tree[i * te + j] {
                continue;
            }
            // pn/pd · d_ij == qn/qd · k_ji
            let lhs = p[i].0.mul(&T::from_u32(dij))?.mul(&q[j].1)?;
            let rhs = q[j].0.mul(&T::from_u32(b.k_entry(j, i)))?.mul(&p[i].1)?;
            if lhs != rhs {
                return Some(Propagation::Witness(i, j));
            }
        }
    }
    Some(Propagation::Consistent(p, q))
}

fn propagate_any(b: &BranchingMatrices) -> Propagation<BigInt> {
    match propagate::<i128>(b) {
        Some(Propagation::Witness(i, j)) => Propagation::Witness(i, j),
        Some(Propagation::Consistent(p, q)) => {
            let lift = |v: Vec<Frac<i128>>| {
                v.into_iter()
                    .map(|(n, d)| (n.into_big(), d.into_big()))
                    .collect::<Vec<_>>()
            };
            Propagation::Consistent(lift(p), lift(q))
        }
        None => propagate::<BigInt>(b).expect("big integers do not overflow"),
    }
}

/// Decision only: the failing equation, or `None` when reversible.
pub fn reversibility_witness(b: &BranchingMatrices) -> Result<Option<(usize, usize)>, BranchingError> {
    validate_branching(b)?;
    Ok(match propagate_any(b) {
        Propagation::Witness(i, j) => Some((i, j)),
        Propagation::Consistent(..) => None,
    })
}

pub fn reversibility(b: &BranchingMatrices) -> Result<Reversibility, BranchingError> {
    validate_branching(b)?;
    let (p, q) = match propagate_any(b) {
        Propagation::Witness(i, j) => {
            return Ok(Reversibility::NotReversible {
                vertex_type: i,
                edge_type: j,
            })
        }
        Propagation::Consistent(p, q) => (p, q),
    };
    let to_rat = |v: Vec<Frac<BigInt>>| {
        v.into_iter()
            .map(|(n, d)| BigRational::new(n, d))
            .collect::<Vec<_>>()
    };
    let (mut p, mut q) = (to_rat(p), to_rat(q));
    let total = p.iter().chain(q.iter()).fold(BigRational::zero(), |a, x| a + x);
    for x in p.iter_mut().chain(q.iter_mut()) {
        *x = &*x / &total;
    }
    let norm_p = sum(&p);
    let norm_q = sum(&q);
    assert_eq!(
        norm_p / norm_q,
        BigRational::new(BigInt::from(b.k() + 1), BigInt::from(b.d() + 1)),
        "balance solution violates the norm identity"
    );
    Ok(Reversibility::Reversible(BalanceSolution { p, q }))
}

fn sum(v: &[BigRational]) -> BigRational {
    v.iter().fold(BigRational::zero(), |a, x| a + x)
}

/// `p′ = p/‖p‖₁` and `q′ = q/‖q‖₁`, after checking `pD = (k+1)q` and
/// `qK = (d+1)p` exactly.
pub fn stationary_distributions(b: &BranchingMatrices) -> Result<Stationary, BranchingError> {
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
    let (tv, te) = (b.num_vertex_types(), b.num_edge_types());
    let int = |x: u64| BigRational::from_integer(BigInt::from(x));
    for j in 0..te {
        let pd = (0..tv).fold(BigRational::zero(), |a, i| a + &sol.p[i] * int(b.d_entry(i, j) as u64));
        assert_eq!(pd, &sol.q[j] * int(b.k() as u64 + 1), "pD = (k+1)q fails");
    }
    for i in 0..tv {
        let qk = (0..te).fold(BigRational::zero(), |a, j| a + &sol.q[j] * int(b.k_entry(j, i) as u64));
        assert_eq!(qk, &sol.p[i] * int(b.d() as u64 + 1), "qK = (d+1)p fails");
    }
    let (np, nq) = (sum(&sol.p), sum(&sol.q));
    Ok(Stationary {
        p: sol.p.iter().map(|x| x / &np).collect(),
        q: sol.q.iter().map(|x| x / &nq).collect(),
    })
}

/// `p_s − λ(1−p_s)^{−d} Π_j (1 − Σ_i k_ji p_i)^{d_sj}` for each vertex type.
/// A zero residual is a translation-invariant occupation profile.
pub fn invariant_marginal_residual(
    b: &BranchingMatrices,
    lambda: f64,
    p: &[f64],
) -> Result<Vec<f64>, BranchingError> {
    let (tv, te) = (b.num_vertex_types(), b.num_edge_types());
    if p.len() != tv {
        return Err(BranchingError::TypeMismatch(format!(
            "{} marginals for {tv} vertex types",
            p.len()
        )));
    }
    if let Some(&bad) = p.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(BranchingError::Hypergraph(HypergraphError::InvalidParameter(format!(
            "type marginal must be finite and nonnegative, got {bad}"
        ))));
    }
    let mut slack = Vec::with_capacity(te);
    for j in 0..te {
        let s: f64 = (0..tv).map(|i| b.k_entry(j, i) as f64 * p[i]).sum();
        if s >= 1.0 {
            return Err(BranchingError::Domain { edge_type: j, sum: s });
        }
        slack.push(1.0 - s);
    }
    Ok((0..tv)
        .map(|s| {
            let prod: f64 = (0..te)
                .map(|j| slack[j].powi(b.d_entry(s, j) as i32))
                .product();
            p[s] - lambda * prod / (1.0 - p[s]).powi(b.d() as i32)
        })
        .collect())
}

/// Inverts `x = kp₊/(1−p₋−kp₊)`, `y = kp₋/(1−p₊−kp₋)` for the hat types.
/// Maps a solution of `y = f(x)`, `x = f(y)` to a zero of the residual.
pub fn hat_marginals_from_ratios(k: usize, x: f64, y: f64) -> (f64, f64) {
    // k(1+x) p₊ + x p₋ = x
    // y p₊ + k(1+y) p₋ = y
    let kf = k as f64;
    let (a, bb, c, dd) = (kf * (1.0 + x), x, y, kf * (1.0 + y));
    let det = a * dd - bb * c;
    ((x * dd - bb * y) / det, (a * y - c * x) / det)
}
