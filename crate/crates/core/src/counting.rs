//! Deterministic approximate counting by self-reduction.
//!
//! `1/Z = Π_i (1 - p_i)` where `p_i` is the marginal of `v_i` with
//! `v_1..v_{i-1}` pinned unoccupied. Each `p_i` comes from a truncated SAW
//! tree interval whose depth grows until its width fits the per-marginal
//! budget; the product of the interval endpoints then certifies the error
//! of the final estimate.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::decay::{
    critical_activity, decay_rate_bounds, is_critical, truncated_marginal_dense,
    CriticalConstants, ModelParams, RatioInterval, WsmBound,
};
use crate::error::HypergraphError;
use crate::hypergraph::{Hypergraph, Spin};
use crate::sawtree::EdgeOrdering;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    /// `λ < λ_c`.
    #[serde(rename = "FPTAS")]
    Fptas,
    /// `λ = λ_c`.
    #[serde(rename = "CriticalPTAS")]
    CriticalPtas,
    /// Between `λ_c` and the hardness threshold.
    Gap,
    /// Above `(2k+1+(-1)^k)/(k+1) · λ_c`.
    Hard,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::Fptas => "FPTAS",
            Regime::CriticalPtas => "CriticalPTAS",
            Regime::Gap => "Gap",
            Regime::Hard => "Hard",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// `(2k + 1 + (-1)^k) / (k + 1) · λ_c`.
pub fn hardness_threshold(d: usize, k: usize) -> f64 {
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    (2.0 * k as f64 + 1.0 + sign) / (k as f64 + 1.0) * critical_activity(d, k)
}

pub fn classify_regime(d: usize, k: usize, lambda: f64) -> Regime {
    if is_critical(d, k, lambda) {
        Regime::CriticalPtas
    } else if lambda < critical_activity(d, k) {
        Regime::Fptas
    } else if lambda > hardness_threshold(d, k) {
        Regime::Hard
    } else {
        Regime::Gap
    }
}

/// `grid[d-1][k-1]` is the regime of `(d, k, λ)`.
pub fn regime_grid(lambda: f64, d_max: usize, k_max: usize) -> Vec<Vec<Regime>> {
    (1..=d_max)
        .map(|d| (1..=k_max).map(|k| classify_regime(d, k, lambda)).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CountingError {
    #[error("epsilon must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),
    #[error("no a-priori depth bound in the {0} regime")]
    NoGuarantee(Regime),
    #[error(
        "marginal of vertex {vertex} still has width {width:.3e} at depth cap {depth}, budget {budget:.3e}"
    )]
    DepthCap {
        vertex: usize,
        depth: usize,
        width: f64,
        budget: f64,
    },
    #[error("certified error {achieved:.3e} still above {eps} after {rounds} budget halvings")]
    NotCertified {
        achieved: f64,
        eps: f64,
        rounds: usize,
    },
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

/// Smallest depth whose rate bound, scaled to strong mixing, meets the
/// per-marginal budget: `ε/(2(1+λ)n)` below `λ_c` and `ε/(4 ln(1/ε))` at `λ_c`.
pub fn depth_for_error(
    d: usize,
    k: usize,
    lambda: f64,
    eps: f64,
    n: usize,
) -> Result<usize, CountingError> {
    check_eps(eps)?;
    if n == 0 {
        return Ok(0);
    }
    let regime = classify_regime(d, k, lambda);
    let ssm = decay_rate_bounds(d, k, lambda, 1).ssm_factor;
    match regime {
        Regime::Fptas => {
            let budget = partition_budget(eps, lambda, n);
            let r = crate::decay::contraction_ratio(d, k, lambda);
            let c1 = lambda * (1.0 + (k * d) as f64 * lambda);
            // ssm · c1 · r^(t-4) <= budget
            let steps = ((ssm * c1 / budget).ln() / (1.0 / r).ln()).ceil();
            let t = 4.0 + steps.max(-4.0);
            let t = t.max(1.0) as usize;
            debug_assert!(matches!(
                decay_rate_bounds(d, k, lambda, t).wsm,
                WsmBound::Bound(b) if ssm * b <= budget * (1.0 + 1e-9)
            ));
            Ok(t)
        }
        Regime::CriticalPtas => {
            let budget = log_partition_budget(eps);
            let c = CriticalConstants::new(d, k).expect("critical activity is finite");
            // ssm · c2 / sqrt(t - l0) <= budget
            let burn = (ssm * c.c2 / budget).powi(2).ceil();
            Ok(c.l0 + burn.min(usize::MAX as f64 / 2.0) as usize)
        }
        other => Err(CountingError::NoGuarantee(other)),
    }
}

fn check_eps(eps: f64) -> Result<(), CountingError> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(CountingError::InvalidEpsilon(eps))
    }
}

fn partition_budget(eps: f64, lambda: f64, n: usize) -> f64 {
    eps / (2.0 * (1.0 + lambda) * n as f64)
}

fn log_partition_budget(eps: f64) -> f64 {
    eps / (4.0 * (1.0 / eps).ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum VertexOrder {
    /// Vertices in index order.
    #[default]
    Input,
    /// Repeatedly eliminate a remaining vertex with the fewest remaining
    /// neighbors (ties broken by index).
    MinDegree,
}

#[derive(Debug, Clone, Default)]
pub struct CountOptions {
    pub order: VertexOrder,
    /// Overrides the a-priori depth cap.
    pub max_depth: Option<usize>,
    /// Edge ranking used by every SAW tree; input order when absent.
    pub edge_ordering: Option<EdgeOrdering>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxResult {
    /// `Ẑ` for [`approx_partition`], the estimate of `ln Z` for
    /// [`approx_log_partition`].
    pub estimate: f64,
    /// Estimate of `ln Z` in both cases.
    pub log_estimate: f64,
    /// Certified bound on the relative error of `estimate`.
    pub certified_error: f64,
    pub depth_used: usize,
    pub per_marginal_budget: f64,
    /// Certified bounds on `ln Z`.
    pub log_lower: f64,
    pub log_upper: f64,
    pub regime: Regime,
    pub params: ModelParams,
    /// False outside the regimes where the a-priori analysis applies; the
    /// certified error is still valid.
    pub guaranteed: bool,
}

/// `(1 ± ε)`-approximation of `Z_λ(H)`.
pub fn approx_partition(
    h: &Hypergraph,
    lambda: f64,
    eps: f64,
    opts: &CountOptions,
) -> Result<ApproxResult, CountingError> {
    run(h, lambda, eps, opts, Target::Partition)
}

/// `(1 ± ε)`-approximation of `ln Z_λ(H)`.
pub fn approx_log_partition(
    h: &Hypergraph,
    lambda: f64,
    eps: f64,
    opts: &CountOptions,
) -> Result<ApproxResult, CountingError> {
    run(h, lambda, eps, opts, Target::LogPartition)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Target {
    Partition,
    LogPartition,
}

const MAX_HALVINGS: usize = 40;
/// Depth cap when no a-priori bound exists and none was given.
const FALLBACK_DEPTH_CAP: usize = 64;

fn run(
    h: &Hypergraph,
    lambda: f64,
    eps: f64,
    opts: &CountOptions,
    target: Target,
) -> Result<ApproxResult, CountingError> {
    check_eps(eps)?;
    let params = ModelParams::from_stats(&h.stats(), lambda)?;
    let (d, k) = (params.d, params.k);
    let regime = classify_regime(d, k, lambda);
    let n = h.num_vertices();
    let guaranteed = match target {
        Target::Partition => regime == Regime::Fptas,
        Target::LogPartition => matches!(regime, Regime::Fptas | Regime::CriticalPtas),
    };
    let mut budget = match target {
        Target::Partition => partition_budget(eps, lambda, n.max(1)),
        Target::LogPartition => log_partition_budget(eps),
    };
    if n == 0 {
        return Ok(ApproxResult {
            estimate: if target == Target::Partition { 1.0 } else { 0.0 },
            log_estimate: 0.0,
            certified_error: 0.0,
            depth_used: 0,
            per_marginal_budget: budget,
            log_lower: 0.0,
            log_upper: 0.0,
            regime,
            params,
            guaranteed,
        });
    }
    let cap = opts.max_depth.unwrap_or_else(|| {
        depth_for_error(d, k, lambda, eps, n).unwrap_or(FALLBACK_DEPTH_CAP)
    });
    // A self-avoiding walk visits distinct vertices, so depth n - 1 is exhaustive.
    let cap = cap.min(n.saturating_sub(1)).max(1);
    let order = elimination_order(h, opts.order);
    let ord = opts
        .edge_ordering
        .clone()
        .unwrap_or_else(|| EdgeOrdering::input_order(h));
    let act = vec![lambda; n];

    let mut achieved = f64::INFINITY;
    for _ in 0..=MAX_HALVINGS {
        let marginals: Vec<(RatioInterval, usize)> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut pins = vec![None; n];
                for &u in &order[..i] {
                    pins[u] = Some(Spin::Unoccupied);
                }
                adaptive_marginal(h, order[i], &ord, &pins, &act, budget, cap)
            })
            .collect::<Result<_, _>>()?;
        let mut log_lo = 0.0;
        let mut log_mid = 0.0;
        let mut log_hi = 0.0;
        let mut depth_used = 0;
        for (interval, depth) in &marginals {
            let (plo, phi) = interval.probability_bounds();
            let pmid = interval.probability_midpoint();
            log_lo -= (-plo).ln_1p();
            log_mid -= (-pmid).ln_1p();
            log_hi -= (-phi).ln_1p();
            depth_used = depth_used.max(*depth);
        }
        achieved = match target {
            Target::Partition => {
                f64::max((log_mid - log_lo).exp_m1(), -(log_mid - log_hi).exp_m1())
            }
            Target::LogPartition if log_lo > 0.0 => (log_mid - log_lo).max(log_hi - log_mid) / log_lo,
            Target::LogPartition => f64::INFINITY,
        }
        .max(0.0);
        if achieved <= eps {
            return Ok(ApproxResult {
                estimate: match target {
                    Target::Partition => log_mid.exp(),
                    Target::LogPartition => log_mid,
                },
                log_estimate: log_mid,
                certified_error: achieved,
                depth_used,
                per_marginal_budget: budget,
                log_lower: log_lo,
                log_upper: log_hi,
                regime,
                params,
                guaranteed,
            });
        }
        budget *= 0.5;
    }
    Err(CountingError::NotCertified {
        achieved,
        eps,
        rounds: MAX_HALVINGS,
    })
}

fn adaptive_marginal(
    h: &Hypergraph,
    v: usize,
    ord: &EdgeOrdering,
    pins: &[Option<Spin>],
    act: &[f64],
    budget: f64,
    cap: usize,
) -> Result<(RatioInterval, usize), CountingError> {
    let mut t = 2.min(cap);
    loop {
        let m = truncated_marginal_dense(h, v, ord, pins, act, t);
        let width = m.interval.probability_width();
        if !m.truncated || width <= budget {
            return Ok((m.interval, t));
        }
        if t >= cap {
            return Err(CountingError::DepthCap {
                vertex: v,
                depth: t,
                width,
                budget,
            });
        }
        t = (3 * t).div_ceil(2).min(cap);
    }
}

/// Order in which vertices are pinned unoccupied by the self-reduction.
pub fn elimination_order(h: &Hypergraph, order: VertexOrder) -> Vec<usize> {
    let n = h.num_vertices();
    match order {
        VertexOrder::Input => (0..n).collect(),
        VertexOrder::MinDegree => {
            let mut removed = vec![false; n];
            let mut out = Vec::with_capacity(n);
            for _ in 0..n {
                let v = (0..n)
                    .filter(|&v| !removed[v])
                    .min_by_key(|&v| (live_neighbors(h, v, &removed), v))
                    .expect("a vertex remains");
                removed[v] = true;
                out.push(v);
            }
            out
        }
    }
}

fn live_neighbors(h: &Hypergraph, v: usize, removed: &[bool]) -> usize {
    let mut seen: Vec<usize> = h
        .incident_edges(v)
        .iter()
        .flat_map(|&e| h.edge(e).iter().copied())
        .filter(|&u| u != v && !removed[u])
        .collect();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}
