//! Uniqueness threshold, the hardcore-type map `f(x) = kλ/(1+x)^d`, its
//! fixed point and its two-periodic orbit.

use serde::Serialize;

use crate::error::HypergraphError;
use crate::hypergraph::Stats;

/// Relative tolerance under which `λ` counts as equal to `λ_c`.
pub const CRITICAL_RTOL: f64 = 1e-12;

/// Branching parameters of the uniform regular hypertree and an activity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    pub d: usize,
    pub k: usize,
    pub lambda: f64,
}

impl ModelParams {
    pub fn new(d: usize, k: usize, lambda: f64) -> Result<Self, HypergraphError> {
        if d == 0 || k == 0 {
            return Err(HypergraphError::InvalidParameter(format!(
                "d and k must be at least 1, got d={d}, k={k}"
            )));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(HypergraphError::InvalidActivity(lambda));
        }
        Ok(ModelParams { d, k, lambda })
    }

    /// Parameters of a concrete hypergraph; `d` and `k` are raised to 1 so
    /// that degenerate inputs fall in the always-unique regime.
    pub fn from_stats(stats: &Stats, lambda: f64) -> Result<Self, HypergraphError> {
        Self::new(stats.d.max(1), stats.k.max(1), lambda)
    }

    pub fn critical_activity(&self) -> f64 {
        critical_activity(self.d, self.k)
    }

    pub fn fixed_point(&self) -> f64 {
        fixed_point(self.d, self.k, self.lambda)
    }

    pub fn contraction_ratio(&self) -> f64 {
        contraction_ratio(self.d, self.k, self.lambda)
    }

    pub fn is_critical(&self) -> bool {
        is_critical(self.d, self.k, self.lambda)
    }
}

/// `λ_c = d^d / (k (d-1)^(d+1))`, infinite for `d = 1`.
pub fn critical_activity(d: usize, k: usize) -> f64 {
    if d <= 1 {
        return f64::INFINITY;
    }
    let df = d as f64;
    df.powi(d as i32) / (k as f64 * (df - 1.0).powi(d as i32 + 1))
}

pub fn is_critical(d: usize, k: usize, lambda: f64) -> bool {
    let lc = critical_activity(d, k);
    lc.is_finite() && (lambda - lc).abs() <= CRITICAL_RTOL * lc
}

pub fn f_map(d: usize, k: usize, lambda: f64, x: f64) -> f64 {
    k as f64 * lambda / (1.0 + x).powi(d as i32)
}

pub fn g_map(d: usize, k: usize, lambda: f64, x: f64) -> f64 {
    f_map(d, k, lambda, f_map(d, k, lambda, x))
}

/// The unique positive solution of `x (1+x)^d = kλ`.
pub fn fixed_point(d: usize, k: usize, lambda: f64) -> f64 {
    let kl = k as f64 * lambda;
    if d == 1 {
        return (-1.0 + (1.0 + 4.0 * kl).sqrt()) / 2.0;
    }
    if is_critical(d, k, lambda) {
        return 1.0 / (d as f64 - 1.0);
    }
    // x (1+x)^d is increasing and exceeds kλ at x = kλ.
    bisect(0.0, kl, |x| x * (1.0 + x).powi(d as i32) - kl)
}

/// `|f'(x̂)| = d x̂ / (1 + x̂)`: below 1 exactly in the uniqueness regime.
pub fn contraction_ratio(d: usize, k: usize, lambda: f64) -> f64 {
    if is_critical(d, k, lambda) {
        return 1.0;
    }
    let x = fixed_point(d, k, lambda);
    d as f64 * x / (1.0 + x)
}

/// Fixed points of `g = f∘f`, sorted: `[x̂]` under uniqueness, otherwise
/// `[x⁻, x̂, x⁺]` with `f(x⁻) = x⁺` and `f(x⁺) = x⁻`.
pub fn two_periodic_points(d: usize, k: usize, lambda: f64) -> Vec<f64> {
    let xh = fixed_point(d, k, lambda);
    if lambda <= critical_activity(d, k) || is_critical(d, k, lambda) {
        return vec![xh];
    }
    let h = |x: f64| x - g_map(d, k, lambda, x);
    // x - g(x) is negative at 0 and, because g'(x̂) > 1, positive just
    // below x̂. Shrink the gap until the sign is visible in floating point.
    let mut delta = 0.5 * xh;
    while h(xh - delta) <= 0.0 {
        delta *= 0.5;
        if delta < xh * f64::EPSILON * 4.0 {
            return vec![xh];
        }
    }
    let lower = bisect(0.0, xh - delta, h);
    // x - g(x) is negative just above x̂ and positive at kλ, since g < kλ.
    let kl = k as f64 * lambda;
    let guess = f_map(d, k, lambda, lower);
    let mut delta_up = guess - xh;
    while delta_up > 0.0 && h(xh + delta_up) > 0.0 {
        delta_up *= 0.5;
    }
    let upper = if delta_up > 0.0 {
        bisect(xh + delta_up, kl, h)
    } else {
        guess
    };
    vec![lower, xh, upper]
}

/// Root of a continuous `phi` with `phi(lo) <= 0 < phi(hi)`, to the last bit.
fn bisect(mut lo: f64, mut hi: f64, phi: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if phi(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_values() {
        assert_eq!(critical_activity(2, 4), 1.0);
        assert_eq!(critical_activity(2, 1), 4.0);
        assert!(critical_activity(1, 7).is_infinite());
    }

    #[test]
    fn fixed_point_values() {
        assert!((fixed_point(1, 2, 1.0) - 1.0).abs() < 1e-12);
        assert_eq!(fixed_point(2, 4, 1.0), 1.0);
        assert!(fixed_point(3, 2, 1e-9) < 1e-8);
        let x = fixed_point(3, 2, 0.7);
        assert!((x * (1.0 + x).powi(3) - 1.4).abs() < 1e-12);
    }

    #[test]
    fn contraction_trichotomy() {
        assert_eq!(contraction_ratio(2, 4, 1.0), 1.0);
        let sub = contraction_ratio(2, 4, 0.5);
        assert!(sub > 0.0 && sub < 1.0);
        assert!(contraction_ratio(2, 4, 2.0) > 1.0);
    }

    #[test]
    fn periodic_orbit_above_threshold() {
        assert_eq!(two_periodic_points(2, 4, 1.0), vec![1.0]);
        assert_eq!(two_periodic_points(1, 3, 50.0).len(), 1);
        let pts = two_periodic_points(2, 4, 2.0);
        assert_eq!(pts.len(), 3);
        let (lo, mid, hi) = (pts[0], pts[1], pts[2]);
        assert!(0.0 < lo && lo < mid && mid < hi);
        assert!((f_map(2, 4, 2.0, lo) - hi).abs() < 1e-9);
        assert!((f_map(2, 4, 2.0, hi) - lo).abs() < 1e-9);
        for x in pts {
            assert!((x - g_map(2, 4, 2.0, x)).abs() < 1e-10);
        }
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(0, 1, 1.0).is_err());
        assert!(ModelParams::new(1, 1, 0.0).is_err());
        let p = ModelParams::new(2, 4, 1.0).unwrap();
        assert!(p.is_critical());
    }
}
