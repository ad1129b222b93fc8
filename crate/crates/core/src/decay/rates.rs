//! Extremal boundary sequences on the uniform hypertree and explicit decay
//! rate bounds.
//!
//! `R⁺_ℓ` and `R⁻_ℓ` are root ratios of the `(k+1)`-uniform `d`-ary
//! hypertree of depth `ℓ` with the all-unoccupied and all-occupied
//! boundary. The regular hypertree differs only at the root, which has
//! `d + 1` child edges.

use super::threshold::{contraction_ratio, critical_activity, g_map, is_critical};

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalSequences {
    /// `plus[ℓ - 1] = R⁺_ℓ`.
    pub plus: Vec<f64>,
    /// `minus[ℓ - 1] = R⁻_ℓ`.
    pub minus: Vec<f64>,
}

impl ExtremalSequences {
    pub fn plus(&self, l: usize) -> f64 {
        self.plus[l - 1]
    }

    pub fn minus(&self, l: usize) -> f64 {
        self.minus[l - 1]
    }
}

/// `R⁺_1 = λ`, `R⁻_1 = 0`, and `R^±_{ℓ+1} = λ / (1 + k R^∓_ℓ)^d`.
pub fn extremal_ratio_sequences(d: usize, k: usize, lambda: f64, l_max: usize) -> ExtremalSequences {
    assert!(l_max >= 1, "sequences start at level 1");
    let kf = k as f64;
    let mut plus = Vec::with_capacity(l_max);
    let mut minus = Vec::with_capacity(l_max);
    plus.push(lambda);
    minus.push(0.0);
    for l in 1..l_max {
        plus.push(lambda / (1.0 + kf * minus[l - 1]).powi(d as i32));
        minus.push(lambda / (1.0 + kf * plus[l - 1]).powi(d as i32));
    }
    ExtremalSequences { plus, minus }
}

/// Root ratio of the regular hypertree when every child has ratio `r`.
pub fn regular_tree_root_ratio(d: usize, k: usize, lambda: f64, r: f64) -> f64 {
    lambda / (1.0 + k as f64 * r).powi(d as i32 + 1)
}

/// Ratio gap `R⁺ - R⁻` at the root of the regular hypertree with the
/// extremal boundaries at distance `ℓ`.
pub fn tree_gap(d: usize, k: usize, lambda: f64, l: usize) -> f64 {
    assert!(l >= 1);
    if l == 1 {
        return lambda;
    }
    let s = extremal_ratio_sequences(d, k, lambda, l - 1);
    regular_tree_root_ratio(d, k, lambda, s.minus(l - 1))
        - regular_tree_root_ratio(d, k, lambda, s.plus(l - 1))
}

/// Weak spatial mixing bound at distance `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WsmBound {
    /// May be `+∞` below the critical burn-in.
    Bound(f64),
    /// `λ > λ_c`: the extremal sequences do not merge.
    NonUniqueness,
}

impl WsmBound {
    pub fn value(self) -> Option<f64> {
        match self {
            WsmBound::Bound(x) => Some(x),
            WsmBound::NonUniqueness => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateBounds {
    pub wsm: WsmBound,
    /// Factor converting the weak mixing rate on the regular hypertree
    /// into a strong mixing rate on every smaller hypergraph.
    pub ssm_factor: f64,
}

/// Constants of the `C₂ / √(ℓ - ℓ₀)` bound at `λ = λ_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalConstants {
    pub gamma: f64,
    /// Steps of `g` from `kλ` until within `γ/√2` of `x̂`.
    pub t0: usize,
    pub l0: usize,
    pub c2: f64,
}

impl CriticalConstants {
    pub fn new(d: usize, k: usize) -> Option<Self> {
        let lambda = critical_activity(d, k);
        if !lambda.is_finite() {
            return None;
        }
        let (df, kf) = (d as f64, k as f64);
        let gamma = (3.0 * df * df / ((df + 1.0) * (df - 1.0).powi(3))).sqrt();
        let xh = 1.0 / (df - 1.0);
        let mut x = kf * lambda;
        let mut t0 = 0;
        while x - xh > gamma / std::f64::consts::SQRT_2 {
            x = g_map(d, k, lambda, x);
            t0 += 1;
        }
        let c2 = std::f64::consts::SQRT_2 * gamma * (1.0 + kf * df * lambda) / kf;
        Some(CriticalConstants {
            gamma,
            t0,
            l0: 2 * t0,
            c2,
        })
    }
}

/// `ssm_factor = (1+λ)(λ + (1+kλ)^{d+1}) / λ`; the weak mixing bound is
/// `λ(1+kdλ)·r^{ℓ-4}` below `λ_c` with `r = |f'(x̂)|`, and `C₂/√(ℓ-ℓ₀)` at `λ_c`.
pub fn decay_rate_bounds(d: usize, k: usize, lambda: f64, l: usize) -> RateBounds {
    let kf = k as f64;
    let ssm_factor =
        (1.0 + lambda) * (lambda + (1.0 + kf * lambda).powi(d as i32 + 1)) / lambda;
    let wsm = if is_critical(d, k, lambda) {
        let c = CriticalConstants::new(d, k).expect("critical activity is finite");
        if l > c.l0 {
            WsmBound::Bound(c.c2 / ((l - c.l0) as f64).sqrt())
        } else {
            WsmBound::Bound(f64::INFINITY)
        }
    } else if lambda < critical_activity(d, k) {
        let r = contraction_ratio(d, k, lambda);
        let c1 = lambda * (1.0 + kf * d as f64 * lambda);
        WsmBound::Bound(c1 * r.powi(l as i32 - 4))
    } else {
        WsmBound::NonUniqueness
    };
    RateBounds { wsm, ssm_factor }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_levels() {
        let s = extremal_ratio_sequences(2, 4, 1.0, 3);
        assert_eq!((s.plus(1), s.minus(1)), (1.0, 0.0));
        assert_eq!(s.plus(2), 1.0);
        assert_eq!(s.minus(2), 1.0 / 25.0);
    }

    #[test]
    fn ssm_factor_example() {
        let b = decay_rate_bounds(2, 4, 1.0, 10);
        assert_eq!(b.ssm_factor, 252.0);
        assert!(matches!(decay_rate_bounds(2, 4, 2.0, 10).wsm, WsmBound::NonUniqueness));
    }

    #[test]
    fn geometric_rate_below_threshold() {
        let r = contraction_ratio(2, 4, 0.5);
        let a = decay_rate_bounds(2, 4, 0.5, 20).wsm.value().unwrap();
        let b = decay_rate_bounds(2, 4, 0.5, 21).wsm.value().unwrap();
        assert!((a / b - 1.0 / r).abs() < 1e-12);
    }

    #[test]
    fn inverse_square_root_at_threshold() {
        let c = CriticalConstants::new(2, 4).unwrap();
        let l = c.l0 + 16;
        let a = decay_rate_bounds(2, 4, 1.0, l).wsm.value().unwrap();
        let b = decay_rate_bounds(2, 4, 1.0, c.l0 + 64).wsm.value().unwrap();
        assert!((a / b - 2.0).abs() < 1e-12);
        assert!(decay_rate_bounds(2, 4, 1.0, c.l0).wsm.value().unwrap().is_infinite());
    }

    #[test]
    fn bounds_dominate_gap() {
        for (d, k, lambda) in [(2, 4, 0.5), (3, 2, 0.2), (1, 3, 2.0), (2, 4, 1.0)] {
            for l in 1..200 {
                if let WsmBound::Bound(b) = decay_rate_bounds(d, k, lambda, l).wsm {
                    // the float gap bottoms out at a few ulps of λ
                    let slack = 8.0 * f64::EPSILON * lambda;
                    assert!(tree_gap(d, k, lambda, l) <= b + slack, "({d},{k},{lambda}) at {l}");
                }
            }
        }
    }
}
