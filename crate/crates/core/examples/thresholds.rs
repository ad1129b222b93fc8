//! Uniqueness thresholds, fixed points and the regime map.
//!
//!     cargo run --example thresholds

use hypercount::counting::regime_grid;
use hypercount::decay::{
    contraction_ratio, critical_activity, decay_rate_bounds, fixed_point, tree_gap,
    two_periodic_points,
};

fn main() {
    for (d, k) in [(2, 4), (3, 2), (5, 1)] {
        let lc = critical_activity(d, k);
        println!("d = {d}, k = {k}: lambda_c = {lc:.6}");
        for lambda in [0.5 * lc, lc, 2.0 * lc] {
            let bounds = decay_rate_bounds(d, k, lambda, 40);
            println!(
                "  lambda = {lambda:.4}  x = {:.6}  ratio = {:.4}  orbit = {:?}  gap(40) = {:.2e}  bound(40) = {:?}",
                fixed_point(d, k, lambda),
                contraction_ratio(d, k, lambda),
                two_periodic_points(d, k, lambda),
                tree_gap(d, k, lambda, 40),
                bounds.wsm.value(),
            );
        }
    }

    println!("\nregimes at lambda = 1 (rows d = 1..6, columns k = 1..6)");
    for row in regime_grid(1.0, 6, 6) {
        let labels: Vec<String> = row.iter().map(|r| format!("{:<13}", r.label())).collect();
        println!("  {}", labels.join("").trim_end());
    }
}
