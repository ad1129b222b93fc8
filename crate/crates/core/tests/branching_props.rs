use hypercount::branching::{
    generate_hn, hat_marginals_from_ratios, hat_matrices, invariant_marginal_residual,
    local_convergence_rate, merged_hat_matrices, next_feasible_n, reversibility,
    reversibility_witness, stationary_distributions, validate_branching, verify_incidence_counts,
    BalanceSolution, BranchingMatrices, Reversibility,
};
use hypercount::decay::{critical_activity, fixed_point, two_periodic_points};
use num::{BigRational, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random composition of `total` into `parts` nonnegative (or positive) summands.
fn composition<R: Rng>(rng: &mut R, total: u32, parts: usize, positive: bool) -> Vec<u32> {
    let base = u32::from(positive);
    let mut out = vec![base; parts];
    for _ in 0..total - base * parts as u32 {
        out[rng.gen_range(0..parts)] += 1;
    }
    out
}

/// Valid matrices with up to three types on each side, or `None` when the
/// draw is reducible or cannot be completed.
fn random_matrices(seed: u64) -> Option<BranchingMatrices> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tv = rng.gen_range(1..=3);
    let te = rng.gen_range(1..=3);
    let dsum = rng.gen_range(2..=6);
    let d_rows: Vec<Vec<u32>> = (0..tv).map(|_| composition(&mut rng, dsum, te, false)).collect();
    let support: Vec<Vec<usize>> = (0..te).map(|j| (0..tv).filter(|&i| d_rows[i][j] > 0).collect()).collect();
    let widest = support.iter().map(Vec::len).max()? as u32;
    if support.iter().any(Vec::is_empty) {
        return None;
    }
    let ksum = rng.gen_range(widest.max(2)..=widest.max(2) + 3);
    let k_rows: Vec<Vec<u32>> = support
        .iter()
        .map(|sup| {
            let c = composition(&mut rng, ksum, sup.len(), true);
            let mut row = vec![0; tv];
            for (&i, x) in sup.iter().zip(c) {
                row[i] = x;
            }
            row
        })
        .collect();
    let b = BranchingMatrices::new(dsum as usize - 1, ksum as usize - 1, &d_rows, &k_rows).ok()?;
    validate_branching(&b).ok()?;
    Some(b)
}

/// Always reversible: a single type on one side, so every balance
/// equation involves a distinct unknown on the other.
fn reversible_star(seed: u64) -> BranchingMatrices {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.gen_range(1..=3);
    let total = rng.gen_range(m.max(2)..=m.max(2) + 3) as u32;
    let other = rng.gen_range(2..=5u32);
    let split = composition(&mut rng, total, m, true);
    let column: Vec<Vec<u32>> = (0..m).map(|_| vec![other]).collect();
    if rng.gen_bool(0.5) {
        BranchingMatrices::new(other as usize - 1, total as usize - 1, &column, &[split]).unwrap()
    } else {
        BranchingMatrices::new(total as usize - 1, other as usize - 1, &[split], &column).unwrap()
    }
}

fn balance_holds(b: &BranchingMatrices, sol: &BalanceSolution) -> bool {
    let total: BigRational = sol.p.iter().chain(&sol.q).sum();
    if total != BigRational::from_integer(1.into()) {
        return false;
    }
    if sol.p.iter().chain(&sol.q).any(|x| !x.is_positive()) {
        return false;
    }
    (0..b.num_vertex_types()).all(|i| {
        (0..b.num_edge_types()).all(|j| {
            &sol.p[i] * BigRational::from_integer(b.d_entry(i, j).into())
                == &sol.q[j] * BigRational::from_integer(b.k_entry(j, i).into())
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn reversibility_is_consistent(seed in any::<u64>()) {
        let Some(b) = random_matrices(seed) else { return Ok(()) };
        let rev = reversibility(&b).unwrap();
        prop_assert_eq!(reversibility_witness(&b).unwrap().is_none(), rev.is_reversible());
        match rev {
            Reversibility::Reversible(sol) => {
                prop_assert!(balance_holds(&b, &sol));
                let ratio = sol.p.iter().sum::<BigRational>() / sol.q.iter().sum::<BigRational>();
                let want = BigRational::new((b.k() + 1).into(), (b.d() + 1).into());
                prop_assert_eq!(ratio, want);
                let st = stationary_distributions(&b).unwrap();
                let (p, q) = (st.p_f64(), st.q_f64());
                for j in 0..b.num_edge_types() {
                    let pd: f64 = (0..b.num_vertex_types()).map(|i| p[i] * b.d_entry(i, j) as f64).sum();
                    prop_assert!((pd / (b.d() + 1) as f64 - q[j]).abs() <= 1e-12);
                }
                for i in 0..b.num_vertex_types() {
                    let qk: f64 = (0..b.num_edge_types()).map(|j| q[j] * b.k_entry(j, i) as f64).sum();
                    prop_assert!((qk / (b.k() + 1) as f64 - p[i]).abs() <= 1e-12);
                }
            }
            Reversibility::NotReversible { vertex_type, edge_type } => {
                prop_assert!(vertex_type < b.num_vertex_types() && edge_type < b.num_edge_types());
                prop_assert!(stationary_distributions(&b).is_err());
            }
        }
    }

    #[test]
    fn generated_graphs_have_exact_type_counts(seed in any::<u64>(), n in 1usize..300) {
        let b = if seed % 2 == 0 {
            reversible_star(seed)
        } else {
            match random_matrices(seed) {
                Some(b) if reversibility(&b).unwrap().is_reversible() => b,
                _ => return Ok(()),
            }
        };
        let Reversibility::Reversible(sol) = reversibility(&b).unwrap() else { unreachable!() };
        let n = next_feasible_n(&b, &sol, n);
        let h = generate_hn(&b, n, seed).unwrap();
        prop_assert!(verify_incidence_counts(&h, &b).is_ok());
        let degrees: usize = (0..h.num_vertices()).map(|v| h.incident_edges(v).len()).sum();
        let sizes: usize = h.edges().iter().map(Vec::len).sum();
        prop_assert_eq!(degrees, sizes);
        prop_assert_eq!(degrees, h.num_vertices() * (b.d() + 1));
        prop_assert_eq!(sizes, h.num_edges() * (b.k() + 1));
        for (s, p) in sol.p.iter().enumerate() {
            let want = (p * BigRational::from_integer(n.into())).ceil().to_integer().to_usize().unwrap();
            prop_assert_eq!(h.vertex_types().iter().filter(|&&t| t == s).count(), want);
        }
        let again = generate_hn(&b, n, seed).unwrap();
        prop_assert_eq!(again.edges(), h.edges());
    }

    #[test]
    fn hat_residual_vanishes_on_periodic_orbits(d in 2usize..=5, k in 1usize..=5, scale in 0.2f64..6.0) {
        let lambda = critical_activity(d, k) * scale;
        let pts = two_periodic_points(d, k, lambda);
        let (x, y) = (pts[pts.len() - 1], pts[0]);
        let (pp, pm) = hat_marginals_from_ratios(k, x, y);
        let r = invariant_marginal_residual(&hat_matrices(d, k), lambda, &[pp, pm]).unwrap();
        prop_assert!(r.iter().all(|e| e.abs() <= 1e-9), "{:?}", r);
    }

    #[test]
    fn single_type_residual_root_is_the_fixed_point(d in 1usize..=5, k in 1usize..=5, lambda in 0.01f64..5.0) {
        let b = BranchingMatrices::single_type(d, k);
        let res = |p: f64| invariant_marginal_residual(&b, lambda, &[p]).unwrap()[0];
        let (mut lo, mut hi) = (0.0, 1.0 / (k as f64 + 1.0) * (1.0 - 1e-15));
        prop_assert!(res(lo) < 0.0 && res(hi) > 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if res(mid) < 0.0 { lo = mid } else { hi = mid }
        }
        let p = 0.5 * (lo + hi);
        prop_assert!(res(p).abs() <= 1e-10);
        let x = k as f64 * p / (1.0 - (k as f64 + 1.0) * p);
        let xh = fixed_point(d, k, lambda);
        prop_assert!((x - xh).abs() <= 1e-8 * xh.max(1.0), "{} vs {}", x, xh);
    }
}

#[test]
fn hat_reversible_only_for_unit_parameters() {
    for d in 1..=8 {
        for k in 1..=8 {
            let rev = reversibility(&hat_matrices(d, k)).unwrap().is_reversible();
            assert_eq!(rev, d * k == 1, "d = {d}, k = {k}");
        }
        assert!(reversibility(&merged_hat_matrices(d)).unwrap().is_reversible());
    }
}

#[test]
fn reversible_star_is_reversible() {
    for seed in 0..20 {
        assert!(reversibility(&reversible_star(seed)).unwrap().is_reversible());
    }
}

#[test]
fn local_structure_converges_with_size() {
    let b = BranchingMatrices::single_type(2, 2);
    let mut last = 0.0;
    for n in [300, 3000, 30000] {
        let h = generate_hn(&b, n, 11).unwrap();
        let f = local_convergence_rate(&h, &b, 2, 2000, 5).unwrap()[0].unwrap();
        assert!(f + 0.02 >= last, "fraction dropped from {last} to {f} at n = {n}");
        last = f;
    }
    assert!(last > 0.9);
}

#[test]
fn residual_is_zero_only_inside_the_domain() {
    let b = BranchingMatrices::single_type(2, 2);
    assert!(invariant_marginal_residual(&b, 1.0, &[0.34]).is_err());
    assert!(!invariant_marginal_residual(&b, 1.0, &[0.1]).unwrap()[0].is_zero());
}
