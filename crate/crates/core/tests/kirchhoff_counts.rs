mod common;

use std::collections::BTreeMap;

use common::{e, l_shape, random_region, strip, v};
use diagdimer_core::kirchhoff::{
    build_system, coverings_with_impurity, edge_probabilities, impurity_probability, solve, solve_p,
    total_coverings, tree_count,
};
use diagdimer_core::lattice::{diagonal_edges, TemperleyTriple};
use diagdimer_core::oracle::{enumerate_coverings, enumerate_spanning_trees, impurity_histogram};
use diagdimer_core::temperley::{host_graph, impurity_support, spanning_trees, Host};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap()
}

/// Exact counts against brute force, edge by edge.
fn check_against_oracle(t: &TemperleyTriple) {
    let sys = build_system(&t.h_perp);
    let det = tree_count(&sys);
    for host in [Host::H, Host::HPerp] {
        let (small, _, _) = host_graph(t, host);
        assert_eq!(BigInt::from(enumerate_spanning_trees(&small).unwrap().len()), det);
    }

    let all = enumerate_coverings(&t.g).unwrap();
    assert_eq!(total_coverings(t).unwrap(), BigInt::from(all.len()));
    let hist = impurity_histogram(&t.g).unwrap();
    let s = solve(t).unwrap();
    let mut sum = BigInt::zero();
    let mut prob = BigRational::zero();
    for d in diagonal_edges(&t.g) {
        let count = s.count(d).unwrap();
        assert_eq!(count, BigInt::from(*hist.get(&d).unwrap_or(&0)), "edge {d}");
        sum += count;
        prob += s.probability(d).unwrap();
    }
    assert_eq!(sum, s.total());
    assert!(prob.is_one());

    for p in s.p.values() {
        assert!(*p > BigRational::zero() && *p <= BigRational::one());
    }

    // p_v is the fraction of spanning trees whose impurity support holds v.
    let trees = spanning_trees(t, Host::H).unwrap();
    let mut hits: BTreeMap<_, i64> = BTreeMap::new();
    for tree in &trees {
        for w in impurity_support(t, tree).unwrap() {
            *hits.entry(w).or_default() += 1;
        }
    }
    for (w, p) in &s.p {
        let k = hits.get(w).copied().unwrap_or(0);
        assert_eq!(*p, q(k, trees.len() as i64), "vertex {w}");
    }
}

#[test]
fn l_shape_values() {
    let t = l_shape();
    let s = solve(&t).unwrap();
    assert_eq!(s.det, BigInt::from(56));
    assert_eq!(s.p[&v(1, 1)], q(1, 7));
    assert_eq!(s.p[&v(3, 1)], q(2, 7));
    assert_eq!(s.p[&v(1, 3)], q(2, 7));
    assert_eq!(s.p[&v(3, 3)], q(1, 1));
    assert_eq!(s.total(), BigInt::from(328));

    let at_13 = e((1, 3), (2, 4));
    assert_eq!(coverings_with_impurity(&t, at_13).unwrap(), BigInt::from(16));
    assert_eq!(impurity_probability(&t, at_13).unwrap(), q(2, 41));
    let at_11 = e((0, 0), (1, 1));
    assert_eq!(coverings_with_impurity(&t, at_11).unwrap(), BigInt::from(8));
    assert_eq!(impurity_probability(&t, at_11).unwrap(), q(1, 41));
    assert_eq!(coverings_with_impurity(&t, t.e_star1).unwrap(), BigInt::from(56));

    // 4 edges at each face, d* + 1 = 3 at f*.
    let per_edge: Vec<_> = edge_probabilities(&t).unwrap();
    assert_eq!(per_edge.len(), 15);
    let sum: BigInt = diagonal_edges(&t.g).iter().map(|&d| s.count(d).unwrap()).sum();
    assert_eq!(sum, BigInt::from(160 + 3 * 56));

    check_against_oracle(&t);
}

#[test]
fn strips_against_oracle() {
    for n in 1..=3 {
        check_against_oracle(&strip(n));
    }
    assert_eq!(total_coverings(&strip(1)).unwrap(), BigInt::from(12));
}

const LP: f64 = 2.0 + 1.732_050_807_568_877_2;
const LM: f64 = 2.0 - 1.732_050_807_568_877_2;

#[test]
fn strip_tree_counts_follow_recurrence() {
    let mut a = (1i64, 4i64);
    for n in 1..=10u32 {
        let sys = build_system(&strip(n).h_perp);
        let count = tree_count(&sys);
        assert_eq!(count, BigInt::from(a.1));
        let closed = (LP.powi(n as i32 + 1) - LM.powi(n as i32 + 1)) / (2.0 * 3f64.sqrt());
        assert!((closed - a.1 as f64).abs() / closed < 1e-12);
        a = (a.1, 4 * a.1 - a.0);
    }
}

#[test]
fn strip_absorption_has_closed_form() {
    for n in 1..=8u32 {
        let sys = build_system(&strip(n).h_perp);
        let p = solve_p(&sys).unwrap();
        let denom = LP.powi(n as i32 + 1) - LM.powi(n as i32 + 1);
        for (k, pj) in p.iter().enumerate() {
            // Faces are ordered away from f*'s opposite end: j = k + 1.
            let j = k as i32 + 1;
            let expected = (LP.powi(j) - LM.powi(j)) / denom;
            assert!((to_f64(pj) - expected).abs() < 1e-12, "n={n} j={j}");
        }
        // Monotone towards f*.
        assert!(p.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn strip_edge_probability_decays_geometrically() {
    // Exact per-edge probability at face n - k tends to λ₊^-k / (6 + 4√3).
    let n = 12;
    let t = strip(n);
    let s = solve(&t).unwrap();
    let constant = 1.0 / (6.0 + 4.0 * 3f64.sqrt());
    for k in 0..4 {
        let face = v(2 * (n as i32 - k) - 1, 1);
        let edge = e((face.x, face.y), (face.x - 1, face.y - 1));
        let exact = to_f64(&s.probability(edge).unwrap());
        let predicted = constant * LP.powi(-k);
        assert!((exact - predicted).abs() / predicted < 1e-4, "k={k}: {exact} vs {predicted}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_regions_match_oracle(
        steps in proptest::collection::vec(any::<u8>(), 0..4),
        pick in any::<usize>(),
    ) {
        let Some(t) = random_region(&steps, pick) else { return Ok(()) };
        prop_assume!(t.g.len() <= 34);
        check_against_oracle(&t);
    }
}
