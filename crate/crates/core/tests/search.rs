use mstiff::diophantine::is_perfect_square;
use mstiff::exact::BigInt;
use mstiff::search::{
    candidate_set, classify_degree, classify_dimension, n_upper_bound, verify_theorem, Budget, DegreeOptions, Parity,
};
use mstiff::stiffness::stiff_exists;
use mstiff::Dim;
use num_traits::ToPrimitive;

fn square(v: u128) -> bool {
    is_perfect_square(&BigInt::from(v)).is_some()
}

#[test]
fn small_dimensions_follow_closed_forms() {
    for d in 3..=30u128 {
        let c = classify_dimension(d, &Budget::unlimited()).unwrap();
        assert!(c.complete, "D = {d}");
        let mut want = vec![1, 2, 3];
        if square(6 * (d + 1) * (d + 2)) {
            want.push(4);
        }
        if d == 4 || square(10 * (d + 1) * (d + 4)) {
            want.push(5);
        }
        assert_eq!(c.degrees, want, "D = {d}");
    }
}

#[test]
fn degree_and_dimension_views_agree() {
    let opts = DegreeOptions { x_bound: 1000, direct_limit: 30 };
    let rows: Vec<Vec<u64>> =
        (3..=30u128).map(|d| classify_dimension(d, &Budget::unlimited()).unwrap().degrees).collect();
    for m in 1..=20u64 {
        let r = classify_degree(m, 30, &opts).unwrap();
        for d in 3..=30u128 {
            let by_dim = rows[(d - 3) as usize].contains(&m);
            assert_eq!(r.dims.contains(d), by_dim, "(m, D) = ({m}, {d})");
        }
    }
}

#[test]
fn pruning_never_drops_a_configuration() {
    for k in 4..=8u64 {
        for parity in [Parity::Even, Parity::Odd] {
            let Ok(set) = candidate_set(k, parity) else { continue };
            let dim: Dim = 2 * k as Dim + 2;
            for n in 2..=500u64 {
                if set.surviving_n.contains(&(n as u128)) {
                    continue;
                }
                let m = parity.degree(n).unwrap();
                assert!(!stiff_exists(m, dim).unwrap().exists(), "(m, D) = ({m}, {dim}) discarded");
            }
        }
    }
}

#[test]
fn surviving_candidates_fail_root_test() {
    for k in 4..=10u64 {
        let set = candidate_set(k, Parity::Even).unwrap();
        let dim: Dim = 2 * k as Dim + 2;
        for &n in set.surviving_n.iter().filter(|&&n| n <= 1000) {
            let v = stiff_exists(2 * n as u64, dim).unwrap();
            assert!(!v.exists(), "n = {n}, D = {dim}");
        }
    }
}

#[test]
fn thresholds_dominate_formula() {
    for d in (12..=40u128).step_by(2) {
        let b = n_upper_bound(d, Parity::Even).unwrap();
        assert!(b.conservative);
        assert!(b.first_excluded > *b.formula_value.as_ref().unwrap());
    }
    assert_eq!(n_upper_bound(8, Parity::Even).unwrap().first_excluded.to_u64(), Some(31));
    assert_eq!(n_upper_bound(12, Parity::Odd).unwrap().first_excluded.to_u64(), Some(10391));
    assert_eq!(n_upper_bound(14, Parity::Odd).unwrap().first_excluded.to_u64(), Some(4153));
}

#[test]
fn classification_is_deterministic() {
    let a = classify_dimension(26, &Budget::unlimited()).unwrap();
    let b = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap()
        .install(|| classify_dimension(26, &Budget::unlimited()).unwrap());
    assert_eq!(a, b);
}

#[test]
fn tagged_statements() {
    for (tag, scale) in [("thm-4.1", 20), ("thm-4.2", 20), ("thm-4.3", 60), ("thm-4.5", 30), ("thm-4.9", 30), ("thm-6.2", 10)] {
        let r = verify_theorem(tag, Some(scale)).unwrap();
        assert!(r.agrees, "{tag}: {:?}", r.mismatches);
        assert!(r.cases > 0);
    }
    let r = verify_theorem("thm-6.1", Some(200)).unwrap();
    assert!(r.agrees && !r.complete);
}
