use archsteer_core::evaluation::ObjectiveVector;
use archsteer_core::indicators::{
    a12, coverage, entropy_tradeoff, epsilon, histogram_entropy, hypervolume, igd_plus,
    kde_grid, mann_whitney_u, nadir, pca_project, tree_coverage, SequenceTree, LABEL_BINS,
};
use archsteer_core::refactoring::RefactoringAction;
use archsteer_oracles as oracle;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn hypervolume_matches_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..15 {
        let d = 2 + i % 3;
        let front = oracle::random_front(&mut rng, d, 10);
        let r = nadir(&front).unwrap();
        let hv = hypervolume(&front, &r).unwrap().volume;
        let mc = oracle::monte_carlo_hypervolume(&front, &r, 200_000, i as u64);
        assert!((hv - mc).abs() <= 0.01 * mc, "d={d}: {hv} vs {mc}");
    }
}

#[test]
fn distance_indicators_match_loops() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..200 {
        let d = 2 + i % 3;
        let a = oracle::random_front(&mut rng, d, 10);
        let b = oracle::random_front(&mut rng, d, 10);
        assert!((igd_plus(&a, &b).unwrap() - oracle::igd_plus(&a, &b)).abs() < 1e-12);
        assert!((epsilon(&a, &b).unwrap() - oracle::epsilon(&a, &b)).abs() < 1e-12);
        assert!((coverage(&a, &b).unwrap() - oracle::coverage(&a, &b)).abs() < 1e-12);
        assert_eq!(coverage(&a, &a).unwrap(), 1.0);
        assert_eq!(epsilon(&a, &a).unwrap(), 0.0);
        assert_eq!(igd_plus(&a, &a).unwrap(), 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn hypervolume_is_monotone(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let front = oracle::random_front(&mut rng, 3, 10);
        let r = vec![1.5; 3];
        let full = hypervolume(&front, &r).unwrap().volume;
        let fewer = hypervolume(&front[1..], &r).unwrap().volume;
        prop_assert!(fewer <= full + 1e-15);
        let mut more = front.clone();
        more.push((0..3).map(|_| rng.random_range(0.0..1.5)).collect());
        prop_assert!(hypervolume(&more, &r).unwrap().volume >= full - 1e-15);
    }

    #[test]
    fn a12_is_complementary_and_rank_based(a in prop::collection::vec(-100.0f64..100.0, 1..12),
                                           b in prop::collection::vec(-100.0f64..100.0, 1..12)) {
        let x = a12(&a, &b).unwrap();
        prop_assert!((x - oracle::a12(&a, &b)).abs() < 1e-15);
        let tie_free = a.iter().all(|v| !b.contains(v));
        if tie_free {
            prop_assert!((x + a12(&b, &a).unwrap() - 1.0).abs() < 1e-12);
        }
        let f = |v: &f64| v.powi(3) + 2.0 * v;
        let (fa, fb): (Vec<f64>, Vec<f64>) = (a.iter().map(f).collect(), b.iter().map(f).collect());
        prop_assert_eq!(a12(&fa, &fb).unwrap(), x);
    }

    #[test]
    fn exact_p_matches_enumeration(a in prop::collection::vec(0u8..6, 1..=8),
                                   b in prop::collection::vec(0u8..6, 1..=8)) {
        let a: Vec<f64> = a.into_iter().map(f64::from).collect();
        let b: Vec<f64> = b.into_iter().map(f64::from).collect();
        let r = mann_whitney_u(&a, &b).unwrap();
        prop_assert!(r.exact);
        prop_assert!((r.p_value - oracle::mann_whitney_enumerated(&a, &b)).abs() < 1e-12);
    }
}

#[test]
fn entropy_endpoints() {
    let mut single = vec![0; LABEL_BINS];
    single[17] = 40;
    assert_eq!(histogram_entropy(&single), 0.0);
    let norm = (LABEL_BINS as f64).ln();
    assert!((histogram_entropy(&vec![3; LABEL_BINS]) / norm - 1.0).abs() < 1e-12);
    let mut quarter = vec![0; LABEL_BINS];
    for c in quarter.iter_mut().take(25) {
        *c = 2;
    }
    assert!((histogram_entropy(&quarter) / norm - 0.5).abs() < 1e-12);
    let same = vec![ObjectiveVector::new(0.1, 0.9, 3.0, 2); 5];
    assert_eq!(entropy_tradeoff(&same).unwrap(), 0.0);
}

#[test]
fn pca_on_isotropic_cloud_splits_evenly() {
    let pts: Vec<[f64; 2]> = (0..8)
        .map(|i| {
            let t = i as f64 * std::f64::consts::FRAC_PI_4;
            [t.cos(), t.sin()]
        })
        .collect();
    let p = pca_project(&pts).unwrap();
    assert_eq!(p.explained.len(), 2);
    assert!((p.explained[0] - 0.5).abs() < 1e-9 && (p.explained[1] - 0.5).abs() < 1e-9);
    let g = kde_grid(&p.points, None, 64).unwrap();
    assert!((g.mass() - 1.0).abs() < 0.02);
}

#[test]
fn tree_coverage_counts_shared_paths() {
    let c = |n: &str| RefactoringAction::Clon { node: n.into() };
    let reference = SequenceTree::from_sequences([&[c("a"), c("b")][..], &[c("a"), c("c")][..]]);
    assert_eq!(reference.size(), 3);
    let same = SequenceTree::from_sequences([&[c("b"), c("a")][..]]);
    assert_eq!(tree_coverage(&same, &reference), 0.0);
    let part = SequenceTree::from_sequences([&[c("a"), c("b")][..]]);
    assert!((tree_coverage(&part, &reference) - 2.0 / 3.0).abs() < 1e-15);
    assert_eq!(tree_coverage(&reference, &reference), 1.0);
}
