use proptest::prelude::*;

use moral_games::game::{
    augment_kantian, BimatrixGame, KantianAnnotation, KantianValue, MixedProfile, Player,
};
use moral_games::valuation::{
    consistency_check, extract_kantian, freq_from_counts, support_residual, Designation,
    EstimateKind, ObservedCounts,
};

fn two_by_two() -> impl Strategy<Value = BimatrixGame> {
    let m = prop::collection::vec(prop::collection::vec(-20.0..20.0f64, 2), 2);
    (m.clone(), m).prop_map(|(a, b)| {
        BimatrixGame::new(
            "g",
            vec!["a".into(), "b".into()],
            vec!["x".into(), "y".into()],
            a,
            b,
        )
        .unwrap()
    })
}

fn interior_profile() -> impl Strategy<Value = MixedProfile> {
    (0.05..0.95f64, 0.05..0.95f64)
        .prop_map(|(x, y)| MixedProfile::new(vec![x, 1.0 - x], vec![y, 1.0 - y]).unwrap())
}

fn designation() -> impl Strategy<Value = Designation> {
    (0usize..2, 0usize..2).prop_map(|(i, j)| Designation::new(["a", "b"][i], ["x", "y"][j]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn augmenting_by_the_estimate_leaves_nothing_to_extract(
        g in two_by_two(),
        obs in interior_profile(),
        d in designation(),
    ) {
        let est = extract_kantian(&g, &obs, &d).unwrap();
        let aug = augment_kantian(&g, &est.annotation()).unwrap();
        let again = extract_kantian(&aug, &obs, &d).unwrap();
        prop_assert!(again.a.k.abs() < 1e-9);
        prop_assert!(again.b.k.abs() < 1e-9);
        let report = consistency_check(&g, &est, &obs).unwrap();
        prop_assert!(report.consistent);
    }

    #[test]
    fn extraction_is_affine_in_injected_k(
        g in two_by_two(),
        obs in interior_profile(),
        d in designation(),
        ka in -10.0..10.0f64,
        kb in -10.0..10.0f64,
    ) {
        let ann = KantianAnnotation::new()
            .with(Player::A, d.a.clone(), KantianValue::Finite(ka))
            .with(Player::B, d.b.clone(), KantianValue::Finite(kb));
        let base = extract_kantian(&g, &obs, &d).unwrap();
        let shifted = extract_kantian(&augment_kantian(&g, &ann).unwrap(), &obs, &d).unwrap();
        prop_assert!((shifted.a.k - (base.a.k - ka)).abs() < 1e-9);
        prop_assert!((shifted.b.k - (base.b.k - kb)).abs() < 1e-9);
    }

    #[test]
    fn estimates_ignore_constant_payoff_shifts(
        g in two_by_two(),
        obs in interior_profile(),
        d in designation(),
        c in -50.0..50.0f64,
    ) {
        let add = |m: &[Vec<f64>]| -> Vec<Vec<f64>> { m.iter().map(|r| r.iter().map(|v| v + c).collect()).collect() };
        let shifted = g.with_payoffs(add(g.payoff_a()), add(g.payoff_b())).unwrap();
        let a = extract_kantian(&g, &obs, &d).unwrap();
        let b = extract_kantian(&shifted, &obs, &d).unwrap();
        prop_assert!((a.a.k - b.a.k).abs() < 1e-9);
        prop_assert!((a.b.k - b.b.k).abs() < 1e-9);
    }

    #[test]
    fn frequencies_sum_to_one_exactly(
        a in prop::collection::vec(0u64..10_000, 1..6),
        b in prop::collection::vec(0u64..10_000, 1..6),
    ) {
        prop_assume!(a.iter().sum::<u64>() > 0 && b.iter().sum::<u64>() > 0);
        let label = |v: &[u64], p: &str| -> Vec<(String, u64)> {
            v.iter().enumerate().map(|(i, n)| (format!("{p}{i}"), *n)).collect()
        };
        let counts = ObservedCounts { a: label(&a, "a"), b: label(&b, "b") };
        let p = freq_from_counts(&counts).unwrap();
        prop_assert_eq!(p.probs_a.iter().sum::<f64>(), 1.0);
        prop_assert_eq!(p.probs_b.iter().sum::<f64>(), 1.0);
    }
}

#[test]
fn pure_play_gives_bounds() {
    let g = BimatrixGame::new(
        "g",
        vec!["a".into(), "b".into()],
        vec!["x".into(), "y".into()],
        vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        vec![vec![1.0, 0.0], vec![0.0, 1.0]],
    )
    .unwrap();
    let obs = MixedProfile::new(vec![1.0, 0.0], vec![0.0, 1.0]).unwrap();
    let est = extract_kantian(&g, &obs, &Designation::new("a", "x")).unwrap();
    assert_eq!(est.a.kind, EstimateKind::LowerBound);
    assert_eq!(est.b.kind, EstimateKind::UpperBound);
    assert!(est.annotation().a.is_empty() && est.annotation().b.is_empty());
}

#[test]
fn constant_game_has_zero_residual() {
    let g = BimatrixGame::new(
        "c",
        vec!["a".into(), "b".into()],
        vec!["x".into(), "y".into()],
        vec![vec![2.0; 2]; 2],
        vec![vec![-1.0; 2]; 2],
    )
    .unwrap();
    let obs = MixedProfile::uniform(2, 2);
    assert_eq!(support_residual(&g, &obs, Player::A), 0.0);
    assert_eq!(support_residual(&g, &obs, Player::B), 0.0);
}

#[test]
fn wrong_shape_is_rejected() {
    let g = BimatrixGame::new(
        "g",
        vec!["a".into(), "b".into(), "c".into()],
        vec!["x".into(), "y".into()],
        vec![vec![0.0; 2]; 3],
        vec![vec![0.0; 2]; 3],
    )
    .unwrap();
    let obs = MixedProfile::uniform(3, 2);
    assert!(extract_kantian(&g, &obs, &Designation::new("a", "x")).is_err());
}
