use bridgelab::arcs::ArcSystem;
use bridgelab::oracle::PlanarModel;
use proptest::prelude::*;

/// Random half-twist words: (bridge number, [(k, sign)]).
fn words() -> impl Strategy<Value = (usize, Vec<(usize, i8)>)> {
    (2usize..=5).prop_flat_map(|n| {
        let m = 2 * n;
        let letter = (0..m - 1, prop_oneof![Just(1i8), Just(-1i8)]);
        (Just(n), prop::collection::vec(letter, 0..=12))
    })
}

fn engine(n: usize, w: &[(usize, i8)]) -> ArcSystem {
    w.iter().fold(ArcSystem::standard(n), |s, &(k, e)| s.apply_letter(k, e))
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 1000, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn engine_matches_planar_model((n, w) in words()) {
        let s = engine(n, &w);
        let mut model = PlanarModel::standard(n);
        for &(k, e) in &w {
            model.half_twist(k, e);
        }
        prop_assert_eq!(&s, &model.arc_system());
        prop_assert_eq!(s.intersection_count(), model.point_count());
        let layout = s.realize().expect("engine output is realizable");
        let orders = model.interval_orders();
        for (k, order) in orders.iter().enumerate() {
            prop_assert_eq!(&layout.interval_order(k), order);
        }
    }

    #[test]
    fn inverse_cancels((n, w) in words()) {
        let mut s = engine(n, &w);
        for &(k, e) in w.iter().rev() {
            s = s.apply_letter(k, -e);
        }
        prop_assert_eq!(s, ArcSystem::standard(n));
    }

    #[test]
    fn reduction_is_confluent((n, w) in words()) {
        let lazy = w.iter().fold(ArcSystem::standard(n), |s, &(k, e)| s.apply_letter_unreduced(k, e));
        prop_assert_eq!(lazy.reduce(), engine(n, &w));
        prop_assert_eq!(lazy.reduce().reduce(), lazy.reduce());
    }

    #[test]
    fn braid_relation((n, w) in words(), i in 0usize..8, e in prop_oneof![Just(1i8), Just(-1i8)]) {
        let m = 2 * n;
        prop_assume!(i + 2 < m);
        let s = engine(n, &w);
        let lhs = s.apply_letter(i, e).apply_letter(i + 1, e).apply_letter(i, e);
        let rhs = s.apply_letter(i + 1, e).apply_letter(i, e).apply_letter(i + 1, e);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn distant_letters_commute(((n, w), i, d) in words().prop_flat_map(|(n, w)| {
        let m = 2 * n;
        (Just((n, w)), 0..m - 3).prop_flat_map(move |(nw, i)| (Just(nw), Just(i), 2..m - 1 - i)) 
    }), e in prop_oneof![Just(1i8), Just(-1i8)], f in prop_oneof![Just(1i8), Just(-1i8)]) {
        let j = i + d;
        let s = engine(n, &w);
        prop_assert_eq!(s.apply_letter(i, e).apply_letter(j, f), s.apply_letter(j, f).apply_letter(i, e));
    }
}
