use std::cmp::Ordering;

use proptest::prelude::*;

use qoresolve::driver::{
    blow_up_chart, format_trace, is_resolved, relevant_charts, resolve, select_center, ChartState, PathSelector,
    ResolveOptions,
};
use qoresolve::frac::common_denominator;
use qoresolve::invariant::{compare_invariants, Invariant, Level, Nu};
use qoresolve::oracle::{oracle_pairs, BinomialSurface};
use qoresolve::pairs::{classify, normalize, transform_pairs, BlowUpMove, CharPair, Orientation, PairList, Regime};
use qoresolve::Frac;

fn frac(max_num: i64) -> impl Strategy<Value = Frac> {
    (0..=max_num, 1..=9i64).prop_map(|(n, d)| Frac::new(n, d))
}

fn invariant() -> impl Strategy<Value = Invariant> {
    let level = ((1..=12i64, 1..=4i64), 0..=3u32).prop_map(|((n, d), s)| Level { nu: Frac::new(n, d), s });
    let end = prop_oneof![Just(Nu::Zero), Just(Nu::Inf), Just(Nu::Open)];
    (prop::collection::vec(level, 1..=4), end).prop_map(|(levels, end)| Invariant::new(levels, end))
}

/// Pair lists ordered by componentwise divisibility, each pair a step up
/// from the previous one.
fn pair_list() -> impl Strategy<Value = PairList> {
    let step = (frac(6), frac(6)).prop_filter("strictly larger", |(a, b)| !(a.is_zero() && b.is_zero()));
    (frac(12), frac(12), prop::collection::vec(step, 0..3))
        .prop_filter("nonzero first pair", |(l, u, _)| !(l.is_zero() && u.is_zero()))
        .prop_map(|(l, u, steps)| {
            let mut pairs = vec![CharPair::new(l, u)];
            for (dl, du) in steps {
                let last = *pairs.last().unwrap();
                pairs.push(CharPair::new(last.lambda + dl, last.mu + du));
            }
            PairList::from_raw(pairs)
        })
}

fn degree_for(pairs: &PairList) -> u32 {
    let all: Vec<Frac> = pairs.pairs().iter().flat_map(|p| [p.lambda, p.mu]).collect();
    common_denominator(&all) as u32
}

fn mirror(mv: BlowUpMove) -> BlowUpMove {
    match mv {
        BlowUpMove::MonoidalX => BlowUpMove::MonoidalY,
        BlowUpMove::MonoidalY => BlowUpMove::MonoidalX,
        BlowUpMove::QuadTransvX => BlowUpMove::QuadTransvY,
        BlowUpMove::QuadTransvY => BlowUpMove::QuadTransvX,
        BlowUpMove::QuadNonTransvX => BlowUpMove::QuadNonTransvY,
        BlowUpMove::QuadNonTransvY => BlowUpMove::QuadNonTransvX,
        BlowUpMove::QuadNonTransvZ => BlowUpMove::QuadNonTransvZ,
    }
}

const ALL_MOVES: [BlowUpMove; 7] = [
    BlowUpMove::MonoidalX,
    BlowUpMove::MonoidalY,
    BlowUpMove::QuadTransvX,
    BlowUpMove::QuadTransvY,
    BlowUpMove::QuadNonTransvX,
    BlowUpMove::QuadNonTransvY,
    BlowUpMove::QuadNonTransvZ,
];

fn binomial() -> impl Strategy<Value = BinomialSurface> {
    (2..=8u32, 0..=12u32, 0..=12u32).prop_filter_map("irreducible", |(m, a, b)| BinomialSurface::new(m, a, b).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn invariant_order_is_total(a in invariant(), b in invariant(), c in invariant()) {
        let ab = compare_invariants(&a, &b);
        prop_assert_eq!(ab, compare_invariants(&b, &a).reverse());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
        if ab != Ordering::Greater && compare_invariants(&b, &c) != Ordering::Greater {
            prop_assert_ne!(compare_invariants(&a, &c), Ordering::Greater);
        }
    }

    #[test]
    fn invariant_text_round_trips(a in invariant()) {
        let text = a.to_string();
        prop_assert_eq!(text.parse::<Invariant>().unwrap(), a);
    }

    #[test]
    fn zero_precedes_values_precede_infinity(levels in prop::collection::vec(((1..=9i64), 0..=2u32), 1..3), nu in (1..=9i64, 1..=4i64)) {
        let levels: Vec<Level> = levels.into_iter().map(|(n, s)| Level { nu: Frac::int(n), s }).collect();
        let zero = Invariant::new(levels.clone(), Nu::Zero);
        let inf = Invariant::new(levels.clone(), Nu::Inf);
        let mut longer = levels.clone();
        longer.push(Level { nu: Frac::new(nu.0, nu.1), s: 0 });
        let value = Invariant::new(longer, Nu::Inf);
        prop_assert!(zero < value);
        prop_assert!(value < inf);
    }

    #[test]
    fn table_is_symmetric_in_x_and_y(pairs in pair_list()) {
        let m = degree_for(&pairs);
        for mv in ALL_MOVES {
            let direct = transform_pairs(m, &pairs, mv);
            let mirrored = transform_pairs(m, &pairs.swapped(), mirror(mv));
            match (direct, mirrored) {
                (Ok((m1, p1)), Ok((m2, p2))) => {
                    prop_assert_eq!(m1, m2);
                    prop_assert_eq!(p1.swapped(), p2);
                }
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "{:?} legal on one side only: {:?} / {:?}", mv, a, b),
            }
        }
    }

    #[test]
    fn legality_follows_regime(pairs in pair_list()) {
        let m = degree_for(&pairs);
        let transversal = classify(&pairs) != Regime::NonTransversal;
        prop_assert_eq!(transform_pairs(m, &pairs, BlowUpMove::QuadTransvX).is_ok(), transversal);
        prop_assert_eq!(transform_pairs(m, &pairs, BlowUpMove::QuadNonTransvZ).is_ok(), !transversal);
    }

    #[test]
    fn normalization_is_idempotent(pairs in pair_list()) {
        let m = degree_for(&pairs);
        if let Ok(n) = normalize(m, &pairs, Orientation::Canonical) {
            let again = normalize(n.m, &n.pairs, Orientation::Canonical).unwrap();
            prop_assert!(again.moves.is_empty(), "{:?}", again.moves);
            prop_assert_eq!(again.pairs, n.pairs);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Any sequence of chart choices ends at a resolved chart, and the
    /// invariant never increases along the way.
    #[test]
    fn random_walks_terminate_monotonically(s in binomial(), choices in prop::collection::vec(any::<u8>(), 400)) {
        let (m, pairs) = oracle_pairs(&s);
        let mut state = ChartState::root(m, &pairs).unwrap();
        let mut previous = state.invariant().unwrap();
        let mut steps = 0;
        while !is_resolved(&state).unwrap() {
            prop_assert!(steps < choices.len(), "{} did not resolve within {} steps", s, choices.len());
            let center = select_center(&state).unwrap();
            let charts = relevant_charts(&state, center);
            let chart = charts[choices[steps] as usize % charts.len()];
            state = blow_up_chart(&state, center, chart).unwrap();
            let inv = state.invariant().unwrap();
            prop_assert!(inv <= previous, "{}: {} then {}", s, previous, inv);
            previous = inv;
            steps += 1;
        }
    }

    #[test]
    fn parallel_expansion_matches_sequential(s in binomial()) {
        let (m, pairs) = oracle_pairs(&s);
        let root = ChartState::root(m, &pairs).unwrap();
        let seq = resolve(&root, ResolveOptions::default()).unwrap();
        let par = resolve(&root, ResolveOptions { parallel: true, ..ResolveOptions::default() }).unwrap();
        prop_assert_eq!(&seq, &par);
        prop_assert_eq!(format_trace(&seq, &PathSelector::Leftmost), format_trace(&par, &PathSelector::Leftmost));
    }
}
