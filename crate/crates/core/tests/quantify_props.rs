use causet::poset::{CausalSet, EventId};
use causet::quantify::{
    check_synchronized, classify, coordinates, decompose, interval_scalar, project, quantify_event,
    Coordinates, Frame, IntervalClass, ObserverChain, PairQuant,
};
use proptest::prelude::*;

fn dag_with_chain() -> impl Strategy<Value = (CausalSet, Vec<EventId>)> {
    (2usize..40)
        .prop_flat_map(|n| {
            // Ordered low to high so the graph is acyclic; loops are ignored.
            let edge = (0..n, 0..n).prop_map(|(a, b)| (a.min(b), a.max(b)));
            (
                Just(n),
                prop::collection::vec(edge, 0..150),
                prop::collection::btree_set(0..n, 1..8),
            )
        })
        .prop_map(|(n, mut edges, chain)| {
            // Force the chosen events into a chain.
            let chain: Vec<usize> = chain.into_iter().collect();
            edges.extend(chain.windows(2).map(|w| (w[0], w[1])));
            let cs = CausalSet::from_relations(n, edges).unwrap();
            (cs, chain.into_iter().map(EventId::new).collect())
        })
}

fn small_int() -> impl Strategy<Value = f64> {
    (-1000i32..=1000).prop_map(f64::from)
}

proptest! {
    #[test]
    fn projection_matches_exhaustive_scan((cs, events) in dag_with_chain(), first in -5i64..5) {
        let chain = ObserverChain::labelled_from(&cs, events, first).unwrap();
        for x in cs.events() {
            let scanned = chain
                .events()
                .iter()
                .zip(chain.valuations())
                .find(|(&e, _)| cs.precedes_or_eq(x, e))
                .map(|(_, &v)| v);
            prop_assert_eq!(project(&cs, x, &chain), scanned);
        }
    }

    #[test]
    fn projection_is_monotone((cs, events) in dag_with_chain()) {
        let chain = ObserverChain::labelled_from(&cs, events, 0).unwrap();
        for (x, y) in cs.strict_pairs() {
            if let (Some(px), Some(py)) = (project(&cs, x, &chain), project(&cs, y, &chain)) {
                prop_assert!(px <= py);
            }
        }
    }

    #[test]
    fn chain_events_project_to_their_labels((cs, events) in dag_with_chain(), first in -5i64..5) {
        let chain = ObserverChain::labelled_from(&cs, events, first).unwrap();
        for (&e, &v) in chain.events().iter().zip(chain.valuations()) {
            prop_assert_eq!(project(&cs, e, &chain), Some(v));
        }
    }

    #[test]
    fn decomposition_is_exact(p in small_int(), q in small_int()) {
        let pair = PairQuant::new(p, q);
        let d = decompose(pair);
        prop_assert_eq!(d.symmetric + d.antisymmetric, pair);
        let c = coordinates(pair);
        prop_assert_eq!(c.to_pair(), pair);
        prop_assert_eq!(interval_scalar(pair), c.t * c.t - c.x * c.x);
    }

    #[test]
    fn coordinates_invert_pair_formation(t in small_int(), x in small_int()) {
        let c = Coordinates::new(t, x);
        prop_assert_eq!(coordinates(c.to_pair()), c);
    }

    #[test]
    fn class_follows_scalar_sign(p in small_int(), q in small_int()) {
        let pair = PairQuant::new(p, q);
        let s = interval_scalar(pair);
        let class = classify(pair);
        prop_assert_eq!(class == IntervalClass::Timelike, s > 0.0);
        prop_assert_eq!(class == IntervalClass::Spacelike, s < 0.0);
        prop_assert_eq!(class == IntervalClass::Lightlike, s == 0.0);
    }
}

/// Two chains where each tick reaches the other chain's next tick.
fn ladder(ticks: usize) -> (CausalSet, Frame) {
    let mut edges = Vec::new();
    for k in 0..ticks {
        let (p, q) = (2 * k, 2 * k + 1);
        if k + 1 < ticks {
            edges.extend([(p, p + 2), (q, q + 2), (p, q + 2), (q, p + 2)]);
        }
    }
    let cs = CausalSet::from_relations(2 * ticks, edges).unwrap();
    let pick = |offset: usize| (0..ticks).map(|k| EventId::new(2 * k + offset)).collect();
    let p = ObserverChain::labelled_from(&cs, pick(0), 0).unwrap();
    let q = ObserverChain::labelled_from(&cs, pick(1), 0).unwrap();
    let frame = Frame::new(&cs, p, q).unwrap();
    (cs, frame)
}

#[test]
fn ladder_ticks_quantify_to_their_valuations() {
    let (cs, frame) = ladder(10);
    assert!(check_synchronized(&cs, frame.p(), frame.q()).unwrap().ok);
    for (&e, &v) in frame.p().events().iter().zip(frame.p().valuations()) {
        if let Some(pair) = quantify_event(&cs, e, &frame) {
            assert_eq!(pair.p, v as f64);
        }
    }
}
