use causet::poset::{CausalSet, EventId, Relation};
use proptest::prelude::*;

fn dag() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1usize..40).prop_flat_map(|n| {
        // Ordered low to high so the graph is acyclic; loops are ignored.
        let edge = (0..n, 0..n).prop_map(|(a, b)| (a.min(b), a.max(b)));
        (Just(n), prop::collection::vec(edge, 0..120))
    })
}

fn reachable(n: usize, edges: &[(usize, usize)], from: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        for &(a, b) in edges {
            if a == v && a != b && !seen[b] {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    seen
}

proptest! {
    #[test]
    fn closure_equals_path_existence((n, edges) in dag()) {
        let cs = CausalSet::from_relations(n, edges.iter().copied()).unwrap();
        for a in 0..n {
            let seen = reachable(n, &edges, a);
            for (b, &r) in seen.iter().enumerate() {
                prop_assert_eq!(cs.precedes(EventId::new(a), EventId::new(b)), r);
            }
        }
    }

    #[test]
    fn order_is_transitive_and_antisymmetric((n, edges) in dag()) {
        let cs = CausalSet::from_relations(n, edges).unwrap();
        let ids: Vec<EventId> = cs.events().collect();
        for &a in &ids {
            prop_assert!(!cs.precedes(a, a));
            for &b in &ids {
                prop_assert!(!(cs.precedes(a, b) && cs.precedes(b, a)));
                for &c in &ids {
                    if cs.precedes(a, b) && cs.precedes(b, c) {
                        prop_assert!(cs.precedes(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn rebuilding_from_covers_is_idempotent((n, edges) in dag()) {
        let cs = CausalSet::from_relations(n, edges).unwrap();
        let covers: Vec<(usize, usize)> = cs.cover_pairs().map(|(a, b)| (a.index(), b.index())).collect();
        let again = CausalSet::from_relations(n, covers.iter().copied()).unwrap();
        prop_assert_eq!(&again, &cs);
        let covers_again: Vec<(usize, usize)> = again.cover_pairs().map(|(a, b)| (a.index(), b.index())).collect();
        prop_assert_eq!(covers_again, covers);
        let all: Vec<(usize, usize)> = cs.strict_pairs().map(|(a, b)| (a.index(), b.index())).collect();
        prop_assert_eq!(&CausalSet::from_relations(n, all).unwrap(), &cs);
    }

    #[test]
    fn covers_have_nothing_in_between((n, edges) in dag()) {
        let cs = CausalSet::from_relations(n, edges).unwrap();
        for (a, b) in cs.cover_pairs() {
            prop_assert!(cs.precedes(a, b));
            prop_assert!(!cs.events().any(|c| cs.precedes(a, c) && cs.precedes(c, b)));
        }
    }

    #[test]
    fn topological_order_is_a_linear_extension((n, edges) in dag()) {
        let cs = CausalSet::from_relations(n, edges).unwrap();
        let mut position = vec![0; n];
        for (i, e) in cs.topological_order().iter().enumerate() {
            position[e.index()] = i;
        }
        for (a, b) in cs.strict_pairs() {
            prop_assert!(position[a.index()] < position[b.index()]);
        }
    }

    #[test]
    fn relation_is_consistent((n, edges) in dag(), a in 0usize..40, b in 0usize..40) {
        let cs = CausalSet::from_relations(n, edges).unwrap();
        let (a, b) = (EventId::new(a % n), EventId::new(b % n));
        let expected = if a == b {
            Relation::Equal
        } else if cs.precedes(a, b) {
            Relation::Before
        } else if cs.precedes(b, a) {
            Relation::After
        } else {
            Relation::Incomparable
        };
        prop_assert_eq!(cs.relation(a, b).unwrap(), expected);
    }
}
