use std::collections::BTreeSet;

use proptest::prelude::*;

use s4pr::fixture::case_study;
use s4pr::gmec::{build_supervisor, Gmec, SupervisorPlan};
use s4pr::io::{NetDocument, S4prNet};
use s4pr::reach::{ExploreOrder, ReachabilityGraph, Sccs};
use s4pr::{Marking, PlaceId};

fn reachable(succ: &[Vec<usize>], from: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([from]);
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        for &w in &succ[v] {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen
}

fn digraph() -> impl Strategy<Value = Vec<Vec<usize>>> {
    (1..40usize).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(0..n, 0..4), n))
}

fn fixture_marking() -> impl Strategy<Value = Marking> {
    // p12 and p11 capacities vary; everything else stays at the fixture values
    (0..=3u32, 0..=3u32, 0..=2u32).prop_map(|(p10, p11, p12)| {
        Marking::new(vec![2, 0, 0, 0, 1, 0, 0, 1, 0, p10, p11, p12])
    })
}

proptest! {
    #[test]
    fn scc_matches_mutual_reachability(succ in digraph()) {
        let sccs = Sccs::compute(&succ);
        let reach: Vec<BTreeSet<usize>> = (0..succ.len()).map(|v| reachable(&succ, v)).collect();
        for u in 0..succ.len() {
            for v in 0..succ.len() {
                let same = reach[u].contains(&v) && reach[v].contains(&u);
                prop_assert_eq!(sccs.component_of(u) == sccs.component_of(v), same);
            }
        }
        for (u, out) in succ.iter().enumerate() {
            for &w in out {
                prop_assert!(sccs.component_of(w) <= sccs.component_of(u));
            }
        }
        for c in sccs.terminal(&succ) {
            let v = sccs.members(c)[0];
            prop_assert!(reach[v].iter().all(|w| sccs.component_of(*w) == c));
        }
    }

    #[test]
    fn exploration_order_does_not_change_the_state_space(m0 in fixture_marking()) {
        let cs = case_study();
        let bfs = ReachabilityGraph::build_with(&cs.net, std::slice::from_ref(&m0), 10_000, ExploreOrder::Breadth).unwrap();
        let dfs = ReachabilityGraph::build_with(&cs.net, &[m0], 10_000, ExploreOrder::Depth).unwrap();
        prop_assert_eq!(bfs.sorted_markings(), dfs.sorted_markings());
        prop_assert_eq!(bfs.edge_count(), dfs.edge_count());
        let edges = |g: &ReachabilityGraph| -> BTreeSet<(Marking, usize, Marking)> {
            g.edges().iter().map(|e| (g.node(e.source).clone(), e.transition.0, g.node(e.target).clone())).collect()
        };
        prop_assert_eq!(edges(&bfs), edges(&dfs));
    }

    #[test]
    fn semiflows_hold_on_every_reachable_marking(m0 in fixture_marking()) {
        let cs = case_study();
        let g = ReachabilityGraph::build(&cs.net, &m0, 10_000).unwrap();
        for flow in cs.structure.semiflows.values() {
            let expected = flow.dot(&m0);
            for m in g.nodes() {
                prop_assert_eq!(flow.dot(m), expected);
            }
        }
    }

    #[test]
    fn monitor_equality_holds_everywhere(w2 in 0..3u32, w3 in 0..3u32, w4 in 0..3u32, b in 0..4u32) {
        let cs = case_study();
        let g = Gmec::new(vec![(PlaceId(1), w2), (PlaceId(2), w3), (PlaceId(3), w4)], b);
        let plan = SupervisorPlan { constraints: vec![g.clone()], covered: vec![vec![]], optimality_gap: 0 };
        let (controlled, m) = build_supervisor(&cs.net, &plan, &cs.m0).unwrap();
        let rg = ReachabilityGraph::build(&controlled, &m, 10_000).unwrap();
        for m in rg.nodes() {
            prop_assert_eq!(g.value(m) + u64::from(m[PlaceId(12)]), u64::from(b));
            prop_assert!(g.is_satisfied(&m.truncated(12)));
        }
    }

    #[test]
    fn gmec_normalizes_terms(terms in prop::collection::vec((0..6usize, 0..3u32), 0..8), b in 0..5u32) {
        let g = Gmec::new(terms.iter().map(|&(p, w)| (PlaceId(p), w)).collect(), b);
        let places: Vec<PlaceId> = (0..6).map(PlaceId).collect();
        for (k, &p) in places.iter().enumerate() {
            let sum: u32 = terms.iter().filter(|t| t.0 == k).map(|t| t.1).sum();
            prop_assert_eq!(g.weight(p), sum);
        }
        prop_assert!(g.weights().windows(2).all(|w| w[0].0 < w[1].0));
        prop_assert!(g.weights().iter().all(|&(_, w)| w > 0));
    }

    #[test]
    fn document_round_trip(tokens in prop::collection::vec(0..4u32, 12)) {
        let cs = case_study();
        let net = S4prNet { m0: Marking::new(tokens), ..cs };
        let doc = net.document();
        let text = doc.to_json();
        let again = NetDocument::parse(&text).unwrap();
        prop_assert_eq!(&again, &doc);
        prop_assert_eq!(again.build().unwrap(), net);
    }
}
