use std::fmt::Write;

use s4pr::reach::ReachabilityGraph;
use s4pr::PetriNet;

/// Graphviz rendering of a reachability graph. Deadlocks are drawn as
/// double octagons, the root with a bold outline.
pub fn reachability_dot(g: &ReachabilityGraph, net: &PetriNet) -> String {
    let mut out = String::from("digraph reachability {\n  node [shape=box, fontname=\"monospace\"];\n");
    for (i, m) in g.nodes().iter().enumerate() {
        let mut attrs = format!("label=\"M{i} {m}\"");
        if g.successors(i).is_empty() {
            attrs.push_str(", shape=doubleoctagon, color=red");
        }
        if g.roots().contains(&i) {
            attrs.push_str(", style=bold");
        }
        writeln!(out, "  n{i} [{attrs}];").unwrap();
    }
    for e in g.edges() {
        writeln!(out, "  n{} -> n{} [label=\"{}\"];", e.source, e.target, net.transition_name(e.transition)).unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use s4pr::fixture::case_study;

    #[test]
    fn fixture_graph() {
        let cs = case_study();
        let g = ReachabilityGraph::build(&cs.net, &cs.m0, 1000).unwrap();
        let dot = reachability_dot(&g, &cs.net);
        assert!(dot.starts_with("digraph reachability {"));
        assert!(dot.contains("n0 [label=\"M0 (2,0,0,0,1,0,0,1,0,1,2,2)\", style=bold];"));
        assert_eq!(dot.matches(" -> ").count(), g.edge_count());
        assert!(!dot.contains("doubleoctagon"));
    }

    #[test]
    fn deadlock_shape() {
        let cs = case_study();
        let p12 = cs.net.place_id("p12").unwrap();
        let g = ReachabilityGraph::build(&cs.net, &cs.m0.with(p12, 1), 1000).unwrap();
        assert!(reachability_dot(&g, &cs.net).contains("doubleoctagon"));
    }
}
