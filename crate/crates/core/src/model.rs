//! S4PR structure: process subnets, resource places and their P-semiflows.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::net::{Marking, PetriNet, PlaceId, PlaceRole, TransitionId};

/// Non-negative place weights `I_r` of the P-semiflow of a resource.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiFlow {
    pub resource: PlaceId,
    weights: Vec<(PlaceId, u32)>,
}

impl SemiFlow {
    pub fn new(resource: PlaceId, mut weights: Vec<(PlaceId, u32)>) -> Self {
        weights.retain(|&(_, w)| w > 0);
        weights.sort_unstable();
        SemiFlow { resource, weights }
    }

    /// Support with weights, in place order.
    pub fn weights(&self) -> &[(PlaceId, u32)] {
        &self.weights
    }

    pub fn weight(&self, p: PlaceId) -> u32 {
        self.weights.iter().find(|(q, _)| *q == p).map_or(0, |(_, w)| *w)
    }

    pub fn support(&self) -> impl Iterator<Item = PlaceId> + '_ {
        self.weights.iter().map(|(p, _)| *p)
    }

    pub fn dot(&self, m: &Marking) -> u64 {
        self.weights.iter().map(|&(p, w)| u64::from(w) * u64::from(m[p])).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct S4prStructure {
    /// `idle_places[i]` is the idle place of subnet `i + 1`.
    pub idle_places: Vec<PlaceId>,
    pub operation_places: Vec<Vec<PlaceId>>,
    pub subnet_transitions: Vec<Vec<TransitionId>>,
    pub reliable: Vec<PlaceId>,
    pub unreliable: Vec<PlaceId>,
    pub semiflows: BTreeMap<PlaceId, SemiFlow>,
}

impl S4prStructure {
    /// Reads the subnet partition from place roles and subnet tags. Semiflows
    /// are computed for every resource that admits one; the rest are left out
    /// and reported by [`validate_s4pr`].
    pub fn from_net(net: &PetriNet, unreliable: &[PlaceId]) -> Result<Self> {
        let subnets = net
            .places()
            .iter()
            .filter(|p| matches!(p.role, PlaceRole::Idle | PlaceRole::Operation))
            .map(|p| p.subnet)
            .chain(net.transitions().iter().map(|t| t.subnet))
            .max()
            .unwrap_or(0);
        let mut idle_places = vec![None; subnets];
        let mut operation_places = vec![Vec::new(); subnets];
        let mut subnet_transitions = vec![Vec::new(); subnets];
        for p in net.place_ids() {
            let place = net.place(p);
            match place.role {
                PlaceRole::Idle | PlaceRole::Operation if place.subnet == 0 => {
                    return Err(Error::Argument(format!(
                        "process place `{}` has no subnet",
                        place.name
                    )))
                }
                PlaceRole::Idle => {
                    if idle_places[place.subnet - 1].replace(p).is_some() {
                        return Err(Error::Argument(format!(
                            "subnet {} has more than one idle place",
                            place.subnet
                        )));
                    }
                }
                PlaceRole::Operation => operation_places[place.subnet - 1].push(p),
                _ => {}
            }
        }
        for t in net.transition_ids() {
            let s = net.transition(t).subnet;
            if s > 0 {
                subnet_transitions[s - 1].push(t);
            }
        }
        let idle_places = idle_places
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| Error::Argument(format!("subnet {} has no idle place", i + 1))))
            .collect::<Result<Vec<_>>>()?;
        let resources = net.places_with_role(PlaceRole::Resource);
        for &u in unreliable {
            if !resources.contains(&u) {
                return Err(Error::NotResource(net.place_name(u).to_string()));
            }
        }
        let reliable = resources.iter().copied().filter(|r| !unreliable.contains(r)).collect();
        let mut unreliable = unreliable.to_vec();
        unreliable.sort_unstable();
        unreliable.dedup();
        let mut s = S4prStructure {
            idle_places,
            operation_places,
            subnet_transitions,
            reliable,
            unreliable,
            semiflows: BTreeMap::new(),
        };
        for r in resources {
            if let Ok(sf) = resource_semiflow(net, r) {
                s.semiflows.insert(r, sf);
            }
        }
        Ok(s)
    }

    pub fn subnet_count(&self) -> usize {
        self.idle_places.len()
    }

    pub fn resources(&self) -> Vec<PlaceId> {
        let mut all: Vec<PlaceId> = self.reliable.iter().chain(&self.unreliable).copied().collect();
        all.sort_unstable();
        all
    }

    pub fn all_operation_places(&self) -> Vec<PlaceId> {
        let mut all: Vec<PlaceId> = self.operation_places.iter().flatten().copied().collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    /// 1-based subnet owning operation place `p`.
    pub fn subnet_of(&self, p: PlaceId) -> Option<usize> {
        self.operation_places.iter().position(|ops| ops.contains(&p)).map(|i| i + 1)
    }

    pub fn is_unreliable(&self, r: PlaceId) -> bool {
        self.unreliable.contains(&r)
    }

    pub fn semiflow(&self, r: PlaceId) -> Option<&SemiFlow> {
        self.semiflows.get(&r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DiagnosticCode {
    SharedOperationPlace,
    SharedTransition,
    EmptySubnet,
    NotStateMachine,
    NotStronglyConnected,
    CycleAvoidsIdle,
    ResourceClassOverlap,
    NoSemiflow,
    IdleUnmarked,
    OperationMarked,
    ResourceCapacity,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticCode::SharedOperationPlace => "SHARED_OPERATION_PLACE",
            DiagnosticCode::SharedTransition => "SHARED_TRANSITION",
            DiagnosticCode::EmptySubnet => "EMPTY_SUBNET",
            DiagnosticCode::NotStateMachine => "NOT_STATE_MACHINE",
            DiagnosticCode::NotStronglyConnected => "NOT_STRONGLY_CONNECTED",
            DiagnosticCode::CycleAvoidsIdle => "CYCLE_AVOIDS_IDLE",
            DiagnosticCode::ResourceClassOverlap => "RESOURCE_CLASS_OVERLAP",
            DiagnosticCode::NoSemiflow => "NO_SEMIFLOW",
            DiagnosticCode::IdleUnmarked => "IDLE_UNMARKED",
            DiagnosticCode::OperationMarked => "OPERATION_MARKED",
            DiagnosticCode::ResourceCapacity => "RESOURCE_CAPACITY",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    pub message: String,
}

impl Diagnostic {
    fn new(code: DiagnosticCode, message: impl Into<String>) -> Self {
        Diagnostic { code, message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code.as_str(), self.message)
    }
}

/// Checks the S4PR class rules: disjoint subnets, every subnet a strongly
/// connected state machine whose cycles all pass through its idle place,
/// disjoint reliable/unreliable classes and one semiflow per resource.
pub fn validate_s4pr(net: &PetriNet, s: &S4prStructure) -> Vec<Diagnostic> {
    use DiagnosticCode::*;
    let mut out = Vec::new();
    let n = s.subnet_count();

    for i in 0..n {
        for j in i + 1..n {
            let shared: Vec<&str> = s.operation_places[i]
                .iter()
                .filter(|p| s.operation_places[j].contains(p) || s.idle_places[j] == **p)
                .map(|&p| net.place_name(p))
                .collect();
            if !shared.is_empty() || s.idle_places[i] == s.idle_places[j] {
                out.push(Diagnostic::new(
                    SharedOperationPlace,
                    format!("P_A{} ∩ P_A{} ≠ ∅ ({})", i + 1, j + 1, shared.join(", ")),
                ));
            }
            let shared_t: Vec<&str> = s.subnet_transitions[i]
                .iter()
                .filter(|t| s.subnet_transitions[j].contains(t))
                .map(|&t| net.transition_name(t))
                .collect();
            if !shared_t.is_empty() {
                out.push(Diagnostic::new(
                    SharedTransition,
                    format!("T{} ∩ T{} ≠ ∅ ({})", i + 1, j + 1, shared_t.join(", ")),
                ));
            }
        }
    }

    for i in 0..n {
        if s.subnet_transitions[i].is_empty() || s.operation_places[i].is_empty() {
            out.push(Diagnostic::new(EmptySubnet, format!("subnet {} has no transitions or operation places", i + 1)));
            continue;
        }
        let states: Vec<PlaceId> =
            std::iter::once(s.idle_places[i]).chain(s.operation_places[i].iter().copied()).collect();
        let pos = |p: PlaceId| states.iter().position(|&q| q == p);
        let mut edges = Vec::new();
        let mut machine = true;
        for &t in &s.subnet_transitions[i] {
            let tr = net.transition(t);
            let ins: Vec<_> = tr.pre().iter().filter(|(p, _)| is_process(net, *p)).collect();
            let outs: Vec<_> = tr.post().iter().filter(|(p, _)| is_process(net, *p)).collect();
            let ok = ins.len() == 1
                && outs.len() == 1
                && ins[0].1 == 1
                && outs[0].1 == 1
                && pos(ins[0].0).is_some()
                && pos(outs[0].0).is_some();
            if ok {
                edges.push((pos(ins[0].0).unwrap(), pos(outs[0].0).unwrap()));
            } else {
                machine = false;
                out.push(Diagnostic::new(
                    NotStateMachine,
                    format!(
                        "subnet {} is not a state machine: `{}` needs exactly one input and one output process place of its own subnet",
                        i + 1,
                        tr.name
                    ),
                ));
            }
        }
        if !machine {
            continue;
        }
        if !strongly_connected(states.len(), &edges) {
            out.push(Diagnostic::new(NotStronglyConnected, format!("subnet {} is not strongly connected", i + 1)));
        }
        // idle place is state 0; removing it must leave an acyclic graph
        let inner: Vec<(usize, usize)> = edges.iter().copied().filter(|&(a, b)| a != 0 && b != 0).collect();
        if has_cycle(states.len(), &inner) {
            out.push(Diagnostic::new(
                CycleAvoidsIdle,
                format!("subnet {} has a cycle avoiding idle place `{}`", i + 1, net.place_name(s.idle_places[i])),
            ));
        }
    }

    for r in &s.unreliable {
        if s.reliable.contains(r) {
            out.push(Diagnostic::new(
                ResourceClassOverlap,
                format!("`{}` is both reliable and unreliable", net.place_name(*r)),
            ));
        }
    }
    for r in s.resources() {
        if let Err(e) = resource_semiflow(net, r) {
            out.push(Diagnostic::new(NoSemiflow, e.to_string()));
        }
    }
    out
}

fn is_process(net: &PetriNet, p: PlaceId) -> bool {
    matches!(net.place(p).role, PlaceRole::Idle | PlaceRole::Operation)
}

fn reach_all(n: usize, start: usize, adj: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|x| x)
}

fn strongly_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut fwd = vec![Vec::new(); n];
    let mut bwd = vec![Vec::new(); n];
    for &(a, b) in edges {
        fwd[a].push(b);
        bwd[b].push(a);
    }
    reach_all(n, 0, &fwd) && reach_all(n, 0, &bwd)
}

fn has_cycle(n: usize, edges: &[(usize, usize)]) -> bool {
    // Kahn's algorithm over the vertices touched by `edges`
    let mut indeg = vec![0usize; n];
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        indeg[b] += 1;
    }
    let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = queue.pop() {
        removed += 1;
        for &w in &adj[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push(w);
            }
        }
    }
    removed < n
}

/// Solves `I·N = 0` with `I(r) = 1` and support restricted to `r` plus
/// operation places, by exact rational elimination.
pub fn resource_semiflow(net: &PetriNet, r: PlaceId) -> Result<SemiFlow> {
    if net.place(r).role != PlaceRole::Resource {
        return Err(Error::NotResource(net.place_name(r).to_string()));
    }
    let fail = |reason: &str| Error::NoSemiflow {
        resource: net.place_name(r).to_string(),
        reason: reason.to_string(),
    };
    let n = net.incidence_matrix();
    let unknowns = net.places_with_role(PlaceRole::Operation);
    let k = unknowns.len();
    // one equation per transition: Σ_u I(u)·N[u,t] = −N[r,t]
    let mut rows: Vec<Vec<Ratio<i64>>> = net
        .transition_ids()
        .map(|t| {
            let mut row: Vec<Ratio<i64>> = unknowns.iter().map(|&u| Ratio::from(n.get(u, t))).collect();
            row.push(Ratio::from(-n.get(r, t)));
            row
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..k {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col] != Ratio::from(0)) else {
            continue;
        };
        rows.swap(rank, piv);
        let lead = rows[rank][col];
        for x in rows[rank].iter_mut() {
            *x /= lead;
        }
        for i in 0..rows.len() {
            if i != rank && rows[i][col] != Ratio::from(0) {
                let f = rows[i][col];
                let pivot = rows[rank].clone();
                for (x, v) in rows[i].iter_mut().zip(pivot) {
                    *x -= f * v;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }
    if rows[rank..].iter().any(|row| row[k] != Ratio::from(0)) {
        return Err(fail("net is not conservative in this resource"));
    }
    if rank < k {
        return Err(fail("semiflow is not unique"));
    }
    let mut weights = vec![(r, 1u32)];
    for (i, &col) in pivot_cols.iter().enumerate() {
        let v = rows[i][k];
        if !v.is_integer() || v < Ratio::from(0) {
            return Err(fail("solution is not a non-negative integer vector"));
        }
        let v = *v.numer();
        if v > 0 {
            weights.push((unknowns[col], v as u32));
        }
    }
    if weights.len() == 1 {
        return Err(fail("no operation place in support"));
    }
    Ok(SemiFlow::new(r, weights))
}

/// Initial-marking rules: idle places marked, operation places empty and
/// every resource holding at least its largest semiflow weight.
pub fn check_initial_marking(net: &PetriNet, s: &S4prStructure, m0: &Marking) -> Vec<Diagnostic> {
    use DiagnosticCode::*;
    let mut out = Vec::new();
    if m0.len() != net.place_count() {
        out.push(Diagnostic::new(
            OperationMarked,
            format!("marking has {} entries, net has {} places", m0.len(), net.place_count()),
        ));
        return out;
    }
    for (i, &p) in s.idle_places.iter().enumerate() {
        if m0[p] == 0 {
            out.push(Diagnostic::new(
                IdleUnmarked,
                format!("idle place `{}` of subnet {} is unmarked", net.place_name(p), i + 1),
            ));
        }
    }
    for p in s.all_operation_places() {
        if m0[p] > 0 {
            out.push(Diagnostic::new(
                OperationMarked,
                format!("operation place initially marked: `{}` holds {}", net.place_name(p), m0[p]),
            ));
        }
    }
    for r in s.resources() {
        let Some(sf) = s.semiflow(r) else { continue };
        let need = sf.weights().iter().filter(|&&(p, _)| p != r).map(|&(_, w)| w).max().unwrap_or(0);
        if m0[r] < need {
            out.push(Diagnostic::new(
                ResourceCapacity,
                format!(
                    "resource capacity below max semiflow weight: `{}` holds {} but an operation needs {}",
                    net.place_name(r),
                    m0[r],
                    need
                ),
            ));
        }
    }
    out
}

/// 1-based indices of subnets with no operation place in the support of `I_r`.
pub fn independent_subnets(s: &S4prStructure, r: PlaceId) -> Result<BTreeSet<usize>> {
    if !s.is_unreliable(r) {
        return Err(Error::NotUnreliable(format!("#{}", r.0)));
    }
    let sf = s
        .semiflow(r)
        .ok_or_else(|| Error::NoSemiflow { resource: format!("#{}", r.0), reason: "not computed".into() })?;
    Ok((0..s.subnet_count())
        .filter(|&i| s.operation_places[i].iter().all(|&p| sf.weight(p) == 0))
        .map(|i| i + 1)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture::case_study;
    use crate::net::{ArcKind, Node};

    fn weights_by_name(net: &PetriNet, sf: &SemiFlow) -> Vec<(String, u32)> {
        sf.weights().iter().map(|&(p, w)| (net.place_name(p).to_string(), w)).collect()
    }

    fn named(pairs: &[(&str, u32)]) -> Vec<(String, u32)> {
        pairs.iter().map(|&(n, w)| (n.to_string(), w)).collect()
    }

    #[test]
    fn case_study_semiflows() {
        let cs = case_study();
        let p = |n: &str| cs.net.place_id(n).unwrap();
        let s12 = resource_semiflow(&cs.net, p("p12")).unwrap();
        assert_eq!(weights_by_name(&cs.net, &s12), named(&[("p4", 1), ("p6", 1), ("p12", 1)]));
        let s11 = resource_semiflow(&cs.net, p("p11")).unwrap();
        assert_eq!(
            weights_by_name(&cs.net, &s11),
            named(&[("p2", 1), ("p4", 1), ("p7", 2), ("p9", 2), ("p11", 1)])
        );
        let s10 = resource_semiflow(&cs.net, p("p10")).unwrap();
        assert_eq!(weights_by_name(&cs.net, &s10), named(&[("p3", 1), ("p10", 1)]));
        assert_eq!(s12.dot(&cs.m0), 2);
        assert_eq!(s11.dot(&cs.m0), 2);
        assert_eq!(s10.dot(&cs.m0), 1);
    }

    #[test]
    fn semiflow_of_non_resource_fails() {
        let cs = case_study();
        assert!(matches!(
            resource_semiflow(&cs.net, cs.net.place_id("p2").unwrap()),
            Err(Error::NotResource(_))
        ));
    }

    #[test]
    fn non_conservative_resource_has_no_semiflow() {
        let mut cs = case_study();
        // t9 returns an extra unit of p10 nobody took
        cs.net.add_arc_by_name("t9", "p10", 1, ArcKind::Normal).unwrap();
        let p10 = cs.net.place_id("p10").unwrap();
        assert!(matches!(resource_semiflow(&cs.net, p10), Err(Error::NoSemiflow { .. })));
    }

    #[test]
    fn case_study_is_valid() {
        let cs = case_study();
        assert_eq!(validate_s4pr(&cs.net, &cs.structure), vec![]);
        assert_eq!(check_initial_marking(&cs.net, &cs.structure, &cs.m0), vec![]);
    }

    #[test]
    fn shared_operation_place_is_reported() {
        let cs = case_study();
        let mut s = cs.structure.clone();
        let p3 = cs.net.place_id("p3").unwrap();
        s.operation_places[1].push(p3);
        let d = validate_s4pr(&cs.net, &s);
        assert!(d.iter().any(|d| d.code == DiagnosticCode::SharedOperationPlace
            && d.message.starts_with("P_A1 ∩ P_A2 ≠ ∅")));
    }

    #[test]
    fn two_process_inputs_is_not_a_state_machine() {
        let mut cs = case_study();
        cs.net.add_arc_by_name("p3", "t1", 1, ArcKind::Normal).unwrap();
        let s = S4prStructure::from_net(&cs.net, &cs.structure.unreliable).unwrap();
        let d = validate_s4pr(&cs.net, &s);
        assert!(d.iter().any(|d| d.code == DiagnosticCode::NotStateMachine), "{d:?}");
    }

    #[test]
    fn cycle_avoiding_idle_is_reported() {
        // idle -> a -> b -> a, b -> idle
        let mut net = PetriNet::new();
        let idle = net.add_place("i", PlaceRole::Idle, 1).unwrap();
        let a = net.add_place("a", PlaceRole::Operation, 1).unwrap();
        let b = net.add_place("b", PlaceRole::Operation, 1).unwrap();
        for (name, from, to) in [("t1", idle, a), ("t2", a, b), ("t3", b, a), ("t4", b, idle)] {
            let t = net.add_transition(name, 1, true).unwrap();
            net.add_arc(Node::Place(from), Node::Transition(t), 1, ArcKind::Normal).unwrap();
            net.add_arc(Node::Transition(t), Node::Place(to), 1, ArcKind::Normal).unwrap();
        }
        let s = S4prStructure::from_net(&net, &[]).unwrap();
        let d = validate_s4pr(&net, &s);
        assert_eq!(d.len(), 1, "{d:?}");
        assert_eq!(d[0].code, DiagnosticCode::CycleAvoidsIdle);
    }

    #[test]
    fn broken_cycle_is_not_strongly_connected() {
        let mut net = PetriNet::new();
        let idle = net.add_place("i", PlaceRole::Idle, 1).unwrap();
        let a = net.add_place("a", PlaceRole::Operation, 1).unwrap();
        let t = net.add_transition("t1", 1, true).unwrap();
        net.add_arc(Node::Place(idle), Node::Transition(t), 1, ArcKind::Normal).unwrap();
        net.add_arc(Node::Transition(t), Node::Place(a), 1, ArcKind::Normal).unwrap();
        let s = S4prStructure::from_net(&net, &[]).unwrap();
        let d = validate_s4pr(&net, &s);
        assert!(d.iter().any(|d| d.code == DiagnosticCode::NotStronglyConnected));
    }

    #[test]
    fn overlapping_resource_classes() {
        let cs = case_study();
        let mut s = cs.structure.clone();
        s.reliable.push(cs.net.place_id("p12").unwrap());
        let d = validate_s4pr(&cs.net, &s);
        assert!(d.iter().any(|d| d.code == DiagnosticCode::ResourceClassOverlap));
    }

    #[test]
    fn initial_marking_rules() {
        let cs = case_study();
        let p = |n: &str| cs.net.place_id(n).unwrap();
        let d = check_initial_marking(&cs.net, &cs.structure, &cs.m0.with(p("p2"), 1));
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, DiagnosticCode::OperationMarked);
        assert!(d[0].message.starts_with("operation place initially marked"));

        let d = check_initial_marking(&cs.net, &cs.structure, &cs.m0.with(p("p11"), 1));
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, DiagnosticCode::ResourceCapacity);
        assert!(d[0].message.starts_with("resource capacity below max semiflow weight"));

        let d = check_initial_marking(&cs.net, &cs.structure, &cs.m0.with(p("p5"), 0));
        assert_eq!(d[0].code, DiagnosticCode::IdleUnmarked);
    }

    #[test]
    fn independent_subnets_of_p12() {
        let cs = case_study();
        let p12 = cs.net.place_id("p12").unwrap();
        assert_eq!(independent_subnets(&cs.structure, p12).unwrap(), BTreeSet::from([3]));
        let p11 = cs.net.place_id("p11").unwrap();
        assert!(matches!(independent_subnets(&cs.structure, p11), Err(Error::NotUnreliable(_))));
    }

    #[test]
    fn resource_touching_every_subnet_leaves_none_independent() {
        let cs = case_study();
        let p11 = cs.net.place_id("p11").unwrap();
        let mut s = cs.structure.clone();
        s.unreliable = vec![p11];
        s.reliable.retain(|&r| r != p11);
        assert!(independent_subnets(&s, p11).unwrap().is_empty());
    }

    #[test]
    fn subnet_without_resources_is_independent() {
        let mut cs = case_study();
        let idle = cs.net.add_place("p13", PlaceRole::Idle, 4).unwrap();
        let op = cs.net.add_place("p14", PlaceRole::Operation, 4).unwrap();
        for (name, from, to) in [("t10", idle, op), ("t11", op, idle)] {
            let t = cs.net.add_transition(name, 4, true).unwrap();
            cs.net.add_arc(Node::Place(from), Node::Transition(t), 1, ArcKind::Normal).unwrap();
            cs.net.add_arc(Node::Transition(t), Node::Place(to), 1, ArcKind::Normal).unwrap();
        }
        let s = S4prStructure::from_net(&cs.net, &cs.structure.unreliable).unwrap();
        let p12 = cs.net.place_id("p12").unwrap();
        assert_eq!(independent_subnets(&s, p12).unwrap(), BTreeSet::from([3, 4]));
    }
}
