//! Impact of an unreliable resource failing: robust/non-robust markings,
//! forbidden sets and their reduction by root/mask domination.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{independent_subnets, S4prStructure};
use crate::net::{Marking, PetriNet, PlaceId};
use crate::reach::{ReachabilityGraph, DEFAULT_NODE_CAP};

/// How a total failure of the unreliable resource acts on the net when
/// classifying markings.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureSemantics {
    /// Every unit of `r` is out of service, including units held by running
    /// operations: transitions consuming or releasing `r` never fire.
    #[default]
    Frozen,
    /// Only the idle units are withdrawn; units released later are usable.
    IdleWithdrawn,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ForbiddenPolicy {
    /// Every non-robust marking is forbidden.
    #[default]
    FullUnrobust,
    /// Non-robust markings with `m(r) ≥ i`.
    Threshold,
}

/// Withdraws `j` idle units of `r`. The structure is unchanged; transitions
/// needing more of `r` than remain are disabled by the smaller marking.
pub fn failure_net(
    net: &PetriNet,
    s: &S4prStructure,
    r: PlaceId,
    m: &Marking,
    j: u32,
) -> Result<(PetriNet, Marking)> {
    if !s.is_unreliable(r) {
        return Err(Error::NotUnreliable(net.place_name(r).to_string()));
    }
    net.check_marking(m)?;
    if m[r] < j {
        return Err(Error::CannotFail { resource: net.place_name(r).to_string(), idle: m[r], requested: j });
    }
    Ok((net.clone(), m.with(r, m[r] - j)))
}

/// Net describing behaviour once `r` has failed completely.
pub fn total_failure_net(net: &PetriNet, r: PlaceId, semantics: FailureSemantics) -> PetriNet {
    match semantics {
        FailureSemantics::Frozen => net.restrict_transitions(|_, t| !t.touches(r)),
        FailureSemantics::IdleWithdrawn => net.clone(),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub robust: BTreeSet<Marking>,
    pub unrobust: BTreeSet<Marking>,
}

impl Classification {
    pub fn is_robust(&self, m: &Marking) -> bool {
        self.robust.contains(m)
    }

    pub fn len(&self) -> usize {
        self.robust.len() + self.unrobust.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Classifies every node of `g` with [`FailureSemantics::Frozen`].
pub fn classify(net: &PetriNet, s: &S4prStructure, g: &ReachabilityGraph, r: PlaceId) -> Result<Classification> {
    classify_with(net, s, g, r, FailureSemantics::Frozen, DEFAULT_NODE_CAP)
}

/// A marking is robust iff, after `r` fails completely, some strongly
/// connected part of the remaining behaviour is reachable in which every
/// transition of every subnet independent of `r` fires.
pub fn classify_with(
    net: &PetriNet,
    s: &S4prStructure,
    g: &ReachabilityGraph,
    r: PlaceId,
    semantics: FailureSemantics,
    node_cap: usize,
) -> Result<Classification> {
    let independent = independent_subnets(s, r)?;
    let required: HashSet<&str> = independent
        .iter()
        .flat_map(|&i| s.subnet_transitions[i - 1].iter())
        .map(|&t| net.transition_name(t))
        .collect();

    let failed = total_failure_net(net, r, semantics);
    let roots: Vec<Marking> = g.nodes().iter().map(|m| m.with(r, 0)).collect();
    let fg = ReachabilityGraph::build_from(&failed, &roots, node_cap)?;
    let sccs = fg.sccs();

    let mut fired: Vec<HashSet<&str>> = vec![HashSet::new(); sccs.count()];
    for e in fg.edges() {
        let c = sccs.component_of(e.source);
        if c == sccs.component_of(e.target) {
            let name = failed.transition_name(e.transition);
            if required.contains(name) {
                fired[c].insert(name);
            }
        }
    }
    // components come in reverse topological order, so successors are settled first
    let mut good = vec![false; sccs.count()];
    for c in 0..sccs.count() {
        let members = sccs.members(c);
        good[c] = fired[c].len() == required.len()
            || members
                .iter()
                .any(|&v| fg.successors(v).iter().any(|&w| sccs.component_of(w) != c && good[sccs.component_of(w)]));
    }

    let mut out = Classification::default();
    for (m, &root) in g.nodes().iter().zip(fg.roots()) {
        if good[sccs.component_of(root)] {
            out.robust.insert(m.clone());
        } else {
            out.unrobust.insert(m.clone());
        }
    }
    Ok(out)
}

/// Markings a supervisor must exclude when `i` units have failed; always a
/// subset of the non-robust markings.
pub fn forbidden_set(c: &Classification, r: PlaceId, i: u32, policy: ForbiddenPolicy) -> BTreeSet<Marking> {
    match policy {
        ForbiddenPolicy::FullUnrobust => c.unrobust.clone(),
        ForbiddenPolicy::Threshold => c.unrobust.iter().filter(|m| m[r] >= i).cloned().collect(),
    }
}

pub fn project_all<'a>(set: impl IntoIterator<Item = &'a Marking>, pe: &[PlaceId]) -> BTreeSet<Vec<u32>> {
    set.into_iter().map(|m| m.project(pe)).collect()
}

fn disjoint_on<'a>(
    a: impl IntoIterator<Item = &'a Marking>,
    b: impl IntoIterator<Item = &'a Marking>,
    pe: &[PlaceId],
) -> bool {
    let pa = project_all(a, pe);
    b.into_iter().all(|m| !pa.contains(&m.project(pe)))
}

/// Projection places: operation places of subnets that depend on `r`,
/// greedily pruned in place order while robust and non-robust projections
/// stay disjoint.
pub fn select_projection_places(
    _net: &PetriNet,
    s: &S4prStructure,
    c: &Classification,
    r: PlaceId,
) -> Result<Vec<PlaceId>> {
    let independent = independent_subnets(s, r)?;
    let mut pe: Vec<PlaceId> = (1..=s.subnet_count())
        .filter(|i| !independent.contains(i))
        .flat_map(|i| s.operation_places[i - 1].iter().copied())
        .collect();
    pe.sort_unstable();
    pe.dedup();
    if !disjoint_on(&c.robust, &c.unrobust, &pe) {
        pe = s.all_operation_places();
        if !disjoint_on(&c.robust, &c.unrobust, &pe) {
            return Err(Error::ProjectionFailure);
        }
    }
    let candidates = pe.clone();
    for p in candidates {
        let trial: Vec<PlaceId> = pe.iter().copied().filter(|&q| q != p).collect();
        if disjoint_on(&c.robust, &c.unrobust, &trial) {
            pe = trial;
        }
    }
    Ok(pe)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedSets {
    pub projection_places: Vec<PlaceId>,
    /// Componentwise-maximal admissible projections, sorted.
    pub admissible_reduced: Vec<Vec<u32>>,
    /// Componentwise-minimal forbidden projections, sorted.
    pub forbidden_reduced: Vec<Vec<u32>>,
}

/// `a ≥ b` in every coordinate.
pub fn dominates(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

pub fn maximal(set: &BTreeSet<Vec<u32>>) -> Vec<Vec<u32>> {
    set.iter()
        .filter(|v| !set.iter().any(|w| w != *v && dominates(w, v)))
        .cloned()
        .collect()
}

pub fn minimal(set: &BTreeSet<Vec<u32>>) -> Vec<Vec<u32>> {
    set.iter()
        .filter(|v| !set.iter().any(|w| w != *v && dominates(v, w)))
        .cloned()
        .collect()
}

/// Projects both sets onto `pe` and keeps maximal admissible and minimal
/// forbidden representatives.
pub fn reduce<'a>(
    admissible: impl IntoIterator<Item = &'a Marking>,
    forbidden: impl IntoIterator<Item = &'a Marking>,
    pe: &[PlaceId],
) -> Result<ReducedSets> {
    let a = project_all(admissible, pe);
    let f = project_all(forbidden, pe);
    if !a.is_disjoint(&f) {
        return Err(Error::ProjectionFailure);
    }
    Ok(ReducedSets {
        projection_places: pe.to_vec(),
        admissible_reduced: maximal(&a),
        forbidden_reduced: minimal(&f),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture::{case_study, ROBUST_ROWS, UNROBUST_ROWS};
    use crate::io::S4prNet;

    fn rows<const N: usize>(r: &[[u32; 12]; N]) -> BTreeSet<Marking> {
        r.iter().map(|x| Marking::new(x.to_vec())).collect()
    }

    fn setup() -> (S4prNet, PlaceId, Classification) {
        let cs = case_study();
        let r = cs.net.place_id("p12").unwrap();
        let g = ReachabilityGraph::build(&cs.net, &cs.m0, DEFAULT_NODE_CAP).unwrap();
        let c = classify(&cs.net, &cs.structure, &g, r).unwrap();
        (cs, r, c)
    }

    #[test]
    fn classification_matches_tables() {
        let (cs, _, c) = setup();
        assert_eq!(c.robust.len(), 12);
        assert_eq!(c.unrobust.len(), 11);
        assert_eq!(c.robust, rows(&ROBUST_ROWS));
        assert_eq!(c.unrobust, rows(&UNROBUST_ROWS));
        assert!(c.is_robust(&cs.m0));
    }

    #[test]
    fn idle_withdrawn_semantics_is_more_lenient() {
        let cs = case_study();
        let r = cs.net.place_id("p12").unwrap();
        let g = ReachabilityGraph::build(&cs.net, &cs.m0, DEFAULT_NODE_CAP).unwrap();
        let c = classify_with(&cs.net, &cs.structure, &g, r, FailureSemantics::IdleWithdrawn, 1000).unwrap();
        assert_eq!(c.len(), 23);
        assert!(rows(&ROBUST_ROWS).is_subset(&c.robust));
        // busy units come back and let subnet 3 restart
        assert_eq!(c.robust.len(), 19);
    }

    #[test]
    fn failure_net_withdraws_idle_units() {
        let cs = case_study();
        let r = cs.net.place_id("p12").unwrap();
        let (_, m) = failure_net(&cs.net, &cs.structure, r, &cs.m0, 2).unwrap();
        assert_eq!(m[r], 0);
        let (_, m) = failure_net(&cs.net, &cs.structure, r, &cs.m0, 0).unwrap();
        assert_eq!(m, cs.m0);
        let one = cs.m0.with(r, 1);
        assert!(matches!(
            failure_net(&cs.net, &cs.structure, r, &one, 2),
            Err(Error::CannotFail { idle: 1, requested: 2, .. })
        ));
        let p11 = cs.net.place_id("p11").unwrap();
        assert!(matches!(failure_net(&cs.net, &cs.structure, p11, &cs.m0, 1), Err(Error::NotUnreliable(_))));
    }

    #[test]
    fn forbidden_policies() {
        let (_, r, c) = setup();
        let full = forbidden_set(&c, r, 1, ForbiddenPolicy::FullUnrobust);
        assert_eq!(full, rows(&UNROBUST_ROWS));
        let thr = forbidden_set(&c, r, 1, ForbiddenPolicy::Threshold);
        let want: BTreeSet<Marking> =
            UNROBUST_ROWS.iter().filter(|x| x[11] >= 1).map(|x| Marking::new(x.to_vec())).collect();
        assert_eq!(thr.len(), 7);
        assert_eq!(thr, want);
        assert!(forbidden_set(&c, r, 3, ForbiddenPolicy::Threshold).is_empty());
        assert!(thr.is_subset(&c.unrobust));
    }

    #[test]
    fn projection_places_for_case_study() {
        let (cs, r, c) = setup();
        let pe = select_projection_places(&cs.net, &cs.structure, &c, r).unwrap();
        let names: Vec<&str> = pe.iter().map(|&p| cs.net.place_name(p)).collect();
        assert_eq!(names, ["p2", "p3", "p4"]);
        // every kept place is needed
        for p in &pe {
            let fewer: Vec<PlaceId> = pe.iter().copied().filter(|q| q != p).collect();
            assert!(!disjoint_on(&c.robust, &c.unrobust, &fewer));
        }
    }

    #[test]
    fn projection_places_with_nothing_forbidden() {
        let (cs, r, mut c) = setup();
        c.robust.append(&mut c.unrobust);
        assert!(select_projection_places(&cs.net, &cs.structure, &c, r).unwrap().is_empty());
    }

    #[test]
    fn projection_failure_when_inseparable() {
        let (cs, r, _) = setup();
        // a marking both robust and non-robust cannot be separated on any projection
        let m = cs.m0.clone();
        let c = Classification { robust: BTreeSet::from([m.clone()]), unrobust: BTreeSet::from([m]) };
        assert_eq!(select_projection_places(&cs.net, &cs.structure, &c, r), Err(Error::ProjectionFailure));
    }

    #[test]
    fn reduce_case_study_on_four_places() {
        let (cs, r, c) = setup();
        let pe: Vec<PlaceId> = ["p2", "p3", "p4", "p6"].iter().map(|n| cs.net.place_id(n).unwrap()).collect();
        let f = forbidden_set(&c, r, 1, ForbiddenPolicy::FullUnrobust);
        let rs = reduce(&c.robust, &f, &pe).unwrap();
        let mut adm = vec![vec![1, 0, 0, 1], vec![0, 1, 0, 1]];
        adm.sort();
        let mut forb = vec![vec![2, 0, 0, 0], vec![0, 0, 1, 0], vec![1, 1, 0, 0]];
        forb.sort();
        assert_eq!(rs.admissible_reduced, adm);
        assert_eq!(rs.forbidden_reduced, forb);
    }

    #[test]
    fn reduce_trivial_and_masks() {
        let pe = [PlaceId(0), PlaceId(1)];
        let a = [Marking::new(vec![0, 0])];
        let f = [Marking::new(vec![1, 0])];
        let rs = reduce(&a, &f, &pe).unwrap();
        assert_eq!(rs.admissible_reduced, vec![vec![0, 0]]);
        assert_eq!(rs.forbidden_reduced, vec![vec![1, 0]]);

        let f = [Marking::new(vec![1, 0]), Marking::new(vec![2, 0])];
        let rs = reduce(&a, &f, &pe).unwrap();
        assert_eq!(rs.forbidden_reduced, vec![vec![1, 0]]);

        let f = [Marking::new(vec![0, 0])];
        assert_eq!(reduce(&a, &f, &pe), Err(Error::ProjectionFailure));
    }
}
