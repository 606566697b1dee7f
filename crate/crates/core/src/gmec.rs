//! GMEC synthesis over reduced admissible/forbidden sets.
//!
//! The separation problem `l·a ≤ b` for admissible representatives and
//! `l·f ≥ b + 1` for the forbidden representatives a constraint is meant to
//! cover is solved by bounded enumeration of `(l, b)` followed by an exact
//! minimum set cover over the forbidden representatives.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::net::{Marking, PetriNet, PlaceId};
use crate::reach::ReachabilityGraph;
use crate::robust::ReducedSets;

/// Linear constraint `l·m ≤ b` with non-negative weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Gmec {
    weights: Vec<(PlaceId, u32)>,
    bound: u32,
}

impl Gmec {
    /// Zero weights are dropped and repeated places summed.
    pub fn new(weights: Vec<(PlaceId, u32)>, bound: u32) -> Self {
        let mut merged: Vec<(PlaceId, u32)> = Vec::with_capacity(weights.len());
        let mut sorted = weights;
        sorted.sort_unstable();
        for (p, w) in sorted {
            match merged.last_mut() {
                Some((q, acc)) if *q == p => *acc += w,
                _ => merged.push((p, w)),
            }
        }
        merged.retain(|&(_, w)| w > 0);
        Gmec { weights: merged, bound }
    }

    pub fn weights(&self) -> &[(PlaceId, u32)] {
        &self.weights
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn weight(&self, p: PlaceId) -> u32 {
        self.weights.iter().find(|(q, _)| *q == p).map_or(0, |(_, w)| *w)
    }

    pub fn weight_sum(&self) -> u64 {
        self.weights.iter().map(|&(_, w)| u64::from(w)).sum()
    }

    pub fn value(&self, m: &Marking) -> u64 {
        self.weights.iter().map(|&(p, w)| u64::from(w) * u64::from(m[p])).sum()
    }

    pub fn is_satisfied(&self, m: &Marking) -> bool {
        self.value(m) <= u64::from(self.bound)
    }

    /// `b − l·m`, the token count of the monitor place at `m`.
    pub fn slack(&self, m: &Marking) -> Result<u32> {
        let v = self.value(m);
        if v > u64::from(self.bound) {
            return Err(Error::InadmissibleReference { value: v, bound: u64::from(self.bound) });
        }
        Ok(self.bound - v as u32)
    }

    /// Weights as a dense vector over `places`.
    pub fn dense(&self, places: &[PlaceId]) -> Vec<u32> {
        places.iter().map(|&p| self.weight(p)).collect()
    }

    fn tie_key(&self) -> (u64, u32, Vec<(PlaceId, u32)>) {
        (self.weight_sum(), self.bound, self.weights.clone())
    }
}

/// A separating constraint and the indices of the forbidden representatives
/// it excludes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub gmec: Gmec,
    pub covered: Vec<usize>,
}

fn dot(l: &[u32], v: &[u32]) -> u64 {
    l.iter().zip(v).map(|(&a, &b)| u64::from(a) * u64::from(b)).sum()
}

/// `a_max` is one more than the largest forbidden coordinate, `b_max = a_max·|P_E|`.
pub fn default_bounds(rs: &ReducedSets) -> (u32, u32) {
    let a_max = rs.forbidden_reduced.iter().flatten().copied().max().unwrap_or(0) + 1;
    let b_max = a_max * rs.projection_places.len().max(1) as u32;
    (a_max, b_max)
}

/// All `(l, b)` in `[0, a_max]^|P_E| × [0, b_max]` keeping every admissible
/// representative and excluding at least one forbidden one.
pub fn enumerate_separators(rs: &ReducedSets, a_max: u32, b_max: u32) -> Vec<Candidate> {
    let k = rs.projection_places.len();
    let mut out = Vec::new();
    if rs.forbidden_reduced.is_empty() || k == 0 {
        return out;
    }
    let mut l = vec![0u32; k];
    loop {
        // odometer increment, last coordinate fastest
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if l[i] < a_max {
                l[i] += 1;
                break;
            }
            l[i] = 0;
        }
        let floor = rs.admissible_reduced.iter().map(|a| dot(&l, a)).max().unwrap_or(0);
        let values: Vec<u64> = rs.forbidden_reduced.iter().map(|f| dot(&l, f)).collect();
        for b in floor..=u64::from(b_max) {
            let covered: Vec<usize> = (0..values.len()).filter(|&j| values[j] > b).collect();
            if covered.is_empty() {
                break;
            }
            let weights = rs.projection_places.iter().copied().zip(l.iter().copied()).collect();
            out.push(Candidate { gmec: Gmec::new(weights, b as u32), covered });
        }
    }
}

/// Rows of `L` and entries of `B`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SupervisorPlan {
    pub constraints: Vec<Gmec>,
    /// Forbidden representatives excluded by each constraint.
    pub covered: Vec<Vec<usize>>,
    /// Plan size minus a lower bound; zero when the cover was solved exactly.
    pub optimality_gap: usize,
}

impl SupervisorPlan {
    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }
}

const EXACT_LIMIT: usize = 20;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Mask(u128);

/// Total weight, total bound, then the sorted constraints.
type CoverKey = (u64, u64, Vec<Gmec>);

impl Mask {
    fn of(idx: &[usize]) -> Self {
        Mask(idx.iter().fold(0u128, |m, &i| m | (1u128 << i)))
    }

    fn subset_of(self, other: Mask) -> bool {
        self.0 & !other.0 == 0
    }
}

/// Minimum-size subset of `cands` excluding every forbidden representative.
/// Ties go to the smaller total weight, then smaller bounds, then the
/// lexicographically smaller weights.
pub fn select_minimal_cover(cands: &[Candidate], forbidden: &[Vec<u32>]) -> Result<SupervisorPlan> {
    let n = forbidden.len();
    if n == 0 {
        return Ok(SupervisorPlan::default());
    }
    let mut seen = vec![false; n];
    for c in cands {
        for &j in &c.covered {
            seen[j] = true;
        }
    }
    let uncovered: Vec<Vec<u32>> = (0..n).filter(|&j| !seen[j]).map(|j| forbidden[j].clone()).collect();
    if !uncovered.is_empty() {
        return Err(Error::Unseparable { uncovered });
    }
    if n > 128 {
        return Ok(greedy(cands, n));
    }

    // best candidate per covered set, then drop dominated covered sets
    let mut sorted: Vec<&Candidate> = cands.iter().collect();
    sorted.sort_by_key(|c| c.gmec.tie_key());
    let mut by_mask: HashMap<Mask, usize> = HashMap::new();
    let mut reps: Vec<(&Candidate, Mask)> = Vec::new();
    for c in sorted {
        let m = Mask::of(&c.covered);
        if let std::collections::hash_map::Entry::Vacant(e) = by_mask.entry(m) {
            e.insert(reps.len());
            reps.push((c, m));
        }
    }
    let pruned: Vec<(&Candidate, Mask)> = reps
        .iter()
        .filter(|(c, m)| {
            !reps.iter().any(|(d, dm)| {
                dm != m && m.subset_of(*dm) && c.gmec.weight_sum() >= d.gmec.weight_sum()
            })
        })
        .copied()
        .collect();

    if pruned.len() > EXACT_LIMIT {
        return Ok(greedy(cands, n));
    }
    let full = Mask(if n == 128 { u128::MAX } else { (1u128 << n) - 1 });
    for size in 1..=pruned.len() {
        let mut best: Option<(Vec<usize>, CoverKey)> = None;
        for combo in combinations(pruned.len(), size) {
            let union = combo.iter().fold(0u128, |acc, &i| acc | pruned[i].1 .0);
            if union & full.0 != full.0 {
                continue;
            }
            let mut gs: Vec<Gmec> = combo.iter().map(|&i| pruned[i].0.gmec.clone()).collect();
            gs.sort_by_key(|g| g.tie_key());
            let key = (
                gs.iter().map(|g| g.weight_sum()).sum::<u64>(),
                gs.iter().map(|g| u64::from(g.bound)).sum::<u64>(),
                gs,
            );
            if best.as_ref().is_none_or(|(_, k)| key < *k) {
                best = Some((combo, key));
            }
        }
        if let Some((combo, _)) = best {
            let mut chosen: Vec<&Candidate> = combo.iter().map(|&i| pruned[i].0).collect();
            chosen.sort_by_key(|c| c.gmec.tie_key());
            return Ok(SupervisorPlan {
                constraints: chosen.iter().map(|c| c.gmec.clone()).collect(),
                covered: chosen.iter().map(|c| c.covered.clone()).collect(),
                optimality_gap: 0,
            });
        }
    }
    unreachable!("union of candidates covers every forbidden representative")
}

fn greedy(cands: &[Candidate], n: usize) -> SupervisorPlan {
    let mut left: BTreeSet<usize> = (0..n).collect();
    let mut plan = SupervisorPlan::default();
    let widest = cands.iter().map(|c| c.covered.len()).max().unwrap_or(1).max(1);
    while !left.is_empty() {
        let best = cands
            .iter()
            .max_by(|a, b| {
                let ga = a.covered.iter().filter(|j| left.contains(j)).count();
                let gb = b.covered.iter().filter(|j| left.contains(j)).count();
                ga.cmp(&gb).then_with(|| b.gmec.tie_key().cmp(&a.gmec.tie_key()))
            })
            .expect("non-empty candidates");
        for j in &best.covered {
            left.remove(j);
        }
        plan.constraints.push(best.gmec.clone());
        plan.covered.push(best.covered.clone());
    }
    plan.optimality_gap = plan.constraints.len() - n.div_ceil(widest);
    plan
}

fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut idx: Vec<usize> = (0..k).collect();
    let mut done = k > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = idx.clone();
        // advance to the next k-subset in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

/// Adds one monitor place per constraint.
pub fn build_supervisor(net: &PetriNet, plan: &SupervisorPlan, m_ref: &Marking) -> Result<(PetriNet, Marking)> {
    let mut controlled = net.clone();
    let mut m = m_ref.clone();
    for g in &plan.constraints {
        let (next, next_m) = controlled.add_monitor(g, &m)?;
        controlled = next;
        m = next_m;
    }
    Ok((controlled, m))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub reachable: usize,
    /// Distinct reachable markings restricted to the original places.
    pub reachable_projections: usize,
    pub forbidden_reached: Vec<Marking>,
    pub admissible_missing: Vec<Marking>,
    pub invariant_violations: Vec<Marking>,
}

impl VerificationReport {
    pub fn forbidden_excluded(&self) -> bool {
        self.forbidden_reached.is_empty()
    }

    pub fn maximally_permissive(&self) -> bool {
        self.admissible_missing.is_empty()
    }

    pub fn invariants_hold(&self) -> bool {
        self.invariant_violations.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.forbidden_excluded() && self.maximally_permissive() && self.invariants_hold()
    }
}

/// Rebuilds the controlled state space and checks that no forbidden marking
/// is reachable, every admissible one is, and every monitor equality holds.
/// The sets are over the leading places of `controlled` (the original net).
pub fn verify_supervisor(
    controlled: &PetriNet,
    m0: &Marking,
    admissible_full: &BTreeSet<Marking>,
    forbidden_full: &BTreeSet<Marking>,
    node_cap: usize,
) -> Result<VerificationReport> {
    let width = admissible_full
        .iter()
        .chain(forbidden_full)
        .map(Marking::len)
        .next()
        .unwrap_or(controlled.place_count() - controlled.monitors().len());
    let g = ReachabilityGraph::build(controlled, m0, node_cap)?;
    let mut projections = BTreeSet::new();
    let mut invariant_violations = Vec::new();
    for m in g.nodes() {
        projections.insert(m.truncated(width));
        let ok = controlled
            .monitors()
            .iter()
            .all(|(pc, gm)| gm.value(m) + u64::from(m[*pc]) == u64::from(gm.bound()));
        if !ok {
            invariant_violations.push(m.clone());
        }
    }
    invariant_violations.sort();
    Ok(VerificationReport {
        reachable: g.node_count(),
        reachable_projections: projections.len(),
        forbidden_reached: projections.intersection(forbidden_full).cloned().collect(),
        admissible_missing: admissible_full.difference(&projections).cloned().collect(),
        invariant_violations,
    })
}
