//! Multi-model robust controller: recovery subnet, one control structure per
//! number of failed units, and a simulator that switches between them.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gmec::{
    build_supervisor, default_bounds, enumerate_separators, select_minimal_cover, verify_supervisor,
    SupervisorPlan, VerificationReport,
};
use crate::model::{independent_subnets, S4prStructure};
use crate::net::{ArcKind, Marking, Node, PetriNet, PlaceId, PlaceRole, TransitionId};
use crate::reach::{ReachabilityGraph, DEFAULT_NODE_CAP};
use crate::robust::{
    classify, forbidden_set, reduce, select_projection_places, Classification, ForbiddenPolicy, ReducedSets,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RecoverySubnet {
    pub resource: PlaceId,
    pub recovery_place: PlaceId,
    pub fail_transition: TransitionId,
    pub repair_transition: TransitionId,
}

/// Adds `q`, `t_f`, `t_r` and the cycle `r → t_f → q → t_r → r`. Both
/// transitions are uncontrollable; `q` starts empty.
pub fn attach_recovery(net: &PetriNet, s: &S4prStructure, r: PlaceId) -> Result<(PetriNet, RecoverySubnet)> {
    if !s.is_unreliable(r) {
        return Err(Error::NotUnreliable(net.place_name(r).to_string()));
    }
    if !net.places_with_role(PlaceRole::Recovery).is_empty() {
        return Err(Error::RecoveryPresent);
    }
    let mut base = net.clone();
    let q = base.add_place("q", PlaceRole::Recovery, 0)?;
    let tf = base.add_transition("tf", 0, false)?;
    let tr = base.add_transition("tr", 0, false)?;
    base.add_arc(Node::Place(r), Node::Transition(tf), 1, ArcKind::Normal)?;
    base.add_arc(Node::Transition(tf), Node::Place(q), 1, ArcKind::Normal)?;
    base.add_arc(Node::Place(q), Node::Transition(tr), 1, ArcKind::Normal)?;
    base.add_arc(Node::Transition(tr), Node::Place(r), 1, ArcKind::Normal)?;
    Ok((base, RecoverySubnet { resource: r, recovery_place: q, fail_transition: tf, repair_transition: tr }))
}

/// Control for total failure: inhibitor arcs of threshold `capacity` from `q`
/// to every transition leaving the idle place of a subnet that depends on `r`.
pub fn build_model_n(base: &PetriNet, rec: &RecoverySubnet, s: &S4prStructure, capacity: u32) -> Result<PetriNet> {
    let independent = independent_subnets(s, rec.resource)?;
    let mut net = base.clone();
    for i in 1..=s.subnet_count() {
        if independent.contains(&i) {
            continue;
        }
        let idle = s.idle_places[i - 1];
        for t in base.transition_ids() {
            if base.transition(t).pre_weight(idle) > 0 {
                net.add_arc(Node::Place(rec.recovery_place), Node::Transition(t), capacity, ArcKind::Inhibitor)?;
            }
        }
    }
    Ok(net)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthesisConfig {
    pub policy: ForbiddenPolicy,
    pub a_max: Option<u32>,
    pub b_max: Option<u32>,
    pub node_cap: usize,
}

impl Default for SynthesisConfig {
    fn default() -> Self {
        SynthesisConfig { policy: ForbiddenPolicy::FullUnrobust, a_max: None, b_max: None, node_cap: DEFAULT_NODE_CAP }
    }
}

/// Inputs shared by every partial-failure model.
#[derive(Clone, Copy, Debug)]
pub struct PipelineContext<'a> {
    pub net: &'a PetriNet,
    pub structure: &'a S4prStructure,
    pub m0: &'a Marking,
    pub resource: PlaceId,
    pub classification: &'a Classification,
}

/// Everything produced while synthesizing the monitors of one model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Synthesis {
    pub failed_units: u32,
    pub forbidden: BTreeSet<Marking>,
    pub reduced: ReducedSets,
    pub a_max: u32,
    pub b_max: u32,
    pub candidate_count: usize,
    pub plan: SupervisorPlan,
    /// Initial monitor tokens at `m0`.
    pub monitor_tokens: Vec<u32>,
    pub verification: VerificationReport,
}

/// Monitor synthesis for `j` failed units (`1 ≤ j < n`).
pub fn build_model_j(ctx: &PipelineContext<'_>, j: u32, config: &SynthesisConfig) -> Result<Synthesis> {
    let n = ctx.m0[ctx.resource];
    if j == 0 || j >= n {
        return Err(Error::ModelIndex { j, n });
    }
    let c = ctx.classification;
    let forbidden = forbidden_set(c, ctx.resource, j, config.policy);
    let pe = select_projection_places(ctx.net, ctx.structure, c, ctx.resource)?;
    let reduced = reduce(&c.robust, &forbidden, &pe)?;
    let (da, db) = default_bounds(&reduced);
    let a_max = config.a_max.unwrap_or(da);
    let b_max = config.b_max.unwrap_or(db);
    let cands = enumerate_separators(&reduced, a_max, b_max);
    let plan = select_minimal_cover(&cands, &reduced.forbidden_reduced)?;
    let (controlled, m) = build_supervisor(ctx.net, &plan, ctx.m0)?;
    let verification = verify_supervisor(&controlled, &m, &c.robust, &forbidden, config.node_cap)?;
    Ok(Synthesis {
        failed_units: j,
        forbidden,
        reduced,
        a_max,
        b_max,
        candidate_count: cands.len(),
        monitor_tokens: m.as_slice()[ctx.net.place_count()..].to_vec(),
        plan,
        verification,
    })
}

#[derive(Clone, Debug)]
pub struct MultiModelController {
    pub original: PetriNet,
    pub structure: S4prStructure,
    pub m0: Marking,
    /// Original net plus the recovery subnet (model 0).
    pub base: PetriNet,
    pub recovery: RecoverySubnet,
    pub capacity: u32,
    pub classification: Classification,
    pub models: BTreeMap<u32, Synthesis>,
    nets: Vec<PetriNet>,
}

impl MultiModelController {
    pub fn build(
        net: &PetriNet,
        s: &S4prStructure,
        m0: &Marking,
        r: PlaceId,
        config: &SynthesisConfig,
    ) -> Result<Self> {
        let capacity = m0[r];
        if capacity == 0 {
            return Err(Error::Argument(format!("`{}` has no units", net.place_name(r))));
        }
        let g = ReachabilityGraph::build(net, m0, config.node_cap)?;
        let classification = classify(net, s, &g, r)?;
        let (base, recovery) = attach_recovery(net, s, r)?;
        let base_m0 = m0.extended(&[0]);
        let ctx = PipelineContext { net, structure: s, m0, resource: r, classification: &classification };

        let mut models = BTreeMap::new();
        let mut nets = vec![base.clone()];
        for j in 1..capacity {
            let syn = build_model_j(&ctx, j, config)?;
            let (controlled, _) = build_supervisor(&base, &syn.plan, &base_m0)?;
            nets.push(controlled);
            models.insert(j, syn);
        }
        nets.push(build_model_n(&base, &recovery, s, capacity)?);
        Ok(MultiModelController {
            original: net.clone(),
            structure: s.clone(),
            m0: m0.clone(),
            base,
            recovery,
            capacity,
            classification,
            models,
            nets,
        })
    }

    /// Control structure active when `j` units are in recovery.
    pub fn model_net(&self, j: u32) -> &PetriNet {
        &self.nets[j.min(self.capacity) as usize]
    }

    /// Model `j` with `t_f` and `t_r` removed, for analysing behaviour while
    /// the number of failed units stays fixed.
    pub fn frozen_model(&self, j: u32) -> PetriNet {
        let (tf, tr) = (self.recovery.fail_transition, self.recovery.repair_transition);
        self.model_net(j).restrict_transitions(|t, _| t != tf && t != tr)
    }

    /// Base-net marking with `j` units moved from `r` to `q`.
    pub fn failed_marking(&self, j: u32) -> Result<Marking> {
        let r = self.recovery.resource;
        if self.m0[r] < j {
            return Err(Error::CannotFail { resource: self.original.place_name(r).to_string(), idle: self.m0[r], requested: j });
        }
        Ok(self.m0.with(r, self.m0[r] - j).extended(&[j]))
    }

    /// Original-net marking of a base marking, with units in recovery
    /// counted back into `r`.
    pub fn original_view(&self, base_marking: &Marking) -> Marking {
        let q = base_marking[self.recovery.recovery_place];
        let m = base_marking.truncated(self.original.place_count());
        let r = self.recovery.resource;
        m.with(r, m[r] + q)
    }

    pub fn model_names(&self) -> Vec<String> {
        (0..=self.capacity)
            .map(|j| match j {
                0 => "model_0 (uncontrolled)".to_string(),
                j if j == self.capacity => format!("model_{j} (inhibitors)"),
                j => format!("model_{j} ({} monitor(s))", self.models[&j].plan.len()),
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "UPPERCASE", deny_unknown_fields)]
pub enum Event {
    Fire { transition: String },
    Fail,
    Repair,
    Auto {
        count: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureScenario {
    pub steps: Vec<Event>,
    /// Seed for `AUTO` events without their own.
    pub seed: u64,
}

impl FailureScenario {
    /// Parses the JSON list-of-events format.
    pub fn from_json(text: &str, seed: u64) -> std::result::Result<Self, serde_json::Error> {
        Ok(FailureScenario { steps: serde_json::from_str(text)?, seed })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub step: usize,
    pub event: String,
    pub accepted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Active model index, `m(q)`.
    pub model: u32,
    /// Marking over the base places (original places followed by `q`).
    pub marking: Marking,
    pub monitors: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceSummary {
    pub accepted: usize,
    pub rejected: usize,
    pub final_model: u32,
    /// Transitions fired while at least one unit was in recovery.
    pub fired_during_failure: BTreeSet<String>,
    /// Whether every transition of every independent subnet fired while
    /// at least one unit was in recovery (false when no failure occurred).
    pub independent_active_during_failure: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub initial: Marking,
    pub steps: Vec<TraceStep>,
    pub summary: TraceSummary,
}

/// Token game over the active model, switching models on `FAIL`/`REPAIR`.
#[derive(Clone, Debug)]
pub struct Simulator<'a> {
    mmc: &'a MultiModelController,
    model: u32,
    marking: Marking,
    steps: Vec<TraceStep>,
    initial: Marking,
}

impl<'a> Simulator<'a> {
    /// `m0` is a marking of the original net; `q` starts empty.
    pub fn new(mmc: &'a MultiModelController, m0: &Marking) -> Result<Self> {
        mmc.original.check_marking(m0)?;
        let marking = m0.extended(&[0]);
        Ok(Simulator { mmc, model: 0, initial: marking.clone(), marking, steps: Vec::new() })
    }

    pub fn model(&self) -> u32 {
        self.model
    }

    pub fn active_net(&self) -> &PetriNet {
        self.mmc.model_net(self.model)
    }

    pub fn base_marking(&self) -> Marking {
        self.marking.truncated(self.mmc.base.place_count())
    }

    pub fn monitor_tokens(&self) -> Vec<u32> {
        self.marking.as_slice()[self.mmc.base.place_count()..].to_vec()
    }

    pub fn steps(&self) -> &[TraceStep] {
        &self.steps
    }

    /// Controllable transitions enabled under the active model.
    pub fn enabled(&self) -> Vec<TransitionId> {
        let net = self.active_net();
        net.enabled_transitions(&self.marking)
            .expect("marking matches active model")
            .into_iter()
            .filter(|&t| net.transition(t).controllable)
            .collect()
    }

    fn record(&mut self, event: String, reason: Option<String>) -> bool {
        let accepted = reason.is_none();
        self.steps.push(TraceStep {
            step: self.steps.len() + 1,
            event,
            accepted,
            reason,
            model: self.model,
            marking: self.base_marking(),
            monitors: self.monitor_tokens(),
        });
        accepted
    }

    /// Fires a controllable transition. Returns whether it was accepted.
    pub fn fire(&mut self, name: &str) -> Result<bool> {
        let net = self.active_net();
        let t = net.transition_id(name)?;
        if !net.transition(t).controllable {
            return Err(Error::Scenario(format!("`{name}` is uncontrollable; use FAIL or REPAIR")));
        }
        let label = format!("FIRE {name}");
        match net.fire(&self.marking, t) {
            Ok(m) => {
                self.marking = m;
                Ok(self.record(label, None))
            }
            Err(_) => Ok(self.record(label, Some(format!("`{name}` is not enabled")))),
        }
    }

    /// Moves to model `target` after firing the uncontrollable transition `t`.
    fn switch(&mut self, t: TransitionId, target: u32) -> std::result::Result<(), String> {
        let base = &self.mmc.base;
        let cur = self.base_marking();
        let next = base.fire(&cur, t).map_err(|e| e.to_string())?;
        let mut marking = next.clone();
        if target > 0 && target < self.mmc.capacity {
            let plan = &self.mmc.models[&target].plan;
            let mut tokens = Vec::with_capacity(plan.len());
            for g in &plan.constraints {
                let slack = g
                    .slack(&next)
                    .map_err(|_| format!("marking {next} is not admissible for model_{target}"))?;
                tokens.push(slack);
            }
            marking = next.extended(&tokens);
        }
        self.marking = marking;
        self.model = target;
        Ok(())
    }

    /// One idle unit of the unreliable resource fails.
    pub fn fail(&mut self) -> bool {
        let r = self.mmc.recovery.resource;
        let cur = self.base_marking();
        let reason = if cur[r] == 0 {
            Some("no idle unit can fail".to_string())
        } else if !self.mmc.classification.is_robust(&self.mmc.original_view(&cur)) {
            Some("failure in a non-robust marking".to_string())
        } else {
            self.switch(self.mmc.recovery.fail_transition, self.model + 1).err()
        };
        self.record("FAIL".to_string(), reason)
    }

    /// One unit returns from recovery.
    pub fn repair(&mut self) -> bool {
        let q = self.mmc.recovery.recovery_place;
        let reason = if self.base_marking()[q] == 0 {
            Some("no unit in recovery".to_string())
        } else {
            self.switch(self.mmc.recovery.repair_transition, self.model - 1).err()
        };
        self.record("REPAIR".to_string(), reason)
    }

    /// Up to `count` uniformly random controllable firings.
    pub fn auto(&mut self, count: usize, seed: u64) -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for k in 0..count {
            let enabled = self.enabled();
            let Some(&t) = enabled.choose(&mut rng) else {
                self.record("AUTO".to_string(), Some(format!("stalled after {k} firing(s)")));
                return k;
            };
            let name = self.active_net().transition_name(t).to_string();
            self.marking = self.active_net().fire(&self.marking, t).expect("chosen among enabled");
            self.record(format!("AUTO {name}"), None);
        }
        count
    }

    pub fn finish(self) -> Trace {
        let mut fired = BTreeSet::new();
        for s in &self.steps {
            if s.accepted && s.model > 0 {
                if let Some(name) = s.event.strip_prefix("FIRE ").or_else(|| s.event.strip_prefix("AUTO ")) {
                    fired.insert(name.to_string());
                }
            }
        }
        let s = &self.mmc.structure;
        let independent = independent_subnets(s, self.mmc.recovery.resource).unwrap_or_default();
        let required: Vec<&str> = independent
            .iter()
            .flat_map(|&i| s.subnet_transitions[i - 1].iter())
            .map(|&t| self.mmc.original.transition_name(t))
            .collect();
        let any_failure = self.steps.iter().any(|s| s.model > 0);
        let summary = TraceSummary {
            accepted: self.steps.iter().filter(|s| s.accepted).count(),
            rejected: self.steps.iter().filter(|s| !s.accepted).count(),
            final_model: self.model,
            independent_active_during_failure: any_failure && required.iter().all(|t| fired.contains(*t)),
            fired_during_failure: fired,
        };
        Trace { initial: self.initial, steps: self.steps, summary }
    }
}

/// Runs a scenario from `m0`. Rejected events are recorded in the trace;
/// malformed events (unknown or uncontrollable transitions) are errors.
pub fn simulate(mmc: &MultiModelController, m0: &Marking, sc: &FailureScenario) -> Result<Trace> {
    let mut sim = Simulator::new(mmc, m0)?;
    for (i, ev) in sc.steps.iter().enumerate() {
        match ev {
            Event::Fire { transition } => {
                sim.fire(transition)?;
            }
            Event::Fail => {
                sim.fail();
            }
            Event::Repair => {
                sim.repair();
            }
            Event::Auto { count, seed } => {
                sim.auto(*count, seed.unwrap_or(sc.seed.wrapping_add(i as u64)));
            }
        }
    }
    Ok(sim.finish())
}
