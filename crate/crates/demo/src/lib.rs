//! Browser bindings over the bundled case study: reachability explorer,
//! monitor synthesis and an interactive failure simulator.

use std::sync::OnceLock;

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use s4pr::controller::{build_model_j, MultiModelController, PipelineContext, Simulator, SynthesisConfig};
use s4pr::fixture::case_study;
use s4pr::io::S4prNet;
use s4pr::reach::{deadlocks, liveness, ReachabilityGraph};
use s4pr::robust::{classify, ForbiddenPolicy};

const CAP: usize = 100_000;

fn fixture() -> &'static S4prNet {
    static NET: OnceLock<S4prNet> = OnceLock::new();
    NET.get_or_init(case_study)
}

fn controller() -> &'static MultiModelController {
    static MMC: OnceLock<MultiModelController> = OnceLock::new();
    MMC.get_or_init(|| {
        let cs = fixture();
        let r = cs.net.place_id("p12").expect("fixture has p12");
        MultiModelController::build(&cs.net, &cs.structure, &cs.m0, r, &SynthesisConfig::default())
            .expect("fixture controller builds")
    })
}

fn place_names() -> Vec<&'static str> {
    let net = &fixture().net;
    net.place_ids().map(|p| net.place_name(p)).collect()
}

fn err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

/// Reachability graph with `p12_units` initial units of the unreliable
/// resource. Each marking is tagged robust/unrobust/deadlock when known.
pub fn reachability_json(p12_units: u32) -> Result<Value, s4pr::Error> {
    let cs = fixture();
    let r = cs.net.place_id("p12")?;
    let m0 = cs.m0.with(r, p12_units);
    let g = ReachabilityGraph::build(&cs.net, &m0, CAP)?;
    let dead = deadlocks(&g, &cs.net)?;
    let ts: Vec<_> = cs.net.transition_ids().collect();
    let live = liveness(&g, &cs.net, &ts)?;
    let classification = if p12_units == cs.m0[r] { Some(classify(&cs.net, &cs.structure, &g, r)?) } else { None };
    let markings: Vec<Value> = g
        .sorted_markings()
        .into_iter()
        .map(|m| {
            let tag = if dead.contains(&m) {
                "deadlock"
            } else {
                match &classification {
                    Some(c) if c.is_robust(&m) => "robust",
                    Some(_) => "unrobust",
                    None => "",
                }
            };
            json!({ "marking": m, "tag": tag })
        })
        .collect();
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|e| json!([e.source, cs.net.transition_name(e.transition), e.target]))
        .collect();
    Ok(json!({
        "places": place_names(),
        "nodes": g.node_count(),
        "edge_count": g.edge_count(),
        "deadlocks": dead.len(),
        "live": live.transitions.iter().filter(|t| t.live).map(|t| t.transition.clone()).collect::<Vec<_>>(),
        "dead": live.transitions.iter().filter(|t| !t.live).map(|t| t.transition.clone()).collect::<Vec<_>>(),
        "markings": markings,
        "graph": { "states": g.nodes(), "edges": edges },
    }))
}

/// Monitor synthesis for one failed unit.
pub fn synthesize_json(threshold: bool, a_max: Option<u32>, b_max: Option<u32>) -> Result<Value, s4pr::Error> {
    let cs = fixture();
    let mmc = controller();
    let ctx = PipelineContext {
        net: &cs.net,
        structure: &cs.structure,
        m0: &cs.m0,
        resource: mmc.recovery.resource,
        classification: &mmc.classification,
    };
    let policy = if threshold { ForbiddenPolicy::Threshold } else { ForbiddenPolicy::FullUnrobust };
    let config = SynthesisConfig { policy, a_max, b_max, node_cap: CAP };
    let syn = build_model_j(&ctx, 1, &config)?;
    let name = |p| cs.net.place_name(p);
    let constraints: Vec<Value> = syn
        .plan
        .constraints
        .iter()
        .zip(&syn.monitor_tokens)
        .map(|(g, tokens)| {
            let terms: Vec<String> = g
                .weights()
                .iter()
                .map(|&(p, w)| if w == 1 { format!("m({})", name(p)) } else { format!("{w}·m({})", name(p)) })
                .collect();
            json!({ "text": format!("{} ≤ {}", terms.join(" + "), g.bound()), "tokens": tokens })
        })
        .collect();
    let v = &syn.verification;
    Ok(json!({
        "projection_places": syn.reduced.projection_places.iter().map(|&p| name(p)).collect::<Vec<_>>(),
        "admissible_reduced": syn.reduced.admissible_reduced,
        "forbidden_reduced": syn.reduced.forbidden_reduced,
        "forbidden": syn.forbidden.len(),
        "candidates": syn.candidate_count,
        "a_max": syn.a_max,
        "b_max": syn.b_max,
        "constraints": constraints,
        "verification": {
            "passed": v.passed(),
            "reachable": v.reachable,
            "reachable_projections": v.reachable_projections,
            "forbidden_reached": v.forbidden_reached.len(),
            "admissible_missing": v.admissible_missing.len(),
        },
    }))
}

#[wasm_bindgen]
pub fn reachability(p12_units: u32) -> Result<String, JsError> {
    reachability_json(p12_units).map(|v| v.to_string()).map_err(err)
}

/// `a_max`/`b_max` of 0 mean the default enumeration bounds.
#[wasm_bindgen]
pub fn synthesize(threshold: bool, a_max: u32, b_max: u32) -> Result<String, JsError> {
    let opt = |x: u32| (x > 0).then_some(x);
    synthesize_json(threshold, opt(a_max), opt(b_max)).map(|v| v.to_string()).map_err(err)
}

/// Token game under the multi-model controller.
#[wasm_bindgen]
pub struct Session {
    sim: Simulator<'static>,
    seed: u64,
}

#[wasm_bindgen]
impl Session {
    #[wasm_bindgen(constructor)]
    pub fn new() -> Session {
        let sim = Simulator::new(controller(), &fixture().m0).expect("fixture marking fits");
        Session { sim, seed: 1 }
    }

    pub fn fire(&mut self, transition: &str) -> Result<bool, JsError> {
        self.try_fire(transition).map_err(err)
    }

    pub fn fail(&mut self) -> bool {
        self.sim.fail()
    }

    pub fn repair(&mut self) -> bool {
        self.sim.repair()
    }

    /// Random controllable firings; successive calls use successive seeds.
    pub fn auto(&mut self, count: usize) -> usize {
        self.seed += 1;
        self.sim.auto(count, self.seed)
    }

    pub fn state(&self) -> String {
        self.state_json().to_string()
    }
}

impl Default for Session {
    fn default() -> Self {
        Session::new()
    }
}

impl Session {
    pub fn state_json(&self) -> Value {
        let mmc = controller();
        let net = self.sim.active_net();
        let enabled: Vec<&str> = self.sim.enabled().into_iter().map(|t| net.transition_name(t)).collect();
        let base = self.sim.base_marking();
        let mut places: Vec<&str> = place_names();
        places.push(mmc.base.place_name(mmc.recovery.recovery_place));
        let steps = self.sim.steps();
        json!({
            "model": self.sim.model(),
            "models": mmc.model_names(),
            "places": places,
            "marking": base,
            "monitors": self.sim.monitor_tokens(),
            "robust": mmc.classification.is_robust(&mmc.original_view(&base)),
            "enabled": enabled,
            "transitions": mmc.original.transition_ids().map(|t| mmc.original.transition_name(t)).collect::<Vec<_>>(),
            "log": steps.iter().rev().take(50).collect::<Vec<_>>(),
        })
    }

    pub fn try_fire(&mut self, transition: &str) -> Result<bool, s4pr::Error> {
        self.sim.fire(transition)
    }
}
