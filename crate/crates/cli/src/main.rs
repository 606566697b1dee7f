mod dot;
mod report;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use s4pr::controller::{simulate, FailureScenario, MultiModelController, PipelineContext, SynthesisConfig};
use s4pr::gmec::build_supervisor;
use s4pr::io::{parse_override, S4prNet};
use s4pr::model::{check_initial_marking, independent_subnets, validate_s4pr};
use s4pr::reach::{bounds, deadlocks, liveness, ReachabilityGraph, DEFAULT_NODE_CAP};
use s4pr::robust::{classify, ForbiddenPolicy};
use s4pr::{Error, Marking, PetriNet, PlaceId};

use crate::report::Report;

#[derive(Parser)]
#[command(name = "s4pr", version, about = "Robustness analysis and controller synthesis for S4PR nets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    Full,
    Threshold,
}

#[derive(clap::Args)]
struct CapArg {
    /// Maximum number of reachability nodes
    #[arg(long = "cap", env = "S4PR_NODE_CAP", default_value_t = DEFAULT_NODE_CAP)]
    cap: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Check the net against the S4PR class rules
    Validate { path: PathBuf },
    /// Reachability graph statistics, deadlocks and liveness
    Reach {
        path: PathBuf,
        /// Override an initial marking entry, e.g. p12=1 (repeatable)
        #[arg(long = "override-marking", value_name = "PLACE=TOKENS")]
        overrides: Vec<String>,
        /// Also write the graph in DOT format
        #[arg(long, value_name = "OUT")]
        dot: Option<PathBuf>,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Split the reachable markings into robust and non-robust ones
    Classify {
        path: PathBuf,
        /// Unreliable resource; defaults to the only declared one
        #[arg(long)]
        resource: Option<String>,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Synthesize the monitors for j failed units
    Synthesize {
        path: PathBuf,
        /// Unreliable resource; defaults to the only declared one
        #[arg(long)]
        resource: Option<String>,
        /// Number of failed units, 1 <= j < capacity
        #[arg(long = "j", default_value_t = 1)]
        j: u32,
        /// Forbid every non-robust marking, or only those with at least j idle units
        #[arg(long, value_enum, default_value_t = Policy::Full)]
        policy: Policy,
        /// Largest constraint weight to enumerate
        #[arg(long)]
        amax: Option<u32>,
        /// Largest constraint bound to enumerate
        #[arg(long)]
        bmax: Option<u32>,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Run a failure scenario against the multi-model controller
    Simulate {
        path: PathBuf,
        /// Unreliable resource; defaults to the only declared one
        #[arg(long)]
        resource: Option<String>,
        /// JSON list of FIRE / FAIL / REPAIR / AUTO events
        #[arg(long, value_name = "FILE")]
        scenario: PathBuf,
        /// Write the full step-by-step trace here
        #[arg(long, value_name = "OUT")]
        trace: Option<PathBuf>,
        /// Seed for AUTO events without their own
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Write the reachability graph in DOT format
    ExportDot {
        path: PathBuf,
        /// Output file; stdout when omitted
        out: Option<PathBuf>,
        #[arg(long = "override-marking", value_name = "PLACE=TOKENS")]
        overrides: Vec<String>,
        #[command(flatten)]
        cap: CapArg,
    },
}

enum Failure {
    Domain(Error),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = Result<ExitCode, Failure>;

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(S4prNet, Vec<u8>), Failure> {
    let bytes = read(path)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let net = S4prNet::load(text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))??;
    Ok((net, bytes))
}

fn resource(s: &S4prNet, name: Option<&str>) -> Result<PlaceId, Error> {
    match name {
        Some(n) => {
            let r = s.net.place_id(n)?;
            if s.structure.is_unreliable(r) {
                Ok(r)
            } else {
                Err(Error::NotUnreliable(n.to_string()))
            }
        }
        None => match s.structure.unreliable.as_slice() {
            [] => Err(Error::NoUnreliable),
            [r] => Ok(*r),
            _ => Err(Error::Argument("several unreliable resources; pass --resource".into())),
        },
    }
}

fn initial(s: &S4prNet, overrides: &[String]) -> Result<Marking, Error> {
    let map = overrides.iter().map(|o| parse_override(o)).collect::<Result<BTreeMap<_, _>, _>>()?;
    s.marking_with(&map)
}

fn names(net: &PetriNet, ps: &[PlaceId]) -> Vec<String> {
    ps.iter().map(|&p| net.place_name(p).to_string()).collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(Failure::Domain(e)) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error[PARSE]: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Validate { path } => {
            let (s, _) = load(&path)?;
            let mut diags = validate_s4pr(&s.net, &s.structure);
            diags.extend(check_initial_marking(&s.net, &s.structure, &s.m0));
            for d in &diags {
                println!("{d}");
            }
            if diags.is_empty() {
                println!("ok: {} places, {} transitions", s.net.place_count(), s.net.transition_count());
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::Reach { path, overrides, dot, cap } => {
            let (s, bytes) = load(&path)?;
            let m0 = initial(&s, &overrides)?;
            let g = ReachabilityGraph::build(&s.net, &m0, cap.cap)?;
            if let Some(out) = dot {
                write(&out, &dot::reachability_dot(&g, &s.net))?;
            }
            let ts: Vec<_> = s.net.transition_ids().collect();
            let live = liveness(&g, &s.net, &ts)?;
            let results = json!({
                "initial": m0,
                "nodes": g.node_count(),
                "edges": g.edge_count(),
                "places": names(&s.net, &s.net.place_ids().collect::<Vec<_>>()),
                "bounds": bounds(&g),
                "deadlocks": deadlocks(&g, &s.net)?,
                "liveness": live.transitions.iter().map(|t| (t.transition.clone(), Value::Bool(t.live))).collect::<serde_json::Map<_, _>>(),
                "all_live": live.all_live(),
                "markings": g.sorted_markings(),
            });
            Report::new("reach", &[&bytes, overrides.join(",").as_bytes()], results).print();
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { path, resource: rname, cap } => {
            let (s, bytes) = load(&path)?;
            let r = resource(&s, rname.as_deref())?;
            let g = ReachabilityGraph::build(&s.net, &s.m0, cap.cap)?;
            let c = classify(&s.net, &s.structure, &g, r)?;
            let results = json!({
                "resource": s.net.place_name(r),
                "independent_subnets": independent_subnets(&s.structure, r)?,
                "reachable": g.node_count(),
                "robust_count": c.robust.len(),
                "unrobust_count": c.unrobust.len(),
                "robust": c.robust,
                "unrobust": c.unrobust,
            });
            Report::new("classify", &[&bytes, s.net.place_name(r).as_bytes()], results).print();
            Ok(ExitCode::SUCCESS)
        }
        Command::Synthesize { path, resource: rname, j, policy, amax, bmax, cap } => {
            let (s, bytes) = load(&path)?;
            let r = resource(&s, rname.as_deref())?;
            let config = SynthesisConfig {
                policy: match policy {
                    Policy::Full => ForbiddenPolicy::FullUnrobust,
                    Policy::Threshold => ForbiddenPolicy::Threshold,
                },
                a_max: amax,
                b_max: bmax,
                node_cap: cap.cap,
            };
            let g = ReachabilityGraph::build(&s.net, &s.m0, cap.cap)?;
            let c = classify(&s.net, &s.structure, &g, r)?;
            let ctx = PipelineContext { net: &s.net, structure: &s.structure, m0: &s.m0, resource: r, classification: &c };
            let syn = s4pr::controller::build_model_j(&ctx, j, &config)?;
            let (controlled, _) = build_supervisor(&s.net, &syn.plan, &s.m0)?;
            let plan: Vec<Value> = syn
                .plan
                .constraints
                .iter()
                .zip(&syn.monitor_tokens)
                .zip(controlled.monitors())
                .map(|((gm, tokens), (pc, _))| {
                    json!({
                        "monitor": controlled.place_name(*pc),
                        "weights": gm.weights().iter().map(|&(p, w)| (s.net.place_name(p).to_string(), json!(w))).collect::<serde_json::Map<_, _>>(),
                        "bound": gm.bound(),
                        "incidence_row": s.net.monitor_row(gm),
                        "initial_tokens": tokens,
                    })
                })
                .collect();
            let v = &syn.verification;
            let results = json!({
                "resource": s.net.place_name(r),
                "j": j,
                "policy": match policy { Policy::Full => "full", Policy::Threshold => "threshold" },
                "forbidden_count": syn.forbidden.len(),
                "forbidden": syn.forbidden,
                "projection_places": names(&s.net, &syn.reduced.projection_places),
                "admissible_reduced": syn.reduced.admissible_reduced,
                "forbidden_reduced": syn.reduced.forbidden_reduced,
                "a_max": syn.a_max,
                "b_max": syn.b_max,
                "candidates": syn.candidate_count,
                "monitors": plan,
                "optimality_gap": syn.plan.optimality_gap,
                "verification": {
                    "passed": v.passed(),
                    "reachable": v.reachable,
                    "reachable_projections": v.reachable_projections,
                    "forbidden_excluded": v.forbidden_excluded(),
                    "maximally_permissive": v.maximally_permissive(),
                    "invariants_hold": v.invariants_hold(),
                    "forbidden_reached": v.forbidden_reached,
                    "admissible_missing": v.admissible_missing,
                    "invariant_violations": v.invariant_violations,
                },
            });
            let args = format!("{} {j} {} {amax:?} {bmax:?}", s.net.place_name(r), results["policy"]);
            Report::new("synthesize", &[&bytes, args.as_bytes()], results).print();
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate { path, resource: rname, scenario, trace, seed, cap } => {
            let (s, bytes) = load(&path)?;
            let r = resource(&s, rname.as_deref())?;
            let sc_bytes = read(&scenario)?;
            let sc_text = String::from_utf8_lossy(&sc_bytes);
            let sc = FailureScenario::from_json(&sc_text, seed)
                .map_err(|e| Failure::Input(format!("{}: {e}", scenario.display())))?;
            let config = SynthesisConfig { node_cap: cap.cap, ..Default::default() };
            let mmc = MultiModelController::build(&s.net, &s.structure, &s.m0, r, &config)?;
            let t = simulate(&mmc, &s.m0, &sc)?;
            if let Some(out) = trace {
                let mut text = String::new();
                report::render(&serde_json::to_value(&t).expect("trace serializes"), 0, &mut text);
                text.push('\n');
                write(&out, &text)?;
            }
            let last = t.steps.last();
            let results = json!({
                "resource": s.net.place_name(r),
                "models": mmc.model_names(),
                "steps": t.steps.len(),
                "summary": t.summary,
                "final_marking": last.map_or(&t.initial, |st| &st.marking),
                "final_monitors": last.map(|st| st.monitors.clone()).unwrap_or_default(),
            });
            Report::new("simulate", &[&bytes, &sc_bytes, &seed.to_le_bytes()], results).print();
            Ok(ExitCode::SUCCESS)
        }
        Command::ExportDot { path, out, overrides, cap } => {
            let (s, _) = load(&path)?;
            let m0 = initial(&s, &overrides)?;
            let g = ReachabilityGraph::build(&s.net, &m0, cap.cap)?;
            let text = dot::reachability_dot(&g, &s.net);
            match out {
                Some(p) => write(&p, &text)?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
