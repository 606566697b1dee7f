//! Reachability graphs, deadlocks, bounds and SCC-based liveness.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::net::{Marking, PetriNet, TransitionId};

pub const DEFAULT_NODE_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub source: usize,
    pub transition: TransitionId,
    pub target: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ExploreOrder {
    #[default]
    Breadth,
    Depth,
}

/// Markings reachable from one or more roots. Node 0 is the first root.
#[derive(Clone, Debug)]
pub struct ReachabilityGraph {
    nodes: Vec<Marking>,
    index: HashMap<Marking, usize>,
    edges: Vec<Edge>,
    succ: Vec<Vec<usize>>,
    roots: Vec<usize>,
}

impl ReachabilityGraph {
    /// Breadth-first exploration from `m0`, failing once more than `node_cap`
    /// markings have been found.
    pub fn build(net: &PetriNet, m0: &Marking, node_cap: usize) -> Result<Self> {
        Self::build_from(net, std::slice::from_ref(m0), node_cap)
    }

    /// Joint breadth-first exploration from several roots.
    pub fn build_from(net: &PetriNet, roots: &[Marking], node_cap: usize) -> Result<Self> {
        Self::build_with(net, roots, node_cap, ExploreOrder::Breadth)
    }

    pub fn build_with(net: &PetriNet, roots: &[Marking], node_cap: usize, order: ExploreOrder) -> Result<Self> {
        let mut g = ReachabilityGraph {
            nodes: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
            succ: Vec::new(),
            roots: Vec::new(),
        };
        let mut queue = VecDeque::new();
        for m in roots {
            net.check_marking(m)?;
            let (id, new) = g.intern(m.clone(), node_cap)?;
            if new {
                queue.push_back(id);
            }
            g.roots.push(id);
        }
        while let Some(v) = match order {
            ExploreOrder::Breadth => queue.pop_front(),
            ExploreOrder::Depth => queue.pop_back(),
        } {
            let m = g.nodes[v].clone();
            for t in net.enabled_transitions(&m)? {
                let next = net.fire_unchecked(&m, t);
                let (w, new) = g.intern(next, node_cap)?;
                if new {
                    queue.push_back(w);
                }
                g.edges.push(Edge { source: v, transition: t, target: w });
                g.succ[v].push(w);
            }
        }
        Ok(g)
    }

    fn intern(&mut self, m: Marking, cap: usize) -> Result<(usize, bool)> {
        if let Some(&id) = self.index.get(&m) {
            return Ok((id, false));
        }
        if self.nodes.len() >= cap {
            return Err(Error::NodeCapExceeded { cap });
        }
        let id = self.nodes.len();
        self.index.insert(m.clone(), id);
        self.nodes.push(m);
        self.succ.push(Vec::new());
        Ok((id, true))
    }

    pub fn root(&self) -> &Marking {
        &self.nodes[self.roots[0]]
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[Marking] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Marking {
        &self.nodes[i]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn index_of(&self, m: &Marking) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn contains(&self, m: &Marking) -> bool {
        self.index.contains_key(m)
    }

    /// Markings in lexicographic order.
    pub fn sorted_markings(&self) -> Vec<Marking> {
        let mut v = self.nodes.clone();
        v.sort();
        v
    }

    pub fn sccs(&self) -> Sccs {
        Sccs::compute(&self.succ)
    }
}

/// Strongly connected components, numbered in reverse topological order
/// (a component only reaches components with smaller or equal index).
#[derive(Clone, Debug)]
pub struct Sccs {
    component: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl Sccs {
    /// Iterative Tarjan over an adjacency list.
    pub fn compute(succ: &[Vec<usize>]) -> Self {
        const UNSEEN: usize = usize::MAX;
        let n = succ.len();
        let mut index = vec![UNSEEN; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut component = vec![UNSEEN; n];
        let mut members = Vec::new();
        let mut next = 0;
        let mut call: Vec<(usize, usize)> = Vec::new();

        for start in 0..n {
            if index[start] != UNSEEN {
                continue;
            }
            call.push((start, 0));
            index[start] = next;
            low[start] = next;
            next += 1;
            stack.push(start);
            on_stack[start] = true;
            while let Some(&(v, i)) = call.last() {
                if i < succ[v].len() {
                    let w = succ[v][i];
                    call.last_mut().expect("frame").1 += 1;
                    if index[w] == UNSEEN {
                        index[w] = next;
                        low[w] = next;
                        next += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(u, _)) = call.last() {
                        low[u] = low[u].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let c = members.len();
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            component[w] = c;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        members.push(comp);
                    }
                }
            }
        }
        Sccs { component, members }
    }

    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.component[v]
    }

    pub fn members(&self, c: usize) -> &[usize] {
        &self.members[c]
    }

    /// Components with no edge leaving them.
    pub fn terminal(&self, succ: &[Vec<usize>]) -> Vec<usize> {
        (0..self.members.len())
            .filter(|&c| self.members[c].iter().all(|&v| succ[v].iter().all(|&w| self.component[w] == c)))
            .collect()
    }
}

/// Markings with no enabled transition, sorted.
pub fn deadlocks(g: &ReachabilityGraph, net: &PetriNet) -> Result<Vec<Marking>> {
    let mut out = Vec::new();
    for m in g.nodes() {
        if net.enabled_transitions(m)?.is_empty() {
            out.push(m.clone());
        }
    }
    out.sort();
    Ok(out)
}

/// Per-place maximum over all nodes.
pub fn bounds(g: &ReachabilityGraph) -> Vec<u32> {
    let width = g.root().len();
    let mut out = vec![0; width];
    for m in g.nodes() {
        for (o, &x) in out.iter_mut().zip(m.as_slice()) {
            *o = (*o).max(x);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitionLiveness {
    pub transition: String,
    pub live: bool,
    /// A marking from which the transition can never fire again.
    pub witness: Option<Marking>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LivenessReport {
    pub transitions: Vec<TransitionLiveness>,
}

impl LivenessReport {
    pub fn all_live(&self) -> bool {
        self.transitions.iter().all(|t| t.live)
    }

    pub fn is_live(&self, name: &str) -> Option<bool> {
        self.transitions.iter().find(|t| t.transition == name).map(|t| t.live)
    }
}

/// A transition is live iff every terminal SCC holds a marking enabling it.
pub fn liveness(g: &ReachabilityGraph, net: &PetriNet, ts: &[TransitionId]) -> Result<LivenessReport> {
    for &t in ts {
        if t.0 >= net.transition_count() {
            return Err(Error::UnknownTransition(format!("#{}", t.0)));
        }
    }
    let sccs = g.sccs();
    let terminal = sccs.terminal(&g.succ);
    let mut out = Vec::with_capacity(ts.len());
    for &t in ts {
        let mut witness = None;
        for &c in &terminal {
            let members = sccs.members(c);
            let mut enables = false;
            for &v in members {
                if net.is_enabled(g.node(v), t)? {
                    enables = true;
                    break;
                }
            }
            if !enables {
                witness = Some(g.node(members[0]).clone());
                break;
            }
        }
        out.push(TransitionLiveness {
            transition: net.transition_name(t).to_string(),
            live: witness.is_none(),
            witness,
        });
    }
    Ok(LivenessReport { transitions: out })
}
