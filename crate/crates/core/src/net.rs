//! Place/transition nets with weighted normal arcs and inhibitor arcs.
//!
//! Place order is fixed when places are added and is the vector order used by
//! [`Marking`], [`IncidenceMatrix`] and every report.

use std::collections::HashMap;
use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gmec::Gmec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlaceId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TransitionId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaceRole {
    Idle,
    Operation,
    Resource,
    Recovery,
    Monitor,
}

impl PlaceRole {
    pub fn as_str(self) -> &'static str {
        match self {
            PlaceRole::Idle => "idle",
            PlaceRole::Operation => "operation",
            PlaceRole::Resource => "resource",
            PlaceRole::Recovery => "recovery",
            PlaceRole::Monitor => "monitor",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArcKind {
    #[default]
    Normal,
    Inhibitor,
}

impl ArcKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ArcKind::Normal => "normal",
            ArcKind::Inhibitor => "inhibitor",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Place(PlaceId),
    Transition(TransitionId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Arc {
    pub from: Node,
    pub to: Node,
    pub weight: u32,
    pub kind: ArcKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Place {
    pub name: String,
    pub role: PlaceRole,
    /// Process subnet index, 0 for shared places.
    pub subnet: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub name: String,
    pub subnet: usize,
    pub controllable: bool,
    pre: Vec<(PlaceId, u32)>,
    post: Vec<(PlaceId, u32)>,
    inhibitors: Vec<(PlaceId, u32)>,
}

impl Transition {
    /// Normal input arcs `(place, weight)`.
    pub fn pre(&self) -> &[(PlaceId, u32)] {
        &self.pre
    }

    pub fn post(&self) -> &[(PlaceId, u32)] {
        &self.post
    }

    /// Inhibitor arcs `(place, threshold)`: the transition is disabled once
    /// the place holds `threshold` tokens or more.
    pub fn inhibitors(&self) -> &[(PlaceId, u32)] {
        &self.inhibitors
    }

    pub fn pre_weight(&self, p: PlaceId) -> u32 {
        weight_of(&self.pre, p)
    }

    pub fn post_weight(&self, p: PlaceId) -> u32 {
        weight_of(&self.post, p)
    }

    /// True if the transition consumes from or produces into `p` through a normal arc.
    pub fn touches(&self, p: PlaceId) -> bool {
        self.pre_weight(p) > 0 || self.post_weight(p) > 0
    }
}

fn weight_of(arcs: &[(PlaceId, u32)], p: PlaceId) -> u32 {
    arcs.iter().find(|(q, _)| *q == p).map_or(0, |(_, w)| *w)
}

/// Token counts over the places of a net, in place order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Marking(Vec<u32>);

impl Marking {
    pub fn new(tokens: Vec<u32>) -> Self {
        Marking(tokens)
    }

    pub fn zeros(len: usize) -> Self {
        Marking(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    /// Copy with place `p` set to `tokens`.
    pub fn with(&self, p: PlaceId, tokens: u32) -> Marking {
        let mut v = self.0.clone();
        v[p.0] = tokens;
        Marking(v)
    }

    /// Copy extended by extra trailing places.
    pub fn extended(&self, extra: &[u32]) -> Marking {
        let mut v = self.0.clone();
        v.extend_from_slice(extra);
        Marking(v)
    }

    /// First `len` entries.
    pub fn truncated(&self, len: usize) -> Marking {
        Marking(self.0[..len].to_vec())
    }

    pub fn project(&self, places: &[PlaceId]) -> Vec<u32> {
        places.iter().map(|p| self.0[p.0]).collect()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&x| u64::from(x)).sum()
    }
}

impl Index<PlaceId> for Marking {
    type Output = u32;

    fn index(&self, p: PlaceId) -> &u32 {
        &self.0[p.0]
    }
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// Rows are places, columns are transitions; entry is post minus pre weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IncidenceMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IncidenceMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, p: PlaceId, t: TransitionId) -> i64 {
        self.data[p.0 * self.cols + t.0]
    }

    pub fn row(&self, p: PlaceId) -> &[i64] {
        &self.data[p.0 * self.cols..(p.0 + 1) * self.cols]
    }

    pub fn column(&self, t: TransitionId) -> Vec<i64> {
        (0..self.rows).map(|r| self.data[r * self.cols + t.0]).collect()
    }

    /// Linear combination `Σ weight·row(p)`.
    pub fn combine_rows(&self, weights: &[(PlaceId, u32)]) -> Vec<i64> {
        let mut out = vec![0i64; self.cols];
        for &(p, w) in weights {
            for (o, x) in out.iter_mut().zip(self.row(p)) {
                *o += i64::from(w) * x;
            }
        }
        out
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PetriNet {
    places: Vec<Place>,
    transitions: Vec<Transition>,
    place_index: HashMap<String, PlaceId>,
    transition_index: HashMap<String, TransitionId>,
    monitors: Vec<(PlaceId, Gmec)>,
}

impl PetriNet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_place(&mut self, name: &str, role: PlaceRole, subnet: usize) -> Result<PlaceId> {
        if self.place_index.contains_key(name) || self.transition_index.contains_key(name) {
            return Err(Error::DuplicatePlace(name.to_string()));
        }
        let id = PlaceId(self.places.len());
        self.places.push(Place { name: name.to_string(), role, subnet });
        self.place_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn add_transition(
        &mut self,
        name: &str,
        subnet: usize,
        controllable: bool,
    ) -> Result<TransitionId> {
        if self.transition_index.contains_key(name) || self.place_index.contains_key(name) {
            return Err(Error::DuplicateTransition(name.to_string()));
        }
        let id = TransitionId(self.transitions.len());
        self.transitions.push(Transition {
            name: name.to_string(),
            subnet,
            controllable,
            pre: Vec::new(),
            post: Vec::new(),
            inhibitors: Vec::new(),
        });
        self.transition_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn add_arc(&mut self, from: Node, to: Node, weight: u32, kind: ArcKind) -> Result<()> {
        let (fname, tname) = (self.node_name(from), self.node_name(to));
        if weight == 0 {
            return Err(Error::ZeroWeight { from: fname, to: tname });
        }
        let (list, p) = match (from, to, kind) {
            (Node::Place(p), Node::Transition(t), ArcKind::Normal) => {
                (&mut self.transitions[t.0].pre, p)
            }
            (Node::Place(p), Node::Transition(t), ArcKind::Inhibitor) => {
                (&mut self.transitions[t.0].inhibitors, p)
            }
            (Node::Transition(t), Node::Place(p), ArcKind::Normal) => {
                (&mut self.transitions[t.0].post, p)
            }
            (Node::Transition(_), Node::Place(_), ArcKind::Inhibitor) => {
                return Err(Error::InhibitorDirection { from: fname, to: tname })
            }
            _ => return Err(Error::BadArcEndpoints { from: fname, to: tname }),
        };
        if list.iter().any(|(q, _)| *q == p) {
            return Err(Error::DuplicateArc { from: fname, to: tname, kind: kind.as_str() });
        }
        list.push((p, weight));
        list.sort_unstable();
        Ok(())
    }

    /// Adds an arc between two nodes given by name.
    pub fn add_arc_by_name(&mut self, from: &str, to: &str, weight: u32, kind: ArcKind) -> Result<()> {
        let from = self.node(from)?;
        let to = self.node(to)?;
        self.add_arc(from, to, weight, kind)
    }

    pub fn node(&self, name: &str) -> Result<Node> {
        if let Some(&p) = self.place_index.get(name) {
            Ok(Node::Place(p))
        } else if let Some(&t) = self.transition_index.get(name) {
            Ok(Node::Transition(t))
        } else {
            Err(Error::UnknownNode(name.to_string()))
        }
    }

    fn node_name(&self, n: Node) -> String {
        match n {
            Node::Place(p) => self.places[p.0].name.clone(),
            Node::Transition(t) => self.transitions[t.0].name.clone(),
        }
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn place(&self, p: PlaceId) -> &Place {
        &self.places[p.0]
    }

    pub fn transition(&self, t: TransitionId) -> &Transition {
        &self.transitions[t.0]
    }

    pub fn place_count(&self) -> usize {
        self.places.len()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn place_ids(&self) -> impl Iterator<Item = PlaceId> {
        (0..self.places.len()).map(PlaceId)
    }

    pub fn transition_ids(&self) -> impl Iterator<Item = TransitionId> {
        (0..self.transitions.len()).map(TransitionId)
    }

    pub fn place_id(&self, name: &str) -> Result<PlaceId> {
        self.place_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownPlace(name.to_string()))
    }

    pub fn transition_id(&self, name: &str) -> Result<TransitionId> {
        self.transition_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownTransition(name.to_string()))
    }

    pub fn place_name(&self, p: PlaceId) -> &str {
        &self.places[p.0].name
    }

    pub fn transition_name(&self, t: TransitionId) -> &str {
        &self.transitions[t.0].name
    }

    /// Places with the given role, in place order.
    pub fn places_with_role(&self, role: PlaceRole) -> Vec<PlaceId> {
        self.place_ids().filter(|&p| self.places[p.0].role == role).collect()
    }

    /// Monitor places added by [`PetriNet::add_monitor`] with their constraints.
    pub fn monitors(&self) -> &[(PlaceId, Gmec)] {
        &self.monitors
    }

    /// All arcs, transition by transition: inputs, inhibitors, outputs.
    pub fn arcs(&self) -> Vec<Arc> {
        let mut out = Vec::new();
        for (i, t) in self.transitions.iter().enumerate() {
            let tn = Node::Transition(TransitionId(i));
            for &(p, w) in &t.pre {
                out.push(Arc { from: Node::Place(p), to: tn, weight: w, kind: ArcKind::Normal });
            }
            for &(p, w) in &t.inhibitors {
                out.push(Arc { from: Node::Place(p), to: tn, weight: w, kind: ArcKind::Inhibitor });
            }
            for &(p, w) in &t.post {
                out.push(Arc { from: tn, to: Node::Place(p), weight: w, kind: ArcKind::Normal });
            }
        }
        out
    }

    pub fn check_marking(&self, m: &Marking) -> Result<()> {
        if m.len() != self.places.len() {
            return Err(Error::DimensionMismatch { expected: self.places.len(), got: m.len() });
        }
        Ok(())
    }

    pub fn is_enabled(&self, m: &Marking, t: TransitionId) -> Result<bool> {
        self.check_marking(m)?;
        Ok(self.enabled_unchecked(m, t))
    }

    fn enabled_unchecked(&self, m: &Marking, t: TransitionId) -> bool {
        let tr = &self.transitions[t.0];
        tr.pre.iter().all(|&(p, w)| m.0[p.0] >= w) && tr.inhibitors.iter().all(|&(p, w)| m.0[p.0] < w)
    }

    pub fn enabled_transitions(&self, m: &Marking) -> Result<Vec<TransitionId>> {
        self.check_marking(m)?;
        Ok(self.transition_ids().filter(|&t| self.enabled_unchecked(m, t)).collect())
    }

    /// Fires `t` and returns the successor marking. `m` is left untouched.
    pub fn fire(&self, m: &Marking, t: TransitionId) -> Result<Marking> {
        if !self.is_enabled(m, t)? {
            return Err(Error::NotEnabled(self.transitions[t.0].name.clone()));
        }
        Ok(self.fire_unchecked(m, t))
    }

    pub(crate) fn fire_unchecked(&self, m: &Marking, t: TransitionId) -> Marking {
        let tr = &self.transitions[t.0];
        let mut next = m.0.clone();
        for &(p, w) in &tr.pre {
            next[p.0] -= w;
        }
        for &(p, w) in &tr.post {
            next[p.0] += w;
        }
        Marking(next)
    }

    pub fn incidence_matrix(&self) -> IncidenceMatrix {
        let mut n = IncidenceMatrix::zeros(self.places.len(), self.transitions.len());
        let cols = n.cols;
        for (j, t) in self.transitions.iter().enumerate() {
            for &(p, w) in &t.post {
                n.data[p.0 * cols + j] += i64::from(w);
            }
            for &(p, w) in &t.pre {
                n.data[p.0 * cols + j] -= i64::from(w);
            }
        }
        n
    }

    /// Incidence row a monitor for `g` would get: `−l·N`.
    pub fn monitor_row(&self, g: &Gmec) -> Vec<i64> {
        self.incidence_matrix()
            .combine_rows(g.weights())
            .into_iter()
            .map(|x| -x)
            .collect()
    }

    /// Adds a monitor place enforcing `l·m ≤ b`, returning the controlled net and
    /// `m_ref` extended with the monitor's initial tokens `b − l·m_ref`.
    pub fn add_monitor(&self, g: &Gmec, m_ref: &Marking) -> Result<(PetriNet, Marking)> {
        self.check_marking(m_ref)?;
        for &(p, _) in g.weights() {
            if p.0 >= self.places.len() {
                return Err(Error::UnknownPlace(format!("#{}", p.0)));
            }
        }
        let tokens = g.slack(m_ref)?;
        let row = self.monitor_row(g);
        for (j, &x) in row.iter().enumerate() {
            if x != 0 && !self.transitions[j].controllable {
                return Err(Error::Uncontrollable(self.transitions[j].name.clone()));
            }
        }
        let mut net = self.clone();
        let mut k = net.monitors.len() + 1;
        let mut name = format!("pc{k}");
        while net.place_index.contains_key(&name) || net.transition_index.contains_key(&name) {
            k += 1;
            name = format!("pc{k}");
        }
        let pc = net.add_place(&name, PlaceRole::Monitor, 0)?;
        for (j, &x) in row.iter().enumerate() {
            let t = Node::Transition(TransitionId(j));
            if x < 0 {
                net.add_arc(Node::Place(pc), t, (-x) as u32, ArcKind::Normal)?;
            } else if x > 0 {
                net.add_arc(t, Node::Place(pc), x as u32, ArcKind::Normal)?;
            }
        }
        net.monitors.push((pc, g.clone()));
        Ok((net, m_ref.extended(&[tokens])))
    }

    /// Copy of the net keeping only the transitions selected by `keep`.
    /// Places are unchanged; transition ids are renumbered in order.
    pub fn restrict_transitions(&self, mut keep: impl FnMut(TransitionId, &Transition) -> bool) -> PetriNet {
        let mut net = PetriNet {
            places: self.places.clone(),
            transitions: Vec::new(),
            place_index: self.place_index.clone(),
            transition_index: HashMap::new(),
            monitors: self.monitors.clone(),
        };
        for (i, t) in self.transitions.iter().enumerate() {
            if keep(TransitionId(i), t) {
                net.transition_index.insert(t.name.clone(), TransitionId(net.transitions.len()));
                net.transitions.push(t.clone());
            }
        }
        net
    }
}
