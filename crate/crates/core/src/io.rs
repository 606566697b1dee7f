//! JSON net documents.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::S4prStructure;
use crate::net::{ArcKind, Marking, Node, PetriNet, PlaceRole};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaceDoc {
    pub id: String,
    pub role: PlaceRole,
    #[serde(default)]
    pub subnet: usize,
    #[serde(default)]
    pub tokens: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDoc {
    pub id: String,
    #[serde(default)]
    pub subnet: usize,
    #[serde(default = "yes")]
    pub controllable: bool,
}

fn yes() -> bool {
    true
}

fn one() -> u32 {
    1
}

fn is_one(w: &u32) -> bool {
    *w == 1
}

fn is_normal(k: &ArcKind) -> bool {
    *k == ArcKind::Normal
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcDoc {
    pub from: String,
    pub to: String,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub weight: u32,
    #[serde(default, skip_serializing_if = "is_normal")]
    pub kind: ArcKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetDocument {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    pub places: Vec<PlaceDoc>,
    pub transitions: Vec<TransitionDoc>,
    pub arcs: Vec<ArcDoc>,
    #[serde(default)]
    pub unreliable: Vec<String>,
}

/// A net file failed to parse as a document.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{message} at line {line} column {column}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Net, class structure and initial marking loaded from a document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct S4prNet {
    pub name: String,
    pub net: PetriNet,
    pub structure: S4prStructure,
    pub m0: Marking,
}

impl NetDocument {
    pub fn parse(text: &str) -> std::result::Result<Self, ParseError> {
        serde_json::from_str(text).map_err(|e| ParseError {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    /// Builds the net; structural problems (duplicate ids, bad arcs) are errors.
    pub fn build(&self) -> Result<S4prNet> {
        let mut net = PetriNet::new();
        for p in &self.places {
            net.add_place(&p.id, p.role, p.subnet)?;
        }
        for t in &self.transitions {
            if net.place_id(&t.id).is_ok() {
                return Err(Error::DuplicateTransition(t.id.clone()));
            }
            net.add_transition(&t.id, t.subnet, t.controllable)?;
        }
        for a in &self.arcs {
            net.add_arc_by_name(&a.from, &a.to, a.weight, a.kind)?;
        }
        let unreliable = self
            .unreliable
            .iter()
            .map(|u| net.place_id(u))
            .collect::<Result<Vec<_>>>()?;
        let structure = S4prStructure::from_net(&net, &unreliable)?;
        let m0 = Marking::new(self.places.iter().map(|p| p.tokens).collect());
        Ok(S4prNet { name: self.name.clone(), net, structure, m0 })
    }

    pub fn from_net(name: &str, net: &PetriNet, structure: &S4prStructure, m0: &Marking) -> Self {
        let places = net
            .place_ids()
            .map(|p| {
                let place = net.place(p);
                PlaceDoc { id: place.name.clone(), role: place.role, subnet: place.subnet, tokens: m0[p] }
            })
            .collect();
        let transitions = net
            .transitions()
            .iter()
            .map(|t| TransitionDoc { id: t.name.clone(), subnet: t.subnet, controllable: t.controllable })
            .collect();
        let name_of = |n: Node| match n {
            Node::Place(p) => net.place_name(p).to_string(),
            Node::Transition(t) => net.transition_name(t).to_string(),
        };
        let arcs = net
            .arcs()
            .into_iter()
            .map(|a| ArcDoc { from: name_of(a.from), to: name_of(a.to), weight: a.weight, kind: a.kind })
            .collect();
        let unreliable = structure.unreliable.iter().map(|&p| net.place_name(p).to_string()).collect();
        NetDocument { name: name.to_string(), places, transitions, arcs, unreliable }
    }
}

impl S4prNet {
    pub fn load(text: &str) -> std::result::Result<Result<Self>, ParseError> {
        Ok(NetDocument::parse(text)?.build())
    }

    pub fn document(&self) -> NetDocument {
        NetDocument::from_net(&self.name, &self.net, &self.structure, &self.m0)
    }

    /// Initial marking with some places overridden by name.
    pub fn marking_with(&self, overrides: &BTreeMap<String, u32>) -> Result<Marking> {
        let mut m = self.m0.clone();
        for (name, &v) in overrides {
            m = m.with(self.net.place_id(name)?, v);
        }
        Ok(m)
    }
}

/// Parses `name=value` marking overrides such as `p12=1`.
pub fn parse_override(s: &str) -> Result<(String, u32)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Error::Argument(format!("expected PLACE=TOKENS, got `{s}`")))?;
    let v = v
        .trim()
        .parse()
        .map_err(|_| Error::Argument(format!("bad token count in `{s}`")))?;
    Ok((k.trim().to_string(), v))
}
