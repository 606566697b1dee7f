//! S4PR Petri nets with an unreliable resource: reachability, robustness
//! classification, GMEC monitor synthesis and a multi-model controller.

pub mod controller;
pub mod error;
pub mod fixture;
pub mod gmec;
pub mod io;
pub mod model;
pub mod net;
pub mod reach;
pub mod robust;

pub use error::{Error, Result};
pub use net::{Marking, PetriNet, PlaceId, PlaceRole, TransitionId};
