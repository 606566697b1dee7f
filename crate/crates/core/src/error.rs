use thiserror::Error;

/// Errors raised by net construction, analysis and synthesis.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate place id `{0}`")]
    DuplicatePlace(String),
    #[error("duplicate transition id `{0}`")]
    DuplicateTransition(String),
    #[error("duplicate arc {from} -> {to} ({kind})")]
    DuplicateArc { from: String, to: String, kind: &'static str },
    #[error("unknown place `{0}`")]
    UnknownPlace(String),
    #[error("unknown transition `{0}`")]
    UnknownTransition(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("arc {from} -> {to} must connect a place and a transition")]
    BadArcEndpoints { from: String, to: String },
    #[error("inhibitor arc {from} -> {to} must run from a place to a transition")]
    InhibitorDirection { from: String, to: String },
    #[error("arc {from} -> {to} has zero weight")]
    ZeroWeight { from: String, to: String },
    #[error("marking has {got} entries, net has {expected} places")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("transition `{0}` is not enabled")]
    NotEnabled(String),
    #[error("reference marking violates constraint: l.m = {value} > b = {bound}")]
    InadmissibleReference { value: u64, bound: u64 },
    #[error("monitor would need an arc to uncontrollable transition `{0}`")]
    Uncontrollable(String),
    #[error("reachability graph exceeded the node cap of {cap}")]
    NodeCapExceeded { cap: usize },
    #[error("`{0}` is not a resource place")]
    NotResource(String),
    #[error("`{0}` is not an unreliable resource")]
    NotUnreliable(String),
    #[error("no unreliable resource declared")]
    NoUnreliable,
    #[error("no P-semiflow for resource `{resource}`: {reason}")]
    NoSemiflow { resource: String, reason: String },
    #[error("cannot fail {requested} units of `{resource}`: only {idle} idle")]
    CannotFail { resource: String, idle: u32, requested: u32 },
    #[error("projection onto the selected places does not separate admissible from forbidden markings")]
    ProjectionFailure,
    #[error("{} forbidden representative(s) cannot be separated", uncovered.len())]
    Unseparable { uncovered: Vec<Vec<u32>> },
    #[error("recovery subnet already attached")]
    RecoveryPresent,
    #[error("model index {j} out of range 1..{n} (use model_n for j = n)")]
    ModelIndex { j: u32, n: u32 },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("scenario error: {0}")]
    Scenario(String),
}

impl Error {
    /// Stable machine-readable code used in CLI output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DuplicatePlace(_) => "DUP_PLACE",
            Error::DuplicateTransition(_) => "DUP_TRANSITION",
            Error::DuplicateArc { .. } => "DUP_ARC",
            Error::UnknownPlace(_) => "UNKNOWN_PLACE",
            Error::UnknownTransition(_) => "UNKNOWN_TRANSITION",
            Error::UnknownNode(_) => "UNKNOWN_NODE",
            Error::BadArcEndpoints { .. } => "BAD_ARC",
            Error::InhibitorDirection { .. } => "BAD_INHIBITOR",
            Error::ZeroWeight { .. } => "ZERO_WEIGHT",
            Error::DimensionMismatch { .. } => "DIMENSION",
            Error::NotEnabled(_) => "NOT_ENABLED",
            Error::InadmissibleReference { .. } => "INADMISSIBLE_REFERENCE",
            Error::Uncontrollable(_) => "UNCONTROLLABLE",
            Error::NodeCapExceeded { .. } => "NODE_CAP",
            Error::NotResource(_) => "NOT_RESOURCE",
            Error::NotUnreliable(_) => "NOT_UNRELIABLE",
            Error::NoUnreliable => "NO_UNRELIABLE",
            Error::NoSemiflow { .. } => "NO_SEMIFLOW",
            Error::CannotFail { .. } => "CANNOT_FAIL",
            Error::ProjectionFailure => "PROJECTION_FAILURE",
            Error::Unseparable { .. } => "UNSEPARABLE",
            Error::RecoveryPresent => "RECOVERY_PRESENT",
            Error::ModelIndex { j, n } if j >= n => "USE_MODEL_N",
            Error::ModelIndex { .. } => "MODEL_INDEX",
            Error::Argument(_) => "ARGUMENT",
            Error::Scenario(_) => "SCENARIO",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
