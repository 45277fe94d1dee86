use crate::algebra::AlgebraError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("invalid dilation: {0}")]
    InvalidDilation(String),
    #[error("a colour-degree cap is required: {0}")]
    DegreeCapRequired(String),
    #[error("node limit of {limit} exceeded; raise it with WWORDS_NODE_LIMIT or lower the truncation")]
    NodeLimit { limit: u64 },
    #[error("order and gap rule disagree: {upper} admits {lower}, which is later in the order")]
    RankInconsistency { upper: String, lower: String },
    #[error("equation {name}: {reason}")]
    Equation { name: String, reason: String },
    #[error("engine {engine} does not apply to {identity}; applicable: {applicable}")]
    EngineInapplicable {
        engine: String,
        identity: String,
        applicable: String,
    },
    #[error("search space of {size} candidates exceeds the cap of {cap}; lower max_exponent or fix more colours")]
    SearchSpace { size: u128, cap: u128 },
    #[error("{0}")]
    Input(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
