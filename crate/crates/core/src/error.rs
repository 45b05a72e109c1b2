use thiserror::Error;

/// Errors raised while building, mutating or loading a spatial relationship graph.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum DsrgError {
    #[error("schema violation: {0}")]
    SchemaViolation(String),
    #[error("no node labelled `{0}` in prior")]
    MissingTarget(String),
    #[error("edge {src} -> {dst} references undeclared node `{missing}`")]
    DanglingEdge {
        src: String,
        dst: String,
        missing: String,
    },
    #[error("edge endpoint `{0}` does not exist")]
    UnknownEndpoint(String),
    #[error("node `{0}` does not exist")]
    UnknownNode(String),
}

/// Errors from the perception layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PerceptionError {
    #[error("{name} = {value} is outside its valid range")]
    RangeViolation { name: &'static str, value: f64 },
}

/// Errors from the reasoning backends.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReasonerError {
    #[error("reasoner unavailable: {0}")]
    Unavailable(String),
    #[error("protocol violation: {0}")]
    ProtocolViolation(String),
}

/// Errors from the planning layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanError {
    #[error("no frontier left to explore")]
    EmptyFrontierSet,
    #[error("frontier and score lists differ in length ({frontiers} vs {scores})")]
    LengthMismatch { frontiers: usize, scores: usize },
    #[error("goal is unreachable")]
    Unreachable,
}

/// Errors from the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("agent already issued Stop")]
    SteppedAfterStop,
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
}

/// Errors surfaced by the experiment harness.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("no episode results to summarise")]
    EmptyResults,
    #[error(transparent)]
    Dsrg(#[from] DsrgError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed json in {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

impl HarnessError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    pub fn json(path: impl AsRef<std::path::Path>, source: serde_json::Error) -> Self {
        Self::Json {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// Whether the failure stems from user-supplied configuration.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Self::ConfigInvalid(_)
                | Self::Json { .. }
                | Self::Dsrg(_)
                | Self::Sim(SimError::ConfigInvalid(_))
        )
    }
}
