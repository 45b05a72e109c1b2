//! Typed boundary around every model call: localisation, relation
//! inference, detection verification, re-detection and similarity.

mod oracle;
pub mod prompts;
mod remote;
pub mod scripted;

pub use oracle::{OracleKnobs, OracleReasoner};
pub use remote::{RemoteConfig, RemoteReasoner};
pub use scripted::ScriptedReasoner;

use crate::dsrg::RelationValue;
use crate::error::ReasonerError;
use crate::geometry::Point2;
use crate::gridsim::Observation;
use crate::perception::Detection;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryKind {
    Localize,
    InferRelationObject,
    InferRelationRoom,
    VerifyDetection,
    Redetect,
    Similarity,
}

impl QueryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            QueryKind::Localize => "localize",
            QueryKind::InferRelationObject => "infer_relation_object",
            QueryKind::InferRelationRoom => "infer_relation_room",
            QueryKind::VerifyDetection => "verify_detection",
            QueryKind::Redetect => "redetect",
            QueryKind::Similarity => "similarity",
        }
    }
}

/// What the agent currently sees, in world coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservationSummary {
    pub position: Point2,
    pub heading: f64,
    pub region: String,
    pub visible: Vec<(String, Point2)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub focus: Option<Point2>,
}

impl From<&Observation> for ObservationSummary {
    fn from(o: &Observation) -> Self {
        Self {
            position: o.pose.position,
            heading: o.pose.heading,
            region: o.region_label.clone(),
            visible: o.visible_objects.iter().map(|v| (v.label.clone(), v.position)).collect(),
            focus: o.focus,
        }
    }
}

/// Structured payload; which fields are required depends on the query kind.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct QueryContext {
    /// Target category cue.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    /// Observed object cue.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_room: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object_room: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region_cue: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object_cue: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observation: Option<ObservationSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detection: Option<Detection>,
    /// Region labels the agent may be localised to.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<String>,
    /// Graph edges relevant to the question, as `src|kind|dst` strings.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub graph_excerpt: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReasonerQuery {
    pub kind: QueryKind,
    pub prompt: String,
    pub context: QueryContext,
}

impl ReasonerQuery {
    pub fn new(kind: QueryKind, prompt: impl Into<String>, context: QueryContext) -> Self {
        Self {
            kind,
            prompt: prompt.into(),
            context,
        }
    }

    /// Checks the prompt and the context fields each kind depends on.
    pub fn validate(&self) -> Result<(), ReasonerError> {
        let c = &self.context;
        if self.prompt.trim().is_empty() {
            return Err(ReasonerError::ProtocolViolation("empty prompt".into()));
        }
        let missing = match self.kind {
            QueryKind::Localize | QueryKind::Redetect | QueryKind::Similarity if c.observation.is_none() => {
                Some("observation")
            }
            QueryKind::InferRelationObject if c.target.is_none() || c.object.is_none() => Some("target/object"),
            QueryKind::InferRelationRoom if c.target_room.is_none() || c.object_room.is_none() => {
                Some("target_room/object_room")
            }
            QueryKind::VerifyDetection if c.detection.is_none() => Some("detection"),
            QueryKind::Redetect if c.target.is_none() => Some("target"),
            _ => None,
        };
        match missing {
            Some(f) => Err(ReasonerError::ProtocolViolation(format!(
                "{} query lacks {f}",
                self.kind.as_str()
            ))),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReasonerReply {
    Localize {
        region: Option<String>,
        confidence: f64,
    },
    Relation {
        relations: Vec<RelationValue>,
        confidence: f64,
    },
    Verify {
        affirm: bool,
        confidence: f64,
    },
    Redetect {
        position: Option<Point2>,
        confidence: f64,
    },
    Similarity {
        similarity: f64,
    },
}

impl ReasonerReply {
    pub fn kind(&self) -> QueryKind {
        match self {
            ReasonerReply::Localize { .. } => QueryKind::Localize,
            ReasonerReply::Relation { .. } => QueryKind::InferRelationObject,
            ReasonerReply::Verify { .. } => QueryKind::VerifyDetection,
            ReasonerReply::Redetect { .. } => QueryKind::Redetect,
            ReasonerReply::Similarity { .. } => QueryKind::Similarity,
        }
    }

    fn matches(&self, kind: QueryKind) -> bool {
        match self {
            ReasonerReply::Relation { .. } => {
                matches!(kind, QueryKind::InferRelationObject | QueryKind::InferRelationRoom)
            }
            other => other.kind() == kind,
        }
    }

    /// Confidence or similarity scalar carried by the reply.
    pub fn scalar(&self) -> f64 {
        match *self {
            ReasonerReply::Localize { confidence, .. }
            | ReasonerReply::Relation { confidence, .. }
            | ReasonerReply::Verify { confidence, .. }
            | ReasonerReply::Redetect { confidence, .. } => confidence,
            ReasonerReply::Similarity { similarity } => similarity,
        }
    }

    /// Clamps every scalar into `[0, 1]`; returns whether anything changed.
    pub fn clamp(&mut self) -> bool {
        let v = match self {
            ReasonerReply::Localize { confidence, .. }
            | ReasonerReply::Relation { confidence, .. }
            | ReasonerReply::Verify { confidence, .. }
            | ReasonerReply::Redetect { confidence, .. } => confidence,
            ReasonerReply::Similarity { similarity } => similarity,
        };
        let clamped = if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
        let changed = clamped != *v;
        *v = clamped;
        changed
    }
}

/// A reasoning backend. Implementations must tolerate calls from several
/// episodes running at once.
pub trait Reasoner: Send + Sync {
    fn query(&self, q: &ReasonerQuery) -> Result<ReasonerReply, ReasonerError>;
}

/// Calls `r` and checks that the reply answers the question asked.
pub fn ask(r: &dyn Reasoner, q: &ReasonerQuery) -> Result<ReasonerReply, ReasonerError> {
    q.validate()?;
    let mut reply = r.query(q)?;
    if !reply.matches(q.kind) {
        return Err(ReasonerError::ProtocolViolation(format!(
            "{} query answered with {} reply",
            q.kind.as_str(),
            reply.kind().as_str()
        )));
    }
    reply.clamp();
    Ok(reply)
}

/// Relation payloads and confidence, for either inference kind.
pub fn infer_relation_object(
    r: &dyn Reasoner,
    target: &str,
    object: &str,
    observation: Option<&Observation>,
    graph_excerpt: Vec<String>,
) -> Result<(Vec<RelationValue>, f64), ReasonerError> {
    let q = ReasonerQuery::new(
        QueryKind::InferRelationObject,
        prompts::with_target(prompts::RELATION_OBJECT, target),
        QueryContext {
            target: Some(target.to_owned()),
            object: Some(object.to_owned()),
            observation: observation.map(ObservationSummary::from),
            graph_excerpt,
            ..Default::default()
        },
    );
    relation_reply(ask(r, &q)?)
}

pub fn infer_relation_room(
    r: &dyn Reasoner,
    target_room: &str,
    object_room: &str,
    graph_excerpt: Vec<String>,
) -> Result<(Vec<RelationValue>, f64), ReasonerError> {
    let q = ReasonerQuery::new(
        QueryKind::InferRelationRoom,
        prompts::RELATION_ROOM,
        QueryContext {
            target_room: Some(target_room.to_owned()),
            object_room: Some(object_room.to_owned()),
            graph_excerpt,
            ..Default::default()
        },
    );
    relation_reply(ask(r, &q)?)
}

fn relation_reply(reply: ReasonerReply) -> Result<(Vec<RelationValue>, f64), ReasonerError> {
    match reply {
        ReasonerReply::Relation { relations, confidence } => Ok((relations, confidence)),
        other => Err(ReasonerError::ProtocolViolation(format!("unexpected reply {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_requires_kind_specific_fields() {
        let q = ReasonerQuery::new(QueryKind::VerifyDetection, "verify", QueryContext::default());
        assert!(matches!(q.validate(), Err(ReasonerError::ProtocolViolation(_))));
        let q = ReasonerQuery::new(QueryKind::InferRelationRoom, "", QueryContext::default());
        assert!(q.validate().is_err());
    }

    #[test]
    fn clamping_flags_out_of_range_values() {
        let mut r = ReasonerReply::Similarity { similarity: 1.7 };
        assert!(r.clamp());
        assert_eq!(r.scalar(), 1.0);
        let mut r = ReasonerReply::Verify { affirm: true, confidence: 0.4 };
        assert!(!r.clamp());
    }

    #[test]
    fn relation_reply_answers_both_inference_kinds() {
        let r = ReasonerReply::Relation { relations: vec![], confidence: 0.5 };
        assert!(r.matches(QueryKind::InferRelationRoom));
        assert!(r.matches(QueryKind::InferRelationObject));
        assert!(!r.matches(QueryKind::Similarity));
    }
}
