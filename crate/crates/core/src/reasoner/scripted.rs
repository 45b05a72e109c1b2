//! Table-driven backend for deterministic tests and fixtures.

use super::{QueryKind, Reasoner, ReasonerQuery, ReasonerReply};
use crate::error::ReasonerError;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScriptEntry {
    pub kind: QueryKind,
    /// Restricts the entry to queries about this label.
    #[serde(default)]
    pub subject: Option<String>,
    pub reply: ReasonerReply,
}

/// Answers from a fixed table. Entries with a subject win over the
/// kind-wide default; a query with no matching entry is unavailable.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScriptedReasoner {
    table: BTreeMap<(QueryKind, Option<String>), ReasonerReply>,
}

impl ScriptedReasoner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = ScriptEntry>) -> Self {
        let mut s = Self::new();
        for e in entries {
            s.table.insert((e.kind, e.subject), e.reply);
        }
        s
    }

    pub fn with(mut self, kind: QueryKind, reply: ReasonerReply) -> Self {
        self.table.insert((kind, None), reply);
        self
    }

    pub fn with_subject(mut self, kind: QueryKind, subject: impl Into<String>, reply: ReasonerReply) -> Self {
        self.table.insert((kind, Some(subject.into())), reply);
        self
    }

    fn subject(q: &ReasonerQuery) -> Option<&str> {
        let c = &q.context;
        match q.kind {
            QueryKind::InferRelationObject => c.object.as_deref(),
            QueryKind::InferRelationRoom => c.object_room.as_deref(),
            QueryKind::VerifyDetection => c.detection.as_ref().map(|d| d.label.as_str()),
            QueryKind::Redetect => c.target.as_deref(),
            QueryKind::Localize | QueryKind::Similarity => c.region_cue.as_deref(),
        }
    }
}

impl Reasoner for ScriptedReasoner {
    fn query(&self, q: &ReasonerQuery) -> Result<ReasonerReply, ReasonerError> {
        let specific = Self::subject(q).and_then(|s| self.table.get(&(q.kind, Some(s.to_owned()))));
        specific
            .or_else(|| self.table.get(&(q.kind, None)))
            .cloned()
            .ok_or_else(|| ReasonerError::Unavailable(format!("no scripted reply for {}", q.kind.as_str())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsrg::{RelationValue, Topological};
    use crate::reasoner::QueryContext;

    fn relation_query(object: &str) -> ReasonerQuery {
        ReasonerQuery::new(
            QueryKind::InferRelationObject,
            "relate",
            QueryContext {
                target: Some("toilet".into()),
                object: Some(object.into()),
                ..Default::default()
            },
        )
    }

    #[test]
    fn subject_entries_override_defaults() {
        let adjacent = ReasonerReply::Relation {
            relations: vec![RelationValue::Topological(Topological::Adjacent)],
            confidence: 0.7,
        };
        let none = ReasonerReply::Relation {
            relations: vec![],
            confidence: 0.1,
        };
        let r = ScriptedReasoner::new()
            .with(QueryKind::InferRelationObject, none.clone())
            .with_subject(QueryKind::InferRelationObject, "sink", adjacent.clone());
        assert_eq!(r.query(&relation_query("sink")).unwrap(), adjacent);
        assert_eq!(r.query(&relation_query("bed")).unwrap(), none);
    }

    #[test]
    fn missing_entries_are_unavailable() {
        let r = ScriptedReasoner::new();
        assert!(matches!(r.query(&relation_query("sink")), Err(ReasonerError::Unavailable(_))));
    }
}
