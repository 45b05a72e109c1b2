//! Relation-aware matching: judges target detections against the graph and
//! hands doubtful cases to the reasoner.

use crate::dsrg::{Dsrg, EdgeKey, NodeKind};
use crate::error::ReasonerError;
use crate::gridsim::Observation;
use crate::perception::{observation_quality, Detection};
use crate::reasoner::{ask, prompts, ObservationSummary, QueryContext, QueryKind, Reasoner, ReasonerQuery, ReasonerReply};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MatchOutcome {
    #[serde(rename = "TP")]
    Tp,
    #[serde(rename = "FP")]
    Fp,
    #[serde(rename = "FN")]
    Fn,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchVerdict {
    pub outcome: MatchOutcome,
    /// The judged detection; absent for FN.
    pub subject: Option<Detection>,
    /// Edges consulted, as `src|kind|dst`.
    pub rationale: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FpResolution {
    ConfirmedTarget,
    Rejected,
}

/// Verdicts for this frame's detections. Each target detection is TP when
/// the current region is a graph region linked to the target and some
/// detected object is related to the target, FP otherwise. When both hold
/// but no target was detected, a single FN is emitted.
pub fn relation_match(current_region: &str, detections: &[Detection], graph: &Dsrg) -> Vec<MatchVerdict> {
    let target = graph.target_label();
    let mut rationale: BTreeSet<EdgeKey> = BTreeSet::new();
    let region_ok = match graph.region_by_label(current_region) {
        Some(r) if graph.connected_to_target(&r.id) => {
            rationale.extend(graph.path_edges_to_target(&r.id));
            true
        }
        _ => false,
    };
    let related = graph.related_object_labels();
    let mut corroborated = false;
    for d in detections.iter().filter(|d| d.label != target && related.contains(&d.label)) {
        corroborated = true;
        if let Some(n) = graph.find_by_label(NodeKind::Object, &d.label).next() {
            rationale.extend(graph.path_edges_to_target(&n.id));
        }
    }
    let rationale: Vec<String> = rationale.iter().map(ToString::to_string).collect();
    let matched = region_ok && corroborated;
    let mut out: Vec<MatchVerdict> = detections
        .iter()
        .filter(|d| d.label == target)
        .map(|d| MatchVerdict {
            outcome: if matched { MatchOutcome::Tp } else { MatchOutcome::Fp },
            subject: Some(d.clone()),
            rationale: rationale.clone(),
        })
        .collect();
    if out.is_empty() && matched {
        out.push(MatchVerdict {
            outcome: MatchOutcome::Fn,
            subject: None,
            rationale,
        });
    }
    out
}

fn excerpt(graph: &Dsrg, verdict: &MatchVerdict) -> Vec<String> {
    let mut edges: BTreeSet<String> = verdict.rationale.iter().cloned().collect();
    edges.extend(graph.incident(graph.target_id()).map(|e| e.key().to_string()));
    edges.into_iter().collect()
}

/// Asks the reasoner whether an FP candidate is really the target.
pub fn correct_fp(
    verdict: &MatchVerdict,
    obs: &Observation,
    graph: &Dsrg,
    reasoner: &dyn Reasoner,
) -> Result<FpResolution, ReasonerError> {
    let det = verdict
        .subject
        .as_ref()
        .ok_or_else(|| ReasonerError::ProtocolViolation("FP verdict without a detection".into()))?;
    let q = ReasonerQuery::new(
        QueryKind::VerifyDetection,
        prompts::with_target(prompts::VERIFY, graph.target_label()),
        QueryContext {
            target: Some(graph.target_label().to_owned()),
            observation: Some(ObservationSummary::from(obs)),
            detection: Some(det.clone()),
            graph_excerpt: excerpt(graph, verdict),
            ..Default::default()
        },
    );
    match ask(reasoner, &q)? {
        ReasonerReply::Verify { affirm: true, .. } => Ok(FpResolution::ConfirmedTarget),
        _ => Ok(FpResolution::Rejected),
    }
}

/// Descriptive re-detection after an FN verdict. The returned detection
/// still goes through track verification.
pub fn redetect_fn(
    obs: &Observation,
    graph: &Dsrg,
    target_label: &str,
    reasoner: &dyn Reasoner,
    frame: u64,
) -> Result<Option<Detection>, ReasonerError> {
    let q = ReasonerQuery::new(
        QueryKind::Redetect,
        prompts::with_target(prompts::REDETECT, target_label),
        QueryContext {
            target: Some(target_label.to_owned()),
            observation: Some(ObservationSummary::from(obs)),
            graph_excerpt: graph.incident(graph.target_id()).map(|e| e.key().to_string()).collect(),
            ..Default::default()
        },
    );
    match ask(reasoner, &q)? {
        ReasonerReply::Redetect {
            position: Some(p),
            confidence,
        } => Ok(Some(Detection {
            label: target_label.to_owned(),
            confidence,
            quality: observation_quality(p.distance(obs.pose.position)),
            position: p,
            frame,
        })),
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2;

    fn det(label: &str) -> Detection {
        Detection {
            label: label.into(),
            confidence: 0.9,
            quality: 1.0,
            position: Point2::new(1.0, 1.0),
            frame: 0,
        }
    }

    fn outcomes(v: &[MatchVerdict]) -> Vec<MatchOutcome> {
        v.iter().map(|x| x.outcome).collect()
    }

    #[test]
    fn three_cases_on_the_bundled_prior() {
        let g = Dsrg::default_prior();
        assert_eq!(outcomes(&relation_match("bathroom", &[det("toilet"), det("sink")], &g)), [MatchOutcome::Tp]);
        assert_eq!(outcomes(&relation_match("garage", &[det("toilet")], &g)), [MatchOutcome::Fp]);
        let fnv = relation_match("bathroom", &[det("sink")], &g);
        assert_eq!(outcomes(&fnv), [MatchOutcome::Fn]);
        assert!(fnv[0].subject.is_none());
        assert!(!fnv[0].rationale.is_empty());
    }

    #[test]
    fn unrelated_objects_do_not_corroborate() {
        let g = Dsrg::default_prior();
        assert_eq!(outcomes(&relation_match("bathroom", &[det("toilet"), det("sofa")], &g)), [MatchOutcome::Fp]);
        assert!(relation_match("bathroom", &[det("sofa")], &g).is_empty());
        assert!(relation_match("bathroom", &[], &g).is_empty());
    }
}
