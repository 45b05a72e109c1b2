use super::{Frontier, GuidancePrompt};
use crate::error::PlanError;
use crate::geometry::{heading_delta, Point2};
use crate::gridsim::{Observation, Pose};
use crate::reasoner::{ask, ObservationSummary, QueryContext, QueryKind, Reasoner, ReasonerQuery, ReasonerReply};

/// `cos^2(theta / 2)` for the bearing offset of `p` from the heading.
pub fn overlap_weight(pose: Pose, p: Point2) -> f64 {
    let theta = heading_delta(pose.heading, (p - pose.position).bearing()).to_radians();
    (theta / 2.0).cos().powi(2).clamp(0.0, 1.0)
}

/// Prompt similarity of the view toward `frontier`, weighted by how far the
/// frontier sits off the current heading. Reasoner failures score 0.
pub fn score_frontier(
    frontier: &Frontier,
    current: Pose,
    toward: &Observation,
    prompt: &GuidancePrompt,
    reasoner: &dyn Reasoner,
) -> f64 {
    let mut summary = ObservationSummary::from(toward);
    summary.focus.get_or_insert(frontier.midpoint);
    let q = ReasonerQuery::new(
        QueryKind::Similarity,
        if prompt.rendered.is_empty() { "explore" } else { &prompt.rendered },
        QueryContext {
            region_cue: (!prompt.region_cue.is_empty()).then(|| prompt.region_cue.clone()),
            object_cue: (!prompt.object_cue.is_empty()).then(|| prompt.object_cue.clone()),
            observation: Some(summary),
            ..Default::default()
        },
    );
    let sim = match ask(reasoner, &q) {
        Ok(ReasonerReply::Similarity { similarity }) => similarity,
        _ => 0.0,
    };
    sim * overlap_weight(current, frontier.midpoint)
}

/// Index of the best-scoring frontier; equal scores go to the one nearer the
/// agent, then to the earlier one.
pub fn select_frontier(frontiers: &[Frontier], scores: &[f64], agent: Point2) -> Result<usize, PlanError> {
    if frontiers.len() != scores.len() {
        return Err(PlanError::LengthMismatch {
            frontiers: frontiers.len(),
            scores: scores.len(),
        });
    }
    if frontiers.is_empty() {
        return Err(PlanError::EmptyFrontierSet);
    }
    let mut best = 0;
    for i in 1..frontiers.len() {
        let (s, b) = (scores[i], scores[best]);
        let closer = frontiers[i].midpoint.distance(agent) < frontiers[best].midpoint.distance(agent);
        if s > b || (s == b && closer) {
            best = i;
        }
    }
    Ok(best)
}

/// Index of the frontier nearest the agent.
pub fn nearest_frontier(frontiers: &[Frontier], agent: Point2) -> Result<usize, PlanError> {
    select_frontier(frontiers, &vec![0.0; frontiers.len()], agent)
}
