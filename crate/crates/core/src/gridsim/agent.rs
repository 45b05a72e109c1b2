use super::{World, AGENT_RADIUS, FORWARD_STEP, TURN_STEP};
use crate::error::SimError;
use crate::geometry::{normalize_heading, Point2, Segment};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    Forward,
    TurnLeft,
    TurnRight,
    Stop,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub position: Point2,
    /// Degrees in `[0, 360)`, counter-clockwise from +x.
    pub heading: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgentState {
    pub position: Point2,
    pub heading: f64,
    pub steps: u32,
    pub path_length: f64,
    pub stopped: bool,
}

impl AgentState {
    pub fn new(position: Point2, heading: f64) -> Self {
        Self {
            position,
            heading: normalize_heading(heading),
            steps: 0,
            path_length: 0.0,
            stopped: false,
        }
    }

    pub fn pose(&self) -> Pose {
        Pose {
            position: self.position,
            heading: self.heading,
        }
    }
}

/// Result of one action.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepOutcome {
    pub state: AgentState,
    /// Obstacle point hit by a blocked forward move.
    pub collision: Option<Point2>,
}

impl StepOutcome {
    pub fn collided(&self) -> bool {
        self.collision.is_some()
    }
}

/// Applies one action. A forward move whose swept disc touches a blocker
/// leaves the agent in place.
pub fn step(world: &World, state: &AgentState, action: Action) -> Result<StepOutcome, SimError> {
    if state.stopped {
        return Err(SimError::SteppedAfterStop);
    }
    let mut next = *state;
    next.steps += 1;
    let mut collision = None;
    match action {
        Action::Forward => {
            let to = state.position + Point2::from_heading(state.heading) * FORWARD_STEP;
            let sweep = Segment::new(state.position, to);
            let hit = world
                .blockers
                .iter()
                .map(|w| (w.distance_to_segment(&sweep), w))
                .filter(|(d, _)| *d < AGENT_RADIUS)
                .min_by(|a, b| a.0.total_cmp(&b.0));
            match hit {
                Some((_, w)) => collision = Some(w.closest_point(to)),
                None => {
                    next.position = to;
                    next.path_length += FORWARD_STEP;
                }
            }
        }
        Action::TurnLeft => next.heading = normalize_heading(state.heading + TURN_STEP),
        Action::TurnRight => next.heading = normalize_heading(state.heading - TURN_STEP),
        Action::Stop => next.stopped = true,
    }
    Ok(StepOutcome { state: next, collision })
}

/// Episode success: stopped within the step budget and within `d_s` of a
/// target instance.
pub fn success_check(state: &AgentState, targets: &[Point2], d_s: f64, max_steps: u32) -> bool {
    state.stopped
        && state.steps <= max_steps
        && targets
            .iter()
            .map(|t| t.distance(state.position))
            .fold(f64::INFINITY, f64::min)
            <= d_s
}
