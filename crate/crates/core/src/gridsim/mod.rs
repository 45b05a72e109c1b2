//! Continuous-pose 2-D world with raycast sensing, occupancy mapping and a
//! grid planner.

mod agent;
mod mapping;
mod planner;
mod scene;
mod scenegen;
mod sensing;

pub use agent::{step, success_check, Action, AgentState, Pose, StepOutcome};
pub use mapping::{mark_blocked_ahead, mark_obstacle, update_occupancy};
pub use planner::{astar, plan_local, Plan, UNKNOWN_COST, WALL_PENALTY};
pub use scene::{Bounds, Door, EpisodeSpec, NavGrid, Obstacle, Room, Scene, SceneObject, World};
pub use scenegen::{generate_scene, SceneGenConfig};
pub use sensing::{in_view_wedge, sense, sense_toward, Observation, VisibleObject};

pub const FORWARD_STEP: f64 = 0.25;
pub const TURN_STEP: f64 = 30.0;
pub const AGENT_RADIUS: f64 = 0.18;
pub const FOV_DEG: f64 = 79.0;
pub const MIN_DEPTH: f64 = 0.5;
pub const MAX_DEPTH: f64 = 5.0;
pub const RAY_COUNT: usize = 79;
pub const CELL_SIZE: f64 = 0.25;
pub const DEFAULT_D_S: f64 = 1.0;
pub const MAX_STEPS: u32 = 500;
