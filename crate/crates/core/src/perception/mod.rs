//! Simulated detection and temporal verification of object instances.

pub mod accumulator;
mod detector;
mod tracks;

pub use accumulator::{
    accumulate, continuity, existence_confidence, frame_evidence, sigmoid, AccumulatorParams,
};
pub use detector::{observation_quality, simulate_detector, DetectorNoise};
pub use tracks::{
    verified_tracks, Association, PositionEstimate, Track, TrackId, TrackSet, ASSOCIATION_GATE,
    PRUNE_CONFIDENCE, PRUNE_FRAMES,
};

use crate::geometry::Point2;
use serde::{Deserialize, Serialize};

/// One detector output in world coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub label: String,
    pub confidence: f64,
    pub quality: f64,
    pub position: Point2,
    pub frame: u64,
}
