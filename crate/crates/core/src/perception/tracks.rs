//! Per-instance tracks and their frame-by-frame update.

use super::accumulator::{accumulate, continuity, existence_confidence, frame_evidence, AccumulatorParams};
use super::Detection;
use crate::geometry::Point2;
use serde::Serialize;
use std::collections::VecDeque;

/// Same-label detections within this distance of a track associate to it.
pub const ASSOCIATION_GATE: f64 = 0.5;

/// Tracks whose existence stays below this for `PRUNE_FRAMES` frames are dropped.
pub const PRUNE_CONFIDENCE: f64 = 0.05;
pub const PRUNE_FRAMES: u32 = 10;

/// Track position estimates average at most this many detections.
const POSITION_MEMORY: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TrackId(pub u64);

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Track {
    pub id: TrackId,
    pub label: String,
    /// Association history, oldest first, exactly `window` entries long.
    pub history: VecDeque<bool>,
    pub accumulator: f64,
    pub continuity: f64,
    pub existence: f64,
    pub expected_visibility: f64,
    pub last_position: Point2,
    /// Running mean of associated detection positions.
    pub position_estimate: PositionEstimate,
    pub hits: u32,
    low_frames: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PositionEstimate {
    pub mean: Point2,
    pub weight: f64,
}

impl Track {
    fn spawn(id: TrackId, det: &Detection, params: &AccumulatorParams) -> Self {
        let mut t = Track {
            id,
            label: det.label.clone(),
            history: VecDeque::from(vec![false; params.window]),
            accumulator: 0.0,
            continuity: 0.0,
            existence: 0.5,
            expected_visibility: 1.0,
            last_position: det.position,
            position_estimate: PositionEstimate {
                mean: det.position,
                weight: 0.0,
            },
            hits: 0,
            low_frames: 0,
        };
        t.advance(Some(det), 1.0, params);
        t
    }

    /// Advances one frame: `det` is the associated detection, if any, and
    /// `nu` the expected visibility used for negative evidence.
    fn advance(&mut self, det: Option<&Detection>, nu: f64, params: &AccumulatorParams) {
        let nu = nu.clamp(0.0, 1.0);
        self.expected_visibility = nu;
        let e = match det {
            Some(d) => {
                self.last_position = d.position;
                let est = &mut self.position_estimate;
                est.weight = (est.weight + 1.0).min(POSITION_MEMORY);
                est.mean = est.mean + (d.position - est.mean) * (1.0 / est.weight);
                self.hits += 1;
                frame_evidence(true, d.confidence.clamp(0.0, 1.0), d.quality.clamp(0.0, 1.0), nu, params.beta)
            }
            None => frame_evidence(false, 0.0, 0.0, nu, params.beta),
        }
        .expect("inputs clamped to range");
        self.accumulator = accumulate(self.accumulator, e, params.rho);
        self.history.push_back(det.is_some());
        while self.history.len() > params.window {
            self.history.pop_front();
        }
        let hist: Vec<bool> = self.history.iter().copied().collect();
        self.continuity = continuity(&hist, params.window, params.lambda_decay, params.eps);
        self.existence = existence_confidence(self.accumulator, self.continuity, params.alpha, params.gamma);
        if self.existence < PRUNE_CONFIDENCE {
            self.low_frames += 1;
        } else {
            self.low_frames = 0;
        }
    }

    pub fn position(&self) -> Point2 {
        self.position_estimate.mean
    }

    pub fn is_verified(&self, eta_add: f64) -> bool {
        self.existence > eta_add
    }
}

/// Outcome of associating one detection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Association {
    Existing(TrackId),
    Spawned(TrackId),
    /// Dropped as a duplicate of a detection already associated this frame.
    Duplicate(TrackId),
}

impl Association {
    pub fn track(&self) -> TrackId {
        match *self {
            Association::Existing(t) | Association::Spawned(t) | Association::Duplicate(t) => t,
        }
    }
}

/// The episode's track collection.
#[derive(Clone, Debug, Default)]
pub struct TrackSet {
    tracks: Vec<Track>,
    next_id: u64,
}

impl TrackSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.tracks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tracks.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Track> {
        self.tracks.iter()
    }

    pub fn get(&self, id: TrackId) -> Option<&Track> {
        self.tracks.iter().find(|t| t.id == id)
    }

    /// Associates this frame's detections and advances every track by one
    /// frame. Returns one association per detection, in input order.
    pub fn update<F>(&mut self, detections: &[Detection], params: &AccumulatorParams, visibility: F) -> Vec<Association>
    where
        F: Fn(&Track) -> f64,
    {
        // Greedy nearest-pair assignment, gate-limited and label-matched.
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for (di, d) in detections.iter().enumerate() {
            for (ti, t) in self.tracks.iter().enumerate() {
                if t.label != d.label {
                    continue;
                }
                let dist = t.position().distance(d.position).min(t.last_position.distance(d.position));
                if dist <= ASSOCIATION_GATE {
                    pairs.push((dist, di, ti));
                }
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let mut det_to_track: Vec<Option<usize>> = vec![None; detections.len()];
        let mut track_taken: Vec<Option<usize>> = vec![None; self.tracks.len()];
        for &(_, di, ti) in &pairs {
            if det_to_track[di].is_none() && track_taken[ti].is_none() {
                det_to_track[di] = Some(ti);
                track_taken[ti] = Some(di);
            }
        }

        let mut out = Vec::with_capacity(detections.len());
        for di in 0..detections.len() {
            match det_to_track[di] {
                Some(ti) => out.push(Association::Existing(self.tracks[ti].id)),
                None => {
                    let dup = pairs.iter().find(|&&(_, pdi, _)| pdi == di).map(|&(_, _, ti)| ti);
                    match dup {
                        Some(ti) => out.push(Association::Duplicate(self.tracks[ti].id)),
                        None => out.push(Association::Spawned(TrackId(u64::MAX))),
                    }
                }
            }
        }

        for (ti, t) in self.tracks.iter_mut().enumerate() {
            match track_taken[ti] {
                Some(di) => t.advance(Some(&detections[di]), 1.0, params),
                None => {
                    let nu = visibility(t);
                    t.advance(None, nu, params);
                }
            }
        }

        for (di, d) in detections.iter().enumerate() {
            if matches!(out[di], Association::Spawned(_)) {
                let id = TrackId(self.next_id);
                self.next_id += 1;
                self.tracks.push(Track::spawn(id, d, params));
                out[di] = Association::Spawned(id);
            }
        }

        self.tracks.retain(|t| t.low_frames < PRUNE_FRAMES);
        out
    }

    /// Tracks whose existence confidence exceeds `eta_add`.
    pub fn verified(&self, eta_add: f64) -> Vec<&Track> {
        self.tracks.iter().filter(|t| t.is_verified(eta_add)).collect()
    }
}

/// Free-function form of [`TrackSet::verified`] over any track slice.
pub fn verified_tracks(tracks: &[Track], eta_add: f64) -> Vec<&Track> {
    tracks.iter().filter(|t| t.is_verified(eta_add)).collect()
}
