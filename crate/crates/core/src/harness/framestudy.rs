//! Frame-level comparison of raw detections against RAMM-filtered ones.

use crate::dsrg::Dsrg;
use crate::error::HarnessError;
use crate::geometry::{normalize_heading, Point2};
use crate::gridsim::{generate_scene, sense, Pose, SceneGenConfig, World, AGENT_RADIUS};
use crate::perception::{simulate_detector, Detection, DetectorNoise};
use crate::ramm::{correct_fp, redetect_fn, relation_match, FpResolution, MatchOutcome};
use crate::reasoner::{OracleKnobs, OracleReasoner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// A target detection counts as correct within this distance of a real instance.
pub const MATCH_RADIUS: f64 = 0.75;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrameStudyConfig {
    pub frames: usize,
    pub frames_per_scene: usize,
    pub seed: u64,
    pub detector: DetectorNoise,
    pub knobs: OracleKnobs,
    pub scene: SceneGenConfig,
}

impl Default for FrameStudyConfig {
    fn default() -> Self {
        Self {
            frames: 1000,
            frames_per_scene: 20,
            seed: 0,
            detector: DetectorNoise {
                fp_rate: 0.2,
                fn_rate: 0.2,
                ..DetectorNoise::default()
            },
            knobs: OracleKnobs {
                verify_acc: 0.95,
                redetect_acc: 0.95,
                ..OracleKnobs::perfect()
            },
            scene: SceneGenConfig::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PrecisionRecall {
    pub true_positives: u64,
    pub false_positives: u64,
    /// Frames with a visible target and a correct detection.
    pub hit_frames: u64,
    pub precision: f64,
    pub recall: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameStudy {
    pub frames: usize,
    /// Frames in which a target instance was visible.
    pub positive_frames: u64,
    pub raw: PrecisionRecall,
    pub ramm: PrecisionRecall,
}

fn tally(dets: &[Detection], target: &str, truth: &[Point2], visible: bool, acc: &mut PrecisionRecall) {
    let mut hit = false;
    for d in dets.iter().filter(|d| d.label == target) {
        if truth.iter().any(|t| t.distance(d.position) <= MATCH_RADIUS) {
            acc.true_positives += 1;
            hit = true;
        } else {
            acc.false_positives += 1;
        }
    }
    if visible && hit {
        acc.hit_frames += 1;
    }
}

fn finish(acc: &mut PrecisionRecall, positives: u64) {
    let claimed = acc.true_positives + acc.false_positives;
    acc.precision = if claimed == 0 { 1.0 } else { acc.true_positives as f64 / claimed as f64 };
    acc.recall = if positives == 0 { 1.0 } else { acc.hit_frames as f64 / positives as f64 };
}

/// Samples frames inside target rooms, looking roughly toward the target,
/// and scores raw versus post-matching target detections.
pub fn run_frame_study(cfg: &FrameStudyConfig, prior: &Dsrg) -> Result<FrameStudy, HarnessError> {
    cfg.detector.validate().map_err(HarnessError::ConfigInvalid)?;
    cfg.knobs.validate().map_err(HarnessError::ConfigInvalid)?;
    if cfg.frames_per_scene == 0 {
        return Err(HarnessError::ConfigInvalid("frames_per_scene must be positive".into()));
    }
    let target = prior.target_label().to_owned();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut raw, mut ramm) = (PrecisionRecall::default(), PrecisionRecall::default());
    let mut positives = 0;
    let mut frames = 0;
    let mut scene_seed = cfg.seed;
    while frames < cfg.frames {
        let scene = generate_scene(scene_seed, &cfg.scene, prior)?;
        scene_seed += 1;
        let truth = scene.target_positions();
        let Some(&anchor) = truth.first() else { continue };
        let Some(room) = scene.room_index_at(anchor).map(|k| scene.rooms[k].rect()) else { continue };
        let world = Arc::new(World::new(scene));
        let reasoner = OracleReasoner::new(world.clone(), cfg.knobs, scene_seed);
        let graph = prior.clone();
        let vocab = world.scene.vocabulary();
        let mut taken = 0;
        let mut attempts = 0;
        while taken < cfg.frames_per_scene && frames < cfg.frames && attempts < 50 * cfg.frames_per_scene {
            attempts += 1;
            let p = Point2::new(
                rng.random_range(room.min.x + AGENT_RADIUS..room.max.x - AGENT_RADIUS),
                rng.random_range(room.min.y + AGENT_RADIUS..room.max.y - AGENT_RADIUS),
            );
            if !world.is_free(p) {
                continue;
            }
            let jitter: f64 = rng.random_range(-90.0..90.0);
            let pose = Pose {
                position: p,
                heading: normalize_heading((anchor - p).bearing() + jitter),
            };
            let obs = sense(&world, pose);
            let visible = obs.sees(&target);
            let frame = frames as u64;
            let dets = simulate_detector(&obs, &vocab, &cfg.detector, frame, &mut rng);

            let mut kept: Vec<Detection> = dets.iter().filter(|d| d.label != target).cloned().collect();
            for v in relation_match(&obs.region_label, &dets, &graph) {
                match v.outcome {
                    MatchOutcome::Tp => kept.extend(v.subject.clone()),
                    MatchOutcome::Fp => {
                        if correct_fp(&v, &obs, &graph, &reasoner)? == FpResolution::ConfirmedTarget {
                            kept.extend(v.subject.clone());
                        }
                    }
                    MatchOutcome::Fn => kept.extend(redetect_fn(&obs, &graph, &target, &reasoner, frame)?),
                }
            }
            positives += u64::from(visible);
            tally(&dets, &target, &truth, visible, &mut raw);
            tally(&kept, &target, &truth, visible, &mut ramm);
            taken += 1;
            frames += 1;
        }
    }
    finish(&mut raw, positives);
    finish(&mut ramm, positives);
    Ok(FrameStudy {
        frames,
        positive_frames: positives,
        raw,
        ramm,
    })
}
