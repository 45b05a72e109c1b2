//! Noisy open-vocabulary detector over simulator ground truth.

use super::Detection;
use crate::geometry::Point2;
use crate::gridsim::{Observation, MIN_DEPTH};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectorNoise {
    /// Per-frame probability of one spurious detection.
    pub fp_rate: f64,
    /// Per-object probability of a missed detection.
    pub fn_rate: f64,
    pub conf_mean: f64,
    /// Half-width of the uniform confidence jitter.
    pub conf_jitter: f64,
    /// Standard deviation of the position noise, meters.
    pub pos_sigma: f64,
}

impl Default for DetectorNoise {
    fn default() -> Self {
        Self {
            fp_rate: 0.1,
            fn_rate: 0.1,
            conf_mean: 0.9,
            conf_jitter: 0.05,
            pos_sigma: 0.05,
        }
    }
}

impl DetectorNoise {
    pub const fn noiseless() -> Self {
        Self {
            fp_rate: 0.0,
            fn_rate: 0.0,
            conf_mean: 0.9,
            conf_jitter: 0.0,
            pos_sigma: 0.0,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("fp_rate", self.fp_rate),
            ("fn_rate", self.fn_rate),
            ("conf_mean", self.conf_mean),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(format!("detector.{name} = {v} not in [0, 1]"));
            }
        }
        if !(self.conf_jitter >= 0.0 && self.pos_sigma >= 0.0) {
            return Err("detector jitter and sigma must be non-negative".into());
        }
        Ok(())
    }
}

/// Observation quality falls off linearly beyond 3 m, to 0.8 at 5 m.
pub fn observation_quality(range: f64) -> f64 {
    (1.0 - 0.1 * (range - 3.0).max(0.0)).clamp(0.8, 1.0)
}

/// Produces this frame's detections from the objects visible in `obs`.
///
/// Visible objects survive with probability `1 - fn_rate`. With probability
/// `fp_rate` one spurious detection, labelled uniformly from `vocabulary`,
/// is placed at a random point in sensed free space.
pub fn simulate_detector<R: Rng + ?Sized>(
    obs: &Observation,
    vocabulary: &[String],
    noise: &DetectorNoise,
    frame: u64,
    rng: &mut R,
) -> Vec<Detection> {
    let normal = (noise.pos_sigma > 0.0).then(|| Normal::new(0.0, noise.pos_sigma).expect("sigma > 0"));
    let confidence = |rng: &mut R| {
        let j = if noise.conf_jitter > 0.0 {
            rng.random_range(-noise.conf_jitter..=noise.conf_jitter)
        } else {
            0.0
        };
        (noise.conf_mean + j).clamp(0.0, 1.0)
    };
    let mut out = Vec::with_capacity(obs.visible_objects.len() + 1);
    for v in &obs.visible_objects {
        // Draw unconditionally so the stream does not depend on fn_rate.
        let missed = rng.random::<f64>() < noise.fn_rate;
        let c = confidence(rng);
        let mut p = v.position;
        if let Some(n) = &normal {
            p = p + Point2::new(n.sample(rng), n.sample(rng));
        }
        if missed {
            continue;
        }
        out.push(Detection {
            label: v.label.clone(),
            confidence: c,
            quality: observation_quality(v.position.distance(obs.pose.position)),
            position: p,
            frame,
        });
    }
    if rng.random::<f64>() < noise.fp_rate && !vocabulary.is_empty() && !obs.depth_rays.is_empty() {
        let ray = rng.random_range(0..obs.depth_rays.len());
        let reach = obs.depth_rays[ray];
        let label = vocabulary[rng.random_range(0..vocabulary.len())].clone();
        let c = confidence(rng);
        if reach > MIN_DEPTH + 0.05 {
            let r = rng.random_range(MIN_DEPTH..reach - 0.05);
            let p = obs.pose.position + obs.ray_direction(ray) * r;
            out.push(Detection {
                label,
                confidence: c,
                quality: observation_quality(r),
                position: p,
                frame,
            });
        }
    }
    out
}
