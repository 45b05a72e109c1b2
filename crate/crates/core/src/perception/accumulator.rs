//! Instance-level existence evidence.
//!
//! Each frame contributes positive evidence when a track is detected and
//! negative evidence, scaled by expected visibility, when it is not. The
//! evidence is accumulated with exponential forgetting, combined with a
//! weighted continuity term, and squashed into an existence confidence.

use crate::error::PerceptionError;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AccumulatorParams {
    /// Weight of negative (non-detection) evidence.
    pub beta: f64,
    /// Forgetting factor in (0, 1).
    pub rho: f64,
    /// Continuity window length.
    pub window: usize,
    /// Continuity decay in (0, 1).
    pub lambda_decay: f64,
    pub eps: f64,
    pub alpha: f64,
    pub gamma: f64,
    /// Existence threshold for promotion into the graph.
    pub eta_add: f64,
}

impl Default for AccumulatorParams {
    fn default() -> Self {
        Self {
            beta: 0.6,
            rho: 0.80,
            window: 5,
            lambda_decay: 0.8,
            eps: 1e-6,
            alpha: 1.0,
            gamma: 1.0,
            eta_add: 0.8,
        }
    }
}

impl AccumulatorParams {
    pub fn validate(&self) -> Result<(), PerceptionError> {
        let open_unit = |name, v: f64| {
            if v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                Err(PerceptionError::RangeViolation { name, value: v })
            }
        };
        open_unit("rho", self.rho)?;
        open_unit("lambda_decay", self.lambda_decay)?;
        if self.window < 1 {
            return Err(PerceptionError::RangeViolation {
                name: "window",
                value: self.window as f64,
            });
        }
        if !(self.beta >= 0.0 && self.eps >= 0.0) {
            return Err(PerceptionError::RangeViolation { name: "beta", value: self.beta });
        }
        Ok(())
    }
}

fn unit(name: &'static str, v: f64) -> Result<(), PerceptionError> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(PerceptionError::RangeViolation { name, value: v })
    }
}

/// `m·c·q − β·(1−m)·ν`.
pub fn frame_evidence(detected: bool, c: f64, q: f64, nu: f64, beta: f64) -> Result<f64, PerceptionError> {
    unit("c", c)?;
    unit("q", q)?;
    unit("nu", nu)?;
    Ok(if detected { c * q } else { -beta * nu })
}

/// `ρ·s_prev + e`.
pub fn accumulate(s_prev: f64, e: f64, rho: f64) -> f64 {
    rho * s_prev + e
}

/// Decay-weighted fraction of consecutive detection pairs in the last
/// `window` frames. `history` is ordered oldest first and implicitly
/// left-padded with non-detections when shorter than the window.
pub fn continuity(history: &[bool], window: usize, lambda_decay: f64, eps: f64) -> f64 {
    let at = |back: usize| -> bool {
        // back = 0 is the most recent frame
        history.len().checked_sub(back + 1).is_some_and(|i| history[i])
    };
    let mut num = 0.0;
    let mut den = 0.0;
    let mut w = 1.0;
    for i in 1..window {
        if at(i - 1) && at(i) {
            num += w;
        }
        den += w;
        w *= lambda_decay;
    }
    num / (den + eps)
}

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// `σ(α·s + γ·r)`.
pub fn existence_confidence(s: f64, r: f64, alpha: f64, gamma: f64) -> f64 {
    sigmoid(alpha * s + gamma * r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn evidence_cases() {
        assert_abs_diff_eq!(frame_evidence(true, 0.9, 1.0, 0.7, 0.6).unwrap(), 0.9, epsilon = 1e-15);
        assert_eq!(frame_evidence(false, 0.4, 0.4, 0.0, 0.6).unwrap(), 0.0);
        assert_abs_diff_eq!(frame_evidence(false, 0.4, 0.4, 0.5, 0.6).unwrap(), -0.3, epsilon = 1e-15);
        assert!(matches!(
            frame_evidence(true, 1.2, 1.0, 0.0, 0.6),
            Err(PerceptionError::RangeViolation { name: "c", .. })
        ));
        assert!(frame_evidence(true, 0.5, 1.0, -0.1, 0.6).is_err());
    }

    #[test]
    fn accumulate_cases() {
        assert_abs_diff_eq!(accumulate(0.0, 0.9, 0.8), 0.9, epsilon = 1e-15);
        assert_abs_diff_eq!(accumulate(0.9, 0.9, 0.8), 1.62, epsilon = 1e-12);
        // the gap after n steps is 4.5 * 0.8^n: 6.9e-6 at n = 60, 9.3e-7 at n = 69
        let mut s = 0.0;
        for n in 1..=69 {
            s = accumulate(s, 0.9, 0.8);
            if n == 60 {
                assert_abs_diff_eq!(s, 4.5, epsilon = 1e-5);
            }
        }
        assert_abs_diff_eq!(s, 4.5, epsilon = 1e-6);
    }

    #[test]
    fn continuity_cases() {
        // denominators hand-summed: 1 + 0.8 + 0.64 + 0.512 = 2.952
        let full = continuity(&[true; 5], 5, 0.8, 1e-6);
        assert_abs_diff_eq!(full, 2.952 / 2.952001, epsilon = 1e-12);
        assert_eq!(continuity(&[false; 5], 5, 0.8, 1e-6), 0.0);
        let recent = continuity(&[false, false, false, true, true], 5, 0.8, 1e-6);
        assert_abs_diff_eq!(recent, 1.0 / 2.952001, epsilon = 1e-12);
        // short histories are padded on the old side
        assert_eq!(continuity(&[true, true], 5, 0.8, 1e-6), recent);
    }

    #[test]
    fn existence_cases() {
        assert_eq!(existence_confidence(0.0, 0.0, 1.0, 1.0), 0.5);
        assert_abs_diff_eq!(existence_confidence(1.62, 0.33875, 1.0, 1.0), 0.8763, epsilon = 1e-4);
        assert!(existence_confidence(-10.0, 0.0, 1.0, 1.0) < 5e-5);
    }

    #[test]
    fn default_params_validate() {
        assert!(AccumulatorParams::default().validate().is_ok());
        let bad = AccumulatorParams { rho: 1.0, ..Default::default() };
        assert!(bad.validate().is_err());
    }
}
