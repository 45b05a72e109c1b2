use super::episode::{EpisodeResult, VerdictCounts};
use crate::error::HarnessError;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub n: usize,
    pub successes: usize,
    pub sr: f64,
    pub spl: f64,
    pub avg_steps: f64,
    /// Mean steps over successful episodes only.
    pub avg_steps_success: Option<f64>,
    pub verdicts: VerdictCounts,
}

/// SPL term of one episode: `success * l / max(p, l)`.
pub fn spl_term(success: bool, shortest: f64, taken: f64) -> f64 {
    if !success {
        return 0.0;
    }
    let denom = taken.max(shortest);
    if denom <= 0.0 {
        1.0
    } else {
        shortest / denom
    }
}

pub fn compute_metrics(results: &[EpisodeResult]) -> Result<Metrics, HarnessError> {
    if results.is_empty() {
        return Err(HarnessError::EmptyResults);
    }
    let n = results.len();
    let successes = results.iter().filter(|r| r.success).count();
    let spl = results.iter().map(|r| r.spl_term).sum::<f64>() / n as f64;
    let avg_steps = results.iter().map(|r| r.steps as f64).sum::<f64>() / n as f64;
    let avg_steps_success = (successes > 0).then(|| {
        results.iter().filter(|r| r.success).map(|r| r.steps as f64).sum::<f64>() / successes as f64
    });
    let mut verdicts = VerdictCounts::default();
    for r in results {
        verdicts.add(&r.verdicts);
    }
    Ok(Metrics {
        n,
        successes,
        sr: successes as f64 / n as f64,
        spl,
        avg_steps,
        avg_steps_success,
        verdicts,
    })
}
