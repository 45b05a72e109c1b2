use super::config::{ModuleToggles, RelationToggles, RunConfig};
use super::episode::{run_episode, EpisodeResult};
use super::metrics::{compute_metrics, Metrics};
use super::trace::{to_jsonl, TraceRecord};
use crate::drpm::TemplateId;
use crate::dsrg::Dsrg;
use crate::error::HarnessError;
use crate::gridsim::{generate_scene, Scene};
use rayon::prelude::*;
use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Clone, Debug)]
pub struct BatchReport {
    /// Sorted by episode id.
    pub results: Vec<EpisodeResult>,
    pub traces: Vec<Vec<TraceRecord>>,
    pub metrics: Metrics,
    pub config_hash: String,
    pub ablation: AblationMeta,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary<'a> {
    pub sr: f64,
    pub spl: f64,
    pub n: usize,
    pub config_hash: &'a str,
    pub metrics: &'a Metrics,
    pub ablation: AblationMeta,
}

/// Which ablation switches the run used.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AblationMeta {
    pub modules: ModuleToggles,
    pub relations: RelationToggles,
    pub template_id: TemplateId,
}

fn pool(width: usize) -> Result<rayon::ThreadPool, HarnessError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(width.max(1))
        .build()
        .map_err(|e| HarnessError::ConfigInvalid(format!("thread pool: {e}")))
}

pub fn scene_file_name(seed: u64) -> String {
    format!("scene_{seed:06}.json")
}

/// One generated scene per configured seed.
pub fn generate_scenes(cfg: &RunConfig, prior: &Dsrg) -> Result<Vec<Scene>, HarnessError> {
    let seeds = cfg.seeds.to_vec();
    pool(cfg.parallelism)?.install(|| {
        seeds
            .par_iter()
            .map(|&s| generate_scene(s, &cfg.scene, prior).map_err(HarnessError::from))
            .collect()
    })
}

pub fn write_scenes(scenes: &[Scene], dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    scenes
        .iter()
        .map(|s| {
            let p = dir.join(scene_file_name(s.seed));
            let text = serde_json::to_string_pretty(s).expect("scene serialises");
            std::fs::write(&p, text).map_err(|e| HarnessError::io(&p, e))?;
            Ok(p)
        })
        .collect()
}

pub fn load_scene(path: &Path) -> Result<Scene, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| HarnessError::json(path, e))
}

/// Every `*.json` scene in `dir`, sorted by seed.
pub fn load_scenes(dir: &Path) -> Result<Vec<Scene>, HarnessError> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| HarnessError::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut scenes = paths.iter().map(|p| load_scene(p)).collect::<Result<Vec<_>, _>>()?;
    scenes.sort_by_key(|s| s.seed);
    Ok(scenes)
}

/// Runs every scene in parallel. Results do not depend on the pool width.
pub fn run_batch(cfg: &RunConfig, scenes: &[Scene], prior: &Dsrg) -> Result<BatchReport, HarnessError> {
    cfg.validate()?;
    let outputs = pool(cfg.parallelism)?.install(|| {
        scenes
            .par_iter()
            .map(|s| run_episode(s, prior, cfg))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let mut outputs = outputs;
    outputs.sort_by_key(|o| o.result.id);
    let (mut results, traces): (Vec<_>, Vec<_>) = outputs.into_iter().map(|o| (o.result, o.trace)).unzip();
    if cfg.trace {
        for r in &mut results {
            r.trace = Some(format!("traces/episode_{:06}.jsonl", r.id));
        }
    }
    let metrics = compute_metrics(&results)?;
    Ok(BatchReport {
        results,
        traces,
        metrics,
        config_hash: cfg.config_hash(),
        ablation: AblationMeta {
            modules: cfg.modules,
            relations: cfg.relations,
            template_id: cfg.template_id,
        },
    })
}

/// Generates or loads scenes, then runs the batch.
pub fn run_config(cfg: &RunConfig, scenes_dir: Option<&Path>) -> Result<BatchReport, HarnessError> {
    let prior = cfg.prior_graph()?;
    let scenes = match scenes_dir {
        Some(d) => load_scenes(d)?,
        None => generate_scenes(cfg, &prior)?,
    };
    run_batch(cfg, &scenes, &prior)
}

/// Writes `results.jsonl`, `summary.json` and, when traced, `traces/`.
pub fn write_report(report: &BatchReport, out: &Path) -> Result<(), HarnessError> {
    std::fs::create_dir_all(out).map_err(|e| HarnessError::io(out, e))?;
    let mut lines = String::new();
    for r in &report.results {
        lines.push_str(&serde_json::to_string(r).expect("result serialises"));
        lines.push('\n');
    }
    let p = out.join("results.jsonl");
    std::fs::write(&p, lines).map_err(|e| HarnessError::io(&p, e))?;
    let summary = Summary {
        sr: report.metrics.sr,
        spl: report.metrics.spl,
        n: report.metrics.n,
        config_hash: &report.config_hash,
        metrics: &report.metrics,
        ablation: report.ablation,
    };
    let p = out.join("summary.json");
    let text = serde_json::to_string_pretty(&summary).expect("summary serialises");
    std::fs::write(&p, text).map_err(|e| HarnessError::io(&p, e))?;
    for (r, t) in report.results.iter().zip(&report.traces) {
        if let Some(rel) = &r.trace {
            let p = out.join(rel);
            if let Some(dir) = p.parent() {
                std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
            }
            std::fs::write(&p, to_jsonl(t)).map_err(|e| HarnessError::io(&p, e))?;
        }
    }
    Ok(())
}
