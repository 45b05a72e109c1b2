//! Batch runs, metrics, ablations and traces.

mod ablation;
mod batch;
mod config;
mod episode;
mod framestudy;
mod metrics;
mod trace;

pub use ablation::{render_csv, render_table, run_ablation, variants, AblationAxis, AblationRow};
pub use batch::{
    generate_scenes, load_scene, load_scenes, run_batch, run_config, scene_file_name, write_report, write_scenes,
    AblationMeta, BatchReport, Summary,
};
pub use config::{Backend, Cadence, ModuleToggles, PriorSource, ReasonerConfig, RelationToggles, RunConfig, Seeds};
pub use episode::{build_reasoner, run_episode, EpisodeOutput, EpisodeResult, FailureReason, VerdictCounts};
pub use framestudy::{run_frame_study, FrameStudy, FrameStudyConfig, PrecisionRecall, MATCH_RADIUS};
pub use metrics::{compute_metrics, spl_term, Metrics};
pub use trace::{from_jsonl, render_line, to_jsonl, TraceRecord};
