use crate::drpm::{CueToggles, TemplateId};
use crate::dsrg::{Dsrg, EdgeKindSet, DEFAULT_LAMBDA_FUSE, DEFAULT_PRIOR};
use crate::error::HarnessError;
use crate::gridsim::SceneGenConfig;
use crate::perception::{AccumulatorParams, DetectorNoise};
use crate::reasoner::{OracleKnobs, RemoteConfig};
use crate::reasoner::scripted::ScriptEntry;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RelationToggles {
    pub use_distance: bool,
    pub use_directional: bool,
    pub use_topological: bool,
}

impl Default for RelationToggles {
    fn default() -> Self {
        Self {
            use_distance: true,
            use_directional: true,
            use_topological: true,
        }
    }
}

impl RelationToggles {
    pub fn kinds(&self) -> EdgeKindSet {
        EdgeKindSet {
            topological: self.use_topological,
            directional: self.use_directional,
            distance: self.use_distance,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModuleToggles {
    pub drpm_object: bool,
    pub drpm_region: bool,
    pub ramm_enabled: bool,
}

impl Default for ModuleToggles {
    fn default() -> Self {
        Self {
            drpm_object: true,
            drpm_region: true,
            ramm_enabled: true,
        }
    }
}

impl ModuleToggles {
    pub fn cues(&self) -> CueToggles {
        CueToggles {
            region: self.drpm_region,
            object: self.drpm_object,
        }
    }

    pub fn drpm_enabled(&self) -> bool {
        self.drpm_object || self.drpm_region
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    #[default]
    Oracle,
    Scripted,
    Remote,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReasonerConfig {
    pub backend: Backend,
    pub knobs: OracleKnobs,
    pub remote: RemoteConfig,
    pub script: Vec<ScriptEntry>,
}

/// Either an explicit list or `{"start", "count"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Seeds {
    List(Vec<u64>),
    Range { start: u64, count: u64 },
}

impl Default for Seeds {
    fn default() -> Self {
        Seeds::Range { start: 0, count: 10 }
    }
}

impl Seeds {
    pub fn to_vec(&self) -> Vec<u64> {
        match self {
            Seeds::List(v) => v.clone(),
            Seeds::Range { start, count } => (*start..*start + *count).collect(),
        }
    }
}

/// A path to a prior file, or the prior document inline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PriorSource {
    Path(String),
    Inline(Value),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Cadence {
    /// Frames between graph refinements.
    pub refine_every: u32,
    /// Actions executed toward a frontier before choosing again.
    pub redecide_every: u32,
    /// Steps after which guidance is regenerated even without a region change.
    pub guidance_every: u32,
    /// Turns in place at episode start.
    pub initial_spin: u32,
}

impl Default for Cadence {
    fn default() -> Self {
        Self {
            refine_every: 10,
            redecide_every: 10,
            guidance_every: 10,
            initial_spin: 12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub scene: SceneGenConfig,
    /// Bundled prior when absent.
    pub prior: Option<PriorSource>,
    pub accumulator: AccumulatorParams,
    pub detector: DetectorNoise,
    pub lambda_fuse: f64,
    pub template_id: TemplateId,
    pub relations: RelationToggles,
    pub modules: ModuleToggles,
    pub reasoner: ReasonerConfig,
    pub seeds: Seeds,
    pub parallelism: usize,
    pub cadence: Cadence,
    /// Write a per-step trace file for every episode.
    pub trace: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scene: SceneGenConfig::default(),
            prior: None,
            accumulator: AccumulatorParams::default(),
            detector: DetectorNoise::default(),
            lambda_fuse: DEFAULT_LAMBDA_FUSE,
            template_id: TemplateId::Default,
            relations: RelationToggles::default(),
            modules: ModuleToggles::default(),
            reasoner: ReasonerConfig::default(),
            seeds: Seeds::default(),
            parallelism: 1,
            cadence: Cadence::default(),
            trace: false,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| HarnessError::ConfigInvalid(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let mut cfg = Self::from_json(&text)?;
        if let Some(PriorSource::Path(p)) = &cfg.prior {
            let resolved = path.parent().unwrap_or(Path::new(".")).join(p);
            cfg.prior = Some(PriorSource::Path(resolved.display().to_string()));
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::ConfigInvalid(m));
        if self.seeds.to_vec().is_empty() {
            return bad("seeds must be nonempty".into());
        }
        if self.parallelism == 0 {
            return bad("parallelism must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.lambda_fuse) {
            return bad(format!("lambda_fuse = {} not in [0, 1]", self.lambda_fuse));
        }
        if self.cadence.refine_every == 0 || self.cadence.redecide_every == 0 || self.cadence.guidance_every == 0 {
            return bad("cadence intervals must be positive".into());
        }
        self.scene.validate()?;
        self.accumulator.validate().map_err(|e| HarnessError::ConfigInvalid(e.to_string()))?;
        self.detector.validate().map_err(HarnessError::ConfigInvalid)?;
        self.reasoner.knobs.validate().map_err(HarnessError::ConfigInvalid)?;
        Ok(())
    }

    /// The prior graph, with the target taken from the document.
    pub fn prior_graph(&self) -> Result<Dsrg, HarnessError> {
        match &self.prior {
            None => Ok(Dsrg::prior_from_str(DEFAULT_PRIOR)?),
            Some(PriorSource::Path(p)) => {
                let text = std::fs::read_to_string(p).map_err(|e| HarnessError::io(p, e))?;
                Ok(Dsrg::prior_from_str(&text)?)
            }
            Some(PriorSource::Inline(doc)) => Ok(Dsrg::prior_from_str(&doc.to_string())?),
        }
    }

    /// SHA-256 of the canonical JSON form, without the worker count, which
    /// never affects results.
    pub fn config_hash(&self) -> String {
        let mut v = serde_json::to_value(self).expect("config serialises");
        if let Some(m) = v.as_object_mut() {
            m.remove("parallelism");
        }
        let canonical = v.to_string();
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_is_the_default_config() {
        let cfg = RunConfig::from_json("{}").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.config_hash(), RunConfig::default().config_hash());
    }

    #[test]
    fn malformed_configs_are_rejected() {
        assert!(RunConfig::from_json(r#"{"lambda_fuse": 2.0}"#).is_err());
        assert!(RunConfig::from_json(r#"{"seeds": []}"#).is_err());
        assert!(RunConfig::from_json(r#"{"unknown_knob": 1}"#).is_err());
        assert!(RunConfig::from_json("not json").unwrap_err().is_config_error());
    }

    #[test]
    fn seeds_accept_lists_and_ranges() {
        let cfg = RunConfig::from_json(r#"{"seeds": {"start": 5, "count": 3}}"#).unwrap();
        assert_eq!(cfg.seeds.to_vec(), vec![5, 6, 7]);
        let cfg = RunConfig::from_json(r#"{"seeds": [9, 2]}"#).unwrap();
        assert_eq!(cfg.seeds.to_vec(), vec![9, 2]);
    }

    #[test]
    fn inline_prior_is_ingested() {
        let cfg = RunConfig::from_json(
            r#"{"prior": {"target": "chair", "nodes": [{"id": "chair", "kind": "object", "label": "chair"}], "edges": []}}"#,
        )
        .unwrap();
        assert_eq!(cfg.prior_graph().unwrap().target_label(), "chair");
    }
}
