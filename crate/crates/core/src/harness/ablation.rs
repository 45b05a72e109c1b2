use super::batch::run_batch;
use super::config::{ModuleToggles, RelationToggles, RunConfig};
use crate::drpm::TemplateId;
use crate::dsrg::Dsrg;
use crate::error::HarnessError;
use crate::gridsim::Scene;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AblationAxis {
    Modules,
    Templates,
    Relations,
}

impl FromStr for AblationAxis {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "modules" => Ok(Self::Modules),
            "templates" => Ok(Self::Templates),
            "relations" => Ok(Self::Relations),
            other => Err(HarnessError::ConfigInvalid(format!(
                "unknown ablation axis `{other}` (expected modules, templates or relations)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AblationRow {
    pub name: String,
    pub sr: f64,
    pub spl: f64,
    pub avg_steps: f64,
    pub avg_steps_success: Option<f64>,
}

/// Named configuration variants along one axis.
pub fn variants(base: &RunConfig, axis: AblationAxis) -> Vec<(String, RunConfig)> {
    let with = |f: &dyn Fn(&mut RunConfig)| {
        let mut c = base.clone();
        f(&mut c);
        c
    };
    let modules = |o: bool, r: bool, m: bool| ModuleToggles {
        drpm_object: o,
        drpm_region: r,
        ramm_enabled: m,
    };
    let relations = |d: bool, dir: bool, t: bool| RelationToggles {
        use_distance: d,
        use_directional: dir,
        use_topological: t,
    };
    match axis {
        AblationAxis::Modules => vec![
            ("base".into(), with(&|c| c.modules = modules(false, false, false))),
            ("+region".into(), with(&|c| c.modules = modules(false, true, false))),
            ("+object".into(), with(&|c| c.modules = modules(true, false, false))),
            ("+region+object".into(), with(&|c| c.modules = modules(true, true, false))),
            ("full".into(), with(&|c| c.modules = modules(true, true, true))),
        ],
        AblationAxis::Templates => [
            TemplateId::Default,
            TemplateId::ThereIsAhead,
            TemplateId::Vicinity,
            TemplateId::SeemsAhead,
            TemplateId::MayFindNearby,
            TemplateId::Bare,
        ]
        .into_iter()
        .map(|t| (t.as_str().to_owned(), with(&|c| c.template_id = t)))
        .collect(),
        AblationAxis::Relations => vec![
            ("w/o distance".into(), with(&|c| c.relations = relations(false, true, true))),
            ("w/o directional".into(), with(&|c| c.relations = relations(true, false, true))),
            ("w/o topological".into(), with(&|c| c.relations = relations(true, true, false))),
            ("full".into(), with(&|c| c.relations = relations(true, true, true))),
        ],
    }
}

/// Runs every variant of `axis` on the same scenes.
pub fn run_ablation(
    base: &RunConfig,
    axis: AblationAxis,
    scenes: &[Scene],
    prior: &Dsrg,
) -> Result<Vec<AblationRow>, HarnessError> {
    variants(base, axis)
        .into_iter()
        .map(|(name, cfg)| {
            let m = run_batch(&cfg, scenes, prior)?.metrics;
            Ok(AblationRow {
                name,
                sr: m.sr,
                spl: m.spl,
                avg_steps: m.avg_steps,
                avg_steps_success: m.avg_steps_success,
            })
        })
        .collect()
}

pub fn render_table(rows: &[AblationRow]) -> String {
    let mut s = format!("{:<18} {:>6} {:>6} {:>9}\n", "variant", "SR", "SPL", "steps");
    for r in rows {
        s.push_str(&format!("{:<18} {:>6.3} {:>6.3} {:>9.1}\n", r.name, r.sr, r.spl, r.avg_steps));
    }
    s
}

pub fn render_csv(rows: &[AblationRow]) -> String {
    let mut s = String::from("variant,sr,spl,avg_steps\n");
    for r in rows {
        s.push_str(&format!("{},{:.6},{:.6},{:.3}\n", r.name, r.sr, r.spl, r.avg_steps));
    }
    s
}
