use crate::dsrg::{Dsrg, EntityNode, NodeId, NodeKind};
use crate::gridsim::Observation;
use crate::reasoner::{ask, prompts, ObservationSummary, QueryContext, QueryKind, Reasoner, ReasonerQuery, ReasonerReply};
use serde::{Deserialize, Serialize};

pub const GUIDANCE_MAX_HOPS: usize = 4;

/// Where the agent sits in the graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentNode {
    Node(NodeId),
    Unlocalized,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemplateId {
    /// Region and object phrasings rendered together.
    #[default]
    Default,
    ThereIsAhead,
    Vicinity,
    SeemsAhead,
    MayFindNearby,
    Bare,
}

impl TemplateId {
    pub const ALL: [TemplateId; 6] = [
        TemplateId::Default,
        TemplateId::ThereIsAhead,
        TemplateId::Vicinity,
        TemplateId::SeemsAhead,
        TemplateId::MayFindNearby,
        TemplateId::Bare,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TemplateId::Default => "default",
            TemplateId::ThereIsAhead => "there_is_ahead",
            TemplateId::Vicinity => "vicinity",
            TemplateId::SeemsAhead => "seems_ahead",
            TemplateId::MayFindNearby => "may_find_nearby",
            TemplateId::Bare => "bare",
        }
    }

    /// Template text with a `{target}` slot; `None` for the two-part default.
    pub fn template(self) -> Option<&'static str> {
        match self {
            TemplateId::Default => None,
            TemplateId::ThereIsAhead => Some("Seems like there is a {target} ahead"),
            TemplateId::Vicinity => Some("A {target} can be in the vicinity."),
            TemplateId::SeemsAhead => Some("Seems like a {target} ahead"),
            TemplateId::MayFindNearby => Some("You may find {target} nearby"),
            TemplateId::Bare => Some("{target}"),
        }
    }
}

pub const REGION_PHRASE: &str = "Seems like a {region} is ahead";
pub const OBJECT_PHRASE: &str = "A {object} can be in the vicinity";

/// Which cue kinds guidance may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CueToggles {
    pub region: bool,
    pub object: bool,
}

impl Default for CueToggles {
    fn default() -> Self {
        Self { region: true, object: true }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GuidancePrompt {
    /// Empty when no region cue applies.
    pub region_cue: String,
    pub object_cue: String,
    pub template_id: TemplateId,
    pub rendered: String,
}

impl GuidancePrompt {
    pub fn new(region_cue: impl Into<String>, object_cue: impl Into<String>, template_id: TemplateId) -> Self {
        let (region_cue, object_cue) = (region_cue.into(), object_cue.into());
        let rendered = render(&region_cue, &object_cue, template_id);
        Self {
            region_cue,
            object_cue,
            template_id,
            rendered,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.region_cue.is_empty() && self.object_cue.is_empty()
    }
}

fn join(parts: Vec<String>) -> String {
    let mut out = String::new();
    for p in parts {
        if !out.is_empty() {
            out.push_str(if out.ends_with('.') { " " } else { ". " });
        }
        out.push_str(&p);
    }
    out
}

fn render(region: &str, object: &str, template: TemplateId) -> String {
    let mut parts = Vec::new();
    match template.template() {
        None => {
            if !region.is_empty() {
                parts.push(REGION_PHRASE.replace("{region}", region));
            }
            if !object.is_empty() {
                parts.push(OBJECT_PHRASE.replace("{object}", object));
            }
        }
        Some(t) => {
            for cue in [region, object] {
                if !cue.is_empty() {
                    parts.push(t.replace("{target}", cue));
                }
            }
        }
    }
    join(parts)
}

/// Region node the reasoner places the agent in, or the sentinel when it
/// abstains, fails, or names a region the graph lacks.
pub fn localize_in_graph(obs: &Observation, graph: &Dsrg, reasoner: &dyn Reasoner) -> AgentNode {
    let candidates: Vec<String> = graph
        .nodes()
        .filter(|n| n.kind == NodeKind::Region)
        .map(|n| n.label.clone())
        .collect();
    let q = ReasonerQuery::new(
        QueryKind::Localize,
        prompts::LOCALIZE,
        QueryContext {
            observation: Some(ObservationSummary::from(obs)),
            candidates,
            ..Default::default()
        },
    );
    match ask(reasoner, &q) {
        Ok(ReasonerReply::Localize { region: Some(r), .. }) => graph
            .region_by_label(&r)
            .map_or(AgentNode::Unlocalized, |n| AgentNode::Node(n.id.clone())),
        _ => AgentNode::Unlocalized,
    }
}

/// Best object related to the target, preferring ones tied to `region`.
fn top_object<'a>(graph: &'a Dsrg, region: Option<&NodeId>) -> Option<&'a EntityNode> {
    let objects = graph.target_neighbours(NodeKind::Object);
    region
        .and_then(|r| {
            objects
                .iter()
                .find(|(o, _)| graph.incident(r).any(|e| e.touches(&o.id)))
                .map(|(o, _)| *o)
        })
        .or_else(|| objects.first().map(|(o, _)| *o))
}

/// Cues from the best relational path out of `agent`, falling back to the
/// target's own region and strongest related object.
pub fn generate_guidance(graph: &Dsrg, agent: &AgentNode, template: TemplateId, cues: CueToggles) -> GuidancePrompt {
    let path = match agent {
        AgentNode::Node(id) => graph
            .relational_paths(id, GUIDANCE_MAX_HOPS)
            .ok()
            .and_then(|p| p.into_iter().next()),
        AgentNode::Unlocalized => None,
    };
    let target_label = graph.target_label().to_owned();
    let mut region: Option<&EntityNode> = None;
    let mut object: Option<&EntityNode> = None;
    if let Some(p) = &path {
        let along: Vec<&EntityNode> = p.nodes.iter().skip(1).filter_map(|n| graph.node(n)).collect();
        region = along.iter().copied().find(|n| n.kind == NodeKind::Region).or_else(|| {
            graph
                .node(&p.nodes[0])
                .filter(|n| n.kind == NodeKind::Region)
        });
        object = along
            .iter()
            .copied()
            .find(|n| n.kind == NodeKind::Object && n.label != target_label);
    }
    let region = region.or_else(|| graph.target_region());
    let object = object.or_else(|| top_object(graph, region.map(|r| &r.id)));
    let region_cue = if cues.region { region.map(|n| n.label.clone()).unwrap_or_default() } else { String::new() };
    let object_cue = if cues.object { object.map(|n| n.label.clone()).unwrap_or_default() } else { String::new() };
    GuidancePrompt::new(region_cue, object_cue, template)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsrg::Dsrg;

    #[test]
    fn default_template_renders_both_phrases() {
        let p = GuidancePrompt::new("bathroom", "sink", TemplateId::Default);
        assert_eq!(p.rendered, "Seems like a bathroom is ahead. A sink can be in the vicinity");
    }

    #[test]
    fn catalog_templates_substitute_each_cue() {
        let p = GuidancePrompt::new("bathroom", "sink", TemplateId::Vicinity);
        assert_eq!(p.rendered, "A bathroom can be in the vicinity. A sink can be in the vicinity.");
        let p = GuidancePrompt::new("", "sink", TemplateId::Bare);
        assert_eq!(p.rendered, "sink");
        let p = GuidancePrompt::new("kitchen", "", TemplateId::MayFindNearby);
        assert_eq!(p.rendered, "You may find kitchen nearby");
    }

    #[test]
    fn hallway_path_leads_through_bathroom() {
        let g = Dsrg::default_prior();
        let p = generate_guidance(&g, &AgentNode::Node(NodeId::new("hallway")), TemplateId::Default, CueToggles::default());
        assert_eq!((p.region_cue.as_str(), p.object_cue.as_str()), ("bathroom", "sink"));
    }

    #[test]
    fn target_region_is_its_own_cue() {
        let g = Dsrg::default_prior();
        let p = generate_guidance(&g, &AgentNode::Node(NodeId::new("bathroom")), TemplateId::Default, CueToggles::default());
        assert_eq!((p.region_cue.as_str(), p.object_cue.as_str()), ("bathroom", "sink"));
    }

    #[test]
    fn sentinel_falls_back_to_prior_cues() {
        let g = Dsrg::default_prior();
        let p = generate_guidance(&g, &AgentNode::Unlocalized, TemplateId::Default, CueToggles::default());
        assert_eq!((p.region_cue.as_str(), p.object_cue.as_str()), ("bathroom", "sink"));
        let off = CueToggles { region: false, object: true };
        assert_eq!(generate_guidance(&g, &AgentNode::Unlocalized, TemplateId::Default, off).region_cue, "");
    }
}
