//! JSON persistence for the graph.
//!
//! Prior documents and persisted graphs share one layout; persisted graphs
//! additionally carry `provenance` and `anchor`.

use super::*;
use serde_json::{json, Map, Value};

/// JSON Schema describing the document layout, shipped alongside the crate.
pub const PRIOR_SCHEMA: &str = include_str!("../../data/dsrg.schema.json");

/// Commonsense prior for the `toilet` target used by default scene generation.
pub const DEFAULT_PRIOR: &str = include_str!("../../data/prior_toilet.json");

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: String,
    kind: NodeKind,
    label: String,
    #[serde(default)]
    confidence: Option<f64>,
    #[serde(default)]
    provenance: Option<Provenance>,
    #[serde(default)]
    anchor: Option<Point2>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    src: String,
    dst: String,
    kind: EdgeKind,
    value: Value,
    #[serde(default)]
    confidence: Option<f64>,
    #[serde(default)]
    provenance: Option<Provenance>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    target: String,
    nodes: Vec<NodeDoc>,
    edges: Vec<EdgeDoc>,
}

fn violation(msg: impl Into<String>) -> DsrgError {
    DsrgError::SchemaViolation(msg.into())
}

fn parse_value(kind: EdgeKind, v: &Value) -> Result<RelationValue, DsrgError> {
    match kind {
        EdgeKind::Topological => serde_json::from_value(v.clone())
            .map(RelationValue::Topological)
            .map_err(|e| violation(format!("topological value {v}: {e}"))),
        EdgeKind::Directional => serde_json::from_value(v.clone())
            .map(RelationValue::Directional)
            .map_err(|e| violation(format!("directional value {v}: {e}"))),
        EdgeKind::Distance => {
            let obj = v
                .as_object()
                .ok_or_else(|| violation(format!("distance value {v} must be an object")))?;
            if obj.keys().any(|k| k != "lo" && k != "hi") {
                return Err(violation(format!("distance value {v} has unexpected keys")));
            }
            let get = |k: &str| {
                obj.get(k)
                    .and_then(Value::as_f64)
                    .ok_or_else(|| violation(format!("distance value {v} lacks numeric `{k}`")))
            };
            Ok(RelationValue::Distance(DistanceInterval::new(get("lo")?, get("hi")?)?))
        }
    }
}

fn value_to_json(v: &RelationValue) -> Value {
    match v {
        RelationValue::Topological(t) => serde_json::to_value(t).expect("enum serialises"),
        RelationValue::Directional(d) => serde_json::to_value(d).expect("enum serialises"),
        RelationValue::Distance(d) => json!({ "lo": d.lo, "hi": d.hi }),
    }
}

fn parse_doc(doc: &Value) -> Result<GraphDoc, DsrgError> {
    serde_json::from_value(doc.clone()).map_err(|e| violation(e.to_string()))
}

fn build(doc: GraphDoc, as_prior: bool) -> Result<(Vec<EntityNode>, Vec<SpatialEdge>, String), DsrgError> {
    let mut nodes = Vec::with_capacity(doc.nodes.len());
    for n in doc.nodes {
        if as_prior && (n.anchor.is_some() || n.provenance.is_some_and(|p| p != Provenance::Prior)) {
            return Err(violation(format!("prior node `{}` carries observation fields", n.id)));
        }
        nodes.push(EntityNode {
            id: NodeId(n.id),
            kind: n.kind,
            label: n.label,
            confidence: n.confidence.unwrap_or(1.0),
            provenance: if as_prior {
                Provenance::Prior
            } else {
                n.provenance.unwrap_or(Provenance::Prior)
            },
            anchor: n.anchor,
        });
    }
    let mut edges = Vec::with_capacity(doc.edges.len());
    for e in doc.edges {
        if as_prior && e.provenance.is_some_and(|p| p != Provenance::Prior) {
            return Err(violation(format!("prior edge {} -> {} is not prior", e.src, e.dst)));
        }
        edges.push(SpatialEdge {
            value: parse_value(e.kind, &e.value)?,
            src: NodeId(e.src),
            dst: NodeId(e.dst),
            confidence: e.confidence.unwrap_or(1.0),
            provenance: if as_prior {
                Provenance::Prior
            } else {
                e.provenance.unwrap_or(Provenance::Prior)
            },
        });
    }
    Ok((nodes, edges, doc.target))
}

impl Dsrg {
    /// Ingests a commonsense prior and designates the node labelled
    /// `target_label` as the search target.
    pub fn init_from_prior(prior_doc: &Value, target_label: &str) -> Result<Dsrg, DsrgError> {
        let (nodes, edges, _) = build(parse_doc(prior_doc)?, true)?;
        let target = nodes
            .iter()
            .find(|n| n.label == target_label)
            .map(|n| n.id.clone())
            .ok_or_else(|| DsrgError::MissingTarget(target_label.to_owned()))?;
        Dsrg::from_parts(nodes, edges, target)
    }

    /// Parses a prior from JSON text, using its own `target` field.
    pub fn prior_from_str(text: &str) -> Result<Dsrg, DsrgError> {
        let doc: Value = serde_json::from_str(text).map_err(|e| violation(e.to_string()))?;
        let target = doc
            .get("target")
            .and_then(Value::as_str)
            .ok_or_else(|| violation("missing string field `target`"))?
            .to_owned();
        Dsrg::init_from_prior(&doc, &target)
    }

    /// Default prior shipped with the crate.
    pub fn default_prior() -> Dsrg {
        Dsrg::prior_from_str(DEFAULT_PRIOR).expect("bundled prior is valid")
    }

    pub fn serialize(&self) -> Value {
        let nodes: Vec<Value> = self
            .nodes
            .values()
            .map(|n| {
                let mut m = Map::new();
                m.insert("id".into(), json!(n.id.0));
                m.insert("kind".into(), serde_json::to_value(n.kind).expect("enum"));
                m.insert("label".into(), json!(n.label));
                m.insert("confidence".into(), json!(n.confidence));
                m.insert("provenance".into(), serde_json::to_value(n.provenance).expect("enum"));
                if let Some(a) = n.anchor {
                    m.insert("anchor".into(), json!([a.x, a.y]));
                }
                Value::Object(m)
            })
            .collect();
        let edges: Vec<Value> = self
            .edges
            .values()
            .map(|e| {
                json!({
                    "src": e.src.0,
                    "dst": e.dst.0,
                    "kind": e.kind().as_str(),
                    "value": value_to_json(&e.value),
                    "confidence": e.confidence,
                    "provenance": serde_json::to_value(e.provenance).expect("enum"),
                })
            })
            .collect();
        json!({ "target": self.target.0, "nodes": nodes, "edges": edges })
    }

    pub fn deserialize(doc: &Value) -> Result<Dsrg, DsrgError> {
        let (nodes, edges, target) = build(parse_doc(doc)?, false)?;
        let target = if nodes.iter().any(|n| n.id.0 == target) {
            NodeId(target)
        } else {
            nodes
                .iter()
                .find(|n| n.label == target)
                .map(|n| n.id.clone())
                .ok_or(DsrgError::MissingTarget(target))?
        };
        Dsrg::from_parts(nodes, edges, target)
    }
}
