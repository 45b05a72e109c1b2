//! Target-centred spatial relationship graph.
//!
//! Nodes are objects and regions; edges carry one of three relation kinds
//! (topological, directional, distance) with a confidence. The graph starts
//! from a commonsense prior loaded from JSON and is refined online by
//! confidence-weighted fusion of observed relations.

mod paths;
mod schema;

pub use paths::RelationalPath;
pub use schema::{PRIOR_SCHEMA, DEFAULT_PRIOR};

use crate::error::DsrgError;
use crate::geometry::Point2;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

/// Default weight given to the existing confidence when fusing.
pub const DEFAULT_LAMBDA_FUSE: f64 = 0.5;

/// Two observed instances of the same label closer than this are the same node.
pub const INSTANCE_MERGE_RADIUS: f64 = 1.0;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub String);

impl NodeId {
    pub fn new(s: impl Into<String>) -> Self {
        Self(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Object,
    Region,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Prior,
    Observed,
    Fused,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntityNode {
    pub id: NodeId,
    pub kind: NodeKind,
    pub label: String,
    pub confidence: f64,
    pub provenance: Provenance,
    pub anchor: Option<Point2>,
}

impl EntityNode {
    pub fn prior(id: impl Into<String>, kind: NodeKind, label: impl Into<String>) -> Self {
        Self {
            id: NodeId::new(id),
            kind,
            label: label.into(),
            confidence: 1.0,
            provenance: Provenance::Prior,
            anchor: None,
        }
    }

    /// A freshly observed entity. The id is provisional; insertion may rename it.
    pub fn observed(kind: NodeKind, label: impl Into<String>, confidence: f64, anchor: Option<Point2>) -> Self {
        let label = label.into();
        Self {
            id: NodeId::new(label.clone()),
            kind,
            label,
            confidence,
            provenance: Provenance::Observed,
            anchor,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Topological,
    Directional,
    Distance,
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 3] = [EdgeKind::Topological, EdgeKind::Directional, EdgeKind::Distance];

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Topological => "topological",
            EdgeKind::Directional => "directional",
            EdgeKind::Distance => "distance",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topological {
    Inside,
    Contains,
    Adjacent,
    ConnectedTo,
}

impl Topological {
    pub const ALL: [Topological; 4] = [
        Topological::Inside,
        Topological::Contains,
        Topological::Adjacent,
        Topological::ConnectedTo,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Directional {
    LeftOf,
    RightOf,
    InFrontOf,
    Behind,
    Above,
    Below,
}

impl Directional {
    pub const ALL: [Directional; 6] = [
        Directional::LeftOf,
        Directional::RightOf,
        Directional::InFrontOf,
        Directional::Behind,
        Directional::Above,
        Directional::Below,
    ];
}

/// Closed distance range in meters, `0 <= lo <= hi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceInterval {
    pub lo: f64,
    pub hi: f64,
}

impl DistanceInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, DsrgError> {
        if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || lo > hi {
            return Err(DsrgError::SchemaViolation(format!(
                "distance interval [{lo}, {hi}] must satisfy 0 <= lo <= hi"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, d: f64) -> bool {
        d >= self.lo && d <= self.hi
    }
}

/// Relation payload; the variant determines the edge kind.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum RelationValue {
    Topological(Topological),
    Directional(Directional),
    Distance(DistanceInterval),
}

impl RelationValue {
    pub fn kind(&self) -> EdgeKind {
        match self {
            RelationValue::Topological(_) => EdgeKind::Topological,
            RelationValue::Directional(_) => EdgeKind::Directional,
            RelationValue::Distance(_) => EdgeKind::Distance,
        }
    }
}

/// Identity of an edge: at most one edge exists per key.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeKey {
    pub src: NodeId,
    pub dst: NodeId,
    pub kind: EdgeKind,
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}|{}", self.src, self.kind.as_str(), self.dst)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpatialEdge {
    pub src: NodeId,
    pub dst: NodeId,
    pub value: RelationValue,
    pub confidence: f64,
    pub provenance: Provenance,
}

impl SpatialEdge {
    pub fn new(src: impl Into<String>, dst: impl Into<String>, value: RelationValue, confidence: f64) -> Self {
        Self {
            src: NodeId::new(src),
            dst: NodeId::new(dst),
            value,
            confidence,
            provenance: Provenance::Observed,
        }
    }

    pub fn kind(&self) -> EdgeKind {
        self.value.kind()
    }

    pub fn key(&self) -> EdgeKey {
        EdgeKey {
            src: self.src.clone(),
            dst: self.dst.clone(),
            kind: self.kind(),
        }
    }

    pub fn touches(&self, id: &NodeId) -> bool {
        &self.src == id || &self.dst == id
    }

    pub fn other(&self, id: &NodeId) -> Option<&NodeId> {
        if &self.src == id {
            Some(&self.dst)
        } else if &self.dst == id {
            Some(&self.src)
        } else {
            None
        }
    }
}

/// Which relation kinds participate in a query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeKindSet {
    pub topological: bool,
    pub directional: bool,
    pub distance: bool,
}

impl Default for EdgeKindSet {
    fn default() -> Self {
        Self::all()
    }
}

impl EdgeKindSet {
    pub const fn all() -> Self {
        Self {
            topological: true,
            directional: true,
            distance: true,
        }
    }

    pub fn contains(&self, kind: EdgeKind) -> bool {
        match kind {
            EdgeKind::Topological => self.topological,
            EdgeKind::Directional => self.directional,
            EdgeKind::Distance => self.distance,
        }
    }
}

/// `lambda * prior + (1 - lambda) * new`.
pub fn fuse_confidence(prior: f64, new: f64, lambda_fuse: f64) -> f64 {
    lambda_fuse * prior + (1.0 - lambda_fuse) * new
}

fn check_unit(name: &str, v: f64) -> Result<(), DsrgError> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(DsrgError::SchemaViolation(format!("{name} = {v} not in [0, 1]")))
    }
}

/// The graph itself. Node and edge maps are ordered, so iteration and
/// serialisation are deterministic.
#[derive(Clone, Debug, PartialEq)]
pub struct Dsrg {
    nodes: BTreeMap<NodeId, EntityNode>,
    edges: BTreeMap<EdgeKey, SpatialEdge>,
    target: NodeId,
}

impl Dsrg {
    /// Builds a graph from parts, checking every structural invariant.
    pub fn from_parts(
        nodes: Vec<EntityNode>,
        edges: Vec<SpatialEdge>,
        target: NodeId,
    ) -> Result<Self, DsrgError> {
        let mut node_map = BTreeMap::new();
        for n in nodes {
            check_unit("node confidence", n.confidence)?;
            if n.provenance == Provenance::Prior && n.anchor.is_some() {
                return Err(DsrgError::SchemaViolation(format!(
                    "prior node `{}` must not carry an anchor",
                    n.id
                )));
            }
            if node_map.contains_key(&n.id) {
                return Err(DsrgError::SchemaViolation(format!("duplicate node id `{}`", n.id)));
            }
            node_map.insert(n.id.clone(), n);
        }
        match node_map.get(&target) {
            None => return Err(DsrgError::MissingTarget(target.0.clone())),
            Some(t) if t.kind != NodeKind::Object => {
                return Err(DsrgError::SchemaViolation(format!(
                    "target `{}` must be an object node",
                    target
                )))
            }
            Some(_) => {}
        }
        let mut edge_map = BTreeMap::new();
        for e in edges {
            check_unit("edge confidence", e.confidence)?;
            if e.src == e.dst {
                return Err(DsrgError::SchemaViolation(format!("self-loop on `{}`", e.src)));
            }
            if let RelationValue::Distance(d) = e.value {
                DistanceInterval::new(d.lo, d.hi)?;
            }
            for end in [&e.src, &e.dst] {
                if !node_map.contains_key(end) {
                    return Err(DsrgError::DanglingEdge {
                        src: e.src.0.clone(),
                        dst: e.dst.0.clone(),
                        missing: end.0.clone(),
                    });
                }
            }
            let key = e.key();
            if edge_map.contains_key(&key) {
                return Err(DsrgError::SchemaViolation(format!("duplicate edge {key}")));
            }
            edge_map.insert(key, e);
        }
        Ok(Self {
            nodes: node_map,
            edges: edge_map,
            target,
        })
    }

    pub fn target_id(&self) -> &NodeId {
        &self.target
    }

    pub fn target(&self) -> &EntityNode {
        &self.nodes[&self.target]
    }

    pub fn target_label(&self) -> &str {
        &self.target().label
    }

    pub fn node(&self, id: &NodeId) -> Option<&EntityNode> {
        self.nodes.get(id)
    }

    pub fn edge(&self, key: &EdgeKey) -> Option<&SpatialEdge> {
        self.edges.get(key)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &EntityNode> {
        self.nodes.values()
    }

    pub fn edges(&self) -> impl Iterator<Item = &SpatialEdge> {
        self.edges.values()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn find_by_label(&self, kind: NodeKind, label: &str) -> impl Iterator<Item = &EntityNode> {
        let label = label.to_owned();
        self.nodes
            .values()
            .filter(move |n| n.kind == kind && n.label == label)
    }

    pub fn region_by_label(&self, label: &str) -> Option<&EntityNode> {
        self.find_by_label(NodeKind::Region, label).next()
    }

    /// Confidence-weighted edge fusion. An existing `(src, dst, kind)` edge has
    /// its confidence blended and value replaced; otherwise the edge is inserted.
    pub fn fuse_edge(&mut self, new_edge: SpatialEdge, lambda_fuse: f64) -> Result<EdgeKey, DsrgError> {
        for end in [&new_edge.src, &new_edge.dst] {
            if !self.nodes.contains_key(end) {
                return Err(DsrgError::UnknownEndpoint(end.0.clone()));
            }
        }
        if new_edge.src == new_edge.dst {
            return Err(DsrgError::SchemaViolation(format!("self-loop on `{}`", new_edge.src)));
        }
        check_unit("edge confidence", new_edge.confidence)?;
        if let RelationValue::Distance(d) = new_edge.value {
            DistanceInterval::new(d.lo, d.hi)?;
        }
        let key = new_edge.key();
        match self.edges.get_mut(&key) {
            Some(existing) => {
                existing.confidence =
                    fuse_confidence(existing.confidence, new_edge.confidence, lambda_fuse);
                existing.value = new_edge.value;
                existing.provenance = Provenance::Fused;
            }
            None => {
                let mut e = new_edge;
                e.provenance = Provenance::Observed;
                self.edges.insert(key.clone(), e);
            }
        }
        Ok(key)
    }

    /// Inserts a node or merges it into an existing node with the same label
    /// and kind. Anchored object instances only merge within
    /// [`INSTANCE_MERGE_RADIUS`]; otherwise they become `label#k`.
    pub fn upsert_node(&mut self, node: EntityNode, lambda_fuse: f64) -> NodeId {
        let existing = self.match_node(&node);
        match existing {
            Some(id) => {
                let n = self.nodes.get_mut(&id).expect("matched node exists");
                n.confidence = fuse_confidence(n.confidence, node.confidence.clamp(0.0, 1.0), lambda_fuse);
                if node.anchor.is_some() {
                    n.anchor = node.anchor;
                }
                if n.provenance == Provenance::Prior {
                    n.provenance = Provenance::Fused;
                }
                id
            }
            None => {
                let id = self.fresh_id(&node.label);
                let mut n = node;
                n.id = id.clone();
                n.confidence = n.confidence.clamp(0.0, 1.0);
                if n.provenance == Provenance::Prior && n.anchor.is_some() {
                    n.provenance = Provenance::Observed;
                }
                self.nodes.insert(id.clone(), n);
                id
            }
        }
    }

    fn match_node(&self, node: &EntityNode) -> Option<NodeId> {
        let candidates: Vec<&EntityNode> = self
            .nodes
            .values()
            .filter(|n| n.kind == node.kind && n.label == node.label)
            .collect();
        let Some(anchor) = node.anchor else {
            return candidates.first().map(|n| n.id.clone());
        };
        // The target node is unique and absorbs every instance of its label.
        if let Some(t) = candidates.iter().find(|n| n.id == self.target) {
            return Some(t.id.clone());
        }
        let near = candidates
            .iter()
            .filter_map(|n| n.anchor.map(|a| (a.distance(anchor), *n)))
            .filter(|(d, _)| *d <= INSTANCE_MERGE_RADIUS)
            .min_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.id.cmp(&b.1.id)));
        if let Some((_, n)) = near {
            return Some(n.id.clone());
        }
        candidates
            .iter()
            .find(|n| n.anchor.is_none())
            .map(|n| n.id.clone())
    }

    fn fresh_id(&self, label: &str) -> NodeId {
        let base = NodeId::new(label);
        if !self.nodes.contains_key(&base) {
            return base;
        }
        (2..)
            .map(|k| NodeId::new(format!("{label}#{k}")))
            .find(|id| !self.nodes.contains_key(id))
            .expect("unbounded suffix search")
    }

    /// Copy of the graph keeping only edges whose kind is in `kinds`.
    pub fn with_edge_kinds(&self, kinds: EdgeKindSet) -> Dsrg {
        Dsrg {
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .filter(|(k, _)| kinds.contains(k.kind))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
            target: self.target.clone(),
        }
    }

    /// Edges incident to `id`, in key order.
    pub fn incident(&self, id: &NodeId) -> impl Iterator<Item = &SpatialEdge> {
        let id = id.clone();
        self.edges.values().filter(move |e| e.touches(&id))
    }

    /// Breadth-first parent edges towards the target over undirected edges.
    /// The returned map sends each reachable node to the edge that leads one
    /// hop closer to the target.
    pub fn bfs_to_target(&self) -> BTreeMap<NodeId, Option<EdgeKey>> {
        let mut seen: BTreeMap<NodeId, Option<EdgeKey>> = BTreeMap::new();
        seen.insert(self.target.clone(), None);
        let mut queue = VecDeque::from([self.target.clone()]);
        while let Some(cur) = queue.pop_front() {
            for e in self.incident(&cur) {
                let other = e.other(&cur).expect("incident edge").clone();
                if !seen.contains_key(&other) {
                    seen.insert(other.clone(), Some(e.key()));
                    queue.push_back(other);
                }
            }
        }
        seen
    }

    /// Whether an undirected path links `id` to the target.
    pub fn connected_to_target(&self, id: &NodeId) -> bool {
        self.bfs_to_target().contains_key(id)
    }

    /// Edges of a shortest undirected path from `id` to the target.
    pub fn path_edges_to_target(&self, id: &NodeId) -> Vec<EdgeKey> {
        let parents = self.bfs_to_target();
        let mut out = Vec::new();
        let mut cur = id.clone();
        while let Some(Some(key)) = parents.get(&cur) {
            out.push(key.clone());
            cur = if key.src == cur { key.dst.clone() } else { key.src.clone() };
        }
        out
    }

    /// Labels of non-target object nodes linked to the target by some path.
    pub fn related_object_labels(&self) -> BTreeSet<String> {
        let target_label = self.target_label().to_owned();
        self.bfs_to_target()
            .keys()
            .filter_map(|id| self.nodes.get(id))
            .filter(|n| n.kind == NodeKind::Object && n.id != self.target && n.label != target_label)
            .map(|n| n.label.clone())
            .collect()
    }

    /// Region that most confidently contains the target, if any.
    pub fn target_region(&self) -> Option<&EntityNode> {
        self.incident(&self.target)
            .filter_map(|e| {
                let other = self.nodes.get(e.other(&self.target)?)?;
                let holds = match (e.value, &e.src == &self.target) {
                    (RelationValue::Topological(Topological::Inside), true) => true,
                    (RelationValue::Topological(Topological::Contains), false) => true,
                    _ => false,
                };
                (other.kind == NodeKind::Region && holds).then_some((e.confidence, other))
            })
            .max_by(|a, b| a.0.total_cmp(&b.0).then_with(|| b.1.id.cmp(&a.1.id)))
            .map(|(_, n)| n)
    }

    /// Neighbours of the target of the given kind, best confidence first
    /// (ties by label).
    pub fn target_neighbours(&self, kind: NodeKind) -> Vec<(&EntityNode, f64)> {
        let mut best: BTreeMap<&NodeId, f64> = BTreeMap::new();
        for e in self.incident(&self.target) {
            let Some(other) = e.other(&self.target) else { continue };
            let Some(n) = self.nodes.get(other) else { continue };
            if n.kind != kind || n.label == self.target_label() {
                continue;
            }
            let c = best.entry(other).or_insert(0.0);
            *c = c.max(e.confidence);
        }
        let mut out: Vec<(&EntityNode, f64)> =
            best.into_iter().map(|(id, c)| (&self.nodes[id], c)).collect();
        out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.label.cmp(&b.0.label)));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Dsrg {
        Dsrg::from_parts(
            vec![
                EntityNode::prior("toilet", NodeKind::Object, "toilet"),
                EntityNode::prior("sink", NodeKind::Object, "sink"),
                EntityNode::prior("bathroom", NodeKind::Region, "bathroom"),
            ],
            vec![
                SpatialEdge {
                    provenance: Provenance::Prior,
                    ..SpatialEdge::new(
                        "toilet",
                        "bathroom",
                        RelationValue::Topological(Topological::Inside),
                        1.0,
                    )
                },
                SpatialEdge {
                    provenance: Provenance::Prior,
                    ..SpatialEdge::new(
                        "toilet",
                        "sink",
                        RelationValue::Distance(DistanceInterval { lo: 0.0, hi: 2.0 }),
                        1.0,
                    )
                },
            ],
            NodeId::new("toilet"),
        )
        .unwrap()
    }

    #[test]
    fn fuse_existing_edge_blends_confidence() {
        let mut g = sample();
        let e = SpatialEdge::new(
            "toilet",
            "sink",
            RelationValue::Distance(DistanceInterval { lo: 0.0, hi: 1.0 }),
            0.6,
        );
        let key = g.fuse_edge(e, 0.5).unwrap();
        let fused = g.edge(&key).unwrap();
        assert!((fused.confidence - 0.8).abs() < 1e-12);
        assert_eq!(fused.provenance, Provenance::Fused);
        assert_eq!(fused.value, RelationValue::Distance(DistanceInterval { lo: 0.0, hi: 1.0 }));
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn fuse_with_unit_lambda_keeps_prior() {
        let mut g = sample();
        let e = SpatialEdge::new("toilet", "bathroom", RelationValue::Topological(Topological::Inside), 0.3);
        let key = g.fuse_edge(e, 1.0).unwrap();
        assert_eq!(g.edge(&key).unwrap().confidence, 1.0);
    }

    #[test]
    fn fuse_new_edge_inserts_observed() {
        let mut g = sample();
        let e = SpatialEdge::new("sink", "bathroom", RelationValue::Topological(Topological::Inside), 0.7);
        let key = g.fuse_edge(e, 0.5).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.edge(&key).unwrap().provenance, Provenance::Observed);
    }

    #[test]
    fn fuse_rejects_unknown_endpoint() {
        let mut g = sample();
        let e = SpatialEdge::new("sink", "garage", RelationValue::Topological(Topological::Adjacent), 0.7);
        assert_eq!(g.fuse_edge(e, 0.5), Err(DsrgError::UnknownEndpoint("garage".into())));
    }

    #[test]
    fn upsert_inserts_then_is_idempotent() {
        let mut g = sample();
        let n = EntityNode::observed(NodeKind::Object, "towel", 0.9, Some(Point2::new(1.0, 2.0)));
        g.upsert_node(n.clone(), 1.0);
        assert_eq!(g.node_count(), 4);
        let snapshot = g.clone();
        g.upsert_node(n, 1.0);
        assert_eq!(g, snapshot);
    }

    #[test]
    fn upsert_fuses_same_label() {
        let mut g = sample();
        let first = EntityNode::observed(NodeKind::Object, "mirror", 0.9, Some(Point2::new(1.0, 1.0)));
        let id = g.upsert_node(first, 0.5);
        let again = EntityNode::observed(NodeKind::Object, "mirror", 0.5, Some(Point2::new(1.2, 1.0)));
        assert_eq!(g.upsert_node(again, 0.5), id);
        assert!((g.node(&id).unwrap().confidence - 0.7).abs() < 1e-12);
    }

    #[test]
    fn distant_instances_get_suffixed_ids() {
        let mut g = sample();
        let a = g.upsert_node(
            EntityNode::observed(NodeKind::Object, "sink", 0.9, Some(Point2::new(0.0, 0.0))),
            0.5,
        );
        assert_eq!(a.as_str(), "sink");
        assert_eq!(g.node(&a).unwrap().provenance, Provenance::Fused);
        let b = g.upsert_node(
            EntityNode::observed(NodeKind::Object, "sink", 0.9, Some(Point2::new(5.0, 0.0))),
            0.5,
        );
        assert_eq!(b.as_str(), "sink#2");
        assert_eq!(g.node_count(), 4);
    }

    #[test]
    fn edge_kind_filter_and_connectivity() {
        let g = sample();
        assert!(g.connected_to_target(&NodeId::new("bathroom")));
        let no_topo = g.with_edge_kinds(EdgeKindSet {
            topological: false,
            ..EdgeKindSet::all()
        });
        assert!(!no_topo.connected_to_target(&NodeId::new("bathroom")));
        assert!(no_topo.connected_to_target(&NodeId::new("sink")));
        assert_eq!(g.target_region().unwrap().label, "bathroom");
        assert_eq!(g.related_object_labels().into_iter().collect::<Vec<_>>(), vec!["sink"]);
    }
}
