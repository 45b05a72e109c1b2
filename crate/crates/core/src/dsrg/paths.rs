use super::*;
use std::cmp::Ordering;

/// A simple path of edges ending at the target node.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationalPath {
    /// Visited nodes, starting node first, target last.
    pub nodes: Vec<NodeId>,
    /// Traversed edges (traversal ignores edge direction).
    pub edges: Vec<EdgeKey>,
    /// Product of edge confidences; 1 for the empty path.
    pub confidence: f64,
}

impl RelationalPath {
    pub fn hops(&self) -> usize {
        self.edges.len()
    }
}

impl Dsrg {
    /// Every simple path of at most `max_hops` edges from `from` to the
    /// target, best first: higher confidence product, then fewer hops, then
    /// lexicographically smaller label sequence.
    pub fn relational_paths(&self, from: &NodeId, max_hops: usize) -> Result<Vec<RelationalPath>, DsrgError> {
        if !self.nodes.contains_key(from) {
            return Err(DsrgError::UnknownNode(from.0.clone()));
        }
        let mut adjacency: BTreeMap<&NodeId, Vec<(&NodeId, &EdgeKey, f64)>> = BTreeMap::new();
        for (key, e) in &self.edges {
            adjacency.entry(&e.src).or_default().push((&e.dst, key, e.confidence));
            adjacency.entry(&e.dst).or_default().push((&e.src, key, e.confidence));
        }
        let mut out = Vec::new();
        let mut nodes = vec![from.clone()];
        let mut edges = Vec::new();
        self.dfs(&adjacency, max_hops, 1.0, &mut nodes, &mut edges, &mut out);
        out.sort_by(|a, b| self.path_order(a, b));
        Ok(out)
    }

    fn dfs(
        &self,
        adjacency: &BTreeMap<&NodeId, Vec<(&NodeId, &EdgeKey, f64)>>,
        max_hops: usize,
        confidence: f64,
        nodes: &mut Vec<NodeId>,
        edges: &mut Vec<EdgeKey>,
        out: &mut Vec<RelationalPath>,
    ) {
        let cur = nodes.last().expect("path is never empty").clone();
        if cur == self.target {
            out.push(RelationalPath {
                nodes: nodes.clone(),
                edges: edges.clone(),
                confidence,
            });
            return;
        }
        if edges.len() == max_hops {
            return;
        }
        let Some(next) = adjacency.get(&cur) else { return };
        for &(nb, key, c) in next {
            if nodes.contains(nb) {
                continue;
            }
            nodes.push(nb.clone());
            edges.push(key.clone());
            self.dfs(adjacency, max_hops, confidence * c, nodes, edges, out);
            nodes.pop();
            edges.pop();
        }
    }

    fn path_order(&self, a: &RelationalPath, b: &RelationalPath) -> Ordering {
        let labels = |p: &RelationalPath| -> Vec<&str> {
            p.nodes.iter().map(|n| self.nodes[n].label.as_str()).collect()
        };
        b.confidence
            .total_cmp(&a.confidence)
            .then_with(|| a.hops().cmp(&b.hops()))
            .then_with(|| labels(a).cmp(&labels(b)))
            .then_with(|| a.edges.cmp(&b.edges))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(id: &str, kind: NodeKind) -> EntityNode {
        EntityNode::prior(id, kind, id)
    }

    fn topo(src: &str, dst: &str, c: f64) -> SpatialEdge {
        SpatialEdge::new(src, dst, RelationValue::Topological(Topological::ConnectedTo), c)
    }

    #[test]
    fn linear_chain() {
        let g = Dsrg::from_parts(
            vec![
                node("hallway", NodeKind::Region),
                node("bathroom", NodeKind::Region),
                node("toilet", NodeKind::Object),
            ],
            vec![topo("hallway", "bathroom", 0.8), topo("toilet", "bathroom", 0.9)],
            NodeId::new("toilet"),
        )
        .unwrap();
        let paths = g.relational_paths(&NodeId::new("hallway"), 2).unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].hops(), 2);
        assert!(g.relational_paths(&NodeId::new("hallway"), 1).unwrap().is_empty());
        let zero = g.relational_paths(&NodeId::new("toilet"), 3).unwrap();
        assert_eq!(zero.len(), 1);
        assert!(zero[0].edges.is_empty());
        assert_eq!(zero[0].confidence, 1.0);
        assert!(matches!(
            g.relational_paths(&NodeId::new("attic"), 2),
            Err(DsrgError::UnknownNode(_))
        ));
    }

    #[test]
    fn diamond_orders_by_confidence() {
        let g = Dsrg::from_parts(
            vec![
                node("a", NodeKind::Region),
                node("b", NodeKind::Region),
                node("c", NodeKind::Region),
                node("t", NodeKind::Object),
            ],
            vec![
                topo("a", "c", 0.8),
                topo("c", "t", 0.8),
                topo("a", "b", 0.9),
                topo("b", "t", 0.9),
            ],
            NodeId::new("t"),
        )
        .unwrap();
        let paths = g.relational_paths(&NodeId::new("a"), 2).unwrap();
        assert_eq!(paths.len(), 2);
        assert!((paths[0].confidence - 0.81).abs() < 1e-12);
        assert_eq!(paths[0].nodes[1].as_str(), "b");
        assert!((paths[1].confidence - 0.64).abs() < 1e-12);
    }
}
