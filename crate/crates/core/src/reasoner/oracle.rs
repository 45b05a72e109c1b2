//! Ground-truth backend with per-capability accuracy knobs.

use super::{QueryKind, Reasoner, ReasonerQuery, ReasonerReply};
use crate::dsrg::{Directional, DistanceInterval, RelationValue, Topological};
use crate::error::ReasonerError;
use crate::geometry::{Point2, Rect, Segment};
use crate::gridsim::{in_view_wedge, Pose, World};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Radius within which a detection counts as the real instance.
pub const VERIFY_RADIUS: f64 = 0.75;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleKnobs {
    pub relation_acc: f64,
    pub localize_acc: f64,
    pub verify_acc: f64,
    pub redetect_acc: f64,
    /// Length scale of the similarity falloff, meters.
    pub similarity_scale: f64,
}

impl Default for OracleKnobs {
    fn default() -> Self {
        Self::perfect()
    }
}

impl OracleKnobs {
    pub const fn perfect() -> Self {
        Self {
            relation_acc: 1.0,
            localize_acc: 1.0,
            verify_acc: 1.0,
            redetect_acc: 1.0,
            similarity_scale: 4.0,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("relation_acc", self.relation_acc),
            ("localize_acc", self.localize_acc),
            ("verify_acc", self.verify_acc),
            ("redetect_acc", self.redetect_acc),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(format!("reasoner.{name} = {v} not in [0, 1]"));
            }
        }
        if !(self.similarity_scale > 0.0) {
            return Err("reasoner.similarity_scale must be positive".into());
        }
        Ok(())
    }
}

/// Distance bucket containing `d`.
pub fn distance_bucket(d: f64) -> DistanceInterval {
    let (lo, hi) = if d <= 1.0 {
        (0.0, 1.0)
    } else if d <= 2.0 {
        (0.0, 2.0)
    } else if d <= 5.0 {
        (2.0, 5.0)
    } else {
        (5.0, 100.0)
    };
    DistanceInterval { lo, hi }
}

const BUCKETS: [(f64, f64); 4] = [(0.0, 1.0), (0.0, 2.0), (2.0, 5.0), (5.0, 100.0)];

/// Direction of `object` relative to `anchor` as seen from `viewer`.
pub fn directional_relation(viewer: Pose, anchor: Point2, object: Point2) -> Directional {
    let v = object - anchor;
    let f = v.dot(Point2::from_heading(viewer.heading));
    let l = v.dot(Point2::from_heading(viewer.heading + 90.0));
    if l.abs() >= f.abs() {
        if l > 0.0 {
            Directional::LeftOf
        } else {
            Directional::RightOf
        }
    } else if f > 0.0 {
        Directional::Behind
    } else {
        Directional::InFrontOf
    }
}

pub struct OracleReasoner {
    world: Arc<World>,
    walls: Vec<Segment>,
    knobs: OracleKnobs,
    rng: Mutex<ChaCha8Rng>,
    fields: Mutex<HashMap<String, Arc<Vec<f64>>>>,
}

impl OracleReasoner {
    pub fn new(world: Arc<World>, knobs: OracleKnobs, seed: u64) -> Self {
        let walls = world.scene.walls();
        Self {
            world,
            walls,
            knobs,
            rng: Mutex::new(ChaCha8Rng::seed_from_u64(seed)),
            fields: Mutex::new(HashMap::new()),
        }
    }

    pub fn knobs(&self) -> OracleKnobs {
        self.knobs
    }

    /// Draws once from the stream; true with probability `acc`.
    fn honest(&self, acc: f64) -> bool {
        let u: f64 = self.rng.lock().expect("oracle rng poisoned").random();
        u < acc
    }

    fn pick(&self, n: usize) -> usize {
        self.rng.lock().expect("oracle rng poisoned").random_range(0..n)
    }

    fn field(&self, key: &str, seed: impl Fn(Point2) -> Option<f64>) -> Arc<Vec<f64>> {
        if let Some(f) = self.fields.lock().expect("field cache poisoned").get(key) {
            return f.clone();
        }
        let f = Arc::new(self.world.nav.distance_field(seed));
        self.fields
            .lock()
            .expect("field cache poisoned")
            .entry(key.to_owned())
            .or_insert(f)
            .clone()
    }

    /// Geodesic distance from `p` to the nearest room labelled `label`.
    pub fn distance_to_region(&self, p: Point2, label: &str) -> Option<f64> {
        let rects: Vec<Rect> = self
            .world
            .scene
            .rooms
            .iter()
            .filter(|r| r.label == label)
            .map(|r| r.rect())
            .collect();
        if rects.is_empty() {
            return None;
        }
        if rects.iter().any(|r| r.contains(p)) {
            return Some(0.0);
        }
        let f = self.field(&format!("region:{label}"), |c| rects.iter().any(|r| r.contains(c)).then_some(0.0));
        self.world.nav.field_at(&f, p)
    }

    /// Geodesic distance from `p` to the nearest object labelled `label`.
    pub fn distance_to_object(&self, p: Point2, label: &str) -> Option<f64> {
        let pts: Vec<Point2> = self
            .world
            .scene
            .objects
            .iter()
            .filter(|o| o.label == label)
            .map(|o| o.position)
            .collect();
        if pts.is_empty() {
            return None;
        }
        let f = self.field(&format!("object:{label}"), |c| {
            pts.iter().map(|o| o.distance(c)).filter(|d| *d <= 0.5).reduce(f64::min)
        });
        self.world.nav.field_at(&f, p)
    }

    fn corrupt(&self, rel: RelationValue) -> RelationValue {
        match rel {
            RelationValue::Topological(t) => {
                let others: Vec<_> = Topological::ALL.into_iter().filter(|x| *x != t).collect();
                RelationValue::Topological(others[self.pick(others.len())])
            }
            RelationValue::Directional(d) => {
                let others: Vec<_> = Directional::ALL.into_iter().filter(|x| *x != d).collect();
                RelationValue::Directional(others[self.pick(others.len())])
            }
            RelationValue::Distance(iv) => {
                let others: Vec<_> = BUCKETS.into_iter().filter(|b| *b != (iv.lo, iv.hi)).collect();
                let (lo, hi) = others[self.pick(others.len())];
                RelationValue::Distance(DistanceInterval { lo, hi })
            }
        }
    }

    fn finish_relations(&self, truth: Vec<RelationValue>) -> ReasonerReply {
        let honest = self.honest(self.knobs.relation_acc);
        let relations = if honest {
            truth
        } else {
            truth.into_iter().map(|r| self.corrupt(r)).collect()
        };
        ReasonerReply::Relation {
            relations,
            confidence: self.knobs.relation_acc,
        }
    }

    fn relation_object(&self, q: &ReasonerQuery) -> ReasonerReply {
        let scene = &self.world.scene;
        let (t, o) = (q.context.target.as_deref().unwrap_or(""), q.context.object.as_deref().unwrap_or(""));
        let best = scene
            .objects
            .iter()
            .filter(|a| a.label == t)
            .flat_map(|a| scene.objects.iter().filter(|b| b.label == o).map(move |b| (a.position, b.position)))
            .min_by(|x, y| x.0.distance(x.1).total_cmp(&y.0.distance(y.1)));
        let Some((tp, op)) = best else {
            let _ = self.honest(self.knobs.relation_acc);
            return ReasonerReply::Relation {
                relations: Vec::new(),
                confidence: 0.0,
            };
        };
        let mut truth = Vec::new();
        if scene.room_index_at(tp).is_some() && scene.room_index_at(tp) == scene.room_index_at(op) {
            truth.push(RelationValue::Topological(Topological::Adjacent));
        }
        if let Some(obs) = &q.context.observation {
            let viewer = Pose {
                position: obs.position,
                heading: obs.heading,
            };
            truth.push(RelationValue::Directional(directional_relation(viewer, tp, op)));
        }
        truth.push(RelationValue::Distance(distance_bucket(tp.distance(op))));
        self.finish_relations(truth)
    }

    fn relation_room(&self, q: &ReasonerQuery) -> ReasonerReply {
        let scene = &self.world.scene;
        let (t, o) = (
            q.context.target_room.as_deref().unwrap_or(""),
            q.context.object_room.as_deref().unwrap_or(""),
        );
        let idx = |l: &str| -> Vec<usize> { (0..scene.rooms.len()).filter(|&i| scene.rooms[i].label == l).collect() };
        let (ts, os) = (idx(t), idx(o));
        let mut pairs: Vec<(usize, usize)> = ts
            .iter()
            .flat_map(|&a| os.iter().filter(move |&&b| b != a).map(move |&b| (a, b)))
            .collect();
        if pairs.is_empty() {
            let _ = self.honest(self.knobs.relation_acc);
            return ReasonerReply::Relation {
                relations: Vec::new(),
                confidence: 0.0,
            };
        }
        let door = |a: usize, b: usize| scene.doors.iter().any(|d| d.rooms.contains(&a) && d.rooms.contains(&b));
        let touching = |a: usize, b: usize| {
            let (ra, rb) = (scene.rooms[a].rect(), scene.rooms[b].rect());
            let ox = ra.max.x.min(rb.max.x) - ra.min.x.max(rb.min.x);
            let oy = ra.max.y.min(rb.max.y) - ra.min.y.max(rb.min.y);
            (ox.abs() < 1e-9 && oy > 1e-9) || (oy.abs() < 1e-9 && ox > 1e-9)
        };
        let centre_dist = |a: usize, b: usize| scene.rooms[a].rect().center().distance(scene.rooms[b].rect().center());
        pairs.sort_by(|x, y| {
            door(y.0, y.1)
                .cmp(&door(x.0, x.1))
                .then(touching(y.0, y.1).cmp(&touching(x.0, x.1)))
                .then(centre_dist(x.0, x.1).total_cmp(&centre_dist(y.0, y.1)))
        });
        let (a, b) = pairs[0];
        let mut truth = Vec::new();
        if door(a, b) {
            truth.push(RelationValue::Topological(Topological::ConnectedTo));
        } else if touching(a, b) {
            truth.push(RelationValue::Topological(Topological::Adjacent));
        }
        truth.push(RelationValue::Distance(distance_bucket(centre_dist(a, b))));
        self.finish_relations(truth)
    }

    fn localize(&self, q: &ReasonerQuery) -> ReasonerReply {
        let obs = q.context.observation.as_ref().expect("validated");
        let truth = self.world.scene.room_label_at(obs.position).map(str::to_owned);
        let honest = self.honest(self.knobs.localize_acc);
        let region = if honest {
            truth
        } else {
            let others: Vec<&String> = q
                .context
                .candidates
                .iter()
                .filter(|c| Some(c.as_str()) != truth.as_deref())
                .collect();
            if others.is_empty() {
                None
            } else {
                Some(others[self.pick(others.len())].clone())
            }
        };
        ReasonerReply::Localize {
            region,
            confidence: self.knobs.localize_acc,
        }
    }

    fn verify(&self, q: &ReasonerQuery) -> ReasonerReply {
        let det = q.context.detection.as_ref().expect("validated");
        let label = q.context.target.as_deref().unwrap_or(&det.label);
        let truth = self
            .world
            .scene
            .objects
            .iter()
            .any(|o| o.label == label && o.position.distance(det.position) <= VERIFY_RADIUS);
        let honest = self.honest(self.knobs.verify_acc);
        ReasonerReply::Verify {
            affirm: truth == honest,
            confidence: self.knobs.verify_acc,
        }
    }

    fn redetect(&self, q: &ReasonerQuery) -> ReasonerReply {
        let obs = q.context.observation.as_ref().expect("validated");
        let label = q.context.target.as_deref().expect("validated");
        let pose = Pose {
            position: obs.position,
            heading: obs.heading,
        };
        let truth = self
            .world
            .scene
            .objects
            .iter()
            .filter(|o| o.label == label && in_view_wedge(pose, o.position))
            .filter(|o| {
                let s = Segment::new(pose.position, o.position);
                !self.walls.iter().any(|w| w.intersects(&s))
            })
            .map(|o| o.position)
            .min_by(|a, b| a.distance(pose.position).total_cmp(&b.distance(pose.position)));
        let honest = self.honest(self.knobs.redetect_acc);
        let position = if honest { truth } else { None };
        ReasonerReply::Redetect {
            position,
            confidence: if position.is_some() { self.knobs.redetect_acc } else { 0.0 },
        }
    }

    fn similarity(&self, q: &ReasonerQuery) -> ReasonerReply {
        let obs = q.context.observation.as_ref().expect("validated");
        let at = obs.focus.unwrap_or(obs.position);
        let scale = self.knobs.similarity_scale;
        let mut terms = Vec::new();
        if let Some(r) = q.context.region_cue.as_deref().filter(|s| !s.is_empty()) {
            terms.push(self.distance_to_region(at, r));
        }
        if let Some(o) = q.context.object_cue.as_deref().filter(|s| !s.is_empty()) {
            terms.push(self.distance_to_object(at, o));
        }
        let similarity = if terms.is_empty() {
            0.0
        } else {
            terms.iter().map(|d| d.map_or(0.0, |d| (-d / scale).exp())).sum::<f64>() / terms.len() as f64
        };
        ReasonerReply::Similarity { similarity }
    }
}

impl Reasoner for OracleReasoner {
    fn query(&self, q: &ReasonerQuery) -> Result<ReasonerReply, ReasonerError> {
        q.validate()?;
        Ok(match q.kind {
            QueryKind::Localize => self.localize(q),
            QueryKind::InferRelationObject => self.relation_object(q),
            QueryKind::InferRelationRoom => self.relation_room(q),
            QueryKind::VerifyDetection => self.verify(q),
            QueryKind::Redetect => self.redetect(q),
            QueryKind::Similarity => self.similarity(q),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn buckets_cover_the_reals() {
        assert_eq!(distance_bucket(0.4), DistanceInterval { lo: 0.0, hi: 1.0 });
        assert_eq!(distance_bucket(1.4), DistanceInterval { lo: 0.0, hi: 2.0 });
        assert_eq!(distance_bucket(3.0), DistanceInterval { lo: 2.0, hi: 5.0 });
        assert_eq!(distance_bucket(9.0), DistanceInterval { lo: 5.0, hi: 100.0 });
    }

    #[test]
    fn directions_are_agent_relative() {
        let viewer = Pose {
            position: Point2::new(0.0, 0.0),
            heading: 0.0,
        };
        let anchor = Point2::new(3.0, 0.0);
        assert_eq!(directional_relation(viewer, anchor, Point2::new(3.0, 1.0)), Directional::LeftOf);
        assert_eq!(directional_relation(viewer, anchor, Point2::new(3.0, -1.0)), Directional::RightOf);
        assert_eq!(directional_relation(viewer, anchor, Point2::new(4.0, 0.0)), Directional::Behind);
        assert_eq!(directional_relation(viewer, anchor, Point2::new(2.0, 0.2)), Directional::InFrontOf);
    }
}
