//! Procedural floor plans whose object layout follows a relational prior.

use super::{Bounds, Door, EpisodeSpec, Obstacle, Room, Scene, SceneObject, World, DEFAULT_D_S, MAX_STEPS};
use crate::dsrg::{Dsrg, NodeKind, RelationValue, Topological};
use crate::error::SimError;
use crate::geometry::{Point2, Rect};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

const MIN_ROOM_SIDE: f64 = 2.5;
const LAYOUT_STEP: f64 = 0.5;
const DOOR_WIDTH: f64 = 1.0;
const MIN_SHARED_WALL: f64 = 1.5;
const EXTRA_DOOR_RATE: f64 = 0.3;
const WALL_MARGIN: f64 = 0.5;
const OBJECT_SPACING: f64 = 0.6;
const FURNITURE_CLEARANCE: f64 = 1.0;
const OBJECT_RADIUS: f64 = 0.2;

const EXTRA_ROOMS: [&str; 8] = [
    "kitchen",
    "living room",
    "dining room",
    "office",
    "laundry room",
    "garage",
    "closet",
    "study",
];

fn room_pool(label: &str) -> &'static [&'static str] {
    match label {
        "kitchen" => &["sink", "refrigerator", "stove", "microwave"],
        "living room" => &["sofa", "tv", "coffee table", "plant"],
        "bedroom" => &["bed", "wardrobe", "lamp", "nightstand"],
        "dining room" => &["dining table", "chair", "cabinet"],
        "office" | "study" => &["desk", "chair", "bookshelf"],
        "laundry room" => &["washing machine", "dryer", "basket"],
        "hallway" => &["shoe rack", "plant", "coat hanger"],
        "bathroom" => &["mirror"],
        "garage" => &["car", "toolbox", "bicycle"],
        _ => &["chair", "plant"],
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SceneGenConfig {
    pub rooms_min: usize,
    pub rooms_max: usize,
    /// Distractor objects per room.
    pub objects_per_room: usize,
    /// Probability that each prior relation is deliberately broken.
    pub prior_violation_rate: f64,
    /// Probability that a room holds a furniture block.
    pub furniture_rate: f64,
    /// Mean floor area per room, square meters.
    pub room_area: f64,
    pub d_s: f64,
    pub max_steps: u32,
}

impl Default for SceneGenConfig {
    fn default() -> Self {
        Self {
            rooms_min: 4,
            rooms_max: 7,
            objects_per_room: 2,
            prior_violation_rate: 0.1,
            furniture_rate: 0.5,
            room_area: 14.0,
            d_s: DEFAULT_D_S,
            max_steps: MAX_STEPS,
        }
    }
}

impl SceneGenConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: String| Err(SimError::ConfigInvalid(m));
        if self.rooms_min < 2 || self.rooms_min > self.rooms_max {
            return bad(format!("rooms_min {} / rooms_max {} must satisfy 2 <= min <= max", self.rooms_min, self.rooms_max));
        }
        if self.rooms_max > 3 + EXTRA_ROOMS.len() {
            return bad(format!("rooms_max {} exceeds the label pool", self.rooms_max));
        }
        for (n, v) in [("prior_violation_rate", self.prior_violation_rate), ("furniture_rate", self.furniture_rate)] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{n} = {v} not in [0, 1]"));
            }
        }
        if !(self.room_area >= MIN_ROOM_SIDE * MIN_ROOM_SIDE) {
            return bad(format!("room_area {} too small", self.room_area));
        }
        if !(self.d_s > 0.0) || self.max_steps == 0 {
            return bad("d_s and max_steps must be positive".into());
        }
        Ok(())
    }
}

fn snap(v: f64, step: f64) -> f64 {
    (v / step).round() * step
}

/// Binary space partition into `n` rectangles with sides of at least
/// `MIN_ROOM_SIDE`, cut on a `LAYOUT_STEP` lattice.
fn partition(rng: &mut ChaCha8Rng, width: f64, height: f64, n: usize) -> Vec<Rect> {
    let mut rects = vec![Rect::new(Point2::new(0.0, 0.0), Point2::new(width, height))];
    while rects.len() < n {
        let mut order: Vec<usize> = (0..rects.len()).collect();
        order.sort_by(|&a, &b| rects[b].area().total_cmp(&rects[a].area()).then(a.cmp(&b)));
        let Some(&k) = order
            .iter()
            .find(|&&k| rects[k].width().max(rects[k].height()) >= 2.0 * MIN_ROOM_SIDE)
        else {
            break;
        };
        let r = rects.remove(k);
        let vertical_cut = r.width() >= r.height();
        let (lo, len) = if vertical_cut { (r.min.x, r.width()) } else { (r.min.y, r.height()) };
        let slots = ((len - 2.0 * MIN_ROOM_SIDE) / LAYOUT_STEP).round() as usize;
        let cut = lo + MIN_ROOM_SIDE + LAYOUT_STEP * rng.random_range(0..=slots) as f64;
        let (a, b) = if vertical_cut {
            (
                Rect::new(r.min, Point2::new(cut, r.max.y)),
                Rect::new(Point2::new(cut, r.min.y), r.max),
            )
        } else {
            (
                Rect::new(r.min, Point2::new(r.max.x, cut)),
                Rect::new(Point2::new(r.min.x, cut), r.max),
            )
        };
        rects.push(a);
        rects.push(b);
    }
    rects.sort_by(|a, b| a.min.y.total_cmp(&b.min.y).then(a.min.x.total_cmp(&b.min.x)));
    rects
}

/// Shared wall between two rooms as `(vertical, fixed coordinate, lo, hi)`.
fn shared_wall(a: &Rect, b: &Rect) -> Option<(bool, f64, f64, f64)> {
    let eq = |x: f64, y: f64| (x - y).abs() < 1e-9;
    if eq(a.max.x, b.min.x) || eq(b.max.x, a.min.x) {
        let x = if eq(a.max.x, b.min.x) { a.max.x } else { a.min.x };
        let (lo, hi) = (a.min.y.max(b.min.y), a.max.y.min(b.max.y));
        return (hi - lo >= MIN_SHARED_WALL).then_some((true, x, lo, hi));
    }
    if eq(a.max.y, b.min.y) || eq(b.max.y, a.min.y) {
        let y = if eq(a.max.y, b.min.y) { a.max.y } else { a.min.y };
        let (lo, hi) = (a.min.x.max(b.min.x), a.max.x.min(b.max.x));
        return (hi - lo >= MIN_SHARED_WALL).then_some((false, y, lo, hi));
    }
    None
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    parent[i] = r;
    r
}

fn connect(rng: &mut ChaCha8Rng, rects: &[Rect]) -> Vec<Door> {
    let mut walls = Vec::new();
    for i in 0..rects.len() {
        for j in i + 1..rects.len() {
            if let Some(w) = shared_wall(&rects[i], &rects[j]) {
                walls.push((i, j, w));
            }
        }
    }
    walls.shuffle(rng);
    let mut parent: Vec<usize> = (0..rects.len()).collect();
    let mut doors = Vec::new();
    for (i, j, (vertical, fixed, lo, hi)) in walls {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        let extra: f64 = rng.random();
        if ri == rj && extra >= EXTRA_DOOR_RATE {
            continue;
        }
        parent[ri] = rj;
        let slots = ((hi - lo - DOOR_WIDTH - 0.5) / 0.25).floor().max(0.0) as usize;
        let start = lo + 0.25 + 0.25 * rng.random_range(0..=slots) as f64;
        let (a, b) = if vertical {
            (Point2::new(fixed, start), Point2::new(fixed, start + DOOR_WIDTH))
        } else {
            (Point2::new(start, fixed), Point2::new(start + DOOR_WIDTH, fixed))
        };
        doors.push(Door { rooms: [i, j], a, b });
    }
    doors.sort_by(|x, y| x.rooms.cmp(&y.rooms));
    doors
}

struct Placer<'a> {
    rng: &'a mut ChaCha8Rng,
    rooms: &'a [Rect],
    obstacles: &'a [Obstacle],
    objects: Vec<SceneObject>,
}

impl Placer<'_> {
    fn clear(&self, p: Point2) -> bool {
        self.objects.iter().all(|o| o.position.distance(p) >= OBJECT_SPACING)
            && self.obstacles.iter().all(|o| {
                let r = Rect::new(o.min, o.max);
                let cx = p.x.clamp(r.min.x, r.max.x);
                let cy = p.y.clamp(r.min.y, r.max.y);
                p.distance(Point2::new(cx, cy)) > 0.4
            })
    }

    /// Random clear point in one of `rooms` satisfying `ok`.
    fn sample(&mut self, rooms: &[usize], ok: &dyn Fn(Point2) -> bool) -> Option<Point2> {
        if rooms.is_empty() {
            return None;
        }
        for _ in 0..300 {
            let r = self.rooms[rooms[self.rng.random_range(0..rooms.len())]];
            let x = self.rng.random_range(r.min.x + WALL_MARGIN..=r.max.x - WALL_MARGIN);
            let y = self.rng.random_range(r.min.y + WALL_MARGIN..=r.max.y - WALL_MARGIN);
            let p = Point2::new(snap(x, 0.05), snap(y, 0.05));
            if self.clear(p) && ok(p) {
                return Some(p);
            }
        }
        None
    }

    fn put(&mut self, label: &str, p: Point2) {
        self.objects.push(SceneObject {
            label: label.to_owned(),
            position: p,
            radius: OBJECT_RADIUS,
        });
    }
}

/// Builds a scene and episode from `seed`. Each prior relation between the
/// target and its neighbours holds with probability `1 - prior_violation_rate`.
pub fn generate_scene(seed: u64, cfg: &SceneGenConfig, prior: &Dsrg) -> Result<Scene, SimError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = cfg.prior_violation_rate;
    let n = rng.random_range(cfg.rooms_min..=cfg.rooms_max);
    let area = n as f64 * cfg.room_area;
    let aspect: f64 = rng.random_range(1.0..1.5);
    let width = snap((area * aspect).sqrt(), LAYOUT_STEP).max(2.0 * MIN_ROOM_SIDE);
    let height = snap(area / width, LAYOUT_STEP).max(MIN_ROOM_SIDE);
    let rects = partition(&mut rng, width, height, n);
    let n = rects.len();
    let doors = connect(&mut rng, &rects);
    let door_between =
        |a: usize, b: usize| doors.iter().any(|d| d.rooms.contains(&a) && d.rooms.contains(&b));

    let target_label = prior.target_label().to_owned();
    let target_region = prior.target_region().map(|n| n.label.clone());
    let mut region_labels: Vec<String> = prior
        .nodes()
        .filter(|n| n.kind == NodeKind::Region)
        .map(|n| n.label.clone())
        .collect();
    if let Some(t) = &target_region {
        region_labels.retain(|l| l != t);
        region_labels.insert(0, t.clone());
    }
    let mut extra: Vec<String> = EXTRA_ROOMS
        .iter()
        .map(|s| s.to_string())
        .filter(|s| !region_labels.contains(s))
        .collect();
    extra.shuffle(&mut rng);
    region_labels.extend(extra);
    region_labels.truncate(n);

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut labels: Vec<Option<String>> = vec![None; n];
    let anchor_room = order[0];
    labels[anchor_room] = region_labels.first().cloned();
    if let Some(t) = &target_region {
        for l in region_labels.iter().skip(1) {
            let linked = prior.edges().any(|e| {
                let ends = [prior.node(&e.src), prior.node(&e.dst)].map(|n| n.map(|n| n.label.as_str()));
                matches!(e.value, RelationValue::Topological(Topological::ConnectedTo | Topological::Adjacent))
                    && ends.contains(&Some(t.as_str()))
                    && ends.contains(&Some(l.as_str()))
            });
            if !linked {
                continue;
            }
            let hold = rng.random::<f64>() >= v;
            let free: Vec<usize> = order.iter().copied().filter(|&i| labels[i].is_none()).collect();
            let pick = free
                .iter()
                .copied()
                .find(|&i| door_between(anchor_room, i) == hold)
                .or_else(|| free.first().copied());
            if let Some(i) = pick {
                labels[i] = Some(l.clone());
            }
        }
    }
    let unused: Vec<String> = region_labels
        .iter()
        .filter(|l| !labels.iter().flatten().any(|x| x == *l))
        .cloned()
        .collect();
    let mut remaining = unused.into_iter();
    for slot in labels.iter_mut() {
        if slot.is_none() {
            *slot = remaining.next();
        }
    }
    let rooms: Vec<Room> = rects
        .iter()
        .zip(labels)
        .map(|(r, l)| Room {
            label: l.unwrap_or_else(|| "room".into()),
            min: r.min,
            max: r.max,
        })
        .collect();
    let rooms_labelled = |l: &str| -> Vec<usize> { (0..n).filter(|&i| rooms[i].label == l).collect() };

    let target_room = if target_region.is_some() && rng.random::<f64>() >= v {
        anchor_room
    } else {
        let others: Vec<usize> = (0..n).filter(|&i| i != anchor_room || target_region.is_none()).collect();
        others[rng.random_range(0..others.len())]
    };

    let mut obstacles = Vec::new();
    for r in &rects {
        if rng.random::<f64>() >= cfg.furniture_rate {
            continue;
        }
        let w = [0.5, 0.75, 1.0][rng.random_range(0..3)];
        let h = [0.5, 0.75, 1.0][rng.random_range(0..3)];
        let span_x = r.width() - 2.0 * FURNITURE_CLEARANCE - w;
        let span_y = r.height() - 2.0 * FURNITURE_CLEARANCE - h;
        if span_x < 0.0 || span_y < 0.0 {
            continue;
        }
        let x = r.min.x + FURNITURE_CLEARANCE + snap(rng.random_range(0.0..=span_x), 0.25).min(span_x);
        let y = r.min.y + FURNITURE_CLEARANCE + snap(rng.random_range(0.0..=span_y), 0.25).min(span_y);
        obstacles.push(Obstacle {
            min: Point2::new(x, y),
            max: Point2::new(x + w, y + h),
        });
    }

    let mut placer = Placer {
        rng: &mut rng,
        rooms: &rects,
        obstacles: &obstacles,
        objects: Vec::new(),
    };
    let target_pos = placer
        .sample(&[target_room], &|_| true)
        .ok_or_else(|| SimError::ConfigInvalid("no room for the target".into()))?;
    placer.put(&target_label, target_pos);

    let mut related: Vec<_> = prior.target_neighbours(NodeKind::Object).into_iter().map(|(n, _)| n.clone()).collect();
    related.sort_by(|a, b| a.id.cmp(&b.id));
    for o in related {
        let edges: Vec<_> = prior.incident(&o.id).cloned().collect();
        let inside = edges.iter().find_map(|e| match (e.value, e.src == o.id) {
            (RelationValue::Topological(Topological::Inside), true) | (RelationValue::Topological(Topological::Contains), false) => {
                prior.node(e.other(&o.id)?).filter(|n| n.kind == NodeKind::Region).map(|n| n.label.clone())
            }
            _ => None,
        });
        let interval = edges.iter().find_map(|e| match e.value {
            RelationValue::Distance(iv) if e.touches(prior.target_id()) => Some(iv),
            _ => None,
        });
        let rooms_for = match &inside {
            Some(l) if placer.rng.random::<f64>() >= v => rooms_labelled(l),
            Some(l) => (0..n).filter(|&i| &rooms[i].label != l).collect(),
            None => vec![target_room],
        };
        let dist_ok: Box<dyn Fn(Point2) -> bool> = match interval {
            Some(iv) if placer.rng.random::<f64>() >= v => Box::new(move |p: Point2| iv.contains(p.distance(target_pos))),
            Some(iv) => Box::new(move |p: Point2| !iv.contains(p.distance(target_pos))),
            None => Box::new(|_| true),
        };
        let p = placer
            .sample(&rooms_for, &*dist_ok)
            .or_else(|| placer.sample(&rooms_for, &|_| true))
            .or_else(|| placer.sample(&(0..n).collect::<Vec<_>>(), &|_| true));
        if let Some(p) = p {
            placer.put(&o.label, p);
        }
    }

    for (i, room) in rooms.iter().enumerate() {
        let mut pool: Vec<&str> = room_pool(&room.label).iter().copied().filter(|l| *l != target_label).collect();
        let first = pool.first().copied();
        pool.shuffle(placer.rng);
        if room.label == "kitchen" {
            if let Some(f) = first {
                pool.retain(|l| *l != f);
                pool.insert(0, f);
            }
        }
        for label in pool.into_iter().take(cfg.objects_per_room) {
            if let Some(p) = placer.sample(&[i], &|_| true) {
                placer.put(label, p);
            }
        }
    }
    let objects = std::mem::take(&mut placer.objects);

    let mut scene = Scene {
        seed,
        bounds: Bounds { width, height },
        rooms,
        doors,
        objects,
        obstacles,
        episode: EpisodeSpec {
            start: Point2::new(0.0, 0.0),
            heading: 0.0,
            target_label,
            d_s: cfg.d_s,
            shortest_path_m: 0.0,
            max_steps: cfg.max_steps,
        },
    };
    let world = World::new(scene.clone());
    let targets = scene.target_positions();
    let field = world
        .nav
        .distance_field(|c| targets.iter().any(|t| t.distance(c) <= cfg.d_s).then_some(0.0));
    let mut start_rooms: Vec<usize> = (0..n).filter(|&i| i != target_room).collect();
    start_rooms.shuffle(&mut rng);
    for &room in &start_rooms {
        let r = rects[room];
        for _ in 0..100 {
            let x = snap(rng.random_range(r.min.x + WALL_MARGIN..=r.max.x - WALL_MARGIN), 0.05);
            let y = snap(rng.random_range(r.min.y + WALL_MARGIN..=r.max.y - WALL_MARGIN), 0.05);
            let p = Point2::new(x, y);
            if !world.is_free(p) || world.nav.cell_of(p).is_some_and(|(i, j)| !world.nav.passable(i, j)) {
                continue;
            }
            let Some(d) = world.nav.field_at(&field, p) else { continue };
            if d <= 0.0 {
                continue;
            }
            scene.episode.start = p;
            scene.episode.heading = 30.0 * rng.random_range(0..12) as f64;
            scene.episode.shortest_path_m = d;
            return Ok(scene);
        }
    }
    Err(SimError::ConfigInvalid(format!("seed {seed}: no reachable start pose")))
}
