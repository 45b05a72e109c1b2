//! Scene description (the JSON scene file) and its derived geometry.

use crate::geometry::{Point2, Rect, Segment};
use serde::{Deserialize, Serialize};
use std::collections::BinaryHeap;
use std::cmp::Reverse;

use super::{AGENT_RADIUS, CELL_SIZE};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub width: f64,
    pub height: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Room {
    pub label: String,
    pub min: Point2,
    pub max: Point2,
}

impl Room {
    pub fn rect(&self) -> Rect {
        Rect::new(self.min, self.max)
    }
}

/// A 1 m opening in the wall shared by two rooms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Door {
    pub rooms: [usize; 2],
    pub a: Point2,
    pub b: Point2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneObject {
    pub label: String,
    pub position: Point2,
    pub radius: f64,
}

/// Furniture block that blocks motion and sight.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Obstacle {
    pub min: Point2,
    pub max: Point2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeSpec {
    pub start: Point2,
    pub heading: f64,
    pub target_label: String,
    pub d_s: f64,
    pub shortest_path_m: f64,
    pub max_steps: u32,
}

/// Ground-truth world as stored in a scene file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub seed: u64,
    pub bounds: Bounds,
    pub rooms: Vec<Room>,
    pub doors: Vec<Door>,
    pub objects: Vec<SceneObject>,
    #[serde(default)]
    pub obstacles: Vec<Obstacle>,
    pub episode: EpisodeSpec,
}

impl Scene {
    pub fn room_index_at(&self, p: Point2) -> Option<usize> {
        self.rooms
            .iter()
            .position(|r| r.rect().contains_half_open(p))
            .or_else(|| self.rooms.iter().position(|r| r.rect().contains(p)))
    }

    pub fn room_label_at(&self, p: Point2) -> Option<&str> {
        self.room_index_at(p).map(|i| self.rooms[i].label.as_str())
    }

    pub fn target_positions(&self) -> Vec<Point2> {
        self.objects
            .iter()
            .filter(|o| o.label == self.episode.target_label)
            .map(|o| o.position)
            .collect()
    }

    /// Distinct object labels, sorted.
    pub fn vocabulary(&self) -> Vec<String> {
        let mut v: Vec<String> = self.objects.iter().map(|o| o.label.clone()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Wall segments with door openings removed. Each shared boundary is
    /// emitted once: every room contributes its right and top edges, and
    /// rooms on the outer left/bottom boundary contribute those edges too.
    pub fn walls(&self) -> Vec<Segment> {
        let mut out = Vec::new();
        for r in &self.rooms {
            let (x0, y0, x1, y1) = (r.min.x, r.min.y, r.max.x, r.max.y);
            let mut edges = vec![
                Segment::new(Point2::new(x1, y0), Point2::new(x1, y1)),
                Segment::new(Point2::new(x0, y1), Point2::new(x1, y1)),
            ];
            if x0 <= 1e-9 {
                edges.push(Segment::new(Point2::new(x0, y0), Point2::new(x0, y1)));
            }
            if y0 <= 1e-9 {
                edges.push(Segment::new(Point2::new(x0, y0), Point2::new(x1, y0)));
            }
            for e in edges {
                out.extend(self.subtract_doors(e));
            }
        }
        out
    }

    fn subtract_doors(&self, e: Segment) -> Vec<Segment> {
        let vertical = (e.a.x - e.b.x).abs() < 1e-9;
        let (fixed, lo, hi) = if vertical {
            (e.a.x, e.a.y.min(e.b.y), e.a.y.max(e.b.y))
        } else {
            (e.a.y, e.a.x.min(e.b.x), e.a.x.max(e.b.x))
        };
        let mut gaps: Vec<(f64, f64)> = self
            .doors
            .iter()
            .filter_map(|d| {
                let on_line = if vertical {
                    (d.a.x - fixed).abs() < 1e-9 && (d.b.x - fixed).abs() < 1e-9
                } else {
                    (d.a.y - fixed).abs() < 1e-9 && (d.b.y - fixed).abs() < 1e-9
                };
                if !on_line {
                    return None;
                }
                let (g0, g1) = if vertical { (d.a.y, d.b.y) } else { (d.a.x, d.b.x) };
                Some((g0.min(g1), g0.max(g1)))
            })
            .collect();
        gaps.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut pieces = Vec::new();
        let mut cursor = lo;
        for (g0, g1) in gaps {
            if g1 <= cursor || g0 >= hi {
                continue;
            }
            if g0 > cursor {
                pieces.push((cursor, g0));
            }
            cursor = cursor.max(g1);
        }
        if cursor < hi {
            pieces.push((cursor, hi));
        }
        pieces
            .into_iter()
            .filter(|(a, b)| b - a > 1e-9)
            .map(|(a, b)| {
                if vertical {
                    Segment::new(Point2::new(fixed, a), Point2::new(fixed, b))
                } else {
                    Segment::new(Point2::new(a, fixed), Point2::new(b, fixed))
                }
            })
            .collect()
    }
}

/// A scene plus derived geometry: blocking segments and a ground-truth
/// traversability grid used for geodesic distances.
#[derive(Clone, Debug)]
pub struct World {
    pub scene: Scene,
    /// Walls and furniture edges; everything that blocks motion and sight.
    pub blockers: Vec<Segment>,
    pub nav: NavGrid,
}

impl World {
    pub fn new(scene: Scene) -> Self {
        let mut blockers = scene.walls();
        for o in &scene.obstacles {
            blockers.extend(Rect::new(o.min, o.max).edges());
        }
        let nav = NavGrid::build(scene.bounds, &blockers, &scene.obstacles);
        Self { scene, blockers, nav }
    }

    pub fn line_of_sight(&self, a: Point2, b: Point2) -> bool {
        let s = Segment::new(a, b);
        !self.blockers.iter().any(|w| w.intersects(&s))
    }

    /// Whether a disc of the agent's radius centred at `p` is collision-free.
    pub fn is_free(&self, p: Point2) -> bool {
        let b = self.scene.bounds;
        p.x > 0.0
            && p.y > 0.0
            && p.x < b.width
            && p.y < b.height
            && !self
                .scene
                .obstacles
                .iter()
                .any(|o| Rect::new(o.min, o.max).contains(p))
            && self.blockers.iter().all(|w| w.distance_to_point(p) >= AGENT_RADIUS)
    }

    /// Geodesic distance (m) from `from` to the nearest point within `radius`
    /// of any goal, or `None` when disconnected.
    pub fn geodesic_to_goals(&self, from: Point2, goals: &[Point2], radius: f64) -> Option<f64> {
        let field = self.nav.distance_field(|c| goals.iter().any(|g| g.distance(c) <= radius).then_some(0.0));
        self.nav.field_at(&field, from)
    }
}

/// Ground-truth 8-connected traversability over `CELL_SIZE` cells.
#[derive(Clone, Debug)]
pub struct NavGrid {
    pub width: usize,
    pub height: usize,
    passable: Vec<bool>,
}

impl NavGrid {
    fn build(bounds: Bounds, blockers: &[Segment], obstacles: &[Obstacle]) -> Self {
        let width = (bounds.width / CELL_SIZE).ceil() as usize;
        let height = (bounds.height / CELL_SIZE).ceil() as usize;
        let mut passable = vec![false; width * height];
        for j in 0..height {
            for i in 0..width {
                let c = Self::center_of(i, j);
                let inside_block = obstacles.iter().any(|o| Rect::new(o.min, o.max).contains(c));
                let clear = blockers.iter().all(|w| w.distance_to_point(c) >= AGENT_RADIUS);
                passable[j * width + i] = clear && !inside_block;
            }
        }
        Self { width, height, passable }
    }

    pub fn center_of(i: usize, j: usize) -> Point2 {
        Point2::new((i as f64 + 0.5) * CELL_SIZE, (j as f64 + 0.5) * CELL_SIZE)
    }

    pub fn cell_of(&self, p: Point2) -> Option<(usize, usize)> {
        if p.x < 0.0 || p.y < 0.0 {
            return None;
        }
        let i = (p.x / CELL_SIZE) as usize;
        let j = (p.y / CELL_SIZE) as usize;
        (i < self.width && j < self.height).then_some((i, j))
    }

    pub fn passable(&self, i: usize, j: usize) -> bool {
        self.passable[j * self.width + i]
    }

    /// Multi-source Dijkstra. `seed` gives the initial cost of a passable
    /// cell centre, or `None` when the cell is not a source. Cells with
    /// clearance on both ends of a step are never separated by a wall, so
    /// only passability is checked.
    pub fn distance_field<F>(&self, seed: F) -> Vec<f64>
    where
        F: Fn(Point2) -> Option<f64>,
    {
        let n = self.width * self.height;
        let mut dist = vec![f64::INFINITY; n];
        let mut heap = BinaryHeap::new();
        for j in 0..self.height {
            for i in 0..self.width {
                if !self.passable(i, j) {
                    continue;
                }
                if let Some(c0) = seed(Self::center_of(i, j)) {
                    let k = j * self.width + i;
                    dist[k] = c0;
                    heap.push(Reverse((OrdF64(c0), k)));
                }
            }
        }
        while let Some(Reverse((OrdF64(d), k))) = heap.pop() {
            if d > dist[k] {
                continue;
            }
            let (i, j) = ((k % self.width) as isize, (k / self.width) as isize);
            for (di, dj) in NEIGHBOURS_8 {
                let (ni, nj) = (i + di, j + dj);
                if ni < 0 || nj < 0 || ni >= self.width as isize || nj >= self.height as isize {
                    continue;
                }
                let (ni, nj) = (ni as usize, nj as usize);
                if !self.passable(ni, nj) {
                    continue;
                }
                let diagonal = di != 0 && dj != 0;
                if diagonal
                    && (!self.passable((i + di) as usize, j as usize)
                        || !self.passable(i as usize, (j + dj) as usize))
                {
                    continue;
                }
                let step = if diagonal { CELL_SIZE * std::f64::consts::SQRT_2 } else { CELL_SIZE };
                let nk = nj * self.width + ni;
                let nd = d + step;
                if nd < dist[nk] {
                    dist[nk] = nd;
                    heap.push(Reverse((OrdF64(nd), nk)));
                }
            }
        }
        dist
    }

    /// Field value at an arbitrary point: best over the containing cell and
    /// its neighbours, plus the straight-line offset to that cell centre.
    pub fn field_at(&self, field: &[f64], p: Point2) -> Option<f64> {
        let (i, j) = self.cell_of(p)?;
        let mut best = f64::INFINITY;
        for dj in -1isize..=1 {
            for di in -1isize..=1 {
                let (ni, nj) = (i as isize + di, j as isize + dj);
                if ni < 0 || nj < 0 || ni >= self.width as isize || nj >= self.height as isize {
                    continue;
                }
                let k = nj as usize * self.width + ni as usize;
                let v = field[k] + p.distance(Self::center_of(ni as usize, nj as usize));
                best = best.min(v);
            }
        }
        best.is_finite().then_some(best)
    }
}

pub(crate) const NEIGHBOURS_8: [(isize, isize); 8] =
    [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)];

/// Total order wrapper for non-NaN floats in priority queues.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub(crate) struct OrdF64(pub f64);

impl Eq for OrdF64 {}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}
