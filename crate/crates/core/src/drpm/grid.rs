//! Top-down occupancy grid.

use crate::geometry::Point2;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellState {
    Free,
    Occupied,
    Unknown,
}

/// Cell coordinate `(column, row)`.
pub type CellIndex = (usize, usize);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OccupancyGrid {
    pub resolution: f64,
    pub width: usize,
    pub height: usize,
    /// World coordinates of the lower-left corner of cell (0, 0).
    pub origin: Point2,
    cells: Vec<CellState>,
}

impl OccupancyGrid {
    /// All-unknown grid covering `width_m × height_m` from `origin`.
    pub fn new(origin: Point2, width_m: f64, height_m: f64, resolution: f64) -> Self {
        assert!(resolution > 0.0, "resolution must be positive");
        let width = (width_m / resolution).ceil().max(1.0) as usize;
        let height = (height_m / resolution).ceil().max(1.0) as usize;
        Self {
            resolution,
            width,
            height,
            origin,
            cells: vec![CellState::Unknown; width * height],
        }
    }

    /// Grid from rows of characters: `.` free, `#` occupied, `?` unknown.
    /// The first row is the top (highest `y`).
    pub fn from_ascii(rows: &[&str], resolution: f64) -> Self {
        let height = rows.len();
        let width = rows.iter().map(|r| r.chars().count()).max().unwrap_or(0);
        let mut g = Self {
            resolution,
            width,
            height,
            origin: Point2::new(0.0, 0.0),
            cells: vec![CellState::Unknown; width * height],
        };
        for (r, row) in rows.iter().enumerate() {
            let j = height - 1 - r;
            for (i, ch) in row.chars().enumerate() {
                let s = match ch {
                    '.' => CellState::Free,
                    '#' => CellState::Occupied,
                    _ => CellState::Unknown,
                };
                g.set((i, j), s);
            }
        }
        g
    }

    pub fn index(&self, (i, j): CellIndex) -> usize {
        j * self.width + i
    }

    pub fn get(&self, c: CellIndex) -> CellState {
        self.cells[self.index(c)]
    }

    pub fn set(&mut self, c: CellIndex, s: CellState) {
        let k = self.index(c);
        self.cells[k] = s;
    }

    pub fn in_bounds(&self, i: isize, j: isize) -> bool {
        i >= 0 && j >= 0 && (i as usize) < self.width && (j as usize) < self.height
    }

    pub fn cell_of(&self, p: Point2) -> Option<CellIndex> {
        let fx = (p.x - self.origin.x) / self.resolution;
        let fy = (p.y - self.origin.y) / self.resolution;
        if fx < 0.0 || fy < 0.0 {
            return None;
        }
        let (i, j) = (fx.floor() as usize, fy.floor() as usize);
        (i < self.width && j < self.height).then_some((i, j))
    }

    pub fn center(&self, (i, j): CellIndex) -> Point2 {
        Point2::new(
            self.origin.x + (i as f64 + 0.5) * self.resolution,
            self.origin.y + (j as f64 + 0.5) * self.resolution,
        )
    }

    pub fn count(&self, s: CellState) -> usize {
        self.cells.iter().filter(|&&c| c == s).count()
    }

    pub fn cells(&self) -> impl Iterator<Item = (CellIndex, CellState)> + '_ {
        self.cells
            .iter()
            .enumerate()
            .map(move |(k, &s)| ((k % self.width, k / self.width), s))
    }

    /// In-bounds 4-neighbours.
    pub fn neighbours4(&self, (i, j): CellIndex) -> impl Iterator<Item = CellIndex> + '_ {
        [(1isize, 0isize), (-1, 0), (0, 1), (0, -1)]
            .into_iter()
            .map(move |(di, dj)| (i as isize + di, j as isize + dj))
            .filter(|&(a, b)| self.in_bounds(a, b))
            .map(|(a, b)| (a as usize, b as usize))
    }

    /// In-bounds 8-neighbours.
    pub fn neighbours8(&self, (i, j): CellIndex) -> impl Iterator<Item = CellIndex> + '_ {
        (-1isize..=1)
            .flat_map(|dj| (-1isize..=1).map(move |di| (di, dj)))
            .filter(|&(di, dj)| di != 0 || dj != 0)
            .map(move |(di, dj)| (i as isize + di, j as isize + dj))
            .filter(|&(a, b)| self.in_bounds(a, b))
            .map(|(a, b)| (a as usize, b as usize))
    }

    /// Whether any 8-neighbour is occupied.
    pub fn near_occupied(&self, c: CellIndex) -> bool {
        self.neighbours8(c).any(|n| self.get(n) == CellState::Occupied)
    }

    /// Cells crossed by the segment `a -> b`, in order (grid traversal).
    pub fn traverse(&self, a: Point2, b: Point2) -> Vec<CellIndex> {
        let res = self.resolution;
        let (ax, ay) = ((a.x - self.origin.x) / res, (a.y - self.origin.y) / res);
        let (bx, by) = ((b.x - self.origin.x) / res, (b.y - self.origin.y) / res);
        let (mut i, mut j) = (ax.floor() as isize, ay.floor() as isize);
        let (ei, ej) = (bx.floor() as isize, by.floor() as isize);
        let (dx, dy) = (bx - ax, by - ay);
        let step_i = if dx > 0.0 { 1 } else { -1 };
        let step_j = if dy > 0.0 { 1 } else { -1 };
        let t_delta_x = if dx != 0.0 { (1.0 / dx).abs() } else { f64::INFINITY };
        let t_delta_y = if dy != 0.0 { (1.0 / dy).abs() } else { f64::INFINITY };
        let mut t_max_x = if dx > 0.0 {
            ((i + 1) as f64 - ax) / dx
        } else if dx < 0.0 {
            (i as f64 - ax) / dx
        } else {
            f64::INFINITY
        };
        let mut t_max_y = if dy > 0.0 {
            ((j + 1) as f64 - ay) / dy
        } else if dy < 0.0 {
            (j as f64 - ay) / dy
        } else {
            f64::INFINITY
        };
        let mut out = Vec::new();
        let limit = (ei - i).abs() + (ej - j).abs() + 2;
        for _ in 0..=limit {
            if self.in_bounds(i, j) {
                out.push((i as usize, j as usize));
            }
            if i == ei && j == ej {
                break;
            }
            if t_max_x < t_max_y {
                i += step_i;
                t_max_x += t_delta_x;
            } else {
                j += step_j;
                t_max_y += t_delta_y;
            }
        }
        out
    }
}
