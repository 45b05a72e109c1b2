use super::{CellIndex, CellState, OccupancyGrid};
use crate::geometry::Point2;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

/// Clusters smaller than this are discarded as sensing slivers.
pub const MIN_FRONTIER_CELLS: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Frontier {
    pub cells: Vec<CellIndex>,
    /// World position of the medoid cell.
    pub midpoint: Point2,
    pub size: usize,
}

pub fn is_frontier_cell(grid: &OccupancyGrid, c: CellIndex) -> bool {
    grid.get(c) == CellState::Free && grid.neighbours4(c).any(|n| grid.get(n) == CellState::Unknown)
}

/// Member cell minimising the summed Euclidean distance to the others; ties
/// go to the smaller `(column, row)`.
pub fn medoid(cells: &[CellIndex]) -> CellIndex {
    let mut best = (f64::INFINITY, cells[0]);
    for &a in cells {
        let total: f64 = cells
            .iter()
            .map(|&b| {
                let dx = a.0 as f64 - b.0 as f64;
                let dy = a.1 as f64 - b.1 as f64;
                (dx * dx + dy * dy).sqrt()
            })
            .sum();
        if total < best.0 - 1e-9 || ((total - best.0).abs() <= 1e-9 && a < best.1) {
            best = (total, a);
        }
    }
    best.1
}

/// Free cells bordering unknown space, grouped by 8-connectivity. Largest
/// clusters come first, then by midpoint `(x, y)`.
pub fn extract_frontiers(grid: &OccupancyGrid) -> Vec<Frontier> {
    let mut member = vec![false; grid.width * grid.height];
    for (c, _) in grid.cells() {
        if is_frontier_cell(grid, c) {
            member[grid.index(c)] = true;
        }
    }
    let mut seen = vec![false; member.len()];
    let mut out = Vec::new();
    for (c, _) in grid.cells() {
        let k = grid.index(c);
        if !member[k] || seen[k] {
            continue;
        }
        seen[k] = true;
        let mut cells = Vec::new();
        let mut queue = VecDeque::from([c]);
        while let Some(cur) = queue.pop_front() {
            cells.push(cur);
            for n in grid.neighbours8(cur) {
                let nk = grid.index(n);
                if member[nk] && !seen[nk] {
                    seen[nk] = true;
                    queue.push_back(n);
                }
            }
        }
        if cells.len() < MIN_FRONTIER_CELLS {
            continue;
        }
        cells.sort();
        let midpoint = grid.center(medoid(&cells));
        out.push(Frontier {
            size: cells.len(),
            cells,
            midpoint,
        });
    }
    out.sort_by(|a, b| {
        b.size
            .cmp(&a.size)
            .then(a.midpoint.x.total_cmp(&b.midpoint.x))
            .then(a.midpoint.y.total_cmp(&b.midpoint.y))
    });
    out
}
