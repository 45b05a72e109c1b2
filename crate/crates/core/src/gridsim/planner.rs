//! Grid A* with unknown space at double cost, path smoothing, and
//! compilation of the path into discrete actions.

use super::scene::{OrdF64, NEIGHBOURS_8};
use super::{Action, Pose, FORWARD_STEP, TURN_STEP};
use crate::drpm::{CellIndex, CellState, OccupancyGrid};
use crate::error::PlanError;
use crate::geometry::{heading_delta, normalize_heading, Point2};
use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Cost multiplier for traversing unknown cells.
pub const UNKNOWN_COST: f64 = 2.0;
/// Extra per-meter cost for cells touching an occupied cell.
pub const WALL_PENALTY: f64 = 3.0;

#[derive(Clone, Debug, PartialEq)]
pub struct Plan {
    pub actions: Vec<Action>,
    /// Smoothed waypoints, start first.
    pub waypoints: Vec<Point2>,
    /// Grid cells of the raw A* path.
    pub cells: Vec<CellIndex>,
    pub cost: f64,
}

impl Plan {
    pub fn forward_count(&self) -> usize {
        self.actions.iter().filter(|a| **a == Action::Forward).count()
    }
}

fn cell_cost(grid: &OccupancyGrid, c: CellIndex) -> f64 {
    let base = match grid.get(c) {
        CellState::Free => 1.0,
        CellState::Unknown => UNKNOWN_COST,
        CellState::Occupied => f64::INFINITY,
    };
    if grid.near_occupied(c) {
        base + WALL_PENALTY
    } else {
        base
    }
}

fn octile(a: CellIndex, b: CellIndex, res: f64) -> f64 {
    let dx = (a.0 as f64 - b.0 as f64).abs();
    let dy = (a.1 as f64 - b.1 as f64).abs();
    res * (dx.max(dy) + (std::f64::consts::SQRT_2 - 1.0) * dx.min(dy))
}

/// A* from the cell under `from` to any non-occupied cell within one cell
/// (Chebyshev) of the cell under `to`.
pub fn astar(grid: &OccupancyGrid, from: Point2, to: Point2) -> Result<(Vec<CellIndex>, f64), PlanError> {
    let start = grid.cell_of(from).ok_or(PlanError::Unreachable)?;
    let goal = grid.cell_of(to).ok_or(PlanError::Unreachable)?;
    let is_goal = |c: CellIndex| {
        (c.0 as isize - goal.0 as isize).abs() <= 1
            && (c.1 as isize - goal.1 as isize).abs() <= 1
            && grid.get(c) != CellState::Occupied
    };
    if is_goal(start) {
        return Ok((vec![start], 0.0));
    }
    let n = grid.width * grid.height;
    let mut g = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    let mut closed = vec![false; n];
    let res = grid.resolution;
    let mut heap = BinaryHeap::new();
    let sk = grid.index(start);
    g[sk] = 0.0;
    heap.push(Reverse((OrdF64(octile(start, goal, res)), sk)));
    while let Some(Reverse((_, k))) = heap.pop() {
        if closed[k] {
            continue;
        }
        closed[k] = true;
        let c = (k % grid.width, k / grid.width);
        if is_goal(c) {
            let mut cells = vec![c];
            let mut cur = k;
            while parent[cur] != usize::MAX {
                cur = parent[cur];
                cells.push((cur % grid.width, cur / grid.width));
            }
            cells.reverse();
            return Ok((cells, g[k]));
        }
        for (di, dj) in NEIGHBOURS_8 {
            let (ni, nj) = (c.0 as isize + di, c.1 as isize + dj);
            if !grid.in_bounds(ni, nj) {
                continue;
            }
            let nc = (ni as usize, nj as usize);
            if grid.get(nc) == CellState::Occupied {
                continue;
            }
            let diagonal = di != 0 && dj != 0;
            if diagonal
                && (grid.get((ni as usize, c.1)) == CellState::Occupied
                    || grid.get((c.0, nj as usize)) == CellState::Occupied)
            {
                continue;
            }
            let len = if diagonal { res * std::f64::consts::SQRT_2 } else { res };
            let nk = grid.index(nc);
            let ng = g[k] + len * cell_cost(grid, nc);
            if ng < g[nk] {
                g[nk] = ng;
                parent[nk] = k;
                heap.push(Reverse((OrdF64(ng + octile(nc, goal, res)), nk)));
            }
        }
    }
    Err(PlanError::Unreachable)
}

/// Whether the straight segment stays on free or unknown cells away from
/// walls. The first and last cells are exempt from the wall check.
fn clear_line(grid: &OccupancyGrid, a: Point2, b: Point2) -> bool {
    let cells = grid.traverse(a, b);
    let last = cells.len().saturating_sub(1);
    cells.iter().enumerate().all(|(k, &c)| {
        grid.get(c) != CellState::Occupied && (k == 0 || k == last || !grid.near_occupied(c))
    })
}

/// Greedy string pulling over the cell path.
fn smooth(grid: &OccupancyGrid, from: Point2, cells: &[CellIndex], to: Point2) -> Vec<Point2> {
    let mut pts: Vec<Point2> = Vec::with_capacity(cells.len() + 1);
    pts.push(from);
    pts.extend(cells.iter().skip(1).map(|&c| grid.center(c)));
    let goal_cell = grid.cell_of(to);
    if goal_cell.is_some_and(|g| grid.get(g) != CellState::Occupied) {
        if cells.last() == goal_cell.as_ref() {
            if pts.len() > 1 {
                let n = pts.len();
                pts[n - 1] = to;
            }
        } else {
            pts.push(to);
        }
    }
    if pts.len() <= 2 {
        return pts;
    }
    let mut out = vec![pts[0]];
    let mut anchor = 0;
    while anchor < pts.len() - 1 {
        let mut next = anchor + 1;
        for k in (anchor + 2..pts.len()).rev() {
            if clear_line(grid, pts[anchor], pts[k]) {
                next = k;
                break;
            }
        }
        out.push(pts[next]);
        anchor = next;
    }
    out
}

/// Simulates a waypoint follower with the discrete action set.
fn compile(start: Pose, waypoints: &[Point2]) -> Vec<Action> {
    let Some(&goal) = waypoints.last() else { return Vec::new() };
    let mut pos = start.position;
    let mut heading = start.heading;
    let mut actions = Vec::new();
    let total: f64 = waypoints.windows(2).map(|w| w[0].distance(w[1])).sum();
    let budget = (4.0 * total / FORWARD_STEP) as usize + 64;
    let mut k = 1.min(waypoints.len() - 1);
    while actions.len() < budget {
        let to_goal = pos.distance(goal);
        if to_goal <= 0.5 * FORWARD_STEP {
            break;
        }
        while k < waypoints.len() - 1 && pos.distance(waypoints[k]) <= 1.2 * FORWARD_STEP {
            k += 1;
        }
        let wp = waypoints[k];
        let bearing = (wp - pos).bearing();
        let delta = heading_delta(heading, bearing);
        if delta.abs() > TURN_STEP / 2.0 {
            if delta > 0.0 {
                actions.push(Action::TurnLeft);
                heading = normalize_heading(heading + TURN_STEP);
            } else {
                actions.push(Action::TurnRight);
                heading = normalize_heading(heading - TURN_STEP);
            }
            continue;
        }
        let next = pos + Point2::from_heading(heading) * FORWARD_STEP;
        if k == waypoints.len() - 1 && to_goal <= FORWARD_STEP && next.distance(goal) >= to_goal {
            break;
        }
        actions.push(Action::Forward);
        pos = next;
    }
    actions
}

/// Plans from `from` to within one cell of `to` and compiles the result into
/// actions. Paths never enter occupied cells.
pub fn plan_local(grid: &OccupancyGrid, from: Pose, to: Point2) -> Result<Plan, PlanError> {
    let (cells, cost) = astar(grid, from.position, to)?;
    let waypoints = smooth(grid, from.position, &cells, to);
    let actions = compile(from, &waypoints);
    Ok(Plan {
        actions,
        waypoints,
        cells,
        cost,
    })
}
