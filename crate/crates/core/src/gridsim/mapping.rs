use super::{Observation, Pose, FORWARD_STEP, MAX_DEPTH};
use crate::drpm::{CellState, OccupancyGrid};
use crate::geometry::Point2;

const NUDGE: f64 = 1e-6;

/// Integrates one depth fan. Cells along each ray become free unless already
/// occupied; the cell holding a ray's hit point becomes occupied. Occupied
/// cells never revert.
pub fn update_occupancy(grid: &mut OccupancyGrid, obs: &Observation) {
    let origin = obs.pose.position;
    let mut hits = Vec::new();
    for (i, &range) in obs.depth_rays.iter().enumerate() {
        let dir = obs.ray_direction(i);
        let hit = range < MAX_DEPTH - 1e-9;
        let end = origin + dir * (range - NUDGE).max(0.0);
        for c in grid.traverse(origin, end) {
            if grid.get(c) == CellState::Unknown {
                grid.set(c, CellState::Free);
            }
        }
        if hit {
            if let Some(c) = grid.cell_of(end) {
                hits.push(c);
            }
        }
    }
    for c in hits {
        grid.set(c, CellState::Occupied);
    }
}

/// Marks the cell under `p` occupied (bump feedback after a collision).
pub fn mark_obstacle(grid: &mut OccupancyGrid, p: Point2, toward_from: Point2) {
    let nudged = p + (toward_from - p) * (NUDGE / p.distance(toward_from).max(NUDGE));
    if let Some(c) = grid.cell_of(nudged) {
        grid.set(c, CellState::Occupied);
    }
}

/// Marks the cells a blocked forward move would have entered, other than
/// the agent's own, so the move is not planned again.
pub fn mark_blocked_ahead(grid: &mut OccupancyGrid, pose: Pose) {
    let own = grid.cell_of(pose.position);
    let dir = Point2::from_heading(pose.heading);
    for reach in [FORWARD_STEP, 2.0 * FORWARD_STEP] {
        let ahead: Vec<_> = grid
            .traverse(pose.position, pose.position + dir * reach)
            .into_iter()
            .filter(|c| Some(*c) != own)
            .collect();
        if !ahead.is_empty() {
            for c in ahead {
                grid.set(c, CellState::Occupied);
            }
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocked_move_marks_the_next_cell() {
        let mut g = OccupancyGrid::from_ascii(&["....", "...."], 0.25);
        let pose = Pose {
            position: Point2::new(0.125, 0.125),
            heading: 0.0,
        };
        mark_blocked_ahead(&mut g, pose);
        assert_eq!(g.get((1, 0)), CellState::Occupied);
        assert_eq!(g.get((0, 0)), CellState::Free);
    }
}
