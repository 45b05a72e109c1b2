//! Shared inputs for the pipeline benchmarks.

use relnav_core::drpm::OccupancyGrid;
use relnav_core::dsrg::Dsrg;
use relnav_core::geometry::Point2;
use relnav_core::gridsim::{generate_scene, sense, update_occupancy, Pose, Scene, SceneGenConfig, World, CELL_SIZE};
use std::sync::Arc;

pub fn scene(seed: u64) -> Scene {
    generate_scene(seed, &SceneGenConfig::default(), &Dsrg::default_prior()).expect("default generator succeeds")
}

pub fn world(seed: u64) -> Arc<World> {
    Arc::new(World::new(scene(seed)))
}

/// Occupancy grid after a full turn in place at the episode start.
pub fn explored_grid(world: &World) -> OccupancyGrid {
    let b = world.scene.bounds;
    let mut g = OccupancyGrid::new(Point2::new(0.0, 0.0), b.width, b.height, CELL_SIZE);
    let start = world.scene.episode.start;
    for k in 0..12 {
        let obs = sense(world, Pose { position: start, heading: k as f64 * 30.0 });
        update_occupancy(&mut g, &obs);
    }
    g
}
