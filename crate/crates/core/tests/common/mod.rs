#![allow(dead_code)]

use relnav_core::gridsim::{Scene, World};
use relnav_core::reasoner::{OracleKnobs, OracleReasoner};
use std::sync::Arc;

pub fn fixture(name: &str) -> Scene {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn world(name: &str) -> Arc<World> {
    Arc::new(World::new(fixture(name)))
}

pub fn oracle(world: &Arc<World>, knobs: OracleKnobs) -> OracleReasoner {
    OracleReasoner::new(world.clone(), knobs, 7)
}
