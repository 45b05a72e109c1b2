//! Frontier exploration guided by relational cues drawn from the graph.

mod frontier;
mod grid;
mod guidance;
mod scoring;

pub use frontier::{extract_frontiers, is_frontier_cell, medoid, Frontier, MIN_FRONTIER_CELLS};
pub use grid::{CellIndex, CellState, OccupancyGrid};
pub use guidance::{
    generate_guidance, localize_in_graph, AgentNode, CueToggles, GuidancePrompt, TemplateId, GUIDANCE_MAX_HOPS,
};
pub use scoring::{nearest_frontier, overlap_weight, score_frontier, select_frontier};
