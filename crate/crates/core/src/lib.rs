//! Relation-guided object-goal navigation: a spatial relationship graph,
//! temporal detection verification, relation-aware matching, cue-guided
//! frontier exploration, and the grid world they run in.

pub mod drpm;
pub mod dsrg;
pub mod error;
pub mod geometry;
pub mod gridsim;
pub mod harness;
pub mod perception;
pub mod ramm;
pub mod reasoner;
