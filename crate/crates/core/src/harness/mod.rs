//! Experiment runner behind the `irsim` CLI.
//!
//! Reproducibility contract: a `(master_seed, config)` pair fully determines
//! every output byte. Per-trial randomness comes from a counter-based
//! generator keyed by `(master_seed, trial_index, stream_id)`, trial results
//! are collected in trial order, and statistics merge in a fixed tree, so
//! neither worker count nor scheduling can perturb anything.

pub mod config;
pub mod csvout;
pub mod experiments;
pub mod parallel;
pub mod rng;
pub mod stats;
