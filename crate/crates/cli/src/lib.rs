//! Pipeline behind the `menuopt` binary: generate candidates, score them,
//! select a constrained menu, and run the evaluation utilities.

pub mod commands;
pub mod config;
