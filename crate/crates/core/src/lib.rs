//! Constrained menu design with LLM-estimated preferences.
//!
//! A ground set of recipes (an original menu plus generated candidates) is
//! scored, and a K-item menu is selected by maximizing predicted satisfaction
//! plus a diversity term, subject to expected-emissions and animal-usage
//! limits relative to the original menu.

pub mod analytics;
pub mod domain;
pub mod impact;
pub mod optimizer;
pub mod similarity;
