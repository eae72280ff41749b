//! Multi-objective refactoring of software architectures with designer
//! interaction.

pub mod config;
pub mod error;
pub mod evaluation;
pub mod fixtures;
pub mod indicators;
pub mod interaction;
pub mod model;
pub mod optimizer;
pub mod refactoring;

pub use error::{Error, Result};
