//! Generators, experiment drivers and file formats around [`epi_core`].

pub mod error;
pub mod families;
pub mod format;
pub mod fuzz;
pub mod generate;
pub mod lemmas;
pub mod sweep;

pub use epi_core;
pub use error::{HarnessError, Result};
