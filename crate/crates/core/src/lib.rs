//! Obstructions to extending unitary representations of normal subgroups of finite
//! groups: twisted actions on the commutant, exact 2-cocycle triviality tests,
//! explicit extensions and stabilized extensions.

pub mod catalog;
pub mod cohomology;
pub mod corpus;
pub mod error;
pub mod extend;
pub mod groups;
pub mod interchange;
pub mod matrices;
pub mod obstruction;
pub mod pipeline;
pub mod problem;
pub mod reps;

pub use error::{Error, Result};
