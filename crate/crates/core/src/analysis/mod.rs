//! Slopes against `ln(1/eps)`, the chain verifiers, the coincidence
//! harness and the grid-family experiment.

mod chain;
mod example46;
pub mod grid;
mod slope;
mod theorem11;

pub use chain::{lemma31_chain, lemma32_chain, support_system, ChainConfig, ChainLink, ChainNode, ChainReport};
pub use example46::{example46_experiment, grid_bk, grid_lower, GridFamilyConfig, GridFamilyReport, GridLevel};
pub use slope::{slope_report, SlopeReport};
pub use theorem11::{estimate_quantity, theorem11_experiment, theorem11_grid_family, CoincidenceConfig, CoincidenceReport};
