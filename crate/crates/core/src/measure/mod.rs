//! Bernoulli, Markov, and empirical measures on shift systems.

mod marginal;
mod model;
mod profile;
mod sample;

pub use marginal::{marginal, marginal_distance, marginal_distance_exact, MarginalDistribution};
pub use model::{ratio, MeasureModel};
pub use profile::{mass_profile, CountValue, MassClass, MassProfile, ProfileMode, EXACT_PROFILE_DEPTH};
pub use sample::{sample_orbit, seed_for, OrbitSampler};
