//! Estimators for the epsilon-entropies: separated counts, topological,
//! Kolmogorov–Sinai, Shapira, Brin–Katok, Katok, Pfister–Sullivan, and
//! Ornstein–Weiss return times.

mod brin_katok;
mod estimate;
mod katok;
mod ks;
mod pfister_sullivan;
mod return_time;
mod separated;
mod shapira;
mod topological;
pub(crate) mod typical;

pub use brin_katok::{bk_entropy, bk_local_exponent, bk_monte_carlo, BkSpec, LocalExponent};
pub use estimate::{EntropyEstimate, Mode, QuantityId};
pub use katok::{katok_count, katok_entropy, katok_entropy_lim, KatokSpec};
pub use ks::ks_eps_entropy;
pub use pfister_sullivan::{ps_count, ps_counts, ps_entropy, PsSpec};
pub use return_time::{
    ow_aggregate, ow_return_entropy, ow_sample_returns, return_time, return_time_point, OwSpec, ReturnTime,
};
pub use separated::{separated_count, separated_count_exact, CountBounds, Region};
pub use shapira::{shapira_count, shapira_eps_entropy, ShapiraSpec};
pub use topological::eps_topological_entropy;
