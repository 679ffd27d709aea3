//! Epsilon-entropy functionals on symbolic shift systems.
//!
//! The exact backend (first-difference metric) reduces Bowen balls to
//! cylinders, so most quantities become cylinder combinatorics over exact
//! rationals. The weighted-sum metric is handled with certified intervals.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod analysis;
pub mod caratheodory;
pub mod entropy;
pub mod error;
pub mod interval;
pub mod measure;
pub mod numeric;
pub mod symbolic;

pub use error::{Error, Result};
pub use interval::Interval;

/// Crate version string, recorded in result files.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
