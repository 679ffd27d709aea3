//! Shift systems, metrics, cylinders, and Bowen balls.

mod alphabet;
mod ball;
mod cylinder;
mod leafset;
mod metric;
mod point;
mod system;
mod words;

pub use alphabet::{Alphabet, SymbolMetric};
pub use ball::{ball_to_cylinder, closed_ball_to_cylinder, BallCenter, BowenBall};
pub use cylinder::CylinderSet;
pub use leafset::LeafSet;
pub use metric::{bowen_distance, distance, shifted_distance, weighted_word_distance, SequenceMetric, DEFAULT_WINDOW};
pub use point::PointRep;
pub use system::{closed_scale_index, scale_index, Admissibility, BallWindow, ShiftSystem, Sidedness};
pub use words::{decode_word, encode_word, enumerate_words, DEFAULT_ENUMERATION_CAP};

/// A finite word over the alphabet `{0, .., m-1}`.
pub type Word = alloc::vec::Vec<u8>;
