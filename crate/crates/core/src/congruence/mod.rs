//! Structural congruence: canonical series-parallel terms, the prenex
//! sum-of-series-parallel normal form, and the congruence laws themselves.

pub mod axioms;
mod normal;
mod sp;

pub use normal::{canonical_key, congruent, normalize, NormalForm};
pub use sp::SpTerm;
