//! Nilpotent groups `G_c`, their chain amalgams, word metrics and fillings.
//!
//! Group arithmetic is generic over the coordinate type; the aliases below
//! fix the usual choices.

pub mod error;
pub mod filling;
pub mod group;
pub mod metrics;
pub mod normal_form;
pub mod presentation;
pub mod scalar;
pub mod word;

pub use error::{Error, Result};

/// Exact element of `G_c`.
pub type Gc = group::GcElement<num_bigint::BigInt>;
/// Element of `G_c` with machine coordinates, as used by ball searches.
pub type GcSmall = group::GcElement<i64>;
/// Exact element of a direct product of parts.
pub type Product = group::ProductElement<num_bigint::BigInt>;
/// Exact normal form in a chain amalgam.
pub type AmalgamNormalForm = normal_form::NormalForm<num_bigint::BigInt>;
/// Power-law fit in double precision.
pub type Fit = metrics::FitResult<f64>;
