//! Integer coordinate types used by the group arithmetic.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::{BigInt, ToBigInt};
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exact signed integer usable as a group coordinate.
///
/// `BigInt` is the default everywhere coordinates can grow without bound.
/// Fixed-width types are accepted for large searches whose coordinates are
/// known to stay small; build profiles keep overflow checks enabled so an
/// overflow aborts instead of wrapping.
pub trait Coord:
    Integer
    + Signed
    + Clone
    + Hash
    + Debug
    + Display
    + FromPrimitive
    + ToPrimitive
    + ToBigInt
    + Send
    + Sync
    + 'static
{
    fn from_int(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("integer does not fit the coordinate type")
    }
}

impl<T> Coord for T where
    T: Integer
        + Signed
        + Clone
        + Hash
        + Debug
        + Display
        + FromPrimitive
        + ToPrimitive
        + ToBigInt
        + Send
        + Sync
        + 'static
{
}

/// Generalized binomial coefficient `C(k, n)` for any integer `k` and `n >= 0`.
pub fn binomial<T: Coord>(k: &T, n: usize) -> T {
    let mut acc = T::one();
    for i in 0..n {
        let i_t = T::from_int(i as i64);
        acc = acc * (k.clone() - i_t.clone()) / (i_t + T::one());
    }
    acc
}

/// Length-prefixed big-endian two's-complement encoding of an integer.
pub fn encode_int<T: Coord>(v: &T, out: &mut Vec<u8>) {
    let bytes = v
        .to_bigint()
        .unwrap_or_else(BigInt::default)
        .to_signed_bytes_be();
    out.extend_from_slice(&(bytes.len() as u16).to_be_bytes());
    out.extend_from_slice(&bytes);
}
