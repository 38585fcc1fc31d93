//! Reliability-function bounds for the binary symmetric channel.
//!
//! The crate evaluates the sphere-packing, random-coding and improved
//! upper envelopes of the error exponent `E(R, p)`, the critical rates where
//! their pieces meet, and the spectrum exponent `μ(R, α, ω)` that drives the
//! improved bound. Small explicit codes can be checked against the
//! combinatorial statements underneath.
//!
//! All rates and exponents are in bits.

pub mod bounds;
pub mod combinatorics;
pub mod error;
pub mod numeric;
pub mod output;
pub mod rates;
pub mod scalar;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
