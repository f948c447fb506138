//! Detection of long-range nonstabilizerness in translation-invariant
//! matrix product states, with exact small-instance oracles.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. File formats and the command line live in `lrn-detect`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod criteria;
pub mod dense;
mod error;
pub mod linalg;
pub mod math;
pub mod mps;
pub mod stabilizer;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
