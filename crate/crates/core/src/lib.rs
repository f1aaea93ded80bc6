//! Exact and certified multiprecision computations for collocation with
//! cardinal B-splines: spline symbols, banded Toeplitz and circulant
//! matrices, their spectra and condition numbers, and the integer
//! sequences that govern the limiting minimal eigenvalue.

pub mod error;
pub mod scalars;
pub mod spectra;
pub mod splines;
pub mod theory;
pub mod toeplitz;

pub use error::{Error, Result};
