//! J-matrix toolkit: tridiagonal representations of Schrödinger-type
//! operators in orthogonal-polynomial bases, independent quadrature oracles
//! for every matrix entry, and spectral analysis of the resulting Jacobi
//! matrices.

pub mod error;
pub mod special;
pub mod recurrences;
pub mod qcalculus;
pub mod jacobi;
pub mod operators;
pub mod oracle;
pub mod spectra;

pub use error::{Error, Result};
