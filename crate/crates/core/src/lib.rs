//! Spatial correlation, wavenumber-domain spectra and mutual coupling for
//! holographic reconfigurable intelligent surfaces.
//!
//! The crate is organized bottom-up: [`specfun`] supplies scalar special
//! functions, [`geometry`] builds element layouts, [`correlation`] and
//! [`spectrum`] describe the coupling-free channel, [`coupling`] turns an
//! impedance model into Tx/Rx coupling matrices, and [`response`] and
//! [`analysis`] evaluate gains, effective correlation and eigen-spectra.

pub mod analysis;
pub mod correlation;
pub mod coupling;
pub mod error;
pub mod geometry;
mod linalg;
pub mod response;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};

pub use num_complex::Complex64;

/// Dense complex matrix used throughout the crate.
pub type CMatrix = nalgebra::DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<Complex64>;
