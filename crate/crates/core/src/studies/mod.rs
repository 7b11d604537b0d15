//! Numerical experiments built from the library pieces.

pub mod bessel;
pub mod eigen;
pub mod tables;
