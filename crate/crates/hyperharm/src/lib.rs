//! Harmonic analysis on the real hyperbolic spaces `H^p`.
//!
//! Functions on `H^p` are stored as radial profiles of boundary-harmonic
//! coefficients. The crate evaluates spherical functions and Eisenstein
//! integrals, the Helgason-Fourier, Radon, Euclidean Fourier, K-type
//! spherical and generalized Abel transforms with their inverses, and the
//! Schwartz/Paley-Wiener diagnostics built on them.

pub mod error;
pub mod geometry;
pub mod ktypes;
pub mod numerics;
pub mod schwartz_pw;
pub mod spherical;
pub mod transforms;

pub use error::{HyperError, Result};
