//! Exact decision procedures for isoparametric families built from
//! restricted root systems with multiplicities.
//!
//! The decision path (minimality, austerity, spectra, congruence) runs
//! entirely in arbitrary-precision rational arithmetic; the only floating
//! point anywhere is the finite-difference cross-check in
//! [`geometry::jacobi_eigenvalue_check`].

pub mod congruence;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod rootsys;
pub mod verify;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
