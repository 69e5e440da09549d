//! Spectral eigensolvers for the Dirichlet problem of `-Δu + c²/|x|² u = λu`.
//!
//! Balls and circular sectors are handled with Sobolev-orthogonal radial
//! bases built from generalized Jacobi polynomials; the square and L-shape
//! use a mortar spectral element coupling between a singular-adapted disk
//! (or sector) block and four curvilinear quadrilaterals.

pub mod ball_solver;
pub mod eiglin;
pub mod mortar_sem;
pub mod orthopoly;
pub mod real;
pub mod sector_solver;
pub mod specfun;

pub use eiglin::Spectrum;
