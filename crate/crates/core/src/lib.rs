//! Numerical laboratory for composition-differentiation operators
//! `D_phi(f) = f' ∘ phi` on the Dirichlet space of the unit disk, together
//! with the sibling Hardy and Bergman weighted Hardy spaces.
//!
//! The crate provides truncated power-series arithmetic, weighted-space
//! norms and reproducing kernels, finite (Galerkin) matrix representations
//! of composition, composition-differentiation and multiplication
//! operators, closed-form and matrix norms/spectra for monomial symbols,
//! Bell polynomials and the eigenfunction coefficient recursion, disk
//! quadrature for pullback (Carleson) measures, and companion-map adjoint
//! identities for linear-fractional symbols.

pub mod adjoint;
pub mod cli;
pub mod error;
pub mod faa_di_bruno;
pub mod measure;
pub mod operators;
pub mod series;
pub mod space;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;
