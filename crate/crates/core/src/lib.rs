//! Spectral toolkit for the one-dimensional discrete bilaplacian with a
//! rank-one (single-site) impurity,
//!
//!   H(μ) = Δ̂Δ̂ − μ·v̂   on ℓ²(ℤ),
//!
//! whose momentum representation multiplies by 𝔢(q) = (1 − cos q)² and whose
//! discrete spectrum outside the band [0, 4] is the single root of the
//! secular determinant Δ(μ; z) = 1 − (μ/2π)∫dq/(𝔢(q) − z).
//!
//! Modules:
//! - [`field`]: exact arithmetic in ℚ(2^(1/6)), the coefficient field of the
//!   small-coupling expansions.
//! - [`series`]: truncated formal power series and the bivariate
//!   implicit-function solver.
//! - [`quad`]: adaptive Gauss–Legendre panel quadrature.
//! - [`spectral`]: dispersion, closed-form resolvent, quadrature oracle,
//!   residue data, secular determinant.
//! - [`eigen`]: the unique eigenvalue e(μ), its derivatives, and the
//!   eigenfunction in momentum and position space.
//! - [`asympt`]: exact expansion coefficients of e(μ) near μ → 0± and the
//!   numeric fit oracle that adjudicates them.
//! - [`lattice`]: finite-truncation oracle in position space (banded
//!   Green's function, secular root, dense Jacobi spectrum).
//!
//! # Example
//!
//! ```
//! use bilap_core::eigen::solve_eigenvalue;
//! use bilap_core::asympt::{expand_positive, evaluate_expansion};
//!
//! // attractive impurity: one bound state below the band
//! let bound = solve_eigenvalue(0.01, 1e-12).unwrap();
//! assert!(bound.e < 0.0 && bound.residual < 1e-12);
//!
//! // the truncated μ → 0⁺ expansion reproduces it
//! let expansion = expand_positive(3);
//! let estimate = evaluate_expansion(&expansion, 0.01).unwrap();
//! assert!(((estimate - bound.e) / bound.e).abs() < 1e-5);
//! ```

pub mod asympt;
mod dd;
pub mod eigen;
pub mod error;
pub mod field;
pub mod lattice;
pub mod quad;
pub mod series;
pub mod spectral;

pub use error::{Error, Result};
pub use field::{AlgebraicNumber, Rational};
pub use series::{BivariateSeries, CoefficientField, ImplicitProblem, TruncatedSeries};
pub use spectral::{Region, ResolventValue, SecularValue, SpectralPoint};
