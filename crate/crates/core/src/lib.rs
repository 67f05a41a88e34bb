//! Spectra of digraphs whose A-Laplacian `L = Δ⁺ − A` is normal.
//!
//! The crate computes the complex Laplacian spectrum, evaluates the
//! eigenvalue bound on separations `(Z, Y)` (no arcs from `Z` to `Y`),
//! enumerates small digraphs up to isomorphism, and cross-checks every
//! identity against exact-arithmetic and brute-force oracles.
//!
//! Numerical code is generic over [`Real`] (`f32`/`f64`); exact code uses
//! arbitrary-precision integers and rationals. The aliases below fix the
//! common concrete choices.

pub mod census;
pub mod digraph;
pub mod eig;
pub mod error;
pub mod exact;
pub mod generators;
pub mod matrix;
pub mod oracle;
pub mod scalar;
pub mod spectral;

pub use digraph::{Digraph, Separation, VertexSet};
pub use error::{Error, NotApplicable, Result};
pub use matrix::Matrix;
pub use scalar::{Real, Tolerances};

/// Exact integer matrix (`A`, `Δ⁺`, `L`, incidence matrices).
pub type IntMatrix = Matrix<num_bigint::BigInt>;
/// Exact rational matrix (the quotient matrix).
pub type RatMatrix = Matrix<num_rational::BigRational>;
/// Double-precision dense matrix.
pub type RealMatrix = Matrix<f64>;
/// Double-precision complex spectrum.
pub type Spectrum = eig::ComplexSpectrum<f64>;
/// Double-precision choice of `θ`, `ν`, `μ` and `α`.
pub type Selection = spectral::AlphaSelection<f64>;
/// Double-precision bound report.
pub type Report = spectral::BoundReport<f64>;
