//! Floating-point scalar abstraction for the numerical half of the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Tolerances shared by the eigensolvers and the bound engine.
///
/// All values are relative: they are multiplied by a matrix scale (the
/// Frobenius norm, floored at one) before use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<F> {
    /// Working tolerance for residuals, symmetry and the commutator test.
    pub tol: F,
    /// Width within which eigenvalues of the symmetric part are clustered.
    pub cluster: F,
    /// Imaginary parts below this are snapped to zero.
    pub zero_snap: F,
    /// Equality tolerance for eigenvalue comparisons in the bound engine.
    pub compare: F,
}

/// Real floating-point scalar (`f32` or `f64`).
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Sum + Send + Sync + 'static
{
    fn default_tolerances() -> Tolerances<Self>;

    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }
}

impl Real for f64 {
    fn default_tolerances() -> Tolerances<f64> {
        Tolerances {
            tol: 1e-10,
            cluster: 1e-7,
            zero_snap: 1e-9,
            compare: 1e-8,
        }
    }
}

impl Real for f32 {
    fn default_tolerances() -> Tolerances<f32> {
        Tolerances {
            tol: 1e-4,
            cluster: 1e-3,
            zero_snap: 1e-4,
            compare: 1e-3,
        }
    }
}

impl<F: Real> Default for Tolerances<F> {
    fn default() -> Self {
        F::default_tolerances()
    }
}
