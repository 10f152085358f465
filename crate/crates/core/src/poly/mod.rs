//! Exact polynomial layer: Gaussian-rational scalars, sparse multivariate
//! polynomials, reflection, Laurent (trigonometric) polynomials on the torus
//! and univariate algebra.

mod laurent;
mod multipoly;
mod point;
mod scalar;
mod univariate;

pub use laurent::LaurentPoly;
pub use multipoly::{MultiIndex, MultiPoly};
pub use point::{angle_diff, wrap_angle, UnimodularPoint, UnitCoord};
pub use scalar::{GaussianRational, Scalar};
pub use univariate::{
    gcd_univariate, polynomial_roots, rem_univariate, roots_on_unit_circle, squarefree_decompose, CircleRoot,
    CircleRoots, UNIMODULAR_TOL,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable count mismatch: {left} vs {right}")]
    NvarsMismatch { left: usize, right: usize },
    #[error("point has {got} coordinates, polynomial has {expected} variables")]
    PointLength { expected: usize, got: usize },
    #[error("degree {degree} in z{var} exceeds declared bound {bound}")]
    DegreeExceeds { var: usize, degree: u32, bound: u32 },
    #[error("expected a univariate polynomial, got {0} variables")]
    NotUnivariate(usize),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("division is not exact")]
    NotDivisible,
}
