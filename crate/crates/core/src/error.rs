use thiserror::Error;

use crate::poly::PolyError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RifError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("a rational inner function needs at least two variables, got {0}")]
    TooFewVariables(usize),
    #[error("unit factor {0} is not exactly unimodular")]
    NotUnimodularUnit(String),
    #[error("denominator must have degree exactly 1 in the last variable, found {0}")]
    NotDegreeOneInLast(u32),
    #[error("denominator is not stable: zero at {witness}")]
    NotStable { witness: String, point: Vec<(f64, f64)> },
    #[error("p and its reflection share a common factor{0}")]
    ToralFactor(String),
    #[error("the first slice coefficient of the numerator vanishes on the torus near {0}; singular set is not finite")]
    InfiniteSingularSet(String),
    #[error("vertical line in the zero set at {0}")]
    VerticalLine(String),
    #[error("all slice matrix entries (or the whole denominator row) vanish at {0}")]
    DegenerateSlice(String),
    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,
    #[error("composition is not inner: {0}")]
    NotInner(String),
    #[error("recovered z_d coordinate has modulus {modulus} at {at}")]
    NonUnimodularEta { modulus: f64, at: String },
    #[error("zero set of V near {0} does not look isolated")]
    InfiniteSingularSetSuspected(String),
    #[error("composition of order {0} has a polydegree drop")]
    PolydegreeDrop(u32),
    #[error("predicted and observed contact orders differ: predicted {predicted:?}, observed {observed:?}")]
    ScalingMismatch { predicted: Vec<u32>, observed: Vec<u32> },
    #[error("another singularity lies within {eps} of the ball center")]
    OverlapError { eps: f64 },
    #[error("V vanishes off-center at angular offset {0:e}; singularity may not be isolated")]
    NonFiniteIntegrand(f64),
    #[error("cutoff estimate did not reach halfwidth {target} (got {achieved})")]
    BudgetExceeded { target: f64, achieved: f64 },
    #[error("operation requires {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, RifError>;
