use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not positive with positive determinant")]
    NonPositiveMatrix,
    #[error("induced map of the matrix is affine (alpha = 0); projective data undefined")]
    AffineInducedMap,
    #[error("scale factor must be strictly positive")]
    NonPositiveScale,
    #[error("word must be non-empty")]
    EmptyWord,
    #[error("point {0} is outside the domain of the map")]
    DomainError(f64),
    #[error("similarity transform is singular")]
    SingularTransform,
    #[error("pair is not a concave-convex pair")]
    NotInClassC,
    #[error("pair is not in the class D")]
    NotInClassD,
    #[error("t = {t} is outside the interior range ({t0}, {t1})")]
    OutOfInteriorRange { t: f64, t0: f64, t1: f64 },
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("equivalent convexity criteria disagree (numeric tolerance problem)")]
    InconsistentEquivalences,
    #[error("closed forms for the thresholds disagree: {0}")]
    ClosedFormMismatch(String),
    #[error("itinerary prefix too short to decide a lexicographic comparison")]
    PrefixTooShort,
    #[error("no sampled t yields the parameter {0}")]
    PlateauNotFound(String),
    #[error("square root of a non-rational value is not representable exactly")]
    InexactSqrt,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
