use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZeroPolynomial,

    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("degree {degree} exceeds the bound {bound}")]
    DegreeExceeds { degree: usize, bound: usize },

    #[error("matrix polynomial is not monic: {0}")]
    NotMonic(String),

    #[error("type vector is not dominant or does not sum to zero: {0:?}")]
    NonDominantType(Vec<i64>),

    #[error("descriptors have different shapes ({0}x{0}, n={1}) vs ({2}x{2}, n={3})")]
    ShapeMismatch(usize, usize, usize, usize),

    #[error("invariant polynomials do not form a divisibility chain")]
    InexactDivision,

    #[error("poles closer than {threshold:e} (separation {separation:e}); chart outside the open subset")]
    PolesTooClose { separation: f64, threshold: f64 },

    #[error("spectrum is not generic: separation {separation:e} <= {threshold:e}")]
    NonGenericSpectrum { separation: f64, threshold: f64 },

    #[error("eigenvalue {lambda} has a kernel of dimension > 1")]
    AmbiguousKernel { lambda: String },

    #[error("eigenvector residual {residual:e} exceeds {tolerance:e}")]
    EigenResidual { residual: f64, tolerance: f64 },

    #[error("eigenvectors are linearly dependent (condition number {condition:e})")]
    DependentEigenvectors { condition: f64 },

    #[error("chart excluded at stage {stage}: {source}")]
    ChartExcluded { stage: usize, source: Box<Error> },

    #[error("right-division remainder {residual:e} exceeds {tolerance:e}")]
    DivisionResidual { residual: f64, tolerance: f64 },

    #[error("scalar product (u,v) = {value:e} is degenerate")]
    InnerProductDegenerate { value: f64 },

    #[error("swap step {step} failed: {source}")]
    SwapFailed { step: usize, source: Box<Error> },

    #[error("partition is not a reordering of the spectrum: {0}")]
    NotAReordering(String),

    #[error("determinant drift {drift:e} at step {step} exceeds {bound:e}")]
    DriftExceeded { step: usize, drift: f64, bound: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
