use thiserror::Error;

/// Errors raised by the library.
///
/// Situations where a phase is merely *undefined* (orthogonal endpoints,
/// vanishing overlaps inside an invariant) are usually reported as values
/// (`Option::None`, `defined == false`) rather than through this type. The
/// exception is [`crate::principal_arg`], which is the single place where an
/// undefined phase becomes an error.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("empty input")]
    Empty,

    #[error("non-finite value (NaN or infinity) in input")]
    NonFinite,

    #[error("vector is not normalized: |norm^2 - 1| = {deviation:e} exceeds {tol:e}")]
    NotNormalized { deviation: f64, tol: f64 },

    #[error("cannot normalize a zero vector")]
    ZeroVector,

    #[error("matrix is not unitary: max |M^H M - I| = {deviation:e} exceeds {tol:e}")]
    NotUnitary { deviation: f64, tol: f64 },

    #[error("invalid tolerance `{name}` = {value}: must be finite and strictly positive")]
    InvalidTolerance { name: &'static str, value: f64 },

    #[error("phase undefined: modulus {modulus:e} at or below the genericity threshold")]
    UndefinedPhase { modulus: f64 },

    #[error("non-generic vector: |first component| = {modulus:e} at or below threshold")]
    NonGenericVector { modulus: f64 },

    #[error("non-generic matrix at recursion level {level}: leading entry of the last column has modulus {modulus:e}")]
    NonGenericMatrix { level: usize, modulus: f64 },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("index order violated: need {first} < {second}")]
    IndexOrder { first: usize, second: usize },

    #[error("levels must differ, got {0} twice")]
    SameLevel(usize),

    #[error("duplicate level {0} in index tuple")]
    DuplicateIndex(usize),

    #[error("need at least {min} entries, got {found}")]
    TooFew { min: usize, found: usize },

    #[error("vertex pattern does not alternate between initial and final vectors at position {position}")]
    PatternNotAlternating { position: usize },

    #[error("anchor overlap between vertices {first} and {second} vanishes (modulus {modulus:e})")]
    NonGenericAnchor {
        first: usize,
        second: usize,
        modulus: f64,
    },

    #[error("grid mismatch: expected {expected} points, found {found}")]
    GridMismatch { expected: usize, found: usize },

    #[error("grid must be finite and strictly increasing (violated at index {index})")]
    InvalidGrid { index: usize },

    #[error("curve under-resolved between grid points {index} and {}: |overlap| = {overlap} not above {min}", index + 1)]
    CurveNotSmooth { index: usize, overlap: f64, min: f64 },

    #[error("basis matrix {index} is not Hermitian (deviation {deviation:e})")]
    NotHermitian { index: usize, deviation: f64 },

    #[error("degenerate spectrum at s = {s}: eigenvalue gap {gap:e}")]
    DegenerateSpectrum { s: f64, gap: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
