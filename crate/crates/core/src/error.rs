use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must be square with dim >= 1 (got {rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("expected {expected} entries, found {found}")]
    EntryCount { expected: usize, found: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid tolerance (rel = {rel}, abs = {abs})")]
    InvalidTolerance { rel: f64, abs: f64 },

    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("matrix is singular (condition estimate {condition:e})")]
    SingularMatrix { condition: f64 },

    #[error("eigensolver failed to converge")]
    ConvergenceFailure,

    #[error("spectrum is not real (max |Im E| = {max_imag:e})")]
    ComplexSpectrum { max_imag: f64, eigenvalues: Vec<Complex64> },

    #[error("spectrum is degenerate: eigenvalues {first} and {second} are {gap:e} apart")]
    DegenerateSpectrum { first: usize, second: usize, gap: f64 },

    #[error("no left eigenvector pairs with eigenvalue {index} (distance {distance:e})")]
    PairingFailure { index: usize, distance: f64 },

    #[error("biorthonormality lost after pairing (residual {residual:e})")]
    BiorthonormalityLoss { residual: f64 },

    #[error("kappa has {found} entries, system has dimension {expected}")]
    KappaLength { expected: usize, found: usize },

    #[error("kappa[{index}] is zero or non-finite")]
    ZeroKappa { index: usize },

    #[error("overlap <E_{index}|P|E_{index}> = {overlap} vanishes")]
    VanishingOverlap { index: usize, overlap: Complex64 },

    #[error("charge coefficient {index} deviates from conj(q) by {deviation:e}")]
    ConjugationMismatch { index: usize, deviation: f64 },

    #[error("quasiparity coefficients are not real at indices {indices:?}")]
    NonRealQuasiparity { indices: Vec<usize> },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
