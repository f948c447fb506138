use alloc::string::String;
use alloc::vec::Vec;

use crate::C64;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Every failure the core library can report.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid tensor: {0}")]
    InvalidTensor(String),

    #[error("physical dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(
        "peripheral eigenvalue {eigenvalue} has algebraic multiplicity {algebraic} \
         but only {geometric} independent eigenvectors; block the tensor first"
    )]
    NonDiagonalizablePeripheral {
        eigenvalue: C64,
        algebraic: usize,
        geometric: usize,
    },

    #[error("{what} did not converge after {iterations} iterations (last residual {residual:e})")]
    ConvergenceFailure {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("canonical decomposition failed: {reason} (fixed-point spectrum {spectrum:?})")]
    DecompositionFailure { reason: String, spectrum: Vec<f64> },

    #[error("singular value {singular_value:e} (relative) sits at the rank cutoff {cutoff:e}")]
    RankTolerance { cutoff: f64, singular_value: f64 },

    #[error("gauge comparison requires normal tensors")]
    NotNormalInput,

    #[error("all block weights vanish at N = {n} (normalization {norm:e})")]
    DegenerateNormalization { n: u64, norm: f64 },

    #[error("probability vector is not normalized (sum {sum})")]
    NotNormalized { sum: f64 },

    #[error("value {value} is outside [0, 1]")]
    OutOfRange { value: f64 },

    #[error("qubit {target} out of range for {n} qubits")]
    TargetOutOfRange { target: usize, n: usize },

    #[error("two-qubit gate targets must be distinct")]
    RepeatedTarget,

    #[error("generators are dependent (rank {rank} over GF(2), expected {n})")]
    DependentGenerators { rank: usize, n: usize },

    #[error("generators {first} and {second} anticommute")]
    NonCommutingGenerators { first: usize, second: usize },

    #[error("stabilizer generators must carry a real sign")]
    ImaginaryGenerator,

    #[error("regions overlap or are out of range")]
    OverlappingRegions,

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("state of {required} amplitudes exceeds the cap {cap}")]
    SizeCap { required: u128, cap: u128 },

    #[error("the generated state vanishes")]
    ZeroState,

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPsd { eigenvalue: f64 },

    #[error("circuit geometry does not match the state: {0}")]
    GeometryMismatch(String),

    #[error("partition region of {found} sites is smaller than the required {required}")]
    PartitionTooSmall { required: usize, found: usize },

    #[error("local dimensions multiply to {product}, matrix dimension is {dim}")]
    BadFactorization { dim: usize, product: usize },

    #[error("{0}")]
    Numerical(&'static str),
}
