use thiserror::Error;

/// Everything that can go wrong while building or analysing a state.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector norm {norm} deviates from 1")]
    NotNormalized { norm: f64 },
    #[error("expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("trace {trace} deviates from 1")]
    TraceNotOne { trace: f64 },
    #[error("negative eigenvalue {value:e}")]
    NegativeEigenvalue { value: f64 },
    #[error("{num_qubits} qubits exceeds the limit of {limit} for this representation")]
    Capacity { num_qubits: usize, limit: usize },
    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitIndex { index: usize, num_qubits: usize },
    #[error("qubit subset must be non-empty and free of duplicates")]
    InvalidSubset,
    #[error("pair correlation needs two distinct qubits, got {index} twice")]
    SameQubit { index: usize },
    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("mixture weights sum to {sum}, expected 1")]
    WeightSum { sum: f64 },
    #[error("mixture weight {weight} is outside [0, 1]")]
    InvalidWeight { weight: f64 },
    #[error("state is not exchange symmetric (pair reductions differ by {deviation:e})")]
    NotSymmetric { deviation: f64 },
    #[error("need at least {required} qubits, got {found}")]
    TooFewQubits { required: usize, found: usize },
    #[error("mean collective spin vanishes, no squeezing direction exists")]
    MeanSpinZero,
    #[error("a qubit has a vanishing Bloch vector, its frame is undefined")]
    QubitBlochZero,
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },
    #[error("independent evaluations disagree: {first} vs {second}")]
    PathMismatch { first: f64, second: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
