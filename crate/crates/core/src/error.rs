use thiserror::Error;

use crate::scheme::SchemeWitness;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph is disconnected: vertex {unreachable} cannot be reached from vertex 0")]
    Disconnected { unreachable: usize },

    #[error("not an invariant stratification graph from origin {origin}: vertices {a} and {b} share a stratum but have different degree triples")]
    NotIsg { origin: usize, a: usize, b: usize },
    #[error("internal error: degree-formula coefficient {name} = {formula} disagrees with matrix element {direct}")]
    CoefficientMismatch { name: String, formula: f64, direct: f64 },

    #[error("coefficient lengths inconsistent: {omega} omega values need {} alpha values, got {alpha}", omega + 1)]
    CoefficientLength { omega: usize, alpha: usize },
    #[error("omega_{index} = {value} is not strictly positive")]
    NonPositiveOmega { index: usize, value: f64 },
    #[error("eigensolver did not converge: {0}")]
    ConvergenceFailure(String),
    #[error("eigenvalues {a} and {b} collide; the Jacobi spectrum must be simple")]
    EigenvalueCollision { a: f64, b: f64 },
    #[error("quadrature weight w_{index}: recurrence gives {formula}, eigenvector gives {oracle}")]
    WeightMismatch { index: usize, formula: f64, oracle: f64 },

    #[error("stratum {stratum} is infeasible: {reason}")]
    InfeasibleRow { stratum: usize, reason: String },
    #[error("stratum {stratum} does not exist (diameter {diameter})")]
    NoSuchStratum { stratum: usize, diameter: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("not an association scheme: {0}")]
    NotScheme(SchemeWitness),

    #[error("{family} parameter too small: {detail}")]
    TooSmall { family: &'static str, detail: String },
    #[error("{family} too large: {detail}")]
    TooLarge { family: &'static str, detail: String },
    #[error("unknown preset or catalog family `{0}`")]
    UnknownPreset(String),

    #[error("{n} qubits exceeds the dense limit of {max}")]
    TooManyQubits { n: usize, max: usize },
    #[error("distance class {class}: one-excitation restriction is not affine in A_{class} (residual {residual:e})")]
    RestrictionNotAffine { class: usize, residual: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}
