//! Bell-pair engineering on invariant stratification spin networks.
//!
//! A network of permanently coupled qubits is described by a graph. Starting
//! from a single excitation on a reference vertex, the one-excitation
//! dynamics under a Hamiltonian `H = f(A)` stays inside the span of the
//! stratum states whenever the graph is an invariant stratification graph
//! (ISG). On that subspace the adjacency matrix acts as a Jacobi matrix, and
//! the whole problem reduces to orthogonal polynomials and their quadrature.
//!
//! Module map:
//!
//! - [`graph`]: graphs, BFS strata, the ISG degree test, Szego-Jacobi
//!   coefficients, antipodal/reflective predicates.
//! - [`jacobi`]: Jacobi matrix, eigenvalues, quadrature weights and the
//!   polynomial matrix `P[i][l] = P_i(a_l)`.
//! - [`bell`]: entanglement bound, feasibility scan, coupling synthesis,
//!   spectral and dense evolution, concurrence.
//! - [`scheme`]: association-scheme verification and intersection numbers.
//! - [`catalog`]: graph families and coefficient presets.
//! - [`heisenberg`]: full Hilbert-space cross-check of the pairwise
//!   Heisenberg realisation.
//! - [`io`]: edge-list and coefficient files, JSON/CSV number formatting.

pub mod bell;
pub mod catalog;
pub mod error;
pub mod graph;
pub mod heisenberg;
pub mod io;
pub mod jacobi;
pub mod scheme;

pub use bell::{BellDesign, FeasibleRow, VerificationReport};
pub use catalog::{CatalogItem, Preset};
pub use error::{Error, Result};
pub use graph::{DegreeTriple, DistanceMatrices, Graph, IsgVerdict, Stratification, SzegoJacobi};
pub use jacobi::{JacobiMatrix, SpectralData};
pub use heisenberg::{ClassFit, Realization};
pub use scheme::{IntersectionNumbers, SchemeVerdict, SchemeWitness};

pub use num_complex::Complex64;
