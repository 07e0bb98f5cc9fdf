use thiserror::Error;

/// Errors produced by graph construction, the analytic engines, and the oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("edge vertices must be distinct")]
    DuplicateVertexInEdge,
    #[error("vertex {vertex} out of range for hypergraph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("duplicate edge in hypergraph")]
    DuplicateEdge,
    #[error("{{{u}, {v}}} is not an edge of the graph")]
    NotAnEdge { u: usize, v: usize },
    #[error("operation requires a simple graph (all edges on exactly 2 vertices)")]
    NotASimpleGraph,
    #[error("edge is not part of the hypergraph")]
    EdgeNotInHypergraph,
    #[error("enumeration of 2^{dimension} members exceeds cap 2^{cap}")]
    FamilyTooLarge { dimension: usize, cap: usize },
    #[error("operation requires unit cost and phase weights on every edge")]
    NonUnitWeights,
    #[error("mixer axis for vertex {vertex} is not unit length")]
    NonUnitAxis { vertex: usize },
    #[error("{what}: expected length {expected}, got {got}")]
    ShapeMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("statevector on {n} qubits exceeds oracle cap of {cap}")]
    TooManyQubits { n: usize, cap: usize },
    #[error("grid of {points} points exceeds cap of {cap}")]
    TooManyPoints { points: usize, cap: usize },
    #[error("expectation has imaginary residue {residue:e} above tolerance")]
    ResidualImaginary { residue: f64 },
    #[error("MIS penalty weight must be positive")]
    PenaltyNotPositive,
    #[error("weights must be finite")]
    NonFiniteWeight,
    #[error("grid axis needs at least 2 points")]
    DegenerateAxis,
    #[error("expected 1 to 3 scan axes, got {got}")]
    AxisCount { got: usize },
}

pub type Result<V> = std::result::Result<V, Error>;
