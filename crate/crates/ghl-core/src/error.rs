use alloc::string::String;

/// Errors surfaced by the kernel.
///
/// Every failure is a precondition violation or a structural inconsistency;
/// there are no recoverable "retry" conditions in exact arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(u32),
    #[error("unknown edge {0}")]
    UnknownEdge(u32),
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph has an isolated vertex {0}")]
    IsolatedVertex(u32),
    #[error("cannot collapse loop edge {0}")]
    LoopCollapse(u32),
    #[error("blow-up partition part has fewer than 2 darts")]
    PartTooSmall,
    #[error("blow-up partition is not a bipartition of the darts at the vertex")]
    BadPartition,
    #[error("graph has no basepoint")]
    MissingBasepoint,
    #[error("edge set is not a forest")]
    NotAForest,
    #[error("graph is not minimal (valence < 3 away from the basepoint)")]
    NotMinimal,
    #[error("polygons overlap or are not disjoint simple cycles")]
    BadPolygons,
    #[error("sigma is not a permutation family matching the vertex valences")]
    BadSigma,
    #[error("graph is not admissible: {0}")]
    NotAdmissible(String),
    #[error("vertex-oriented graph has an orientation-reversing automorphism")]
    DegenerateGamma,
    #[error("chain gradings do not match: {0}")]
    GradingMismatch(String),
    #[error("chain is not basepointed")]
    NotBasepointed,
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("boundary term missing from enumerated basis: {0}")]
    BasisIncomplete(String),
    #[error("ordered subgraphs are not edge-disjoint")]
    OverlappingEdges,
    #[error("malformed cell key: {0}")]
    BadCellKey(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
}
