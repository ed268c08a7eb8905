//! Small named graphs used across the test suites and the bundled examples.

#[allow(unused_imports)]
use alloc::vec;
use alloc::vec::Vec;

use crate::halfedge::HalfEdgeGraph;
use crate::morita::VertexOrientedGraph;

/// Rose with `n` loops on a single vertex.
pub fn rose(n: u32) -> HalfEdgeGraph {
    let edges: Vec<(u32, u32)> = (0..n).map(|_| (0, 0)).collect();
    HalfEdgeGraph::from_edges(1, &edges, None).unwrap()
}

/// Two vertices joined by three parallel edges.
pub fn theta() -> HalfEdgeGraph {
    HalfEdgeGraph::from_edges(2, &[(0, 1), (0, 1), (0, 1)], None).unwrap()
}

/// Two loops joined by a bridge.
pub fn dumbbell() -> HalfEdgeGraph {
    HalfEdgeGraph::from_edges(2, &[(0, 0), (1, 1), (0, 1)], None).unwrap()
}

/// The theta graph as a vertex-oriented admissible graph (both vertices
/// trivalent), darts listed in increasing dart order at each vertex.
pub fn gamma_theta() -> VertexOrientedGraph {
    let g = theta();
    VertexOrientedGraph::new(g, vec![vec![0, 2, 4], vec![1, 3, 5]], "theta").unwrap()
}

/// Two vertices joined by five parallel edges; the next admissible graph in
/// the same family.
pub fn gamma_five_edge() -> VertexOrientedGraph {
    let g = HalfEdgeGraph::from_edges(2, &[(0, 1), (0, 1), (0, 1), (0, 1), (0, 1)], None).unwrap();
    VertexOrientedGraph::new(
        g,
        vec![vec![0, 2, 4, 6, 8], vec![1, 3, 5, 7, 9]],
        "five-edge",
    )
    .unwrap()
}

/// The complete graph on four vertices, all valences 3.
pub fn gamma_k4() -> VertexOrientedGraph {
    let g = HalfEdgeGraph::from_edges(
        4,
        &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        None,
    )
    .unwrap();
    let orientations = (0..4).map(|v| g.darts_at(v)).collect();
    VertexOrientedGraph::new(g, orientations, "k4").unwrap()
}

/// Two vertices joined by four parallel edges: connected but even-valent,
/// so not admissible. The associated cycle cancels to zero.
pub fn gamma_banana4() -> VertexOrientedGraph {
    let g = HalfEdgeGraph::from_edges(2, &[(0, 1), (0, 1), (0, 1), (0, 1)], None).unwrap();
    VertexOrientedGraph::new(g, vec![vec![0, 2, 4, 6], vec![1, 3, 5, 7]], "banana4").unwrap()
}
