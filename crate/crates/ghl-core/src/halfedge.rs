//! Dart-based multigraphs and the surgeries the chain complex is built from.
//!
//! A graph with `E` edges owns darts `0..2E`; the edge pairing is the fixed
//! involution `d <-> d ^ 1`, so edge `i` owns darts `2i` and `2i + 1`. Loops
//! (both darts at one vertex) and parallel edges are first-class. Graphs are
//! immutable values: every surgery returns a fresh graph plus whatever
//! relabeling data the caller needs to transport edge identities.

#[allow(unused_imports)]
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// A half-edge. Dart `d` belongs to edge `d / 2`; its partner is `d ^ 1`.
pub type Dart = u32;
/// Dense vertex identifier, `0..num_vertices`.
pub type VertexId = u32;
/// Dense edge identifier, `0..num_edges`.
pub type EdgeId = u32;

/// Edge that owns dart `d`.
#[inline]
pub fn edge_of(d: Dart) -> EdgeId {
    d / 2
}

/// The other dart of the same edge.
#[inline]
pub fn partner(d: Dart) -> Dart {
    d ^ 1
}

/// The two darts of edge `e`, tail dart first.
#[inline]
pub fn darts_of(e: EdgeId) -> (Dart, Dart) {
    (2 * e, 2 * e + 1)
}

/// Finite multigraph with loops and parallel edges, via the dart involution.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfEdgeGraph {
    /// `vertex_of[d]` is the vertex carrying dart `d`; length `2E`.
    vertex_of: Vec<VertexId>,
    num_vertices: u32,
    basepoint: Option<VertexId>,
}

impl HalfEdgeGraph {
    /// Builds a graph from an edge list. Edge `i` gets darts `2i` (at `u_i`,
    /// the tail) and `2i + 1` (at `v_i`). Rejects out-of-range vertices and
    /// isolated vertices.
    pub fn from_edges(
        num_vertices: u32,
        edges: &[(VertexId, VertexId)],
        basepoint: Option<VertexId>,
    ) -> Result<Self> {
        let mut vertex_of = Vec::with_capacity(edges.len() * 2);
        for &(u, v) in edges {
            if u >= num_vertices {
                return Err(Error::UnknownVertex(u));
            }
            if v >= num_vertices {
                return Err(Error::UnknownVertex(v));
            }
            vertex_of.push(u);
            vertex_of.push(v);
        }
        if let Some(b) = basepoint {
            if b >= num_vertices {
                return Err(Error::UnknownVertex(b));
            }
        }
        let g = HalfEdgeGraph {
            vertex_of,
            num_vertices,
            basepoint,
        };
        for v in 0..num_vertices {
            if g.valence(v)? == 0 {
                return Err(Error::IsolatedVertex(v));
            }
        }
        Ok(g)
    }

    pub fn num_vertices(&self) -> u32 {
        self.num_vertices
    }

    pub fn num_edges(&self) -> u32 {
        (self.vertex_of.len() / 2) as u32
    }

    pub fn num_darts(&self) -> u32 {
        self.vertex_of.len() as u32
    }

    pub fn basepoint(&self) -> Option<VertexId> {
        self.basepoint
    }

    /// Same graph with the basepoint moved (or set).
    pub fn with_basepoint(&self, b: VertexId) -> Result<Self> {
        if b >= self.num_vertices {
            return Err(Error::UnknownVertex(b));
        }
        let mut g = self.clone();
        g.basepoint = Some(b);
        Ok(g)
    }

    /// Same graph with the basepoint forgotten.
    pub fn without_basepoint(&self) -> Self {
        let mut g = self.clone();
        g.basepoint = None;
        g
    }

    #[inline]
    pub fn vertex_of(&self, d: Dart) -> VertexId {
        self.vertex_of[d as usize]
    }

    /// Tail and head vertices of edge `e` (tail carries dart `2e`).
    #[inline]
    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        (
            self.vertex_of[2 * e as usize],
            self.vertex_of[2 * e as usize + 1],
        )
    }

    #[inline]
    pub fn is_loop(&self, e: EdgeId) -> bool {
        let (u, v) = self.endpoints(e);
        u == v
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> {
        0..self.num_edges()
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> {
        0..self.num_darts()
    }

    /// Number of darts at `v`; a loop counts twice.
    pub fn valence(&self, v: VertexId) -> Result<usize> {
        if v >= self.num_vertices {
            return Err(Error::UnknownVertex(v));
        }
        Ok(self.vertex_of.iter().filter(|&&w| w == v).count())
    }

    /// Darts at `v` in increasing dart order.
    pub fn darts_at(&self, v: VertexId) -> Vec<Dart> {
        self.vertex_of
            .iter()
            .enumerate()
            .filter(|(_, &w)| w == v)
            .map(|(d, _)| d as Dart)
            .collect()
    }

    /// The unique external edge at `v` avoiding `exclude`, if there is
    /// exactly one dart at `v` outside the excluded edge set.
    pub fn edge_at_vertex_avoiding(&self, v: VertexId, exclude: &[EdgeId]) -> Option<EdgeId> {
        let mut found = None;
        for d in self.darts_at(v) {
            let e = edge_of(d);
            if exclude.contains(&e) {
                continue;
            }
            if found.is_some() {
                return None;
            }
            found = Some(e);
        }
        found
    }

    pub fn is_connected(&self) -> bool {
        if self.num_vertices == 0 {
            return false;
        }
        let mut seen = vec![false; self.num_vertices as usize];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for d in self.darts_at(v) {
                let w = self.vertex_of(partner(d));
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.num_vertices
    }

    /// First Betti number `E - V + 1` of a connected graph.
    pub fn rank(&self) -> Result<u32> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(self.num_edges() + 1 - self.num_vertices)
    }

    /// Minimality: valence >= 3 everywhere, except that when `basepointed`
    /// the basepoint only needs valence >= 2.
    pub fn is_minimal(&self, basepointed: bool) -> bool {
        let b = if basepointed { self.basepoint } else { None };
        (0..self.num_vertices).all(|v| {
            let val = self.valence(v).unwrap_or(0);
            if Some(v) == b {
                val >= 2
            } else {
                val >= 3
            }
        })
    }

    /// True iff `edges` spans no cycle (so in particular contains no loop).
    pub fn is_forest(&self, edges: &EdgeSet) -> bool {
        let mut uf = UnionFind::new(self.num_vertices);
        for &e in edges.iter() {
            let (u, v) = self.endpoints(e);
            if !uf.union(u, v) {
                return false;
            }
        }
        true
    }

    /// Contracts non-loop edge `e`, merging its endpoints. Surviving edges
    /// are renumbered densely (edges above `e` shift down by one); the
    /// returned map sends old edge ids to new ones.
    pub fn collapse_edge(&self, e: EdgeId) -> Result<Collapse> {
        if e >= self.num_edges() {
            return Err(Error::UnknownEdge(e));
        }
        let (u, v) = self.endpoints(e);
        if u == v {
            return Err(Error::LoopCollapse(e));
        }
        let keep = u.min(v);
        let drop = u.max(v);
        let map_vertex = |w: VertexId| -> VertexId {
            if w == drop {
                keep
            } else if w > drop {
                w - 1
            } else {
                w
            }
        };
        let mut vertex_of = Vec::with_capacity(self.vertex_of.len() - 2);
        for d in self.darts() {
            if edge_of(d) == e {
                continue;
            }
            vertex_of.push(map_vertex(self.vertex_of(d)));
        }
        let edge_map: Vec<Option<EdgeId>> = (0..self.num_edges())
            .map(|j| {
                if j == e {
                    None
                } else if j > e {
                    Some(j - 1)
                } else {
                    Some(j)
                }
            })
            .collect();
        let vertex_map: Vec<VertexId> = (0..self.num_vertices).map(map_vertex).collect();
        Ok(Collapse {
            graph: HalfEdgeGraph {
                vertex_of,
                num_vertices: self.num_vertices - 1,
                basepoint: self.basepoint.map(map_vertex),
            },
            edge_map,
            vertex_map,
            merged_vertex: keep,
        })
    }

    /// Splits `v` into two vertices joined by a fresh edge. The darts in
    /// `first_part` stay at `v` (which keeps the basepoint when `v` is the
    /// basepoint); the remaining darts at `v` move to the new vertex. Both
    /// parts must have at least two darts.
    pub fn blow_up(&self, v: VertexId, first_part: &[Dart]) -> Result<BlowUp> {
        if v >= self.num_vertices {
            return Err(Error::UnknownVertex(v));
        }
        let at_v = self.darts_at(v);
        for &d in first_part {
            if !at_v.contains(&d) {
                return Err(Error::BadPartition);
            }
        }
        let mut sorted = first_part.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != first_part.len() {
            return Err(Error::BadPartition);
        }
        let second: Vec<Dart> = at_v
            .iter()
            .copied()
            .filter(|d| !sorted.contains(d))
            .collect();
        if sorted.len() < 2 || second.len() < 2 {
            return Err(Error::PartTooSmall);
        }
        let new_vertex = self.num_vertices;
        let mut vertex_of = self.vertex_of.clone();
        for &d in &second {
            vertex_of[d as usize] = new_vertex;
        }
        // new edge: tail dart at v, head dart at the new vertex
        vertex_of.push(v);
        vertex_of.push(new_vertex);
        Ok(BlowUp {
            graph: HalfEdgeGraph {
                vertex_of,
                num_vertices: self.num_vertices + 1,
                basepoint: self.basepoint,
            },
            new_edge: self.num_edges(),
            new_vertex,
        })
    }

    /// Adds a loop at the basepoint; the stabilization surgery.
    pub fn add_basepoint_loop(&self) -> Result<(Self, EdgeId)> {
        let b = self.basepoint.ok_or(Error::MissingBasepoint)?;
        self.attach_stem_to_vertex(b)
    }

    /// `G[e]`: subdivides `e` at a new midpoint and joins the basepoint to
    /// the midpoint. The tail half keeps id `e` (incident to the old tail of
    /// `e`); the head half and stem are fresh edges.
    pub fn attach_stem_to_edge(&self, e: EdgeId) -> Result<StemOnEdge> {
        let b = self.basepoint.ok_or(Error::MissingBasepoint)?;
        if e >= self.num_edges() {
            return Err(Error::UnknownEdge(e));
        }
        let head = self.vertex_of(2 * e + 1);
        let midpoint = self.num_vertices;
        let mut vertex_of = self.vertex_of.clone();
        // dart 2e+1 now ends at the midpoint; the head half runs midpoint -> head
        vertex_of[2 * e as usize + 1] = midpoint;
        vertex_of.push(midpoint);
        vertex_of.push(head);
        // stem runs basepoint -> midpoint
        vertex_of.push(b);
        vertex_of.push(midpoint);
        Ok(StemOnEdge {
            graph: HalfEdgeGraph {
                vertex_of,
                num_vertices: self.num_vertices + 1,
                basepoint: self.basepoint,
            },
            tail_half: e,
            head_half: self.num_edges(),
            stem: self.num_edges() + 1,
            midpoint,
        })
    }

    /// `G[v]`: adds an edge from the basepoint to `v` (a loop when `v` is
    /// the basepoint).
    pub fn attach_stem_to_vertex(&self, v: VertexId) -> Result<(Self, EdgeId)> {
        let b = self.basepoint.ok_or(Error::MissingBasepoint)?;
        if v >= self.num_vertices {
            return Err(Error::UnknownVertex(v));
        }
        let mut vertex_of = self.vertex_of.clone();
        vertex_of.push(b);
        vertex_of.push(v);
        Ok((
            HalfEdgeGraph {
                vertex_of,
                num_vertices: self.num_vertices,
                basepoint: self.basepoint,
            },
            self.num_edges(),
        ))
    }

    /// Edges with exactly one endpoint in the vertex set `a`.
    pub fn boundary_edges(&self, a: &[VertexId]) -> Vec<EdgeId> {
        self.edges()
            .filter(|&e| {
                let (u, v) = self.endpoints(e);
                a.contains(&u) != a.contains(&v)
            })
            .collect()
    }
}

/// Result of [`HalfEdgeGraph::collapse_edge`].
#[derive(Debug, Clone)]
pub struct Collapse {
    pub graph: HalfEdgeGraph,
    /// Old edge id -> new edge id; `None` exactly for the collapsed edge.
    pub edge_map: Vec<Option<EdgeId>>,
    /// Old vertex id -> new vertex id (both endpoints land on the merge).
    pub vertex_map: Vec<VertexId>,
    /// Label of the merged vertex in the new graph.
    pub merged_vertex: VertexId,
}

/// Result of [`HalfEdgeGraph::blow_up`].
#[derive(Debug, Clone)]
pub struct BlowUp {
    pub graph: HalfEdgeGraph,
    pub new_edge: EdgeId,
    pub new_vertex: VertexId,
}

/// Result of [`HalfEdgeGraph::attach_stem_to_edge`].
#[derive(Debug, Clone)]
pub struct StemOnEdge {
    pub graph: HalfEdgeGraph,
    /// Half of the subdivided edge incident to its old tail; keeps the old id.
    pub tail_half: EdgeId,
    /// Half incident to the old head.
    pub head_half: EdgeId,
    /// The new edge from the basepoint to the midpoint.
    pub stem: EdgeId,
    pub midpoint: VertexId,
}

/// A subset of the edges of an ambient graph, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EdgeSet {
    edges: Vec<EdgeId>,
}

impl EdgeSet {
    pub fn new(graph: &HalfEdgeGraph, edges: impl IntoIterator<Item = EdgeId>) -> Result<Self> {
        let mut v: Vec<EdgeId> = edges.into_iter().collect();
        for &e in &v {
            if e >= graph.num_edges() {
                return Err(Error::UnknownEdge(e));
            }
        }
        v.sort_unstable();
        v.dedup();
        Ok(EdgeSet { edges: v })
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, EdgeId> {
        self.edges.iter()
    }
}

/// A simple cycle inside an ambient graph. The edge list order is the sign
/// reference for forest enumeration; it is usually, but not necessarily, a
/// travel order around the cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polygon {
    pub edges: Vec<EdgeId>,
    pub vertices: Vec<VertexId>,
}

impl Polygon {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Checks the stored edges form a single simple cycle on exactly the
    /// stored vertices.
    pub fn validate(&self, g: &HalfEdgeGraph) -> Result<()> {
        let m = self.edges.len();
        if m == 0 || m != self.vertices.len() {
            return Err(Error::BadPolygons);
        }
        let mut vs = self.vertices.clone();
        vs.sort_unstable();
        vs.dedup();
        if vs.len() != m {
            return Err(Error::BadPolygons);
        }
        let mut es = self.edges.clone();
        es.sort_unstable();
        es.dedup();
        if es.len() != m {
            return Err(Error::BadPolygons);
        }
        // every vertex meets exactly two polygon darts
        let mut degree = alloc::collections::BTreeMap::new();
        for &e in &self.edges {
            if e >= g.num_edges() {
                return Err(Error::UnknownEdge(e));
            }
            let (u, v) = g.endpoints(e);
            for w in [u, v] {
                if vs.binary_search(&w).is_err() {
                    return Err(Error::BadPolygons);
                }
                *degree.entry(w).or_insert(0u32) += 1;
            }
        }
        if degree.len() != m || degree.values().any(|&d| d != 2) {
            return Err(Error::BadPolygons);
        }
        // connected: a degree-2 graph on m vertices with m edges is a single
        // cycle iff a walk from any start visits everything
        let mut seen_e = vec![false; m];
        let mut seen_v = vec![self.vertices[0]];
        let mut frontier = vec![self.vertices[0]];
        while let Some(v) = frontier.pop() {
            for (i, &e) in self.edges.iter().enumerate() {
                if seen_e[i] {
                    continue;
                }
                let (a, b) = g.endpoints(e);
                let next = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                seen_e[i] = true;
                if !seen_v.contains(&next) {
                    seen_v.push(next);
                    frontier.push(next);
                }
            }
        }
        if seen_v.len() != m {
            return Err(Error::BadPolygons);
        }
        Ok(())
    }
}

/// One maximal forest of a disjoint polygon union, with its sign.
#[derive(Debug, Clone)]
pub struct MaxForest {
    /// Forest edges in the order induced from the polygon concatenation.
    pub edges: Vec<EdgeId>,
    /// Product over polygons of `(-1)^j`, `j` the 1-based deleted position.
    pub sign: i32,
    /// 1-based deleted position per polygon.
    pub deleted: Vec<usize>,
}

/// All maximal forests of a union of disjoint polygons: one edge is deleted
/// from each polygon, and the forest keeps the concatenated edge order.
pub fn maximal_forests_of_polygon_union(
    g: &HalfEdgeGraph,
    polygons: &[Polygon],
) -> Result<Vec<MaxForest>> {
    let mut seen_edges = EdgeSet::default();
    let mut seen_vertices: Vec<VertexId> = Vec::new();
    for p in polygons {
        p.validate(g)?;
        for &e in &p.edges {
            if seen_edges.contains(e) {
                return Err(Error::BadPolygons);
            }
            seen_edges = EdgeSet::new(g, seen_edges.iter().copied().chain([e]))?;
        }
        for &v in &p.vertices {
            if seen_vertices.contains(&v) {
                return Err(Error::BadPolygons);
            }
            seen_vertices.push(v);
        }
    }
    let mut out = Vec::new();
    let k = polygons.len();
    let mut choice = vec![1usize; k];
    loop {
        let mut edges = Vec::new();
        let mut sign = 1i32;
        for (p, &j) in polygons.iter().zip(choice.iter()) {
            for (idx, &e) in p.edges.iter().enumerate() {
                if idx + 1 != j {
                    edges.push(e);
                }
            }
            if j % 2 == 1 {
                sign = -sign;
            }
        }
        out.push(MaxForest {
            edges,
            sign,
            deleted: choice.clone(),
        });
        // odometer over deleted positions
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if choice[i] < polygons[i].len() {
                choice[i] += 1;
                break;
            }
            choice[i] = 1;
        }
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: u32) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = self.parent[x as usize];
        }
        x
    }

    /// Returns false if `x` and `y` were already connected.
    fn union(&mut self, x: u32, y: u32) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        self.parent[rx as usize] = ry;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn valence_counts_loops_twice() {
        let rose = fixtures::rose(2);
        assert_eq!(rose.valence(0).unwrap(), 4);
        let theta = fixtures::theta();
        assert_eq!(theta.valence(0).unwrap(), 3);
        assert_eq!(theta.valence(1).unwrap(), 3);
        let db = fixtures::dumbbell();
        assert_eq!(db.valence(0).unwrap(), 3);
        assert_eq!(db.valence(1).unwrap(), 3);
        assert!(db.valence(7).is_err());
    }

    #[test]
    fn rank_is_euler_characteristic() {
        assert_eq!(fixtures::rose(5).rank().unwrap(), 5);
        assert_eq!(fixtures::theta().rank().unwrap(), 2);
        // theta blown up into two triangles joined by three edges
        let g = HalfEdgeGraph::from_edges(
            6,
            &[
                (0, 1),
                (1, 2),
                (2, 0),
                (3, 4),
                (4, 5),
                (5, 3),
                (0, 3),
                (1, 4),
                (2, 5),
            ],
            None,
        )
        .unwrap();
        assert_eq!(g.rank().unwrap(), 4);
        let two_pieces =
            HalfEdgeGraph::from_edges(2, &[(0, 0), (1, 1)], None).unwrap();
        assert!(two_pieces.rank().is_err());
    }

    #[test]
    fn minimality() {
        assert!(fixtures::theta().is_minimal(false));
        // subdivided loop: bivalent vertex
        let g = HalfEdgeGraph::from_edges(2, &[(0, 1), (0, 1)], None).unwrap();
        assert!(!g.is_minimal(false));
        let db = fixtures::dumbbell().with_basepoint(0).unwrap();
        assert!(db.is_minimal(true));
        // bivalent basepoint is fine, bivalent non-basepoint is not
        let c = HalfEdgeGraph::from_edges(2, &[(0, 1), (0, 1), (1, 1)], Some(0)).unwrap();
        assert!(c.is_minimal(true));
        assert!(!c.is_minimal(false));
    }

    #[test]
    fn forests() {
        let theta = fixtures::theta();
        let one = EdgeSet::new(&theta, [0]).unwrap();
        assert!(theta.is_forest(&one));
        let two = EdgeSet::new(&theta, [0, 1]).unwrap();
        assert!(!theta.is_forest(&two)); // two parallel edges close a cycle
        let rose = fixtures::rose(1);
        let lp = EdgeSet::new(&rose, [0]).unwrap();
        assert!(!rose.is_forest(&lp));
        let db = fixtures::dumbbell();
        let bridge = EdgeSet::new(&db, [2]).unwrap();
        assert!(db.is_forest(&bridge));
    }

    #[test]
    fn forest_rank_formula_matches_union_find() {
        // |S| == touched vertices - components(S), cross-checked on theta subsets
        let g = HalfEdgeGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0), (0, 1)], None).unwrap();
        for mask in 0u32..16 {
            let edges: Vec<EdgeId> = (0..4).filter(|i| mask & (1 << i) != 0).collect();
            let s = EdgeSet::new(&g, edges.iter().copied()).unwrap();
            let mut touched: Vec<VertexId> = Vec::new();
            for &e in s.iter() {
                let (u, v) = g.endpoints(e);
                touched.push(u);
                touched.push(v);
            }
            touched.sort_unstable();
            touched.dedup();
            let mut uf = UnionFind::new(g.num_vertices());
            let mut comps = touched.len();
            for &e in s.iter() {
                let (u, v) = g.endpoints(e);
                if uf.union(u, v) {
                    comps -= 1;
                }
            }
            assert_eq!(g.is_forest(&s), s.len() == touched.len() - comps);
        }
    }

    #[test]
    fn collapse_theta_gives_rose() {
        let theta = fixtures::theta();
        let c = theta.collapse_edge(0).unwrap();
        assert_eq!(c.graph.num_vertices(), 1);
        assert_eq!(c.graph.num_edges(), 2);
        assert!(c.graph.is_loop(0) && c.graph.is_loop(1));
        assert_eq!(c.edge_map, vec![None, Some(0), Some(1)]);
        // surviving-edge relabeling is a bijection
        let db = fixtures::dumbbell();
        let c = db.collapse_edge(2).unwrap();
        assert_eq!(c.graph.num_edges(), 2);
        assert!(c.graph.is_loop(0) && c.graph.is_loop(1));
        assert!(db.collapse_edge(0).is_err()); // loop collapse rejected
    }

    #[test]
    fn collapse_tracks_basepoint() {
        let theta = fixtures::theta().with_basepoint(1).unwrap();
        let c = theta.collapse_edge(2).unwrap();
        assert_eq!(c.graph.basepoint(), Some(0));
        assert_eq!(c.merged_vertex, 0);
    }

    #[test]
    fn blow_up_splits_valence() {
        let rose = fixtures::rose(2);
        // darts at the single vertex: 0,1,2,3
        let b = rose.blow_up(0, &[0, 1]).unwrap();
        assert_eq!(b.graph.num_vertices(), 2);
        assert_eq!(b.graph.num_edges(), 3);
        assert_eq!(b.graph.valence(0).unwrap(), 3);
        assert_eq!(b.graph.valence(1).unwrap(), 3);
        assert!(rose.blow_up(0, &[0]).is_err());
        // valence-5 vertex, 2|3 split
        let r = HalfEdgeGraph::from_edges(2, &[(0, 0), (0, 0), (0, 1), (1, 1)], None).unwrap();
        let b = r.blow_up(0, &[0, 1]).unwrap();
        assert_eq!(b.graph.valence(0).unwrap(), 3);
        assert_eq!(b.graph.valence(2).unwrap(), 4);
        // rank is preserved
        assert_eq!(b.graph.rank().unwrap(), r.rank().unwrap());
    }

    #[test]
    fn blow_up_keeps_basepoint_on_first_part() {
        let rose = fixtures::rose(2).with_basepoint(0).unwrap();
        let b = rose.blow_up(0, &[0, 2]).unwrap();
        assert_eq!(b.graph.basepoint(), Some(0));
        assert_eq!(b.graph.vertex_of(0), 0);
        assert_eq!(b.graph.vertex_of(1), b.new_vertex);
    }

    #[test]
    fn stem_surgeries_raise_rank_by_one() {
        let g = fixtures::theta().with_basepoint(0).unwrap();
        let n = g.rank().unwrap();

        let (looped, _) = g.add_basepoint_loop().unwrap();
        assert_eq!(looped.rank().unwrap(), n + 1);
        assert_eq!(looped.valence(0).unwrap(), g.valence(0).unwrap() + 2);

        let s = g.attach_stem_to_edge(1).unwrap();
        assert_eq!(s.graph.rank().unwrap(), n + 1);
        assert_eq!(s.graph.num_edges(), g.num_edges() + 2);
        assert_eq!(s.graph.num_vertices(), g.num_vertices() + 1);
        assert_eq!(s.graph.valence(s.midpoint).unwrap(), 3);

        let (h, stem) = g.attach_stem_to_vertex(1).unwrap();
        assert_eq!(h.rank().unwrap(), n + 1);
        assert_eq!(h.endpoints(stem), (0, 1));
        // G[b] is the basepoint loop
        let (hb, e) = g.attach_stem_to_vertex(0).unwrap();
        assert!(hb.is_loop(e));
        assert_eq!(hb.valence(0).unwrap(), g.valence(0).unwrap() + 2);
    }

    #[test]
    fn boundary_edges_of_subgraph() {
        let g = HalfEdgeGraph::from_edges(
            6,
            &[
                (0, 1),
                (1, 2),
                (2, 0),
                (3, 4),
                (4, 5),
                (5, 3),
                (0, 3),
                (1, 4),
                (2, 5),
            ],
            None,
        )
        .unwrap();
        assert_eq!(g.boundary_edges(&[0, 1, 2]), vec![6, 7, 8]);
        assert!(g.boundary_edges(&[0, 1, 2, 3, 4, 5]).is_empty());
        let theta = fixtures::theta();
        assert_eq!(theta.boundary_edges(&[0]), vec![0, 1, 2]);
    }

    #[test]
    fn maximal_forest_enumeration() {
        let g = HalfEdgeGraph::from_edges(
            6,
            &[
                (0, 1),
                (1, 2),
                (2, 0),
                (3, 4),
                (4, 5),
                (5, 3),
                (0, 3),
                (1, 4),
                (2, 5),
            ],
            None,
        )
        .unwrap();
        let p1 = Polygon {
            edges: vec![0, 1, 2],
            vertices: vec![1, 2, 0],
        };
        let p2 = Polygon {
            edges: vec![3, 4, 5],
            vertices: vec![4, 5, 3],
        };
        let forests = maximal_forests_of_polygon_union(&g, &[p1.clone(), p2.clone()]).unwrap();
        assert_eq!(forests.len(), 9);
        // deleting the 2nd edge of a triangle contributes (-1)^2 = +1
        let f = forests.iter().find(|f| f.deleted == vec![2, 2]).unwrap();
        assert_eq!(f.sign, 1);
        let f = forests.iter().find(|f| f.deleted == vec![1, 2]).unwrap();
        assert_eq!(f.sign, -1);
        // overlap rejected
        assert!(maximal_forests_of_polygon_union(&g, &[p1.clone(), p1.clone()]).is_err());

        // one pentagon -> 5 forests
        let c5 = HalfEdgeGraph::from_edges(
            5,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)],
            None,
        )
        .unwrap();
        let p = Polygon {
            edges: vec![0, 1, 2, 3, 4],
            vertices: vec![1, 2, 3, 4, 0],
        };
        assert_eq!(
            maximal_forests_of_polygon_union(&c5, &[p]).unwrap().len(),
            5
        );
    }

    #[test]
    fn surgery_arithmetic() {
        let g = fixtures::theta().with_basepoint(0).unwrap();
        let c = g.collapse_edge(1).unwrap();
        assert_eq!(c.graph.num_vertices(), g.num_vertices() - 1);
        assert_eq!(c.graph.num_edges(), g.num_edges() - 1);
        assert_eq!(c.graph.rank().unwrap(), g.rank().unwrap());
        // sum of valences is twice the edge count
        for graph in [fixtures::theta(), fixtures::dumbbell(), fixtures::rose(3)] {
            let total: usize = (0..graph.num_vertices())
                .map(|v| graph.valence(v).unwrap())
                .sum();
            assert_eq!(total, 2 * graph.num_edges() as usize);
        }
    }

    #[test]
    fn involution_is_fixed_point_free() {
        for graph in [fixtures::theta(), fixtures::dumbbell(), fixtures::rose(3)] {
            for d in graph.darts() {
                assert_ne!(partner(d), d);
                assert_eq!(partner(partner(d)), d);
            }
        }
    }
}
