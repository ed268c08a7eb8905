//! Oriented cells, sparse rational chains, the boundary operators `d_R` and
//! `d_C`, the coboundaries `delta_R` and `delta_C`, the bilinear pairing, and
//! the ordered-graph sign calculus.
//!
//! A generator is an isomorphism class of `(G, F)` with `F` ordered up to
//! even permutation and the relation `(G, F) + (G, -F) = 0`. Chains store
//! only canonical keys, so chain equality is map equality. Sign conventions,
//! with forest positions counted from 1:
//!
//! * `d_R(G, F) = sum_i (-1)^i (G, F - f_i)` — remove the i-th forest edge.
//! * `d_C(G, F) = sum_i (-1)^(i+1) (G_{f_i}, F_{f_i})` — collapse it.
//! * `delta_R(G, F) = (-1)^(|F|+1) sum_e (G, F.e)` over non-forest, non-loop
//!   edges keeping `F + e` a forest, the new edge ordered last.
//! * `delta_C(G, F) = (-1)^|F| sum_P (G^P, F.e_P)` over vertex bipartitions
//!   with both parts of size at least 2, the new edge ordered last.
//!
//! Removing the edge of a one-edge forest therefore gives `-(G, empty)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::canon::{self, CanonResult, CellKey};
use crate::halfedge::{EdgeId, HalfEdgeGraph};
use crate::{Error, Rat, Result};

/// Which quotient spine the chain lives in: plain graphs or basepointed ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variant {
    Out,
    Aut,
}

impl core::fmt::Display for Variant {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Variant::Out => "out",
            Variant::Aut => "aut",
        })
    }
}

/// A connected minimal graph with an ordered forest; the raw (uncanonized)
/// form of a generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedCell {
    pub graph: HalfEdgeGraph,
    pub forest: Vec<EdgeId>,
    pub basepointed: bool,
}

impl OrientedCell {
    pub fn new(graph: HalfEdgeGraph, forest: Vec<EdgeId>, basepointed: bool) -> Result<Self> {
        let cell = OrientedCell {
            graph,
            forest,
            basepointed,
        };
        cell.validate()?;
        Ok(cell)
    }

    fn validate(&self) -> Result<()> {
        if self.basepointed && self.graph.basepoint().is_none() {
            return Err(Error::MissingBasepoint);
        }
        if !self.graph.is_connected() {
            return Err(Error::Disconnected);
        }
        if !self.graph.is_minimal(self.basepointed) {
            return Err(Error::NotMinimal);
        }
        let set = crate::halfedge::EdgeSet::new(&self.graph, self.forest.iter().copied())?;
        if set.len() != self.forest.len() || !self.graph.is_forest(&set) {
            return Err(Error::NotAForest);
        }
        Ok(())
    }

    pub fn dim(&self) -> u32 {
        self.forest.len() as u32
    }

    pub fn rank(&self) -> u32 {
        self.graph.rank().expect("validated connected")
    }

    pub fn variant(&self) -> Variant {
        if self.basepointed {
            Variant::Aut
        } else {
            Variant::Out
        }
    }

    /// Bigrade `(p, q)`: `q` is the vertex count, `p = |F| - q`.
    pub fn bigrade(&self) -> (i64, u32) {
        let q = self.graph.num_vertices();
        (self.dim() as i64 - q as i64, q)
    }

    pub fn canonicalize(&self) -> Result<CanonResult> {
        canon::canonicalize(&self.graph, &self.forest, self.basepointed)
    }
}

/// Decodes a canonical key back into an oriented cell (forest in ascending
/// canonical order).
pub fn cell_of_key(key: &CellKey) -> Result<OrientedCell> {
    let (graph, forest, basepointed) = canon::decode_key(key)?;
    OrientedCell::new(graph, forest, basepointed)
}

/// Dart-level automorphism order of a canonical cell.
pub fn cell_aut_order(key: &CellKey) -> Result<u64> {
    let cell = cell_of_key(key)?;
    Ok(cell.canonicalize()?.aut_order)
}

/// Bigrade of a canonical cell of the given dimension, read off the key.
pub fn key_bigrade(key: &CellKey, dim: u32) -> (i64, u32) {
    let q = key.num_vertices();
    (dim as i64 - q as i64, q)
}

/// Homogeneous sparse rational chain keyed by canonical cells.
///
/// All keys share the rank, the variant, and the total dimension `p + q`;
/// the vertex count `q` may vary across terms (mixed bigrades of one total
/// degree). Zero coefficients and orientation-reversing classes are never
/// stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    rank: u32,
    variant: Variant,
    dim: u32,
    terms: BTreeMap<CellKey, Rat>,
}

impl Chain {
    pub fn zero(rank: u32, variant: Variant, dim: u32) -> Self {
        Chain {
            rank,
            variant,
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// Normalizes one generator into the quotient: canonicalize, drop it if
    /// orientation-reversing, otherwise store `coeff * sign` on the key.
    pub fn term(cell: &OrientedCell, coeff: Rat) -> Result<Chain> {
        let mut c = Chain::zero(cell.rank(), cell.variant(), cell.dim());
        c.add_cell(cell, coeff)?;
        Ok(c)
    }

    /// Adds `coeff * cell` into this chain, checking the grading.
    pub fn add_cell(&mut self, cell: &OrientedCell, coeff: Rat) -> Result<()> {
        if cell.rank() != self.rank || cell.variant() != self.variant || cell.dim() != self.dim {
            return Err(Error::GradingMismatch(format!(
                "cell (rank {}, {}, dim {}) into chain (rank {}, {}, dim {})",
                cell.rank(),
                cell.variant(),
                cell.dim(),
                self.rank,
                self.variant,
                self.dim
            )));
        }
        let canon = cell.canonicalize()?;
        if canon.orientation_reversing {
            return Ok(());
        }
        self.add_key(canon.key, coeff * Rat::from_integer(canon.sign.into()));
        Ok(())
    }

    pub(crate) fn add_key(&mut self, key: CellKey, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Rebuilds a chain from raw `(key, coeff)` pairs, re-validating each key.
    pub fn from_terms(
        rank: u32,
        variant: Variant,
        dim: u32,
        terms: impl IntoIterator<Item = (CellKey, Rat)>,
    ) -> Result<Chain> {
        let mut c = Chain::zero(rank, variant, dim);
        for (key, coeff) in terms {
            let cell = cell_of_key(&key)?;
            c.add_cell(&cell, coeff)?;
        }
        Ok(c)
    }

    /// Merges already-canonical terms without re-deriving them. The caller
    /// guarantees the keys are canonical for this grading; used by the
    /// parallel reduction drivers.
    pub fn merge(&mut self, other: Chain) -> Result<()> {
        self.grading_check(&other, true)?;
        for (k, v) in other.terms {
            self.add_key(k, v);
        }
        Ok(())
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, key: &CellKey) -> Rat {
        self.terms.get(key).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CellKey, &Rat)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &CellKey> {
        self.terms.keys()
    }

    fn grading_check(&self, other: &Chain, same_dim: bool) -> Result<()> {
        if self.rank != other.rank
            || self.variant != other.variant
            || (same_dim && self.dim != other.dim)
        {
            return Err(Error::GradingMismatch(format!(
                "(rank {}, {}, dim {}) vs (rank {}, {}, dim {})",
                self.rank, self.variant, self.dim, other.rank, other.variant, other.dim
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Chain) -> Result<Chain> {
        self.grading_check(other, true)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_key(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Chain) -> Result<Chain> {
        self.grading_check(other, true)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_key(k.clone(), -v.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> Chain {
        if c.is_zero() {
            return Chain::zero(self.rank, self.variant, self.dim);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c.clone();
        }
        out
    }

    /// Terms on which the chains disagree, as `(key, self, other)`.
    pub fn diff(&self, other: &Chain) -> Vec<(CellKey, Rat, Rat)> {
        let mut out = Vec::new();
        let mut keys: Vec<&CellKey> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        for k in keys {
            let a = self.coeff(k);
            let b = other.coeff(k);
            if a != b {
                out.push((k.clone(), a, b));
            }
        }
        out
    }

    /// Horizontal boundary: remove each forest edge with sign `(-1)^i`.
    pub fn d_r(&self) -> Chain {
        let mut out = Chain::zero(self.rank, self.variant, self.dim.saturating_sub(1));
        for (key, coeff) in &self.terms {
            let cell = cell_of_key(key).expect("stored keys decode");
            d_r_cell(&cell, coeff, &mut out);
        }
        out
    }

    /// Vertical boundary: collapse each forest edge with sign `(-1)^(i+1)`.
    pub fn d_c(&self) -> Chain {
        let mut out = Chain::zero(self.rank, self.variant, self.dim.saturating_sub(1));
        for (key, coeff) in &self.terms {
            let cell = cell_of_key(key).expect("stored keys decode");
            d_c_cell(&cell, coeff, &mut out);
        }
        out
    }

    /// Full boundary `d_R + d_C`.
    pub fn boundary(&self) -> Chain {
        let mut out = self.d_r();
        let dc = self.d_c();
        for (k, v) in dc.terms {
            out.add_key(k, v);
        }
        out
    }

    /// Horizontal coboundary: adjoin each admissible edge, ordered last,
    /// with global sign `(-1)^(|F|+1)`.
    pub fn delta_r(&self) -> Chain {
        let mut out = Chain::zero(self.rank, self.variant, self.dim + 1);
        for (key, coeff) in &self.terms {
            let cell = cell_of_key(key).expect("stored keys decode");
            delta_r_cell(&cell, coeff, &mut out);
        }
        out
    }

    /// Vertical coboundary: blow up each fat vertex in all ways, the new
    /// edge ordered last, with global sign `(-1)^|F|`.
    pub fn delta_c(&self) -> Chain {
        let mut out = Chain::zero(self.rank, self.variant, self.dim + 1);
        for (key, coeff) in &self.terms {
            let cell = cell_of_key(key).expect("stored keys decode");
            delta_c_cell(&cell, coeff, &mut out);
        }
        out
    }

    /// Bilinear extension of the signed isomorphism count. Since both chains
    /// are stored canonically this is `sum_K a_K b_K |Aut(K)|`.
    pub fn pair(&self, other: &Chain) -> Result<Rat> {
        self.grading_check(other, true)?;
        let mut total = Rat::zero();
        for (key, a) in &self.terms {
            let Some(b) = other.terms.get(key) else {
                continue;
            };
            let aut = cell_aut_order(key)?;
            total += a.clone() * b.clone() * Rat::from_integer(aut.into());
        }
        Ok(total)
    }
}

pub(crate) fn d_r_cell(cell: &OrientedCell, coeff: &Rat, out: &mut Chain) {
    let k = cell.forest.len();
    for i in 1..=k {
        let mut forest = cell.forest.clone();
        forest.remove(i - 1);
        let face = OrientedCell {
            graph: cell.graph.clone(),
            forest,
            basepointed: cell.basepointed,
        };
        let sign = if i % 2 == 0 { 1 } else { -1 };
        out.add_cell(&face, coeff.clone() * Rat::from_integer(sign.into()))
            .expect("face grading");
    }
}

pub(crate) fn d_c_cell(cell: &OrientedCell, coeff: &Rat, out: &mut Chain) {
    let k = cell.forest.len();
    for i in 1..=k {
        let e = cell.forest[i - 1];
        let collapse = cell.graph.collapse_edge(e).expect("forest edge is not a loop");
        let forest: Vec<EdgeId> = cell
            .forest
            .iter()
            .filter(|&&f| f != e)
            .map(|&f| collapse.edge_map[f as usize].expect("surviving edge"))
            .collect();
        let face = OrientedCell {
            graph: collapse.graph,
            forest,
            basepointed: cell.basepointed,
        };
        let sign = if i % 2 == 0 { -1 } else { 1 };
        out.add_cell(&face, coeff.clone() * Rat::from_integer(sign.into()))
            .expect("face grading");
    }
}

pub(crate) fn delta_r_cell(cell: &OrientedCell, coeff: &Rat, out: &mut Chain) {
    let k = cell.forest.len() as i32;
    let global = if k % 2 == 0 { -1 } else { 1 }; // (-1)^(|F|+1)
    for e in cell.graph.edges() {
        if cell.forest.contains(&e) || cell.graph.is_loop(e) {
            continue;
        }
        let mut forest = cell.forest.clone();
        forest.push(e);
        let set = crate::halfedge::EdgeSet::new(&cell.graph, forest.iter().copied())
            .expect("edges in range");
        if !cell.graph.is_forest(&set) {
            continue;
        }
        let coface = OrientedCell {
            graph: cell.graph.clone(),
            forest,
            basepointed: cell.basepointed,
        };
        out.add_cell(&coface, coeff.clone() * Rat::from_integer(global.into()))
            .expect("coface grading");
    }
}

pub(crate) fn delta_c_cell(cell: &OrientedCell, coeff: &Rat, out: &mut Chain) {
    let k = cell.forest.len() as i32;
    let global = if k % 2 == 0 { 1 } else { -1 }; // (-1)^|F|
    let basepoint = if cell.basepointed {
        cell.graph.basepoint()
    } else {
        None
    };
    for v in 0..cell.graph.num_vertices() {
        let darts = cell.graph.darts_at(v);
        let m = darts.len();
        if m < 4 {
            continue;
        }
        // unordered bipartitions: subsets containing the least dart, both
        // sides of size >= 2
        for mask in 0u32..(1 << (m - 1)) {
            let mut first: Vec<u32> = alloc::vec![darts[0]];
            for (j, &d) in darts.iter().enumerate().skip(1) {
                if mask & (1 << (j - 1)) != 0 {
                    first.push(d);
                }
            }
            if first.len() < 2 || m - first.len() < 2 {
                continue;
            }
            let mut placements: Vec<Vec<u32>> = alloc::vec![first.clone()];
            if basepoint == Some(v) {
                // the basepoint may end up on either side of the new edge;
                // both cofaces collapse back onto this cell, so adjointness
                // against d_C needs both
                let second: Vec<u32> = darts
                    .iter()
                    .copied()
                    .filter(|d| !first.contains(d))
                    .collect();
                placements.push(second);
            }
            for part in placements {
                let blow = cell.graph.blow_up(v, &part).expect("valid partition");
                let mut forest = cell.forest.clone();
                forest.push(blow.new_edge);
                let coface = OrientedCell {
                    graph: blow.graph,
                    forest,
                    basepointed: cell.basepointed,
                };
                out.add_cell(&coface, coeff.clone() * Rat::from_integer(global.into()))
                    .expect("coface grading");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// ordered-graph calculus
// ---------------------------------------------------------------------------

/// A subgraph of interest with a total edge ordering (the list order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedEdgeGraph {
    pub edges: Vec<EdgeId>,
}

impl OrderedEdgeGraph {
    pub fn new(edges: Vec<EdgeId>) -> Self {
        OrderedEdgeGraph { edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Disjoint union with `A`'s edges first; `B`'s labels shift up by `e(A)`.
pub fn ordered_concat(a: &OrderedEdgeGraph, b: &OrderedEdgeGraph) -> Result<OrderedEdgeGraph> {
    for e in &b.edges {
        if a.edges.contains(e) {
            return Err(Error::OverlappingEdges);
        }
    }
    let mut edges = a.edges.clone();
    edges.extend_from_slice(&b.edges);
    Ok(OrderedEdgeGraph { edges })
}

/// The alternating-forest cycle over a disjoint polygon union:
/// `Z = sum_F eps_F (G, F)` with `F` running over the maximal forests of the
/// union, ordered by the polygon concatenation. Satisfies `d_R(Z) = 0`.
pub fn dr_cycle_over_forests(
    g: &HalfEdgeGraph,
    polygons: &[crate::halfedge::Polygon],
    basepointed: bool,
) -> Result<Chain> {
    let forests = crate::halfedge::maximal_forests_of_polygon_union(g, polygons)?;
    let dim: usize = polygons.iter().map(|p| p.len() - 1).sum();
    let rank = g.rank()?;
    let variant = if basepointed { Variant::Aut } else { Variant::Out };
    let mut out = Chain::zero(rank, variant, dim as u32);
    for f in forests {
        let cell = OrientedCell::new(g.clone(), f.edges, basepointed)?;
        out.add_cell(&cell, Rat::from_integer(f.sign.into()))?;
    }
    Ok(out)
}

/// `d_R` on a bare ordered edge list, as a formal signed sum of sublists;
/// the generalized horizontal boundary of an edge-oriented graph.
pub fn d_r_ordered(a: &OrderedEdgeGraph) -> Vec<(i32, OrderedEdgeGraph)> {
    let mut out = Vec::new();
    for i in 1..=a.edges.len() {
        let mut edges = a.edges.clone();
        edges.remove(i - 1);
        let sign = if i % 2 == 0 { 1 } else { -1 };
        out.push((sign, OrderedEdgeGraph { edges }));
    }
    out
}
