//! Canonical forms, automorphism orders, and signed isomorphism counting for
//! forested multigraph cells.
//!
//! A cell is a connected minimal graph `G` with an ordered forest `F` and an
//! optional basepoint. Two cells are the same generator exactly when they are
//! isomorphic as `(graph, forest set, basepoint)` triples; the forest
//! *ordering* only contributes a sign. This module computes an injective
//! canonical key for the triple, the sign relating an input ordering to the
//! canonical one, the dart-level automorphism order, and whether some
//! automorphism reverses the orientation (making the generator zero).
//!
//! The labeling algorithm is exact color refinement (valence, basepoint,
//! forest incidence, loop and parallel-edge multiplicities) followed by full
//! individualization-refinement backtracking; among all discrete labelings
//! the lexicographically least serialization wins. No hashing is involved,
//! so there are no collision risks. Graphs here stay small (tens of
//! vertices), which keeps the search cheap.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
#[allow(unused_imports)]
use alloc::vec;
use alloc::vec::Vec;

use crate::halfedge::{edge_of, partner, EdgeId, EdgeSet, HalfEdgeGraph, VertexId};
use crate::{Error, Result};

/// Canonical, injective serialization of an isomorphism class of
/// `(graph, forest, basepoint)`. The byte form is the external string
/// `q=<V>;b=<idx|->;E=<u0-v0,...>;F=<i0,...>`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellKey(Vec<u8>);

impl CellKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn as_str(&self) -> &str {
        core::str::from_utf8(&self.0).expect("cell keys are ascii")
    }

    pub fn from_string(s: String) -> Self {
        CellKey(s.into_bytes())
    }

    /// Number of vertices, read back from the key.
    pub fn num_vertices(&self) -> u32 {
        let s = self.as_str();
        let q = &s[2..s.find(';').expect("well-formed key")];
        q.parse().expect("well-formed key")
    }
}

impl core::fmt::Display for CellKey {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Output of [`canonicalize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonResult {
    pub key: CellKey,
    /// Parity of the permutation carrying the input forest ordering to the
    /// canonical (ascending-index) ordering. Only meaningful when the cell
    /// is not orientation-reversing.
    pub sign: i32,
    /// Order of the dart-level automorphism group of `(G, F, basepoint)`.
    pub aut_order: u64,
    /// True iff some automorphism induces an odd permutation of the forest
    /// edges; such a cell is zero in the quotient complex.
    pub orientation_reversing: bool,
}

/// Canonicalizes a forested cell. `forest` is the ordered forest; when
/// `basepointed` is false any basepoint on `g` is ignored.
pub fn canonicalize(
    g: &HalfEdgeGraph,
    forest: &[EdgeId],
    basepointed: bool,
) -> Result<CanonResult> {
    let forest_set = EdgeSet::new(g, forest.iter().copied())?;
    if forest_set.len() != forest.len() {
        return Err(Error::NotAForest);
    }
    if !g.is_forest(&forest_set) {
        return Err(Error::NotAForest);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if basepointed && g.basepoint().is_none() {
        return Err(Error::MissingBasepoint);
    }
    if !g.is_minimal(basepointed) {
        return Err(Error::NotMinimal);
    }
    let search = CanonSearch::run(g, &forest_set, basepointed, None);
    Ok(search.into_result(g, forest, basepointed))
}

/// Order of the dart-level automorphism group of the bare graph (no forest),
/// respecting the basepoint when `basepointed` and the optional extra vertex
/// colors.
pub fn aut_order_graph(
    g: &HalfEdgeGraph,
    basepointed: bool,
    colors: Option<&[u32]>,
) -> Result<u64> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let search = CanonSearch::run(g, &EdgeSet::default(), basepointed, colors);
    Ok(search.aut_order())
}

/// Canonical key of the bare graph (no forest data).
pub fn graph_key(g: &HalfEdgeGraph, basepointed: bool) -> Result<CellKey> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let search = CanonSearch::run(g, &EdgeSet::default(), basepointed, None);
    Ok(search.key())
}

/// The signed isomorphism count between two oriented cells: zero unless the
/// canonical keys agree and neither cell is degenerate, otherwise
/// `sign(X) * sign(Y) * |Aut|`.
pub fn signed_iso_count(
    gx: &HalfEdgeGraph,
    fx: &[EdgeId],
    gy: &HalfEdgeGraph,
    fy: &[EdgeId],
    basepointed: bool,
) -> Result<i64> {
    let cx = canonicalize(gx, fx, basepointed)?;
    let cy = canonicalize(gy, fy, basepointed)?;
    if cx.orientation_reversing || cy.orientation_reversing || cx.key != cy.key {
        return Ok(0);
    }
    Ok(cx.sign as i64 * cy.sign as i64 * cx.aut_order as i64)
}

/// Parses a cell key back into a graph plus ordered forest. The graph's
/// edges appear in key order, each with its tail at the smaller canonical
/// vertex; the forest ordering is the ascending canonical order.
pub fn decode_key(key: &CellKey) -> Result<(HalfEdgeGraph, Vec<EdgeId>, bool)> {
    let s = key.as_str();
    let bad = |m: &str| Error::BadCellKey(format!("{m}: {s}"));
    let mut fields = s.split(';');
    let q: u32 = fields
        .next()
        .and_then(|f| f.strip_prefix("q="))
        .ok_or_else(|| bad("missing q"))?
        .parse()
        .map_err(|_| bad("bad q"))?;
    let bfield = fields
        .next()
        .and_then(|f| f.strip_prefix("b="))
        .ok_or_else(|| bad("missing b"))?;
    let basepoint = if bfield == "-" {
        None
    } else {
        Some(bfield.parse::<u32>().map_err(|_| bad("bad b"))?)
    };
    let efield = fields
        .next()
        .and_then(|f| f.strip_prefix("E="))
        .ok_or_else(|| bad("missing E"))?;
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for part in efield.split(',') {
        if part.is_empty() {
            continue;
        }
        let (a, b) = part.split_once('-').ok_or_else(|| bad("bad edge"))?;
        edges.push((
            a.parse().map_err(|_| bad("bad edge endpoint"))?,
            b.parse().map_err(|_| bad("bad edge endpoint"))?,
        ));
    }
    let ffield = fields
        .next()
        .and_then(|f| f.strip_prefix("F="))
        .ok_or_else(|| bad("missing F"))?;
    if fields.next().is_some() {
        return Err(bad("trailing fields"));
    }
    let mut forest: Vec<EdgeId> = Vec::new();
    for part in ffield.split(',') {
        if part.is_empty() {
            continue;
        }
        forest.push(part.parse().map_err(|_| bad("bad forest index"))?);
    }
    let g = HalfEdgeGraph::from_edges(q, &edges, basepoint)?;
    for &i in &forest {
        if i >= g.num_edges() {
            return Err(bad("forest index out of range"));
        }
    }
    Ok((g, forest, basepoint.is_some()))
}

// ---------------------------------------------------------------------------
// search internals
// ---------------------------------------------------------------------------

/// Serialized shape under one labeling: basepoint label (u32::MAX when
/// absent) and the sorted edge triples `(min, max, class)` where class 0 is
/// forest and 1 is plain.
type Serial = (u32, Vec<(u32, u32, u8)>);

struct CanonSearch {
    num_vertices: u32,
    min_serial: Serial,
    /// All discrete labelings achieving the minimal serialization;
    /// `labeling[v]` is the canonical label of `v`.
    min_labelings: Vec<Vec<u32>>,
    /// Per input forest edge, in input order: its canonical index sequence
    /// under each minimal labeling (None when a parallel class holds two
    /// forest edges, which forces degeneracy).
    forest_index_seqs: Vec<Option<Vec<u32>>>,
    /// Multiplicity factor: product over parallel classes and loops.
    class_factor: u64,
}

impl CanonSearch {
    fn run(
        g: &HalfEdgeGraph,
        forest: &EdgeSet,
        basepointed: bool,
        extra: Option<&[u32]>,
    ) -> CanonSearch {
        let n = g.num_vertices() as usize;
        let basepoint = if basepointed { g.basepoint() } else { None };

        // initial colors: (extra, basepoint flag, valence, forest degree, loops)
        let mut loops_at = vec![0u32; n];
        let mut forest_deg = vec![0u32; n];
        for e in g.edges() {
            let (u, v) = g.endpoints(e);
            if u == v {
                loops_at[u as usize] += 1;
            } else if forest.contains(e) {
                forest_deg[u as usize] += 1;
                forest_deg[v as usize] += 1;
            }
        }
        let mut init: Vec<(u32, u32, u32, u32, u32)> = Vec::with_capacity(n);
        for v in 0..n as u32 {
            init.push((
                extra.map_or(0, |c| c[v as usize]),
                (basepoint != Some(v)) as u32,
                g.valence(v).unwrap() as u32,
                forest_deg[v as usize],
                loops_at[v as usize],
            ));
        }
        let mut sorted: Vec<_> = init.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let colors: Vec<u32> = init
            .iter()
            .map(|c| sorted.binary_search(c).unwrap() as u32)
            .collect();

        let mut search = CanonSearch {
            num_vertices: g.num_vertices(),
            min_serial: (u32::MAX, Vec::new()),
            min_labelings: Vec::new(),
            forest_index_seqs: Vec::new(),
            class_factor: 1,
        };
        let colors = refine(g, forest, colors);
        search.explore(g, forest, basepoint, colors);
        search.finish_class_factor(g, forest);
        search.collect_forest_sequences(g, forest);
        search
    }

    fn explore(
        &mut self,
        g: &HalfEdgeGraph,
        forest: &EdgeSet,
        basepoint: Option<VertexId>,
        colors: Vec<u32>,
    ) {
        let n = g.num_vertices() as usize;
        let num_colors = colors.iter().copied().max().map_or(0, |m| m as usize + 1);
        if num_colors == n {
            self.visit_leaf(g, forest, basepoint, &colors);
            return;
        }
        // first color class with more than one member
        let mut count = vec![0u32; num_colors];
        for &c in &colors {
            count[c as usize] += 1;
        }
        let target = count.iter().position(|&c| c > 1).unwrap() as u32;
        for w in 0..n as u32 {
            if colors[w as usize] != target {
                continue;
            }
            // individualize w ahead of the rest of its class, then refine
            let marked: Vec<(u32, u32)> = colors
                .iter()
                .enumerate()
                .map(|(v, &c)| (c, (v as u32 != w) as u32))
                .collect();
            let mut sorted: Vec<_> = marked.clone();
            sorted.sort_unstable();
            sorted.dedup();
            let next: Vec<u32> = marked
                .iter()
                .map(|c| sorted.binary_search(c).unwrap() as u32)
                .collect();
            let next = refine(g, forest, next);
            self.explore(g, forest, basepoint, next);
        }
    }

    fn visit_leaf(
        &mut self,
        g: &HalfEdgeGraph,
        forest: &EdgeSet,
        basepoint: Option<VertexId>,
        labeling: &[u32],
    ) {
        let serial = serialize(g, forest, basepoint, labeling);
        if self.min_labelings.is_empty() || serial < self.min_serial {
            self.min_serial = serial;
            self.min_labelings.clear();
            self.min_labelings.push(labeling.to_vec());
        } else if serial == self.min_serial {
            self.min_labelings.push(labeling.to_vec());
        }
    }

    fn finish_class_factor(&mut self, g: &HalfEdgeGraph, forest: &EdgeSet) {
        // parallel classes and loops contribute dart-level symmetries that no
        // vertex relabeling sees: m! per class, and an extra 2 per loop.
        let labeling = &self.min_labelings[0];
        let mut classes: BTreeMap<(u32, u32, u8), u64> = BTreeMap::new();
        for e in g.edges() {
            let (u, v) = g.endpoints(e);
            let (a, b) = sort2(labeling[u as usize], labeling[v as usize]);
            let class = if forest.contains(e) { 0 } else { 1 };
            *classes.entry((a, b, class)).or_insert(0) += 1;
        }
        let mut factor = 1u64;
        for ((a, b, _), m) in classes {
            factor *= factorial(m);
            if a == b {
                factor *= 1u64 << m; // each loop flips independently
            }
        }
        self.class_factor = factor;
    }

    fn collect_forest_sequences(&mut self, g: &HalfEdgeGraph, forest: &EdgeSet) {
        // canonical index of each input forest edge under every minimal
        // labeling; ambiguous (parallel forest pair) means degenerate.
        for labeling in &self.min_labelings {
            let canonical_edges = &self.min_serial.1;
            // positions of the forest slots per class
            let mut slots: BTreeMap<(u32, u32), Vec<u32>> = BTreeMap::new();
            for (i, &(a, b, class)) in canonical_edges.iter().enumerate() {
                if class == 0 {
                    slots.entry((a, b)).or_default().push(i as u32);
                }
            }
            let mut degenerate = false;
            let mut seq: Vec<u32> = Vec::with_capacity(forest.len());
            let mut used: BTreeMap<(u32, u32), usize> = BTreeMap::new();
            for &e in forest.iter() {
                let (u, v) = g.endpoints(e);
                let key = sort2(labeling[u as usize], labeling[v as usize]);
                let list = &slots[&key];
                if list.len() > 1 {
                    degenerate = true;
                }
                let k = used.entry(key).or_insert(0);
                seq.push(list[*k]);
                *k += 1;
            }
            self.forest_index_seqs
                .push(if degenerate { None } else { Some(seq) });
        }
    }

    fn aut_order(&self) -> u64 {
        self.min_labelings.len() as u64 * self.class_factor
    }

    fn key(&self) -> CellKey {
        let (bp, ref edges) = self.min_serial;
        let mut s = String::new();
        s.push_str("q=");
        push_u32(&mut s, self.num_vertices);
        s.push_str(";b=");
        if bp == u32::MAX {
            s.push('-');
        } else {
            push_u32(&mut s, bp);
        }
        s.push_str(";E=");
        for (i, &(a, b, _)) in edges.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            push_u32(&mut s, a);
            s.push('-');
            push_u32(&mut s, b);
        }
        s.push_str(";F=");
        let mut first = true;
        for (i, &(_, _, class)) in edges.iter().enumerate() {
            if class == 0 {
                if !first {
                    s.push(',');
                }
                push_u32(&mut s, i as u32);
                first = false;
            }
        }
        CellKey(s.into_bytes())
    }

    fn into_result(self, _g: &HalfEdgeGraph, forest: &[EdgeId], _basepointed: bool) -> CanonResult {
        // Re-derive the index sequence for the *ordered* input forest: the
        // EdgeSet used in the search is sorted, so permute each stored
        // sequence accordingly.
        let mut sorted: Vec<EdgeId> = forest.to_vec();
        sorted.sort_unstable();
        let pos_of = |e: EdgeId| sorted.binary_search(&e).unwrap();

        let mut reversing = false;
        let mut sign = 1i32;
        let mut first_parity: Option<i32> = None;
        for seq in &self.forest_index_seqs {
            match seq {
                None => {
                    reversing = true;
                    break;
                }
                Some(seq) => {
                    let ordered: Vec<u32> = forest.iter().map(|&e| seq[pos_of(e)]).collect();
                    let parity = inversion_sign(&ordered);
                    match first_parity {
                        None => {
                            first_parity = Some(parity);
                            sign = parity;
                        }
                        Some(p) if p != parity => {
                            reversing = true;
                        }
                        _ => {}
                    }
                }
            }
            if reversing {
                break;
            }
        }
        CanonResult {
            key: self.key(),
            sign,
            aut_order: self.aut_order(),
            orientation_reversing: reversing,
        }
    }
}

/// One round of exact 1-dimensional refinement with forest/plain/loop edge
/// classes, iterated to a fixed point. Color ids are dense and ordered by
/// (old color, sorted neighborhood signature), so they are isomorphism
/// invariants.
fn refine(g: &HalfEdgeGraph, forest: &EdgeSet, mut colors: Vec<u32>) -> Vec<u32> {
    let n = g.num_vertices() as usize;
    loop {
        let mut sigs: Vec<(u32, Vec<(u8, u32)>)> = (0..n)
            .map(|v| (colors[v], Vec::new()))
            .collect();
        for d in g.darts() {
            let v = g.vertex_of(d) as usize;
            let u = g.vertex_of(partner(d));
            let e = edge_of(d);
            let class = if g.vertex_of(d) == u {
                2u8
            } else if forest.contains(e) {
                0u8
            } else {
                1u8
            };
            sigs[v].1.push((class, colors[u as usize]));
        }
        for s in &mut sigs {
            s.1.sort_unstable();
        }
        let mut sorted: Vec<&(u32, Vec<(u8, u32)>)> = sigs.iter().collect();
        sorted.sort();
        sorted.dedup();
        let next: Vec<u32> = sigs
            .iter()
            .map(|s| sorted.binary_search(&s).unwrap() as u32)
            .collect();
        let old_count = count_distinct(&colors);
        let new_count = count_distinct(&next);
        colors = next;
        if new_count == old_count || new_count == n {
            return colors;
        }
    }
}

fn serialize(
    g: &HalfEdgeGraph,
    forest: &EdgeSet,
    basepoint: Option<VertexId>,
    labeling: &[u32],
) -> Serial {
    let mut edges: Vec<(u32, u32, u8)> = g
        .edges()
        .map(|e| {
            let (u, v) = g.endpoints(e);
            let (a, b) = sort2(labeling[u as usize], labeling[v as usize]);
            (a, b, !forest.contains(e) as u8)
        })
        .collect();
    edges.sort_unstable();
    let bp = basepoint.map_or(u32::MAX, |b| labeling[b as usize]);
    (bp, edges)
}

fn count_distinct(colors: &[u32]) -> usize {
    let mut v = colors.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn sort2(a: u32, b: u32) -> (u32, u32) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn factorial(n: u64) -> u64 {
    (1..=n).product::<u64>().max(1)
}

/// Sign of the permutation sorting `seq` ascending (entries distinct).
pub fn inversion_sign(seq: &[u32]) -> i32 {
    let mut inv = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

fn push_u32(s: &mut String, x: u32) {
    s.push_str(&format!("{x}"));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    #[allow(unused_imports)]
    use alloc::vec;

    /// Brute-force dart-level automorphism search, straight from the
    /// definition: bijections of darts commuting with the pairing, inducing
    /// a well-defined vertex bijection, fixing the basepoint and the forest
    /// edge set. Returns the count and whether any automorphism induces an
    /// odd permutation of the forest edges.
    fn brute_force_auts(
        g: &HalfEdgeGraph,
        forest: &[EdgeId],
        basepointed: bool,
    ) -> (u64, bool) {
        let nd = g.num_darts() as usize;
        let forest_set: Vec<bool> = (0..g.num_edges())
            .map(|e| forest.contains(&e))
            .collect();
        let mut dart_map = vec![u32::MAX; nd];
        let mut used = vec![false; nd];
        let mut vertex_map = vec![u32::MAX; g.num_vertices() as usize];
        let mut vertex_used = vec![false; g.num_vertices() as usize];
        if basepointed {
            let b = g.basepoint().unwrap() as usize;
            vertex_map[b] = b as u32;
            vertex_used[b] = true;
        }
        let mut count = 0u64;
        let mut any_odd = false;
        search(
            g,
            &forest_set,
            0,
            &mut dart_map,
            &mut used,
            &mut vertex_map,
            &mut vertex_used,
            &mut count,
            &mut any_odd,
            forest,
        );
        return (count, any_odd);

        #[allow(clippy::too_many_arguments)]
        fn search(
            g: &HalfEdgeGraph,
            forest_set: &[bool],
            d: u32,
            dart_map: &mut [u32],
            used: &mut [bool],
            vertex_map: &mut [u32],
            vertex_used: &mut [bool],
            count: &mut u64,
            any_odd: &mut bool,
            forest: &[EdgeId],
        ) {
            let nd = dart_map.len() as u32;
            if d == nd {
                let seq: Vec<u32> = forest
                    .iter()
                    .map(|&e| edge_of(dart_map[2 * e as usize]))
                    .collect();
                // one-line notation of the forest permutation in input coordinates
                let ranks: Vec<u32> = seq
                    .iter()
                    .map(|&e| forest.iter().position(|&f| f == e).unwrap() as u32)
                    .collect();
                if inversion_sign(&ranks) < 0 {
                    *any_odd = true;
                }
                *count += 1;
                return;
            }
            if dart_map[d as usize] != u32::MAX {
                search(
                    g, forest_set, d + 1, dart_map, used, vertex_map, vertex_used, count,
                    any_odd, forest,
                );
                return;
            }
            for img in 0..nd {
                if used[img as usize] {
                    continue;
                }
                if forest_set[edge_of(d) as usize] != forest_set[edge_of(img) as usize] {
                    continue;
                }
                // tentatively map d -> img and partner(d) -> partner(img)
                let pd = partner(d);
                let pimg = partner(img);
                if dart_map[pd as usize] != u32::MAX || used[pimg as usize] {
                    continue;
                }
                let mut assigned_vertices: Vec<usize> = Vec::new();
                let mut ok = true;
                for (from, to) in [(d, img), (pd, pimg)] {
                    let vf = g.vertex_of(from) as usize;
                    let vt = g.vertex_of(to);
                    if vertex_map[vf] == u32::MAX {
                        if vertex_used[vt as usize] {
                            ok = false;
                            break;
                        }
                        vertex_map[vf] = vt;
                        vertex_used[vt as usize] = true;
                        assigned_vertices.push(vf);
                    } else if vertex_map[vf] != vt {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    dart_map[d as usize] = img;
                    dart_map[pd as usize] = pimg;
                    used[img as usize] = true;
                    used[pimg as usize] = true;
                    search(
                        g, forest_set, d + 1, dart_map, used, vertex_map, vertex_used,
                        count, any_odd, forest,
                    );
                    dart_map[d as usize] = u32::MAX;
                    dart_map[pd as usize] = u32::MAX;
                    used[img as usize] = false;
                    used[pimg as usize] = false;
                }
                for vf in assigned_vertices {
                    vertex_used[vertex_map[vf] as usize] = false;
                    vertex_map[vf] = u32::MAX;
                }
            }
        }
    }

    #[test]
    fn aut_orders_match_brute_force_on_fixtures() {
        let theta = fixtures::theta();
        assert_eq!(brute_force_auts(&theta, &[], false).0, 12);
        assert_eq!(aut_order_graph(&theta, false, None).unwrap(), 12);

        let rose2 = fixtures::rose(2);
        assert_eq!(brute_force_auts(&rose2, &[], false).0, 8);
        assert_eq!(aut_order_graph(&rose2, false, None).unwrap(), 8);

        let db = fixtures::dumbbell();
        assert_eq!(brute_force_auts(&db, &[], false).0, 8);
        assert_eq!(aut_order_graph(&db, false, None).unwrap(), 8);
    }

    #[test]
    fn non_forest_input_is_rejected() {
        // two parallel edges of theta span a cycle, so they are not a forest
        let theta = fixtures::theta();
        assert_eq!(
            canonicalize(&theta, &[0, 1], false).unwrap_err(),
            Error::NotAForest
        );
    }

    #[test]
    fn forest_swap_symmetry_is_orientation_reversing() {
        // loops at 0, 1, 2 with path edges 0-1, 1-2: flipping the path ends
        // swaps the two forest edges, an odd permutation
        let g = HalfEdgeGraph::from_edges(
            3,
            &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)],
            None,
        )
        .unwrap();
        let c = canonicalize(&g, &[3, 4], false).unwrap();
        assert!(c.orientation_reversing);
        // K_4 with two disjoint forest edges swapped by a double transposition
        let k4 = HalfEdgeGraph::from_edges(
            4,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
            None,
        )
        .unwrap();
        let c = canonicalize(&k4, &[0, 5], false).unwrap();
        assert!(c.orientation_reversing);
        // one-edge forests are never reversing
        let c = canonicalize(&fixtures::theta(), &[0], false).unwrap();
        assert!(!c.orientation_reversing);
        assert_eq!(c.aut_order, 4);
    }

    #[test]
    fn sign_tracks_forest_permutation_parity() {
        // dumbbell subdivided so it has a 2-edge forest with trivial symmetry
        let g = HalfEdgeGraph::from_edges(
            3,
            &[(0, 0), (0, 1), (1, 2), (2, 2), (1, 2)],
            None,
        )
        .unwrap();
        let c12 = canonicalize(&g, &[1, 2], false).unwrap();
        let c21 = canonicalize(&g, &[2, 1], false).unwrap();
        assert_eq!(c12.key, c21.key);
        assert_eq!(c12.sign, -c21.sign);
    }

    #[test]
    fn canonical_form_is_idempotent() {
        let g = fixtures::dumbbell();
        let c = canonicalize(&g, &[2], false).unwrap();
        let (g2, f2, bp) = decode_key(&c.key).unwrap();
        assert!(!bp);
        let c2 = canonicalize(&g2, &f2, false).unwrap();
        assert_eq!(c2.key, c.key);
        assert_eq!(c2.sign, 1);
    }

    #[test]
    fn key_string_form() {
        let theta = fixtures::theta();
        let c = canonicalize(&theta, &[0], false).unwrap();
        assert_eq!(c.key.as_str(), "q=2;b=-;E=0-1,0-1,0-1;F=0");
        let c = canonicalize(&theta.with_basepoint(1).unwrap(), &[0], true).unwrap();
        assert_eq!(c.key.as_str(), "q=2;b=0;E=0-1,0-1,0-1;F=0");
    }

    #[test]
    fn relabeling_invariance_randomized() {
        use rand::seq::SliceRandom;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let g = random_minimal_graph(&mut rng);
            let forest = random_forest(&mut rng, &g);
            let c = canonicalize(&g, &forest, false).unwrap();

            // random relabeling: permute vertices and edges, swap darts
            let n = g.num_vertices();
            let mut perm: Vec<u32> = (0..n).collect();
            perm.shuffle(&mut rng);
            let mut edge_ids: Vec<u32> = (0..g.num_edges()).collect();
            edge_ids.shuffle(&mut rng);
            let mut new_edges = vec![(0u32, 0u32); g.num_edges() as usize];
            for e in g.edges() {
                let (u, v) = g.endpoints(e);
                let (mut a, mut b) = (perm[u as usize], perm[v as usize]);
                if rng.gen_bool(0.5) {
                    core::mem::swap(&mut a, &mut b);
                }
                new_edges[edge_ids[e as usize] as usize] = (a, b);
            }
            let h = HalfEdgeGraph::from_edges(n, &new_edges, None).unwrap();
            let new_forest: Vec<u32> = forest.iter().map(|&e| edge_ids[e as usize]).collect();
            let c2 = canonicalize(&h, &new_forest, false).unwrap();
            assert_eq!(c.key, c2.key, "relabeling changed the canonical key");
            assert_eq!(c.aut_order, c2.aut_order);
            assert_eq!(c.orientation_reversing, c2.orientation_reversing);
        }
    }

    #[test]
    fn aut_order_and_reversal_match_brute_force_randomized() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for i in 0..200 {
            let g = random_minimal_graph(&mut rng);
            if g.num_edges() > 8 {
                continue;
            }
            let forest = random_forest(&mut rng, &g);
            let c = canonicalize(&g, &forest, false).unwrap();
            let (bf, odd) = brute_force_auts(&g, &forest, false);
            assert_eq!(c.aut_order, bf, "case {i}: aut order mismatch");
            assert_eq!(
                c.orientation_reversing, odd,
                "case {i}: reversal flag mismatch"
            );
        }
    }

    #[test]
    fn basepoint_breaks_symmetry() {
        let theta = fixtures::theta();
        let based = theta.with_basepoint(0).unwrap();
        assert_eq!(aut_order_graph(&based, true, None).unwrap(), 6);
        assert_eq!(aut_order_graph(&based, false, None).unwrap(), 12);
        let (bf, _) = brute_force_auts(&based, &[], true);
        assert_eq!(bf, 6);
    }

    /// Random connected minimal multigraph with <= 9 edges.
    pub(crate) fn random_minimal_graph(rng: &mut impl rand::Rng) -> HalfEdgeGraph {
        loop {
            let n = rng.gen_range(1..=5u32);
            let extra = rng.gen_range(0..=3u32);
            // start with a random spanning tree
            let mut edges: Vec<(u32, u32)> = Vec::new();
            for v in 1..n {
                edges.push((rng.gen_range(0..v), v));
            }
            let target = (edges.len() as u32 + extra + n).max(2 * n);
            while (edges.len() as u32) < target {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                edges.push((u, v));
            }
            let g = match HalfEdgeGraph::from_edges(n, &edges, None) {
                Ok(g) => g,
                Err(_) => continue,
            };
            if g.num_edges() <= 9 && g.is_connected() && g.is_minimal(false) {
                return g;
            }
        }
    }

    pub(crate) fn random_forest(rng: &mut impl rand::Rng, g: &HalfEdgeGraph) -> Vec<EdgeId> {
        use rand::seq::SliceRandom;
        let mut edges: Vec<EdgeId> = g.edges().collect();
        edges.shuffle(rng);
        let mut forest: Vec<EdgeId> = Vec::new();
        let want = rng.gen_range(0..g.num_vertices());
        for e in edges {
            if forest.len() as u32 >= want {
                break;
            }
            let mut cand = forest.clone();
            cand.push(e);
            let set = EdgeSet::new(g, cand.iter().copied()).unwrap();
            if g.is_forest(&set) {
                forest.push(e);
            }
        }
        forest
    }
}
