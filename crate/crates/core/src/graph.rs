//! Simple undirected graphs with stable vertex ids.
//!
//! Adjacency is a bit row per vertex id. Deleting a vertex frees its row and
//! removes the id from the active set; ids are never renumbered, so a trace
//! recorded against a graph replays against the same graph verbatim.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

/// Grid coordinates of a vertex, 1-based: `row` is the path index and `col`
/// the position along it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Label {
    pub row: u32,
    pub col: u32,
}

impl Label {
    pub fn new(row: u32, col: u32) -> Self {
        Label { row, col }
    }
}

/// Upper bound on vertex count for which [`Graph::is_isomorphic`] answers.
pub const DEFAULT_ISO_BOUND: usize = 10;

#[derive(Clone, Default)]
pub struct Graph {
    /// One row per id below `id_bound`; rows of inactive ids are empty.
    adj: Vec<BitSet>,
    active: BitSet,
    labels: Vec<Option<Label>>,
    len: usize,
}

impl Graph {
    /// Edgeless graph on ids `0..n`.
    pub fn new(n: usize) -> Self {
        Self::with_vertices((0..n as u32).map(VertexId))
    }

    /// Edgeless graph on the given ids.
    pub fn with_vertices(ids: impl IntoIterator<Item = VertexId>) -> Self {
        let ids: Vec<VertexId> = ids.into_iter().collect();
        let bound = ids.iter().map(|v| v.index() + 1).max().unwrap_or(0);
        let mut g = Graph {
            adj: vec![BitSet::default(); bound],
            active: BitSet::new(bound),
            labels: vec![None; bound],
            len: 0,
        };
        for v in ids {
            if !g.active.contains(v.index()) {
                g.active.insert(v.index());
                g.adj[v.index()] = BitSet::new(bound);
                g.len += 1;
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(VertexId(u), VertexId(v))?;
        }
        Ok(g)
    }

    /// One more than the largest id this graph can hold.
    pub fn id_bound(&self) -> usize {
        self.adj.len()
    }

    /// Number of active vertices.
    pub fn order(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.active.iter().map(|i| self.adj[i].len()).sum::<usize>() / 2
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.active.contains(v.index())
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.active.iter().map(|i| VertexId(i as u32))
    }

    pub fn vertex_set(&self) -> &BitSet {
        &self.active
    }

    fn check(&self, v: VertexId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.contains(u) && self.adj[u.index()].contains(v.index())
    }

    pub fn neighbor_set(&self, v: VertexId) -> &BitSet {
        &self.adj[v.index()]
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj[v.index()].iter().map(|i| VertexId(i as u32))
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v.index()].len()
    }

    /// Edges as `(u, v)` with `u < v`, in increasing order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for u in self.active.iter() {
            for v in self.adj[u].iter().filter(|&v| v > u) {
                out.push((VertexId(u as u32), VertexId(v as u32)));
            }
        }
        out
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(Error::Loop(u));
        }
        self.adj[u.index()].insert(v.index());
        self.adj[v.index()].insert(u.index());
        Ok(())
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        self.check(u)?;
        self.check(v)?;
        self.adj[u.index()].remove(v.index());
        self.adj[v.index()].remove(u.index());
        Ok(())
    }

    pub fn toggle_edge(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(Error::Loop(u));
        }
        self.adj[u.index()].toggle(v.index());
        self.adj[v.index()].toggle(u.index());
        Ok(())
    }

    pub fn label(&self, v: VertexId) -> Option<Label> {
        self.labels.get(v.index()).copied().flatten()
    }

    /// Labels of all labelled active vertices, by id.
    pub fn labels(&self) -> impl Iterator<Item = (VertexId, Label)> + '_ {
        self.vertices().filter_map(|v| self.label(v).map(|l| (v, l)))
    }

    pub fn set_label(&mut self, v: VertexId, label: Label) -> Result<()> {
        self.check(v)?;
        if self.labels().any(|(w, l)| w != v && l == label) {
            return Err(Error::DuplicateLabel {
                row: label.row,
                col: label.col,
            });
        }
        self.labels[v.index()] = Some(label);
        Ok(())
    }

    /// Sets labels without the uniqueness scan; callers guarantee uniqueness.
    pub(crate) fn set_label_unchecked(&mut self, v: VertexId, label: Label) {
        self.labels[v.index()] = Some(label);
    }

    /// XORs `mask` (restricted to active vertices, minus `v`) into the row of
    /// `v` only. Callers apply matching updates to the other rows.
    pub(crate) fn xor_row_unchecked(&mut self, v: VertexId, mask: &BitSet) {
        let row = &mut self.adj[v.index()];
        row.xor_with(mask);
        row.and_with(&self.active);
        row.remove(v.index());
    }

    pub fn clear_labels(&mut self) {
        self.labels.iter_mut().for_each(|l| *l = None);
    }

    pub fn has_labels(&self) -> bool {
        self.labels().next().is_some()
    }

    // ---------------------------------------------------------------------
    // Local complementation and pivoting.

    /// Toggles every pair of distinct neighbours of `v`, in place.
    pub fn local_complement_mut(&mut self, v: VertexId) -> Result<()> {
        self.check(v)?;
        let nv = self.adj[v.index()].clone();
        for x in nv.iter() {
            self.adj[x].xor_with(&nv);
            self.adj[x].toggle(x);
        }
        Ok(())
    }

    /// `G * v`.
    pub fn local_complement(&self, v: VertexId) -> Result<Graph> {
        let mut g = self.clone();
        g.local_complement_mut(v)?;
        Ok(g)
    }

    /// Pivots the edge `uv` in place.
    ///
    /// With `C`, `L`, `R` the common neighbours, the private neighbours of `u`
    /// and the private neighbours of `v`, the adjacency between each two of the
    /// three sets is complemented, then `u` and `v` exchange neighbourhoods.
    /// The result is identical, vertex for vertex, to `G * u * v * u`.
    pub fn pivot_mut(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        self.check(u)?;
        self.check(v)?;
        if !self.has_edge(u, v) {
            return Err(Error::NotAnEdge(u, v));
        }
        let (ui, vi) = (u.index(), v.index());
        let nu = self.adj[ui].clone();
        let nv = self.adj[vi].clone();
        let mut common = nu.clone();
        common.and_with(&nv);
        let mut left = nu.clone();
        left.and_not_with(&nv);
        left.remove(vi);
        let mut right = nv.clone();
        right.and_not_with(&nu);
        right.remove(ui);

        let mut left_right = left.clone();
        left_right.or_with(&right);
        let mut common_right = common.clone();
        common_right.or_with(&right);
        let mut common_left = common.clone();
        common_left.or_with(&left);

        for x in common.iter() {
            self.adj[x].xor_with(&left_right);
        }
        for x in left.iter() {
            self.adj[x].xor_with(&common_right);
            // exchange: x leaves u and joins v
            self.adj[x].remove(ui);
            self.adj[x].insert(vi);
        }
        for x in right.iter() {
            self.adj[x].xor_with(&common_left);
            self.adj[x].remove(vi);
            self.adj[x].insert(ui);
        }
        let mut new_u = common_right;
        new_u.insert(vi);
        let mut new_v = common_left;
        new_v.insert(ui);
        self.adj[ui] = new_u;
        self.adj[vi] = new_v;
        Ok(())
    }

    /// `G ∧ uv`, computed with the set-complementation form.
    pub fn pivot(&self, u: VertexId, v: VertexId) -> Result<Graph> {
        let mut g = self.clone();
        g.pivot_mut(u, v)?;
        Ok(g)
    }

    /// `G * u * v * u`, the defining form of the pivot. Slower than
    /// [`Graph::pivot`]; kept as the reference the fast path is tested against.
    pub fn pivot_by_local_complementation(&self, u: VertexId, v: VertexId) -> Result<Graph> {
        if !self.has_edge(u, v) {
            self.check(u)?;
            self.check(v)?;
            return Err(Error::NotAnEdge(u, v));
        }
        self.local_complement(u)?
            .local_complement(v)?
            .local_complement(u)
    }

    // ---------------------------------------------------------------------
    // Deletion and derived graphs.

    pub fn delete_vertex_mut(&mut self, v: VertexId) -> Result<()> {
        self.check(v)?;
        let nv = std::mem::take(&mut self.adj[v.index()]);
        for x in nv.iter() {
            self.adj[x].remove(v.index());
        }
        self.active.remove(v.index());
        self.labels[v.index()] = None;
        self.len -= 1;
        Ok(())
    }

    /// Deletes a set of vertices at once. Cost is one pass over the surviving
    /// rows, which beats per-vertex deletion when the set is large.
    pub fn delete_set_mut(&mut self, set: &[VertexId]) -> Result<()> {
        let mut gone = BitSet::new(self.id_bound());
        for &v in set {
            self.check(v)?;
            if gone.contains(v.index()) {
                return Err(Error::UnknownVertex(v));
            }
            gone.insert(v.index());
        }
        if set.len() < 4 {
            for &v in set {
                self.delete_vertex_mut(v)?;
            }
            return Ok(());
        }
        for v in gone.iter() {
            self.adj[v] = BitSet::default();
            self.labels[v] = None;
        }
        self.active.and_not_with(&gone);
        self.len -= set.len();
        for x in self.active.iter() {
            self.adj[x].and_not_with(&gone);
        }
        Ok(())
    }

    /// `G - v`.
    pub fn delete(&self, v: VertexId) -> Result<Graph> {
        let mut g = self.clone();
        g.delete_vertex_mut(v)?;
        Ok(g)
    }

    /// `G - S`.
    pub fn delete_all(&self, set: &[VertexId]) -> Result<Graph> {
        let mut g = self.clone();
        g.delete_set_mut(set)?;
        Ok(g)
    }

    /// `G[S]`, keeping ids and labels.
    pub fn induced(&self, keep: &[VertexId]) -> Result<Graph> {
        let mut mask = BitSet::new(self.id_bound());
        for &v in keep {
            self.check(v)?;
            mask.insert(v.index());
        }
        let gone: Vec<VertexId> = self
            .vertices()
            .filter(|v| !mask.contains(v.index()))
            .collect();
        self.delete_all(&gone)
    }

    /// The complement on the same vertex set. Labels are kept.
    pub fn complement(&self) -> Graph {
        let mut g = self.clone();
        for x in self.active.iter() {
            let mut row = self.active.clone();
            row.xor_with(&self.adj[x]);
            row.remove(x);
            g.adj[x] = row;
        }
        g
    }

    /// Disjoint union. The vertices of `other` are shifted by `self.id_bound()`;
    /// the shift is returned alongside the union.
    pub fn disjoint_union(&self, other: &Graph) -> (Graph, u32) {
        let offset = self.id_bound() as u32;
        let ids = self
            .vertices()
            .chain(other.vertices().map(|v| VertexId(v.0 + offset)));
        let mut g = Graph::with_vertices(ids);
        for (u, v) in self.edges() {
            g.add_edge(u, v).expect("vertices present");
        }
        for (u, v) in other.edges() {
            g.add_edge(VertexId(u.0 + offset), VertexId(v.0 + offset))
                .expect("vertices present");
        }
        for (v, l) in self.labels() {
            g.set_label_unchecked(v, l);
        }
        (g, offset)
    }

    /// Same graph on fresh ids `0..n`, assigned in increasing order of the
    /// old ids. Labels are dropped.
    pub fn compacted(&self) -> Graph {
        let ids: Vec<VertexId> = self.vertices().collect();
        let mut pos = vec![u32::MAX; self.id_bound()];
        for (i, v) in ids.iter().enumerate() {
            pos[v.index()] = i as u32;
        }
        let mut g = Graph::new(ids.len());
        for (u, v) in self.edges() {
            g.add_edge(VertexId(pos[u.index()]), VertexId(pos[v.index()]))
                .expect("vertices present");
        }
        g
    }

    // ---------------------------------------------------------------------
    // Recognisers.

    pub fn is_connected(&self) -> bool {
        let Some(start) = self.active.first() else {
            return true;
        };
        let mut seen = BitSet::new(self.id_bound());
        seen.insert(start);
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for y in self.adj[x].iter() {
                if !seen.contains(y) {
                    seen.insert(y);
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == self.len
    }

    /// Vertices in path order if the graph is a path, starting from the end
    /// with the smaller id. The one-vertex graph is a path; the empty graph is not.
    pub fn path_order(&self) -> Option<Vec<VertexId>> {
        if self.len == 0 || self.size() != self.len - 1 {
            return None;
        }
        if self.len == 1 {
            return Some(self.vertices().collect());
        }
        let ends: Vec<VertexId> = self.vertices().filter(|&v| self.degree(v) == 1).collect();
        if ends.len() != 2 || self.vertices().any(|v| self.degree(v) > 2) {
            return None;
        }
        let mut order = Vec::with_capacity(self.len);
        let mut prev: Option<VertexId> = None;
        let mut cur = ends[0];
        loop {
            order.push(cur);
            let next = self.neighbors(cur).find(|&w| Some(w) != prev);
            match next {
                Some(w) => {
                    prev = Some(cur);
                    cur = w;
                }
                None => break,
            }
        }
        (order.len() == self.len).then_some(order)
    }

    pub fn is_path(&self) -> bool {
        self.path_order().is_some()
    }

    pub fn is_complement_of_path(&self) -> bool {
        self.complement().is_path()
    }

    /// Exact isomorphism test for graphs up to [`DEFAULT_ISO_BOUND`] vertices.
    pub fn is_isomorphic(&self, other: &Graph) -> Result<bool> {
        self.is_isomorphic_within(other, DEFAULT_ISO_BOUND)
    }

    pub fn is_isomorphic_within(&self, other: &Graph, bound: usize) -> Result<bool> {
        if self.order() != other.order() || self.size() != other.size() {
            return Ok(false);
        }
        let a = crate::oracle::canonical_form_within(self, bound)?;
        let b = crate::oracle::canonical_form_within(other, bound)?;
        Ok(a == b)
    }
}

impl PartialEq for Graph {
    /// Same active ids and same edges. Labels and id capacity are ignored.
    fn eq(&self, other: &Graph) -> bool {
        if self.len != other.len {
            return false;
        }
        for x in self.active.iter() {
            if !other.active.contains(x) {
                return false;
            }
            if !self.adj[x].same_bits(&other.adj[x]) {
                return false;
            }
        }
        true
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<u32> = self.vertices().map(|v| v.0).collect();
        let es: Vec<(u32, u32)> = self.edges().into_iter().map(|(u, v)| (u.0, v.0)).collect();
        f.debug_struct("Graph")
            .field("vertices", &vs)
            .field("edges", &es)
            .finish()
    }
}

/// `E(G ∧ uv - {u, v})` for a vertex `u` with exactly two neighbours `v` and `w`.
///
/// The result is checked against
/// `E(G - {u,v,w}) ∪ { xw : x ∈ (N(v) △ N(w)) \ {v,w} }`; a mismatch is
/// reported as [`Error::CheckFailed`].
pub fn shorten_degree_two(g: &Graph, u: VertexId, v: VertexId) -> Result<Graph> {
    let mut h = g.clone();
    shorten_degree_two_mut(&mut h, u, v)?;
    Ok(h)
}

/// In-place form of [`shorten_degree_two`]. Returns the third vertex `w`.
pub fn shorten_degree_two_mut(g: &mut Graph, u: VertexId, v: VertexId) -> Result<VertexId> {
    g.check(u)?;
    g.check(v)?;
    if g.degree(u) != 2 {
        return Err(Error::pre(format!(
            "vertex {u} has degree {}, expected 2",
            g.degree(u)
        )));
    }
    if !g.has_edge(u, v) {
        return Err(Error::NotAnEdge(u, v));
    }
    let w = g.neighbors(u).find(|&x| x != v).expect("degree two");

    // Only rows in N(v) ∪ {w} can change beyond losing u and v.
    let mut s = g.neighbor_set(v).clone();
    s.xor_with(g.neighbor_set(w));
    s.remove(v.index());
    s.remove(w.index());
    let touched: Vec<(usize, BitSet)> = g
        .neighbor_set(v)
        .iter()
        .chain(std::iter::once(w.index()))
        .filter(|&x| x != u.index() && x != w.index())
        .map(|x| (x, g.adj[x].clone()))
        .collect();

    g.pivot_mut(u, v)?;
    g.delete_vertex_mut(u)?;
    g.delete_vertex_mut(v)?;

    if !g.neighbor_set(w).same_bits(&s) {
        return Err(Error::check(format!(
            "shortening at {u},{v}: neighbourhood of {w} disagrees with N(v)△N(w)"
        )));
    }
    for (x, old) in touched {
        let mut expect = old;
        expect.remove(u.index());
        expect.remove(v.index());
        expect.set(w.index(), s.contains(x));
        if !g.adj[x].same_bits(&expect) {
            return Err(Error::check(format!(
                "shortening at {u},{v}: row of {x} disagrees with the edge formula"
            )));
        }
    }
    Ok(w)
}

/// Toggles adjacency between every pair of distinct vertices of `set`.
pub fn flip_set(g: &Graph, set: &BTreeSet<VertexId>) -> Result<Graph> {
    let mut h = g.clone();
    flip_set_mut(&mut h, set)?;
    Ok(h)
}

pub fn flip_set_mut(g: &mut Graph, set: &BTreeSet<VertexId>) -> Result<()> {
    let mut mask = BitSet::new(g.id_bound());
    for &v in set {
        g.check(v)?;
        mask.insert(v.index());
    }
    for &v in set {
        g.adj[v.index()].xor_with(&mask);
        g.adj[v.index()].toggle(v.index());
    }
    Ok(())
}

/// Fails if two active vertices share a label.
pub(crate) fn check_labels_unique(g: &Graph) -> Result<()> {
    let mut seen = HashSet::new();
    for (_, l) in g.labels() {
        if !seen.insert(l) {
            return Err(Error::DuplicateLabel {
                row: l.row,
                col: l.col,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn edge_set(g: &Graph) -> Vec<(u32, u32)> {
        g.edges().into_iter().map(|(a, b)| (a.0, b.0)).collect()
    }

    fn p3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn local_complement_middle_of_p3_gives_triangle() {
        let g = p3().local_complement(v(1)).unwrap();
        assert_eq!(edge_set(&g), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn local_complement_at_end_is_identity() {
        assert_eq!(p3().local_complement(v(0)).unwrap(), p3());
    }

    #[test]
    fn pivot_p3_end_edge() {
        // a-b-c, pivot bc -> edges ac, bc
        let g = p3().pivot(v(1), v(2)).unwrap();
        assert_eq!(edge_set(&g), vec![(0, 2), (1, 2)]);
        assert_eq!(g, p3().pivot_by_local_complementation(v(1), v(2)).unwrap());
    }

    #[test]
    fn pivot_c4() {
        // a=0, b=1, c=2, d=3: C4 pivot ab -> {ab, ac, bd}
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let g = c4.pivot(v(0), v(1)).unwrap();
        assert_eq!(edge_set(&g), vec![(0, 1), (0, 2), (1, 3)]);
        assert!(g.is_path());
    }

    #[test]
    fn pivot_rejects_non_edge() {
        assert!(matches!(p3().pivot(v(0), v(2)), Err(Error::NotAnEdge(..))));
        assert!(matches!(p3().pivot(v(0), v(7)), Err(Error::UnknownVertex(_))));
        assert!(matches!(p3().local_complement(v(9)), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn shorten_p5() {
        // a-b-c-d-e, u=c, v=d, w=b -> a-b-e on {a,b,e}
        let p5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let g = shorten_degree_two(&p5, v(2), v(3)).unwrap();
        assert_eq!(g.vertices().map(|x| x.0).collect::<Vec<_>>(), vec![0, 1, 4]);
        assert_eq!(edge_set(&g), vec![(0, 1), (1, 4)]);
    }

    #[test]
    fn shorten_p3_endpoint_case() {
        let g = shorten_degree_two(&p3(), v(1), v(2)).unwrap();
        assert_eq!(g.vertices().map(|x| x.0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(g.size(), 0);
    }

    #[test]
    fn shorten_rejects_wrong_degree() {
        let k3 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(matches!(shorten_degree_two(&k3, v(0), v(1)), Err(Error::Precondition(_))));
    }

    #[test]
    fn complement_of_p4() {
        // 1-2-3-4 -> {13, 14, 24}
        let p4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(edge_set(&p4.complement()), vec![(0, 2), (0, 3), (1, 3)]);
        assert!(p4.complement().is_complement_of_path());
    }

    #[test]
    fn path_recognition() {
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(!k3.is_path());
        assert!(Graph::new(1).is_path());
        assert!(!Graph::new(0).is_path());
        assert!(!Graph::new(2).is_path());
        let g = Graph::from_edges(4, &[(2, 0), (0, 3), (3, 1)]).unwrap();
        assert_eq!(g.path_order().unwrap(), vec![v(1), v(3), v(0), v(2)]);
    }

    #[test]
    fn c5_is_self_complementary() {
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert!(c5.is_isomorphic(&c5.complement()).unwrap());
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(!k3.is_isomorphic(&p3()).unwrap());
    }

    #[test]
    fn isomorphism_size_limit() {
        let g = Graph::new(11);
        assert!(matches!(g.is_isomorphic(&g), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn deletion_keeps_ids() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let h = g.delete(v(1)).unwrap();
        assert_eq!(h.vertices().map(|x| x.0).collect::<Vec<_>>(), vec![0, 2, 3]);
        assert_eq!(edge_set(&h), vec![(2, 3)]);
        assert!(h.delete(v(1)).is_err());
        let big = Graph::from_edges(8, &[(0, 1), (1, 2), (2, 3), (5, 6), (6, 7), (0, 7)]).unwrap();
        let a = big.delete_all(&[v(1), v(2), v(5), v(6)]).unwrap();
        let mut b = big.clone();
        for x in [1, 2, 5, 6] {
            b.delete_vertex_mut(v(x)).unwrap();
        }
        assert_eq!(a, b);
        assert_eq!(edge_set(&a), vec![(0, 7)]);
    }

    #[test]
    fn labels_are_unique() {
        let mut g = Graph::new(2);
        g.set_label(v(0), Label::new(1, 1)).unwrap();
        assert!(g.set_label(v(1), Label::new(1, 1)).is_err());
        g.set_label(v(1), Label::new(1, 2)).unwrap();
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let mut g = Graph::new(n);
                let mut k = 0;
                for a in 0..n {
                    for b in a + 1..n {
                        if bits[k] {
                            g.add_edge(VertexId(a as u32), VertexId(b as u32)).unwrap();
                        }
                        k += 1;
                    }
                }
                g
            })
        })
    }

    proptest! {
        #[test]
        fn local_complement_is_involution(g in arb_graph(8), pick in 0usize..8) {
            let x = VertexId((pick % g.order()) as u32);
            let h = g.local_complement(x).unwrap().local_complement(x).unwrap();
            prop_assert_eq!(h, g);
        }

        #[test]
        fn pivot_identities(g in arb_graph(9)) {
            for (u, w) in g.edges() {
                let a = g.pivot(u, w).unwrap();
                prop_assert_eq!(&a, &g.pivot(w, u).unwrap());
                prop_assert_eq!(&a, &g.pivot_by_local_complementation(u, w).unwrap());
                prop_assert_eq!(&a, &g.pivot_by_local_complementation(w, u).unwrap());
                prop_assert!(a.has_edge(u, w));
                prop_assert_eq!(a.pivot(u, w).unwrap(), g.clone());
            }
        }
    }
}
