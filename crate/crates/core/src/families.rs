//! Graph families and the flip algebra over grids of paths.
//!
//! Grid vertices use 1-based `(row, col)` labels; in [`grid`] the id of
//! `(r, c)` is `(r-1)*n + (c-1)`. A [`FlipSpec`] names classes by column
//! sets. Columns outside every class are uncovered and behave as singleton
//! classes that never occur in a pair.

use std::collections::{BTreeSet, HashMap};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{flip_set, Graph, Label, VertexId};

pub fn path(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for i in 1..n as u32 {
        g.add_edge(VertexId(i - 1), VertexId(i)).expect("in range");
    }
    g
}

pub fn complete(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for a in 0..n as u32 {
        for b in a + 1..n as u32 {
            g.add_edge(VertexId(a), VertexId(b)).expect("in range");
        }
    }
    g
}

pub fn empty(n: usize) -> Graph {
    Graph::new(n)
}

/// A path through the given ids in the given order.
pub fn path_on(order: &[VertexId]) -> Graph {
    let mut g = Graph::with_vertices(order.iter().copied());
    for w in order.windows(2) {
        g.add_edge(w[0], w[1]).expect("distinct ids");
    }
    g
}

pub fn grid_id(n: u32, row: u32, col: u32) -> VertexId {
    VertexId((row - 1) * n + (col - 1))
}

/// `m` disjoint copies of `P_n`, labelled by `(row, col)`.
pub fn grid(m: u32, n: u32) -> Graph {
    let mut g = Graph::new((m * n) as usize);
    for r in 1..=m {
        for c in 1..=n {
            g.set_label_unchecked(grid_id(n, r, c), Label::new(r, c));
            if c > 1 {
                g.add_edge(grid_id(n, r, c - 1), grid_id(n, r, c))
                    .expect("in range");
            }
        }
    }
    g
}

/// `G △ H`: the disjoint union plus an edge `u_i v_j` whenever `i ≥ j`,
/// where `u_i` is the `i`-th vertex of `order_g` and `v_j` the `j`-th of
/// `order_h`. Vertices of `h` are shifted by `g.id_bound()`.
pub fn half_graph_join(
    g: &Graph,
    h: &Graph,
    order_g: &[VertexId],
    order_h: &[VertexId],
) -> Result<Graph> {
    if g.order() != h.order() {
        return Err(Error::pre(format!(
            "half-graph join needs equal orders, got {} and {}",
            g.order(),
            h.order()
        )));
    }
    check_order(g, order_g)?;
    check_order(h, order_h)?;
    let (mut j, offset) = g.disjoint_union(h);
    for (i, &u) in order_g.iter().enumerate() {
        for &v in &order_h[..=i] {
            j.add_edge(u, VertexId(v.0 + offset))?;
        }
    }
    Ok(j)
}

fn check_order(g: &Graph, order: &[VertexId]) -> Result<()> {
    let set: BTreeSet<VertexId> = order.iter().copied().collect();
    if set.len() != order.len() || order.len() != g.order() || !set.iter().all(|&v| g.contains(v)) {
        return Err(Error::pre("ordering is not a bijection onto the vertex set"));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TriKind {
    KK,
    KKbar,
    KbarKbar,
}

/// `K_t △ K_t`, `K_t △ K̄_t` or `K̄_t △ K̄_t` on ids `u_i = i-1`, `v_j = t+j-1`.
pub fn tri_family(kind: TriKind, t: usize) -> Graph {
    let side = |clique: bool| if clique { complete(t) } else { empty(t) };
    let (a, b) = match kind {
        TriKind::KK => (side(true), side(true)),
        TriKind::KKbar => (side(true), side(false)),
        TriKind::KbarKbar => (side(false), side(false)),
    };
    let order: Vec<VertexId> = (0..t as u32).map(VertexId).collect();
    half_graph_join(&a, &b, &order, &order).expect("equal sides")
}

// -------------------------------------------------------------------------
// Flip specifications

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFlipSpec", into = "RawFlipSpec")]
pub struct FlipSpec {
    m: u32,
    n: u32,
    /// Sorted column lists, ordered by their smallest column.
    classes: Vec<Vec<u32>>,
    /// Unordered pairs stored as `(i, j)` with `i <= j`.
    pairs: BTreeSet<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct RawFlipSpec {
    m: u32,
    n: u32,
    classes: Vec<Vec<u32>>,
    pairs: Vec<(usize, usize)>,
}

impl TryFrom<RawFlipSpec> for FlipSpec {
    type Error = Error;
    fn try_from(r: RawFlipSpec) -> Result<Self> {
        FlipSpec::new(r.m, r.n, r.classes, r.pairs)
    }
}

impl From<FlipSpec> for RawFlipSpec {
    fn from(s: FlipSpec) -> Self {
        RawFlipSpec {
            m: s.m,
            n: s.n,
            classes: s.classes,
            pairs: s.pairs.into_iter().collect(),
        }
    }
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl FlipSpec {
    /// Validates and canonicalises: classes are sorted by smallest column and
    /// pair indices are remapped accordingly. Duplicate pairs are merged.
    pub fn new(
        m: u32,
        n: u32,
        classes: Vec<Vec<u32>>,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let invalid = |msg: String| Error::Invalid {
            what: "flip spec",
            msg,
        };
        if m == 0 || n == 0 {
            return Err(invalid("grid dimensions must be positive".into()));
        }
        let mut seen = BTreeSet::new();
        let mut sorted: Vec<(usize, Vec<u32>)> = Vec::with_capacity(classes.len());
        for (i, mut c) in classes.into_iter().enumerate() {
            if c.is_empty() {
                return Err(invalid(format!("class {i} is empty")));
            }
            c.sort_unstable();
            for &col in &c {
                if col == 0 || col > n {
                    return Err(invalid(format!("column {col} outside 1..={n}")));
                }
                if !seen.insert(col) {
                    return Err(invalid(format!("column {col} in two classes")));
                }
            }
            sorted.push((i, c));
        }
        sorted.sort_by_key(|(_, c)| c[0]);
        let mut new_index = vec![0; sorted.len()];
        for (pos, (old, _)) in sorted.iter().enumerate() {
            new_index[*old] = pos;
        }
        let k = sorted.len();
        let mut set = BTreeSet::new();
        for (a, b) in pairs {
            if a >= k || b >= k {
                return Err(invalid(format!("pair ({a},{b}) names a class beyond {k}")));
            }
            set.insert(ordered(new_index[a], new_index[b]));
        }
        Ok(FlipSpec {
            m,
            n,
            classes: sorted.into_iter().map(|(_, c)| c).collect(),
            pairs: set,
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of classes.
    pub fn k(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<u32>] {
        &self.classes
    }

    pub fn class(&self, a: usize) -> &[u32] {
        &self.classes[a]
    }

    /// Canonical pairs `(i, j)` with `i <= j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn has_pair(&self, a: usize, b: usize) -> bool {
        self.pairs.contains(&ordered(a, b))
    }

    pub fn class_of_column(&self, col: u32) -> Option<usize> {
        self.classes.iter().position(|c| c.binary_search(&col).is_ok())
    }

    /// Index of the class with exactly these columns.
    pub fn find_class(&self, cols: &[u32]) -> Option<usize> {
        let mut v = cols.to_vec();
        v.sort_unstable();
        self.classes.iter().position(|c| *c == v)
    }

    /// Classes paired with `a`, in index order.
    pub fn partners(&self, a: usize) -> Vec<usize> {
        (0..self.k()).filter(|&b| self.has_pair(a, b)).collect()
    }

    fn check_class(&self, a: usize) -> Result<()> {
        if a < self.k() {
            Ok(())
        } else {
            Err(Error::Invalid {
                what: "class index",
                msg: format!("{a} is not below {}", self.k()),
            })
        }
    }

    /// `(C, L, R)` for the classes `x`, `y`: classes paired with both, with
    /// `x` only, and with `y` only.
    pub fn clr(&self, x: usize, y: usize) -> Result<(Vec<usize>, Vec<usize>, Vec<usize>)> {
        self.check_class(x)?;
        self.check_class(y)?;
        if x == y {
            return Err(Error::pre("C/L/R need two distinct classes"));
        }
        let (mut c, mut l, mut r) = (Vec::new(), Vec::new(), Vec::new());
        for z in 0..self.k() {
            match (self.has_pair(x, z), self.has_pair(y, z)) {
                (true, true) => c.push(z),
                (true, false) => l.push(z),
                (false, true) => r.push(z),
                (false, false) => {}
            }
        }
        Ok((c, l, r))
    }

    /// The pairs toggled by pivoting an edge between `x` and `y`: every pair
    /// across two different sets among `C`, `L`, `R`.
    pub fn d_set(&self, x: usize, y: usize) -> Result<BTreeSet<(usize, usize)>> {
        let (c, l, r) = self.clr(x, y)?;
        let mut d = BTreeSet::new();
        for (p, q) in [(&c, &l), (&c, &r), (&l, &r)] {
            for &a in p {
                for &b in q {
                    d.insert(ordered(a, b));
                }
            }
        }
        Ok(d)
    }

    /// Symmetric difference of the pair set with `d`.
    pub fn toggled(&self, d: &BTreeSet<(usize, usize)>) -> FlipSpec {
        let mut s = self.clone();
        for &(a, b) in d {
            let p = ordered(a, b);
            if !s.pairs.remove(&p) {
                s.pairs.insert(p);
            }
        }
        s
    }

    /// Restriction to the first `rows` rows. Classes are column sets, so
    /// none of them empties and the pairs carry over unchanged.
    pub fn restrict_flip(&self, rows: u32) -> Result<FlipSpec> {
        if rows == 0 || rows > self.m {
            return Err(Error::Invalid {
                what: "row restriction",
                msg: format!("{rows} not in 1..={}", self.m),
            });
        }
        let mut s = self.clone();
        s.m = rows;
        Ok(s)
    }

    /// Restriction to the first `cols` columns. Emptied classes vanish along
    /// with their pairs.
    pub fn restrict_columns(&self, cols: u32) -> Result<FlipSpec> {
        if cols == 0 || cols > self.n {
            return Err(Error::Invalid {
                what: "column restriction",
                msg: format!("{cols} not in 1..={}", self.n),
            });
        }
        let mut keep = Vec::new();
        let mut new_index = vec![None; self.k()];
        for (i, c) in self.classes.iter().enumerate() {
            let cut: Vec<u32> = c.iter().copied().filter(|&x| x <= cols).collect();
            if !cut.is_empty() {
                new_index[i] = Some(keep.len());
                keep.push(cut);
            }
        }
        let pairs: Vec<(usize, usize)> = self
            .pairs
            .iter()
            .filter_map(|&(a, b)| Some((new_index[a]?, new_index[b]?)))
            .collect();
        FlipSpec::new(self.m, cols, keep, pairs)
    }

    /// The flip left on the first `rows` rows after pivoting an edge between
    /// classes `x` and `y` that lies outside those rows.
    pub fn predict_flip_after_pivot(&self, x: usize, y: usize, rows: u32) -> Result<FlipSpec> {
        let d = self.d_set(x, y)?;
        self.toggled(&d).restrict_flip(rows)
    }

    /// Replaces classes `x` and `y` by their union. Only valid when the two
    /// classes have the same partners, which makes the flip unchanged.
    pub fn merge(&self, x: usize, y: usize) -> Result<FlipSpec> {
        self.check_class(x)?;
        self.check_class(y)?;
        if x == y {
            return Err(Error::pre("cannot merge a class with itself"));
        }
        if let Some(z) = (0..self.k()).find(|&z| self.has_pair(x, z) != self.has_pair(y, z)) {
            return Err(Error::pre(format!(
                "classes {x} and {y} disagree on class {z}; merging would change the flip"
            )));
        }
        let mut classes: Vec<Vec<u32>> = Vec::with_capacity(self.k() - 1);
        let mut new_index = vec![0; self.k()];
        for i in 0..self.k() {
            if i == y {
                continue;
            }
            new_index[i] = classes.len();
            let mut c = self.classes[i].clone();
            if i == x {
                c.extend_from_slice(&self.classes[y]);
            }
            classes.push(c);
        }
        new_index[y] = new_index[x];
        let pairs: Vec<(usize, usize)> = self
            .pairs
            .iter()
            .map(|&(a, b)| (new_index[a], new_index[b]))
            .collect();
        FlipSpec::new(self.m, self.n, classes, pairs)
    }

    /// Drops class `x`, which must not occur in any pair.
    pub fn without_class(&self, x: usize) -> Result<FlipSpec> {
        self.check_class(x)?;
        if let Some(z) = self.partners(x).first() {
            return Err(Error::pre(format!("class {x} is still paired with class {z}")));
        }
        let mut classes = self.classes.clone();
        classes.remove(x);
        let shift = |a: usize| if a > x { a - 1 } else { a };
        let pairs: Vec<(usize, usize)> = self.pairs.iter().map(|&(a, b)| (shift(a), shift(b))).collect();
        FlipSpec::new(self.m, self.n, classes, pairs)
    }
}

/// Per-vertex class index and per-class flip masks for a labelled graph.
struct FlipMasks {
    class_of: HashMap<VertexId, usize>,
    toggles: Vec<BitSet>,
}

fn flip_masks(g: &Graph, spec: &FlipSpec) -> Result<FlipMasks> {
    let k = spec.k();
    let mut col_class = vec![None; spec.n as usize + 1];
    for (i, c) in spec.classes.iter().enumerate() {
        for &col in c {
            col_class[col as usize] = Some(i);
        }
    }
    let mut members = vec![BitSet::new(g.id_bound()); k];
    let mut class_of = HashMap::new();
    for v in g.vertices() {
        let l = g.label(v).ok_or_else(|| Error::Invalid {
            what: "flip input",
            msg: format!("vertex {v} has no grid label"),
        })?;
        if l.row == 0 || l.row > spec.m || l.col == 0 || l.col > spec.n {
            return Err(Error::Invalid {
                what: "flip input",
                msg: format!("label ({},{}) outside the {}x{} grid", l.row, l.col, spec.m, spec.n),
            });
        }
        if let Some(a) = col_class[l.col as usize] {
            members[a].insert(v.index());
            class_of.insert(v, a);
        }
    }
    let mut toggles = vec![BitSet::new(g.id_bound()); k];
    for &(a, b) in &spec.pairs {
        toggles[a].or_with(&members[b]);
        if a != b {
            toggles[b].or_with(&members[a]);
        }
    }
    Ok(FlipMasks { class_of, toggles })
}

/// `H ⊕ (P, F)` for a graph whose vertices carry grid labels inside the
/// spec's `m × n` box.
pub fn apply_flip(h: &Graph, spec: &FlipSpec) -> Result<Graph> {
    let masks = flip_masks(h, spec)?;
    let mut g = h.clone();
    for v in h.vertices() {
        if let Some(&a) = masks.class_of.get(&v) {
            g.xor_row_unchecked(v, &masks.toggles[a]);
        }
    }
    Ok(g)
}

/// The X-flip of a path: adjacency toggled between every two vertices of `x`.
pub fn x_flip(p: &Graph, x: &BTreeSet<VertexId>) -> Result<Graph> {
    if !p.is_path() {
        return Err(Error::pre("x_flip expects a path"));
    }
    flip_set(p, x)
}

/// The X-flip of the path through `order`.
pub fn x_flip_of_order(order: &[VertexId], x: &BTreeSet<VertexId>) -> Result<Graph> {
    flip_set(&path_on(order), x)
}

/// True iff `g` equals the flip of the labelled `m × n` grid described by
/// `spec`, vertex for vertex under `g`'s labels.
pub fn is_flip_of(g: &Graph, spec: &FlipSpec) -> bool {
    if g.order() != (spec.m * spec.n) as usize {
        return false;
    }
    let Ok(masks) = flip_masks(g, spec) else {
        return false;
    };
    let mut at: HashMap<Label, VertexId> = HashMap::with_capacity(g.order());
    for (v, l) in g.labels() {
        at.insert(l, v);
    }
    if at.len() != g.order() {
        return false;
    }
    for v in g.vertices() {
        let l = g.label(v).expect("checked");
        let mut expect = BitSet::new(g.id_bound());
        for col in [l.col.wrapping_sub(1), l.col + 1] {
            if let Some(w) = at.get(&Label::new(l.row, col)) {
                expect.insert(w.index());
            }
        }
        if let Some(&a) = masks.class_of.get(&v) {
            expect.xor_with(&masks.toggles[a]);
            expect.remove(v.index());
        }
        if !expect.same_bits(g.neighbor_set(v)) {
            return false;
        }
    }
    true
}

/// Largest order for which [`recognize_one_flip_of_path`] searches.
pub const RECOGNIZE_LIMIT: usize = 12;

/// Finds a set `X` such that `g` is the X-flip of a path, trying sets by
/// size and then lexicographically (sets of size one are skipped: they flip
/// nothing). `None` means no such set exists.
pub fn recognize_one_flip_of_path(g: &Graph) -> Result<Option<BTreeSet<VertexId>>> {
    let n = g.order();
    if n > RECOGNIZE_LIMIT {
        return Err(Error::SizeLimit {
            what: "1-flip recognition",
            limit: RECOGNIZE_LIMIT,
            actual: n,
        });
    }
    let ids: Vec<VertexId> = g.vertices().collect();
    let mut masks: Vec<u32> = (0..1u32 << n).filter(|m| m.count_ones() != 1).collect();
    let key = |m: &u32| {
        let members: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
        (m.count_ones(), members)
    };
    masks.sort_by_cached_key(key);
    for m in masks {
        let x: BTreeSet<VertexId> = (0..n).filter(|&i| m >> i & 1 == 1).map(|i| ids[i]).collect();
        if verify_one_flip_of_path(g, &x)?.is_some() {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Checks a candidate `X`: returns the path order when `g` is the X-flip of
/// that path.
pub fn verify_one_flip_of_path(g: &Graph, x: &BTreeSet<VertexId>) -> Result<Option<Vec<VertexId>>> {
    Ok(flip_set(g, x)?.path_order())
}

/// A seeded random flip of `grid(m, n)`: each column is left uncovered with
/// probability 1/4 and otherwise joins one of `max_classes` buckets; every
/// pair of resulting classes (diagonal included) enters F with probability 1/2.
pub fn random_flip_spec(m: u32, n: u32, max_classes: usize, rng: &mut impl Rng) -> FlipSpec {
    let buckets = max_classes.max(1);
    let mut classes = vec![Vec::new(); buckets];
    for col in 1..=n {
        if rng.gen_range(0..4) != 0 {
            classes[rng.gen_range(0..buckets)].push(col);
        }
    }
    classes.retain(|c| !c.is_empty());
    let k = classes.len();
    let mut pairs = Vec::new();
    for a in 0..k {
        for b in a..k {
            if rng.gen_bool(0.5) {
                pairs.push((a, b));
            }
        }
    }
    FlipSpec::new(m, n, classes, pairs).expect("well-formed by construction")
}

// -------------------------------------------------------------------------
// (s, t)-paths

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StPathSpec {
    pub s: usize,
    pub t: usize,
    /// 1-based position of the first vertex of the flipped block.
    pub offset: usize,
}

impl StPathSpec {
    pub fn new(s: usize, t: usize, offset: usize) -> Result<Self> {
        let spec = StPathSpec { s, t, offset };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.t > self.s || self.offset == 0 || self.offset + self.t > self.s + 1 {
            return Err(Error::Invalid {
                what: "(s,t)-path",
                msg: format!(
                    "need 0 <= t <= s and 1 <= offset <= s-t+1, got s={} t={} offset={}",
                    self.s, self.t, self.offset
                ),
            });
        }
        Ok(())
    }

    /// Ids of the flipped block in the graph built by [`st_path`].
    pub fn block(&self) -> BTreeSet<VertexId> {
        (self.offset - 1..self.offset - 1 + self.t)
            .map(|i| VertexId(i as u32))
            .collect()
    }
}

/// The X-flip of `path(s)` for the block of `t` vertices starting at `offset`.
pub fn st_path(spec: StPathSpec) -> Result<Graph> {
    spec.validate()?;
    flip_set(&path(spec.s), &spec.block())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn edges(g: &Graph) -> Vec<(u32, u32)> {
        g.edges().into_iter().map(|(a, b)| (a.0, b.0)).collect()
    }

    #[test]
    fn basic_families() {
        let g = grid(2, 2);
        assert_eq!(edges(&g), vec![(0, 1), (2, 3)]);
        assert_eq!(g.label(v(2)), Some(Label::new(2, 1)));
        assert_eq!(path(1).order(), 1);
        let g = grid(3, 4);
        assert_eq!((g.order(), g.size()), (12, 9));
    }

    #[test]
    fn half_graph_examples() {
        assert_eq!(edges(&tri_family(TriKind::KK, 1)), vec![(0, 1)]);
        // u1u2, v1v2, u1v1, u2v1, u2v2
        let kk2 = tri_family(TriKind::KK, 2);
        assert_eq!(edges(&kk2), vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]);
        let bb2 = tri_family(TriKind::KbarKbar, 2);
        assert_eq!(edges(&bb2), vec![(0, 2), (1, 2), (1, 3)]);
        // K4 △ K̄4: u-side clique, v_j adjacent to u_i for i >= j
        let g = tri_family(TriKind::KKbar, 4);
        assert_eq!(g.order(), 8);
        for i in 0..4u32 {
            for j in 0..4u32 {
                assert_eq!(g.has_edge(v(i), v(4 + j)), i >= j);
                if i != j {
                    assert!(g.has_edge(v(i), v(j)));
                    assert!(!g.has_edge(v(4 + i), v(4 + j)));
                }
            }
        }
        assert_eq!(g.size(), 6 + 10);
        assert!(half_graph_join(&path(2), &path(3), &[v(0), v(1)], &[v(0), v(1), v(2)]).is_err());
    }

    #[test]
    fn flip_examples() {
        // one class {col 1}, diagonal pair: P4 (1,2)-(1,1)-(2,1)-(2,2)
        let spec = FlipSpec::new(2, 2, vec![vec![1]], [(0, 0)]).unwrap();
        let g = apply_flip(&grid(2, 2), &spec).unwrap();
        assert_eq!(edges(&g), vec![(0, 1), (0, 2), (2, 3)]);
        assert!(g.is_path());
        assert!(is_flip_of(&g, &spec));
        assert!(!is_flip_of(&grid(2, 2), &spec));

        let ends: BTreeSet<_> = [v(0), v(3)].into();
        let c4 = x_flip(&path(4), &ends).unwrap();
        assert_eq!(c4.size(), 4);
        assert!(c4.vertices().all(|x| c4.degree(x) == 2));
        assert_eq!(x_flip(&path(5), &BTreeSet::new()).unwrap(), path(5));
        assert!(apply_flip(&grid(3, 3), &spec).is_err());
    }

    #[test]
    fn flip_is_involution_and_local() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let spec = random_flip_spec(4, 5, 3, &mut rng);
            let h = grid(4, 5);
            let g = apply_flip(&h, &spec).unwrap();
            assert!(is_flip_of(&g, &spec));
            assert_eq!(apply_flip(&g, &spec).unwrap(), h);
            for (a, b) in h.edges() {
                let ca = spec.class_of_column(h.label(a).unwrap().col);
                let cb = spec.class_of_column(h.label(b).unwrap().col);
                let flipped = matches!((ca, cb), (Some(x), Some(y)) if spec.has_pair(x, y));
                assert_eq!(g.has_edge(a, b), !flipped);
            }
        }
    }

    #[test]
    fn three_class_clr() {
        // X = {1}, X1 = {2}, X2 = {3}; F = (X,X1),(X,X2),(X1,X2),(X1,X1)
        let spec = FlipSpec::new(4, 3, vec![vec![1], vec![2], vec![3]], [(0, 1), (0, 2), (1, 2), (1, 1)]).unwrap();
        let (c, l, r) = spec.clr(0, 1).unwrap();
        assert_eq!(c, vec![1, 2]);
        assert!(l.is_empty());
        assert_eq!(r, vec![0]);
        let predicted = spec.predict_flip_after_pivot(0, 1, 2).unwrap();
        assert!(predicted.partners(0).is_empty());
        assert_eq!(predicted.m(), 2);

        let none = FlipSpec::new(2, 2, vec![vec![1], vec![2]], []).unwrap();
        assert_eq!(none.clr(0, 1).unwrap(), (vec![], vec![], vec![]));
        assert!(none.d_set(0, 1).unwrap().is_empty());

        // L = {A}, R = {B}, C = ∅
        let lr = FlipSpec::new(2, 4, vec![vec![1], vec![2], vec![3], vec![4]], [(0, 2), (1, 3)]).unwrap();
        let (c, l, r) = lr.clr(0, 1).unwrap();
        assert_eq!((c, l, r), (vec![], vec![2], vec![3]));
        assert_eq!(lr.d_set(0, 1).unwrap(), BTreeSet::from([(2, 3)]));
    }

    #[test]
    fn d_set_properties() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let spec = random_flip_spec(3, 6, 4, &mut rng);
            for x in 0..spec.k() {
                for y in 0..spec.k() {
                    if x == y {
                        continue;
                    }
                    let d = spec.d_set(x, y).unwrap();
                    assert_eq!(d, spec.d_set(y, x).unwrap());
                    let (c, l, r) = spec.clr(x, y).unwrap();
                    for &(a, b) in &d {
                        for set in [&c, &l, &r] {
                            assert!(!(set.contains(&a) && set.contains(&b)));
                        }
                    }
                }
            }
            assert_eq!(spec.restrict_flip(1).unwrap().classes(), spec.classes());
        }
    }

    #[test]
    fn spec_canonicalisation_and_json() {
        let a = FlipSpec::new(3, 4, vec![vec![4, 2], vec![1]], [(0, 1), (1, 0), (0, 0)]).unwrap();
        assert_eq!(a.classes(), &[vec![1], vec![2, 4]]);
        assert_eq!(a.pairs().collect::<Vec<_>>(), vec![(0, 1), (1, 1)]);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"m":3,"n":4,"classes":[[1],[2,4]],"pairs":[[0,1],[1,1]]}"#);
        assert_eq!(serde_json::from_str::<FlipSpec>(&json).unwrap(), a);
        assert!(serde_json::from_str::<FlipSpec>(r#"{"m":3,"n":4,"classes":[[5]],"pairs":[]}"#).is_err());
        assert!(FlipSpec::new(3, 4, vec![vec![1], vec![1]], []).is_err());
        assert!(FlipSpec::new(3, 4, vec![vec![1]], [(0, 1)]).is_err());
    }

    #[test]
    fn merge_and_drop() {
        let s = FlipSpec::new(2, 3, vec![vec![1], vec![2], vec![3]], [(0, 0), (0, 1), (1, 1), (0, 2), (1, 2)]).unwrap();
        let merged = s.merge(0, 1).unwrap();
        assert_eq!(merged.classes(), &[vec![1, 2], vec![3]]);
        assert_eq!(merged.pairs().collect::<Vec<_>>(), vec![(0, 0), (0, 1)]);
        let h = grid(2, 3);
        assert_eq!(apply_flip(&h, &merged).unwrap(), apply_flip(&h, &s).unwrap());
        assert!(s.merge(0, 2).is_err());
        let lone = FlipSpec::new(2, 3, vec![vec![1], vec![3]], [(1, 1)]).unwrap();
        assert_eq!(lone.without_class(0).unwrap().classes(), &[vec![3]]);
        assert!(lone.without_class(1).is_err());
    }

    #[test]
    fn column_restriction() {
        let s = FlipSpec::new(2, 4, vec![vec![1, 4], vec![3]], [(0, 1), (1, 1)]).unwrap();
        let r = s.restrict_columns(2).unwrap();
        assert_eq!(r.classes(), &[vec![1]]);
        assert_eq!(r.k(), 1);
        assert_eq!(r.pairs().count(), 0);
        let r = s.restrict_columns(3).unwrap();
        assert_eq!(r.pairs().collect::<Vec<_>>(), vec![(0, 1), (1, 1)]);
    }

    #[test]
    fn st_paths() {
        assert_eq!(st_path(StPathSpec::new(5, 0, 1).unwrap()).unwrap(), path(5));
        assert_eq!(st_path(StPathSpec::new(5, 1, 3).unwrap()).unwrap(), path(5));
        assert_eq!(st_path(StPathSpec::new(5, 5, 1).unwrap()).unwrap(), path(5).complement());
        // P6 with block {2,3,4}: 23 and 34 removed, 24 added
        let g = st_path(StPathSpec::new(6, 3, 2).unwrap()).unwrap();
        assert_eq!(edges(&g), vec![(0, 1), (1, 3), (3, 4), (4, 5)]);
        assert!(StPathSpec::new(5, 3, 4).is_err());
    }

    #[test]
    fn one_flip_recognition() {
        let ends: BTreeSet<_> = [v(0), v(3)].into();
        let c4 = x_flip(&path(4), &ends).unwrap();
        let x = recognize_one_flip_of_path(&c4).unwrap().unwrap();
        assert_eq!(x.len(), 2);
        assert!(verify_one_flip_of_path(&c4, &x).unwrap().is_some());
        assert_eq!(recognize_one_flip_of_path(&path(6)).unwrap(), Some(BTreeSet::new()));
        let claw = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(recognize_one_flip_of_path(&claw).unwrap(), None);
        assert!(recognize_one_flip_of_path(&path(13)).is_err());
    }

    #[test]
    fn recognition_finds_planted_sets() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..40 {
            let n = rng.gen_range(1..=9u32);
            let x: BTreeSet<VertexId> = (0..n).filter(|_| rng.gen_bool(0.5)).map(v).collect();
            let g = x_flip(&path(n as usize), &x).unwrap();
            let found = recognize_one_flip_of_path(&g).unwrap().expect("planted");
            assert!(flip_set(&g, &found).unwrap().is_path());
        }
    }
}
