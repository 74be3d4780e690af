//! Cut-rank, decomposition width and radius, exact rank-depth of small
//! graphs, and tree-model validation.
//!
//! Rank-depth is computed by enumerating every tree whose internal nodes have
//! degree at least 3 and whose leaves are the vertices. Suppressing a
//! degree-2 node changes no partition `P_v` of the remaining nodes and cannot
//! raise the radius, so these trees suffice.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::bitset::{gf2_rank, gf2_rank_u64, BitSet};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// Default cap on the degree of a node whose width is evaluated.
pub const DEFAULT_DEGREE_CAP: usize = 12;
/// Default vertex bound for [`rank_depth`].
pub const DEFAULT_RANK_DEPTH_BOUND: usize = 8;
/// Hard ceiling: 9 leaves already give about five million trees.
pub const MAX_RANK_DEPTH_VERTICES: usize = 9;

/// GF(2) rank of the adjacency submatrix between `s` and the remaining
/// active vertices. Ids in `s` that are not active are ignored.
pub fn cut_rank(g: &Graph, s: &[VertexId]) -> usize {
    let mut inside = BitSet::new(g.id_bound());
    for &v in s {
        if g.contains(v) {
            inside.insert(v.index());
        }
    }
    let mut outside = g.vertex_set().clone();
    outside.and_not_with(&inside);
    // the smaller side gives fewer rows
    let (rows_of, mask) = if inside.len() <= outside.len() {
        (&inside, &outside)
    } else {
        (&outside, &inside)
    };
    let rows: Vec<BitSet> = rows_of
        .iter()
        .map(|v| {
            let mut r = g.neighbor_set(VertexId(v as u32)).clone();
            r.and_with(mask);
            r
        })
        .collect();
    gf2_rank(rows)
}

// -------------------------------------------------------------------------
// Decompositions

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub nodes: Vec<u32>,
    pub edges: Vec<(u32, u32)>,
    /// `(vertex, leaf node)` pairs.
    pub leaf_map: Vec<(VertexId, u32)>,
}

/// Checked, index-based view of a tree.
struct Tree {
    ids: Vec<u32>,
    adj: Vec<Vec<usize>>,
}

impl Tree {
    fn build(what: &'static str, nodes: &[u32], edges: &[(u32, u32)]) -> Result<Tree> {
        let invalid = |msg: String| Error::Invalid { what, msg };
        let mut index = HashMap::new();
        for (i, &n) in nodes.iter().enumerate() {
            if index.insert(n, i).is_some() {
                return Err(invalid(format!("node {n} listed twice")));
            }
        }
        if nodes.is_empty() {
            return Err(invalid("tree has no nodes".into()));
        }
        let mut adj = vec![Vec::new(); nodes.len()];
        let mut seen = BTreeSet::new();
        for &(a, b) in edges {
            let (Some(&i), Some(&j)) = (index.get(&a), index.get(&b)) else {
                return Err(invalid(format!("edge {a}-{b} names an unknown node")));
            };
            if i == j || !seen.insert((i.min(j), i.max(j))) {
                return Err(invalid(format!("edge {a}-{b} is a loop or repeated")));
            }
            adj[i].push(j);
            adj[j].push(i);
        }
        let tree = Tree {
            ids: nodes.to_vec(),
            adj,
        };
        if edges.len() + 1 != nodes.len() || tree.distances(0).iter().any(|d| d.is_none()) {
            return Err(invalid("not a tree".into()));
        }
        Ok(tree)
    }

    fn index_of(&self, node: u32) -> Option<usize> {
        self.ids.iter().position(|&n| n == node)
    }

    fn distances(&self, from: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.adj.len()];
        dist[from] = Some(0);
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap();
            for &y in &self.adj[x] {
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    fn radius(&self) -> usize {
        let far = |from: usize| {
            self.distances(from)
                .into_iter()
                .enumerate()
                .max_by_key(|&(i, d)| (d.unwrap(), std::cmp::Reverse(i)))
                .map(|(i, d)| (i, d.unwrap()))
                .unwrap()
        };
        let (a, _) = far(0);
        let (_, diameter) = far(a);
        diameter.div_ceil(2)
    }
}

struct DecView {
    tree: Tree,
    /// Vertex at each leaf node.
    vertex_at: Vec<Option<VertexId>>,
}

impl Decomposition {
    /// One internal node joined to a leaf per vertex; a single node for a
    /// graph with at most one vertex.
    pub fn star(g: &Graph) -> Decomposition {
        let vs: Vec<VertexId> = g.vertices().collect();
        if vs.len() <= 1 {
            return Decomposition {
                nodes: vec![0],
                edges: vec![],
                leaf_map: vs.into_iter().map(|v| (v, 0)).collect(),
            };
        }
        let n = vs.len() as u32;
        Decomposition {
            nodes: (0..=n).collect(),
            edges: (1..=n).map(|i| (0, i)).collect(),
            leaf_map: vs.into_iter().zip(1..=n).collect(),
        }
    }

    fn view(&self, g: &Graph) -> Result<DecView> {
        let tree = Tree::build("decomposition", &self.nodes, &self.edges)?;
        let invalid = |msg: String| Error::Invalid {
            what: "decomposition",
            msg,
        };
        let mut vertex_at = vec![None; tree.ids.len()];
        let mut mapped = BTreeSet::new();
        for &(v, node) in &self.leaf_map {
            if !g.contains(v) || !mapped.insert(v) {
                return Err(invalid(format!("leaf map entry for vertex {v} is unknown or repeated")));
            }
            let i = tree
                .index_of(node)
                .ok_or_else(|| invalid(format!("leaf map names unknown node {node}")))?;
            if tree.adj[i].len() > 1 {
                return Err(invalid(format!("node {node} is not a leaf")));
            }
            if vertex_at[i].replace(v).is_some() {
                return Err(invalid(format!("two vertices on leaf {node}")));
            }
        }
        if mapped.len() != g.order() {
            return Err(invalid("some vertex has no leaf".into()));
        }
        if let Some(i) = (0..tree.ids.len()).find(|&i| tree.adj[i].len() <= 1 && vertex_at[i].is_none()) {
            return Err(invalid(format!("leaf {} carries no vertex", tree.ids[i])));
        }
        Ok(DecView { tree, vertex_at })
    }

    /// Radius of the tree.
    pub fn radius(&self) -> Result<usize> {
        Ok(Tree::build("decomposition", &self.nodes, &self.edges)?.radius())
    }

    /// Suppresses every degree-2 node.
    pub fn normalized(&self) -> Decomposition {
        let mut adj: HashMap<u32, BTreeSet<u32>> = self.nodes.iter().map(|&n| (n, BTreeSet::new())).collect();
        for &(a, b) in &self.edges {
            adj.get_mut(&a).map(|s| s.insert(b));
            adj.get_mut(&b).map(|s| s.insert(a));
        }
        let leaves: BTreeSet<u32> = self.leaf_map.iter().map(|&(_, n)| n).collect();
        while let Some(&x) = adj
            .iter()
            .find(|(n, s)| s.len() == 2 && !leaves.contains(n))
            .map(|(n, _)| n)
        {
            let ends: Vec<u32> = adj.remove(&x).unwrap().into_iter().collect();
            for &e in &ends {
                adj.get_mut(&e).unwrap().remove(&x);
            }
            adj.get_mut(&ends[0]).unwrap().insert(ends[1]);
            adj.get_mut(&ends[1]).unwrap().insert(ends[0]);
        }
        let mut nodes: Vec<u32> = adj.keys().copied().collect();
        nodes.sort_unstable();
        let mut edges = Vec::new();
        for (&a, s) in &adj {
            for &b in s.iter().filter(|&&b| a < b) {
                edges.push((a, b));
            }
        }
        edges.sort_unstable();
        Decomposition {
            nodes,
            edges,
            leaf_map: self.leaf_map.clone(),
        }
    }
}

/// Width of the non-leaf node `node`: the largest cut-rank of a union of
/// parts of the partition that the components of `T - node` induce.
pub fn node_width(g: &Graph, dec: &Decomposition, node: u32, degree_cap: usize) -> Result<usize> {
    let view = dec.view(g)?;
    node_width_in(g, &view, node, degree_cap)
}

fn node_width_in(g: &Graph, view: &DecView, node: u32, degree_cap: usize) -> Result<usize> {
    let tree = &view.tree;
    let x = tree.index_of(node).ok_or_else(|| Error::Invalid {
        what: "decomposition",
        msg: format!("unknown node {node}"),
    })?;
    if tree.adj[x].len() <= 1 {
        return Err(Error::pre(format!("node {node} is a leaf")));
    }
    if tree.adj[x].len() > degree_cap {
        return Err(Error::SizeLimit {
            what: "node degree",
            limit: degree_cap,
            actual: tree.adj[x].len(),
        });
    }
    let mut parts: Vec<Vec<VertexId>> = Vec::new();
    for &start in &tree.adj[x] {
        let mut part = Vec::new();
        let mut stack = vec![(start, x)];
        while let Some((y, from)) = stack.pop() {
            if let Some(v) = view.vertex_at[y] {
                part.push(v);
            }
            for &z in &tree.adj[y] {
                if z != from {
                    stack.push((z, y));
                }
            }
        }
        if !part.is_empty() {
            parts.push(part);
        }
    }
    let p = parts.len();
    if p <= 1 {
        return Ok(0);
    }
    // cut-rank is symmetric, so the last part can always stay outside
    let mut best = 0;
    for mask in 1u32..(1 << (p - 1)) {
        let s: Vec<VertexId> = (0..p - 1)
            .filter(|i| mask >> i & 1 == 1)
            .flat_map(|i| parts[i].iter().copied())
            .collect();
        best = best.max(cut_rank(g, &s));
    }
    Ok(best)
}

/// Maximum node width over non-leaf nodes; 0 when there are none.
pub fn width(g: &Graph, dec: &Decomposition) -> Result<usize> {
    let view = dec.view(g)?;
    let mut best = 0;
    for (i, &id) in view.tree.ids.iter().enumerate() {
        if view.tree.adj[i].len() > 1 {
            best = best.max(node_width_in(g, &view, id, DEFAULT_DEGREE_CAP)?);
        }
    }
    Ok(best)
}

/// `max(width, radius)`: the least `k` for which `dec` is a `(k,k)`-decomposition.
pub fn decomposition_depth(g: &Graph, dec: &Decomposition) -> Result<usize> {
    if g.order() <= 1 {
        dec.view(g)?;
        return Ok(0);
    }
    Ok(width(g, dec)?.max(dec.radius()?))
}

pub fn rank_depth(g: &Graph, max_vertices: usize) -> Result<usize> {
    Ok(optimal_decomposition(g, max_vertices)?.0)
}

/// Rank-depth together with a decomposition attaining it.
pub fn optimal_decomposition(g: &Graph, max_vertices: usize) -> Result<(usize, Decomposition)> {
    let limit = max_vertices.min(MAX_RANK_DEPTH_VERTICES);
    let n = g.order();
    if n > limit {
        return Err(Error::SizeLimit {
            what: "rank-depth input",
            limit,
            actual: n,
        });
    }
    let vs: Vec<VertexId> = g.vertices().collect();
    if n <= 1 {
        return Ok((0, Decomposition::star(g)));
    }
    if n == 2 {
        let dec = Decomposition {
            nodes: vec![0, 1],
            edges: vec![(0, 1)],
            leaf_map: vec![(vs[0], 0), (vs[1], 1)],
        };
        return Ok((1, dec));
    }

    // cut-rank of every vertex subset, by position
    let adj: Vec<u64> = vs
        .iter()
        .map(|&u| {
            vs.iter()
                .enumerate()
                .filter(|&(_, &w)| g.has_edge(u, w))
                .fold(0u64, |m, (j, _)| m | 1 << j)
        })
        .collect();
    let full = (1u64 << n) - 1;
    let table: Vec<u8> = (0..1u64 << n)
        .map(|s| {
            let mut rows: Vec<u64> = (0..n)
                .filter(|&i| s >> i & 1 == 1)
                .map(|i| adj[i] & !s & full)
                .collect();
            gf2_rank_u64(&mut rows) as u8
        })
        .collect();

    let mut search = TreeSearch {
        n,
        table,
        edges: vec![(n, 0), (n, 1), (n, 2)],
        internal: 1,
        best: usize::MAX,
        best_edges: Vec::new(),
    };
    // the star is a good first bound
    let star: Vec<(usize, usize)> = (0..n).map(|i| (n, i)).collect();
    search.best = search.evaluate(&star, usize::MAX).expect("unbounded");
    search.best_edges = star;
    search.extend(3);

    let nodes: BTreeSet<u32> = search
        .best_edges
        .iter()
        .flat_map(|&(a, b)| [a as u32, b as u32])
        .collect();
    let dec = Decomposition {
        nodes: nodes.into_iter().collect(),
        edges: search
            .best_edges
            .iter()
            .map(|&(a, b)| (a as u32, b as u32))
            .collect(),
        leaf_map: vs.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect(),
    };
    Ok((search.best, dec))
}

/// Leaves are `0..n`; internal nodes are numbered from `n` in creation order.
struct TreeSearch {
    n: usize,
    table: Vec<u8>,
    edges: Vec<(usize, usize)>,
    internal: usize,
    best: usize,
    best_edges: Vec<(usize, usize)>,
}

impl TreeSearch {
    fn extend(&mut self, leaf: usize) {
        if self.best <= 1 {
            return;
        }
        if leaf == self.n {
            if let Some(value) = self.evaluate(&self.edges, self.best) {
                self.best = value;
                self.best_edges = self.edges.clone();
            }
            return;
        }
        // attach to an existing internal node
        for x in self.n..self.n + self.internal {
            self.edges.push((x, leaf));
            self.extend(leaf + 1);
            self.edges.pop();
        }
        // subdivide an edge
        let y = self.n + self.internal;
        for e in 0..self.edges.len() {
            let (a, b) = self.edges[e];
            self.edges[e] = (a, y);
            self.edges.push((y, b));
            self.edges.push((y, leaf));
            self.internal += 1;
            self.extend(leaf + 1);
            self.internal -= 1;
            self.edges.pop();
            self.edges.pop();
            self.edges[e] = (a, b);
        }
    }

    /// `max(width, radius)` if it is below `bound`.
    fn evaluate(&self, edges: &[(usize, usize)], bound: usize) -> Option<usize> {
        let count = edges.len() + 1;
        let mut adj = vec![Vec::new(); count];
        for &(a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let tree = Tree {
            ids: (0..count as u32).collect(),
            adj,
        };
        let radius = tree.radius();
        if radius >= bound {
            return None;
        }
        let mut value = radius;
        for x in self.n..count {
            let parts: Vec<u64> = tree.adj[x]
                .iter()
                .map(|&start| {
                    let mut mask = 0u64;
                    let mut stack = vec![(start, x)];
                    while let Some((y, from)) = stack.pop() {
                        if y < self.n {
                            mask |= 1 << y;
                        }
                        for &z in &tree.adj[y] {
                            if z != from {
                                stack.push((z, y));
                            }
                        }
                    }
                    mask
                })
                .collect();
            let p = parts.len();
            for sel in 1u32..(1 << (p - 1)) {
                let s = (0..p - 1)
                    .filter(|i| sel >> i & 1 == 1)
                    .fold(0u64, |m, i| m | parts[i]);
                value = value.max(self.table[s as usize] as usize);
                if value >= bound {
                    return None;
                }
            }
        }
        Some(value)
    }
}

// -------------------------------------------------------------------------
// Tree-models

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeModel {
    pub root: u32,
    pub depth: usize,
    pub label_count: usize,
    pub nodes: Vec<u32>,
    pub edges: Vec<(u32, u32)>,
    /// `(vertex, leaf node)` pairs identifying vertices with leaves.
    pub leaf_map: Vec<(VertexId, u32)>,
    /// `(vertex, label)` with labels in `1..=label_count`.
    pub lambda: Vec<(VertexId, usize)>,
    /// Triples `(label, label, half distance)`.
    pub s: Vec<(usize, usize, usize)>,
}

impl TreeModel {
    /// The `(1, n)`-tree-model: a root with one leaf per vertex, injective
    /// labels and `S = {(λ(u), λ(v), 1) : uv ∈ E}` in both orders.
    pub fn canonical(g: &Graph) -> TreeModel {
        let vs: Vec<VertexId> = g.vertices().collect();
        let n = vs.len();
        let label: HashMap<VertexId, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i + 1)).collect();
        let mut s = Vec::new();
        for (u, v) in g.edges() {
            s.push((label[&u], label[&v], 1));
            s.push((label[&v], label[&u], 1));
        }
        s.sort_unstable();
        TreeModel {
            root: 0,
            depth: 1,
            label_count: n.max(1),
            nodes: (0..=n as u32).collect(),
            edges: (1..=n as u32).map(|i| (0, i)).collect(),
            leaf_map: vs.iter().enumerate().map(|(i, &v)| (v, i as u32 + 1)).collect(),
            lambda: vs.iter().enumerate().map(|(i, &v)| (v, i + 1)).collect(),
            s,
        }
    }
}

/// Checks the three conditions of a `(depth, label_count)`-tree-model:
/// every leaf at distance `depth` from the root, leaves identical to the
/// vertices, and adjacency given by `S`. Malformed models and leaf maps
/// whose vertices differ from `g`'s are errors.
pub fn validate_tree_model(g: &Graph, tm: &TreeModel) -> Result<bool> {
    let tree = Tree::build("tree-model", &tm.nodes, &tm.edges)?;
    let invalid = |msg: String| Error::Invalid {
        what: "tree-model",
        msg,
    };
    let root = tree
        .index_of(tm.root)
        .ok_or_else(|| invalid(format!("root {} is not a node", tm.root)))?;
    if tm.label_count == 0 {
        return Err(invalid("label count must be positive".into()));
    }
    let mut s = BTreeSet::new();
    for &(a, b, h) in &tm.s {
        let legal = (1..=tm.label_count).contains(&a)
            && (1..=tm.label_count).contains(&b)
            && (1..=tm.depth).contains(&h);
        if !legal {
            return Err(invalid(format!("triple ({a},{b},{h}) outside [m]x[m]x[d]")));
        }
        s.insert((a, b, h));
    }

    let keys: BTreeSet<VertexId> = tm.leaf_map.iter().map(|&(v, _)| v).collect();
    let vertices: BTreeSet<VertexId> = g.vertices().collect();
    if keys != vertices || tm.leaf_map.len() != keys.len() {
        return Err(Error::pre("leaf map vertices differ from the graph's vertices"));
    }
    let mut lambda = HashMap::new();
    for &(v, l) in &tm.lambda {
        if !(1..=tm.label_count).contains(&l) {
            return Err(invalid(format!("label {l} of vertex {v} outside 1..={}", tm.label_count)));
        }
        if lambda.insert(v, l).is_some() {
            return Err(invalid(format!("vertex {v} labelled twice")));
        }
    }
    if lambda.keys().copied().collect::<BTreeSet<_>>() != vertices {
        return Err(invalid("labels must cover exactly the vertices".into()));
    }

    // leaves of a rooted tree: childless non-root nodes, or the lone root
    let leaves: BTreeSet<usize> = if tree.ids.len() == 1 {
        BTreeSet::from([root])
    } else {
        (0..tree.ids.len())
            .filter(|&i| i != root && tree.adj[i].len() == 1)
            .collect()
    };
    let depth = tree.distances(root);
    if leaves.iter().any(|&i| depth[i] != Some(tm.depth)) {
        return Ok(false);
    }
    let mut at: Vec<(VertexId, usize)> = Vec::new();
    let mut used = BTreeSet::new();
    for &(v, node) in &tm.leaf_map {
        let Some(i) = tree.index_of(node) else {
            return Ok(false);
        };
        if !leaves.contains(&i) || !used.insert(i) {
            return Ok(false);
        }
        at.push((v, i));
    }
    if used.len() != leaves.len() {
        return Ok(false);
    }
    for (a, &(u, iu)) in at.iter().enumerate() {
        let dist = tree.distances(iu);
        for &(v, iv) in &at[a + 1..] {
            let d = dist[iv].expect("connected");
            if d % 2 == 1 {
                return Ok(false);
            }
            let (lu, lv) = (lambda[&u], lambda[&v]);
            let fwd = s.contains(&(lu, lv, d / 2));
            let bwd = s.contains(&(lv, lu, d / 2));
            if fwd != bwd || fwd != g.has_edge(u, v) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
