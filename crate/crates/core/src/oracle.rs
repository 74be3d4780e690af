//! Independent verification: trace replay, canonical forms of small graphs,
//! and exhaustive pivot-minor / induced-subgraph search.
//!
//! Nothing in here calls into the extraction code; it only depends on the
//! graph primitives, so it can be used to audit extraction results.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, DEFAULT_ISO_BOUND};
use crate::trace::{PivotTrace, Step};

/// Hard ceiling for canonical forms: 16 vertices fill 120 bits of a `u128`.
pub const MAX_CANONICAL_VERTICES: usize = 16;

/// Isomorphism-class key: the minimum upper-triangle adjacency string over
/// the orderings visited by a refinement search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub order: u8,
    pub bits: u128,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_states: usize,
    pub max_vertices: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_states: 1_000_000,
            max_vertices: DEFAULT_ISO_BOUND,
        }
    }
}

impl SearchBudget {
    pub fn new(max_states: usize, max_vertices: usize) -> Result<Self> {
        if max_states == 0 || max_vertices == 0 {
            return Err(Error::Invalid {
                what: "search budget",
                msg: "limits must be positive".into(),
            });
        }
        Ok(SearchBudget {
            max_states,
            max_vertices,
        })
    }
}

/// Three-valued search result. `Unknown` means the budget ran out and says
/// nothing about containment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    NotFound,
    Unknown,
}

impl<T> SearchOutcome<T> {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }
}

// -------------------------------------------------------------------------
// Replay

/// Applies `trace` to `g`. Errors name the index of the faulting step.
pub fn replay(g: &Graph, trace: &PivotTrace) -> Result<Graph> {
    let mut h = g.clone();
    replay_mut(&mut h, trace)?;
    Ok(h)
}

pub fn replay_mut(g: &mut Graph, trace: &PivotTrace) -> Result<()> {
    let steps = &trace.steps;
    let mut i = 0;
    while i < steps.len() {
        match steps[i] {
            Step::Pivot(u, v) => {
                g.pivot_mut(u, v).map_err(|e| Error::Replay {
                    step: i,
                    reason: e.to_string(),
                })?;
                i += 1;
            }
            Step::Delete(_) => {
                // consecutive deletions are applied as one batch
                let start = i;
                let mut batch = Vec::new();
                let mut seen = HashSet::new();
                while let Some(&Step::Delete(v)) = steps.get(i) {
                    if !g.contains(v) || !seen.insert(v) {
                        return Err(Error::Replay {
                            step: i,
                            reason: format!("vertex {v} is not active"),
                        });
                    }
                    batch.push(v);
                    i += 1;
                }
                g.delete_set_mut(&batch).map_err(|e| Error::Replay {
                    step: start,
                    reason: e.to_string(),
                })?;
            }
        }
    }
    Ok(())
}

// -------------------------------------------------------------------------
// Small graphs as bit masks

#[derive(Clone, Debug)]
struct Small {
    ids: Vec<VertexId>,
    adj: Vec<u32>,
}

impl Small {
    fn from_graph(g: &Graph) -> Small {
        let ids: Vec<VertexId> = g.vertices().collect();
        let adj = ids
            .iter()
            .map(|&u| {
                ids.iter()
                    .enumerate()
                    .filter(|&(_, &w)| g.has_edge(u, w))
                    .fold(0u32, |m, (j, _)| m | 1 << j)
            })
            .collect();
        Small { ids, adj }
    }

    fn n(&self) -> usize {
        self.ids.len()
    }

    fn pivot(&self, i: usize, j: usize) -> Small {
        let (bi, bj) = (1u32 << i, 1u32 << j);
        let (ni, nj) = (self.adj[i], self.adj[j]);
        let c = ni & nj;
        let l = ni & !nj & !bj;
        let r = nj & !ni & !bi;
        let mut adj = self.adj.clone();
        for x in 0..self.n() {
            let bx = 1u32 << x;
            let mut row = adj[x];
            if c & bx != 0 {
                row ^= l | r;
            } else if l & bx != 0 {
                row ^= c | r;
                row = (row & !bi) | bj;
            } else if r & bx != 0 {
                row ^= c | l;
                row = (row & !bj) | bi;
            }
            adj[x] = row;
        }
        adj[i] = c | r | bj;
        adj[j] = c | l | bi;
        Small {
            ids: self.ids.clone(),
            adj,
        }
    }

    fn delete(&self, i: usize) -> Small {
        let squeeze = |m: u32| (m & ((1 << i) - 1)) | ((m >> (i + 1)) << i);
        let mut ids = self.ids.clone();
        ids.remove(i);
        let adj = (0..self.n())
            .filter(|&x| x != i)
            .map(|x| squeeze(self.adj[x]))
            .collect();
        Small { ids, adj }
    }

    fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }
}

// -------------------------------------------------------------------------
// Canonical forms

pub fn canonical_form(g: &Graph) -> Result<CanonicalForm> {
    canonical_form_within(g, DEFAULT_ISO_BOUND)
}

pub fn canonical_form_within(g: &Graph, bound: usize) -> Result<CanonicalForm> {
    let limit = bound.min(MAX_CANONICAL_VERTICES);
    if g.order() > limit {
        return Err(Error::SizeLimit {
            what: "graph for canonical form",
            limit,
            actual: g.order(),
        });
    }
    Ok(canon_masks(&Small::from_graph(g).adj))
}

fn canon_masks(adj: &[u32]) -> CanonicalForm {
    let n = adj.len();
    let mut best: Option<u128> = None;
    let cells = vec![(0..n as u8).collect::<Vec<u8>>()];
    if n > 0 {
        canon_search(adj, cells, &mut best);
    }
    CanonicalForm {
        order: n as u8,
        bits: best.unwrap_or(0),
    }
}

/// Splits cells by neighbour counts into other cells until the ordered
/// partition is equitable. Each split depends only on cell positions and
/// counts, so the result is isomorphism-invariant.
fn refine(adj: &[u32], cells: &mut Vec<Vec<u8>>) {
    'outer: loop {
        for s in 0..cells.len() {
            let smask = cells[s].iter().fold(0u32, |m, &v| m | 1 << v);
            for c in 0..cells.len() {
                if cells[c].len() == 1 {
                    continue;
                }
                let count = |v: u8| (adj[v as usize] & smask).count_ones();
                let first = count(cells[c][0]);
                if cells[c].iter().all(|&v| count(v) == first) {
                    continue;
                }
                let mut keyed: Vec<(u32, u8)> = cells[c].iter().map(|&v| (count(v), v)).collect();
                keyed.sort_unstable();
                let mut groups: Vec<Vec<u8>> = Vec::new();
                let mut last = None;
                for (k, v) in keyed {
                    if last != Some(k) {
                        groups.push(Vec::new());
                        last = Some(k);
                    }
                    groups.last_mut().unwrap().push(v);
                }
                cells.splice(c..=c, groups);
                continue 'outer;
            }
        }
        break;
    }
}

fn canon_search(adj: &[u32], mut cells: Vec<Vec<u8>>, best: &mut Option<u128>) {
    refine(adj, &mut cells);
    let Some(target) = cells.iter().position(|c| c.len() > 1) else {
        let order: Vec<u8> = cells.iter().map(|c| c[0]).collect();
        let mut code: u128 = 0;
        for i in 0..order.len() {
            for j in i + 1..order.len() {
                let bit = adj[order[i] as usize] >> order[j] & 1;
                code = code << 1 | bit as u128;
            }
        }
        if best.is_none_or(|b| code < b) {
            *best = Some(code);
        }
        return;
    };
    let cell = cells[target].clone();
    let mut tried: Vec<u8> = Vec::new();
    for &v in &cell {
        // Swapping twins is an automorphism fixing every individualised
        // vertex, so one representative per twin class suffices.
        if tried.iter().any(|&u| are_twins(adj, u, v)) {
            continue;
        }
        tried.push(v);
        let mut next = cells.clone();
        let rest: Vec<u8> = cell.iter().copied().filter(|&x| x != v).collect();
        next.splice(target..=target, [vec![v], rest]);
        canon_search(adj, next, best);
    }
}

fn are_twins(adj: &[u32], u: u8, v: u8) -> bool {
    let m = !(1u32 << u | 1u32 << v);
    adj[u as usize] & m == adj[v as usize] & m
}

// -------------------------------------------------------------------------
// Pivot-minor search

/// Breadth-first search over isomorphism classes reachable from `g` by
/// pivoting edges and deleting vertices. Returns a shortest witness trace
/// (ties broken by step order) when some reachable graph is isomorphic to `h`.
pub fn has_pivot_minor(
    g: &Graph,
    h: &Graph,
    budget: SearchBudget,
) -> Result<SearchOutcome<PivotTrace>> {
    let limit = budget.max_vertices.min(MAX_CANONICAL_VERTICES);
    if g.order() > limit {
        return Err(Error::SizeLimit {
            what: "host graph",
            limit,
            actual: g.order(),
        });
    }
    if h.order() > g.order() {
        return Ok(SearchOutcome::NotFound);
    }
    let target = canonical_form_within(h, limit)?;
    let target_edges = h.size();

    struct Node {
        graph: Small,
        parent: Option<usize>,
        step: Option<Step>,
    }
    let start = Small::from_graph(g);
    let mut seen: HashSet<CanonicalForm> = HashSet::new();
    seen.insert(canon_masks(&start.adj));
    let mut nodes = vec![Node {
        graph: start,
        parent: None,
        step: None,
    }];
    let mut queue = VecDeque::from([0usize]);
    let hn = h.order();

    let is_target = |s: &Small| s.n() == hn && s.edge_count() == target_edges && canon_masks(&s.adj) == target;

    let mut found = if is_target(&nodes[0].graph) { Some(0) } else { None };

    'bfs: while found.is_none() {
        let Some(idx) = queue.pop_front() else { break };
        let cur = nodes[idx].graph.clone();
        let n = cur.n();
        let mut succ: Vec<(Step, Small)> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if cur.adj[i] >> j & 1 == 1 {
                    succ.push((Step::Pivot(cur.ids[i], cur.ids[j]), cur.pivot(i, j)));
                }
            }
        }
        if n > hn {
            for i in 0..n {
                succ.push((Step::Delete(cur.ids[i]), cur.delete(i)));
            }
        }
        for (step, s) in succ {
            let key = canon_masks(&s.adj);
            if !seen.insert(key) {
                continue;
            }
            let hit = s.n() == hn && key == target;
            nodes.push(Node {
                graph: s,
                parent: Some(idx),
                step: Some(step),
            });
            let id = nodes.len() - 1;
            if hit {
                found = Some(id);
                break 'bfs;
            }
            if nodes.len() > budget.max_states {
                return Ok(SearchOutcome::Unknown);
            }
            queue.push_back(id);
        }
    }

    let Some(mut at) = found else {
        return Ok(SearchOutcome::NotFound);
    };
    let mut steps = Vec::new();
    while let Some(p) = nodes[at].parent {
        steps.push(nodes[at].step.expect("non-root node has a step"));
        at = p;
    }
    steps.reverse();
    let trace = PivotTrace { steps };
    let result = replay(g, &trace)?;
    if !result.is_isomorphic_within(h, limit)? {
        return Err(Error::check("pivot-minor witness does not replay to the pattern"));
    }
    Ok(SearchOutcome::Found(trace))
}

// -------------------------------------------------------------------------
// Induced subgraph search

/// Backtracking search for an induced copy of `h` in `g`. On success the
/// returned vector maps the vertices of `h`, in increasing id order, to
/// vertices of `g`.
pub fn has_induced_subgraph(
    g: &Graph,
    h: &Graph,
    budget: SearchBudget,
) -> Result<SearchOutcome<Vec<VertexId>>> {
    if h.order() > budget.max_vertices {
        return Err(Error::SizeLimit {
            what: "pattern graph",
            limit: budget.max_vertices,
            actual: h.order(),
        });
    }
    if h.order() > g.order() {
        return Ok(SearchOutcome::NotFound);
    }
    let pattern: Vec<VertexId> = h.vertices().collect();
    let host: Vec<VertexId> = g.vertices().collect();
    let mut mapping: Vec<VertexId> = Vec::with_capacity(pattern.len());
    let mut used = vec![false; g.id_bound()];
    let mut states = 0usize;

    fn extend(
        g: &Graph,
        h: &Graph,
        pattern: &[VertexId],
        host: &[VertexId],
        mapping: &mut Vec<VertexId>,
        used: &mut [bool],
        states: &mut usize,
        max_states: usize,
    ) -> Option<bool> {
        let k = mapping.len();
        if k == pattern.len() {
            return Some(true);
        }
        for &cand in host {
            if used[cand.index()] {
                continue;
            }
            let ok = (0..k).all(|i| h.has_edge(pattern[i], pattern[k]) == g.has_edge(mapping[i], cand));
            if !ok {
                continue;
            }
            *states += 1;
            if *states > max_states {
                return None;
            }
            used[cand.index()] = true;
            mapping.push(cand);
            match extend(g, h, pattern, host, mapping, used, states, max_states) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            mapping.pop();
            used[cand.index()] = false;
        }
        Some(false)
    }

    match extend(
        g,
        h,
        &pattern,
        &host,
        &mut mapping,
        &mut used,
        &mut states,
        budget.max_states,
    ) {
        Some(true) => Ok(SearchOutcome::Found(mapping)),
        Some(false) => Ok(SearchOutcome::NotFound),
        None => Ok(SearchOutcome::Unknown),
    }
}
