//! Trace-emitting reductions from flipped grids and half-graph families down
//! to paths.
//!
//! Every public reduction takes the input graph by reference and returns a
//! [`ReductionResult`] whose trace replays on that input. With
//! [`ExtractOptions::check_intermediate`] set, each claimed flip is compared
//! against the actual graph and the final trace is replayed before returning.
//!
//! Grid vertices are addressed through their `(row, col)` labels, so the
//! flipped-grid reductions expect labelled input (as built by
//! [`families::grid`]). The one-flip reductions take the path order and the
//! flipped set explicitly instead.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::families::{self, is_flip_of, x_flip_of_order, FlipSpec, StPathSpec, TriKind};
use crate::graph::{shorten_degree_two_mut, Graph, VertexId};
use crate::oracle::{self, SearchBudget, SearchOutcome};
use crate::trace::{PivotTrace, Step};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtractOptions {
    /// Verify every intermediate flip claim and replay the trace at the end
    /// of each public call. Defaults to on in debug builds.
    pub check_intermediate: bool,
    /// Budget for the oracle-backed branches of [`extract_path`].
    pub budget: SearchBudget,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            check_intermediate: cfg!(debug_assertions),
            budget: SearchBudget::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReductionResult {
    pub graph: Graph,
    /// The flip structure claimed for `graph`, when there is one.
    pub spec: Option<FlipSpec>,
    pub trace: PivotTrace,
}

/// The four outcomes a large-rank-depth graph is reduced to before path
/// extraction. The half-graph families are given by their size `s` and are
/// built with [`families::tri_family`]; a flipped grid comes with its spec.
#[derive(Clone, Debug)]
pub enum Outcome {
    KK(usize),
    KKbar(usize),
    KbarKbar(usize),
    FlippedGrid(Graph, FlipSpec),
}

impl Outcome {
    /// The graph the returned trace refers to.
    pub fn graph(&self) -> Graph {
        match self {
            Outcome::KK(s) => families::tri_family(TriKind::KK, *s),
            Outcome::KKbar(s) => families::tri_family(TriKind::KKbar, *s),
            Outcome::KbarKbar(s) => families::tri_family(TriKind::KbarKbar, *s),
            Outcome::FlippedGrid(g, _) => g.clone(),
        }
    }
}

// -------------------------------------------------------------------------
// Session: the working graph plus the trace that produced it.

struct Session {
    g: Graph,
    trace: PivotTrace,
    check: bool,
}

impl Session {
    fn new(g: &Graph, opts: &ExtractOptions) -> Self {
        Session {
            g: g.clone(),
            trace: PivotTrace::new(),
            check: opts.check_intermediate,
        }
    }

    fn pivot(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        self.g.pivot_mut(u, v)?;
        self.trace.push(Step::Pivot(u, v));
        Ok(())
    }

    fn delete(&mut self, mut vs: Vec<VertexId>) -> Result<()> {
        vs.sort_unstable();
        self.g.delete_set_mut(&vs)?;
        self.trace.steps.extend(vs.into_iter().map(Step::Delete));
        Ok(())
    }

    /// Shortening at `u` (degree two) and its neighbour `v`. Returns the
    /// other neighbour of `u`.
    fn shorten(&mut self, u: VertexId, v: VertexId) -> Result<VertexId> {
        let w = shorten_degree_two_mut(&mut self.g, u, v)?;
        self.trace.push(Step::Pivot(u, v));
        self.trace.push(Step::Delete(u.min(v)));
        self.trace.push(Step::Delete(u.max(v)));
        Ok(w)
    }

    fn keep_only(&mut self, keep: &[VertexId]) -> Result<()> {
        let keep: BTreeSet<VertexId> = keep.iter().copied().collect();
        let gone = self.g.vertices().filter(|v| !keep.contains(v)).collect();
        self.delete(gone)
    }

    fn at(&self, row: u32, col: u32) -> Result<VertexId> {
        self.g
            .labels()
            .find(|(_, l)| l.row == row && l.col == col)
            .map(|(v, _)| v)
            .ok_or_else(|| Error::pre(format!("no vertex labelled ({row}, {col})")))
    }

    fn col(&self, v: VertexId) -> Result<u32> {
        self.g
            .label(v)
            .map(|l| l.col)
            .ok_or_else(|| Error::pre(format!("vertex {v} has no grid label")))
    }

    fn delete_rows_after(&mut self, rows: u32) -> Result<()> {
        let gone = self
            .g
            .labels()
            .filter(|(_, l)| l.row > rows)
            .map(|(v, _)| v)
            .collect();
        self.delete(gone)
    }

    fn expect_flip(&self, spec: &FlipSpec, what: &str) -> Result<()> {
        if self.check && !is_flip_of(&self.g, spec) {
            return Err(Error::check(format!("{what}: graph is not the predicted flip")));
        }
        Ok(())
    }

    fn finish(self, input: &Graph, spec: Option<FlipSpec>) -> Result<ReductionResult> {
        if self.check {
            if oracle::replay(input, &self.trace)? != self.g {
                return Err(Error::check("trace does not replay to the result"));
            }
            if let Some(s) = &spec {
                self.expect_flip(s, "result")?;
            }
        }
        Ok(ReductionResult {
            graph: self.g,
            spec,
            trace: self.trace,
        })
    }
}

fn check_input_flip(g: &Graph, spec: &FlipSpec, opts: &ExtractOptions) -> Result<()> {
    let expected = (spec.m() * spec.n()) as usize;
    if g.order() != expected || (opts.check_intermediate && !is_flip_of(g, spec)) {
        return Err(Error::pre("input graph is not the flip described by the spec"));
    }
    Ok(())
}

fn check_class(spec: &FlipSpec, x: usize) -> Result<()> {
    if x >= spec.k() {
        return Err(Error::pre(format!("class {x} does not exist (k = {})", spec.k())));
    }
    Ok(())
}

// -------------------------------------------------------------------------
// Flipped grids

/// An edge between class `x` on `row_a` and class `y` on `row_b`. Any
/// member of `x` on one row and of `y` on another row are adjacent when the
/// pair is flipped; the first columns are used.
pub fn find_cross_edge(
    g: &Graph,
    spec: &FlipSpec,
    x: usize,
    y: usize,
    row_a: u32,
    row_b: u32,
) -> Result<(VertexId, VertexId)> {
    check_class(spec, x)?;
    check_class(spec, y)?;
    if !spec.has_pair(x, y) {
        return Err(Error::pre(format!("classes {x} and {y} are not a flipped pair")));
    }
    if row_a == row_b {
        return Err(Error::pre("the two rows must differ"));
    }
    let find = |row: u32, col: u32| {
        g.labels()
            .find(|(_, l)| l.row == row && l.col == col)
            .map(|(v, _)| v)
            .ok_or_else(|| Error::pre(format!("no vertex labelled ({row}, {col})")))
    };
    let u = find(row_a, spec.class(x)[0])?;
    let v = find(row_b, spec.class(y)[0])?;
    if !g.has_edge(u, v) {
        return Err(Error::pre("graph does not match the spec"));
    }
    Ok((u, v))
}

fn case1(s: &mut Session, spec: &FlipSpec, x: usize) -> Result<FlipSpec> {
    check_class(spec, x)?;
    if spec.k() < 2 {
        return Err(Error::pre("need at least two classes"));
    }
    if spec.m() < 3 {
        return Err(Error::pre("need at least three rows"));
    }
    if spec.has_pair(x, x) {
        return Err(Error::pre(format!("class {x} is flipped with itself")));
    }
    let Some(&x1) = spec.partners(x).first() else {
        return spec.without_class(x);
    };
    let m = spec.m() - 2;
    let u = s.at(m + 1, spec.class(x)[0])?;
    let v = s.at(m + 2, spec.class(x1)[0])?;
    s.pivot(u, v)?;
    s.delete_rows_after(m)?;
    let next = spec
        .predict_flip_after_pivot(x, x1, m)?
        .without_class(x)
        .map_err(|e| Error::check(format!("case 1: {e}")))?;
    s.expect_flip(&next, "case 1")?;
    Ok(next)
}

fn validate_q(s: &Session, spec: &FlipSpec, x: usize, y: usize, q: &[VertexId]) -> Result<()> {
    if q.len() < 2 {
        return Err(Error::pre("Q needs at least two vertices"));
    }
    let row = spec.m();
    let mut cols = Vec::with_capacity(q.len());
    for &v in q {
        let l = s
            .g
            .label(v)
            .ok_or_else(|| Error::pre(format!("Q vertex {v} is not a grid vertex")))?;
        if l.row != row {
            return Err(Error::pre(format!("Q must lie in the last row ({row})")));
        }
        cols.push(l.col);
    }
    if spec.class_of_column(cols[0]) != Some(x) || spec.class_of_column(*cols.last().unwrap()) != Some(y) {
        return Err(Error::pre("Q must run from the first class to the second"));
    }
    if let Some(&c) = cols[1..cols.len() - 1]
        .iter()
        .find(|&&c| spec.class_of_column(c).is_some())
    {
        return Err(Error::pre(format!("internal vertex of Q in covered column {c}")));
    }
    if let Some(w) = q.windows(2).find(|w| !s.g.has_edge(w[0], w[1])) {
        return Err(Error::NotAnEdge(w[0], w[1]));
    }
    Ok(())
}

fn case2(s: &mut Session, spec: &FlipSpec, x: usize, y: usize, q: &[VertexId]) -> Result<FlipSpec> {
    check_class(spec, x)?;
    check_class(spec, y)?;
    if x == y {
        return Err(Error::pre("case 2 needs two distinct classes"));
    }
    if spec.m() < 3 {
        return Err(Error::pre("need at least three rows"));
    }
    if !spec.has_pair(x, x) || !spec.has_pair(y, y) || spec.has_pair(x, y) {
        return Err(Error::pre("case 2 needs (X,X), (X',X') flipped and (X,X') not"));
    }
    validate_q(s, spec, x, y, q)?;
    let m = spec.m() - 2;
    let mut q = q.to_vec();
    while q.len() >= 4 {
        let w = s.shorten(q[1], q[2])?;
        if w != q[0] {
            return Err(Error::check("shortening removed the wrong end"));
        }
        q.drain(1..3);
    }
    if q.len() == 2 {
        s.pivot(q[0], q[1])?;
        s.delete_rows_after(m)?;
    } else {
        let u1 = s.at(m + 1, s.col(q[0])?)?;
        let end = q[2];
        s.pivot(q[0], q[1])?;
        let gone = s
            .g
            .labels()
            .filter(|&(v, l)| l.row == m + 2 && v != end)
            .map(|(v, _)| v)
            .collect();
        s.delete(gone)?;
        s.pivot(u1, end)?;
        s.delete_rows_after(m)?;
    }
    let next = spec
        .predict_flip_after_pivot(x, y, m)?
        .merge(x, y)
        .map_err(|e| Error::check(format!("case 2: {e}")))?;
    s.expect_flip(&next, "case 2")?;
    Ok(next)
}

/// The leftmost shortest stretch of row 1 between consecutive covered
/// columns of different classes: `(first column, last column)`.
fn shortest_gap(spec: &FlipSpec) -> Option<(u32, u32)> {
    let covered: Vec<(u32, usize)> = (1..=spec.n())
        .filter_map(|c| spec.class_of_column(c).map(|a| (c, a)))
        .collect();
    covered
        .windows(2)
        .filter(|w| w[0].1 != w[1].1)
        .map(|w| (w[0].0, w[1].0))
        .min_by_key(|&(a, b)| (b - a, a))
}

fn row_segment(s: &Session, row: u32, from: u32, to: u32) -> Result<Vec<VertexId>> {
    (from..=to).map(|c| s.at(row, c)).collect()
}

fn cor(s: &mut Session, spec: &FlipSpec) -> Result<FlipSpec> {
    let k = spec.k();
    if k < 2 {
        return Err(Error::pre("need at least two classes"));
    }
    if spec.m() < 5 {
        return Err(Error::pre("need at least five rows"));
    }
    let m = spec.m() - 4;

    if let Some(x) = (0..k).find(|&x| !spec.has_pair(x, x)) {
        s.delete_rows_after(m + 2)?;
        let next = case1(s, &spec.restrict_flip(m + 2)?, x)?;
        if next.m() > m {
            s.delete_rows_after(m)?;
            let next = next.restrict_flip(m)?;
            s.expect_flip(&next, "isolated class")?;
            return Ok(next);
        }
        return Ok(next);
    }

    let (c1, c2) = shortest_gap(spec).expect("two classes cover two columns");
    let x1 = spec.class_of_column(c1).expect("covered");
    let x2 = spec.class_of_column(c2).expect("covered");

    if !spec.has_pair(x1, x2) {
        s.delete_rows_after(m + 2)?;
        let q = row_segment(s, m + 2, c1, c2)?;
        return case2(s, &spec.restrict_flip(m + 2)?, x1, x2, &q);
    }

    let (_, l, r) = spec.clr(x1, x2)?;
    if l.is_empty() && r.is_empty() {
        let next = spec.merge(x1, x2)?.restrict_flip(m)?;
        s.delete_rows_after(m)?;
        s.expect_flip(&next, "merge")?;
        return Ok(next);
    }

    // `b` is paired with `x3`, `a` is not.
    let (a, b, x3) = match r.first() {
        Some(&x3) => (x1, x2, x3),
        None => (x2, x1, l[0]),
    };
    let u = s.at(m + 3, spec.class(b)[0])?;
    let v = s.at(m + 4, spec.class(x3)[0])?;
    s.pivot(u, v)?;
    s.delete_rows_after(m + 2)?;
    let next = spec.predict_flip_after_pivot(b, x3, m + 2)?;
    s.expect_flip(&next, "pivot towards case 2")?;
    if next.has_pair(a, b) {
        return Err(Error::check("pivot left the two classes flipped"));
    }
    let q = row_segment(s, m + 2, c1, c2)?;
    case2(s, &next, x1, x2, &q)
}

fn to_one_flip_in(s: &mut Session, spec: &FlipSpec) -> Result<FlipSpec> {
    let k = spec.k();
    if k >= 2 && (spec.m() as usize) < 4 * (k - 1) + 1 {
        return Err(Error::pre(format!(
            "{} classes need at least {} rows, got {}",
            k,
            4 * (k - 1) + 1,
            spec.m()
        )));
    }
    let mut spec = spec.clone();
    while spec.k() >= 2 {
        spec = cor(s, &spec)?;
    }
    if spec.m() > 1 {
        s.delete_rows_after(1)?;
        spec = spec.restrict_flip(1)?;
        s.expect_flip(&spec, "first row")?;
    }
    Ok(spec)
}

/// Removes the class `x`, which is not flipped with itself, at the cost of
/// two rows: pivots an edge from `x` on row `m-1` to its first partner on
/// row `m` and keeps the first `m-2` rows. Without partners the graph is
/// returned as is and only the spec changes.
pub fn case1_reduce(g: &Graph, spec: &FlipSpec, x: usize, opts: &ExtractOptions) -> Result<ReductionResult> {
    check_input_flip(g, spec, opts)?;
    let mut s = Session::new(g, opts);
    let next = case1(&mut s, spec, x)?;
    s.finish(g, Some(next))
}

/// Merges classes `x` and `y` at the cost of two rows. `q` is a path in the
/// last row from a vertex of `x` to a vertex of `y` through uncovered
/// columns.
pub fn case2_reduce(
    g: &Graph,
    spec: &FlipSpec,
    x: usize,
    y: usize,
    q: &[VertexId],
    opts: &ExtractOptions,
) -> Result<ReductionResult> {
    check_input_flip(g, spec, opts)?;
    let mut s = Session::new(g, opts);
    let next = case2(&mut s, spec, x, y, q)?;
    s.finish(g, Some(next))
}

/// One class fewer at the cost of exactly four rows.
pub fn cor_reduce(g: &Graph, spec: &FlipSpec, opts: &ExtractOptions) -> Result<ReductionResult> {
    check_input_flip(g, spec, opts)?;
    let mut s = Session::new(g, opts);
    let next = cor(&mut s, spec)?;
    s.finish(g, Some(next))
}

/// Reduces a flipped grid to a flip of its first row with at most one
/// class. Needs `m >= 4(k-1)+1`.
pub fn to_one_flip(g: &Graph, spec: &FlipSpec, opts: &ExtractOptions) -> Result<ReductionResult> {
    check_input_flip(g, spec, opts)?;
    let mut s = Session::new(g, opts);
    let next = to_one_flip_in(&mut s, spec)?;
    s.finish(g, Some(next))
}

/// Path order and flipped set of a one-row flip with at most one class.
pub fn one_flip_view(g: &Graph, spec: &FlipSpec) -> Result<(Vec<VertexId>, BTreeSet<VertexId>)> {
    if spec.m() != 1 || spec.k() > 1 {
        return Err(Error::pre("expected a single row with at most one class"));
    }
    let mut cells = Vec::with_capacity(g.order());
    for v in g.vertices() {
        let l = g
            .label(v)
            .ok_or_else(|| Error::pre(format!("vertex {v} has no grid label")))?;
        cells.push((l.col, v));
    }
    cells.sort_unstable();
    let order: Vec<VertexId> = cells.iter().map(|&(_, v)| v).collect();
    let x = if spec.has_pair(0, 0) {
        cells
            .iter()
            .filter(|&&(c, _)| spec.class_of_column(c) == Some(0))
            .map(|&(_, v)| v)
            .collect()
    } else {
        BTreeSet::new()
    };
    Ok((order, x))
}

// -------------------------------------------------------------------------
// One-flips of paths

#[derive(Clone, Debug)]
struct OneFlip {
    order: Vec<VertexId>,
    x: BTreeSet<VertexId>,
}

impl OneFlip {
    fn pos(&self, v: VertexId) -> Result<usize> {
        self.order
            .iter()
            .position(|&w| w == v)
            .ok_or_else(|| Error::pre(format!("vertex {v} is not on the path")))
    }

    fn closed_nbhd(&self, p: usize) -> &[VertexId] {
        let lo = p.saturating_sub(1);
        let hi = (p + 1).min(self.order.len() - 1);
        &self.order[lo..=hi]
    }

    fn remove(&mut self, gone: &[VertexId]) {
        self.order.retain(|v| !gone.contains(v));
        for v in gone {
            self.x.remove(v);
        }
    }
}

fn check_one_flip(g: &Graph, f: &OneFlip) -> Result<()> {
    if f.x.iter().any(|v| !f.order.contains(v)) {
        return Err(Error::pre("X must lie on the path"));
    }
    if x_flip_of_order(&f.order, &f.x)? != *g {
        return Err(Error::pre("graph is not the X-flip of the given path"));
    }
    Ok(())
}

fn pivot0_in(s: &mut Session, f: &mut OneFlip, a: VertexId, b: VertexId) -> Result<()> {
    if !f.x.contains(&a) || !f.x.contains(&b) {
        return Err(Error::pre("both pivot vertices must be in X"));
    }
    let (pa, pb) = (f.pos(a)?, f.pos(b)?);
    if pa.abs_diff(pb) < 3 {
        return Err(Error::pre("closed path neighbourhoods of a and b intersect"));
    }
    let mut toggle: Vec<VertexId> = f.closed_nbhd(pa).to_vec();
    toggle.extend_from_slice(f.closed_nbhd(pb));
    s.pivot(a, b)?;
    s.delete(vec![a, b])?;
    for v in toggle {
        if !f.x.remove(&v) {
            f.x.insert(v);
        }
    }
    f.remove(&[a, b]);
    if x_flip_of_order(&f.order, &f.x)? != s.g {
        return Err(Error::check("pivot0: result is not the predicted flip"));
    }
    Ok(())
}

/// `G ∧ ab - {a, b}` for `a, b ∈ X` at distance at least three on the path.
/// Returns the graph with the contracted path and the new flipped set; the
/// result is always compared against that flip.
pub fn pivot0(
    g: &Graph,
    order: &[VertexId],
    x: &BTreeSet<VertexId>,
    a: VertexId,
    b: VertexId,
) -> Result<(Graph, Vec<VertexId>, BTreeSet<VertexId>)> {
    let mut f = OneFlip {
        order: order.to_vec(),
        x: x.clone(),
    };
    check_one_flip(g, &f)?;
    let mut s = Session {
        g: g.clone(),
        trace: PivotTrace::new(),
        check: true,
    };
    pivot0_in(&mut s, &mut f, a, b)?;
    Ok((s.g, f.order, f.x))
}

/// One step from an `(s, t)`-path to an `(s-2, t-6)`-path. The path order is
/// the increasing id order, as for graphs from [`families::st_path`].
pub fn st_reduce(g: &Graph, spec: StPathSpec) -> Result<(Graph, StPathSpec, PivotTrace)> {
    spec.validate()?;
    if spec.t < 6 {
        return Err(Error::pre(format!("block has {} vertices, need at least 6", spec.t)));
    }
    if g.order() != spec.s {
        return Err(Error::pre("graph order does not match s"));
    }
    let order: Vec<VertexId> = g.vertices().collect();
    let block = &order[spec.offset - 1..spec.offset - 1 + spec.t];
    let mut f = OneFlip {
        x: block.iter().copied().collect(),
        order: order.clone(),
    };
    check_one_flip(g, &f)?;
    let (a, b) = (block[1], block[spec.t - 2]);
    let mut s = Session {
        g: g.clone(),
        trace: PivotTrace::new(),
        check: true,
    };
    pivot0_in(&mut s, &mut f, a, b)?;
    let next = StPathSpec::new(spec.s - 2, spec.t - 6, spec.offset + 2)?;
    Ok((s.g, next, s.trace))
}

/// Turns the complement of a path (every vertex of `f` in X) into an
/// induced path on `t` vertices.
fn complement_to_path_in(s: &mut Session, f: &mut OneFlip, t: usize) -> Result<()> {
    let mut n = f.order.len();
    if t == 0 || n < (3 * t).div_ceil(2) + 1 {
        return Err(Error::pre(format!(
            "complement of P_{n} is too short for P_{t}: need at least {} vertices",
            (3 * t).div_ceil(2) + 1
        )));
    }
    if f.x.len() != n {
        return Err(Error::pre("expected the complement of a path"));
    }
    if matches!(n % 6, 2 | 5) {
        let last = *f.order.last().unwrap();
        s.delete(vec![last])?;
        f.remove(&[last]);
        n -= 1;
    }
    for _ in 0..n / 6 {
        let block: Vec<VertexId> = f.order.iter().copied().filter(|v| f.x.contains(v)).collect();
        pivot0_in(s, f, block[1], block[block.len() - 2])?;
    }
    let block: Vec<VertexId> = f.order.iter().copied().filter(|v| f.x.contains(v)).collect();
    if block.len() >= 3 {
        let mut gone = vec![block[1], block[block.len() - 2]];
        gone.dedup();
        s.delete(gone.clone())?;
        f.remove(&gone);
    }
    f.x.clear();
    if f.order.len() < t {
        return Err(Error::check("complement reduction left too few vertices"));
    }
    let tail = f.order.split_off(t);
    s.delete(tail)?;
    if s.check && x_flip_of_order(&f.order, &f.x)? != s.g {
        return Err(Error::check("complement reduction: result is not a path"));
    }
    Ok(())
}

fn big_x_reduce_in(s: &mut Session, f: &mut OneFlip, mut l: usize, mut m: usize) -> Result<()> {
    if l == 0 {
        return Err(Error::pre("l must be at least 1"));
    }
    if f.order.len() < l || f.order[..l].iter().any(|v| !f.x.contains(v)) {
        return Err(Error::pre(format!("the first {l} path vertices must be in X")));
    }
    if f.x.len() < l + 4 * m {
        return Err(Error::pre(format!(
            "|X| = {} is below l + 4m = {}",
            f.x.len(),
            l + 4 * m
        )));
    }
    loop {
        if m == 0 || f.x.len() == f.order.len() {
            let tail = f.order.split_off(l + m);
            s.delete(tail.clone())?;
            f.remove(&tail);
            return Ok(());
        }
        let last = *f.order.last().unwrap();
        if !f.x.contains(&last) {
            s.delete(vec![last])?;
            f.remove(&[last]);
            continue;
        }
        let outside = |i: usize| !f.x.contains(&f.order[i]);
        if let Some(i) = (l..f.order.len() - 1).find(|&i| outside(i) && outside(i + 1)) {
            let (u, v) = (f.order[i], f.order[i + 1]);
            if s.shorten(u, v)? != f.order[i - 1] {
                return Err(Error::check("shortening removed the wrong end"));
            }
            f.remove(&[u, v]);
            continue;
        }
        let j = (0..f.order.len()).find(|&i| outside(i)).expect("some vertex outside X");
        if j > l {
            l += 1;
            m -= 1;
            continue;
        }
        let (a, b) = (f.order[l + 1], *f.order.last().unwrap());
        pivot0_in(s, f, a, b)?;
        l += 1;
        m -= 1;
    }
}

fn one_flip_input(g: &Graph, order: &[VertexId], x: &BTreeSet<VertexId>, opts: &ExtractOptions) -> Result<OneFlip> {
    let f = OneFlip {
        order: order.to_vec(),
        x: x.clone(),
    };
    if order.len() != g.order() {
        return Err(Error::pre("path order must list every vertex once"));
    }
    if opts.check_intermediate {
        check_one_flip(g, &f)?;
    }
    Ok(f)
}

/// The complement of `P_s` on `s` fresh vertices, reduced to `P_t`.
/// Needs `s >= ⌈3t/2⌉ + 1`.
pub fn complement_path_to_path(s_len: usize, t: usize, opts: &ExtractOptions) -> Result<ReductionResult> {
    let g = families::path(s_len).complement();
    let mut f = OneFlip {
        order: g.vertices().collect(),
        x: g.vertices().collect(),
    };
    let mut s = Session::new(&g, opts);
    complement_to_path_in(&mut s, &mut f, t)?;
    s.finish(&g, None)
}

/// Reduces the X-flip of the path `order`, whose first `l` vertices are in
/// X and with `|X| >= l + 4m`, to the complement of a path on `l + m`
/// vertices.
pub fn big_x_reduce(
    g: &Graph,
    order: &[VertexId],
    x: &BTreeSet<VertexId>,
    l: usize,
    m: usize,
    opts: &ExtractOptions,
) -> Result<ReductionResult> {
    let mut f = one_flip_input(g, order, x, opts)?;
    let mut s = Session::new(g, opts);
    big_x_reduce_in(&mut s, &mut f, l, m)?;
    finish_complement(s, g, l + m)
}

fn finish_complement(s: Session, input: &Graph, t: usize) -> Result<ReductionResult> {
    if s.g.order() != t || !s.g.is_complement_of_path() {
        return Err(Error::check(format!("result is not the complement of P_{t}")));
    }
    s.finish(input, None)
}

fn x_flip_to_complement_in(s: &mut Session, f: &mut OneFlip, t: usize) -> Result<()> {
    if t == 0 {
        return Err(Error::pre("t must be at least 1"));
    }
    if f.x.len() < 4 * t - 3 {
        return Err(Error::pre(format!("|X| = {} is below 4t-3 = {}", f.x.len(), 4 * t - 3)));
    }
    let first = f.order.iter().position(|v| f.x.contains(v)).expect("X non-empty");
    let last = f.order.iter().rposition(|v| f.x.contains(v)).expect("X non-empty");
    let mut gone: Vec<VertexId> = f.order[..first].to_vec();
    gone.extend_from_slice(&f.order[last + 1..]);
    if !gone.is_empty() {
        s.delete(gone.clone())?;
        f.remove(&gone);
    }
    big_x_reduce_in(s, f, 1, t - 1)
}

/// The complement of `P_t` from an X-flip of a path with `|X| >= 4t-3`.
pub fn x_flip_to_complement(
    g: &Graph,
    order: &[VertexId],
    x: &BTreeSet<VertexId>,
    t: usize,
    opts: &ExtractOptions,
) -> Result<ReductionResult> {
    let mut f = one_flip_input(g, order, x, opts)?;
    let mut s = Session::new(g, opts);
    x_flip_to_complement_in(&mut s, &mut f, t)?;
    finish_complement(s, g, t)
}

fn one_flip_to_path_in(s: &mut Session, f: &mut OneFlip, t: usize) -> Result<()> {
    if t == 0 {
        return Err(Error::pre("t must be at least 1"));
    }
    if f.order.is_empty() {
        return Err(Error::pre("empty path"));
    }
    if t == 1 {
        let keep = [f.order[0]];
        s.keep_only(&keep)?;
        f.order.truncate(1);
        f.x.clear();
        return Ok(());
    }
    if f.x.len() >= 6 * t + 3 {
        let big = (3 * t).div_ceil(2) + 1;
        x_flip_to_complement_in(s, f, big)?;
        return complement_to_path_in(s, f, t);
    }
    // A run of vertices outside X induces a path, and so does a run plus one
    // X-vertex next to it.
    let n = f.order.len();
    let mut i = 0;
    while i < n {
        if f.x.contains(&f.order[i]) {
            i += 1;
            continue;
        }
        let start = i;
        while i < n && !f.x.contains(&f.order[i]) {
            i += 1;
        }
        let len = i - start;
        if len >= t {
            let keep = f.order[start..start + t].to_vec();
            s.keep_only(&keep)?;
            f.order = keep;
            f.x.clear();
            return Ok(());
        }
        if len == t - 1 {
            let keep: Vec<VertexId> = if i < n {
                f.order[start..=i].to_vec()
            } else if start > 0 {
                f.order[start - 1..i].to_vec()
            } else {
                continue;
            };
            s.keep_only(&keep)?;
            f.order = keep;
            f.x.clear();
            return Ok(());
        }
    }
    Err(Error::pre(format!(
        "no route to P_{t}: |X| = {} < {} and every run outside X is shorter than {}, \
         so n = {n} is at most (6t+3)(t-2)+(6t+2) = {}",
        f.x.len(),
        6 * t + 3,
        t - 1,
        (6 * t + 3) * (t - 2) + (6 * t + 2)
    )))
}

/// An induced path on `t` vertices, or a pivot-minor one, from the X-flip of
/// a path. Succeeds whenever the path has at least `3(2t²-t-1)` vertices.
pub fn one_flip_to_path(
    g: &Graph,
    order: &[VertexId],
    x: &BTreeSet<VertexId>,
    t: usize,
    opts: &ExtractOptions,
) -> Result<ReductionResult> {
    let mut f = one_flip_input(g, order, x, opts)?;
    let mut s = Session::new(g, opts);
    one_flip_to_path_in(&mut s, &mut f, t)?;
    finish_path(s, g, t)
}

fn finish_path(s: Session, input: &Graph, t: usize) -> Result<ReductionResult> {
    if s.g.order() != t || !s.g.is_path() {
        return Err(Error::check(format!("result is not P_{t}")));
    }
    s.finish(input, None)
}

// -------------------------------------------------------------------------
// The full pipeline

/// Number of columns the flipped-grid route needs for `P_t`.
pub fn grid_columns_for(t: usize) -> usize {
    (3 * (2 * t * t).saturating_sub(t + 1)).max(1)
}

/// Number of rows the flipped-grid route needs for `P_t`.
pub fn grid_rows_for(t: usize) -> usize {
    4 * grid_columns_for(t) - 3
}

/// `P_t` (or `K_t △ K_t` for the first outcome) from one of the four
/// outcomes. The trace refers to [`Outcome::graph`].
pub fn extract_path(outcome: &Outcome, t: usize, opts: &ExtractOptions) -> Result<ReductionResult> {
    if t == 0 {
        return Err(Error::pre("t must be at least 1"));
    }
    match outcome {
        Outcome::KK(size) => {
            if *size < t {
                return Err(Error::pre(format!("K_s△K_s with s = {size} < t = {t}")));
            }
            let g = outcome.graph();
            let mut s = Session::new(&g, opts);
            let keep: Vec<VertexId> = (0..t as u32)
                .chain(*size as u32..(*size + t) as u32)
                .map(VertexId)
                .collect();
            s.keep_only(&keep)?;
            s.finish(&g, None)
        }
        Outcome::KKbar(size) => oracle_route(outcome, *size, t.saturating_sub(1).max(1), t, 5, opts),
        Outcome::KbarKbar(size) => oracle_route(outcome, *size, t.div_ceil(2), t, 3, opts),
        Outcome::FlippedGrid(g, spec) => {
            let cols = grid_columns_for(t) as u32;
            let rows = grid_rows_for(t) as u32;
            if spec.m() < rows || spec.n() < cols {
                return Err(Error::pre(format!(
                    "P_{t} needs a flipped grid of at least {rows} rows and {cols} columns, got {}x{}",
                    spec.m(),
                    spec.n()
                )));
            }
            check_input_flip(g, spec, opts)?;
            let mut s = Session::new(g, opts);
            let outside: Vec<VertexId> = s
                .g
                .labels()
                .filter(|(_, l)| l.row > rows || l.col > cols)
                .map(|(v, _)| v)
                .collect();
            if !outside.is_empty() {
                s.delete(outside)?;
            }
            let restricted = spec.restrict_flip(rows)?.restrict_columns(cols)?;
            s.expect_flip(&restricted, "restriction")?;
            let one = to_one_flip_in(&mut s, &restricted)?;
            let (order, x) = one_flip_view(&s.g, &one)?;
            let mut f = OneFlip { order, x };
            one_flip_to_path_in(&mut s, &mut f, t)?;
            finish_path(s, g, t)
        }
    }
}

/// Selects `K_{t'} △ K_{t'}`-style sides of size `sub` and searches them for
/// `P_t` with the oracle.
fn oracle_route(
    outcome: &Outcome,
    size: usize,
    sub: usize,
    t: usize,
    max_t: usize,
    opts: &ExtractOptions,
) -> Result<ReductionResult> {
    if t > max_t {
        return Err(Error::SizeLimit {
            what: "path length for the oracle route",
            limit: max_t,
            actual: t,
        });
    }
    if size < sub {
        return Err(Error::pre(format!("sides of size {size} are below the {sub} needed")));
    }
    let g = outcome.graph();
    let mut s = Session::new(&g, opts);
    let keep: Vec<VertexId> = (0..sub as u32)
        .chain(size as u32..(size + sub) as u32)
        .map(VertexId)
        .collect();
    s.keep_only(&keep)?;
    match oracle::has_pivot_minor(&s.g, &families::path(t), opts.budget)? {
        SearchOutcome::Found(witness) => {
            oracle::replay_mut(&mut s.g, &witness)?;
            s.trace.extend(witness);
        }
        SearchOutcome::NotFound => {
            return Err(Error::check(format!("no P_{t} pivot-minor in the selected sides")));
        }
        SearchOutcome::Unknown => return Err(Error::Budget(opts.budget.max_states)),
    }
    finish_path(s, &g, t)
}
