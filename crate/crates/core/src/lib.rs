//! Pivot-minor calculus on simple graphs.
//!
//! The crate is organised around a handful of modules:
//!
//! * [`graph`]: the [`Graph`] value type with local complementation, pivoting
//!   and the degree-two shortening reduction.
//! * [`rank`]: cut-rank over GF(2), decomposition widths, exact rank-depth of
//!   small graphs and tree-model validation.
//! * [`families`]: paths, grids, half-graph joins and the flip algebra over
//!   grids of paths ([`FlipSpec`]).
//! * [`extract`]: trace-emitting reductions that turn a flipped grid (or one of
//!   the half-graph families) into a path pivot-minor.
//! * [`oracle`]: replay of traces, canonical forms and exhaustive pivot-minor
//!   and induced-subgraph search used to check everything above independently.
//!
//! Every extraction returns a [`PivotTrace`], a list of pivot and delete steps
//! that can be replayed on the input graph without trusting the extractor.

pub mod bitset;
pub mod error;
pub mod extract;
pub mod families;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod rank;
pub mod trace;

pub use error::{Error, Result};
pub use extract::{ExtractOptions, Outcome, ReductionResult};
pub use families::{FlipSpec, StPathSpec, TriKind};
pub use graph::{Graph, Label, VertexId};
pub use oracle::{CanonicalForm, SearchBudget, SearchOutcome};
pub use rank::{Decomposition, TreeModel};
pub use trace::{PivotTrace, Step};
