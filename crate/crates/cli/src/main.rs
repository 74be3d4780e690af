use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use pivotminor::extract::{self, ExtractOptions, Outcome};
use pivotminor::families::{self, recognize_one_flip_of_path, x_flip_of_order, TriKind};
use pivotminor::io::{parse_graph, to_dot, write_graph};
use pivotminor::oracle::{self, MAX_CANONICAL_VERTICES};
use pivotminor::rank::{self, DEFAULT_RANK_DEPTH_BOUND};
use pivotminor::{
    Decomposition, Error, FlipSpec, Graph, PivotTrace, SearchBudget, SearchOutcome, StPathSpec, TreeModel,
    VertexId,
};

#[derive(Parser)]
#[command(name = "pivotminor", version, about = "Pivot-minor extraction with replayable certificates")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph family (and its flip structure, where there is one).
    Gen(GenArgs),
    /// Run an extraction and write its trace.
    Extract(ExtractArgs),
    /// Replay a trace and check the result against a target. Exit 0 iff verified.
    Verify(VerifyArgs),
    /// Replay a trace and write the resulting graph.
    Replay(ReplayArgs),
    /// Exhaustive containment search.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Exact rank-depth of a small graph, or the depth of a given decomposition.
    Rankdepth(RankArgs),
    /// Check a tree-model against a graph. Exit 0 iff valid.
    TreemodelValidate(TreeModelArgs),
    /// Convert a graph to another format.
    Export(ExportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Path,
    Grid,
    FlippedGrid,
    Kk,
    Kkbar,
    Kbarkbar,
    StPath,
    XFlip,
}

#[derive(Args, Clone, Debug)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Option<Family>,
    /// Path length, grid columns, or for `flipped-grid` without `--m` the
    /// parameter n of the (4n-3)x(4n-3) instance.
    #[arg(long)]
    n: Option<u32>,
    /// Grid rows.
    #[arg(long)]
    m: Option<u32>,
    /// Side size for kk/kkbar/kbarkbar, block size for st-path.
    #[arg(long)]
    t: Option<usize>,
    /// Path length for st-path.
    #[arg(long)]
    s: Option<usize>,
    /// First vertex of the st-path block (1-based).
    #[arg(long, default_value_t = 1)]
    offset: usize,
    /// Seed for randomised families.
    #[arg(long)]
    seed: Option<u64>,
    /// Maximum number of classes for flipped-grid (default: column count).
    #[arg(long)]
    classes: Option<usize>,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Graph file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flip spec (flipped-grid) or order/X file (x-flip).
    #[arg(long)]
    spec_out: Option<PathBuf>,
}

#[derive(Args)]
struct ExtractArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Input graph, used with --spec or --one-flip instead of --family.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Flip spec JSON of a flipped-grid input.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Order/X JSON of an x-flip input.
    #[arg(long)]
    one_flip: Option<PathBuf>,
    /// `path:t`, or `one-flip` for flipped grids.
    #[arg(long)]
    target: String,
    /// Trace JSON (default: stdout).
    #[arg(long)]
    trace_out: Option<PathBuf>,
    #[arg(long)]
    result_out: Option<PathBuf>,
    /// The claimed flip of the result, when there is one.
    #[arg(long)]
    result_spec_out: Option<PathBuf>,
    /// Check every intermediate claim (always on in debug builds).
    #[arg(long)]
    check: bool,
    #[arg(long)]
    max_states: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    trace: PathBuf,
    /// `path:t`, `kk:t`, `one-flip:n` or `iso:FILE`.
    #[arg(long)]
    target: String,
}

#[derive(Args)]
struct ReplayArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    trace: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Does the host contain the pattern? Exit 0 yes, 1 no, 3 unknown.
    Contains(ContainsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    PivotMinor,
    Induced,
}

#[derive(Args)]
struct ContainsArgs {
    #[arg(long)]
    host: PathBuf,
    #[arg(long)]
    pattern: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::PivotMinor)]
    mode: Mode,
    #[arg(long, default_value_t = 1_000_000)]
    max_states: usize,
    #[arg(long, default_value_t = 10)]
    max_vertices: usize,
    /// Witness trace (pivot-minor) or vertex map (induced).
    #[arg(long)]
    witness_out: Option<PathBuf>,
}

#[derive(Args)]
struct RankArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    decomposition: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_RANK_DEPTH_BOUND)]
    max_vertices: usize,
}

#[derive(Args)]
struct TreeModelArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    model: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Dot,
    Text,
    /// The canonical (1,n)-tree-model as JSON.
    Treemodel,
    /// The star decomposition as JSON.
    Decomposition,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

// -------------------------------------------------------------------------

enum Failure {
    Usage(String),
    Domain(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget(_) | Error::SizeLimit { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(Failure::Usage(msg.into()))
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Domain(format!("cannot read {}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Domain(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_graph(path: &Path) -> CliResult<Graph> {
    Ok(parse_graph(&read(path)?)?)
}

fn read_json(path: &Path) -> CliResult<Value> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

// -------------------------------------------------------------------------
// Families

struct OneFlipInput {
    order: Vec<VertexId>,
    x: BTreeSet<VertexId>,
}

impl OneFlipInput {
    fn to_json(&self) -> String {
        let order: Vec<u32> = self.order.iter().map(|v| v.0).collect();
        let x: Vec<u32> = self.x.iter().map(|v| v.0).collect();
        format!("{}\n", json!({ "order": order, "x": x }))
    }

    fn from_json(v: &Value) -> CliResult<Self> {
        let ids = |key: &str| -> CliResult<Vec<VertexId>> {
            v.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Failure::Domain(format!("one-flip file lacks `{key}`")))?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .and_then(|x| u32::try_from(x).ok())
                        .map(VertexId)
                        .ok_or_else(|| Failure::Domain(format!("bad id in `{key}`")))
                })
                .collect()
        };
        Ok(OneFlipInput {
            order: ids("order")?,
            x: ids("x")?.into_iter().collect(),
        })
    }
}

enum Generated {
    Plain(Graph),
    FlippedGrid(Graph, FlipSpec),
    OneFlip(Graph, OneFlipInput),
    Tri(TriKind, usize),
}

fn need<T: Copy>(v: Option<T>, flag: &str, family: &str) -> CliResult<T> {
    v.ok_or_else(|| Failure::Usage(format!("--family {family} needs --{flag}")))
}

fn generate(a: &FamilyArgs) -> CliResult<Generated> {
    let Some(family) = a.family else {
        return usage("--family is required");
    };
    Ok(match family {
        Family::Path => Generated::Plain(families::path(need(a.n, "n", "path")? as usize)),
        Family::Grid => {
            let (m, n) = (need(a.m, "m", "grid")?, need(a.n, "n", "grid")?);
            if m == 0 || n == 0 {
                return usage("grid dimensions must be positive");
            }
            Generated::Plain(families::grid(m, n))
        }
        Family::FlippedGrid => {
            let seed = need(a.seed, "seed", "flipped-grid")?;
            let n = need(a.n, "n", "flipped-grid")?;
            if n == 0 {
                return usage("--n must be positive");
            }
            let (rows, cols) = match a.m {
                Some(m) if m > 0 => (m, n),
                Some(_) => return usage("--m must be positive"),
                None => (4 * n - 3, 4 * n - 3),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let spec = families::random_flip_spec(rows, cols, a.classes.unwrap_or(cols as usize), &mut rng);
            let g = families::apply_flip(&families::grid(rows, cols), &spec)?;
            Generated::FlippedGrid(g, spec)
        }
        Family::Kk => Generated::Tri(TriKind::KK, need(a.t, "t", "kk")?),
        Family::Kkbar => Generated::Tri(TriKind::KKbar, need(a.t, "t", "kkbar")?),
        Family::Kbarkbar => Generated::Tri(TriKind::KbarKbar, need(a.t, "t", "kbarkbar")?),
        Family::StPath => {
            let spec = StPathSpec::new(need(a.s, "s", "st-path")?, need(a.t, "t", "st-path")?, a.offset)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            Generated::Plain(families::st_path(spec)?)
        }
        Family::XFlip => {
            let seed = need(a.seed, "seed", "x-flip")?;
            let n = need(a.n, "n", "x-flip")?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let order: Vec<VertexId> = (0..n).map(VertexId).collect();
            let x: BTreeSet<VertexId> = order.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
            let g = x_flip_of_order(&order, &x)?;
            Generated::OneFlip(g, OneFlipInput { order, x })
        }
    })
}

fn tri_outcome(kind: TriKind, s: usize) -> Outcome {
    match kind {
        TriKind::KK => Outcome::KK(s),
        TriKind::KKbar => Outcome::KKbar(s),
        TriKind::KbarKbar => Outcome::KbarKbar(s),
    }
}

fn cmd_gen(a: GenArgs) -> CliResult<()> {
    let generated = generate(&a.family)?;
    let (g, side) = match generated {
        Generated::Plain(g) => (g, None),
        Generated::FlippedGrid(g, spec) => {
            let text = format!("{}\n", serde_json::to_string(&spec).expect("serialisable"));
            (g, Some(text))
        }
        Generated::OneFlip(g, of) => {
            let text = of.to_json();
            (g, Some(text))
        }
        Generated::Tri(kind, s) => (families::tri_family(kind, s), None),
    };
    emit(a.out.as_deref(), &write_graph(&g))?;
    match (side, a.spec_out) {
        (Some(text), Some(p)) => emit(Some(&p), &text),
        (None, Some(_)) => usage("this family has no spec to write"),
        _ => Ok(()),
    }
}

// -------------------------------------------------------------------------
// Targets

enum Target {
    Path(usize),
    Kk(usize),
    OneFlip(Option<usize>),
    Iso(PathBuf),
}

fn parse_target(s: &str) -> CliResult<Target> {
    let num = |v: &str| {
        v.parse::<usize>()
            .ok()
            .filter(|&t| t >= 1)
            .ok_or_else(|| Failure::Usage(format!("bad target size `{v}`")))
    };
    match s.split_once(':') {
        Some(("path", v)) => Ok(Target::Path(num(v)?)),
        Some(("kk", v)) => Ok(Target::Kk(num(v)?)),
        Some(("one-flip", v)) => Ok(Target::OneFlip(Some(num(v)?))),
        Some(("iso", f)) => Ok(Target::Iso(PathBuf::from(f))),
        None if s == "one-flip" => Ok(Target::OneFlip(None)),
        _ => usage(format!("unknown target `{s}`; expected path:t, kk:t, one-flip[:n] or iso:FILE")),
    }
}

fn cmd_extract(a: ExtractArgs) -> CliResult<()> {
    let target = parse_target(&a.target)?;
    let mut opts = ExtractOptions::default();
    opts.check_intermediate |= a.check;
    if let Some(ms) = a.max_states {
        opts.budget = SearchBudget::new(ms, opts.budget.max_vertices).map_err(|e| Failure::Usage(e.to_string()))?;
    }

    enum Input {
        Outcome(Outcome),
        OneFlip(Graph, OneFlipInput),
    }
    let input = match (&a.input, a.family.family) {
        (Some(_), Some(_)) => return usage("give either --input or --family, not both"),
        (None, None) => return usage("give --input or --family"),
        (Some(path), None) => {
            let g = read_graph(path)?;
            match (&a.spec, &a.one_flip) {
                (Some(sp), None) => {
                    let spec: FlipSpec = serde_json::from_value(read_json(sp)?)
                        .map_err(|e| Failure::Domain(format!("{}: {e}", sp.display())))?;
                    Input::Outcome(Outcome::FlippedGrid(g, spec))
                }
                (None, Some(of)) => Input::OneFlip(g, OneFlipInput::from_json(&read_json(of)?)?),
                _ => return usage("--input needs exactly one of --spec or --one-flip"),
            }
        }
        (None, Some(_)) => match generate(&a.family)? {
            Generated::FlippedGrid(g, spec) => Input::Outcome(Outcome::FlippedGrid(g, spec)),
            Generated::Tri(kind, s) => Input::Outcome(tri_outcome(kind, s)),
            Generated::OneFlip(g, of) => Input::OneFlip(g, of),
            Generated::Plain(_) => {
                return usage("extraction needs flipped-grid, kk, kkbar, kbarkbar or x-flip");
            }
        },
    };

    let res = match (input, target) {
        (Input::Outcome(o), Target::Path(t)) => {
            if let Outcome::KK(_) = o {
                eprintln!("note: the KK outcome yields K_{t}△K_{t}; verify with --target kk:{t}");
            }
            extract::extract_path(&o, t, &opts)?
        }
        (Input::Outcome(Outcome::FlippedGrid(g, spec)), Target::OneFlip(None)) => {
            extract::to_one_flip(&g, &spec, &opts)?
        }
        (Input::OneFlip(g, of), Target::Path(t)) => extract::one_flip_to_path(&g, &of.order, &of.x, t, &opts)?,
        _ => return usage("extract supports --target path:t, and one-flip for flipped grids"),
    };

    emit(a.trace_out.as_deref(), &format!("{}\n", res.trace.to_json()))?;
    if let Some(p) = &a.result_out {
        emit(Some(p), &write_graph(&res.graph))?;
    }
    if let Some(p) = &a.result_spec_out {
        match &res.spec {
            Some(spec) => emit(Some(p), &format!("{}\n", serde_json::to_string(spec).expect("serialisable")))?,
            None => return usage("this extraction has no result spec"),
        }
    }
    eprintln!(
        "{} steps ({} pivots), result has {} vertices",
        res.trace.len(),
        res.trace.pivot_count(),
        res.graph.order()
    );
    Ok(())
}

fn read_trace(path: &Path) -> CliResult<PivotTrace> {
    Ok(PivotTrace::from_json(&read(path)?)?)
}

/// `Ok(Err(reason))` when the replay worked but the target is not met.
fn check_target(h: &Graph, target: &Target) -> CliResult<Result<String, String>> {
    Ok(match target {
        Target::Path(t) => {
            if h.order() == *t && h.is_path() {
                Ok(format!("result is P_{t}"))
            } else {
                Err(format!("result ({} vertices) is not P_{t}", h.order()))
            }
        }
        Target::Kk(t) => {
            let want = families::tri_family(TriKind::KK, *t);
            if h.order() == want.order() && h.is_isomorphic_within(&want, MAX_CANONICAL_VERTICES)? {
                Ok(format!("result is isomorphic to K_{t}△K_{t}"))
            } else {
                Err(format!("result is not isomorphic to K_{t}△K_{t}"))
            }
        }
        Target::OneFlip(n) => {
            if let Some(n) = n {
                if h.order() != *n {
                    return Ok(Err(format!("result has {} vertices, expected {n}", h.order())));
                }
            }
            match recognize_one_flip_of_path(h)? {
                Some(x) => Ok(format!("result is the X-flip of a path with |X| = {}", x.len())),
                None => Err("result is not a 1-flip of a path".into()),
            }
        }
        Target::Iso(p) => {
            let want = read_graph(p)?;
            if h.order() == want.order() && h.is_isomorphic_within(&want, MAX_CANONICAL_VERTICES)? {
                Ok(format!("result is isomorphic to {}", p.display()))
            } else {
                Err(format!("result is not isomorphic to {}", p.display()))
            }
        }
    })
}

fn cmd_verify(a: VerifyArgs) -> CliResult<()> {
    let target = parse_target(&a.target)?;
    let g = read_graph(&a.input)?;
    let trace = read_trace(&a.trace)?;
    let h = oracle::replay(&g, &trace)?;
    match check_target(&h, &target)? {
        Ok(msg) => {
            println!("verified: {msg}");
            Ok(())
        }
        Err(msg) => Err(Failure::Domain(format!("rejected: {msg}"))),
    }
}

fn cmd_replay(a: ReplayArgs) -> CliResult<()> {
    let g = read_graph(&a.input)?;
    let trace = read_trace(&a.trace)?;
    let h = oracle::replay(&g, &trace)?;
    emit(a.out.as_deref(), &write_graph(&h))
}

fn cmd_oracle(cmd: OracleCmd) -> CliResult<()> {
    let OracleCmd::Contains(a) = cmd;
    let budget = SearchBudget::new(a.max_states, a.max_vertices).map_err(|e| Failure::Usage(e.to_string()))?;
    let host = read_graph(&a.host)?;
    let pattern = read_graph(&a.pattern)?;
    let (outcome, witness) = match a.mode {
        Mode::PivotMinor => match oracle::has_pivot_minor(&host, &pattern, budget)? {
            SearchOutcome::Found(t) => (SearchOutcome::Found(()), Some(format!("{}\n", t.to_json()))),
            SearchOutcome::NotFound => (SearchOutcome::NotFound, None),
            SearchOutcome::Unknown => (SearchOutcome::Unknown, None),
        },
        Mode::Induced => match oracle::has_induced_subgraph(&host, &pattern, budget)? {
            SearchOutcome::Found(map) => {
                let ids: Vec<u32> = map.iter().map(|v| v.0).collect();
                (SearchOutcome::Found(()), Some(format!("{}\n", json!(ids))))
            }
            SearchOutcome::NotFound => (SearchOutcome::NotFound, None),
            SearchOutcome::Unknown => (SearchOutcome::Unknown, None),
        },
    };
    match outcome {
        SearchOutcome::Found(()) => {
            println!("found");
            if let (Some(p), Some(w)) = (&a.witness_out, &witness) {
                emit(Some(p), w)?;
            }
            Ok(())
        }
        SearchOutcome::NotFound => Err(Failure::Domain("not found".into())),
        SearchOutcome::Unknown => Err(Failure::Budget(format!(
            "unknown: budget of {} states exhausted",
            a.max_states
        ))),
    }
}

fn cmd_rankdepth(a: RankArgs) -> CliResult<()> {
    let g = read_graph(&a.input)?;
    let depth = match &a.decomposition {
        Some(p) => {
            let dec: Decomposition = serde_json::from_value(read_json(p)?)
                .map_err(|e| Failure::Domain(format!("{}: {e}", p.display())))?;
            rank::decomposition_depth(&g, &dec)?
        }
        None => rank::rank_depth(&g, a.max_vertices)?,
    };
    println!("{depth}");
    Ok(())
}

fn cmd_treemodel(a: TreeModelArgs) -> CliResult<()> {
    let g = read_graph(&a.input)?;
    let tm: TreeModel = serde_json::from_value(read_json(&a.model)?)
        .map_err(|e| Failure::Domain(format!("{}: {e}", a.model.display())))?;
    if rank::validate_tree_model(&g, &tm)? {
        println!("valid");
        Ok(())
    } else {
        Err(Failure::Domain("invalid".into()))
    }
}

fn cmd_export(a: ExportArgs) -> CliResult<()> {
    let g = read_graph(&a.input)?;
    let text = match a.format {
        Format::Dot => to_dot(&g),
        Format::Text => write_graph(&g),
        Format::Treemodel => format!("{}\n", serde_json::to_string(&TreeModel::canonical(&g)).expect("serialisable")),
        Format::Decomposition => {
            format!("{}\n", serde_json::to_string(&Decomposition::star(&g)).expect("serialisable"))
        }
    };
    emit(a.out.as_deref(), &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Command::Gen(a) => cmd_gen(a),
        Command::Extract(a) => cmd_extract(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Replay(a) => cmd_replay(a),
        Command::Oracle(c) => cmd_oracle(c),
        Command::Rankdepth(a) => cmd_rankdepth(a),
        Command::TreemodelValidate(a) => cmd_treemodel(a),
        Command::Export(a) => cmd_export(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(3)
        }
    }
}
