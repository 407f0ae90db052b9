//! Input documents, run configuration and output rendering for the
//! command-line tool.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::driver::{
    default_step_cap, format_trace, resolve, resolve_path, select_center, ChartState, PathSelector, ResolutionTree,
    ResolveOptions,
};
use crate::error::Error;
use crate::frac::Frac;
use crate::oracle::{cross_validate, oracle_pairs, BinomialSurface, CrossReport};
use crate::pairs::{is_normalized, validate_pairs, CharPair, NormalizationDefect, PairList};

pub const DEFAULT_STEP_CAP: usize = 10_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { message: String, line: usize, column: usize },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("normalization rejected: {0}")]
    NormalizationRejected(Error),
    #[error(transparent)]
    Resolve(Error),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for bad input, 3 when the step cap fires, 4 on oracle divergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Input(_) | CliError::NormalizationRejected(_) => 2,
            // An explicit --path naming a chart the algorithm does not visit.
            CliError::Resolve(Error::IrrelevantChart { .. }) => 2,
            CliError::Resolve(Error::StepCapExceeded { .. }) => 3,
            CliError::Resolve(Error::Divergence { .. }) => 4,
            CliError::Resolve(_) | CliError::Io(_) => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputSource {
    Pairs {
        m: u32,
        pairs: PairList,
    },
    Binomial(BinomialSurface),
    /// A state taken from JSON output, resolved as a new root.
    State(Box<ChartState>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Resolve,
    Validate,
    InvariantOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum OutputKind {
    Trace,
    Json,
    Dot,
}

impl std::str::FromStr for OutputKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "trace" => Ok(OutputKind::Trace),
            "json" => Ok(OutputKind::Json),
            "dot" => Ok(OutputKind::Dot),
            other => Err(format!("unknown output `{other}` (expected trace, json or dot)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunSpec {
    pub input: InputSource,
    pub mode: Mode,
    pub outputs: Vec<OutputKind>,
    pub step_cap: usize,
    pub path: PathSelector,
    /// Notes about the input, e.g. normalization applied.
    pub warnings: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    m: Option<u32>,
    pairs: Option<Vec<(String, String)>>,
    binomial: Option<BinomialDoc>,
    state: Option<ChartState>,
    mode: Option<String>,
    emit: Option<Vec<String>>,
    step_cap: Option<usize>,
    path: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BinomialDoc {
    m: u32,
    a: u32,
    b: u32,
}

fn parse_frac(text: &str, at: &str) -> Result<Frac, CliError> {
    text.parse().map_err(|e| CliError::Input(format!("{at}: {e}")))
}

/// Pairs from the flag syntax `l1/d,m1/d;l2/d,m2/d`.
pub fn parse_pair_list(text: &str) -> Result<Vec<CharPair>, CliError> {
    text.split(';')
        .filter(|p| !p.trim().is_empty())
        .enumerate()
        .map(|(i, p)| {
            let (l, u) = p
                .split_once(',')
                .ok_or_else(|| CliError::Input(format!("pair {i}: expected `lambda,mu`, got `{p}`")))?;
            Ok(CharPair::new(parse_frac(l.trim(), &format!("pair {i}"))?, parse_frac(u.trim(), &format!("pair {i}"))?))
        })
        .collect()
}

/// Binomial from the flag syntax `m,a,b`.
pub fn parse_binomial(text: &str) -> Result<BinomialSurface, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [m, a, b] = parts.as_slice() else {
        return Err(CliError::Input(format!("binomial must be `m,a,b`, got `{text}`")));
    };
    let num = |s: &str| {
        s.parse::<u32>().map_err(|_| CliError::Input(format!("binomial entry `{s}` is not a nonnegative integer")))
    };
    BinomialSurface::new(num(m)?, num(a)?, num(b)?).map_err(|e| CliError::Input(e.to_string()))
}

/// Validates pairs and records what normalization will change.
pub fn pairs_input(m: u32, pairs: Vec<CharPair>) -> Result<(InputSource, Vec<String>), CliError> {
    let pairs = validate_pairs(pairs).map_err(|e| CliError::Input(e.to_string()))?;
    let mut warnings = Vec::new();
    match is_normalized(m, &pairs) {
        Some(NormalizationDefect::IntegralFirstPair) => {
            warnings.push("integral first pair absorbed into the coordinate z".to_string())
        }
        Some(NormalizationDefect::ZeroEntry) => {
            warnings.push("non-transversal pair with a zero entry: z exchanged with a coordinate".to_string())
        }
        Some(NormalizationDefect::LexOrder) => warnings.push(
            "first pair has lambda < mu; x and y are kept as given so the trace follows the input coordinates"
                .to_string(),
        ),
        None => {}
    }
    Ok((InputSource::Pairs { m, pairs }, warnings))
}

/// Parses a JSON configuration document.
pub fn parse_input(text: &str) -> Result<RunSpec, CliError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| CliError::Parse {
        message: e.to_string(),
        line: e.line(),
        column: e.column(),
    })?;
    let forms = [doc.pairs.is_some() || doc.m.is_some(), doc.binomial.is_some(), doc.state.is_some()];
    if forms.iter().filter(|&&f| f).count() != 1 {
        return Err(CliError::Input("give exactly one of {m, pairs}, binomial or state".into()));
    }
    let mut warnings = Vec::new();
    let input = if let Some(b) = doc.binomial {
        InputSource::Binomial(BinomialSurface::new(b.m, b.a, b.b).map_err(|e| CliError::Input(e.to_string()))?)
    } else if let Some(state) = doc.state {
        InputSource::State(Box::new(state))
    } else {
        let m = doc.m.ok_or_else(|| CliError::Input("`pairs` needs `m`".into()))?;
        let raw = doc.pairs.unwrap_or_default();
        let mut pairs = Vec::with_capacity(raw.len());
        for (i, (l, u)) in raw.iter().enumerate() {
            pairs.push(CharPair::new(
                parse_frac(l, &format!("pairs[{i}][0]"))?,
                parse_frac(u, &format!("pairs[{i}][1]"))?,
            ));
        }
        let (input, w) = pairs_input(m, pairs)?;
        warnings = w;
        input
    };
    let mode = match doc.mode.as_deref() {
        None | Some("resolve") => Mode::Resolve,
        Some("validate") => Mode::Validate,
        Some("invariant") | Some("invariant-only") => Mode::InvariantOnly,
        Some(other) => return Err(CliError::Input(format!("unknown mode `{other}`"))),
    };
    let outputs = match doc.emit {
        None => vec![OutputKind::Trace],
        Some(list) => list.iter().map(|s| s.parse()).collect::<Result<_, _>>().map_err(CliError::Input)?,
    };
    let path = match doc.path {
        None => PathSelector::Leftmost,
        Some(p) => p.parse().map_err(CliError::Input)?,
    };
    let spec = RunSpec { input, mode, outputs, step_cap: doc.step_cap.unwrap_or(DEFAULT_STEP_CAP), path, warnings };
    check_spec(&spec)?;
    Ok(spec)
}

pub fn check_spec(spec: &RunSpec) -> Result<(), CliError> {
    if spec.step_cap == 0 {
        return Err(CliError::Input("step cap must be positive".into()));
    }
    if spec.mode == Mode::Resolve && spec.outputs.is_empty() {
        return Err(CliError::Input("resolve mode needs at least one output".into()));
    }
    if spec.mode == Mode::Validate && !matches!(spec.input, InputSource::Binomial(_)) {
        return Err(CliError::Input("validation needs a binomial input".into()));
    }
    Ok(())
}

/// The normalized start state of a run.
pub fn initial_state(input: &InputSource) -> Result<ChartState, CliError> {
    let (m, pairs) = match input {
        InputSource::State(s) => return Ok((**s).clone()),
        InputSource::Pairs { m, pairs } => (*m, pairs.clone()),
        InputSource::Binomial(b) => oracle_pairs(b),
    };
    ChartState::root(m, &pairs).map_err(|e| match e {
        Error::UnsupportedInversion { .. } => CliError::NormalizationRejected(e),
        e => CliError::Input(e.to_string()),
    })
}

/// Rendered outputs of a run, in a fixed order.
#[derive(Debug, Default)]
pub struct RunOutput {
    pub files: Vec<(String, String)>,
    /// Set when validation found a divergence; the report is still in `files`.
    pub divergence: Option<Error>,
}

impl RunOutput {
    /// Turns a recorded divergence into an error.
    pub fn into_result(self) -> Result<RunOutput, CliError> {
        match self.divergence {
            Some(e) => Err(CliError::Resolve(e)),
            None => Ok(self),
        }
    }
}

fn needs_full_tree(spec: &RunSpec) -> bool {
    spec.outputs.iter().any(|o| *o != OutputKind::Trace) || spec.path == PathSelector::All
}

/// Runs the resolver or the oracle as the run configuration asks and renders every output.
/// A validation divergence is reported through [`RunOutput::divergence`].
pub fn run(spec: &RunSpec) -> Result<RunOutput, CliError> {
    check_spec(spec)?;
    let root = initial_state(&spec.input)?;
    let options = ResolveOptions { step_cap: spec.step_cap, parallel: true, ..ResolveOptions::default() };
    let mut out = RunOutput::default();
    match spec.mode {
        Mode::InvariantOnly => {
            let report = root.report().map_err(CliError::Resolve)?;
            let mut text = format!("inv={}", report.invariant);
            match select_center(&root) {
                Ok(c) => {
                    let _ = write!(text, " center={c}");
                }
                Err(Error::AlreadyResolved) => text.push_str(" resolved"),
                Err(e) => return Err(CliError::Resolve(e)),
            }
            out.files.push(("invariant.txt".into(), text + "\n"));
        }
        Mode::Validate => {
            let InputSource::Binomial(b) = &spec.input else { unreachable!("checked by check_spec") };
            let report = cross_validate(b, options).map_err(CliError::Resolve)?;
            out.files.push(("validate.txt".into(), validation_text(&report)));
            out.divergence = report
                .first_divergence()
                .map(|c| Error::Divergence { path: c.path.clone(), field: c.divergence.clone().unwrap_or_default() });
        }
        Mode::Resolve => {
            let tree =
                if needs_full_tree(spec) { resolve(&root, options) } else { resolve_path(&root, &spec.path, options) }
                    .map_err(CliError::Resolve)?;
            for kind in &spec.outputs {
                let file = match kind {
                    OutputKind::Trace => ("trace.txt".to_string(), format_trace(&tree, &spec.path)),
                    OutputKind::Json => ("tree.json".to_string(), emit_json(&tree)),
                    OutputKind::Dot => ("tree.dot".to_string(), emit_dot(&tree)),
                };
                out.files.push(file);
            }
        }
    }
    Ok(out)
}

fn validation_text(report: &CrossReport) -> String {
    let mut text = report.render();
    let status = if report.is_ok() { "OK" } else { "DIVERGE" };
    let _ = writeln!(
        text,
        "summary: {status} edges={} skipped-charts-confirmed={} nodes={}",
        report.checks.len(),
        report.skipped_confirmed,
        report.tree_nodes
    );
    text
}

/// The tree as pretty JSON with fields in declaration order.
pub fn emit_json(tree: &ResolutionTree) -> String {
    let value: Value = json!({ "nodes": tree.nodes });
    let mut s = serde_json::to_string_pretty(&value).expect("tree serializes");
    s.push('\n');
    s
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Directed graph with one vertex per distinct state and one arc per chart.
pub fn emit_dot(tree: &ResolutionTree) -> String {
    let mut s = String::from("digraph resolution {\n  node [shape=box, fontname=\"monospace\"];\n");
    for (i, n) in tree.nodes.iter().enumerate() {
        let mut label = format!("inv={} m={} pairs={}", n.invariant, n.state.m, n.state.pairs);
        if n.resolved {
            label.push_str(" resolved");
        }
        let _ = writeln!(s, "  n{i} [label=\"{}\"];", dot_escape(&label));
    }
    for (i, n) in tree.nodes.iter().enumerate() {
        for l in &n.children {
            let _ = writeln!(s, "  n{i} -> n{} [label=\"{}/{}\"];", l.target, l.edge.center, l.edge.chart);
        }
    }
    s.push_str("}\n");
    s
}

/// Writes each output into `dir`, creating it if needed.
pub fn write_outputs(out: &RunOutput, dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    for (name, body) in &out.files {
        std::fs::write(dir.join(name), body)?;
    }
    Ok(())
}

/// Default step cap scaled to the input, never below [`DEFAULT_STEP_CAP`].
pub fn suggested_step_cap(input: &InputSource) -> usize {
    let (m, pairs) = match input {
        InputSource::Pairs { m, pairs } => (*m, pairs.clone()),
        InputSource::Binomial(b) => oracle_pairs(b),
        InputSource::State(s) => (s.m, s.pairs.clone()),
    };
    default_step_cap(m, &pairs).max(DEFAULT_STEP_CAP)
}
