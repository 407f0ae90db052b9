//! The resolution state machine: canonical centers, relevant charts, chart
//! transitions and the resolution tree with shared isomorphic subtrees.

use std::fmt::Write as _;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::divisor::{
    apply_normalization, contact_is_dominant, general_configuration_defect, settle_contacts, transform_divisors, Chart,
    DivisorConfig, HistoryRecord,
};
use crate::error::{Error, Result};
use crate::frac::Frac;
use crate::invariant::{compute_invariant, Center, Invariant, InvariantReport, Nu};
use crate::monomial::Monomial;
use crate::pairs::{
    classify, multiplicity, normalize, transform_pairs, BlowUpMove, GhostMonomial, NormalizationMove, Orientation,
    PairList, Regime,
};

/// Everything known at the origin of one chart.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct ChartState {
    pub m: u32,
    pub pairs: PairList,
    pub config: DivisorConfig,
    pub history: HistoryRecord,
    pub year: u32,
}

impl ChartState {
    /// Normalized start state with no exceptional divisors.
    pub fn root(m: u32, pairs: &PairList) -> Result<Self> {
        let n = normalize(m, pairs, Orientation::Preserve)?;
        if n.pairs.is_empty() && n.m != 1 {
            return Err(Error::ConfigurationOutOfScope(format!("z^{} has no characteristic pairs", n.m)));
        }
        Ok(ChartState {
            m: n.m,
            pairs: n.pairs,
            config: DivisorConfig::default(),
            history: HistoryRecord::new(0),
            year: 0,
        })
    }

    /// The absorbed integral monomial still carried by the contact plane.
    pub fn ghost(&self) -> Option<GhostMonomial> {
        let e = self.config.contact()?.contact_exponents()?;
        (e.is_integral() && !e.is_one()).then(|| GhostMonomial {
            a: e.x,
            b: e.y,
            dominant: contact_is_dominant(&e, &self.pairs),
        })
    }

    pub fn regime(&self) -> Regime {
        classify(&self.pairs)
    }

    pub fn multiplicity(&self) -> Result<Frac> {
        multiplicity(self.m, &self.pairs)
    }

    pub fn report(&self) -> Result<InvariantReport> {
        compute_invariant(self.m, &self.pairs, &self.config, &self.history, self.year)
    }

    pub fn invariant(&self) -> Result<Invariant> {
        Ok(self.report()?.invariant)
    }

    /// Year within the current multiplicity cycle.
    pub fn cycle_year(&self) -> u32 {
        self.year - self.history.cycle_start
    }
}

pub fn is_resolved(state: &ChartState) -> Result<bool> {
    if state.m != 1 || !state.pairs.is_empty() || state.ghost().is_some_and(|g| g.dominant) {
        return Ok(false);
    }
    Ok(state.invariant()?.is_resolved_value())
}

pub fn select_center(state: &ChartState) -> Result<Center> {
    center_of(state, &state.report()?)
}

fn center_of(state: &ChartState, report: &InvariantReport) -> Result<Center> {
    match report.center {
        Some(c) => Ok(c),
        None if report.invariant.is_resolved_value() => Err(Error::AlreadyResolved),
        None => Err(Error::ConfigurationOutOfScope(format!(
            "empty maximum locus at year {} with invariant {}",
            state.year, report.invariant
        ))),
    }
}

pub fn relevant_charts(state: &ChartState, center: Center) -> Vec<Chart> {
    match center {
        Center::Origin if state.regime() == Regime::NonTransversal => vec![Chart::X, Chart::Y, Chart::Z],
        Center::Origin => vec![Chart::X, Chart::Y],
        Center::XAxis => vec![Chart::Y],
        Center::YAxis => vec![Chart::X],
    }
}

/// The transformation-table row for a chart of a center.
pub fn chart_move(state: &ChartState, center: Center, chart: Chart) -> Result<BlowUpMove> {
    let transversal = state.regime() != Regime::NonTransversal;
    let mv = match (center, chart) {
        (Center::Origin, Chart::X) if transversal => BlowUpMove::QuadTransvX,
        (Center::Origin, Chart::Y) if transversal => BlowUpMove::QuadTransvY,
        (Center::Origin, Chart::X) => BlowUpMove::QuadNonTransvX,
        (Center::Origin, Chart::Y) => BlowUpMove::QuadNonTransvY,
        (Center::Origin, Chart::Z) if !transversal => BlowUpMove::QuadNonTransvZ,
        (Center::YAxis, Chart::X) if transversal => BlowUpMove::MonoidalX,
        (Center::XAxis, Chart::Y) if transversal => BlowUpMove::MonoidalY,
        _ => return Err(Error::IrrelevantChart { center: center.to_string(), chart: chart.to_string() }),
    };
    Ok(mv)
}

/// One chart transition with the data needed to display and audit it.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Edge {
    pub center: Center,
    pub chart: Chart,
    pub mv: BlowUpMove,
    /// Strict transform before normalization.
    pub raw_m: u32,
    pub raw_pairs: PairList,
    pub normalization: Vec<NormalizationMove>,
    /// Integral pair absorbed by this step's normalization.
    pub ghost: Option<GhostMonomial>,
    pub multiplicity_drop: bool,
}

/// A transformation table for pairs; [`transform_pairs`] unless testing the harness.
pub type TransformFn = fn(u32, &PairList, BlowUpMove) -> Result<(u32, PairList)>;

/// Blows up `center` and moves to the origin of `chart`.
pub fn blow_up_chart(state: &ChartState, center: Center, chart: Chart) -> Result<ChartState> {
    let inv = state.invariant()?;
    Ok(transition(state, &inv, center, chart, transform_pairs)?.0)
}

fn transition(
    state: &ChartState,
    inv: &Invariant,
    center: Center,
    chart: Chart,
    table: TransformFn,
) -> Result<(ChartState, Edge)> {
    let mv = chart_move(state, center, chart)?;
    let year = state.year + 1;
    let (raw_m, raw_pairs) =
        if state.pairs.is_empty() { (state.m, PairList::smooth()) } else { table(state.m, &state.pairs, mv)? };
    let moved = transform_divisors(&state.config, mv, year)?;
    let n = normalize(raw_m, &raw_pairs, Orientation::Preserve)?;
    let renamed = apply_normalization(&moved, &n.moves);
    let config = settle_contacts(&renamed, &n.pairs, n.ghost.map(|g| g.monomial()))?;

    let before = state.multiplicity()?;
    let after = multiplicity(n.m, &n.pairs)?;
    let dropped = after < before;
    let history = if dropped {
        if let Some(detail) = general_configuration_defect(&config, &n.pairs) {
            return Err(Error::NotGeneralConfiguration { year, detail });
        }
        HistoryRecord::new(year)
    } else {
        let mut h = state.history.clone();
        h.record(state.year, inv.clone());
        h
    };
    let next = ChartState { m: n.m, pairs: n.pairs, config, history, year };
    let edge = Edge {
        center,
        chart,
        mv,
        raw_m,
        raw_pairs,
        normalization: n.moves,
        ghost: n.ghost,
        multiplicity_drop: dropped,
    };
    Ok((next, edge))
}

/// A state up to a shift of all years: isomorphic states have isomorphic subtrees.
///
/// Births before the current cycle are clamped to its start, since such
/// divisors only ever enter comparisons as "already present".
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StateKey {
    m: u32,
    pairs: PairList,
    divisors: Vec<(i64, crate::divisor::DivisorKind)>,
    cycle_start: i64,
    history: Vec<(i64, Invariant)>,
}

impl ChartState {
    pub fn key(&self) -> StateKey {
        let now = self.year as i64;
        let start = self.history.cycle_start as i64;
        StateKey {
            m: self.m,
            pairs: self.pairs.clone(),
            divisors: self.config.divisors().iter().map(|d| ((d.birth as i64).max(start) - now, d.kind)).collect(),
            cycle_start: start - now,
            history: self.history.entries.iter().map(|e| (e.year as i64 - now, e.invariant.clone())).collect(),
        }
    }
}

/// Which branches of the tree to expand or print.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PathSelector {
    /// Always the first relevant chart (x before y before z).
    Leftmost,
    All,
    /// An explicit chart sequence; the path stops when it runs out.
    Charts(Vec<Chart>),
}

impl std::str::FromStr for PathSelector {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "leftmost" => Ok(PathSelector::Leftmost),
            "all" => Ok(PathSelector::All),
            list => list
                .split([',', '.'])
                .filter(|t| !t.trim().is_empty())
                .map(|t| match t.trim() {
                    "x" => Ok(Chart::X),
                    "y" => Ok(Chart::Y),
                    "z" => Ok(Chart::Z),
                    other => Err(format!("unknown chart `{other}` (expected x, y or z)")),
                })
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(PathSelector::Charts),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ResolveOptions {
    /// Maximum number of blow-ups along any path.
    pub step_cap: usize,
    /// Expand each breadth-first frontier on the rayon pool.
    pub parallel: bool,
    pub table: TransformFn,
}

impl Default for ResolveOptions {
    fn default() -> Self {
        ResolveOptions { step_cap: 10_000, parallel: false, table: transform_pairs }
    }
}

impl ResolveOptions {
    pub fn with_step_cap(step_cap: usize) -> Self {
        ResolveOptions { step_cap, ..Self::default() }
    }
}

/// Step cap generous enough for any input: `64 n (m + sum ceil(lambda_i + mu_i))`.
pub fn default_step_cap(m: u32, pairs: &PairList) -> usize {
    let n = pairs.denominator() as usize;
    let sum: i64 = pairs.pairs().iter().map(|p| p.sum().ceil()).sum();
    64 * n * (m as usize + sum as usize)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Link {
    pub edge: Edge,
    pub target: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TreeNode {
    /// The first instance reached; later instances differ only by a year shift.
    pub state: ChartState,
    pub invariant: Invariant,
    /// Exceptional monomial when the invariant ends in `0`.
    pub d: Monomial,
    /// Chosen center; `None` at leaves.
    pub center: Option<Center>,
    pub resolved: bool,
    /// The weighted `D` entry was needed to build the next collection.
    pub used_d_entry: bool,
    /// Number of blow-ups on the first path that reached this node.
    pub depth: usize,
    /// Node and chart through which this node was first reached.
    pub parent: Option<(usize, Chart)>,
    pub children: Vec<Link>,
}

/// The resolution tree with isomorphic subtrees shared; node 0 is the root.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct ResolutionTree {
    pub nodes: Vec<TreeNode>,
}

/// One position on a root-to-leaf path: a node and the index of the link
/// in the previous node that led to it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PathStep {
    pub node: usize,
    pub link: Option<usize>,
}

impl ResolutionTree {
    pub fn root(&self) -> Option<&TreeNode> {
        self.nodes.first()
    }

    pub fn links(&self) -> impl Iterator<Item = (usize, &Link)> + '_ {
        self.nodes.iter().enumerate().flat_map(|(i, n)| n.children.iter().map(move |l| (i, l)))
    }

    /// The part reachable from `node`, renumbered breadth-first as [`resolve`]
    /// would number it. States keep their absolute years.
    pub fn subtree(&self, node: usize) -> ResolutionTree {
        let mut renumber: FxHashMap<usize, usize> = FxHashMap::default();
        renumber.insert(node, 0);
        let mut order = vec![node];
        // First discoverer of each renumbered node.
        let mut found_by: Vec<Option<(usize, Chart)>> = vec![None];
        let mut nodes: Vec<TreeNode> = Vec::new();
        while nodes.len() < order.len() {
            let k = nodes.len();
            let mut copy = self.nodes[order[k]].clone();
            for link in &mut copy.children {
                let fresh = order.len();
                link.target = *renumber.entry(link.target).or_insert_with(|| {
                    order.push(link.target);
                    found_by.push(Some((k, link.edge.chart)));
                    fresh
                });
            }
            copy.parent = found_by[k];
            copy.depth = copy.parent.map_or(0, |(p, _)| nodes[p].depth + 1);
            nodes.push(copy);
        }
        ResolutionTree { nodes }
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.iter().map(|n| n.children.len()).sum()
    }

    /// Chart sequence of the first path that reached `node`.
    pub fn chart_label(&self, node: usize) -> String {
        let mut charts = Vec::new();
        let mut cur = node;
        while let Some((p, c)) = self.nodes[cur].parent {
            charts.push(c.to_string());
            cur = p;
        }
        if charts.is_empty() {
            return "root".into();
        }
        charts.reverse();
        charts.join(".")
    }

    /// Number of root-to-leaf paths, saturating.
    pub fn path_count(&self) -> u64 {
        let mut count = vec![0u64; self.nodes.len()];
        for i in self.topological_order().unwrap_or_default().into_iter().rev() {
            let n = &self.nodes[i];
            count[i] = if n.children.is_empty() {
                1
            } else {
                n.children.iter().fold(0u64, |acc, l| acc.saturating_add(count[l.target]))
            };
        }
        count.first().copied().unwrap_or(0)
    }

    /// Number of blow-ups on the longest path, or `None` if the graph has a cycle.
    pub fn longest_path(&self) -> Option<usize> {
        let order = self.topological_order()?;
        let mut len = vec![0usize; self.nodes.len()];
        for i in order.into_iter().rev() {
            len[i] = self.nodes[i].children.iter().map(|l| len[l.target] + 1).max().unwrap_or(0);
        }
        Some(len.first().copied().unwrap_or(0))
    }

    fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indegree = vec![0usize; self.nodes.len()];
        for (_, l) in self.links() {
            indegree[l.target] += 1;
        }
        let mut stack: Vec<usize> = (0..self.nodes.len()).filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(self.nodes.len());
        while let Some(i) = stack.pop() {
            order.push(i);
            for l in &self.nodes[i].children {
                indegree[l.target] -= 1;
                if indegree[l.target] == 0 {
                    stack.push(l.target);
                }
            }
        }
        (order.len() == self.nodes.len()).then_some(order)
    }

    /// Root-to-leaf paths picked by `selector`; `All` enumerates every path.
    pub fn select_paths(&self, selector: &PathSelector) -> Vec<Vec<PathStep>> {
        if self.nodes.is_empty() {
            return Vec::new();
        }
        let root = PathStep { node: 0, link: None };
        match selector {
            PathSelector::All => {
                let mut out = Vec::new();
                let mut path = vec![root];
                self.collect_paths(&mut path, &mut out);
                out
            }
            PathSelector::Leftmost => {
                let mut path = vec![root];
                while let Some(l) = self.nodes[path.last().unwrap().node].children.first() {
                    path.push(PathStep { node: l.target, link: Some(0) });
                }
                vec![path]
            }
            PathSelector::Charts(charts) => {
                let mut path = vec![root];
                for chart in charts {
                    let cur = &self.nodes[path.last().unwrap().node];
                    match cur.children.iter().position(|l| l.edge.chart == *chart) {
                        Some(k) => path.push(PathStep { node: cur.children[k].target, link: Some(k) }),
                        None => break,
                    }
                }
                vec![path]
            }
        }
    }

    fn collect_paths(&self, path: &mut Vec<PathStep>, out: &mut Vec<Vec<PathStep>>) {
        let node = &self.nodes[path.last().unwrap().node];
        if node.children.is_empty() {
            out.push(path.clone());
            return;
        }
        for (k, l) in node.children.iter().enumerate() {
            path.push(PathStep { node: l.target, link: Some(k) });
            self.collect_paths(path, out);
            path.pop();
        }
    }

    /// The link taken into `path[k]`.
    pub fn incoming(&self, path: &[PathStep], k: usize) -> Option<&Link> {
        let link = path[k].link?;
        Some(&self.nodes[path[k - 1].node].children[link])
    }
}

/// What one node contributes before its children are merged into the tree.
struct Expansion {
    node: TreeNode,
    children: Vec<(Edge, ChartState)>,
}

fn expand_node(
    state: ChartState,
    depth: usize,
    parent: Option<(usize, Chart)>,
    charts: Option<&[Chart]>,
    table: TransformFn,
) -> Result<Expansion> {
    let report = state.report()?;
    let resolved = is_resolved(&state)?;
    let mut node = TreeNode {
        invariant: report.invariant.clone(),
        d: if report.invariant.end() == Nu::Zero { report.d } else { Monomial::ONE },
        center: None,
        resolved,
        used_d_entry: report.used_d_entry,
        depth,
        parent,
        children: Vec::new(),
        state,
    };
    if resolved {
        return Ok(Expansion { node, children: Vec::new() });
    }
    let center = center_of(&node.state, &report)?;
    node.center = Some(center);
    let relevant = relevant_charts(&node.state, center);
    let chosen: Vec<Chart> = match charts {
        None => relevant,
        Some(list) => {
            for c in list {
                if !relevant.contains(c) {
                    return Err(Error::IrrelevantChart { center: center.to_string(), chart: c.to_string() });
                }
            }
            list.to_vec()
        }
    };
    let mut children = Vec::with_capacity(chosen.len());
    for chart in chosen {
        let (next, edge) = transition(&node.state, &node.invariant, center, chart, table)?;
        children.push((edge, next));
    }
    Ok(Expansion { node, children })
}

/// Expands every relevant chart until all leaves are resolved.
///
/// Nodes are discovered breadth-first and merged in frontier order, so the
/// result is the same whether or not frontiers are expanded in parallel.
pub fn resolve(initial: &ChartState, options: ResolveOptions) -> Result<ResolutionTree> {
    let mut nodes: Vec<TreeNode> = Vec::new();
    let mut index: FxHashMap<StateKey, usize> = FxHashMap::default();
    let mut frontier: Vec<(ChartState, Option<(usize, Chart)>)> = vec![(initial.clone(), None)];
    let mut depth = 0usize;
    // Children of each frontier node, to be wired once targets exist.
    while !frontier.is_empty() {
        let work = |(state, parent): &(ChartState, Option<(usize, Chart)>)| {
            expand_node(state.clone(), depth, *parent, None, options.table)
        };
        let results: Vec<Result<Expansion>> = if options.parallel && frontier.len() > 1 {
            frontier.par_iter().map(work).collect()
        } else {
            frontier.iter().map(work).collect()
        };
        let base = nodes.len();
        let mut pending = Vec::with_capacity(results.len());
        for result in results {
            let exp = result?;
            if !exp.children.is_empty() && depth >= options.step_cap {
                let at = nodes.len();
                nodes.push(exp.node);
                let tree = ResolutionTree { nodes };
                return Err(Error::StepCapExceeded { cap: options.step_cap, path: tree.chart_label(at) });
            }
            nodes.push(exp.node);
            pending.push(exp.children);
        }
        let mut next = Vec::new();
        for (offset, children) in pending.into_iter().enumerate() {
            let from = base + offset;
            for (edge, state) in children {
                let key = state.key();
                let planned = nodes.len() + next.len();
                let target = *index.entry(key).or_insert_with(|| {
                    next.push((state, Some((from, edge.chart))));
                    planned
                });
                nodes[from].children.push(Link { edge, target });
            }
        }
        frontier = next;
        depth += 1;
    }
    let tree = ResolutionTree { nodes };
    match tree.longest_path() {
        Some(len) if len <= options.step_cap => Ok(tree),
        _ => Err(Error::StepCapExceeded {
            cap: options.step_cap,
            path: "cycle or overlong path in shared subtrees".into(),
        }),
    }
}

/// Follows a single path: the leftmost one, or an explicit chart list.
pub fn resolve_path(initial: &ChartState, selector: &PathSelector, options: ResolveOptions) -> Result<ResolutionTree> {
    if *selector == PathSelector::All {
        return resolve(initial, options);
    }
    let mut nodes: Vec<TreeNode> = Vec::new();
    let mut current = (initial.clone(), None);
    loop {
        let depth = nodes.len();
        let charts: Option<Vec<Chart>> = match selector {
            PathSelector::Charts(list) => Some(list.get(depth).copied().into_iter().collect()),
            _ => None,
        };
        let mut exp = expand_node(current.0, depth, current.1, charts.as_deref(), options.table)?;
        if matches!(selector, PathSelector::Leftmost) {
            exp.children.truncate(1);
        }
        if !exp.children.is_empty() && depth >= options.step_cap {
            nodes.push(exp.node);
            let at = nodes.len() - 1;
            return Err(Error::StepCapExceeded {
                cap: options.step_cap,
                path: ResolutionTree { nodes }.chart_label(at),
            });
        }
        nodes.push(exp.node);
        match exp.children.pop() {
            Some((edge, next)) => {
                let chart = edge.chart;
                nodes[depth].children.push(Link { edge, target: depth + 1 });
                current = (next, Some((depth, chart)));
            }
            None => break,
        }
    }
    Ok(ResolutionTree { nodes })
}

/// Links along which the invariant increased, as `(parent, child)` pairs.
pub fn monotonicity_violations(tree: &ResolutionTree) -> Vec<(usize, usize)> {
    tree.links()
        .filter(|(i, l)| tree.nodes[l.target].invariant > tree.nodes[*i].invariant)
        .map(|(i, l)| (i, l.target))
        .collect()
}

/// `z^m + x^a y^b` when the pairs are a single pair with integral exponents.
pub fn render_surface(m: u32, pairs: &PairList) -> Option<String> {
    let z = if m == 1 { "z".to_string() } else { format!("z^{m}") };
    match pairs.pairs() {
        [] => Some(z),
        [p] => {
            let mono = p.monomial().scale(Frac::int(m as i64));
            mono.is_integral().then(|| format!("{z}+{mono}"))
        }
        _ => None,
    }
}

fn state_summary(state: &ChartState) -> String {
    let mut s = format!("m={} pairs={}", state.m, state.pairs);
    if let Some(g) = state.ghost() {
        let _ = write!(s, " ghost={}", g.monomial());
    }
    let _ = write!(s, " E={}", state.config.labels());
    s
}

fn year_line(node: &TreeNode, incoming: Option<&Edge>, outgoing: Option<&Edge>) -> String {
    let year = node.state.cycle_year();
    let mut line = if node.resolved {
        format!("Year {year}: resolved: inv={}", node.invariant)
    } else {
        let mut l = format!("Year {year}: inv={}", node.invariant);
        if let Some(c) = node.center {
            let _ = write!(l, " center={c}");
        }
        if let Some(e) = outgoing {
            let _ = write!(l, " chart={}", e.chart);
        }
        if node.invariant.end() == Nu::Zero {
            let _ = write!(l, " D={}", node.d);
        }
        l
    };
    line.push_str(" |");
    let surface = match incoming {
        Some(e) => render_surface(e.raw_m, &e.raw_pairs),
        None => render_surface(node.state.m, &node.state.pairs),
    };
    if let Some(f) = surface {
        let _ = write!(line, " f={f}");
    }
    let _ = write!(line, " {}", state_summary(&node.state));
    line
}

/// One line per year along each selected path; a new multiplicity cycle
/// restarts the year count and is announced by a separator line.
pub fn format_trace(tree: &ResolutionTree, selector: &PathSelector) -> String {
    let paths = tree.select_paths(selector);
    let many = paths.len() > 1;
    let mut out = String::new();
    for path in paths {
        if many {
            let charts: Vec<String> =
                (1..path.len()).filter_map(|k| tree.incoming(&path, k)).map(|l| l.edge.chart.to_string()).collect();
            let _ = writeln!(out, "# path {}", if charts.is_empty() { "root".into() } else { charts.join(".") });
        }
        for k in 0..path.len() {
            let node = &tree.nodes[path[k].node];
            let incoming = tree.incoming(&path, k).map(|l| &l.edge);
            let outgoing = (k + 1 < path.len()).then(|| tree.incoming(&path, k + 1)).flatten().map(|l| &l.edge);
            if incoming.is_some_and(|e| e.multiplicity_drop) {
                let _ = writeln!(out, "--- multiplicity drops to {}", node.invariant.first_nu().unwrap_or(Frac::ZERO));
            }
            let _ = writeln!(out, "{}", year_line(node, incoming, outgoing));
        }
    }
    out
}
