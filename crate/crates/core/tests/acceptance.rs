//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the status lines are always
//! printed. The process fails if a criterion fails for any reason other than
//! the known floor-formula boundary documented in `k_formula`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qoresolve::cli::emit_json;
use qoresolve::divisor::general_configuration_defect;
use qoresolve::driver::{
    default_step_cap, format_trace, monotonicity_violations, resolve, ChartState, PathSelector, ResolutionTree,
    ResolveOptions,
};
use qoresolve::oracle::{cross_validate_tree, oracle_pairs, BinomialSurface};
use qoresolve::pairs::{classify, transform_pairs, BlowUpMove, CharPair, PairList, Regime};
use qoresolve::Frac;

const SEED: u64 = 0x5eed_2024;
const GOLDEN_PATH: &str = "x,y,x,y,x,y,x,y,x,y,y,y";
const GOLDEN_TRACE: &str = include_str!("data/worked_example.trace");

struct Outcome {
    pass: bool,
    /// A failure that matches the documented analysis rather than a regression.
    known: bool,
    detail: String,
    elapsed: Duration,
}

fn report(id: u32, name: &str, o: &Outcome) {
    let status = if o.pass { "PASS" } else { "FAIL" };
    let known = if !o.pass && o.known { " [known]" } else { "" };
    println!("{status} criterion-{id} {name}{known}: {} ({:.2?})", o.detail, o.elapsed);
}

fn timed(f: impl FnOnce() -> (bool, bool, String)) -> Outcome {
    let t = Instant::now();
    let (pass, known, detail) = f();
    Outcome { pass, known, detail, elapsed: t.elapsed() }
}

/// (cycle, year, invariant, D monomial, surface) along the worked path.
const EXPECTED: &[(u32, u32, &str, Option<&str>, &str)] = &[
    (0, 0, "(3,0;2,0;1,0;inf)", None, "f=z^3+x^2y^4"),
    (0, 1, "(3,0;4/3,1;1,0;inf)", None, "f=z^3+x^3y^4"),
    (0, 2, "(3,0;0)", Some("xy^(4/3)"), "f=z^3+x^3y^4"),
    (0, 3, "(3,0;0)", Some("y^(4/3)"), "f=z^3+y^4"),
    (1, 0, "(1,2;1,0;3,0;inf)", None, "f=z^3+y"),
    (1, 1, "(1,1;3,1;1,0;inf)", None, "f=z"),
    (1, 2, "(1,1;0)", Some("x^2y^4"), "f=z"),
    (1, 3, "(1,1;0)", None, "f=z"),
    (1, 4, "(1,1;0)", None, "f=z"),
    (1, 5, "(1,1;0)", None, "f=z"),
    (1, 6, "(1,1;0)", None, "f=z"),
    (1, 7, "(1,1;0)", None, "f=z"),
    (1, 8, "(1,0;0)", None, "f=z"),
];

fn golden_trace() -> (bool, bool, String) {
    let t = Instant::now();
    let root = ChartState::root(3, &PairList::from_raw(vec![CharPair::new(Frac::new(2, 3), Frac::new(4, 3))]))
        .expect("root state");
    let selector: PathSelector = GOLDEN_PATH.parse().expect("path");
    let tree = match qoresolve::driver::resolve_path(&root, &selector, ResolveOptions::default()) {
        Ok(t) => t,
        Err(e) => return (false, false, format!("resolution failed: {e}")),
    };
    let trace = format_trace(&tree, &selector);
    let elapsed = t.elapsed();

    let lines: Vec<&str> = trace.lines().filter(|l| l.starts_with("Year ")).collect();
    if lines.len() != EXPECTED.len() {
        return (false, false, format!("{} years, expected {}", lines.len(), EXPECTED.len()));
    }
    let mut cycle = 0u32;
    let mut k = 0usize;
    for line in trace.lines() {
        if line.starts_with("---") {
            cycle += 1;
            continue;
        }
        let (c, year, inv, d, surface) = EXPECTED[k];
        k += 1;
        let prefix = format!("Year {year}: ");
        let ok = cycle == c
            && line.starts_with(&prefix)
            && line.contains(&format!("inv={inv}"))
            && d.is_none_or(|d| line.contains(&format!("D={d} ")))
            && line.contains(&format!("{surface} "));
        if !ok {
            return (false, false, format!("mismatch at cycle {c} year {year}: {line}"));
        }
    }
    if !lines.last().is_some_and(|l| l.contains("resolved")) {
        return (false, false, "final year is not resolved".into());
    }
    if trace != GOLDEN_TRACE {
        return (false, false, "trace differs from the recorded golden file".into());
    }
    let fast = elapsed < Duration::from_secs(1);
    (fast, false, format!("{} years match exactly, resolved at cycle-2 year 8 in {elapsed:.2?}", lines.len()))
}

struct CorpusStats {
    surfaces: usize,
    edges: usize,
    skipped_confirmed: usize,
    divergences: Vec<String>,
    drops: usize,
    configuration_failures: Vec<String>,
    monotonicity_failures: Vec<String>,
    cap_failures: Vec<String>,
    elapsed: Duration,
}

fn corpus() -> Vec<BinomialSurface> {
    let mut out = Vec::new();
    for m in 2..=12 {
        for a in 0..=20 {
            for b in 0..=20 {
                if let Ok(s) = BinomialSurface::new(m, a, b) {
                    out.push(s);
                }
            }
        }
    }
    out
}

fn options_for(s: &BinomialSurface) -> ResolveOptions {
    let (m, pairs) = oracle_pairs(s);
    ResolveOptions::with_step_cap(default_step_cap(m, &pairs))
}

fn root_of(s: &BinomialSurface) -> ChartState {
    let (m, pairs) = oracle_pairs(s);
    ChartState::root(m, &pairs).expect("corpus root")
}

fn run_corpus() -> CorpusStats {
    let t = Instant::now();
    let mut st = CorpusStats {
        surfaces: 0,
        edges: 0,
        skipped_confirmed: 0,
        divergences: Vec::new(),
        drops: 0,
        configuration_failures: Vec::new(),
        monotonicity_failures: Vec::new(),
        cap_failures: Vec::new(),
        elapsed: Duration::ZERO,
    };
    for s in corpus() {
        st.surfaces += 1;
        let tree = match resolve(&root_of(&s), options_for(&s)) {
            Ok(t) => t,
            Err(e) => {
                st.cap_failures.push(format!("{s}: {e}"));
                continue;
            }
        };
        match cross_validate_tree(&s, &tree) {
            Ok(report) => {
                st.edges += report.checks.len();
                st.skipped_confirmed += report.skipped_confirmed;
                if let Some(c) = report.first_divergence() {
                    st.divergences.push(format!("{s} at {}: {}", c.path, c.divergence.clone().unwrap_or_default()));
                }
            }
            Err(e) => st.divergences.push(format!("{s}: {e}")),
        }
        for (_, link) in tree.links() {
            if link.edge.multiplicity_drop {
                st.drops += 1;
                let target = &tree.nodes[link.target].state;
                if let Some(d) = general_configuration_defect(&target.config, &target.pairs) {
                    st.configuration_failures.push(format!("{s}: {d}"));
                }
            }
        }
        for (parent, child) in monotonicity_violations(&tree) {
            st.monotonicity_failures
                .push(format!("{s}: {} -> {}", tree.nodes[parent].invariant, tree.nodes[child].invariant));
        }
    }
    st.elapsed = t.elapsed();
    st
}

fn first(v: &[String]) -> String {
    v.first().cloned().unwrap_or_default()
}

fn oracle_equivalence(st: &CorpusStats) -> (bool, bool, String) {
    let ok = st.divergences.is_empty() && st.cap_failures.is_empty() && st.elapsed < Duration::from_secs(120);
    let mut detail = format!(
        "{} surfaces, {} chart moves checked, {} skipped charts confirmed smooth, {} divergences",
        st.surfaces,
        st.edges,
        st.skipped_confirmed,
        st.divergences.len()
    );
    if !st.divergences.is_empty() {
        detail.push_str(&format!("; first: {}", first(&st.divergences)));
    }
    (ok, false, detail)
}

fn nontransversal_mirror() -> (bool, bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checked = 0;
    while checked < 1000 {
        let (lq, uq) = (rng.gen_range(2..=40i64), rng.gen_range(2..=40i64));
        let (lambda, mu) = (Frac::new(rng.gen_range(1..lq), lq), Frac::new(rng.gen_range(1..uq), uq));
        if lambda + mu >= 1 {
            continue;
        }
        let m = (lambda.denom() * mu.denom()) as u32;
        let pairs = PairList::from_raw(vec![CharPair::new(lambda, mu)]);
        let one = Frac::ONE;
        let x = transform_pairs(m, &pairs, BlowUpMove::QuadNonTransvX);
        let y = transform_pairs(m, &pairs, BlowUpMove::QuadNonTransvY);
        let want_x = CharPair::new((one - lambda - mu) / mu, one / mu);
        let want_y = CharPair::new(one / lambda, (one - lambda - mu) / lambda);
        let got = |r: &qoresolve::Result<(u32, PairList)>| r.as_ref().ok().and_then(|(_, p)| p.first().copied());
        if got(&x) != Some(want_x) || got(&y) != Some(want_y) {
            return (false, false, format!("mismatch at ({lambda},{mu}): {x:?} / {y:?}"));
        }
        checked += 1;
    }
    (true, false, format!("{checked} random pairs, both rows exact"))
}

/// z-chart blow-ups map `1/(lambda+mu)` to `1/(lambda+mu) - 1`, so the count
/// to reach `lambda+mu >= 1` is the floor only when `1/(lambda+mu)` is not an
/// integer; at integers one fewer step suffices. Such disagreements are
/// reported as known; any other disagreement is a regression.
fn k_formula() -> (bool, bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x4b);
    let (mut agree, mut integral_boundary, mut other) = (0, 0, Vec::new());
    for _ in 0..500 {
        let m: u32 = rng.gen_range(3..=60);
        let a = rng.gen_range(1..m - 1);
        let b = rng.gen_range(1..m - a);
        let pair = CharPair::new(Frac::new(a as i64, m as i64), Frac::new(b as i64, m as i64));
        let inv_sum = pair.sum().recip();
        let predicted = inv_sum.floor() as u32;

        let (mut mm, mut pairs) = (m, PairList::from_raw(vec![pair]));
        let mut steps = 0u32;
        while classify(&pairs) == Regime::NonTransversal {
            match transform_pairs(mm, &pairs, BlowUpMove::QuadNonTransvZ) {
                Ok((m2, p2)) => (mm, pairs) = (m2, p2),
                Err(e) => {
                    other.push(format!("({a}/{m},{b}/{m}): {e}"));
                    break;
                }
            }
            steps += 1;
        }
        if steps == predicted {
            agree += 1;
        } else if inv_sum.is_integer() && steps + 1 == predicted {
            integral_boundary += 1;
        } else {
            other.push(format!("({a}/{m},{b}/{m}): {steps} steps, floor gives {predicted}"));
        }
    }
    let pass = integral_boundary == 0 && other.is_empty();
    let detail = format!(
        "{agree}/500 match the floor; {integral_boundary} with integral 1/(lambda+mu) need floor-1 steps; {} other mismatches{}",
        other.len(),
        other.first().map(|o| format!(" (first: {o})")).unwrap_or_default()
    );
    (pass, other.is_empty(), detail)
}

fn configuration_stability(st: &CorpusStats) -> (bool, bool, String) {
    let ok = st.configuration_failures.is_empty() && st.cap_failures.is_empty();
    let mut detail =
        format!("{} multiplicity drops, {} not in general configuration", st.drops, st.configuration_failures.len());
    if !ok {
        detail.push_str(&format!("; first: {}{}", first(&st.configuration_failures), first(&st.cap_failures)));
    }
    (ok, false, detail)
}

fn render(tree: &ResolutionTree) -> String {
    let mut s = emit_json(tree);
    s.push_str(&qoresolve::cli::emit_dot(tree));
    s.push_str(&format_trace(tree, &PathSelector::Leftmost));
    s
}

fn monotonicity_and_determinism(st: &CorpusStats) -> (bool, bool, String) {
    let sample: Vec<BinomialSurface> = corpus().into_iter().step_by(97).collect();
    let mut nondeterministic = Vec::new();
    for s in &sample {
        let seq = options_for(s);
        let par = ResolveOptions { parallel: true, ..seq };
        let root = root_of(s);
        let a = resolve(&root, seq).map(|t| render(&t));
        let b = resolve(&root, seq).map(|t| render(&t));
        let c = resolve(&root, par).map(|t| render(&t));
        if a.is_err() || a.as_ref().ok() != b.as_ref().ok() || a.as_ref().ok() != c.as_ref().ok() {
            nondeterministic.push(s.to_string());
        }
    }
    let ok = st.monotonicity_failures.is_empty() && st.cap_failures.is_empty() && nondeterministic.is_empty();
    let mut detail = format!(
        "{} invariant increases, {} runs over the step cap, {}/{} sampled runs byte-identical across repeated and parallel runs",
        st.monotonicity_failures.len(),
        st.cap_failures.len(),
        sample.len() - nondeterministic.len(),
        sample.len()
    );
    if let Some(f) = st.monotonicity_failures.first().or(nondeterministic.first()) {
        detail.push_str(&format!("; first: {f}"));
    }
    (ok, false, detail)
}

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let mut unexpected = 0;
    let mut check = |id, name, o: Outcome| {
        report(id, name, &o);
        if !o.pass && !o.known {
            unexpected += 1;
        }
    };

    check(1, "golden-trace", timed(golden_trace));
    let st = run_corpus();
    let mut c2 = timed(|| oracle_equivalence(&st));
    c2.elapsed += st.elapsed;
    check(2, "oracle-equivalence", c2);
    check(3, "nontransversal-rows", timed(nontransversal_mirror));
    check(4, "k-formula", timed(k_formula));
    check(5, "configuration-stability", timed(|| configuration_stability(&st)));
    check(6, "monotonicity-termination-determinism", timed(|| monotonicity_and_determinism(&st)));

    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria failed unexpectedly");
        ExitCode::FAILURE
    }
}
