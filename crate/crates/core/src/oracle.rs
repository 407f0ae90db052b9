//! Ground truth for irreducible binomials `z^m + u x^a y^b` by literal
//! substitution, independent of the pair calculus.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::divisor::Chart;
use crate::driver::{relevant_charts, resolve, ChartState, ResolutionTree, ResolveOptions};
use crate::error::{Error, Result};
use crate::frac::Frac;
use crate::invariant::Center;
use crate::monomial::Monomial;
use crate::pairs::{normalize, validate_pairs, CharPair, Orientation, PairList};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct BinomialSurface {
    pub m: u32,
    pub a: u32,
    pub b: u32,
}

impl BinomialSurface {
    /// Checks irreducibility (`gcd(m, a, b) = 1`).
    pub fn new(m: u32, a: u32, b: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroDegree);
        }
        if m.gcd(&a).gcd(&b) != 1 {
            return Err(Error::ReducibleBinomial { m, a, b });
        }
        Ok(BinomialSurface { m, a, b })
    }
}

impl fmt::Display for BinomialSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mono = Monomial::ints(self.a as i64, self.b as i64);
        match self.m {
            1 => write!(f, "z+{mono}"),
            m => write!(f, "z^{m}+{mono}"),
        }
    }
}

/// Result of one literal blow-up.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum OracleSurface {
    Binomial(BinomialSurface),
    /// `z + x^a y^b`: a smooth branch that still remembers its monomial.
    Smooth {
        a: u32,
        b: u32,
    },
    /// The strict transform misses the chart origin.
    Unit,
}

/// Pairs of `z^m + x^a y^b` as read off the roots, before normalization.
pub fn oracle_pairs(s: &BinomialSurface) -> (u32, PairList) {
    let m = s.m as i64;
    let pair = CharPair::new(Frac::new(s.a as i64, m), Frac::new(s.b as i64, m));
    (s.m, PairList::from_raw(vec![pair]))
}

fn binomial(m: u32, a: u32, b: u32) -> OracleSurface {
    if a == 0 && b == 0 {
        OracleSurface::Unit
    } else {
        OracleSurface::Binomial(BinomialSurface { m, a, b })
    }
}

/// Substitutes the chart coordinates and divides by the exceptional factor.
///
/// Only the `y <-> z` (or `x <-> z`) relabeling forced by a collapsed
/// `z`-degree in the quadratic `x`/`y` charts is applied here; see
/// [`oracle_normalize`] for the remaining coordinate exchange.
pub fn oracle_blow_up(s: &BinomialSurface, center: Center, chart: Chart) -> Result<OracleSurface> {
    let BinomialSurface { m, a, b } = *s;
    let illegal = || Error::IllegalCenter { center: center.to_string(), m, a, b };
    let out = match (center, chart) {
        // x^m z^m + x^(a+b) y^b
        (Center::Origin, Chart::X) if a + b >= m => binomial(m, a + b - m, b),
        (Center::Origin, Chart::X) if b == 0 => OracleSurface::Unit,
        // x^(m-a-b) z^m + y^b, read with y and z exchanged
        (Center::Origin, Chart::X) => binomial(b, m - a - b, m),
        (Center::Origin, Chart::Y) if a + b >= m => binomial(m, a, a + b - m),
        (Center::Origin, Chart::Y) if a == 0 => OracleSurface::Unit,
        (Center::Origin, Chart::Y) => binomial(a, m, m - a - b),
        // z^m + z^(a+b) x^a y^b
        (Center::Origin, Chart::Z) if a + b < m => binomial(m - a - b, a, b),
        (Center::Origin, Chart::Z) => OracleSurface::Unit,
        (Center::YAxis, _) if a < m => return Err(illegal()),
        (Center::YAxis, Chart::X) => binomial(m, a - m, b),
        (Center::YAxis, Chart::Z) => OracleSurface::Unit,
        (Center::XAxis, _) if b < m => return Err(illegal()),
        (Center::XAxis, Chart::Y) => binomial(m, a, b - m),
        (Center::XAxis, Chart::Z) => OracleSurface::Unit,
        // The axis itself lies in this chart's exceptional plane only.
        (Center::YAxis, Chart::Y) | (Center::XAxis, Chart::X) => return Err(illegal()),
    };
    Ok(out)
}

/// Exchanges `z` with a coordinate of lower degree and recognizes smooth branches.
pub fn oracle_normalize(s: OracleSurface) -> OracleSurface {
    let OracleSurface::Binomial(BinomialSurface { m, a, b }) = s else {
        return s;
    };
    let (m, a, b) = match (a, b) {
        (0, b) if b < m => (b, 0, m),
        (a, 0) if a < m => (a, m, 0),
        _ => (m, a, b),
    };
    if m == 1 {
        OracleSurface::Smooth { a, b }
    } else {
        binomial(m, a, b)
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
fn determinant(mut rows: Vec<Vec<BigInt>>) -> BigInt {
    let n = rows.len();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !rows[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            rows.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &rows[i][j] * &rows[k][k] - &rows[i][k] * &rows[k][j];
                rows[i][j] = v / &prev;
            }
            rows[i][k] = BigInt::zero();
        }
        prev = rows[k][k].clone();
    }
    let det = rows[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Sylvester matrix of `z^m + t` and its derivative `m z^(m-1)`.
fn sylvester(m: usize, t: i64) -> Vec<Vec<BigInt>> {
    let size = 2 * m - 1;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..m - 1 {
        let mut r = vec![BigInt::zero(); size];
        r[shift] = BigInt::one();
        r[shift + m] = BigInt::from(t);
        rows.push(r);
    }
    for shift in 0..m {
        let mut r = vec![BigInt::zero(); size];
        r[shift] = BigInt::from(m);
        rows.push(r);
    }
    rows
}

/// Whether the `z`-discriminant is a nonzero constant times a monomial, and
/// that monomial's exponents.
///
/// With `c = u x^a y^b` the resultant is a polynomial of degree at most
/// `m - 1` in `c`; it is evaluated exactly at `c = 1..m` and matched against
/// `k c^(m-1)`.
pub fn oracle_discriminant_check(s: &BinomialSurface) -> (bool, (u32, u32)) {
    let m = s.m as usize;
    if m == 1 {
        return (true, (0, 0));
    }
    let k = determinant(sylvester(m, 1));
    let monomial =
        !k.is_zero() && (2..=m as i64).all(|t| determinant(sylvester(m, t)) == &k * BigInt::from(t).pow(s.m - 1));
    let e = s.m - 1;
    (monomial, (s.a * e, s.b * e))
}

/// One edge or skipped chart compared against the oracle.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EdgeCheck {
    pub path: String,
    /// `None` when the edge agrees; otherwise the first field that differs.
    pub divergence: Option<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CrossReport {
    pub checks: Vec<EdgeCheck>,
    /// Charts skipped by the driver and confirmed smooth or unit.
    pub skipped_confirmed: usize,
    pub tree_nodes: usize,
}

impl CrossReport {
    pub fn first_divergence(&self) -> Option<&EdgeCheck> {
        self.checks.iter().find(|c| c.divergence.is_some())
    }

    pub fn is_ok(&self) -> bool {
        self.first_divergence().is_none()
    }

    pub fn into_result(self) -> Result<Self> {
        match self.first_divergence() {
            Some(c) => Err(Error::Divergence { path: c.path.clone(), field: c.divergence.clone().unwrap_or_default() }),
            None => Ok(self),
        }
    }

    /// `OK <path>` or `DIVERGE <path> <field>`, one line per edge.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            match &c.divergence {
                None => out.push_str(&format!("OK {}\n", c.path)),
                Some(field) => out.push_str(&format!("DIVERGE {} {}\n", c.path, field)),
            }
        }
        out
    }
}

/// The normalized form of an oracle surface in the driver's terms.
fn expected_state(s: &OracleSurface) -> Result<Option<(u32, PairList, Option<Monomial>)>> {
    Ok(match s {
        OracleSurface::Unit => None,
        OracleSurface::Smooth { a, b } => Some((1, PairList::smooth(), Some(Monomial::ints(*a as i64, *b as i64)))),
        OracleSurface::Binomial(bs) => {
            let (m, pairs) = oracle_pairs(bs);
            let n = normalize(m, &pairs, Orientation::Preserve)?;
            Some((n.m, n.pairs, n.ghost.map(|g| g.monomial())))
        }
    })
}

fn edge_label(base: &str, chart: Chart) -> String {
    if base == "root" {
        chart.to_string()
    } else {
        format!("{base}.{chart}")
    }
}

/// Replays every edge of a resolution tree through the oracle.
pub fn cross_validate_tree(root: &BinomialSurface, tree: &ResolutionTree) -> Result<CrossReport> {
    let mut report = CrossReport { tree_nodes: tree.nodes.len(), ..CrossReport::default() };
    let mut surfaces: Vec<Option<BinomialSurface>> = vec![None; tree.nodes.len()];
    // Monomiality of the discriminant depends on the degree alone.
    let mut monomial_disc: FxHashMap<u32, bool> = FxHashMap::default();
    match oracle_normalize(OracleSurface::Binomial(*root)) {
        OracleSurface::Binomial(s) => surfaces[0] = Some(s),
        _ => return Ok(report),
    }
    // Breadth-first discovery order lists every node after the node that reached it first.
    for (i, node) in tree.nodes.iter().enumerate() {
        let Some(s) = surfaces[i] else { continue };
        let disc_ok = *monomial_disc.entry(s.m).or_insert_with(|| oracle_discriminant_check(&s).0);
        let here = tree.chart_label(i);
        if !disc_ok {
            report.checks.push(EdgeCheck { path: here.clone(), divergence: Some("discriminant".into()) });
        }
        let Some(center) = node.center else { continue };
        let taken = relevant_charts(&node.state, center);
        for chart in [Chart::X, Chart::Y, Chart::Z] {
            if taken.contains(&chart) {
                continue;
            }
            let skipped = match oracle_blow_up(&s, center, chart) {
                Ok(out) => oracle_normalize(out),
                Err(_) => continue,
            };
            if matches!(skipped, OracleSurface::Binomial(_)) {
                report
                    .checks
                    .push(EdgeCheck { path: edge_label(&here, chart), divergence: Some("skipped-chart".into()) });
            } else {
                report.skipped_confirmed += 1;
            }
        }
        for link in &node.children {
            let path = edge_label(&here, link.edge.chart);
            let target = &tree.nodes[link.target];
            let literal = match oracle_blow_up(&s, center, link.edge.chart) {
                Ok(out) => out,
                Err(_) => {
                    report.checks.push(EdgeCheck { path, divergence: Some("center".into()) });
                    continue;
                }
            };
            let mut divergence = None;
            if let OracleSurface::Binomial(raw) = literal {
                let (m, pairs) = oracle_pairs(&raw);
                if link.edge.raw_m != m {
                    divergence = Some("raw-m");
                } else if link.edge.raw_pairs != pairs {
                    divergence = Some("raw-pairs");
                }
            }
            let normalized = oracle_normalize(literal);
            if divergence.is_none() {
                divergence = match expected_state(&normalized)? {
                    None => Some("unit"),
                    Some((m, _, _)) if m != target.state.m => Some("m"),
                    Some((_, pairs, _)) if pairs != target.state.pairs => Some("pairs"),
                    Some((_, _, ghost)) if ghost != link.edge.ghost.map(|g| g.monomial()) => Some("ghost"),
                    Some(_) => None,
                };
            }
            if divergence.is_none() {
                if let OracleSurface::Binomial(next) = normalized {
                    match surfaces[link.target] {
                        Some(prev) if prev != next => divergence = Some("shared-state"),
                        _ => surfaces[link.target] = Some(next),
                    }
                }
            }
            report.checks.push(EdgeCheck { path, divergence: divergence.map(str::to_string) });
        }
    }
    Ok(report)
}

/// Resolves `oracle_pairs(s)` and replays the whole tree through the oracle.
pub fn cross_validate(s: &BinomialSurface, options: ResolveOptions) -> Result<CrossReport> {
    let (m, pairs) = oracle_pairs(s);
    let root = ChartState::root(m, &validate_pairs(pairs.pairs().to_vec())?)?;
    let tree = resolve(&root, options)?;
    cross_validate_tree(s, &tree)
}
