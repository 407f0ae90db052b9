//! The resolution invariant at a chart origin, computed from weighted
//! fractional monomials on the maximal contact spaces `{z = 0}` and then an axis.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::divisor::{age_class, order_divisor_subsets, Divisor, DivisorConfig, HistoryRecord};
use crate::error::{Error, Result};
use crate::frac::Frac;
use crate::monomial::Monomial;
use crate::pairs::{classify, multiplicity, Axis, PairList, Regime};

/// An entry `nu_i` of the invariant.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Nu {
    Zero,
    Value(Frac),
    Inf,
    /// Not computed: the non-transversal regime needs only `(nu_1, s_1)`.
    Open,
}

/// One position of the flattened sequence `nu_1, s_1, nu_2, ...`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Slot {
    Nu(Nu),
    S(u32),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Level {
    pub nu: Frac,
    pub s: u32,
}

/// `(nu_1, s_1; ...; nu_k, s_k; end)` with `end` one of `0`, `inf` or open.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Invariant {
    levels: Vec<Level>,
    end: Nu,
}

impl Invariant {
    pub fn new(levels: Vec<Level>, end: Nu) -> Self {
        assert!(matches!(end, Nu::Zero | Nu::Inf | Nu::Open), "terminal must be 0, inf or open");
        Invariant { levels, end }
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn end(&self) -> Nu {
        self.end
    }

    pub fn first_nu(&self) -> Option<Frac> {
        self.levels.first().map(|l| l.nu)
    }

    pub fn slots(&self) -> Vec<Slot> {
        let mut out = Vec::with_capacity(2 * self.levels.len() + 1);
        for l in &self.levels {
            out.push(Slot::Nu(Nu::Value(l.nu)));
            out.push(Slot::S(l.s));
        }
        out.push(Slot::Nu(self.end));
        out
    }

    /// Number of entries in [`Self::slots`].
    pub fn slot_count(&self) -> usize {
        2 * self.levels.len() + 1
    }

    /// Entry `i` of [`Self::slots`] without building the sequence.
    pub fn slot(&self, i: usize) -> Option<Slot> {
        match self.levels.get(i / 2) {
            Some(l) if i.is_multiple_of(2) => Some(Slot::Nu(Nu::Value(l.nu))),
            Some(l) => Some(Slot::S(l.s)),
            None if i == 2 * self.levels.len() => Some(Slot::Nu(self.end)),
            None => None,
        }
    }

    /// Whether the flattened sequence starts with `prefix`.
    pub fn starts_with(&self, prefix: &[Slot]) -> bool {
        prefix.iter().enumerate().all(|(i, p)| self.slot(i) == Some(*p))
    }

    /// The resolved value `(1,0;0)`.
    pub fn is_resolved_value(&self) -> bool {
        self.levels == [Level { nu: Frac::ONE, s: 0 }] && self.end == Nu::Zero
    }

    pub fn parse(s: &str) -> std::result::Result<Self, String> {
        s.parse()
    }
}

impl Ord for Invariant {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.slot_count().max(other.slot_count());
        (0..n).map(|i| self.slot(i).cmp(&other.slot(i))).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
    }
}

impl PartialOrd for Invariant {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn compare_invariants(a: &Invariant, b: &Invariant) -> Ordering {
    a.cmp(b)
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for l in &self.levels {
            write!(f, "{},{};", l.nu, l.s)?;
        }
        match self.end {
            Nu::Zero => write!(f, "0)"),
            Nu::Inf => write!(f, "inf)"),
            Nu::Open => write!(f, "...)"),
            Nu::Value(v) => write!(f, "{v})"),
        }
    }
}

impl FromStr for Invariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| format!("invariant `{s}` must be parenthesized"))?;
        let parts: Vec<&str> = inner.split(';').collect();
        let (last, head) = parts.split_last().ok_or("empty invariant")?;
        let mut levels = Vec::new();
        for p in head {
            let (nu, s_) = p.split_once(',').ok_or_else(|| format!("bad level `{p}`"))?;
            let nu: Frac = nu.parse().map_err(|e| format!("{e}"))?;
            let s_: u32 = s_.trim().parse().map_err(|_| format!("bad count `{s_}`"))?;
            levels.push(Level { nu, s: s_ });
        }
        let end = match last.trim() {
            "0" => Nu::Zero,
            "inf" => Nu::Inf,
            "..." => Nu::Open,
            other => return Err(format!("bad terminal `{other}`")),
        };
        Ok(Invariant::new(levels, end))
    }
}

impl Serialize for Invariant {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Invariant {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `(h, mu_h)` with `h = x^alpha y^beta * unit`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct WeightedMonomial {
    pub alpha: Frac,
    pub beta: Frac,
    pub weight: Frac,
}

impl WeightedMonomial {
    pub fn new(m: Monomial, weight: Frac) -> Self {
        WeightedMonomial { alpha: m.x, beta: m.y, weight }
    }

    /// Exponents per unit weight; two entries with equal value are equivalent.
    pub fn normalized(&self) -> Monomial {
        Monomial::new(self.alpha / self.weight, self.beta / self.weight)
    }
}

/// Canonical center candidates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize, PartialOrd, Ord)]
pub enum Center {
    Origin,
    /// The x-axis, ideal `(y, z)`.
    XAxis,
    /// The y-axis, ideal `(x, z)`.
    YAxis,
}

impl fmt::Display for Center {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Center::Origin => "origin",
            Center::XAxis => "x-axis",
            Center::YAxis => "y-axis",
        })
    }
}

/// Everything the engine derives at one chart origin.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InvariantReport {
    pub invariant: Invariant,
    /// Exceptional monomial at the terminal level when it ends in `0`.
    pub d: Monomial,
    /// Age classes `E^1, E^2, ..` in the order they were formed.
    pub ages: Vec<Vec<Divisor>>,
    /// Normalized collection at each level, for tracing.
    pub collections: Vec<Vec<Monomial>>,
    /// Whether the `(D^m, (1 - nu) m)` entry was needed.
    pub used_d_entry: bool,
    /// Canonical center, `None` once resolved.
    pub center: Option<Center>,
}

/// The coefficient collection on `{z = 0}` before pruning: the leading
/// coefficient `c_0` with weight `m`, then every old divisor with weight one.
pub fn build_coefficient_collection(m: u32, pairs: &PairList, old: &[Divisor]) -> Result<Vec<WeightedMonomial>> {
    if classify(pairs) == Regime::NonTransversal {
        return Err(Error::NotTransversal);
    }
    let mut out = Vec::new();
    if let Some(p) = pairs.first() {
        let mf = Frac::int(m as i64);
        out.push(WeightedMonomial::new(p.monomial().scale(mf), mf));
    }
    for d in old {
        if let Some(r) = d.restriction() {
            let w = WeightedMonomial::new(r, Frac::ONE);
            if !out.contains(&w) {
                out.push(w);
            }
        }
    }
    Ok(out)
}

/// Drops entries weighted-divisible by another entry.
fn prune(collection: Vec<Monomial>) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = Vec::new();
    for (i, c) in collection.iter().enumerate() {
        let dominated = collection.iter().enumerate().any(|(j, o)| j != i && o.divides(c) && (o != c || j < i));
        if !dominated {
            out.push(*c);
        }
    }
    out
}

fn coordinate_of(divisors: &[Divisor], axis: Axis) -> Vec<Divisor> {
    divisors.iter().copied().filter(|d| d.coordinate() == Some(axis)).collect()
}

fn minus(all: &[Divisor], class: &[Divisor]) -> Vec<Divisor> {
    all.iter().copied().filter(|d| !class.contains(d)).collect()
}

/// Computes the invariant, its age classes and the canonical center.
pub fn compute_invariant(
    m: u32,
    pairs: &PairList,
    config: &DivisorConfig,
    history: &HistoryRecord,
    year: u32,
) -> Result<InvariantReport> {
    let nu1 = multiplicity(m, pairs)?;
    let active: Vec<Divisor> = config.active().copied().collect();
    let e1 = age_class(&active, history, &[Slot::Nu(Nu::Value(nu1))], year);
    let s1 = e1.len() as u32;
    let mut levels = vec![Level { nu: nu1, s: s1 }];
    let mut ages = vec![e1.clone()];

    if classify(pairs) == Regime::NonTransversal {
        return Ok(InvariantReport {
            invariant: Invariant::new(levels, Nu::Open),
            d: Monomial::ONE,
            ages,
            collections: Vec::new(),
            used_d_entry: false,
            center: Some(Center::Origin),
        });
    }

    let finish = |levels: Vec<Level>, end, d, ages, collections, used_d_entry, center| InvariantReport {
        invariant: Invariant::new(levels, end),
        d,
        ages,
        collections,
        used_d_entry,
        center,
    };

    let h1 = prune(build_coefficient_collection(m, pairs, &e1)?.iter().map(WeightedMonomial::normalized).collect());
    if h1.is_empty() {
        // Smooth strict transform with no old divisor through the point.
        return Ok(finish(levels, Nu::Zero, Monomial::ONE, ages, vec![h1], false, None));
    }

    // Second level, on N_1 = {z = 0}.
    let exc1 = minus(&active, &e1);
    let mu2 = h1.iter().map(Monomial::degree).min().expect("nonempty");
    let extract = |axis: Axis, exc: &[Divisor]| -> Frac {
        if coordinate_of(exc, axis).is_empty() {
            Frac::ZERO
        } else {
            h1.iter().map(|h| if axis == Axis::X { h.x } else { h.y }).min().expect("nonempty")
        }
    };
    let d2 = Monomial::new(extract(Axis::X, &exc1), extract(Axis::Y, &exc1));
    let nu2 = mu2 - d2.degree();
    if nu2.is_negative() {
        return Err(Error::ConfigurationOutOfScope(format!("negative second multiplicity {nu2}")));
    }
    if nu2.is_zero() {
        let center = center_from_d2(&d2, &exc1);
        return Ok(finish(levels, Nu::Zero, d2, ages, vec![h1], false, center));
    }

    let prefix2 = [Slot::Nu(Nu::Value(nu1)), Slot::S(s1), Slot::Nu(Nu::Value(nu2))];
    let e2 = age_class(&exc1, history, &prefix2, year);
    let s2 = e2.len() as u32;
    let exc2 = minus(&exc1, &e2);
    levels.push(Level { nu: nu2, s: s2 });
    ages.push(e2.clone());

    let mut f2: Vec<Monomial> = h1.iter().map(|h| Monomial::new((h.x - d2.x) / nu2, (h.y - d2.y) / nu2)).collect();
    let mut used_d_entry = false;
    if nu2 < 1 {
        f2.push(d2.scale((Frac::ONE - nu2).recip()));
        used_d_entry = true;
    }
    for d in &e2 {
        if let Some(axis) = d.coordinate() {
            f2.push(if axis == Axis::X { Monomial::ints(1, 0) } else { Monomial::ints(0, 1) });
        }
    }
    let f2 = prune(f2);

    // Maximal contact inside N_1: a coordinate dividing an order-achieving entry.
    // It must stay transverse to the divisors still awaiting factorization, so
    // a coordinate with such a divisor is used only when nothing else qualifies.
    let minimal: Vec<&Monomial> = f2.iter().filter(|g| g.degree() == 1).collect();
    let candidates: Vec<Axis> = [Axis::Y, Axis::X]
        .into_iter()
        .filter(|&a| minimal.iter().any(|g| !(if a == Axis::X { g.x } else { g.y }).is_zero()))
        .collect();
    let contact = candidates
        .iter()
        .copied()
        .find(|&a| coordinate_of(&exc2, a).is_empty())
        .or_else(|| candidates.first().copied())
        .ok_or_else(|| Error::ConfigurationOutOfScope("no order-achieving entry at the second level".into()))?;
    let remaining = if contact == Axis::Y { Axis::X } else { Axis::Y };
    // Coefficients with respect to the contact coordinate, on the remaining axis.
    let h2: Vec<Frac> = f2
        .iter()
        .filter_map(|g| {
            let (rem, con) = if contact == Axis::Y { (g.x, g.y) } else { (g.y, g.x) };
            (con < 1).then(|| rem / (Frac::ONE - con))
        })
        .collect();
    let as_monomial =
        |t: Frac| if remaining == Axis::X { Monomial::new(t, Frac::ZERO) } else { Monomial::new(Frac::ZERO, t) };
    let collections = vec![h1, f2.clone(), h2.iter().map(|t| as_monomial(*t)).collect()];

    if h2.is_empty() {
        let center = if contact == Axis::Y { Center::XAxis } else { Center::YAxis };
        return Ok(finish(levels, Nu::Inf, Monomial::ONE, ages, collections, used_d_entry, Some(center)));
    }

    let mu3 = *h2.iter().min().expect("nonempty");
    if !coordinate_of(&exc2, remaining).is_empty() {
        let d3 = as_monomial(mu3);
        let center = (mu3 >= 1).then_some(Center::Origin);
        return Ok(finish(levels, Nu::Zero, d3, ages, collections, used_d_entry, center));
    }
    let nu3 = mu3;
    let prefix3 =
        [Slot::Nu(Nu::Value(nu1)), Slot::S(s1), Slot::Nu(Nu::Value(nu2)), Slot::S(s2), Slot::Nu(Nu::Value(nu3))];
    let e3 = age_class(&exc2, history, &prefix3, year);
    levels.push(Level { nu: nu3, s: e3.len() as u32 });
    ages.push(e3);
    // No variables remain below the axis: the last contact space is the origin.
    Ok(finish(levels, Nu::Inf, Monomial::ONE, ages, collections, used_d_entry, Some(Center::Origin)))
}

/// `S_inv = {mu(D_2) >= 1}` and the history order of its components.
fn center_from_d2(d2: &Monomial, exceptional: &[Divisor]) -> Option<Center> {
    let x_ok = d2.x >= 1;
    let y_ok = d2.y >= 1;
    match (x_ok, y_ok) {
        (true, true) => {
            let xs: Vec<u32> = coordinate_of(exceptional, Axis::X).iter().map(|d| d.birth).collect();
            let ys: Vec<u32> = coordinate_of(exceptional, Axis::Y).iter().map(|d| d.birth).collect();
            if order_divisor_subsets(exceptional, &xs, &ys) == Ordering::Greater {
                Some(Center::YAxis)
            } else {
                Some(Center::XAxis)
            }
        }
        (true, false) => Some(Center::YAxis),
        (false, true) => Some(Center::XAxis),
        (false, false) if d2.degree() >= 1 => Some(Center::Origin),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::DivisorKind;
    use crate::pairs::CharPair;

    fn inv(s: &str) -> Invariant {
        s.parse().unwrap()
    }

    fn single(l: Frac, u: Frac) -> PairList {
        PairList::from_raw(vec![CharPair::new(l, u)])
    }

    #[test]
    fn ordering_of_terminals_and_values() {
        assert!(inv("(3,0;0)") < inv("(3,0;2,0;1,0;inf)"));
        assert!(inv("(3,0;2,0;1,0;inf)") < inv("(3,0;inf)"));
        assert!(inv("(3,0;4/3,1;1,0;inf)") < inv("(3,0;2,0;1,0;inf)"));
        assert!(inv("(1,1;0)") < inv("(1,2;1,0;3,0;inf)"));
        assert!(inv("(1,0;0)") < inv("(1,1;0)"));
        assert_eq!(compare_invariants(&inv("(1,1;0)"), &inv("(1,1;0)")), Ordering::Equal);
    }

    #[test]
    fn display_round_trips() {
        for s in ["(3,0;2,0;1,0;inf)", "(3,0;0)", "(2,2;...)", "(1,1;3,1;1,0;inf)", "(3,0;4/3,1;1,0;inf)"] {
            assert_eq!(inv(s).to_string(), s);
        }
        assert!(Invariant::parse("3,0;0").is_err());
        assert!(Invariant::parse("(3,0;7)").is_err());
        assert!(inv("(1,0;0)").is_resolved_value());
    }

    #[test]
    fn leading_coefficient_collection() {
        let pairs = single(Frac::new(2, 3), Frac::new(4, 3));
        let c = build_coefficient_collection(3, &pairs, &[]).unwrap();
        assert_eq!(c, vec![WeightedMonomial::new(Monomial::ints(2, 4), Frac::int(3))]);
        assert_eq!(c[0].normalized(), Monomial::new(Frac::new(2, 3), Frac::new(4, 3)));
    }

    #[test]
    fn old_divisors_contribute_restrictions() {
        let hx = Divisor::new(0, DivisorKind::XPlane);
        let contact = Divisor::new(1, DivisorKind::Contact { exponents: Monomial::ints(0, 3), acts_as: None });
        let c = build_coefficient_collection(1, &PairList::smooth(), &[hx, contact]).unwrap();
        assert_eq!(
            c,
            vec![
                WeightedMonomial::new(Monomial::ints(1, 0), Frac::ONE),
                WeightedMonomial::new(Monomial::ints(0, 3), Frac::ONE)
            ]
        );

        let contact = Divisor::new(1, DivisorKind::Contact { exponents: Monomial::ints(2, 3), acts_as: None });
        let c = build_coefficient_collection(1, &PairList::smooth(), &[contact]).unwrap();
        assert_eq!(c, vec![WeightedMonomial::new(Monomial::ints(2, 3), Frac::ONE)]);
    }

    #[test]
    fn non_transversal_collection_is_refused() {
        let pairs = single(Frac::new(1, 3), Frac::new(1, 3));
        assert_eq!(build_coefficient_collection(3, &pairs, &[]), Err(Error::NotTransversal));
    }

    #[test]
    fn fresh_surface_invariant() {
        let pairs = single(Frac::new(2, 3), Frac::new(4, 3));
        let r = compute_invariant(3, &pairs, &DivisorConfig::default(), &HistoryRecord::new(0), 0).unwrap();
        assert_eq!(r.invariant.to_string(), "(3,0;2,0;1,0;inf)");
        assert_eq!(r.center, Some(Center::Origin));
    }

    #[test]
    fn exceptional_planes_absorb_leading_coefficient() {
        let pairs = single(Frac::ONE, Frac::new(4, 3));
        let config =
            DivisorConfig::new(vec![Divisor::new(1, DivisorKind::XPlane), Divisor::new(2, DivisorKind::YPlane)]);
        let r = compute_invariant(3, &pairs, &config, &HistoryRecord::new(0), 2).unwrap();
        assert_eq!(r.invariant.to_string(), "(3,0;0)");
        assert_eq!(r.d, Monomial::new(Frac::ONE, Frac::new(4, 3)));
    }

    #[test]
    fn smooth_without_divisors_is_resolved() {
        let r =
            compute_invariant(1, &PairList::smooth(), &DivisorConfig::default(), &HistoryRecord::new(0), 0).unwrap();
        assert!(r.invariant.is_resolved_value());
    }
}
