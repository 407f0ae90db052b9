//! Exceptional divisors visible at a chart origin: kinds, birth years, age
//! classes and the general-configuration predicate.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frac::Frac;
use crate::invariant::{Invariant, Slot};
use crate::monomial::Monomial;
use crate::pairs::{Axis, BlowUpMove, NormalizationMove, PairList};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DivisorKind {
    XPlane,
    YPlane,
    /// `{z = 0}` in the middle of a transition, before the contact
    /// exponents are known. Never survives [`settle_contacts`].
    ZPlane,
    /// `H_{z - q}` with `x^a y^b` the exponents of `q` (or a monomial dividing
    /// `q` when `q` is controlled by the leading coefficient). With `acts_as`
    /// set, the plane restricts to that coordinate times a unit on `{z = 0}`.
    Contact {
        exponents: Monomial,
        acts_as: Option<Axis>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Divisor {
    pub birth: u32,
    #[serde(flatten)]
    pub kind: DivisorKind,
}

impl Divisor {
    pub fn new(birth: u32, kind: DivisorKind) -> Self {
        Divisor { birth, kind }
    }

    /// The horizontal coordinate this plane behaves like on `{z = 0}`.
    pub fn coordinate(&self) -> Option<Axis> {
        match self.kind {
            DivisorKind::XPlane => Some(Axis::X),
            DivisorKind::YPlane => Some(Axis::Y),
            DivisorKind::Contact { acts_as, .. } => acts_as,
            DivisorKind::ZPlane => None,
        }
    }

    /// A contact plane `H_{z - q}` with no coordinate role.
    pub fn contact_exponents(&self) -> Option<Monomial> {
        match self.kind {
            DivisorKind::Contact { exponents, acts_as: None } => Some(exponents),
            _ => None,
        }
    }

    /// `H_{z - unit}` no longer meets the origin.
    pub fn passes_through_origin(&self) -> bool {
        !matches!(self.contact_exponents(), Some(e) if e.is_one())
    }

    /// Restriction to `{z = 0}` as a weight-one monomial function.
    pub fn restriction(&self) -> Option<Monomial> {
        match (self.coordinate(), self.contact_exponents()) {
            (Some(Axis::X), _) => Some(Monomial::ints(1, 0)),
            (Some(Axis::Y), _) => Some(Monomial::ints(0, 1)),
            (None, Some(e)) if !e.is_one() => Some(e),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self.kind {
            DivisorKind::XPlane => "H_x".into(),
            DivisorKind::YPlane => "H_y".into(),
            DivisorKind::ZPlane => "H_z".into(),
            DivisorKind::Contact { acts_as: Some(Axis::X), .. } => "H_{x-p}".into(),
            DivisorKind::Contact { acts_as: Some(Axis::Y), .. } => "H_{y-p}".into(),
            DivisorKind::Contact { exponents, acts_as: None } => {
                if exponents.is_integral() {
                    format!("H_{{z-{exponents}}}")
                } else {
                    "H_{z-p}".into()
                }
            }
        }
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Divisors through the current chart origin, kept in birth order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorConfig {
    divisors: Vec<Divisor>,
}

impl DivisorConfig {
    pub fn new(mut divisors: Vec<Divisor>) -> Self {
        divisors.sort_by_key(|d| d.birth);
        DivisorConfig { divisors }
    }

    pub fn divisors(&self) -> &[Divisor] {
        &self.divisors
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }

    pub fn len(&self) -> usize {
        self.divisors.len()
    }

    /// Divisors that take part in the invariant (planes missing the origin excluded).
    pub fn active(&self) -> impl Iterator<Item = &Divisor> {
        self.divisors.iter().filter(|d| d.passes_through_origin())
    }

    pub fn contact(&self) -> Option<&Divisor> {
        self.divisors.iter().find(|d| d.contact_exponents().is_some())
    }

    pub fn labels(&self) -> String {
        let names: Vec<String> = self.divisors.iter().map(Divisor::label).collect();
        format!("{{{}}}", names.join(","))
    }
}

/// Where a chart sits relative to the blown-up center.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize, PartialOrd, Ord)]
pub enum Chart {
    X,
    Y,
    Z,
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chart::X => "x",
            Chart::Y => "y",
            Chart::Z => "z",
        })
    }
}

fn like(d: &Divisor, axis: Axis) -> bool {
    d.coordinate() == Some(axis)
}

fn shift_contact(d: Divisor, map: impl Fn(Monomial) -> Option<Monomial>) -> Result<Option<Divisor>> {
    match d.kind {
        DivisorKind::Contact { exponents, acts_as: None } => {
            if exponents.is_one() {
                return Ok(None);
            }
            let e = map(exponents).ok_or_else(|| {
                Error::InconsistentConfiguration(format!("contact plane {} cannot follow the move", d.label()))
            })?;
            Ok(Some(Divisor { kind: DivisorKind::Contact { exponents: e, acts_as: None }, ..d }))
        }
        _ => Ok(Some(d)),
    }
}

/// Divisors after the blow-up `mv`, before normalization of the strict transform.
///
/// The exceptional plane of the chart is born in `year`. Planes of the chart's
/// own coordinate are blown away; contact exponents follow the transversal or
/// monoidal rows; the non-transversal `x`/`y` rows include the exchange of the
/// chart's complementary coordinate with `z`.
pub fn transform_divisors(config: &DivisorConfig, mv: BlowUpMove, year: u32) -> Result<DivisorConfig> {
    let one = Frac::ONE;
    let mut out = Vec::new();
    for &d in config.divisors() {
        if !d.passes_through_origin() {
            continue;
        }
        let kept = match mv {
            BlowUpMove::MonoidalX | BlowUpMove::QuadTransvX if like(&d, Axis::X) => None,
            BlowUpMove::MonoidalY | BlowUpMove::QuadTransvY if like(&d, Axis::Y) => None,
            BlowUpMove::MonoidalX => shift_contact(d, |e| (e.x >= 1).then(|| Monomial::new(e.x - one, e.y)))?,
            BlowUpMove::MonoidalY => shift_contact(d, |e| (e.y >= 1).then(|| Monomial::new(e.x, e.y - one)))?,
            BlowUpMove::QuadTransvX => {
                shift_contact(d, |e| (e.degree() >= 1).then(|| Monomial::new(e.x + e.y - one, e.y)))?
            }
            BlowUpMove::QuadTransvY => {
                shift_contact(d, |e| (e.degree() >= 1).then(|| Monomial::new(e.x, e.x + e.y - one)))?
            }
            BlowUpMove::QuadNonTransvX => swap_with_z(d, Axis::Y, Axis::X),
            BlowUpMove::QuadNonTransvY => swap_with_z(d, Axis::X, Axis::Y),
            BlowUpMove::QuadNonTransvZ => match d.kind {
                DivisorKind::Contact { acts_as: None, .. } | DivisorKind::ZPlane => None,
                _ => Some(d),
            },
        };
        out.extend(kept);
    }
    let born = match mv {
        BlowUpMove::MonoidalX | BlowUpMove::QuadTransvX | BlowUpMove::QuadNonTransvX => DivisorKind::XPlane,
        BlowUpMove::MonoidalY | BlowUpMove::QuadTransvY | BlowUpMove::QuadNonTransvY => DivisorKind::YPlane,
        BlowUpMove::QuadNonTransvZ => DivisorKind::ZPlane,
    };
    out.push(Divisor::new(year, born));
    Ok(DivisorConfig::new(out))
}

/// Non-transversal chart of `chart_axis` followed by `other <-> z`.
fn swap_with_z(d: Divisor, other: Axis, chart_axis: Axis) -> Option<Divisor> {
    if like(&d, chart_axis) {
        return None;
    }
    Some(exchange_with_z(d, other))
}

/// Effect of exchanging the coordinate `axis` with `z` on one divisor.
fn exchange_with_z(d: Divisor, axis: Axis) -> Divisor {
    let kind = match d.kind {
        _ if like(&d, axis) => DivisorKind::ZPlane,
        DivisorKind::ZPlane | DivisorKind::Contact { acts_as: None, .. } => {
            let exponents = match d.kind {
                DivisorKind::Contact { exponents, .. } => exponents,
                _ => Monomial::ONE,
            };
            DivisorKind::Contact { exponents, acts_as: Some(axis) }
        }
        k => k,
    };
    Divisor { kind, ..d }
}

/// Replays the coordinate changes of a normalization on the divisors.
pub fn apply_normalization(config: &DivisorConfig, moves: &[NormalizationMove]) -> DivisorConfig {
    let mut divisors = config.divisors().to_vec();
    for mv in moves {
        match *mv {
            NormalizationMove::Invert(axis) => {
                divisors = divisors.into_iter().map(|d| exchange_with_z(d, axis)).collect();
            }
            NormalizationMove::SwapXY => {
                for d in &mut divisors {
                    d.kind = match d.kind {
                        DivisorKind::XPlane => DivisorKind::YPlane,
                        DivisorKind::YPlane => DivisorKind::XPlane,
                        DivisorKind::Contact { exponents, acts_as } => DivisorKind::Contact {
                            exponents: Monomial::new(exponents.y, exponents.x),
                            acts_as: acts_as.map(|a| if a == Axis::X { Axis::Y } else { Axis::X }),
                        },
                        k => k,
                    };
                }
            }
            NormalizationMove::AbsorbIntegral => {}
        }
    }
    DivisorConfig::new(divisors)
}

/// Turns the plane `{z = 0}` into `H_{z - q}`: `q` is the absorbed ghost when
/// there is one, otherwise the new first pair bounds it from below.
pub fn settle_contacts(config: &DivisorConfig, pairs: &PairList, ghost: Option<Monomial>) -> Result<DivisorConfig> {
    let mut divisors = config.divisors().to_vec();
    for d in &mut divisors {
        if d.kind == DivisorKind::ZPlane {
            let exponents = ghost
                .or_else(|| pairs.first().map(|p| p.monomial()))
                .ok_or_else(|| Error::InconsistentConfiguration("z-plane over a smooth branch with no ghost".into()))?;
            d.kind = DivisorKind::Contact { exponents, acts_as: None };
        }
    }
    Ok(DivisorConfig::new(divisors))
}

/// Whether a contact monomial controls the invariant (`q | c_0`) rather than
/// being controlled by the leading pair.
pub fn contact_is_dominant(exponents: &Monomial, pairs: &PairList) -> bool {
    exponents.is_integral() && pairs.first().is_none_or(|p| exponents.divides(&p.monomial()))
}

/// The stable shape of the divisor set after a multiplicity drop.
pub fn is_general_configuration(config: &DivisorConfig, pairs: &PairList) -> bool {
    general_configuration_defect(config, pairs).is_none()
}

pub fn general_configuration_defect(config: &DivisorConfig, pairs: &PairList) -> Option<String> {
    let active: Vec<&Divisor> = config.active().collect();
    for axis in [Axis::X, Axis::Y] {
        if active.iter().filter(|d| like(d, axis)).count() > 1 {
            return Some(format!("two planes acting as {axis:?}"));
        }
    }
    let contacts: Vec<Monomial> = active.iter().filter_map(|d| d.contact_exponents()).collect();
    if contacts.len() > 1 {
        return Some("two contact planes".into());
    }
    if active.iter().any(|d| d.kind == DivisorKind::ZPlane) {
        return Some("unsettled z-plane".into());
    }
    if let Some(e) = contacts.first() {
        let subordinate = pairs.first().is_some_and(|p| p.monomial().divides(e));
        if !subordinate && !contact_is_dominant(e, pairs) {
            return Some(format!("contact exponents {e} neither divide nor are divided by the first pair"));
        }
    }
    None
}

/// Lexicographic order of subsets of `all` through their indicator tuples
/// over the birth order. `Greater` means `i` precedes `j` in the center choice.
pub fn order_divisor_subsets(all: &[Divisor], i: &[u32], j: &[u32]) -> Ordering {
    let mut births: Vec<u32> = all.iter().map(|d| d.birth).collect();
    births.sort_unstable();
    let tuple = |s: &[u32]| -> Vec<bool> { births.iter().map(|b| s.contains(b)).collect() };
    tuple(i).cmp(&tuple(j))
}

/// Invariants recorded at earlier years of the current cycle.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct HistoryRecord {
    /// Year the multiplicity took its current value.
    pub cycle_start: u32,
    pub entries: Vec<HistoryEntry>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub year: u32,
    pub invariant: Invariant,
}

impl HistoryRecord {
    pub fn new(cycle_start: u32) -> Self {
        HistoryRecord { cycle_start, entries: Vec::new() }
    }

    /// Appends a year and forgets entries no future prefix can reach.
    ///
    /// Every prefix of length at least three starts with `(nu_1, s_1; nu_2)`, and
    /// the backward walk in [`Self::earliest_with_prefix`] stops at the first
    /// entry that differs there, so only the latest run of equal
    /// `(nu_1, s_1; nu_2)` matters; `E^1` depends on `cycle_start` alone.
    pub fn record(&mut self, year: u32, invariant: Invariant) {
        let current: Vec<Slot> = (0..3).filter_map(|i| invariant.slot(i)).collect();
        let keep_from = self.entries.iter().rposition(|e| !e.invariant.starts_with(&current)).map_or(0, |i| i + 1);
        self.entries.drain(..keep_from);
        self.entries.push(HistoryEntry { year, invariant });
    }

    /// Earliest year from which `prefix` has held without interruption,
    /// counting the current year `now`.
    pub fn earliest_with_prefix(&self, prefix: &[Slot], now: u32) -> u32 {
        // The multiplicity is constant on a cycle.
        if prefix.len() <= 1 {
            return self.cycle_start.min(now);
        }
        let mut year = now;
        for e in self.entries.iter().rev() {
            if e.invariant.starts_with(prefix) {
                year = e.year;
            } else {
                break;
            }
        }
        year.max(self.cycle_start)
    }
}

/// Divisors among `candidates` already present at the earliest year of the
/// current prefix value.
pub fn age_class(candidates: &[Divisor], history: &HistoryRecord, prefix: &[Slot], now: u32) -> Vec<Divisor> {
    let since = history.earliest_with_prefix(prefix, now);
    candidates.iter().copied().filter(|d| d.birth <= since).collect()
}

/// Age classes `E^1, E^2, ..` of a complete invariant, plus the divisors in no class.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AgePartition {
    pub classes: Vec<Vec<Divisor>>,
    pub rest: Vec<Divisor>,
}

pub fn partition_ages(
    config: &DivisorConfig,
    history: &HistoryRecord,
    current: &Invariant,
    now: u32,
) -> Result<AgePartition> {
    for d in config.divisors() {
        if d.birth > now {
            return Err(Error::IncompleteHistory { birth: d.birth });
        }
    }
    let slots = current.slots();
    let mut remaining: Vec<Divisor> = config.active().copied().collect();
    let mut classes = Vec::new();
    for level in 0..current.levels().len() {
        let prefix = &slots[..2 * level + 1];
        let class = age_class(&remaining, history, prefix, now);
        remaining.retain(|d| !class.contains(d));
        classes.push(class);
    }
    Ok(AgePartition { classes, rest: remaining })
}
