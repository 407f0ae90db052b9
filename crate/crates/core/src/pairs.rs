//! Pair calculus: characteristic pairs, normalization and the transformation
//! table for monoidal and quadratic blow-ups.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frac::{common_denominator, Frac};
use crate::monomial::Monomial;

/// One characteristic pair `(lambda, mu)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct CharPair {
    pub lambda: Frac,
    pub mu: Frac,
}

impl CharPair {
    pub fn new(lambda: Frac, mu: Frac) -> Self {
        CharPair { lambda, mu }
    }

    pub fn sum(&self) -> Frac {
        self.lambda + self.mu
    }

    pub fn is_integral(&self) -> bool {
        self.lambda.is_integer() && self.mu.is_integer()
    }

    pub fn le(&self, other: &CharPair) -> bool {
        self.lambda <= other.lambda && self.mu <= other.mu
    }

    pub fn swapped(&self) -> CharPair {
        CharPair { lambda: self.mu, mu: self.lambda }
    }

    pub fn monomial(&self) -> Monomial {
        Monomial::new(self.lambda, self.mu)
    }
}

impl fmt::Display for CharPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lambda, self.mu)
    }
}

/// Characteristic pairs in increasing order. Empty for a smooth branch.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PairList {
    pairs: Vec<CharPair>,
}

impl PairList {
    /// Wraps pairs without checking them; use [`validate_pairs`] for untrusted input.
    pub fn from_raw(pairs: Vec<CharPair>) -> Self {
        PairList { pairs }
    }

    pub fn smooth() -> Self {
        PairList::default()
    }

    pub fn pairs(&self) -> &[CharPair] {
        &self.pairs
    }

    pub fn first(&self) -> Option<&CharPair> {
        self.pairs.first()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Least common denominator `n` of all entries.
    pub fn denominator(&self) -> i64 {
        common_denominator(self.pairs.iter().flat_map(|p| [&p.lambda, &p.mu]))
    }

    pub fn swapped(&self) -> PairList {
        PairList { pairs: self.pairs.iter().map(CharPair::swapped).collect() }
    }
}

impl fmt::Display for PairList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// Exponents of an integral "pair" absorbed into the coordinate `z`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct GhostMonomial {
    pub a: Frac,
    pub b: Frac,
    /// `x^a y^b` divides the leading coefficient (weighted), so it controls the invariant.
    pub dominant: bool,
}

impl GhostMonomial {
    pub fn monomial(&self) -> Monomial {
        Monomial::new(self.a, self.b)
    }
}

/// Row labels of the transformation table.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum BlowUpMove {
    /// Center `(x, z)`.
    MonoidalX,
    /// Center `(y, z)`.
    MonoidalY,
    QuadTransvX,
    QuadTransvY,
    QuadNonTransvX,
    QuadNonTransvY,
    QuadNonTransvZ,
}

impl BlowUpMove {
    pub fn name(&self) -> &'static str {
        match self {
            BlowUpMove::MonoidalX => "MonoidalX",
            BlowUpMove::MonoidalY => "MonoidalY",
            BlowUpMove::QuadTransvX => "QuadTransvX",
            BlowUpMove::QuadTransvY => "QuadTransvY",
            BlowUpMove::QuadNonTransvX => "QuadNonTransvX",
            BlowUpMove::QuadNonTransvY => "QuadNonTransvY",
            BlowUpMove::QuadNonTransvZ => "QuadNonTransvZ",
        }
    }

    pub const ALL: [BlowUpMove; 7] = [
        BlowUpMove::MonoidalX,
        BlowUpMove::MonoidalY,
        BlowUpMove::QuadTransvX,
        BlowUpMove::QuadTransvY,
        BlowUpMove::QuadNonTransvX,
        BlowUpMove::QuadNonTransvY,
        BlowUpMove::QuadNonTransvZ,
    ];
}

impl fmt::Display for BlowUpMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One of the two horizontal coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
}

/// Coordinate changes used while normalizing.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum NormalizationMove {
    /// `z -> z - p(x, y)`: an integral first pair is absorbed.
    AbsorbIntegral,
    /// Exchange `z` with the named coordinate.
    Invert(Axis),
    /// Exchange `x` and `y`.
    SwapXY,
}

/// Which condition of a normalized parametrization fails first.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NormalizationDefect {
    /// The first pair is fully integral.
    IntegralFirstPair,
    /// Non-transversal first pair with a zero entry.
    ZeroEntry,
    /// `(lambda_1, ..) < (mu_1, ..)` lexicographically.
    LexOrder,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Regime {
    Transversal,
    NonTransversal,
    Smooth,
}

/// Whether normalization may relabel `x` and `y`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Orientation {
    /// Apply every coordinate change, including `x <-> y`.
    Canonical,
    /// Keep `x` and `y` as they are; the lexicographic condition is only reported.
    Preserve,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Normalized {
    pub m: u32,
    pub pairs: PairList,
    pub ghost: Option<GhostMonomial>,
    pub moves: Vec<NormalizationMove>,
}

pub fn validate_pairs(pairs: Vec<CharPair>) -> Result<PairList> {
    for (index, p) in pairs.iter().enumerate() {
        if p.lambda.is_negative() || p.mu.is_negative() {
            return Err(Error::NegativeExponent { index });
        }
    }
    for (i, w) in pairs.windows(2).enumerate() {
        if !w[0].le(&w[1]) {
            return Err(Error::OrderViolation { index: i + 1 });
        }
    }
    Ok(PairList { pairs })
}

/// First failed condition of a normalized parametrization, or `None`.
pub fn is_normalized(_m: u32, pairs: &PairList) -> Option<NormalizationDefect> {
    let first = pairs.first()?;
    if first.is_integral() {
        return Some(NormalizationDefect::IntegralFirstPair);
    }
    if first.sum() < 1 && (first.lambda.is_zero() || first.mu.is_zero()) {
        return Some(NormalizationDefect::ZeroEntry);
    }
    let lambdas = pairs.pairs().iter().map(|p| p.lambda);
    let mus = pairs.pairs().iter().map(|p| p.mu);
    if lambdas.lt(mus) {
        return Some(NormalizationDefect::LexOrder);
    }
    None
}

pub fn classify(pairs: &PairList) -> Regime {
    match pairs.first() {
        None => Regime::Smooth,
        Some(p) if p.sum() < 1 => Regime::NonTransversal,
        Some(_) => Regime::Transversal,
    }
}

/// Order of `f` at the origin: `m * min(1, lambda_1 + mu_1)`.
pub fn multiplicity(m: u32, pairs: &PairList) -> Result<Frac> {
    let m = Frac::int(m as i64);
    let nu = match pairs.first() {
        None => m,
        Some(p) => m * p.sum().min(Frac::ONE),
    };
    if !nu.is_integer() || nu <= 0 {
        return Err(Error::NonIntegralMultiplicity(nu));
    }
    Ok(nu)
}

fn degree(value: Frac) -> Result<u32> {
    match value.to_integer() {
        Some(d) if d > 0 => Ok(d as u32),
        _ => Err(Error::NonIntegralDegree(value)),
    }
}

/// Applies one row of the transformation table to every pair.
///
/// The output is not normalized: an integral first pair must still be absorbed.
pub fn transform_pairs(m: u32, pairs: &PairList, mv: BlowUpMove) -> Result<(u32, PairList)> {
    let Some(&first) = pairs.first() else {
        return Err(Error::IllegalMove { mv: mv.name(), lambda: Frac::ZERO, mu: Frac::ZERO });
    };
    let (l1, m1) = (first.lambda, first.mu);
    let s1 = l1 + m1;
    let legal = match mv {
        BlowUpMove::MonoidalX => l1 >= 1,
        BlowUpMove::MonoidalY => m1 >= 1,
        BlowUpMove::QuadTransvX | BlowUpMove::QuadTransvY => s1 >= 1,
        BlowUpMove::QuadNonTransvX => s1 < 1 && !m1.is_zero(),
        BlowUpMove::QuadNonTransvY => s1 < 1 && !l1.is_zero(),
        BlowUpMove::QuadNonTransvZ => s1 < 1,
    };
    if !legal {
        return Err(Error::IllegalMove { mv: mv.name(), lambda: l1, mu: m1 });
    }

    let one = Frac::ONE;
    let two = Frac::int(2);
    let row = |p: &CharPair| -> CharPair {
        let (l, u) = (p.lambda, p.mu);
        match mv {
            BlowUpMove::MonoidalX => CharPair::new(l - 1, u),
            BlowUpMove::MonoidalY => CharPair::new(l, u - 1),
            BlowUpMove::QuadTransvX => CharPair::new(l + u - 1, u),
            BlowUpMove::QuadTransvY => CharPair::new(l, l + u - 1),
            BlowUpMove::QuadNonTransvX => CharPair::new(l + (one + u) * (one - l1) / m1 - two, (one + u) / m1 - one),
            BlowUpMove::QuadNonTransvY => CharPair::new((one + l) / l1 - one, u + (one + l) * (one - m1) / l1 - two),
            BlowUpMove::QuadNonTransvZ => {
                let d = one - l1 - m1;
                CharPair::new((l * (one - m1) + u * l1) / d, (l * m1 + u * (one - l1)) / d)
            }
        }
    };
    let out = pairs.pairs().iter().map(row).collect();

    let mf = Frac::int(m as i64);
    let new_m = match mv {
        BlowUpMove::QuadNonTransvX => degree(m1 * mf)?,
        BlowUpMove::QuadNonTransvY => degree(l1 * mf)?,
        BlowUpMove::QuadNonTransvZ => degree(mf - mf * s1)?,
        _ => m,
    };
    Ok((new_m, PairList::from_raw(out)))
}

/// Removes a fully integral first pair and returns it as a ghost monomial.
pub fn drop_integral_first(pairs: &PairList) -> Result<(PairList, Option<GhostMonomial>)> {
    let rest_check = |rest: &[CharPair], offset: usize| -> Result<()> {
        match rest.iter().position(CharPair::is_integral) {
            Some(i) => Err(Error::DeepIntegralPair { index: i + offset }),
            None => Ok(()),
        }
    };
    match pairs.pairs().split_first() {
        Some((first, rest)) if first.is_integral() => {
            rest_check(rest, 1)?;
            let dominant = rest.first().is_none_or(|next| first.le(next));
            let ghost = GhostMonomial { a: first.lambda, b: first.mu, dominant };
            Ok((PairList::from_raw(rest.to_vec()), Some(ghost)))
        }
        Some((_, rest)) => {
            rest_check(rest, 1)?;
            Ok((pairs.clone(), None))
        }
        None => Ok((pairs.clone(), None)),
    }
}

/// Exchanges `z` with `x` or `y` for a single pair `(0, mu)` or `(lambda, 0)`
/// with `lambda + mu < 1`: `z^m ~ y^{m mu}` becomes `z^{m mu} ~ y^m`.
pub fn invert(m: u32, pairs: &PairList) -> Result<(u32, PairList, Axis)> {
    if pairs.len() != 1 {
        return Err(Error::UnsupportedInversion { pairs: pairs.len() });
    }
    let p = pairs.pairs()[0];
    let mf = Frac::int(m as i64);
    let (axis, e) = if p.lambda.is_zero() { (Axis::Y, p.mu) } else { (Axis::X, p.lambda) };
    if e.is_zero() {
        return Err(Error::UnsupportedInversion { pairs: 1 });
    }
    let new_m = degree(mf * e)?;
    let pair = match axis {
        Axis::Y => CharPair::new(Frac::ZERO, e.recip()),
        Axis::X => CharPair::new(e.recip(), Frac::ZERO),
    };
    Ok((new_m, PairList::from_raw(vec![pair]), axis))
}

/// Brings `(m, pairs)` to normalized form.
///
/// With [`Orientation::Preserve`] the `x <-> y` exchange is never applied, so
/// coordinate labels stay aligned with the exceptional divisors.
pub fn normalize(m: u32, pairs: &PairList, orientation: Orientation) -> Result<Normalized> {
    if m == 0 {
        return Err(Error::ZeroDegree);
    }
    let mut m = m;
    let mut pairs = validate_pairs(pairs.pairs().to_vec())?;
    let mut ghost = None;
    let mut moves = Vec::new();
    loop {
        match is_normalized(m, &pairs) {
            Some(NormalizationDefect::IntegralFirstPair) => {
                let (rest, g) = drop_integral_first(&pairs)?;
                pairs = rest;
                ghost = g;
                moves.push(NormalizationMove::AbsorbIntegral);
            }
            Some(NormalizationDefect::ZeroEntry) => {
                let (new_m, inverted, axis) = invert(m, &pairs)?;
                m = new_m;
                pairs = inverted;
                moves.push(NormalizationMove::Invert(axis));
            }
            Some(NormalizationDefect::LexOrder) if orientation == Orientation::Canonical => {
                pairs = pairs.swapped();
                ghost = ghost.map(|g: GhostMonomial| GhostMonomial { a: g.b, b: g.a, ..g });
                moves.push(NormalizationMove::SwapXY);
            }
            _ => break,
        }
    }
    Ok(Normalized { m, pairs, ghost, moves })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: i64, d: i64) -> Frac {
        Frac::new(n, d)
    }

    fn pl(v: &[(i64, i64, i64, i64)]) -> PairList {
        PairList::from_raw(v.iter().map(|&(a, b, c, d)| CharPair::new(f(a, b), f(c, d))).collect())
    }

    #[test]
    fn validate_examples() {
        assert!(validate_pairs(pl(&[(2, 3, 4, 3)]).pairs().to_vec()).is_ok());
        assert!(validate_pairs(vec![]).is_ok());
        assert_eq!(
            validate_pairs(pl(&[(1, 2, 3, 4), (1, 3, 1, 1)]).pairs().to_vec()),
            Err(Error::OrderViolation { index: 1 })
        );
        assert_eq!(validate_pairs(pl(&[(-1, 2, 3, 4)]).pairs().to_vec()), Err(Error::NegativeExponent { index: 0 }));
    }

    #[test]
    fn normalized_predicate() {
        assert_eq!(is_normalized(3, &pl(&[(4, 3, 2, 3)])), None);
        assert_eq!(is_normalized(3, &pl(&[(1, 3, 2, 3)])), Some(NormalizationDefect::LexOrder));
        assert_eq!(is_normalized(3, &pl(&[(0, 1, 1, 3)])), Some(NormalizationDefect::ZeroEntry));
        assert_eq!(is_normalized(1, &pl(&[(2, 1, 5, 1)])), Some(NormalizationDefect::IntegralFirstPair));
        assert_eq!(is_normalized(1, &PairList::smooth()), None);
    }

    #[test]
    fn worked_example_pair_only_fails_the_lex_condition() {
        // (2/3, 4/3) is taken as given by the resolver; only x <-> y labelling is off.
        assert_eq!(is_normalized(3, &pl(&[(2, 3, 4, 3)])), Some(NormalizationDefect::LexOrder));
        let n = normalize(3, &pl(&[(2, 3, 4, 3)]), Orientation::Preserve).unwrap();
        assert_eq!((n.m, n.pairs, n.ghost), (3, pl(&[(2, 3, 4, 3)]), None));
        assert!(n.moves.is_empty());
    }

    #[test]
    fn normalize_examples() {
        let n = normalize(3, &pl(&[(0, 1, 1, 3)]), Orientation::Canonical).unwrap();
        assert_eq!(n.m, 1);
        assert!(n.pairs.is_empty());
        assert_eq!(n.ghost, Some(GhostMonomial { a: Frac::ZERO, b: Frac::int(3), dominant: true }));
        assert_eq!(n.moves, vec![NormalizationMove::Invert(Axis::Y), NormalizationMove::AbsorbIntegral]);

        let n = normalize(3, &pl(&[(1, 3, 2, 3)]), Orientation::Canonical).unwrap();
        assert_eq!((n.m, n.pairs), (3, pl(&[(2, 3, 1, 3)])));
        assert_eq!(n.moves, vec![NormalizationMove::SwapXY]);

        let n = normalize(3, &pl(&[(4, 3, 2, 3)]), Orientation::Canonical).unwrap();
        assert!(n.moves.is_empty());
    }

    #[test]
    fn inversion_of_a_singular_cylinder() {
        // z^5 ~ y^2 becomes z^2 ~ y^5
        let n = normalize(5, &pl(&[(0, 1, 2, 5)]), Orientation::Preserve).unwrap();
        assert_eq!((n.m, n.pairs.clone()), (2, pl(&[(0, 1, 5, 2)])));
        let n = normalize(5, &pl(&[(2, 5, 0, 1)]), Orientation::Preserve).unwrap();
        assert_eq!((n.m, n.pairs.clone()), (2, pl(&[(5, 2, 0, 1)])));
    }

    #[test]
    fn multi_pair_inversion_is_rejected() {
        let r = normalize(4, &pl(&[(0, 1, 1, 4), (0, 1, 3, 4)]), Orientation::Preserve);
        assert_eq!(r, Err(Error::UnsupportedInversion { pairs: 2 }));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&pl(&[(2, 3, 4, 3)])), Regime::Transversal);
        assert_eq!(classify(&pl(&[(1, 3, 1, 3)])), Regime::NonTransversal);
        assert_eq!(classify(&PairList::smooth()), Regime::Smooth);
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(multiplicity(3, &pl(&[(2, 3, 4, 3)])).unwrap(), Frac::int(3));
        assert_eq!(multiplicity(3, &pl(&[(1, 3, 1, 3)])).unwrap(), Frac::int(2));
        assert_eq!(multiplicity(1, &PairList::smooth()).unwrap(), Frac::ONE);
        assert!(matches!(multiplicity(2, &pl(&[(1, 3, 1, 3)])), Err(Error::NonIntegralMultiplicity(_))));
    }

    #[test]
    fn transform_examples() {
        assert_eq!(
            transform_pairs(3, &pl(&[(2, 3, 4, 3)]), BlowUpMove::QuadTransvX).unwrap(),
            (3, pl(&[(1, 1, 4, 3)]))
        );
        assert_eq!(transform_pairs(3, &pl(&[(1, 1, 4, 3)]), BlowUpMove::MonoidalX).unwrap(), (3, pl(&[(0, 1, 4, 3)])));
        assert_eq!(
            transform_pairs(8, &pl(&[(1, 2, 1, 4), (1, 2, 5, 8)]), BlowUpMove::QuadNonTransvX).unwrap(),
            (2, pl(&[(1, 1, 4, 1), (7, 4, 11, 2)]))
        );
        // z^4 + xy in the y-chart is y^2 (x + y^2 z^4): z + x^4 y^2 after x <-> z.
        assert_eq!(
            transform_pairs(4, &pl(&[(1, 4, 1, 4)]), BlowUpMove::QuadNonTransvY).unwrap(),
            (1, pl(&[(4, 1, 2, 1)]))
        );
        assert_eq!(
            transform_pairs(8, &pl(&[(1, 4, 1, 2), (5, 8, 1, 2)]), BlowUpMove::QuadNonTransvY).unwrap(),
            (2, pl(&[(4, 1, 1, 1), (11, 2, 7, 4)]))
        );
        assert_eq!(
            transform_pairs(3, &pl(&[(1, 3, 1, 3)]), BlowUpMove::QuadNonTransvZ).unwrap(),
            (1, pl(&[(1, 1, 1, 1)]))
        );
    }

    #[test]
    fn illegal_moves() {
        let p = pl(&[(2, 3, 4, 3)]);
        assert!(matches!(transform_pairs(3, &p, BlowUpMove::MonoidalX), Err(Error::IllegalMove { .. })));
        assert!(matches!(transform_pairs(3, &p, BlowUpMove::QuadNonTransvZ), Err(Error::IllegalMove { .. })));
        let q = pl(&[(1, 3, 1, 3)]);
        assert!(matches!(transform_pairs(3, &q, BlowUpMove::QuadTransvY), Err(Error::IllegalMove { .. })));
        assert!(matches!(transform_pairs(2, &q, BlowUpMove::QuadNonTransvX), Err(Error::NonIntegralDegree(_))));
    }

    #[test]
    fn drop_examples() {
        let (rest, g) = drop_integral_first(&pl(&[(1, 1, 4, 1), (7, 4, 11, 2)])).unwrap();
        assert_eq!(rest, pl(&[(7, 4, 11, 2)]));
        assert_eq!(g, Some(GhostMonomial { a: Frac::ONE, b: Frac::int(4), dominant: true }));

        let (rest, g) = drop_integral_first(&pl(&[(2, 3, 4, 3)])).unwrap();
        assert_eq!((rest, g), (pl(&[(2, 3, 4, 3)]), None));

        let (rest, g) = drop_integral_first(&pl(&[(2, 1, 5, 1)])).unwrap();
        assert!(rest.is_empty());
        assert_eq!(g, Some(GhostMonomial { a: Frac::int(2), b: Frac::int(5), dominant: true }));

        assert_eq!(drop_integral_first(&pl(&[(1, 2, 1, 2), (1, 1, 2, 1)])), Err(Error::DeepIntegralPair { index: 1 }));
    }

    #[test]
    fn denominator_is_lcm() {
        assert_eq!(pl(&[(1, 2, 1, 4), (1, 2, 5, 8)]).denominator(), 8);
        assert_eq!(PairList::smooth().denominator(), 1);
    }
}
