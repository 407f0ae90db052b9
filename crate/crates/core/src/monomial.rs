use std::fmt;

use serde::{Deserialize, Serialize};

use crate::frac::Frac;

/// A fractional monomial `x^x y^y` with nonnegative exponents.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
pub struct Monomial {
    pub x: Frac,
    pub y: Frac,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: Frac::ZERO, y: Frac::ZERO };

    pub fn new(x: Frac, y: Frac) -> Self {
        Monomial { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Monomial { x: Frac::int(x), y: Frac::int(y) }
    }

    pub fn degree(&self) -> Frac {
        self.x + self.y
    }

    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    pub fn is_one(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Componentwise `self <= other`, i.e. `self | other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.x <= other.x && self.y <= other.y
    }

    pub fn scale(&self, k: Frac) -> Monomial {
        Monomial { x: self.x * k, y: self.y * k }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn factor(f: &mut fmt::Formatter<'_>, var: char, e: Frac) -> fmt::Result {
            if e == 1 {
                write!(f, "{var}")
            } else if e.is_integer() {
                write!(f, "{var}^{e}")
            } else {
                write!(f, "{var}^({e})")
            }
        }
        if self.is_one() {
            return write!(f, "1");
        }
        if !self.x.is_zero() {
            factor(f, 'x', self.x)?;
        }
        if !self.y.is_zero() {
            factor(f, 'y', self.y)?;
        }
        Ok(())
    }
}
