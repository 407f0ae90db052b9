//! Canonical embedded resolution of quasi-ordinary surface singularities,
//! driven entirely by characteristic pairs and exact rational arithmetic.

pub mod cli;
pub mod divisor;
pub mod driver;
pub mod error;
pub mod frac;
pub mod invariant;
pub mod monomial;
pub mod oracle;
pub mod pairs;

pub use error::{Error, Result};
pub use frac::Frac;
