//! Exact multivariate polynomials and rational functions over the rationals.
//!
//! Everything here is exact: coefficients are [`BigRational`]s and every
//! [`RationalFunction`] is kept in a canonical form, so structural equality
//! coincides with equality in the field of fractions.
//!
//! Monomials are ordered lexicographically, with variables ranked by their
//! names (`a` outranks `b`).

mod gcd;
mod monomial;
mod parse;
mod poly;
mod rational;

use std::fmt;
use std::sync::Arc;

pub use gcd::gcd;
pub use monomial::Monomial;
pub use num_rational::BigRational;
pub use parse::parse_expr;
pub use poly::Polynomial;
pub use rational::{ArithOp, RationalFunction};

use thiserror::Error;

/// A named indeterminate.
///
/// Variables compare by name; the name order is the global variable order
/// used by the monomial ordering.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    /// Creates a variable, checking that `name` is an ASCII identifier.
    pub fn new(name: &str) -> Result<Self, ExprError> {
        if is_identifier(name) {
            Ok(Var(Arc::from(name)))
        } else {
            Err(ExprError::BadVariable(name.to_string()))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("variable `{0}` has no value in the assignment")]
    Unbound(String),
    #[error("denominator vanishes at the given assignment")]
    DenominatorVanishes,
    #[error("invalid variable name `{0}`")]
    BadVariable(String),
}
