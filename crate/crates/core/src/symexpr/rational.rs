use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::fmt_rational;
use super::{gcd, parse_expr, ExprError, Polynomial, Var};

/// A quotient of polynomials in canonical form.
///
/// The numerator and denominator are coprime; the denominator has coprime
/// integer coefficients and a positive leading coefficient. Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl RationalFunction {
    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(Polynomial::from_int(c))
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(Polynomial::var(v))
    }

    /// A fresh variable by name. Panics on a non-identifier; use
    /// [`Var::new`] for fallible construction.
    pub fn named(name: &str) -> Self {
        Self::var(Var::new(name).expect("valid identifier"))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction { num: p, den: Polynomial::one() }
    }

    /// Builds `num / den` in canonical form.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, ExprError> {
        if den.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        let g = gcd(&num, &den);
        if g.is_one() {
            Ok(Self::fix_units(num, den))
        } else {
            let num = num.div_exact(&g).expect("gcd divides numerator");
            let den = den.div_exact(&g).expect("gcd divides denominator");
            Ok(Self::fix_units(num, den))
        }
    }

    /// Normalizes the unit factor of an already reduced quotient.
    fn fix_units(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let mut c = den.rational_content();
        if den.leading_coeff().is_some_and(|lc| lc.is_negative()) {
            c = -c;
        }
        if c == BigRational::from_integer(1.into()) {
            RationalFunction { num, den }
        } else {
            let inv = c.recip();
            RationalFunction { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Constant value if this function is a constant.
    pub fn constant_value(&self) -> Option<BigRational> {
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        Some(n / d)
    }

    /// True iff the denominator is a single monomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_monomial()
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_signed(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_signed(other, true)
    }

    fn add_signed(&self, other: &Self, negate: bool) -> Self {
        let rhs_num = if negate { -&other.num } else { other.num.clone() };
        if self.is_zero() {
            return RationalFunction { num: rhs_num, den: other.den.clone() };
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::new(&self.num + &rhs_num, self.den.clone()).expect("nonzero denominator");
        }
        // With g = gcd(d1, d2), the numerator n1*(d2/g) + n2*(d1/g) is already
        // coprime to (d1/g)*(d2/g); only a common factor with g can remain.
        let g = gcd(&self.den, &other.den);
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = other.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &d2) + &(&rhs_num * &d1);
        if num.is_zero() {
            return Self::zero();
        }
        let h = gcd(&num, &g);
        let (num, g) = if h.is_one() {
            (num, g)
        } else {
            (num.div_exact(&h).expect("gcd divides"), g.div_exact(&h).expect("gcd divides"))
        };
        let den = &(&d1 * &d2) * &g;
        Self::fix_units(num, den)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = other.den.div_exact(&g1).expect("gcd divides");
        let n2 = other.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        Self::fix_units(&n1 * &n2, &d1 * &d2)
    }

    pub fn inverse(&self) -> Result<Self, ExprError> {
        if self.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        Ok(Self::fix_units(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self, ExprError> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }

    pub fn pow(&self, e: u32) -> Self {
        RationalFunction { num: self.num.pow(e), den: self.den.pow(e) }
    }

    pub fn arith(op: ArithOp, f: &Self, g: &Self) -> Result<Self, ExprError> {
        Ok(match op {
            ArithOp::Add => f.add(g),
            ArithOp::Sub => f.sub(g),
            ArithOp::Mul => f.mul(g),
            ArithOp::Div => f.div(g)?,
        })
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, assignment: &HashMap<Var, BigRational>) -> Result<BigRational, ExprError> {
        let n = self.num.eval_rational(assignment)?;
        let d = self.den.eval_rational(assignment)?;
        if d.is_zero() {
            return Err(ExprError::DenominatorVanishes);
        }
        Ok(n / d)
    }

    /// Floating-point evaluation. Only an exactly zero denominator is
    /// reported as vanishing.
    pub fn eval_f64(&self, assignment: &HashMap<Var, f64>) -> Result<f64, ExprError> {
        let n = self.num.eval_f64(assignment)?;
        let d = self.den.eval_f64(assignment)?;
        if d == 0.0 {
            return Err(ExprError::DenominatorVanishes);
        }
        Ok(n / d)
    }

    /// Substitutes rational functions for variables.
    pub fn substitute(&self, map: &HashMap<Var, RationalFunction>) -> Result<Self, ExprError> {
        let sub_poly = |p: &Polynomial| -> RationalFunction {
            let mut acc = RationalFunction::zero();
            for (m, c) in p.terms() {
                let mut t = RationalFunction::constant(c.clone());
                for (v, e) in m.factors() {
                    let base = map.get(v).cloned().unwrap_or_else(|| RationalFunction::var(v.clone()));
                    t = t.mul(&base.pow(*e));
                }
                acc = acc.add(&t);
            }
            acc
        };
        sub_poly(&self.num).div(&sub_poly(&self.den))
    }
}

fn needs_parens_as_factor(p: &Polynomial) -> bool {
    if p.num_terms() != 1 {
        return true;
    }
    let (m, c) = p.leading_term().unwrap();
    let simple_coeff = c.is_integer() && !c.is_negative();
    if m.is_one() {
        !simple_coeff
    } else {
        !(c == &BigRational::from_integer(1.into()) && m.factors().len() == 1)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let num_simple = self.num.num_terms() == 1
            && self.num.leading_coeff().is_some_and(|c| c.is_integer());
        if num_simple {
            write!(f, "{}", self.num)?;
        } else {
            write!(f, "({})", self.num)?;
        }
        if needs_parens_as_factor(&self.den) {
            write!(f, "/({})", self.den)
        } else if let Some(c) = self.den.constant_value() {
            write!(f, "/{}", fmt_rational(&c))
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl FromStr for RationalFunction {
    type Err = ExprError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expr(s)
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_expr(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RationalFunction {
        parse_expr(s).unwrap()
    }

    #[test]
    fn ptolemy_expression_canonical_text() {
        let f = rf("(a*c + b*d)/x");
        assert_eq!(f.numerator(), rf("a*c + b*d").numerator());
        assert_eq!(f.denominator(), rf("x").numerator());
        assert_eq!(f.to_string(), "(a*c + b*d)/x");
    }

    #[test]
    fn zero_has_unit_denominator() {
        let z = rf("0");
        assert!(z.is_zero());
        assert!(z.denominator().is_one());
        assert_eq!(z.to_string(), "0");
        assert_eq!(rf("a - a"), z);
    }

    #[test]
    fn cancellation() {
        let f = rf("(x^2 - 1)/(x - 1)");
        assert!(f.denominator().is_one());
        assert_eq!(f.to_string(), "x + 1");
    }

    #[test]
    fn arith_examples() {
        assert_eq!(rf("a/x").add(&rf("b/x")), rf("(a+b)/x"));
        let ptolemy = rf("a*c").add(&rf("b*d")).div(&rf("x")).unwrap();
        assert_eq!(ptolemy, rf("(a*c + b*d)/x"));
        let f = rf("(a+b)/c");
        assert!(f.mul(&rf("1").div(&f).unwrap()).is_one());
        assert_eq!(RationalFunction::arith(ArithOp::Div, &f, &RationalFunction::zero()), Err(ExprError::DivisionByZero));
    }

    #[test]
    fn denominator_sign_and_content() {
        let f = rf("a/(-2*b - 4)");
        assert_eq!(f.denominator(), rf("b + 2").numerator());
        assert_eq!(f.numerator(), rf("-1/2*a").numerator());
        assert_eq!(rf("(-a)/(-b)"), rf("a/b"));
    }

    #[test]
    fn laurent_predicate() {
        assert!(rf("(a*c + b*d)/x").is_laurent());
        assert!(!rf("(a+b)/(c+d)").is_laurent());
        assert!(rf("5").is_laurent());
        assert!(rf("3/(2*x^2*y)").is_laurent());
    }

    #[test]
    fn evaluation() {
        let f = rf("(a*c + b*d)/x");
        let ones: HashMap<Var, f64> = ["a", "b", "c", "d", "x"].iter().map(|n| (Var::new(n).unwrap(), 1.0)).collect();
        assert_eq!(f.eval_f64(&ones).unwrap(), 2.0);
        let pt: HashMap<Var, BigRational> = [("a", 3), ("b", 1), ("c", 1), ("d", 5), ("x", 2)]
            .iter()
            .map(|(n, v)| (Var::new(n).unwrap(), BigRational::from_integer((*v).into())))
            .collect();
        assert_eq!(f.eval_rational(&pt).unwrap(), BigRational::from_integer(4.into()));

        let g = rf("1/(a - b)");
        let one = BigRational::from_integer(1.into());
        let pt: HashMap<Var, BigRational> = [("a", one.clone()), ("b", one)].into_iter().map(|(n, v)| (Var::new(n).unwrap(), v)).collect();
        assert_eq!(g.eval_rational(&pt), Err(ExprError::DenominatorVanishes));
        assert!(matches!(f.eval_rational(&pt), Err(ExprError::Unbound(_))));
    }

    #[test]
    fn display_forms() {
        assert_eq!(rf("x + 1").to_string(), "x + 1");
        assert_eq!(rf("a/(x*y)").to_string(), "a/(x*y)");
        assert_eq!(rf("a/2").to_string(), "1/2*a");
        assert_eq!(rf("-a/x^2").to_string(), "-a/x^2");
        assert_eq!(rf("(2*a)/(3*x)").to_string(), "(2/3*a)/x");
    }
}
