//! Recursive-descent parser for the expression grammar
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | base ('^' uint)?
//! base   := identifier | uint | '(' expr ')'
//! ```

use num_bigint::BigInt;

use super::{ExprError, RationalFunction, Var};

pub fn parse_expr(text: &str) -> Result<RationalFunction, ExprError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(value)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ExprError {
        ExprError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RationalFunction, ExprError> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction, ExprError> {
        let mut acc = self.factor()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let at = self.pos;
            let rhs = self.factor()?;
            acc = if op == b'*' {
                acc.mul(&rhs)
            } else {
                if rhs.is_zero() {
                    self.pos = at;
                    return Err(ExprError::DivisionByZero);
                }
                acc.div(&rhs)?
            };
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RationalFunction, ExprError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.factor()?.neg());
        }
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.uint()?;
            let e: u32 = e.try_into().map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<RationalFunction, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.uint()?;
                Ok(RationalFunction::constant(n.into()))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                Ok(RationalFunction::var(Var::new(name)?))
            }
            Some(_) => Err(self.error("expected a number, identifier or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn uint(&mut self) -> Result<BigInt, ExprError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an unsigned integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Ok(digits.parse().expect("digit string"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_unary_minus() {
        assert_eq!(parse_expr("1 + 2*3").unwrap(), RationalFunction::from_int(7));
        assert_eq!(parse_expr("-2^2").unwrap(), RationalFunction::from_int(-4));
        assert_eq!(parse_expr("2 - -3").unwrap(), RationalFunction::from_int(5));
        assert_eq!(parse_expr("12/4/3").unwrap(), RationalFunction::from_int(1));
        assert_eq!(parse_expr("(a)^3 / a^2").unwrap(), parse_expr("a").unwrap());
    }

    #[test]
    fn errors_carry_position() {
        assert_eq!(
            parse_expr("a + * b"),
            Err(ExprError::Syntax { pos: 4, msg: "expected a number, identifier or '('".into() })
        );
        assert!(matches!(parse_expr("(a + b"), Err(ExprError::Syntax { pos: 6, .. })));
        assert!(matches!(parse_expr("a b"), Err(ExprError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_expr(""), Err(ExprError::Syntax { pos: 0, .. })));
        assert!(matches!(parse_expr("x^y"), Err(ExprError::Syntax { .. })));
    }

    #[test]
    fn literal_division_by_zero() {
        assert_eq!(parse_expr("a/(b - b)"), Err(ExprError::DivisionByZero));
        assert_eq!(parse_expr("1/0"), Err(ExprError::DivisionByZero));
    }
}
