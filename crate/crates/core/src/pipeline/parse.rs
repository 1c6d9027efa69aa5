//! Recursive-descent parser for polynomial expressions in `x` and `y`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' UINT)?
//! atom   := UINT | 'x' | 'y' | '(' expr ')'
//! ```

use rug::Integer;

use crate::algebra::BivarPolyZ;
use crate::error::{Error, Result};

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { chars: src.chars().enumerate().map(|(i, c)| (i + 1, c)).collect(), pos: 0, src }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn column(&self) -> usize {
        self.chars.get(self.pos).map_or(self.src.chars().count() + 1, |&(col, _)| col)
    }

    fn error<T>(&mut self, message: impl Into<String>) -> Result<T> {
        self.skip_ws();
        Err(Error::Parse { column: self.column(), message: message.into() })
    }

    fn expr(&mut self) -> Result<BivarPolyZ> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BivarPolyZ> {
        let mut acc = self.unary()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<BivarPolyZ> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<BivarPolyZ> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
            return self.error("expected a nonnegative integer exponent");
        }
        let col = self.column();
        let e = self.integer()?;
        let Some(e) = e.to_usize().filter(|&e| e <= 1 << 16) else {
            return Err(Error::Parse { column: col, message: "exponent too large".into() });
        };
        Ok(base.pow(e))
    }

    fn integer(&mut self) -> Result<Integer> {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        Integer::from_str_radix(&digits, 10)
            .map_err(|_| Error::Parse { column: self.chars[start].0, message: "invalid integer".into() })
    }

    fn atom(&mut self) -> Result<BivarPolyZ> {
        match self.peek() {
            Some('x') => {
                self.pos += 1;
                Ok(BivarPolyZ::x())
            }
            Some('y') => {
                self.pos += 1;
                Ok(BivarPolyZ::y())
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return self.error("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => Ok(BivarPolyZ::constant(self.integer()?)),
            Some(c) => self.error(format!("unexpected '{c}', expected a number, 'x', 'y' or '('")),
            None => self.error("unexpected end of input"),
        }
    }
}

/// Parses and expands a polynomial expression. Columns in errors are
/// 1-based character positions.
pub fn parse_poly(text: &str) -> Result<BivarPolyZ> {
    let mut p = Parser::new(text);
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.error("expected an operator or end of input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple() {
        let f = parse_poly("x*y - 2").unwrap();
        assert_eq!(f, BivarPolyZ::from_i64_terms(&[(1, 1, 1), (0, 0, -2)]));
    }

    #[test]
    fn product_expands() {
        let f = parse_poly("(x^2+y^2-1)*(x*y-2)").unwrap();
        let g = BivarPolyZ::from_i64_terms(&[
            (3, 1, 1),
            (1, 3, 1),
            (1, 1, -1),
            (2, 0, -2),
            (0, 2, -2),
            (0, 0, 2),
        ]);
        assert_eq!(f, g);
        assert_eq!(f.terms().len(), 6);
    }

    #[test]
    fn double_star_is_rejected() {
        assert_eq!(
            parse_poly("x**2"),
            Err(Error::Parse {
                column: 3,
                message: "unexpected '*', expected a number, 'x', 'y' or '('".into()
            })
        );
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        assert_eq!(parse_poly("-x^2").unwrap(), BivarPolyZ::from_i64_terms(&[(2, 0, -1)]));
        assert_eq!(parse_poly("2*-y").unwrap(), BivarPolyZ::from_i64_terms(&[(0, 1, -2)]));
    }

    #[test]
    fn errors_carry_columns() {
        assert!(matches!(parse_poly("x^y"), Err(Error::Parse { column: 3, .. })));
        assert!(matches!(parse_poly("(x+1"), Err(Error::Parse { column: 5, .. })));
        assert!(matches!(parse_poly("x z"), Err(Error::Parse { column: 3, .. })));
        assert!(matches!(parse_poly(""), Err(Error::Parse { column: 1, .. })));
    }

    #[test]
    fn big_literals() {
        let f = parse_poly("123456789012345678901234567890*x").unwrap();
        assert_eq!(f.coeff(1, 0).to_string(), "123456789012345678901234567890");
    }
}
