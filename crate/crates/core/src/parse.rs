//! Recursive-descent parser for generator expressions.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' ['-'] int)?
//! atom   := generator | int | 'q' | 's' | 'A' | '(' expr ')'
//! ```
//!
//! `s` is `q^{1/2}` and `A` is `q + q^-1`. Generators are `t` followed by a
//! strictly increasing digit string, or `t0` for the full set.

use thiserror::Error;

use crate::algebra::{GenPolynomial, Generator};
use crate::scalar::LaurentScalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("generator at {pos}: indices must be strictly increasing")]
    NonIncreasing { pos: usize },
    #[error("generator at {pos}: puncture {index} out of range 1..{n}")]
    OutOfRange { pos: usize, index: u32, n: usize },
    #[error("generator at {pos}: empty puncture set")]
    EmptySubset { pos: usize },
    #[error("exponent at {pos}: expected an integer")]
    NonIntegerExponent { pos: usize },
    #[error("exponent at {pos}: negative power of a non-unit")]
    NonUnitPower { pos: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match *self {
            ParseError::Syntax { pos, .. }
            | ParseError::NonIncreasing { pos }
            | ParseError::OutOfRange { pos, .. }
            | ParseError::EmptySubset { pos }
            | ParseError::NonIntegerExponent { pos }
            | ParseError::NonUnitPower { pos } => pos,
        }
    }
}

/// Parses an expression over the generators for `n` punctures.
pub fn parse_expression(src: &str, n: usize) -> Result<GenPolynomial, ParseError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, n };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax(format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn syntax(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn expr(&mut self) -> Result<GenPolynomial, ParseError> {
        let mut acc = if self.peek() == Some(b'-') {
            self.pos += 1;
            -self.term()?
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<GenPolynomial, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc * self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<GenPolynomial, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let at = {
            self.skip_ws();
            self.pos
        };
        let neg = if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let followed_by_fraction = matches!(self.src.get(self.pos), Some(b'.') | Some(b'/'));
        if digits.is_empty() || followed_by_fraction {
            return Err(ParseError::NonIntegerExponent { pos: at });
        }
        let e: i64 = digits.parse().map_err(|_| ParseError::NonIntegerExponent { pos: at })?;
        let e = if neg { -e } else { e };
        if e >= 0 {
            let mut out = GenPolynomial::one();
            for _ in 0..e {
                out = &out * &base;
            }
            return Ok(out);
        }
        match base.as_term() {
            Some((m, c)) if m.is_empty() => {
                let inv = c.pow(e).ok_or(ParseError::NonUnitPower { pos: at })?;
                Ok(GenPolynomial::scalar(inv))
            }
            _ => Err(ParseError::NonUnitPower { pos: at }),
        }
    }

    fn atom(&mut self) -> Result<GenPolynomial, ParseError> {
        let c = match self.peek() {
            Some(c) => c,
            None => return Err(self.syntax("unexpected end of input")),
        };
        match c {
            b'(' => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            b't' => self.generator(),
            b'q' => {
                self.pos += 1;
                Ok(GenPolynomial::scalar(LaurentScalar::q()))
            }
            b's' => {
                self.pos += 1;
                Ok(GenPolynomial::scalar(LaurentScalar::s()))
            }
            b'A' => {
                self.pos += 1;
                Ok(GenPolynomial::scalar(LaurentScalar::alpha()))
            }
            b'0'..=b'9' => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let v: num_bigint::BigInt = std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap();
                Ok(GenPolynomial::scalar(LaurentScalar::from_int(v)))
            }
            other => Err(self.syntax(format!("unexpected '{}'", other as char))),
        }
    }

    fn generator(&mut self) -> Result<GenPolynomial, ParseError> {
        let at = self.pos;
        self.pos += 1;
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphabetic() || self.src[self.pos] == b'_') {
            return Err(self.syntax("malformed generator name"));
        }
        let digits: Vec<u32> = self.src[start..self.pos].iter().map(|b| (b - b'0') as u32).collect();
        if digits.is_empty() {
            return Err(ParseError::EmptySubset { pos: at });
        }
        if digits == [0] {
            return Ok(GenPolynomial::generator(Generator::full(self.n)));
        }
        for &d in &digits {
            if d == 0 || d as usize > self.n {
                return Err(ParseError::OutOfRange { pos: at, index: d, n: self.n });
            }
        }
        if digits.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ParseError::NonIncreasing { pos: at });
        }
        let ps: Vec<u8> = digits.iter().map(|&d| d as u8).collect();
        Ok(GenPolynomial::generator(Generator::new(&ps).expect("checked subset")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> GenPolynomial {
        parse_expression(s, 4).unwrap()
    }

    #[test]
    fn spec_examples() {
        let e = p("t12*t23 - q*t13");
        assert_eq!(e.len(), 2);
        assert_eq!(e, GenPolynomial::gens(&[12, 23]) - GenPolynomial::gens(&[13]).scale(&LaurentScalar::q()));
        assert_eq!(p("A*t0"), GenPolynomial::gens(&[1234]).scale(&LaurentScalar::alpha()));
        assert_eq!(p("s^2"), GenPolynomial::scalar(LaurentScalar::q()));
    }

    #[test]
    fn powers_and_parens() {
        assert_eq!(p("t12^2"), GenPolynomial::gens(&[12, 12]));
        assert_eq!(p("q^-1"), GenPolynomial::scalar(LaurentScalar::qbar()));
        assert_eq!(p("(q - q^-1)^2"), p("q^2 - 2 + q^-2"));
        assert_eq!(p("-t1 + t1"), GenPolynomial::zero());
        assert_eq!(p(" t1 * ( t2 + 3 ) "), p("t1*t2 + 3*t1"));
        assert_eq!(p("t0^0"), GenPolynomial::one());
    }

    #[test]
    fn distinct_diagnostics() {
        let e = |s: &str| parse_expression(s, 4).unwrap_err();
        assert!(matches!(e("t21"), ParseError::NonIncreasing { pos: 0 }));
        assert!(matches!(e("t5"), ParseError::OutOfRange { index: 5, .. }));
        assert!(matches!(e("1 + t"), ParseError::EmptySubset { pos: 4 }));
        assert!(matches!(e("q^1.5"), ParseError::NonIntegerExponent { .. }));
        assert!(matches!(e("q^x"), ParseError::NonIntegerExponent { .. }));
        assert!(matches!(e("t12 +"), ParseError::Syntax { .. }));
        assert!(matches!(e("(t12"), ParseError::Syntax { .. }));
        assert!(matches!(e("t12^-1"), ParseError::NonUnitPower { .. }));
        assert!(matches!(e("t12 t23"), ParseError::Syntax { pos: 4, .. }));
    }

    #[test]
    fn wider_puncture_range() {
        assert!(parse_expression("t15", 5).is_ok());
        assert_eq!(parse_expression("t0", 5).unwrap(), GenPolynomial::generator(Generator::full(5)));
    }

    #[test]
    fn print_round_trip() {
        for s in ["q*t23*t12 - q^-1*t12*t23", "(q^2 - q^-2)*t13 + (q - q^-1)*(t1*t3 + t2*t123)", "-s^3*t0^2 + 7", "A^2*t0"] {
            let e = p(s);
            assert_eq!(p(&e.to_string()), e, "{}", e);
        }
    }
}
