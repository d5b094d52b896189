//! Recursive-descent parser for the hyperreal expression grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := 'e' | integer | '(' expr ')'
//! ```
//!
//! `/` is exact field division, so `1/4` and `1/(1+e)` need no special cases.

use num_bigint::BigInt;

use super::{Hyperreal, HyperrealError};
use crate::rational::Rational;

pub(super) fn parse(input: &str) -> Result<Hyperreal, HyperrealError> {
    let mut p = Parser {
        chars: input.chars().collect(),
        pos: 0,
    };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(err(format!(
            "unexpected trailing input at position {}",
            p.pos
        )));
    }
    Ok(value)
}

fn err(msg: impl Into<String>) -> HyperrealError {
    HyperrealError::Parse(msg.into())
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.peek().map(|c| c.is_whitespace()).unwrap_or(false) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Hyperreal, HyperrealError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Hyperreal, HyperrealError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let rhs = self.unary()?;
                acc = acc.checked_div(&rhs)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Hyperreal, HyperrealError> {
        if self.eat('-') {
            Ok(-self.unary()?)
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Hyperreal, HyperrealError> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let k = self.integer()?;
            let k: u32 = k
                .try_into()
                .map_err(|_| err("exponent out of range (expected a small non-negative integer)"))?;
            Ok(base.pow(k))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Hyperreal, HyperrealError> {
        self.skip_ws();
        match self.peek() {
            Some('e') => {
                self.pos += 1;
                Ok(Hyperreal::epsilon())
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(err("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Hyperreal::from_rational(Rational::from_integer(n)))
            }
            Some(c) => Err(err(format!("unexpected character '{c}'"))),
            None => Err(err("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<BigInt, HyperrealError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(err("expected an integer"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse().map_err(|e| err(format!("bad integer: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_precedence() {
        let v: Hyperreal = "1 + 2*e^2".parse().unwrap();
        assert_eq!(v, &Hyperreal::one() + &(Hyperreal::from(2) * Hyperreal::eps_pow(2)));
    }

    #[test]
    fn division_binds_tighter_than_addition() {
        let v: Hyperreal = "1/4 + e".parse().unwrap();
        assert_eq!(v, &Hyperreal::from_ratio(1, 4) + &Hyperreal::epsilon());
    }

    #[test]
    fn rejects_garbage() {
        assert!("1 +".parse::<Hyperreal>().is_err());
        assert!("(1".parse::<Hyperreal>().is_err());
        assert!("x".parse::<Hyperreal>().is_err());
        assert!("1/0".parse::<Hyperreal>().is_err());
        assert!("1 2".parse::<Hyperreal>().is_err());
    }
}
