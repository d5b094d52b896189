//! Exact arithmetic in an ordered field extending the rationals with one
//! positive infinitesimal `e`.
//!
//! A value is a ratio of polynomials in `e` over the rationals, kept in
//! canonical form: numerator and denominator coprime as polynomials, and the
//! denominator's lowest-order coefficient equal to one. The order is the
//! unique field order in which `e` is positive but below every positive
//! rational; concretely, the sign of a value is the sign of its numerator's
//! lowest-order coefficient.
//!
//! The textual grammar (used by [`std::fmt::Display`] and [`std::str::FromStr`])
//! is ordinary arithmetic notation over integer literals and the symbol `e`,
//! with `+ - * / ^` and parentheses, e.g. `(1/4)*e^3 + e^5` or `1/(1+e)`.

mod parse;
mod poly;

pub use poly::EpsPoly;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum HyperrealError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("valuation of zero is undefined")]
    ZeroValuation,
    #[error("standard part of an unlimited value is undefined")]
    Unlimited,
    #[error("parse error: {0}")]
    Parse(String),
}

/// An element of the field of rational functions in the infinitesimal `e`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hyperreal {
    num: EpsPoly,
    den: EpsPoly,
}

impl Hyperreal {
    /// Canonicalizing constructor. Errors when `den` is the zero polynomial.
    pub fn new(num: EpsPoly, den: EpsPoly) -> Result<Hyperreal, HyperrealError> {
        if den.is_zero() {
            return Err(HyperrealError::DivisionByZero);
        }
        Ok(Hyperreal::reduce(num, den))
    }

    fn reduce(num: EpsPoly, den: EpsPoly) -> Hyperreal {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Hyperreal {
                num: EpsPoly::zero(),
                den: EpsPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num.div_exact(&g), den.div_exact(&g));
        let low = den.low_coeff().expect("nonzero denominator").clone();
        if !low.is_one() {
            let inv = Rational::one() / low;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Hyperreal { num, den }
    }

    pub fn zero() -> Hyperreal {
        Hyperreal {
            num: EpsPoly::zero(),
            den: EpsPoly::one(),
        }
    }

    pub fn one() -> Hyperreal {
        Hyperreal {
            num: EpsPoly::one(),
            den: EpsPoly::one(),
        }
    }

    /// The positive infinitesimal `e`.
    pub fn epsilon() -> Hyperreal {
        Hyperreal::eps_pow(1)
    }

    /// `e^k`.
    pub fn eps_pow(k: u32) -> Hyperreal {
        Hyperreal {
            num: EpsPoly::monomial(k, Rational::one()),
            den: EpsPoly::one(),
        }
    }

    pub fn from_rational(q: Rational) -> Hyperreal {
        Hyperreal {
            num: EpsPoly::constant(q),
            den: EpsPoly::one(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Hyperreal {
        assert!(den != 0, "zero denominator");
        Hyperreal::from_rational(crate::rational::rat(num, den))
    }

    pub fn numerator(&self) -> &EpsPoly {
        &self.num
    }

    pub fn denominator(&self) -> &EpsPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Sign of the value in the field order: -1, 0 or +1.
    pub fn sign(&self) -> i32 {
        match self.num.low_coeff() {
            None => 0,
            // Canonical form keeps the denominator's low coefficient at +1,
            // so the numerator's low coefficient carries the sign.
            Some(c) => {
                if c.is_positive() {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    /// Order of magnitude in `e`: the lowest exponent of the numerator minus
    /// that of the denominator. Undefined for zero.
    pub fn valuation(&self) -> Result<i64, HyperrealError> {
        let vn = self.num.low_exponent().ok_or(HyperrealError::ZeroValuation)?;
        let vd = self.den.low_exponent().expect("nonzero denominator");
        Ok(vn as i64 - vd as i64)
    }

    /// A value is limited when it is zero or of non-negative valuation, i.e.
    /// bounded by some standard natural number.
    pub fn is_limited(&self) -> bool {
        self.is_zero() || self.valuation().expect("nonzero") >= 0
    }

    /// The standard part: the unique real (here rational) infinitely close to
    /// a limited value. Errors on unlimited input.
    pub fn st(&self) -> Result<Rational, HyperrealError> {
        if self.is_zero() {
            return Ok(Rational::zero());
        }
        match self.valuation().expect("nonzero") {
            v if v > 0 => Ok(Rational::zero()),
            0 => {
                let vd = self.den.low_exponent().expect("nonzero denominator");
                Ok(self.num.coeff_at(vd) / self.den.coeff_at(vd))
            }
            _ => Err(HyperrealError::Unlimited),
        }
    }

    /// Leading `(valuation, coefficient)` pair; `None` for zero. The value is
    /// infinitely close to `coefficient * e^valuation` relative to its own
    /// magnitude.
    pub fn leading_term(&self) -> Option<(i64, Rational)> {
        let v = self.valuation().ok()?;
        let c = self.num.low_coeff().expect("nonzero").clone()
            / self.den.low_coeff().expect("nonzero denominator").clone();
        Some((v, c))
    }

    pub fn checked_div(&self, other: &Hyperreal) -> Result<Hyperreal, HyperrealError> {
        if other.is_zero() {
            return Err(HyperrealError::DivisionByZero);
        }
        Ok(Hyperreal::reduce(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        ))
    }

    pub fn pow(&self, k: u32) -> Hyperreal {
        let mut acc = Hyperreal::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact evaluation at a rational substitution `e := x`. Errors when the
    /// denominator vanishes at `x`.
    pub fn eval_at(&self, x: &Rational) -> Result<Rational, HyperrealError> {
        let d = self.den.eval_at(x);
        if d.is_zero() {
            return Err(HyperrealError::DivisionByZero);
        }
        Ok(self.num.eval_at(x) / d)
    }

    /// Renders with a custom symbol in place of `e`, e.g. `g` for odds tables.
    pub fn to_string_with_symbol(&self, symbol: char) -> String {
        let mut s = String::new();
        self.fmt_with_symbol(&mut s, symbol).expect("string write");
        s
    }

    fn fmt_with_symbol(&self, out: &mut impl fmt::Write, symbol: char) -> fmt::Result {
        if self.den == EpsPoly::one() {
            return write_poly(out, &self.num, symbol);
        }
        // numerator
        if self.num.terms().len() > 1 {
            out.write_char('(')?;
            write_poly(out, &self.num, symbol)?;
            out.write_char(')')?;
        } else {
            write_poly(out, &self.num, symbol)?;
        }
        out.write_char('/')?;
        // denominator: in canonical form a single term is a plain power of e
        if self.den.terms().len() > 1 {
            out.write_char('(')?;
            write_poly(out, &self.den, symbol)?;
            out.write_char(')')?;
        } else {
            write_poly(out, &self.den, symbol)?;
        }
        Ok(())
    }
}

fn write_poly(out: &mut impl fmt::Write, p: &EpsPoly, symbol: char) -> fmt::Result {
    if p.is_zero() {
        return out.write_char('0');
    }
    for (i, (k, c)) in p.terms().iter().enumerate() {
        let mag = c.abs();
        if i == 0 {
            if c.is_negative() {
                out.write_char('-')?;
            }
        } else if c.is_negative() {
            out.write_str(" - ")?;
        } else {
            out.write_str(" + ")?;
        }
        write_term(out, &mag, *k, symbol)?;
    }
    Ok(())
}

fn write_term(out: &mut impl fmt::Write, mag: &Rational, k: u32, symbol: char) -> fmt::Result {
    if k == 0 {
        return write!(out, "{mag}");
    }
    if !mag.is_one() {
        if mag.denom().is_one() {
            write!(out, "{mag}*")?;
        } else {
            write!(out, "({mag})*")?;
        }
    }
    if k == 1 {
        out.write_char(symbol)
    } else {
        write!(out, "{symbol}^{k}")
    }
}

impl fmt::Display for Hyperreal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with_symbol(f, 'e')
    }
}

impl FromStr for Hyperreal {
    type Err = HyperrealError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse::parse(s)
    }
}

impl From<Rational> for Hyperreal {
    fn from(q: Rational) -> Self {
        Hyperreal::from_rational(q)
    }
}

impl From<i64> for Hyperreal {
    fn from(n: i64) -> Self {
        Hyperreal::from_rational(Rational::from_integer(n.into()))
    }
}

impl PartialOrd for Hyperreal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Hyperreal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self - other).sign() {
            s if s < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl Add for &Hyperreal {
    type Output = Hyperreal;

    fn add(self, rhs: &Hyperreal) -> Hyperreal {
        if self.den == rhs.den {
            // Common case after conditioning: identical denominators.
            return Hyperreal::reduce(self.num.add(&rhs.num), self.den.clone());
        }
        Hyperreal::reduce(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Sub for &Hyperreal {
    type Output = Hyperreal;

    fn sub(self, rhs: &Hyperreal) -> Hyperreal {
        self + &(-rhs)
    }
}

impl Mul for &Hyperreal {
    type Output = Hyperreal;

    fn mul(self, rhs: &Hyperreal) -> Hyperreal {
        Hyperreal::reduce(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Div for &Hyperreal {
    type Output = Hyperreal;

    /// Panics on a zero divisor; use [`Hyperreal::checked_div`] to handle that
    /// case as an error.
    fn div(self, rhs: &Hyperreal) -> Hyperreal {
        self.checked_div(rhs).expect("hyperreal division by zero")
    }
}

impl Neg for &Hyperreal {
    type Output = Hyperreal;

    fn neg(self) -> Hyperreal {
        Hyperreal {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Hyperreal {
            type Output = Hyperreal;
            fn $method(self, rhs: Hyperreal) -> Hyperreal {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Hyperreal> for Hyperreal {
            type Output = Hyperreal;
            fn $method(self, rhs: &Hyperreal) -> Hyperreal {
                (&self).$method(rhs)
            }
        }
        impl $trait<Hyperreal> for &Hyperreal {
            type Output = Hyperreal;
            fn $method(self, rhs: Hyperreal) -> Hyperreal {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl Neg for Hyperreal {
    type Output = Hyperreal;
    fn neg(self) -> Hyperreal {
        -&self
    }
}

impl Zero for Hyperreal {
    fn zero() -> Self {
        Hyperreal::zero()
    }
    fn is_zero(&self) -> bool {
        Hyperreal::is_zero(self)
    }
}

impl One for Hyperreal {
    fn one() -> Self {
        Hyperreal::one()
    }
}

impl std::iter::Sum for Hyperreal {
    fn sum<I: Iterator<Item = Hyperreal>>(iter: I) -> Hyperreal {
        iter.fold(Hyperreal::zero(), |a, b| &a + &b)
    }
}

impl<'a> std::iter::Sum<&'a Hyperreal> for Hyperreal {
    fn sum<I: Iterator<Item = &'a Hyperreal>>(iter: I) -> Hyperreal {
        iter.fold(Hyperreal::zero(), |a, b| &a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn h(s: &str) -> Hyperreal {
        s.parse().unwrap()
    }

    #[test]
    fn eq1_weights_sum_to_one() {
        // e/(1+e) + 1/(1+e) = 1
        assert_eq!(&h("e/(1+e)") + &h("1/(1+e)"), Hyperreal::one());
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(&h("1-e") * &h("1+e"), h("1 - e^2"));
    }

    #[test]
    fn reciprocal_is_canonical() {
        let x = &Hyperreal::one() / &h("1+e");
        assert_eq!(x.numerator(), &EpsPoly::one());
        assert_eq!(
            x.denominator(),
            &EpsPoly::from_terms([(0, rat(1, 1)), (1, rat(1, 1))])
        );
    }

    #[test]
    fn order_puts_epsilon_below_positive_rationals() {
        let eps = Hyperreal::epsilon();
        assert!(eps.pow(2) < eps);
        assert!(eps < Hyperreal::from_ratio(1, 1_000_000));
        assert!(h("1-e") < Hyperreal::one());
        assert!(eps > Hyperreal::zero());
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(h("(1/4)*e^3 + e^5").valuation().unwrap(), 3);
        assert_eq!(h("1/(1+e)").valuation().unwrap(), 0);
        assert_eq!(h("e^2/(e+e^3)").valuation().unwrap(), 1);
        assert_eq!(
            Hyperreal::zero().valuation(),
            Err(HyperrealError::ZeroValuation)
        );
    }

    #[test]
    fn standard_part_examples() {
        assert_eq!(h("1/(1+e)").st().unwrap(), rat(1, 1));
        assert_eq!(h("e^2/(1+e)").st().unwrap(), rat(0, 1));
        assert_eq!(h("1/e").st(), Err(HyperrealError::Unlimited));
        assert!(!h("1/e").is_limited());
        assert!(h("e^2/(1+e)").is_limited());
    }

    #[test]
    fn checked_div_by_zero_errors() {
        assert_eq!(
            Hyperreal::one().checked_div(&Hyperreal::zero()),
            Err(HyperrealError::DivisionByZero)
        );
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "0",
            "1",
            "e",
            "e^2",
            "(1/4)*e^3 + e^5",
            "1/(1+e)",
            "1 - e",
            "-1/2",
            "(1+e)/(1 - e)",
            "e^2/(1 + e^2)",
            "2*e + 3*e^4",
        ] {
            let v = h(s);
            let rendered = v.to_string();
            assert_eq!(h(&rendered), v, "round trip through {rendered:?}");
        }
    }

    #[test]
    fn gamma_symbol_rendering() {
        assert_eq!(h("e^3").to_string_with_symbol('g'), "g^3");
        assert_eq!(h("(1/4)*e^2").to_string_with_symbol('g'), "(1/4)*g^2");
    }

    #[test]
    fn canonical_form_is_idempotent() {
        let x = h("(e + e^2)/(e^2 + e^3)"); // reduces to 1/e
        let again = Hyperreal::new(x.numerator().clone(), x.denominator().clone()).unwrap();
        assert_eq!(x, again);
        assert_eq!(x, h("1/e"));
    }
}
