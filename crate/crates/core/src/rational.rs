//! Exact rational scalars used throughout the engine.

use num_bigint::BigInt;

/// Arbitrary-precision rational number, always stored in reduced form with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for building a rational from machine integers.
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// The rational zero.
pub fn rat_zero() -> Rational {
    Rational::from_integer(BigInt::from(0))
}

/// The rational one.
pub fn rat_one() -> Rational {
    Rational::from_integer(BigInt::from(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_on_construction() {
        assert_eq!(rat(2, 4), rat(1, 2));
        assert_eq!(rat(-3, -9), rat(1, 3));
        assert_eq!(rat(0, 7), rat_zero());
    }

    #[test]
    fn display_matches_fixture_grammar() {
        assert_eq!(rat(3, 4).to_string(), "3/4");
        assert_eq!(rat(5, 1).to_string(), "5");
        assert_eq!(rat(-1, 2).to_string(), "-1/2");
    }
}
