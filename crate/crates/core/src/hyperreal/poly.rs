//! Polynomials in the infinitesimal `e` with exact rational coefficients.
//!
//! Terms are kept sorted by strictly ascending exponent and never store a zero
//! coefficient; the empty term list is the zero polynomial. Only non-negative
//! exponents exist — negative orders of magnitude arise from the
//! numerator/denominator split of [`Hyperreal`](super::Hyperreal).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EpsPoly {
    /// `(exponent, coefficient)` pairs, strictly ascending, coefficients nonzero.
    terms: Vec<(u32, Rational)>,
}

impl EpsPoly {
    pub fn zero() -> Self {
        EpsPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        EpsPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        EpsPoly::monomial(0, c)
    }

    /// `c * e^k`; collapses to zero when `c == 0`.
    pub fn monomial(exponent: u32, c: Rational) -> Self {
        if c.is_zero() {
            EpsPoly::zero()
        } else {
            EpsPoly {
                terms: vec![(exponent, c)],
            }
        }
    }

    /// Builds from arbitrary `(exponent, coefficient)` pairs, merging
    /// duplicates and dropping zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, Rational)>) -> Self {
        let mut out = EpsPoly::zero();
        for (k, c) in terms {
            out = out.add(&EpsPoly::monomial(k, c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(u32, Rational)] {
        &self.terms
    }

    /// Lowest exponent carrying a nonzero coefficient. None for zero.
    pub fn low_exponent(&self) -> Option<u32> {
        self.terms.first().map(|(k, _)| *k)
    }

    /// Coefficient of the lowest-order term. None for zero.
    pub fn low_coeff(&self) -> Option<&Rational> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.last().map(|(k, _)| *k)
    }

    pub fn coeff_at(&self, exponent: u32) -> Rational {
        match self.terms.binary_search_by_key(&exponent, |(k, _)| *k) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn add(&self, other: &EpsPoly) -> EpsPoly {
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ka, ca) = &self.terms[i];
            let (kb, cb) = &other.terms[j];
            match ka.cmp(kb) {
                std::cmp::Ordering::Less => {
                    terms.push((*ka, ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    terms.push((*kb, cb.clone()));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = ca + cb;
                    if !c.is_zero() {
                        terms.push((*ka, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&self.terms[i..]);
        terms.extend_from_slice(&other.terms[j..]);
        EpsPoly { terms }
    }

    pub fn neg(&self) -> EpsPoly {
        EpsPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &EpsPoly) -> EpsPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &EpsPoly) -> EpsPoly {
        if self.is_zero() || other.is_zero() {
            return EpsPoly::zero();
        }
        // Accumulate into a dense table indexed by exponent.
        let deg = self.degree().unwrap() + other.degree().unwrap();
        let mut dense: Vec<Rational> = vec![Rational::zero(); deg as usize + 1];
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                dense[(*ka + *kb) as usize] += ca * cb;
            }
        }
        EpsPoly::from_dense(&dense)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &Rational) -> EpsPoly {
        if c.is_zero() {
            return EpsPoly::zero();
        }
        EpsPoly {
            terms: self.terms.iter().map(|(k, co)| (*k, co * c)).collect(),
        }
    }

    /// Exact evaluation at a rational point.
    pub fn eval_at(&self, x: &Rational) -> Rational {
        // Horner over the dense form would be fine; the sparse sum is simpler.
        let mut acc = Rational::zero();
        for (k, c) in &self.terms {
            let mut pw = Rational::one();
            for _ in 0..*k {
                pw *= x;
            }
            acc += c * pw;
        }
        acc
    }

    fn from_dense(dense: &[Rational]) -> EpsPoly {
        EpsPoly {
            terms: dense
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k as u32, c.clone()))
                .collect(),
        }
    }

    fn to_dense(&self) -> Vec<Rational> {
        match self.degree() {
            None => Vec::new(),
            Some(d) => {
                let mut dense = vec![Rational::zero(); d as usize + 1];
                for (k, c) in &self.terms {
                    dense[*k as usize] = c.clone();
                }
                dense
            }
        }
    }

    /// Exact quotient; panics if `other` does not divide `self`.
    /// Only called on multiples produced by [`gcd`].
    pub fn div_exact(&self, other: &EpsPoly) -> EpsPoly {
        let (q, r) = self.divrem(other);
        assert!(r.is_zero(), "div_exact called with a non-divisor");
        q
    }

    /// Long division by highest-order terms over the rationals.
    pub fn divrem(&self, other: &EpsPoly) -> (EpsPoly, EpsPoly) {
        assert!(!other.is_zero(), "polynomial division by zero");
        if self.is_zero() {
            return (EpsPoly::zero(), EpsPoly::zero());
        }
        let db = other.degree().unwrap() as usize;
        let lb = other.coeff_at(db as u32);
        let mut rem = self.to_dense();
        let mut quot = vec![Rational::zero(); rem.len()];
        while rem.len() > db && rem.iter().any(|c| !c.is_zero()) {
            // trim trailing zeros
            while let Some(last) = rem.last() {
                if last.is_zero() {
                    rem.pop();
                } else {
                    break;
                }
            }
            if rem.len() <= db {
                break;
            }
            let dr = rem.len() - 1;
            let factor = rem[dr].clone() / lb.clone();
            let shift = dr - db;
            quot[shift] = factor.clone();
            for (k, c) in other.terms.iter() {
                let idx = *k as usize + shift;
                let delta = c * &factor;
                rem[idx] -= delta;
            }
        }
        (EpsPoly::from_dense(&quot), EpsPoly::from_dense(&rem))
    }

    /// Writes `self` as `content * primitive` with `content > 0` rational and
    /// `primitive` an integer-coefficient polynomial of content 1 whose
    /// highest-order coefficient is positive.
    fn primitive_part(&self) -> Option<Vec<BigInt>> {
        if self.is_zero() {
            return None;
        }
        let mut denom_lcm = BigInt::one();
        for (_, c) in &self.terms {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
        let dense = self.to_dense();
        let mut ints: Vec<BigInt> = dense
            .iter()
            .map(|c| c.numer() * (&denom_lcm / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for c in &ints {
            content = content.gcd(c);
        }
        if ints.last().map(|c| c.is_negative()).unwrap_or(false) {
            content = -content;
        }
        for c in ints.iter_mut() {
            *c = &*c / &content;
        }
        Some(ints)
    }

    /// Polynomial gcd over the rationals, computed on integer primitive parts
    /// with a primitive pseudo-remainder sequence to keep coefficient growth
    /// in check. The result is the primitive integer representative; callers
    /// normalize units themselves.
    pub fn gcd(&self, other: &EpsPoly) -> EpsPoly {
        match (self.primitive_part(), other.primitive_part()) {
            (None, None) => EpsPoly::zero(),
            (Some(a), None) => int_to_poly(&a),
            (None, Some(b)) => int_to_poly(&b),
            (Some(mut a), Some(mut b)) => {
                if a.len() < b.len() {
                    std::mem::swap(&mut a, &mut b);
                }
                loop {
                    let r = pseudo_rem(&a, &b);
                    match primitive_ints(r) {
                        None => return int_to_poly(&b),
                        Some(r) => {
                            a = std::mem::replace(&mut b, r);
                        }
                    }
                }
            }
        }
    }
}

fn int_to_poly(ints: &[BigInt]) -> EpsPoly {
    EpsPoly::from_terms(
        ints.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as u32, Rational::from_integer(c.clone()))),
    )
}

/// Pseudo-remainder of dense integer polynomials (`a` scaled by powers of
/// `b`'s leading coefficient so every elimination step stays integral).
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut r: Vec<BigInt> = a.to_vec();
    loop {
        while r.last().map(|c| c.is_zero()).unwrap_or(false) {
            r.pop();
        }
        if r.len() <= db {
            return r;
        }
        let dr = r.len() - 1;
        let lead = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * &lb;
        }
        for (i, bc) in b.iter().enumerate() {
            let delta = bc * &lead;
            r[i + shift] -= delta;
        }
    }
}

/// Content-normalized integer polynomial; `None` when the input is zero.
fn primitive_ints(mut ints: Vec<BigInt>) -> Option<Vec<BigInt>> {
    while ints.last().map(|c| c.is_zero()).unwrap_or(false) {
        ints.pop();
    }
    if ints.is_empty() {
        return None;
    }
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    if ints.last().map(|c| c.is_negative()).unwrap_or(false) {
        content = -content;
    }
    for c in ints.iter_mut() {
        *c = &*c / &content;
    }
    Some(ints)
}
