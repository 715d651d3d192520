//! Sparse Laurent polynomials in one formal variable with exact rational
//! coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalars::{format_rational, parse_rational, rational_to_f64};

/// `sum_k a_k x^k` with `k` ranging over all integers. Zero coefficients are
/// never stored, so the zero polynomial is the empty map and equality is
/// structural.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, BigRational>,
}

impl LaurentPoly {
    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: BigRational, exponent: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponent, c);
        }
        Self { terms }
    }

    /// `c * x^exponent` for an integer `c`.
    pub fn int_monomial(c: i64, exponent: i32) -> Self {
        Self::monomial(BigRational::from_integer(BigInt::from(c)), exponent)
    }

    /// The variable `x` itself.
    pub fn var() -> Self {
        Self::int_monomial(1, 1)
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, BigRational)>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigRational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exponent: i32) -> BigRational {
        self.terms.get(&exponent).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn min_exponent(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    fn add_term(&mut self, exponent: i32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exponent).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exponent);
        }
    }

    /// Multiply by `x^shift`.
    pub fn shift(&self, shift: i32) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (e + shift, c.clone())).collect() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect() }
    }

    /// Substitute `x -> x^factor`.
    pub fn rescale_exponents(&self, factor: i32) -> Self {
        if factor == 0 {
            let total = self.terms.values().fold(BigRational::zero(), |acc, c| acc + c);
            return Self::constant(total);
        }
        Self { terms: self.terms.iter().map(|(e, c)| (e * factor, c.clone())).collect() }
    }

    /// Inverse of [`rescale_exponents`](Self::rescale_exponents): succeeds
    /// when every exponent is divisible by `divisor`.
    pub fn compress_exponents(&self, divisor: i32) -> Option<Self> {
        if divisor == 0 {
            return None;
        }
        let mut out = BTreeMap::new();
        for (e, c) in &self.terms {
            if e % divisor != 0 {
                return None;
            }
            out.insert(e / divisor, c.clone());
        }
        Some(Self { terms: out })
    }

    /// Substitute `x -> 1/x`.
    pub fn invert_variable(&self) -> Self {
        self.rescale_exponents(-1)
    }

    /// Evaluate at a numeric point `x != 0`.
    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().map(|(e, c)| rational_to_f64(c) * x.powi(*e)).sum()
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `Some(c, e)` when the polynomial is the single term `c x^e`.
    pub fn as_monomial(&self) -> Option<(i32, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*e, c))
        } else {
            None
        }
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder in `Q[x, 1/x]` (or the divisor is zero).
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let dmin = divisor.min_exponent()?;
        let Some(nmin) = self.min_exponent() else {
            return Some(Self::zero());
        };
        if let Some((e, c)) = divisor.as_monomial() {
            let inv = c.recip();
            return Some(Self { terms: self.terms.iter().map(|(k, a)| (k - e, a * &inv)).collect() });
        }
        // Both sides shifted to ordinary polynomials with nonzero constant
        // term on the divisor; monomials are units so this is exact.
        let num: Vec<BigRational> = dense(self, nmin);
        let den: Vec<BigRational> = dense(divisor, dmin);
        if num.len() < den.len() {
            return None;
        }
        let mut rem = num;
        let dl = den.len();
        let lead = den[dl - 1].clone();
        let mut quot = vec![BigRational::zero(); rem.len() - dl + 1];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dl - 1] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, d) in den.iter().enumerate() {
                rem[i + j] -= &c * d;
            }
            quot[i] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        let shift = nmin - dmin;
        Some(Self::from_terms(quot.into_iter().enumerate().map(|(i, c)| (i as i32 + shift, c))))
    }
}

fn dense(p: &LaurentPoly, min: i32) -> Vec<BigRational> {
    let max = p.max_exponent().unwrap_or(min);
    let mut v = vec![BigRational::zero(); (max - min + 1) as usize];
    for (e, c) in &p.terms {
        v[(e - min) as usize] = c.clone();
    }
    v
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for LaurentPoly {
    fn one() -> Self {
        Self::int_monomial(1, 0)
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        Self { terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.clone().neg()
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        self + (-rhs)
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let unit = abs.is_one();
            match (*e, unit) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{abs}*x")?,
                (e, true) => write!(f, "x^{e}")?,
                (e, false) => write!(f, "{abs}*x^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    terms: Vec<(i32, String)>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Wire { terms: self.terms.iter().map(|(e, c)| (*e, format_rational(c))).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let wire = Wire::deserialize(d)?;
        let mut terms = Vec::with_capacity(wire.terms.len());
        for (e, c) in wire.terms {
            terms.push((e, parse_rational(&c).map_err(D::Error::custom)?));
        }
        Ok(LaurentPoly::from_terms(terms))
    }
}
