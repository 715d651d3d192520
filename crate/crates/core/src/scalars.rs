//! Coefficient domains shared by every computation.
//!
//! Two backends implement [`Scalar`]: plain `f64` for general (inhomogeneous)
//! parameters, and [`LaurentPoly`] for exact work in the homogeneous case.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use crate::laurent::LaurentPoly;

/// Ring element usable as a coefficient in weight vectors and matrices.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// Embed a small integer.
    fn from_i64(v: i64) -> Self;

    /// Embed `num / den` (`den != 0`).
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Magnitude used for residual reporting. Exact types report 0 for zero
    /// and 1 otherwise.
    fn magnitude(&self) -> f64;
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Scalar for LaurentPoly {
    fn from_i64(v: i64) -> Self {
        LaurentPoly::constant(BigRational::from_integer(v.into()))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        LaurentPoly::constant(BigRational::new(num.into(), den.into()))
    }

    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
}

/// Absolute/relative tolerance pair for numeric zero tests.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs: 1e-12, rel: 1e-10 }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    /// `|a - b| <= max(abs, rel * max(|a|, |b|))`.
    pub fn close(&self, a: f64, b: f64) -> bool {
        let scale = a.abs().max(b.abs());
        (a - b).abs() <= self.abs.max(self.rel * scale)
    }

    pub fn is_zero(&self, a: f64, scale: f64) -> bool {
        a.abs() <= self.abs.max(self.rel * scale.abs())
    }
}

/// Checked division for the numeric backend.
pub fn checked_div(num: f64, den: f64, tol: Tolerance) -> Result<f64> {
    if den.abs() <= tol.abs {
        return Err(Error::DivisionByZero(den));
    }
    Ok(num / den)
}

/// `[gamma]_q = (q^gamma - q^-gamma) / (q - q^-1)`.
///
/// `q = 1` is a removable singularity and is rejected; use
/// [`q_number_or_classical`] when the classical limit is wanted.
pub fn q_number(gamma: f64, q: f64) -> Result<f64> {
    if !q.is_finite() || q <= 0.0 {
        return Err(Error::InvalidParameter(format!("q must be positive, got {q}")));
    }
    if q == 1.0 {
        return Err(Error::InvalidParameter("q = 1 is a removable singularity of [gamma]_q".into()));
    }
    let num = q.powf(gamma) - q.powf(-gamma);
    let den = q - q.recip();
    Ok(num / den)
}

/// Like [`q_number`], but returns `gamma` at `q = 1` when `classical` is set.
pub fn q_number_or_classical(gamma: f64, q: f64, classical: bool) -> Result<f64> {
    if q == 1.0 && classical {
        return Ok(gamma);
    }
    q_number(gamma, q)
}

/// Overall factor `q^{-2 c gamma * exponent}` split off a matrix in the
/// homogeneous case. Products of matrices add exponents.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GlobalPhase {
    pub exponent: BigRational,
}

impl GlobalPhase {
    pub fn trivial() -> Self {
        Self { exponent: BigRational::zero() }
    }

    pub fn from_integer(e: i64) -> Self {
        Self { exponent: BigRational::from_integer(e.into()) }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self { exponent: &self.exponent + &other.exponent }
    }

    pub fn inverse(&self) -> Self {
        Self { exponent: -&self.exponent }
    }

    pub fn is_trivial(&self) -> bool {
        self.exponent.is_zero()
    }

    /// Numeric value `q^{-2 c gamma * exponent}`.
    pub fn value(&self, q: f64, gamma: f64, c: f64) -> f64 {
        let e = self.exponent.to_f64().unwrap_or(f64::NAN);
        q.powf(-2.0 * c * gamma * e)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(format_rational(&self.exponent))
    }
}

pub(crate) fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: num_bigint::BigInt = n.parse().map_err(|_| bad())?;
    let d: num_bigint::BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Full-precision decimal rendering of a double (round-trips exactly).
pub fn format_numeric(v: f64) -> String {
    format!("{v:?}")
}

pub fn parse_numeric(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad numeric scalar {s:?}")))
}

/// Sign-aware helper for magnitudes of exact rationals.
pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let v = r.to_f64().unwrap_or(f64::NAN);
    if v.is_nan() && r.is_negative() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_number_small_cases() {
        for q in [0.3, 0.5, 0.9, 1.7] {
            assert!((q_number(1.0, q).unwrap() - 1.0).abs() < 1e-15);
            assert_eq!(q_number(0.0, q).unwrap(), 0.0);
        }
        // (q^2 - q^-2)/(q - q^-1) = q + q^-1 = 5/2 at q = 1/2
        assert!((q_number(2.0, 0.5).unwrap() - 2.5).abs() < 1e-14);
    }

    #[test]
    fn q_number_rejects_unit_q() {
        assert!(q_number(1.5, 1.0).is_err());
        assert_eq!(q_number_or_classical(1.5, 1.0, true).unwrap(), 1.5);
        assert!(q_number(1.0, -0.5).is_err());
    }

    #[test]
    fn q_number_symmetric_in_inversion() {
        let a = q_number(1.3, 0.6).unwrap();
        let b = q_number(1.3, 1.0 / 0.6).unwrap();
        assert!((a - b).abs() < 1e-13);
    }

    #[test]
    fn division_guard() {
        let tol = Tolerance::default();
        assert!(checked_div(1.0, 1e-14, tol).is_err());
        assert_eq!(checked_div(1.0, 4.0, tol).unwrap(), 0.25);
    }

    #[test]
    fn phases_add() {
        let a = GlobalPhase::from_integer(1);
        let b = GlobalPhase::from_integer(2);
        assert_eq!(a.compose(&b), GlobalPhase::from_integer(3));
        assert!(a.compose(&a.inverse()).is_trivial());
        let v = GlobalPhase::from_integer(1).value(0.5, 1.0, 0.5);
        assert!((v - 0.5f64.powf(-1.0)).abs() < 1e-15);
    }

    #[test]
    fn numeric_string_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-17, 123456.789] {
            assert_eq!(parse_numeric(&format_numeric(v)).unwrap(), v);
        }
    }
}
