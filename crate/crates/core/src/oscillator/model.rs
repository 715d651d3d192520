use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::oscillator::{LabelSet, RepLabel};
use crate::scalars::{q_number, Scalar};

/// Evaluates every coefficient that appears in the action of the algebra and
/// of the R-matrix on occupation states, for one coefficient backend.
///
/// Label arguments are class indices into [`LabelSet::classes`].
pub trait Model: Sync {
    type Scalar: Scalar;

    fn labels(&self) -> &LabelSet;

    /// Coefficient of `h_{m+1}` in `alpha+ h_m`.
    fn raise(&self, class: u8, m: u32) -> Self::Scalar;

    /// Coefficient of `h_{m-1}` in `alpha- h_m`, `m >= 1`.
    fn lower(&self, class: u8, m: u32) -> Self::Scalar;

    /// Eigenvalue of `epsilon` on `h_m`.
    fn energy(&self, class: u8, m: u32) -> Self::Scalar;

    /// `q^{power * gamma / 2}`.
    fn q_half(&self, class: u8, power: i32) -> Self::Scalar;

    /// `[gamma]_q^{power / 2}`.
    fn qnum_half(&self, class: u8, power: i32) -> Self::Scalar;

    /// Scalar in front of `alpha- (x) alpha+` in the exponent of the
    /// R-matrix for classes `(a, b)` in slots `(i, i+1)`.
    fn r_step(&self, a: u8, b: u8) -> Self::Scalar;

    /// Diagonal part `q^{-(eps (x) Gamma + Gamma (x) eps)}` on `h^a_m (x) h^b_m'`.
    fn r_diag(&self, a: u8, m: u32, b: u8, m_prime: u32) -> Self::Scalar;
}

/// Double-precision evaluation at a concrete `q`.
#[derive(Clone, Debug)]
pub struct NumericModel {
    q: f64,
    labels: LabelSet,
    qnums: Vec<f64>,
}

impl NumericModel {
    pub fn new(q: f64, labels: LabelSet) -> Result<Self> {
        if !q.is_finite() || q <= 0.0 {
            return Err(Error::InvalidParameter(format!("q must be positive and finite, got {q}")));
        }
        if q == 1.0 {
            return Err(Error::InvalidParameter("q = 1 is excluded".into()));
        }
        let mut qnums = Vec::with_capacity(labels.classes().len());
        for l in labels.classes() {
            let v = q_number(l.gamma, q)?;
            if v.is_nan() || v <= 0.0 {
                return Err(Error::NonPositiveQNumber { gamma: l.gamma, q, value: v });
            }
            qnums.push(v);
        }
        Ok(Self { q, labels, qnums })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Same labels at `1/q`.
    pub fn inverted(&self) -> Self {
        Self { q: self.q.recip(), labels: self.labels.clone(), qnums: self.qnums.clone() }
    }

    pub fn label(&self, class: u8) -> RepLabel {
        self.labels.class(class)
    }

    pub fn qnum(&self, class: u8) -> f64 {
        self.qnums[class as usize]
    }

    /// `[sum gamma_i]_q`, the value of `Delta^(n) [Gamma]_q`.
    pub fn qnum_total(&self) -> f64 {
        q_number(self.labels.gamma_total(), self.q).expect("q validated at construction")
    }

    pub fn q_number(&self, gamma: f64) -> f64 {
        q_number(gamma, self.q).expect("q validated at construction")
    }

    pub fn context_json(&self) -> serde_json::Value {
        serde_json::json!({
            "labels": self.labels.to_json(),
            "q": crate::scalars::format_numeric(self.q),
        })
    }
}

impl Model for NumericModel {
    type Scalar = f64;

    fn labels(&self) -> &LabelSet {
        &self.labels
    }

    fn raise(&self, class: u8, m: u32) -> f64 {
        (self.qnum(class) * (m as f64 + 1.0)).sqrt()
    }

    fn lower(&self, class: u8, m: u32) -> f64 {
        (self.qnum(class) * m as f64).sqrt()
    }

    fn energy(&self, class: u8, m: u32) -> f64 {
        m as f64 + self.label(class).c
    }

    fn q_half(&self, class: u8, power: i32) -> f64 {
        self.q.powf(power as f64 * self.label(class).gamma / 2.0)
    }

    fn qnum_half(&self, class: u8, power: i32) -> f64 {
        self.qnum(class).powf(power as f64 / 2.0)
    }

    fn r_step(&self, a: u8, b: u8) -> f64 {
        let (ga, gb) = (self.label(a).gamma, self.label(b).gamma);
        (self.q - self.q.recip()) * self.q.powf((ga - gb) / 2.0)
    }

    fn r_diag(&self, a: u8, m: u32, b: u8, m_prime: u32) -> f64 {
        let (la, lb) = (self.label(a), self.label(b));
        let e = (m as f64 + la.c) * lb.gamma + (m_prime as f64 + lb.c) * la.gamma;
        self.q.powf(-e)
    }
}

/// Exact model for homogeneous labels over Laurent polynomials in
/// `y = q^{gamma/2}`.
///
/// Coordinates are taken in the unnormalized basis
/// `e_m = (alpha+)^m h_0 / [gamma]_q^{m/2} = sqrt(m!) h_m`, and every ladder
/// operator drops its common `[gamma]_q^{1/2}` factor. The R-matrix step
/// absorbs the two dropped factors, so `r_step = q^gamma - q^-gamma`. Kernels,
/// spans and braid matrices are unaffected by these uniform rescalings. The
/// overall phase `q^{-2 c gamma}` of the R-matrix diagonal is left out and
/// tracked separately, and `epsilon` is measured relative to `c`.
#[derive(Clone, Debug)]
pub struct ExactModel {
    labels: LabelSet,
    orientation: i32,
}

impl ExactModel {
    pub fn new(labels: LabelSet) -> Result<Self> {
        if !labels.is_homogeneous() {
            return Err(Error::Unsupported("the exact backend requires homogeneous labels".into()));
        }
        Ok(Self { labels, orientation: 1 })
    }

    /// `q -> 1/q`, i.e. `y -> 1/y`.
    pub fn inverted(&self) -> Self {
        Self { labels: self.labels.clone(), orientation: -self.orientation }
    }

    pub fn is_inverted(&self) -> bool {
        self.orientation < 0
    }

    fn y(&self, e: i32) -> LaurentPoly {
        LaurentPoly::int_monomial(1, self.orientation * e)
    }
}

impl Model for ExactModel {
    type Scalar = LaurentPoly;

    fn labels(&self) -> &LabelSet {
        &self.labels
    }

    fn raise(&self, _class: u8, _m: u32) -> LaurentPoly {
        LaurentPoly::int_monomial(1, 0)
    }

    fn lower(&self, _class: u8, m: u32) -> LaurentPoly {
        LaurentPoly::int_monomial(m as i64, 0)
    }

    fn energy(&self, _class: u8, m: u32) -> LaurentPoly {
        LaurentPoly::int_monomial(m as i64, 0)
    }

    fn q_half(&self, _class: u8, power: i32) -> LaurentPoly {
        self.y(power)
    }

    fn qnum_half(&self, _class: u8, _power: i32) -> LaurentPoly {
        LaurentPoly::int_monomial(1, 0)
    }

    fn r_step(&self, _a: u8, _b: u8) -> LaurentPoly {
        &self.y(2) - &self.y(-2)
    }

    fn r_diag(&self, _a: u8, m: u32, _b: u8, m_prime: u32) -> LaurentPoly {
        self.y(-2 * (m + m_prime) as i32)
    }
}
