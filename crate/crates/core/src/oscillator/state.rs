use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::scalars::Scalar;

/// Label `(gamma, c)` of an irreducible representation `H^(gamma, c)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepLabel {
    pub gamma: f64,
    pub c: f64,
}

impl RepLabel {
    pub fn new(gamma: f64, c: f64) -> Result<Self> {
        if !gamma.is_finite() || !c.is_finite() {
            return Err(Error::InvalidParameter(format!("non-finite label ({gamma}, {c})")));
        }
        if gamma == 0.0 {
            return Err(Error::InvalidParameter("gamma must be nonzero".into()));
        }
        Ok(Self { gamma, c })
    }
}

impl fmt::Display for RepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.gamma, self.c)
    }
}

/// The labels sitting in the `n` tensor slots.
///
/// Equal labels are merged into classes; a sector is then a slot -> class
/// assignment. When all labels coincide there is exactly one sector.
#[derive(Clone, Debug, PartialEq)]
pub struct LabelSet {
    classes: Vec<RepLabel>,
    initial: Vec<u8>,
}

impl LabelSet {
    pub fn new(slots: &[RepLabel]) -> Result<Self> {
        if slots.len() < 2 {
            return Err(Error::InvalidParameter("need at least two tensor slots".into()));
        }
        if slots.len() > u8::MAX as usize {
            return Err(Error::InvalidParameter("too many tensor slots".into()));
        }
        let mut classes: Vec<RepLabel> = Vec::new();
        let mut initial = Vec::with_capacity(slots.len());
        for l in slots {
            RepLabel::new(l.gamma, l.c)?;
            let idx = match classes.iter().position(|c| c == l) {
                Some(i) => i,
                None => {
                    classes.push(*l);
                    classes.len() - 1
                }
            };
            initial.push(idx as u8);
        }
        Ok(Self { classes, initial })
    }

    pub fn homogeneous(n: usize, label: RepLabel) -> Result<Self> {
        Self::new(&vec![label; n])
    }

    /// `n - 1` copies of `base` with `other` in slot `position` (0-based).
    pub fn one_distinguished(n: usize, base: RepLabel, other: RepLabel, position: usize) -> Result<Self> {
        if position >= n {
            return Err(Error::InvalidParameter(format!("position {position} outside 0..{n}")));
        }
        let mut slots = vec![base; n];
        slots[position] = other;
        Self::new(&slots)
    }

    pub fn n(&self) -> usize {
        self.initial.len()
    }

    pub fn classes(&self) -> &[RepLabel] {
        &self.classes
    }

    pub fn class(&self, idx: u8) -> RepLabel {
        self.classes[idx as usize]
    }

    pub fn initial(&self) -> &[u8] {
        &self.initial
    }

    pub fn is_homogeneous(&self) -> bool {
        self.classes.len() == 1
    }

    /// Labels in slot order for a given sector.
    pub fn slot_labels(&self, sector: &[u8]) -> Vec<RepLabel> {
        sector.iter().map(|&c| self.class(c)).collect()
    }

    pub fn gamma_total(&self) -> f64 {
        self.initial.iter().map(|&c| self.class(c).gamma).sum()
    }

    pub fn c_total(&self) -> f64 {
        self.initial.iter().map(|&c| self.class(c).c).sum()
    }

    /// All distinct rearrangements of the label multiset, ascending.
    pub fn sectors(&self) -> Vec<Vec<u8>> {
        let mut cur = self.initial.clone();
        cur.sort_unstable();
        let mut out = vec![cur.clone()];
        while next_permutation(&mut cur) {
            out.push(cur.clone());
        }
        out
    }

    pub fn is_sector(&self, sector: &[u8]) -> bool {
        let mut a = sector.to_vec();
        let mut b = self.initial.clone();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "classes": self.classes,
            "slots": self.initial,
        })
    }
}

fn next_permutation(v: &mut [u8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Basis vector `h^{S(1)}_{m_1} (x) ... (x) h^{S(n)}_{m_n}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TensorState {
    /// Slot -> label class.
    pub assignment: Vec<u8>,
    #[serde(rename = "occ")]
    pub occupations: Vec<u32>,
}

impl TensorState {
    pub fn new(assignment: Vec<u8>, occupations: Vec<u32>) -> Result<Self> {
        if assignment.len() != occupations.len() {
            return Err(Error::DimensionMismatch {
                what: "tensor state".into(),
                expected: assignment.len(),
                found: occupations.len(),
            });
        }
        Ok(Self { assignment, occupations })
    }

    /// All slots in their ground state.
    pub fn vacuum(assignment: &[u8]) -> Self {
        Self { assignment: assignment.to_vec(), occupations: vec![0; assignment.len()] }
    }

    pub fn n(&self) -> usize {
        self.occupations.len()
    }

    pub fn total(&self) -> u32 {
        self.occupations.iter().sum()
    }
}

/// Finite linear combination of [`TensorState`]s.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector<S> {
    terms: BTreeMap<TensorState, S>,
}

impl<S: Scalar> Default for WeightVector<S> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<S: Scalar> WeightVector<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(state: TensorState) -> Self {
        Self::single(state, S::one())
    }

    pub fn single(state: TensorState, coeff: S) -> Self {
        let mut v = Self::zero();
        v.add_term(state, coeff);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TensorState, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, state: &TensorState) -> S {
        self.terms.get(state).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, state: TensorState, coeff: S) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&state) {
            Some(c) => {
                let sum = c.clone() + coeff;
                if sum.is_zero() {
                    self.terms.remove(&state);
                } else {
                    *c = sum;
                }
            }
            None => {
                self.terms.insert(state, coeff);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, factor: &S) {
        for (s, c) in &other.terms {
            self.add_term(s.clone(), c.clone() * factor.clone());
        }
    }

    pub fn scaled(&self, factor: &S) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, factor);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-S::one());
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &S::one());
        out
    }

    /// Largest coefficient magnitude.
    pub fn max_magnitude(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    /// Total occupation, if all terms share one.
    pub fn total_occupation(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(TensorState::total);
        let first = it.next()?;
        it.all(|t| t == first).then_some(first)
    }

    /// Apply a per-state linear map.
    pub fn map_states<F>(&self, mut f: F) -> Self
    where
        F: FnMut(&TensorState, &S, &mut Self),
    {
        let mut out = Self::zero();
        for (s, c) in &self.terms {
            f(s, c, &mut out);
        }
        out
    }
}

impl WeightVector<f64> {
    pub fn norm(&self) -> f64 {
        self.terms.values().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Drop coefficients with `|c| <= threshold`.
    pub fn pruned(&self, threshold: f64) -> Self {
        Self { terms: self.terms.iter().filter(|(_, c)| c.abs() > threshold).map(|(s, c)| (s.clone(), *c)).collect() }
    }
}

impl<S: Scalar + Serialize> WeightVector<S> {
    /// `{"context": ..., "terms": [{"assignment", "occ", "coeff"}]}`.
    pub fn to_json(&self, context: serde_json::Value) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(s, c)| {
                json!({
                    "assignment": s.assignment,
                    "occ": s.occupations,
                    "coeff": c,
                })
            })
            .collect();
        json!({ "context": context, "terms": terms })
    }
}

impl WeightVector<f64> {
    /// Numeric variant of [`to_json`](Self::to_json) that keeps full
    /// precision by writing coefficients as decimal strings.
    pub fn to_json_numeric(&self, context: serde_json::Value) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(s, c)| {
                json!({
                    "assignment": s.assignment,
                    "occ": s.occupations,
                    "coeff": crate::scalars::format_numeric(*c),
                })
            })
            .collect();
        json!({ "context": context, "terms": terms })
    }

    pub fn from_json_numeric(value: &serde_json::Value) -> Result<Self> {
        let terms =
            value.get("terms").and_then(|t| t.as_array()).ok_or_else(|| Error::Parse("missing terms".into()))?;
        let mut v = Self::zero();
        for t in terms {
            let assignment: Vec<u8> = serde_json::from_value(t["assignment"].clone())?;
            let occ: Vec<u32> = serde_json::from_value(t["occ"].clone())?;
            let coeff = match &t["coeff"] {
                serde_json::Value::String(s) => crate::scalars::parse_numeric(s)?,
                serde_json::Value::Number(n) => n.as_f64().unwrap_or(f64::NAN),
                _ => return Err(Error::Parse("bad coeff".into())),
            };
            v.add_term(TensorState::new(assignment, occ)?, coeff);
        }
        Ok(v)
    }
}

impl<S: Scalar> FromIterator<(TensorState, S)> for WeightVector<S> {
    fn from_iter<I: IntoIterator<Item = (TensorState, S)>>(iter: I) -> Self {
        let mut v = Self::zero();
        for (s, c) in iter {
            v.add_term(s, c);
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sectors_of_one_distinguished_label() {
        let a = RepLabel::new(1.0, 0.5).unwrap();
        let b = RepLabel::new(2.0, 0.3).unwrap();
        let ls = LabelSet::new(&[a, a, b]).unwrap();
        assert_eq!(ls.sectors(), vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
        assert!(!ls.is_homogeneous());
        assert_eq!(LabelSet::homogeneous(4, a).unwrap().sectors(), vec![vec![0; 4]]);
    }

    #[test]
    fn distinct_labels_give_all_permutations() {
        let ls = LabelSet::new(&[
            RepLabel::new(1.0, 0.1).unwrap(),
            RepLabel::new(1.5, 0.2).unwrap(),
            RepLabel::new(2.0, 0.3).unwrap(),
        ])
        .unwrap();
        assert_eq!(ls.sectors().len(), 6);
    }

    #[test]
    fn zero_gamma_rejected() {
        assert!(RepLabel::new(0.0, 1.0).is_err());
    }

    #[test]
    fn cancellation_removes_terms() {
        let s = TensorState::vacuum(&[0, 0]);
        let mut v = WeightVector::single(s.clone(), 2.0);
        v.add_term(s, -2.0);
        assert!(v.is_zero());
    }

    #[test]
    fn json_round_trip() {
        let v: WeightVector<f64> = [
            (TensorState::new(vec![0, 1], vec![0, 1]).unwrap(), 0.125),
            (TensorState::new(vec![0, 1], vec![1, 0]).unwrap(), -1.0 / 3.0),
        ]
        .into_iter()
        .collect();
        let j = v.to_json_numeric(json!({"q": "0.5"}));
        assert_eq!(j["terms"][0]["occ"], json!([0, 1]));
        assert_eq!(WeightVector::from_json_numeric(&j).unwrap(), v);
    }
}
