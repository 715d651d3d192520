//! `sigma_i` on `O`-monomials by commuting it to the vacuum.

use std::collections::BTreeMap;

use num_traits::One;
use serde::Serialize;

use crate::oscillator::{Model, WeightVector};
use crate::scalars::Scalar;
use crate::weightspace::apply_monomial;

/// `coefficient * O_1^{j_1} ... O_{n-1}^{j_{n-1}} v_0` on a sector.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OMonomial<S> {
    pub exponents: Vec<u32>,
    pub coefficient: S,
    pub sector: Vec<u8>,
}

impl<S: Scalar> OMonomial<S> {
    pub fn new(exponents: Vec<u32>, sector: Vec<u8>) -> Self {
        Self { exponents, coefficient: S::one(), sector }
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// Tensor coordinates of the monomial.
    pub fn to_vector<M: Model<Scalar = S>>(&self, model: &M) -> WeightVector<S> {
        let v0 = WeightVector::basis(crate::oscillator::TensorState::vacuum(&self.sector));
        apply_monomial(model, &self.exponents, &v0).scaled(&self.coefficient)
    }
}

type Poly<S> = BTreeMap<Vec<u32>, S>;

fn poly_mul<S: Scalar>(a: &Poly<S>, b: &Poly<S>) -> Poly<S> {
    let mut out: Poly<S> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let c = ca.clone() * cb.clone();
            let slot = out.entry(e).or_insert_with(S::zero);
            *slot = slot.clone() + c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Image of `O_k` under conjugation by `sigma_i` (`slot = i - 1`), as a
/// linear combination of `O`'s. `swapped` is the sector after the swap, on
/// which the `Gamma` factors are evaluated.
fn conjugate_o<M: Model>(model: &M, slot: usize, k: usize, swapped: &[u8]) -> Vec<(usize, M::Scalar)> {
    let qm = |p: usize| model.q_half(swapped[p], -2);
    let qn = |p: usize, e: i32| model.qnum_half(swapped[p], e);
    let i = slot;
    if k == i {
        vec![(i, -(qm(i) * qm(i + 1)))]
    } else if k == i + 1 {
        vec![(i, qm(i + 1) * qn(i + 1, -1) * qn(i + 2, 1)), (i + 1, qn(i, 1) * qn(i + 1, -1))]
    } else if i > 0 && k == i - 1 {
        vec![(i - 1, qn(i, -1) * qn(i + 1, 1)), (i, qn(i - 1, 1) * qm(i) * qn(i, -1))]
    } else {
        vec![(k, M::Scalar::one())]
    }
}

/// `sigma_i` applied to an `O`-monomial, `slot = i - 1`. The result is a
/// combination of monomials of the same degree on the swapped sector.
pub fn rewrite_sigma<M: Model>(model: &M, slot: usize, mono: &OMonomial<M::Scalar>) -> Vec<OMonomial<M::Scalar>> {
    let n = mono.sector.len();
    let mut swapped = mono.sector.clone();
    swapped.swap(slot, slot + 1);

    let vac = model.r_diag(mono.sector[slot], 0, mono.sector[slot + 1], 0);
    let mut acc: Poly<M::Scalar> = BTreeMap::new();
    acc.insert(vec![0; n - 1], mono.coefficient.clone() * vac);
    for (k, &e) in mono.exponents.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let factor: Poly<M::Scalar> = conjugate_o(model, slot, k, &swapped)
            .into_iter()
            .map(|(t, c)| {
                let mut ex = vec![0; n - 1];
                ex[t] = 1;
                (ex, c)
            })
            .collect();
        for _ in 0..e {
            acc = poly_mul(&acc, &factor);
        }
    }
    let degree = mono.degree();
    acc.into_iter()
        .map(|(exponents, coefficient)| {
            assert_eq!(exponents.iter().sum::<u32>(), degree, "rewriting changed the degree");
            OMonomial { exponents, coefficient, sector: swapped.clone() }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::action::apply_sigma_series;
    use crate::laurent::LaurentPoly;
    use crate::oscillator::{ExactModel, LabelSet, NumericModel, RepLabel};

    fn combine<M: Model>(model: &M, terms: &[OMonomial<M::Scalar>]) -> WeightVector<M::Scalar> {
        let mut out = WeightVector::zero();
        for t in terms {
            out = out.add(&t.to_vector(model));
        }
        out
    }

    #[test]
    fn rewriting_matches_tensor_action_inhomogeneous() {
        let labels = [
            RepLabel::new(1.3, 0.4).unwrap(),
            RepLabel::new(0.7, 1.8).unwrap(),
            RepLabel::new(2.1, 0.9).unwrap(),
            RepLabel::new(0.9, 2.5).unwrap(),
        ];
        let model = NumericModel::new(0.62, LabelSet::new(&labels).unwrap()).unwrap();
        let sector = vec![0u8, 1, 2, 3];
        for exps in [vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0], vec![2, 0, 1], vec![0, 2, 1]] {
            let mono = OMonomial::new(exps.clone(), sector.clone());
            let v = mono.to_vector(&model);
            for slot in 0..3 {
                let direct = apply_sigma_series(&model, slot, &v);
                let rewritten = combine(&model, &rewrite_sigma(&model, slot, &mono));
                let d = direct.sub(&rewritten).norm() / direct.norm();
                assert!(d < 1e-12, "{exps:?} slot {slot}: {d}");
            }
        }
    }

    #[test]
    fn rewriting_matches_tensor_action_exact() {
        let l = LabelSet::homogeneous(3, RepLabel::new(1.0, 1.0).unwrap()).unwrap();
        let model = ExactModel::new(l).unwrap();
        for exps in [vec![2, 0], vec![1, 1], vec![0, 2], vec![1, 2]] {
            let mono = OMonomial::<LaurentPoly>::new(exps.clone(), vec![0, 0, 0]);
            let v = mono.to_vector(&model);
            for slot in 0..2 {
                let direct = apply_sigma_series(&model, slot, &v);
                let rewritten = combine(&model, &rewrite_sigma(&model, slot, &mono));
                assert_eq!(direct, rewritten, "{exps:?} slot {slot}");
            }
        }
    }

    #[test]
    fn degree_is_preserved() {
        let l = LabelSet::homogeneous(4, RepLabel::new(1.0, 1.0).unwrap()).unwrap();
        let model = ExactModel::new(l).unwrap();
        let mono = OMonomial::<LaurentPoly>::new(vec![1, 2, 1], vec![0; 4]);
        for slot in 0..3 {
            for t in rewrite_sigma(&model, slot, &mono) {
                assert_eq!(t.degree(), 4);
            }
        }
    }
}
