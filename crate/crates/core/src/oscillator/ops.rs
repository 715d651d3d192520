use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::oscillator::{Model, NumericModel, TensorState, WeightVector};
use crate::scalars::Scalar;

/// Generators of the algebra acting on a single slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    Raise,
    Lower,
    Energy,
    /// `q^{p Gamma / 2}`.
    QHalf(i32),
}

impl Generator {
    /// Image under the star involution.
    pub fn star(self) -> Self {
        match self {
            Generator::Raise => Generator::Lower,
            Generator::Lower => Generator::Raise,
            g => g,
        }
    }
}

/// Action of `g` on slot `slot` (0-based) of every term of `v`.
pub fn apply_generator<M: Model>(
    model: &M,
    g: Generator,
    slot: usize,
    v: &WeightVector<M::Scalar>,
) -> WeightVector<M::Scalar> {
    v.map_states(|s, c, out| {
        debug_assert!(slot < s.n());
        let class = s.assignment[slot];
        let m = s.occupations[slot];
        match g {
            Generator::Raise => {
                let mut t = s.clone();
                t.occupations[slot] += 1;
                out.add_term(t, c.clone() * model.raise(class, m));
            }
            Generator::Lower => {
                if m > 0 {
                    let mut t = s.clone();
                    t.occupations[slot] -= 1;
                    out.add_term(t, c.clone() * model.lower(class, m));
                }
            }
            Generator::Energy => out.add_term(s.clone(), c.clone() * model.energy(class, m)),
            Generator::QHalf(p) => out.add_term(s.clone(), c.clone() * model.q_half(class, p)),
        }
    })
}

/// Action through the iterated coproduct on all `n` slots.
///
/// Ladder operators act on slot `j` dressed with `q^{-Gamma/2}` on the slots
/// to its left and `q^{Gamma/2}` on the slots to its right.
pub fn coproduct_action<M: Model>(model: &M, g: Generator, v: &WeightVector<M::Scalar>) -> WeightVector<M::Scalar> {
    match g {
        Generator::Raise | Generator::Lower => v.map_states(|s, c, out| {
            let n = s.n();
            for j in 0..n {
                let m = s.occupations[j];
                let class = s.assignment[j];
                let (t, ladder) = match g {
                    Generator::Raise => {
                        let mut t = s.clone();
                        t.occupations[j] += 1;
                        (t, model.raise(class, m))
                    }
                    _ => {
                        if m == 0 {
                            continue;
                        }
                        let mut t = s.clone();
                        t.occupations[j] -= 1;
                        (t, model.lower(class, m))
                    }
                };
                let mut coeff = c.clone() * ladder;
                for k in 0..n {
                    if k < j {
                        coeff = coeff * model.q_half(s.assignment[k], -1);
                    } else if k > j {
                        coeff = coeff * model.q_half(s.assignment[k], 1);
                    }
                }
                out.add_term(t, coeff);
            }
        }),
        Generator::Energy => v.map_states(|s, c, out| {
            let e = s
                .assignment
                .iter()
                .zip(&s.occupations)
                .fold(M::Scalar::zero(), |acc, (&cl, &m)| acc + model.energy(cl, m));
            out.add_term(s.clone(), c.clone() * e);
        }),
        Generator::QHalf(p) => v.map_states(|s, c, out| {
            let f = s.assignment.iter().fold(M::Scalar::one(), |acc, &cl| acc * model.q_half(cl, p));
            out.add_term(s.clone(), c.clone() * f);
        }),
    }
}

/// `Delta^(n) C_q = [Delta Gamma]_q Delta eps - Delta alpha+ Delta alpha-`.
pub fn casimir_action(model: &NumericModel, v: &WeightVector<f64>) -> WeightVector<f64> {
    let lowered = coproduct_action(model, Generator::Lower, v);
    let ladder = coproduct_action(model, Generator::Raise, &lowered);
    let mut out = coproduct_action(model, Generator::Energy, v).scaled(&model.qnum_total());
    out.add_scaled(&ladder, &-1.0);
    out
}

/// Intertwiner `O_k` acting on slots `(k, k+1)`, `k` 0-based.
///
/// `O = q^{-Gamma/2} [Gamma]^{-1/2} alpha+ (x) [Gamma]^{1/2}
///      - [Gamma]^{1/2} (x) q^{Gamma/2} [Gamma]^{-1/2} alpha+`.
pub fn apply_o<M: Model>(model: &M, k: usize, v: &WeightVector<M::Scalar>) -> WeightVector<M::Scalar> {
    v.map_states(|s, c, out| {
        debug_assert!(k + 1 < s.n());
        let (a, b) = (s.assignment[k], s.assignment[k + 1]);
        let (ma, mb) = (s.occupations[k], s.occupations[k + 1]);

        let left = model.q_half(a, -1) * model.qnum_half(a, -1) * model.qnum_half(b, 1) * model.raise(a, ma);
        let mut t = s.clone();
        t.occupations[k] += 1;
        out.add_term(t, c.clone() * left);

        let right = model.qnum_half(a, 1) * model.q_half(b, 1) * model.qnum_half(b, -1) * model.raise(b, mb);
        let mut t = s.clone();
        t.occupations[k + 1] += 1;
        out.add_term(t, -(c.clone() * right));
    })
}

/// Bilinear pairing in which tensor states are orthonormal.
pub fn inner_product<S: Scalar>(u: &WeightVector<S>, v: &WeightVector<S>) -> Result<S> {
    if let (Some((su, _)), Some((sv, _))) = (u.terms().next(), v.terms().next()) {
        let mut a = su.assignment.clone();
        let mut b = sv.assignment.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Err(Error::ContextMismatch(format!(
                "label multisets {:?} and {:?} differ",
                su.assignment, sv.assignment
            )));
        }
    }
    let (small, large) = if u.len() <= v.len() { (u, v) } else { (v, u) };
    Ok(small.terms().fold(S::zero(), |acc, (s, c)| acc + c.clone() * large.coeff(s)))
}

/// Matrix of a linear map from `span(domain)` into `span(codomain)`, both
/// given as lists of tensor states. Column `j` holds the image of
/// `domain[j]`; components outside `codomain` are dropped.
pub fn operator_matrix<S, F>(domain: &[TensorState], codomain: &[TensorState], f: F) -> Mat<S>
where
    S: Scalar,
    F: Fn(&WeightVector<S>) -> WeightVector<S>,
{
    let index: std::collections::HashMap<&TensorState, usize> =
        codomain.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut m = Mat::zeros(codomain.len(), domain.len());
    for (j, s) in domain.iter().enumerate() {
        let image = f(&WeightVector::basis(s.clone()));
        for (t, c) in image.terms() {
            if let Some(&i) = index.get(t) {
                m.set(i, j, c.clone());
            }
        }
    }
    m
}

/// Where a generator acts when checking star compatibility.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionScope {
    Slot(usize),
    Coproduct,
}

/// Checks `<u, g v> = <g* u, v>` on an orthonormalized copy of `subspace`,
/// i.e. that the compressed matrix of `g` is the transpose of that of `g*`.
pub fn star_adjoint_check(
    model: &NumericModel,
    g: Generator,
    scope: ActionScope,
    subspace: &[WeightVector<f64>],
    tol: f64,
) -> Result<bool> {
    let basis = gram_schmidt(subspace, 1e-12);
    let act = |gen: Generator, v: &WeightVector<f64>| match scope {
        ActionScope::Slot(j) => apply_generator(model, gen, j, v),
        ActionScope::Coproduct => coproduct_action(model, gen, v),
    };
    let d = basis.len();
    let mut a = Mat::<f64>::zeros(d, d);
    let mut b = Mat::<f64>::zeros(d, d);
    for (j, vj) in basis.iter().enumerate() {
        let gv = act(g, vj);
        let sv = act(g.star(), vj);
        for (i, vi) in basis.iter().enumerate() {
            a.set(i, j, inner_product(vi, &gv)?);
            b.set(i, j, inner_product(vi, &sv)?);
        }
    }
    let scale = a.max_abs().max(b.max_abs()).max(1.0);
    Ok(a.sub(&b.transpose()).max_abs() <= tol * scale)
}

/// Modified Gram-Schmidt; vectors whose remainder falls below `eps` times
/// their original norm are dropped.
pub fn gram_schmidt(vectors: &[WeightVector<f64>], eps: f64) -> Vec<WeightVector<f64>> {
    let mut out: Vec<WeightVector<f64>> = Vec::new();
    for v in vectors {
        let n0 = v.norm();
        if n0 == 0.0 {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &out {
                let p = inner_product(b, &w).unwrap_or(0.0);
                w.add_scaled(b, &-p);
            }
        }
        let n = w.norm();
        if n > eps * n0 {
            out.push(w.scaled(&n.recip()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::{LabelSet, RepLabel};
    use crate::scalars::q_number;

    fn two_slot(q: f64, g1: f64, c1: f64, g2: f64, c2: f64) -> NumericModel {
        let ls = LabelSet::new(&[RepLabel::new(g1, c1).unwrap(), RepLabel::new(g2, c2).unwrap()]).unwrap();
        NumericModel::new(q, ls).unwrap()
    }

    fn st(assign: &[u8], occ: &[u32]) -> TensorState {
        TensorState::new(assign.to_vec(), occ.to_vec()).unwrap()
    }

    #[test]
    fn lowering_annihilates_ground_state() {
        let m = two_slot(0.6, 1.2, 0.4, 0.8, 1.1);
        let v = WeightVector::basis(st(&[0, 1], &[0, 3]));
        assert!(apply_generator(&m, Generator::Lower, 0, &v).is_zero());
        let vac = WeightVector::basis(st(&[0, 1], &[0, 0]));
        assert!(coproduct_action(&m, Generator::Lower, &vac).is_zero());
    }

    #[test]
    fn energy_eigenvalue() {
        let m = two_slot(0.6, 1.2, 0.4, 0.8, 1.1);
        let v = WeightVector::basis(st(&[0, 1], &[2, 3]));
        let e = apply_generator(&m, Generator::Energy, 1, &v);
        assert!((e.coeff(&st(&[0, 1], &[2, 3])) - (3.0 + 1.1)).abs() < 1e-15);
        let total = coproduct_action(&m, Generator::Energy, &v);
        assert!((total.coeff(&st(&[0, 1], &[2, 3])) - (0.4 + 1.1 + 5.0)).abs() < 1e-14);
    }

    #[test]
    fn ladder_commutator_is_q_number() {
        let m = two_slot(0.55, 1.7, 0.3, 0.9, 0.2);
        let qn = q_number(1.7, 0.55).unwrap();
        for occ in 0..5 {
            let s = st(&[0, 1], &[occ, 1]);
            let v = WeightVector::basis(s.clone());
            let a = apply_generator(&m, Generator::Lower, 0, &apply_generator(&m, Generator::Raise, 0, &v));
            let b = apply_generator(&m, Generator::Raise, 0, &apply_generator(&m, Generator::Lower, 0, &v));
            // raise-then-lower minus lower-then-raise = [gamma]_q
            assert!((a.sub(&b).coeff(&s) - qn).abs() < 1e-12);
        }
    }

    #[test]
    fn coproduct_raise_on_vacuum() {
        let (q, g1, g2) = (0.7, 1.3, 0.6);
        let m = two_slot(q, g1, 0.5, g2, 0.9);
        let v = WeightVector::basis(st(&[0, 1], &[0, 0]));
        let r = coproduct_action(&m, Generator::Raise, &v);
        let a = q.powf(g2 / 2.0) * q_number(g1, q).unwrap().sqrt();
        let b = q.powf(-g1 / 2.0) * q_number(g2, q).unwrap().sqrt();
        assert!((r.coeff(&st(&[0, 1], &[1, 0])) - a).abs() < 1e-14);
        assert!((r.coeff(&st(&[0, 1], &[0, 1])) - b).abs() < 1e-14);
    }

    #[test]
    fn o_on_vacuum_is_lowest_weight() {
        let (q, g1, g2) = (0.45, 1.1, 2.0);
        let m = two_slot(q, g1, 0.5, g2, 0.9);
        let v = WeightVector::basis(st(&[0, 1], &[0, 0]));
        let o = apply_o(&m, 0, &v);
        let (q1, q2) = (q_number(g1, q).unwrap(), q_number(g2, q).unwrap());
        assert!((o.coeff(&st(&[0, 1], &[1, 0])) - q.powf(-g1 / 2.0) * q2.sqrt()).abs() < 1e-13);
        assert!((o.coeff(&st(&[0, 1], &[0, 1])) + q1.sqrt() * q.powf(g2 / 2.0)).abs() < 1e-13);
        // Proportional to q^{g2/2}[g1]^{1/2} h0 (x) h1 - q^{-g1/2}[g2]^{1/2} h1 (x) h0
        // up to an overall sign. The second factor of the last term has
        // occupation 0; occupation 2 would leave the energy eigenvalue c1+c2+1.
        let ratio = o.coeff(&st(&[0, 1], &[0, 1])) / o.coeff(&st(&[0, 1], &[1, 0]));
        let expected = (q.powf(g2 / 2.0) * q1.sqrt()) / (-q.powf(-g1 / 2.0) * q2.sqrt());
        assert!((ratio - expected).abs() < 1e-12);
        assert!(coproduct_action(&m, Generator::Lower, &o).max_magnitude() < 1e-13);
    }

    #[test]
    fn inner_product_basics() {
        let a: WeightVector<f64> = WeightVector::basis(st(&[0, 1], &[0, 1]));
        let b: WeightVector<f64> = WeightVector::basis(st(&[0, 1], &[1, 0]));
        assert_eq!(inner_product(&a, &a).unwrap(), 1.0);
        assert_eq!(inner_product(&a, &b).unwrap(), 0.0);
        let c: WeightVector<f64> = WeightVector::basis(st(&[0, 0, 0], &[1, 0, 0]));
        assert!(inner_product(&a, &c).is_err());
    }

    #[test]
    fn casimir_on_two_slot_vacuum() {
        let (q, g1, c1, g2, c2) = (0.6, 1.4, 0.7, 0.9, 1.3);
        let m = two_slot(q, g1, c1, g2, c2);
        let s = st(&[0, 1], &[0, 0]);
        let out = casimir_action(&m, &WeightVector::basis(s.clone()));
        let expected = q_number(g1 + g2, q).unwrap() * (c1 + c2);
        assert!((out.coeff(&s) - expected).abs() < 1e-12);
    }

    #[test]
    fn single_slot_hermiticity() {
        let ls = LabelSet::homogeneous(2, RepLabel::new(1.0, 1.0).unwrap()).unwrap();
        let m = NumericModel::new(0.5, ls).unwrap();
        let sub: Vec<_> = (0..=5).map(|k| WeightVector::basis(st(&[0, 0], &[k, 0]))).collect();
        for g in [Generator::Raise, Generator::Energy, Generator::QHalf(1)] {
            assert!(star_adjoint_check(&m, g, ActionScope::Slot(0), &sub, 1e-12).unwrap());
        }
    }
}
