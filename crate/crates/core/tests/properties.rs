use braidosc::braid::{build_exact, build_numeric, BuildOptions, Route};
use braidosc::config::Tolerances;
use braidosc::laurent::LaurentPoly;
use braidosc::linalg::Mat;
use braidosc::oscillator::{ExactModel, LabelSet, NumericModel, RepLabel};
use braidosc::scalars::q_number;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-4i64..=4, -5i32..=5), 0..5).prop_map(|terms| {
        terms.into_iter().fold(LaurentPoly::zero(), |acc, (c, e)| acc + LaurentPoly::int_monomial(c, e))
    })
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

fn max_diff(a: &Mat<f64>, b: &Mat<f64>) -> f64 {
    let mut w: f64 = 0.0;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            w = w.max((a.get(i, j) - b.get(i, j)).abs());
        }
    }
    w
}

proptest! {
    #[test]
    fn laurent_ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert_eq!(a.clone() - a.clone(), LaurentPoly::zero());
        prop_assert_eq!(a.clone() * LaurentPoly::one(), a.clone());
    }

    #[test]
    fn laurent_evaluation_is_a_homomorphism(a in poly(), b in poly(), x in 0.3f64..2.5) {
        prop_assert!(close((a.clone() * b.clone()).eval(x), a.eval(x) * b.eval(x)));
        prop_assert!(close((a.clone() + b.clone()).eval(x), a.eval(x) + b.eval(x)));
    }

    #[test]
    fn exact_division_inverts_multiplication(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((a.clone() * b.clone()).div_exact(&b), Some(a));
    }

    #[test]
    fn q_number_is_symmetric_in_q(g in 0.1f64..3.0, q in 0.2f64..0.95) {
        prop_assert!(close(q_number(g, q).unwrap(), q_number(g, 1.0 / q).unwrap()));
        prop_assert!(close(q_number(1.0, q).unwrap(), 1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// The numeric backend agrees with the exact one evaluated at
    /// `x = q^{-gamma}`.
    #[test]
    fn numeric_matches_exact(n in 3usize..=4, total in 1u32..=2, q in 0.3f64..0.9, g in 0.5f64..2.5, c in 0.2f64..3.0) {
        let labels = LabelSet::homogeneous(n, RepLabel::new(g, c).unwrap()).unwrap();
        let exact = build_exact(&ExactModel::new(labels.clone()).unwrap(), total, BuildOptions::default()).unwrap();
        let model = NumericModel::new(q, labels).unwrap();
        let numeric = build_numeric(&model, total, BuildOptions::default(), &Tolerances::default()).unwrap();
        let x = q.powf(-g);
        for (e, m) in exact.matrices.iter().zip(&numeric.matrices) {
            let ev = e.map(|p| if p.is_zero() { 0.0 } else { p.eval(x) });
            let scale = ev.max_abs().max(1.0);
            prop_assert!(max_diff(&ev, m) <= 1e-9 * scale);
        }
    }

    /// Braid relations for arbitrary inhomogeneous labels.
    #[test]
    fn braid_relations_for_any_labels(
        q in 0.3f64..0.9,
        labels in prop::collection::vec((0.5f64..2.5, 0.2f64..3.0), 3),
        total in 0u32..=2,
    ) {
        let slots: Vec<RepLabel> = labels.iter().map(|&(g, c)| RepLabel::new(g, c).unwrap()).collect();
        let model = NumericModel::new(q, LabelSet::new(&slots).unwrap()).unwrap();
        let m = build_numeric(&model, total, BuildOptions { route: Route::Rewrite, ..Default::default() }, &Tolerances::default()).unwrap();
        let l = m.matrices[0].mul(&m.matrices[1]).mul(&m.matrices[0]);
        let r = m.matrices[1].mul(&m.matrices[0]).mul(&m.matrices[1]);
        prop_assert!(max_diff(&l, &r) <= 1e-9 * l.max_abs().max(1.0));
    }
}
