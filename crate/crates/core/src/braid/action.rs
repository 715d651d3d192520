//! Action of `P R` on adjacent tensor slots.

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::oscillator::{operator_matrix, Model, NumericModel, TensorState, WeightVector};
use crate::scalars::Scalar;
use crate::weightspace::{enumerate_weight_basis, SectorChoice};

/// Generator `sigma_i`, `i` 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BraidGenerator {
    pub index: usize,
    /// Build the construction at `q^{-1}`.
    pub inverse: bool,
}

impl BraidGenerator {
    pub fn new(index: usize, n: usize) -> Result<Self> {
        if index == 0 || index >= n {
            return Err(Error::InvalidParameter(format!(
                "generator index {index} outside 1..={}",
                n.saturating_sub(1)
            )));
        }
        Ok(Self { index, inverse: false })
    }

    pub fn inverted(self) -> Self {
        Self { inverse: !self.inverse, ..self }
    }

    /// 0-based left slot.
    pub fn slot(self) -> usize {
        self.index - 1
    }
}

/// Closed form used for the coefficients of `P R`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaFormula {
    /// Term-by-term expansion of the exponential in the R-matrix.
    #[default]
    Series,
    /// The printed closed form with `binom(m+k-1, m-1)^{1/2}`.
    Printed,
}

fn factorial(k: u32) -> i64 {
    (1..=k as i64).product()
}

fn swapped(s: &TensorState, slot: usize, left_occ: u32, right_occ: u32) -> TensorState {
    let mut t = s.clone();
    t.assignment.swap(slot, slot + 1);
    t.occupations[slot] = left_occ;
    t.occupations[slot + 1] = right_occ;
    t
}

/// `P R` on slots `(slot, slot+1)` by expanding
/// `exp[(q - 1/q) (q^{Gamma/2} x q^{-Gamma/2}) alpha- x alpha+]`, which
/// terminates because `alpha-` is nilpotent on each occupation.
pub fn apply_sigma_series<M: Model>(model: &M, slot: usize, v: &WeightVector<M::Scalar>) -> WeightVector<M::Scalar> {
    v.map_states(|s, c, out| {
        let (a, b) = (s.assignment[slot], s.assignment[slot + 1]);
        let (m, mp) = (s.occupations[slot], s.occupations[slot + 1]);
        let step = model.r_step(a, b);
        let mut ladder = M::Scalar::one();
        let mut power = M::Scalar::one();
        for k in 0..=m {
            if k > 0 {
                ladder = ladder * model.lower(a, m - k + 1) * model.raise(b, mp + k - 1);
                power = power * step.clone();
            }
            let coeff = power.clone()
                * ladder.clone()
                * M::Scalar::from_ratio(1, factorial(k))
                * model.r_diag(a, m - k, b, mp + k);
            out.add_term(swapped(s, slot, mp + k, m - k), c.clone() * coeff);
        }
    })
}

fn binomial_f64(n: i64, k: i64) -> f64 {
    if k < 0 || n < 0 || k > n {
        return if k == 0 || (n == -1 && k == -1) { 1.0 } else { 0.0 };
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Product of principal square roots `sqrt(x) sqrt(y)` when it is real.
fn principal_sqrt_product(x: f64, y: f64) -> Result<f64> {
    match (x >= 0.0, y >= 0.0) {
        (true, true) => Ok((x * y).sqrt()),
        (false, false) => Ok(-(x * y).sqrt()),
        _ => Err(Error::Unsupported("the printed closed form is complex for these parameters".into())),
    }
}

/// `P R` on slots `(slot, slot+1)` by the printed closed form,
/// `q^{-((m+c1) g2 + (m'+c2) g1)} sum_k binom(m+k-1, m-1)^{1/2}
/// binom(m'+k, m')^{1/2} (1 - q^{-2 g1})^{k/2} (q^{2 g2} - 1)^{k/2}`,
/// with principal square roots.
pub fn apply_sigma_printed(model: &NumericModel, slot: usize, v: &WeightVector<f64>) -> Result<WeightVector<f64>> {
    let q = model.q();
    let mut err = None;
    let out = v.map_states(|s, c, out| {
        let (a, b) = (s.assignment[slot], s.assignment[slot + 1]);
        let (la, lb) = (model.label(a), model.label(b));
        let (m, mp) = (s.occupations[slot], s.occupations[slot + 1]);
        let pre = q.powf(-((m as f64 + la.c) * lb.gamma + (mp as f64 + lb.c) * la.gamma));
        let base = match principal_sqrt_product(1.0 - q.powf(-2.0 * la.gamma), q.powf(2.0 * lb.gamma) - 1.0) {
            Ok(x) => x,
            Err(e) => {
                err = Some(e);
                return;
            }
        };
        for k in 0..=m {
            let (mi, mpi, ki) = (m as i64, mp as i64, k as i64);
            let comb = (binomial_f64(mi + ki - 1, mi - 1) * binomial_f64(mpi + ki, mpi)).sqrt();
            let coeff = pre * comb * base.powi(k as i32);
            out.add_term(swapped(s, slot, mp + k, m - k), c * coeff);
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// `sigma_i` (or its inverse) on tensor coordinates with a chosen formula.
pub fn apply_sigma_direct(
    model: &NumericModel,
    g: BraidGenerator,
    formula: SigmaFormula,
    v: &WeightVector<f64>,
) -> Result<WeightVector<f64>> {
    let inv;
    let m = if g.inverse {
        inv = model.inverted();
        &inv
    } else {
        model
    };
    match formula {
        SigmaFormula::Series => Ok(apply_sigma_series(m, g.slot(), v)),
        SigmaFormula::Printed => apply_sigma_printed(m, g.slot(), v),
    }
}

/// Weight-space states and one matrix per generator.
pub type FullSpace<S> = (Vec<TensorState>, Vec<Mat<S>>);

/// Matrices of `sigma_1, ..., sigma_{n-1}` on the full weight space at level
/// `total`, all sectors, in the state order of
/// [`enumerate_weight_basis`].
pub fn full_space_matrices<M: Model>(model: &M, total: u32) -> Result<FullSpace<M::Scalar>> {
    let basis = enumerate_weight_basis(model.labels(), total, &SectorChoice::All)?;
    let n = model.labels().n();
    let mats = (0..n - 1)
        .map(|slot| operator_matrix(&basis.states, &basis.states, |v| apply_sigma_series(model, slot, v)))
        .collect();
    Ok((basis.states, mats))
}

/// Full-space matrices from the printed formula.
pub fn full_space_matrices_printed(model: &NumericModel, total: u32) -> Result<(Vec<TensorState>, Vec<Mat<f64>>)> {
    let basis = enumerate_weight_basis(model.labels(), total, &SectorChoice::All)?;
    let n = model.labels().n();
    let mut mats = Vec::with_capacity(n - 1);
    for slot in 0..n - 1 {
        let mut cols = Vec::with_capacity(basis.states.len());
        for s in &basis.states {
            let img = apply_sigma_printed(model, slot, &WeightVector::basis(s.clone()))?;
            cols.push(basis.states.iter().map(|t| img.coeff(t)).collect::<Vec<_>>());
        }
        mats.push(Mat::from_columns(basis.states.len(), &cols));
    }
    Ok((basis.states, mats))
}

/// First disagreement between the series and the printed formula.
#[derive(Clone, Debug, Serialize)]
pub struct FormulaMismatch {
    pub generator: usize,
    pub input: TensorState,
    pub output: TensorState,
    /// Number of quanta moved across the crossing.
    pub k: u32,
    pub series: f64,
    pub printed: f64,
}

/// Comparison of the two formulas on one weight space.
#[derive(Clone, Debug, Serialize)]
pub struct FormulaComparison {
    /// Largest relative deviation over transitions with `k <= 1`.
    pub max_deviation_k_le_1: f64,
    /// First transition with `k >= 2` where the formulas differ.
    pub first_mismatch: Option<FormulaMismatch>,
}

pub fn compare_formulas(model: &NumericModel, total: u32, rel: f64) -> Result<FormulaComparison> {
    let (states, series) = full_space_matrices(model, total)?;
    let (_, printed) = full_space_matrices_printed(model, total)?;
    let mut dev: f64 = 0.0;
    let mut first = None;
    for (g, (s, p)) in series.iter().zip(&printed).enumerate() {
        for (col, input) in states.iter().enumerate() {
            for (row, output) in states.iter().enumerate() {
                let (x, y) = (*s.get(row, col), *p.get(row, col));
                if x == 0.0 && y == 0.0 {
                    continue;
                }
                let k = output.occupations[g].saturating_sub(input.occupations[g + 1]);
                let d = (x - y).abs() / x.abs().max(y.abs());
                if k <= 1 {
                    dev = dev.max(d);
                } else if first.is_none() && d > rel {
                    first = Some(FormulaMismatch {
                        generator: g + 1,
                        input: input.clone(),
                        output: output.clone(),
                        k,
                        series: x,
                        printed: y,
                    });
                }
            }
        }
    }
    Ok(FormulaComparison { max_deviation_k_le_1: dev, first_mismatch: first })
}
