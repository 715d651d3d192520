//! Weight spaces, lowest-weight spaces and the Casimir decomposition.

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::linalg::{
    exact_kernel, exact_rank, least_squares, min_eigenvalue, numeric_kernel, numeric_rank, symmetric_eigenvalues, Mat,
};
use crate::oscillator::{
    apply_o, casimir_action, coproduct_action, gram_schmidt, inner_product, operator_matrix, ExactModel, Generator,
    LabelSet, Model, NumericModel, TensorState, WeightVector,
};
use crate::scalars::Scalar;

/// Binomial coefficient as an exact integer.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Dimension data for `n` slots at excitation level `N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub n: usize,
    #[serde(rename = "N")]
    pub total: u32,
    /// Weight-space dimension `C(n+N-1, n-1)` per sector.
    pub weight_dim: u128,
    /// Lowest-weight dimensions `C(n+j-2, n-2)` for `j = 0..=N`.
    pub lowest: Vec<u128>,
}

pub fn counts(n: usize, total: u32) -> Result<Counts> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    let n64 = n as u64;
    let lowest = (0..=total as u64).map(|j| binomial(n64 + j - 2, n64 - 2)).collect();
    Ok(Counts { n, total, weight_dim: binomial(n64 + total as u64 - 1, n64 - 1), lowest })
}

/// Compositions of `total` into `parts` nonnegative parts, ascending
/// lexicographic order.
pub fn compositions(parts: usize, total: u32) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, parts: usize, left: u32, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for v in 0..=left {
            prefix.push(v);
            rec(prefix, parts - 1, left - v, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        rec(&mut Vec::with_capacity(parts), parts, total, &mut out);
    }
    out
}

/// Exponent vectors `(j_1, ..., j_{n-1})` of the `O`-monomials of degree
/// `total`, in the order used for lowest-weight bases.
///
/// The order is lexicographic on the sorted index multiset, which is
/// descending lexicographic on exponents: `w_1, w_2` and `w_11, w_12, w_22`.
pub fn monomial_exponents(n: usize, total: u32) -> Vec<Vec<u32>> {
    let mut v = compositions(n - 1, total);
    v.reverse();
    v
}

/// Which permutation sectors to include.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SectorChoice {
    All,
    One(Vec<u8>),
}

impl SectorChoice {
    pub fn resolve(&self, labels: &LabelSet) -> Result<Vec<Vec<u8>>> {
        match self {
            SectorChoice::All => Ok(labels.sectors()),
            SectorChoice::One(s) => {
                if labels.is_sector(s) {
                    Ok(vec![s.clone()])
                } else {
                    Err(Error::InvalidParameter(format!(
                        "{s:?} is not a permutation of the label classes {:?}",
                        labels.initial()
                    )))
                }
            }
        }
    }
}

/// Ordered basis of tensor states with fixed total occupation.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSpaceBasis {
    pub labels: LabelSet,
    pub total: u32,
    pub sectors: Vec<Vec<u8>>,
    /// Sector-major, then ascending lexicographic occupations.
    pub states: Vec<TensorState>,
}

impl WeightSpaceBasis {
    pub fn n(&self) -> usize {
        self.labels.n()
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n(),
            "N": self.total,
            "labels": self.labels.to_json(),
            "sectors": self.sectors,
            "ordering": "sector-major, occupations ascending lexicographic",
            "states": self.states,
        })
    }
}

pub fn enumerate_weight_basis(labels: &LabelSet, total: u32, sector: &SectorChoice) -> Result<WeightSpaceBasis> {
    let sectors = sector.resolve(labels)?;
    let comps = compositions(labels.n(), total);
    let mut states = Vec::with_capacity(sectors.len() * comps.len());
    for s in &sectors {
        for occ in &comps {
            states.push(TensorState { assignment: s.clone(), occupations: occ.clone() });
        }
    }
    Ok(WeightSpaceBasis { labels: labels.clone(), total, sectors, states })
}

/// How a lowest-weight basis was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LowestWeightSource {
    Kernel,
    Monomials,
}

/// Basis of a lowest-weight space.
#[derive(Clone, Debug)]
pub struct LowestWeightBasis<S: Scalar> {
    pub labels: LabelSet,
    pub total: u32,
    pub source: LowestWeightSource,
    pub vectors: Vec<WeightVector<S>>,
    /// Exponent vector of each vector; empty for kernel bases.
    pub monomial_index: Vec<Vec<u32>>,
    /// Sector of each vector.
    pub vector_sectors: Vec<Vec<u8>>,
    pub gram: Mat<S>,
}

impl<S: Scalar> LowestWeightBasis<S> {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

impl LowestWeightBasis<f64> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.labels.n(),
            "N": self.total,
            "labels": self.labels.to_json(),
            "source": self.source,
            "ordering": "monomial exponents descending lexicographic, sector minor",
            "monomial_index": self.monomial_index,
            "sectors": self.vector_sectors,
            "vectors": self.vectors.iter().map(|v| v.to_json_numeric(serde_json::Value::Null)).collect::<Vec<_>>(),
            "gram": self.gram.to_rows(),
        })
    }
}

fn gram_matrix<S: Scalar>(vectors: &[WeightVector<S>]) -> Result<Mat<S>> {
    let k = vectors.len();
    let mut g = Mat::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let v = inner_product(&vectors[i], &vectors[j])?;
            g.set(j, i, v.clone());
            g.set(i, j, v);
        }
    }
    Ok(g)
}

/// Coordinates of `vectors` in `states`, one column per vector.
pub fn coordinate_matrix<S: Scalar>(vectors: &[WeightVector<S>], states: &[TensorState]) -> Mat<S> {
    let cols: Vec<Vec<S>> = vectors.iter().map(|v| states.iter().map(|s| v.coeff(s)).collect()).collect();
    Mat::from_columns(states.len(), &cols)
}

fn vacuum<S: Scalar>(sector: &[u8]) -> WeightVector<S> {
    WeightVector::basis(TensorState::vacuum(sector))
}

fn expected_dim(n: usize, total: u32, sectors: usize) -> Result<usize> {
    let c = counts(n, total)?;
    Ok(*c.lowest.last().expect("nonempty") as usize * sectors)
}

/// `Delta alpha-` from `W_N` to `W_{N-1}` on one sector.
fn lowering_matrix<M: Model>(model: &M, sector: &[u8], total: u32) -> (Vec<TensorState>, Mat<M::Scalar>) {
    let n = sector.len();
    let dom: Vec<TensorState> = compositions(n, total)
        .into_iter()
        .map(|o| TensorState { assignment: sector.to_vec(), occupations: o })
        .collect();
    let cod: Vec<TensorState> = if total == 0 {
        Vec::new()
    } else {
        compositions(n, total - 1)
            .into_iter()
            .map(|o| TensorState { assignment: sector.to_vec(), occupations: o })
            .collect()
    };
    let m = operator_matrix(&dom, &cod, |v| coproduct_action(model, Generator::Lower, v));
    (dom, m)
}

/// Orthonormal basis of `ker Delta alpha-` on the weight space.
pub fn lowest_weight_kernel(
    model: &NumericModel,
    total: u32,
    sector: &SectorChoice,
    tol: &Tolerances,
) -> Result<LowestWeightBasis<f64>> {
    let labels = model.labels().clone();
    let sectors = sector.resolve(&labels)?;
    let mut vectors = Vec::new();
    let mut vector_sectors = Vec::new();
    for s in &sectors {
        let (dom, lower) = lowering_matrix(model, s, total);
        let kernel = if total == 0 { Mat::identity(1) } else { numeric_kernel(&lower, tol.kernel_rel) };
        let raw: Vec<WeightVector<f64>> = (0..kernel.cols())
            .map(|c| dom.iter().zip(kernel.column(c)).map(|(st, x)| (st.clone(), x)).collect())
            .collect();
        for v in gram_schmidt(&raw, tol.kernel_rel) {
            vectors.push(v);
            vector_sectors.push(s.clone());
        }
    }
    let expected = expected_dim(labels.n(), total, sectors.len())?;
    if vectors.len() != expected {
        return Err(Error::DimensionMismatch { what: "lowest-weight kernel".into(), expected, found: vectors.len() });
    }
    let gram = gram_matrix(&vectors)?;
    Ok(LowestWeightBasis {
        labels,
        total,
        source: LowestWeightSource::Kernel,
        vectors,
        monomial_index: Vec::new(),
        vector_sectors,
        gram,
    })
}

/// Exact polynomial basis of `ker Delta alpha-` for homogeneous labels, in
/// the unnormalized basis of the exact model. Not orthonormalized.
pub fn lowest_weight_kernel_exact(model: &ExactModel, total: u32) -> Result<LowestWeightBasis<LaurentPoly>> {
    let labels = model.labels().clone();
    let sector = labels.initial().to_vec();
    let (dom, lower) = lowering_matrix(model, &sector, total);
    let kernel = if total == 0 { vec![vec![LaurentPoly::one()]] } else { exact_kernel(&lower)? };
    let vectors: Vec<WeightVector<LaurentPoly>> =
        kernel.into_iter().map(|col| dom.iter().cloned().zip(col).collect()).collect();
    let expected = expected_dim(labels.n(), total, 1)?;
    if vectors.len() != expected {
        return Err(Error::DimensionMismatch {
            what: "exact lowest-weight kernel".into(),
            expected,
            found: vectors.len(),
        });
    }
    let gram = gram_matrix(&vectors)?;
    Ok(LowestWeightBasis {
        labels,
        total,
        source: LowestWeightSource::Kernel,
        vector_sectors: vec![sector; vectors.len()],
        vectors,
        monomial_index: Vec::new(),
        gram,
    })
}

/// `O_1^{j_1} ... O_{n-1}^{j_{n-1}}` applied to `v`.
pub fn apply_monomial<M: Model>(model: &M, exponents: &[u32], v: &WeightVector<M::Scalar>) -> WeightVector<M::Scalar> {
    let mut out = v.clone();
    for (k, &e) in exponents.iter().enumerate().rev() {
        for _ in 0..e {
            out = apply_o(model, k, &out);
        }
    }
    out
}

/// Vectors, their exponents and their sectors.
type MonomialVectors<S> = (Vec<WeightVector<S>>, Vec<Vec<u32>>, Vec<Vec<u8>>);

fn monomial_vectors<M: Model>(model: &M, total: u32, sectors: &[Vec<u8>]) -> MonomialVectors<M::Scalar>
where
    M::Scalar: Send,
{
    let n = model.labels().n();
    let jobs: Vec<(Vec<u32>, Vec<u8>)> = monomial_exponents(n, total)
        .into_iter()
        .flat_map(|e| sectors.iter().map(move |s| (e.clone(), s.clone())))
        .collect();
    let vectors: Vec<_> = jobs.par_iter().map(|(e, s)| apply_monomial(model, e, &vacuum(s))).collect();
    let (idx, sec) = jobs.into_iter().unzip();
    (vectors, idx, sec)
}

/// `|Delta alpha- v|` relative to the same action with all coefficients
/// replaced by magnitudes, which bounds the size of any cancellation.
pub fn lowering_residual(model: &NumericModel, v: &WeightVector<f64>) -> f64 {
    let lowered = coproduct_action(model, Generator::Lower, v);
    let abs: WeightVector<f64> = v.terms().map(|(s, c)| (s.clone(), c.abs())).collect();
    let scale = coproduct_action(model, Generator::Lower, &abs).norm();
    if scale == 0.0 {
        0.0
    } else {
        lowered.norm() / scale
    }
}

/// `O`-monomials of degree `total` applied to the vacuum of every chosen
/// sector. Monomial major, sector minor.
pub fn lowest_weight_monomials(
    model: &NumericModel,
    total: u32,
    sector: &SectorChoice,
    tol: &Tolerances,
) -> Result<LowestWeightBasis<f64>> {
    let labels = model.labels().clone();
    let sectors = sector.resolve(&labels)?;
    let (vectors, monomial_index, vector_sectors) = monomial_vectors(model, total, &sectors);
    for (v, e) in vectors.iter().zip(&monomial_index) {
        let r = lowering_residual(model, v);
        if r > tol.lowest_weight_residual {
            return Err(Error::InvalidParameter(format!("monomial {e:?} is not lowest weight (residual {r:e})")));
        }
    }
    let gram = gram_matrix(&vectors)?;
    let k = vectors.len();
    if k > 0 {
        let ev = symmetric_eigenvalues(&gram);
        let top = ev.last().copied().unwrap_or(0.0);
        if ev[0] <= tol.kernel_rel * top {
            return Err(Error::Singular(format!(
                "Gram matrix of O-monomials is not positive definite (lambda_min/lambda_max = {:e})",
                ev[0] / top
            )));
        }
    }
    Ok(LowestWeightBasis {
        labels,
        total,
        source: LowestWeightSource::Monomials,
        vectors,
        monomial_index,
        vector_sectors,
        gram,
    })
}

/// Exact `O`-monomial basis for homogeneous labels.
pub fn lowest_weight_monomials_exact(model: &ExactModel, total: u32) -> Result<LowestWeightBasis<LaurentPoly>> {
    let labels = model.labels().clone();
    let sectors = vec![labels.initial().to_vec()];
    let (vectors, monomial_index, vector_sectors) = monomial_vectors(model, total, &sectors);
    for (v, e) in vectors.iter().zip(&monomial_index) {
        if !coproduct_action(model, Generator::Lower, v).is_zero() {
            return Err(Error::InvalidParameter(format!("monomial {e:?} is not lowest weight")));
        }
    }
    let gram = gram_matrix(&vectors)?;
    if exact_rank(&gram)? != vectors.len() {
        return Err(Error::Singular("Gram matrix of O-monomials is rank deficient".into()));
    }
    Ok(LowestWeightBasis {
        labels,
        total,
        source: LowestWeightSource::Monomials,
        vectors,
        monomial_index,
        vector_sectors,
        gram,
    })
}

fn union_states<S: Scalar>(sets: &[&[WeightVector<S>]]) -> Vec<TensorState> {
    let mut states: Vec<TensorState> =
        sets.iter().flat_map(|vs| vs.iter()).flat_map(|v| v.terms().map(|(s, _)| s.clone())).collect();
    states.sort();
    states.dedup();
    states
}

/// Largest relative residual of projecting each vector of one family onto
/// the span of the other, taken both ways.
pub fn mutual_projection_residual(a: &[WeightVector<f64>], b: &[WeightVector<f64>], rel: f64) -> Result<f64> {
    let states = union_states(&[a, b]);
    let ma = coordinate_matrix(a, &states);
    let mb = coordinate_matrix(b, &states);
    let (_, r1) = least_squares(&mb, &ma, rel)?;
    let (_, r2) = least_squares(&ma, &mb, rel)?;
    Ok(r1.max(r2))
}

/// Exact span equality by ranks.
pub fn exact_span_equal(a: &[WeightVector<LaurentPoly>], b: &[WeightVector<LaurentPoly>]) -> Result<bool> {
    let states = union_states(&[a, b]);
    let ma = coordinate_matrix(a, &states);
    let mb = coordinate_matrix(b, &states);
    let ra = exact_rank(&ma)?;
    let rb = exact_rank(&mb)?;
    let rab = exact_rank(&ma.hstack(&mb))?;
    Ok(ra == rb && ra == rab)
}

/// Result of checking the direct-sum decomposition of a weight space.
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub n: usize,
    #[serde(rename = "N")]
    pub total: u32,
    pub sectors: usize,
    /// Expected `M_{n,j}` per sector.
    pub expected_dims: Vec<u128>,
    /// Numeric rank of each block.
    pub block_dims: Vec<usize>,
    /// Casimir eigenvalue `[Gamma](c + j)` per block.
    pub eigenvalues: Vec<f64>,
    /// Worst eigenvector residual per block.
    pub casimir_residuals: Vec<f64>,
    pub weight_dim: usize,
    pub union_rank: usize,
    /// Eigenvalue multiplicities of the Casimir on the weight space, per
    /// block eigenvalue, summed over sectors.
    pub multiplicities: Vec<usize>,
    /// Casimir eigenvalues that matched no block eigenvalue.
    pub unmatched_eigenvalues: Vec<f64>,
    /// Largest normalized inner product between vectors of different
    /// blocks. Reported only.
    pub block_overlap: f64,
    pub passed: bool,
    pub failures: Vec<String>,
}

pub fn verify_decomposition(model: &NumericModel, total: u32, tol: &Tolerances) -> Result<DecompositionReport> {
    let labels = model.labels().clone();
    let n = labels.n();
    let sectors = labels.sectors();
    let c = counts(n, total)?;
    let gamma = model.qnum_total();
    let c_total = labels.c_total();
    let mut failures = Vec::new();

    let mut blocks: Vec<Vec<WeightVector<f64>>> = Vec::new();
    let mut eigenvalues = Vec::new();
    let mut residuals = Vec::new();
    let mut block_dims = Vec::new();
    let basis = enumerate_weight_basis(&labels, total, &SectorChoice::All)?;

    for j in 0..=total {
        let (lw, _, _) = monomial_vectors(model, j, &sectors);
        let block: Vec<WeightVector<f64>> = lw
            .par_iter()
            .map(|v| {
                let mut w = v.clone();
                for _ in j..total {
                    w = coproduct_action(model, Generator::Raise, &w);
                }
                w
            })
            .collect();
        let lambda = gamma * (c_total + j as f64);
        let worst = block
            .iter()
            .map(|v| {
                let cv = casimir_action(model, v);
                let diff = cv.sub(&v.scaled(&lambda));
                let scale = cv.norm() + lambda.abs() * v.norm();
                if scale == 0.0 {
                    0.0
                } else {
                    diff.norm() / scale
                }
            })
            .fold(0.0, f64::max);
        if worst > tol.casimir {
            failures.push(format!("block j={j}: Casimir residual {worst:e}"));
        }
        let rank = numeric_rank(&coordinate_matrix(&block, &basis.states), tol.kernel_rel);
        let expected = c.lowest[j as usize] as usize * sectors.len();
        if rank != expected {
            failures.push(format!("block j={j}: rank {rank}, expected {expected}"));
        }
        eigenvalues.push(lambda);
        residuals.push(worst);
        block_dims.push(rank);
        blocks.push(block);
    }

    let all: Vec<WeightVector<f64>> = blocks.iter().flatten().cloned().collect();
    let union_rank = numeric_rank(&coordinate_matrix(&all, &basis.states), tol.kernel_rel);
    let sum: u128 = c.lowest.iter().sum();
    if sum != c.weight_dim {
        failures.push(format!("sum of M_(n,j) is {sum}, N_(n,N) is {}", c.weight_dim));
    }
    if union_rank != basis.dim() {
        failures.push(format!("union rank {union_rank}, weight space dimension {}", basis.dim()));
    }

    let mut overlap: f64 = 0.0;
    for a in 0..blocks.len() {
        for b in a + 1..blocks.len() {
            for u in &blocks[a] {
                for v in &blocks[b] {
                    let ip = inner_product(u, v)?;
                    overlap = overlap.max(ip.abs() / (u.norm() * v.norm()));
                }
            }
        }
    }

    let casimir = operator_matrix(&basis.states, &basis.states, |v| casimir_action(model, v));
    let ev = symmetric_eigenvalues(&casimir);
    let scale = eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs())).max(1.0);
    let mut multiplicities = vec![0usize; eigenvalues.len()];
    let mut unmatched = Vec::new();
    for e in ev {
        match eigenvalues.iter().position(|l| (e - l).abs() <= tol.casimir * scale) {
            Some(p) => multiplicities[p] += 1,
            None => unmatched.push(e),
        }
    }
    for (j, (&m, &d)) in multiplicities.iter().zip(&c.lowest).enumerate() {
        let expected = d as usize * sectors.len();
        if m != expected {
            failures.push(format!("eigenvalue j={j}: multiplicity {m}, expected {expected}"));
        }
    }
    if !unmatched.is_empty() {
        failures.push(format!("{} Casimir eigenvalues match no block", unmatched.len()));
    }

    Ok(DecompositionReport {
        n,
        total,
        sectors: sectors.len(),
        expected_dims: c.lowest,
        block_dims,
        eigenvalues,
        casimir_residuals: residuals,
        weight_dim: basis.dim(),
        union_rank,
        multiplicities,
        unmatched_eigenvalues: unmatched,
        block_overlap: overlap,
        passed: failures.is_empty(),
        failures,
    })
}

/// Normalized lowest-weight vector `([Gamma]^k k!)^{-1/2} O^k v_0` for two
/// slots, `Gamma` the total label.
pub fn two_slot_normalized(model: &NumericModel, k: u32) -> Result<WeightVector<f64>> {
    let labels = model.labels();
    if labels.n() != 2 {
        return Err(Error::InvalidParameter("two-slot normalization needs n = 2".into()));
    }
    let v = apply_monomial(model, &[k], &vacuum(labels.initial()));
    let fact: f64 = (1..=k).map(f64::from).product();
    let norm = (model.qnum_total().powi(k as i32) * fact).sqrt();
    Ok(v.scaled(&(1.0 / norm)))
}

/// Descendants `v_m = ([Gamma]^m m!)^{-1/2} (Delta alpha+)^m v_0` spanning
/// the two-slot weight space at level `total`, one per `j = 0..=total`
/// with `m = total - j`.
pub fn two_slot_descendants(model: &NumericModel, total: u32) -> Result<Vec<WeightVector<f64>>> {
    (0..=total)
        .map(|j| {
            let mut w = two_slot_normalized(model, j)?;
            let m = total - j;
            for _ in 0..m {
                w = coproduct_action(model, Generator::Raise, &w);
            }
            let fact: f64 = (1..=m).map(f64::from).product();
            let norm = (model.qnum_total().powi(m as i32) * fact).sqrt();
            Ok(w.scaled(&(1.0 / norm)))
        })
        .collect()
}

/// Smallest Gram eigenvalue relative to the largest.
pub fn gram_condition(gram: &Mat<f64>) -> f64 {
    if gram.rows() == 0 {
        return 1.0;
    }
    let top = symmetric_eigenvalues(gram).last().copied().unwrap_or(0.0);
    if top == 0.0 {
        0.0
    } else {
        min_eigenvalue(gram) / top
    }
}

/// Numeric lowest-weight residual of every vector, for reports.
pub fn residuals(model: &NumericModel, basis: &LowestWeightBasis<f64>) -> Vec<f64> {
    basis.vectors.iter().map(|v| lowering_residual(model, v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::RepLabel;

    fn lab(g: f64, c: f64) -> RepLabel {
        RepLabel::new(g, c).unwrap()
    }

    fn model(q: f64, ls: &[(f64, f64)]) -> NumericModel {
        let labels: Vec<_> = ls.iter().map(|&(g, c)| lab(g, c)).collect();
        NumericModel::new(q, LabelSet::new(&labels).unwrap()).unwrap()
    }

    #[test]
    fn counting_examples() {
        let c = counts(3, 3).unwrap();
        assert_eq!(c.weight_dim, 10);
        assert_eq!(c.lowest, vec![1, 2, 3, 4]);
        let c = counts(4, 0).unwrap();
        assert_eq!((c.weight_dim, c.lowest.clone()), (1, vec![1]));
        let c = counts(5, 2).unwrap();
        assert_eq!(c.weight_dim, 15);
        assert_eq!(c.lowest, vec![1, 4, 10]);
        assert!(counts(1, 2).is_err());
    }

    #[test]
    fn enumeration_examples() {
        let l = LabelSet::homogeneous(3, lab(1.0, 1.0)).unwrap();
        let b = enumerate_weight_basis(&l, 3, &SectorChoice::All).unwrap();
        assert_eq!(b.dim(), 10);
        assert_eq!(b.states[0].occupations, vec![0, 0, 3]);
        assert_eq!(b.states[9].occupations, vec![3, 0, 0]);
        let l = LabelSet::homogeneous(2, lab(1.0, 1.0)).unwrap();
        let b = enumerate_weight_basis(&l, 0, &SectorChoice::All).unwrap();
        assert_eq!(b.states.len(), 1);
        assert_eq!(b.states[0].occupations, vec![0, 0]);
    }

    #[test]
    fn monomial_order() {
        assert_eq!(monomial_exponents(3, 1), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(monomial_exponents(3, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomial_exponents(4, 2)[1], vec![1, 1, 0]);
    }

    #[test]
    fn two_slot_kernel_vector() {
        let (q, g1, g2) = (0.6, 1.3, 0.8);
        let m = model(q, &[(g1, 0.7), (g2, 1.4)]);
        let k = lowest_weight_kernel(&m, 1, &SectorChoice::One(vec![0, 1]), &Tolerances::default()).unwrap();
        assert_eq!(k.len(), 1);
        let qn = |g: f64| (q.powf(g) - q.powf(-g)) / (q - 1.0 / q);
        let s = vec![0u8, 1];
        let e01 = TensorState { assignment: s.clone(), occupations: vec![0, 1] };
        let e10 = TensorState { assignment: s, occupations: vec![1, 0] };
        let a = q.powf(g2 / 2.0) * qn(g1).sqrt();
        let b = -q.powf(-g1 / 2.0) * qn(g2).sqrt();
        let v = &k.vectors[0];
        assert!((v.coeff(&e01) * b - v.coeff(&e10) * a).abs() < 1e-12);
    }

    #[test]
    fn kernel_dimensions() {
        let m = model(0.5, &[(1.1, 0.4), (0.9, 1.2), (1.7, 2.0)]);
        let k = lowest_weight_kernel(&m, 3, &SectorChoice::One(vec![0, 1, 2]), &Tolerances::default()).unwrap();
        assert_eq!(k.len(), 4);
    }

    #[test]
    fn monomials_span_kernel() {
        let tol = Tolerances::default();
        let m = model(0.45, &[(1.2, 0.5), (1.2, 0.5), (0.7, 2.2), (1.2, 0.5)]);
        for total in 0..=2 {
            let k = lowest_weight_kernel(&m, total, &SectorChoice::All, &tol).unwrap();
            let o = lowest_weight_monomials(&m, total, &SectorChoice::All, &tol).unwrap();
            assert_eq!(k.len(), o.len());
            let r = mutual_projection_residual(&k.vectors, &o.vectors, tol.kernel_rel).unwrap();
            assert!(r < tol.span_residual, "N={total} residual {r}");
        }
    }

    #[test]
    fn exact_kernel_matches_monomials() {
        let l = LabelSet::homogeneous(3, lab(1.0, 1.0)).unwrap();
        let m = ExactModel::new(l).unwrap();
        let k = lowest_weight_kernel_exact(&m, 2).unwrap();
        let o = lowest_weight_monomials_exact(&m, 2).unwrap();
        assert_eq!(k.len(), 3);
        assert!(exact_span_equal(&k.vectors, &o.vectors).unwrap());
    }

    #[test]
    fn decomposition_three_three() {
        let m = model(0.7, &[(1.4, 0.9), (1.4, 0.9), (1.4, 0.9)]);
        let r = verify_decomposition(&m, 3, &Tolerances::default()).unwrap();
        assert!(r.passed, "{:?}", r.failures);
        assert_eq!(r.block_dims, vec![1, 2, 3, 4]);
        assert_eq!(r.multiplicities, vec![1, 2, 3, 4]);
    }

    #[test]
    fn two_slot_descendants_orthonormal() {
        let m = model(0.55, &[(0.9, 1.1), (1.6, 0.3)]);
        for total in 0..4 {
            let vs = two_slot_descendants(&m, total).unwrap();
            for (i, u) in vs.iter().enumerate() {
                for (j, v) in vs.iter().enumerate() {
                    let ip = inner_product(u, v).unwrap();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((ip - want).abs() < 1e-10);
                }
            }
            assert!((two_slot_normalized(&m, total).unwrap().norm() - 1.0).abs() < 1e-10);
        }
    }
}
