//! Generator matrices on lowest-weight bases by three routes.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::braid::action::{apply_sigma_direct, apply_sigma_series, BraidGenerator, SigmaFormula};
use crate::braid::closed::{closed_family, closed_form_distinguished, closed_form_laurent, eval_laurent, ClosedFamily};
use crate::braid::rewrite::{rewrite_sigma, OMonomial};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::linalg::{exact_solve, first_entry_mismatch, least_squares, max_relative_error, Mat};
use crate::oscillator::{ExactModel, LabelSet, Model, NumericModel};
use crate::scalars::{GlobalPhase, Scalar};
use crate::weightspace::{
    coordinate_matrix, enumerate_weight_basis, lowest_weight_monomials, lowest_weight_monomials_exact,
    monomial_exponents, SectorChoice,
};

/// How generator matrices are computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// `P R` in tensor coordinates, then coordinates in the monomial basis.
    Direct,
    /// Commuting `sigma_i` through the `O`-monomials.
    #[default]
    Rewrite,
    /// Transcribed case tables.
    ClosedForm,
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Route::Direct),
            "rewrite" => Ok(Route::Rewrite),
            "closed_form" | "closed-form" => Ok(Route::ClosedForm),
            _ => Err(Error::Parse(format!("unknown route {s:?} (direct, rewrite, closed_form)"))),
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Direct => "direct",
            Route::Rewrite => "rewrite",
            Route::ClosedForm => "closed_form",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildOptions {
    pub route: Route,
    pub formula: SigmaFormula,
    /// Build `sigma_i^{-1}` by running the construction at `q^{-1}`.
    pub inverse: bool,
    /// Keep the homogeneous phase `q^{-2 c gamma}` in the entries.
    pub raw: bool,
}

/// One basis vector `O^{exponents} v_0` on a sector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BasisElement {
    pub exponents: Vec<u32>,
    pub sector: Vec<u8>,
}

/// Monomial major, sector minor.
pub fn basis_elements(labels: &LabelSet, total: u32) -> Vec<BasisElement> {
    let sectors = labels.sectors();
    monomial_exponents(labels.n(), total)
        .into_iter()
        .flat_map(|e| sectors.iter().map(move |s| BasisElement { exponents: e.clone(), sector: s.clone() }))
        .collect()
}

/// Generator matrices `sigma_1, ..., sigma_{n-1}` (or their inverses) on a
/// lowest-weight basis.
#[derive(Clone, Debug)]
pub struct BraidMatrices<S: Scalar> {
    pub labels: LabelSet,
    pub total: u32,
    /// `None` for Laurent entries.
    pub q: Option<f64>,
    pub route: Route,
    pub formula: SigmaFormula,
    pub inverse: bool,
    pub basis: Vec<BasisElement>,
    /// The matrices times `phase` give the generators.
    pub phase: GlobalPhase,
    pub matrices: Vec<Mat<S>>,
    /// Largest relative residual of the coordinate solve on the direct route.
    pub solve_residual: Option<f64>,
    pub family: Option<ClosedFamily>,
}

impl<S: Scalar> BraidMatrices<S> {
    pub fn n(&self) -> usize {
        self.labels.n()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn generator(&self, i: usize) -> Result<&Mat<S>> {
        self.matrices
            .get(i.wrapping_sub(1))
            .ok_or_else(|| Error::InvalidParameter(format!("generator index {i} outside 1..={}", self.matrices.len())))
    }
}

fn check_basis_dim(labels: &LabelSet, total: u32, found: usize) -> Result<()> {
    let expected = basis_elements(labels, total).len();
    if expected != found {
        return Err(Error::DimensionMismatch { what: "lowest-weight basis".into(), expected, found });
    }
    Ok(())
}

fn rewrite_matrices<M: Model>(model: &M, basis: &[BasisElement]) -> Result<Vec<Mat<M::Scalar>>>
where
    M::Scalar: Send,
{
    let n = model.labels().n();
    let index: HashMap<&BasisElement, usize> = basis.iter().enumerate().map(|(p, b)| (b, p)).collect();
    (0..n - 1)
        .map(|slot| {
            let cols: Vec<Result<Vec<M::Scalar>>> = basis
                .par_iter()
                .map(|b| {
                    let mono = OMonomial::new(b.exponents.clone(), b.sector.clone());
                    let mut col = vec![M::Scalar::zero(); basis.len()];
                    for t in rewrite_sigma(model, slot, &mono) {
                        let key = BasisElement { exponents: t.exponents, sector: t.sector };
                        let row = *index.get(&key).ok_or_else(|| {
                            Error::RouteDisagreement(format!("rewritten monomial {key:?} is outside the basis"))
                        })?;
                        col[row] = col[row].clone() + t.coefficient;
                    }
                    Ok(col)
                })
                .collect();
            let cols = cols.into_iter().collect::<Result<Vec<_>>>()?;
            Ok(Mat::from_columns(basis.len(), &cols))
        })
        .collect()
}

fn phase_exponent(inverse: bool) -> GlobalPhase {
    GlobalPhase::from_integer(if inverse { -1 } else { 1 })
}

/// Numeric generator matrices.
pub fn build_numeric(
    model: &NumericModel,
    total: u32,
    opts: BuildOptions,
    tol: &Tolerances,
) -> Result<BraidMatrices<f64>> {
    let labels = model.labels().clone();
    let n = labels.n();
    let m = if opts.inverse { model.inverted() } else { model.clone() };
    let basis = basis_elements(&labels, total);
    let homogeneous = labels.is_homogeneous();
    let vac = m.r_diag(0, 0, 0, 0);
    let mut solve_residual = None;
    let mut family = None;

    let (mut matrices, already_renormalized) = match opts.route {
        Route::Direct => {
            let lw = lowest_weight_monomials(&m, total, &SectorChoice::All, tol)?;
            check_basis_dim(&labels, total, lw.len())?;
            let states = enumerate_weight_basis(&labels, total, &SectorChoice::All)?.states;
            let b = coordinate_matrix(&lw.vectors, &states);
            let mut mats = Vec::with_capacity(n - 1);
            let mut worst: f64 = 0.0;
            for i in 1..n {
                let g = BraidGenerator::new(i, n)?;
                let images = lw
                    .vectors
                    .par_iter()
                    .map(|v| apply_sigma_direct(&m, g, opts.formula, v))
                    .collect::<Result<Vec<_>>>()?;
                let rhs = coordinate_matrix(&images, &states);
                let (x, r) = least_squares(&b, &rhs, tol.kernel_rel)?;
                worst = worst.max(r);
                mats.push(x);
            }
            solve_residual = Some(worst);
            (mats, false)
        }
        Route::Rewrite => {
            if opts.formula == SigmaFormula::Printed {
                return Err(Error::Unsupported("the rewrite route does not use the printed formula".into()));
            }
            (rewrite_matrices(&m, &basis)?, false)
        }
        Route::ClosedForm => {
            let fam = closed_family(&labels, total)?;
            family = Some(fam);
            match fam {
                ClosedFamily::Distinguished => (closed_form_distinguished(&m)?, true),
                _ => {
                    let xv = m.q_half(0, -2);
                    let mats = closed_form_laurent(n, fam)?.iter().map(|p| eval_laurent(p, xv)).collect();
                    (mats, true)
                }
            }
        }
    };

    let mut phase = GlobalPhase::trivial();
    if homogeneous {
        if already_renormalized && opts.raw {
            matrices = matrices.iter().map(|x| x.scale(&vac)).collect();
        } else if !already_renormalized && !opts.raw {
            matrices = matrices.iter().map(|x| x.scale(&(1.0 / vac))).collect();
        }
        if !opts.raw {
            phase = phase_exponent(opts.inverse);
        }
    }

    Ok(BraidMatrices {
        labels,
        total,
        q: Some(model.q()),
        route: opts.route,
        formula: opts.formula,
        inverse: opts.inverse,
        basis,
        phase,
        matrices,
        solve_residual,
        family,
    })
}

fn y_to_x(m: &Mat<LaurentPoly>) -> Result<Mat<LaurentPoly>> {
    m.try_map(|p| {
        p.compress_exponents(-2)
            .ok_or_else(|| Error::InexactDivision(format!("entry {p} is not a polynomial in q^-gamma")))
    })
}

/// Laurent generator matrices in `x = q^{-gamma}` for homogeneous labels,
/// always with the phase `q^{-2 c gamma}` factored out.
pub fn build_exact(model: &ExactModel, total: u32, opts: BuildOptions) -> Result<BraidMatrices<LaurentPoly>> {
    if opts.raw {
        return Err(Error::Unsupported("the exact backend always factors out the phase q^(-2 c gamma)".into()));
    }
    if opts.formula == SigmaFormula::Printed {
        return Err(Error::Unsupported("the printed formula is numeric only".into()));
    }
    let labels = model.labels().clone();
    let n = labels.n();
    let m = if opts.inverse { model.inverted() } else { model.clone() };
    let basis = basis_elements(&labels, total);
    let mut family = None;

    let matrices = match opts.route {
        Route::Direct => {
            let lw = lowest_weight_monomials_exact(&m, total)?;
            check_basis_dim(&labels, total, lw.len())?;
            let states = enumerate_weight_basis(&labels, total, &SectorChoice::All)?.states;
            let b = coordinate_matrix(&lw.vectors, &states);
            (0..n - 1)
                .map(|slot| {
                    let images: Vec<_> = lw.vectors.par_iter().map(|v| apply_sigma_series(&m, slot, v)).collect();
                    let rhs = coordinate_matrix(&images, &states);
                    y_to_x(&exact_solve(&b, &rhs)?)
                })
                .collect::<Result<Vec<_>>>()?
        }
        Route::Rewrite => rewrite_matrices(&m, &basis)?.iter().map(y_to_x).collect::<Result<Vec<_>>>()?,
        Route::ClosedForm => {
            let fam = closed_family(&labels, total)?;
            family = Some(fam);
            let mats = closed_form_laurent(n, fam)?;
            if opts.inverse {
                mats.iter().map(|x| x.map(LaurentPoly::invert_variable)).collect()
            } else {
                mats
            }
        }
    };

    Ok(BraidMatrices {
        labels,
        total,
        q: None,
        route: opts.route,
        formula: opts.formula,
        inverse: opts.inverse,
        basis,
        phase: phase_exponent(opts.inverse),
        matrices,
        solve_residual: None,
        family,
    })
}

/// Coefficient backend for [`build_matrix`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Backend {
    Numeric {
        q: f64,
    },
    /// Laurent polynomials in `x = q^{-gamma}`; homogeneous labels only.
    Exact,
}

/// Generator matrices from either backend.
#[derive(Clone, Debug)]
pub enum BuiltMatrices {
    Numeric(BraidMatrices<f64>),
    Exact(BraidMatrices<LaurentPoly>),
}

impl BuiltMatrices {
    pub fn dim(&self) -> usize {
        match self {
            BuiltMatrices::Numeric(m) => m.dim(),
            BuiltMatrices::Exact(m) => m.dim(),
        }
    }

    pub fn generators(&self) -> usize {
        match self {
            BuiltMatrices::Numeric(m) => m.matrices.len(),
            BuiltMatrices::Exact(m) => m.matrices.len(),
        }
    }
}

/// Generator matrices `sigma_1, ..., sigma_{n-1}` on the lowest-weight
/// space at level `total`.
pub fn build_matrix(
    labels: &LabelSet,
    total: u32,
    backend: Backend,
    opts: BuildOptions,
    tol: &Tolerances,
) -> Result<BuiltMatrices> {
    match backend {
        Backend::Numeric { q } => {
            let model = NumericModel::new(q, labels.clone())?;
            build_numeric(&model, total, opts, tol).map(BuiltMatrices::Numeric)
        }
        Backend::Exact => {
            let model = ExactModel::new(labels.clone())?;
            build_exact(&model, total, opts).map(BuiltMatrices::Exact)
        }
    }
}

/// Entry-wise comparison of two matrix families.
#[derive(Clone, Debug, Serialize)]
pub struct MatrixComparison {
    pub max_relative_error: f64,
    /// `(generator, row, col, left, right)` of the first entry out of
    /// tolerance.
    pub first_mismatch: Option<(usize, usize, usize, f64, f64)>,
}

impl MatrixComparison {
    pub fn agrees(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

pub fn compare_matrices(a: &[Mat<f64>], b: &[Mat<f64>], rel: f64, floor: f64) -> Result<MatrixComparison> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { what: "generator count".into(), expected: a.len(), found: b.len() });
    }
    let mut worst: f64 = 0.0;
    let mut first = None;
    for (g, (x, y)) in a.iter().zip(b).enumerate() {
        if x.rows() != y.rows() || x.cols() != y.cols() {
            return Err(Error::DimensionMismatch { what: "matrix size".into(), expected: x.rows(), found: y.rows() });
        }
        worst = worst.max(max_relative_error(x, y, floor));
        if first.is_none() {
            if let Some((i, j, u, v)) = first_entry_mismatch(x, y, rel, floor) {
                first = Some((g + 1, i, j, u, v));
            }
        }
    }
    Ok(MatrixComparison { max_relative_error: worst, first_mismatch: first })
}

/// Parse a braid word such as `"1 2 -1"` or `"1,2,-1"`; negative entries
/// are inverse generators.
pub fn parse_word(s: &str) -> Result<Vec<i64>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            let v: i64 = t.parse().map_err(|_| Error::Parse(format!("bad braid letter {t:?}")))?;
            if v == 0 {
                return Err(Error::Parse("braid letters are nonzero".into()));
            }
            Ok(v)
        })
        .collect()
}

/// Product of generator matrices for a word, left to right, with the
/// accumulated phase.
pub fn evaluate_word<S: Scalar>(
    forward: &BraidMatrices<S>,
    backward: &BraidMatrices<S>,
    word: &[i64],
) -> Result<(Mat<S>, GlobalPhase)> {
    if forward.dim() != backward.dim() || backward.inverse == forward.inverse {
        return Err(Error::InvalidParameter("word evaluation needs a generator set and its inverse".into()));
    }
    let mut acc = Mat::identity(forward.dim());
    let mut phase = GlobalPhase::trivial();
    for &l in word {
        let (src, idx) = if l > 0 { (forward, l as usize) } else { (backward, l.unsigned_abs() as usize) };
        acc = acc.mul(src.generator(idx)?);
        phase = phase.compose(&src.phase);
    }
    Ok((acc, phase))
}

/// Maximum relative residual of `A B - 1`.
pub fn inverse_residual(a: &Mat<f64>, b: &Mat<f64>) -> f64 {
    let p = a.mul(b);
    let id = Mat::<f64>::identity(p.rows());
    p.sub(&id).max_abs() / a.max_abs().max(b.max_abs()).max(1.0)
}

/// Relative residual of `sigma_i sigma_{i+1} sigma_i = sigma_{i+1} sigma_i
/// sigma_{i+1}` and far commutation, worst case.
pub fn braid_relation_residual(m: &[Mat<f64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            let (l, r) = if j == i + 1 {
                (m[i].mul(&m[j]).mul(&m[i]), m[j].mul(&m[i]).mul(&m[j]))
            } else {
                (m[i].mul(&m[j]), m[j].mul(&m[i]))
            };
            let scale = l.max_abs().max(r.max_abs()).max(f64::MIN_POSITIVE);
            worst = worst.max(l.sub(&r).max_abs() / scale);
        }
    }
    worst
}

/// Exact braid relations.
pub fn braid_relations_exact(m: &[Mat<LaurentPoly>]) -> bool {
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            let ok = if j == i + 1 {
                m[i].mul(&m[j]).mul(&m[i]) == m[j].mul(&m[i]).mul(&m[j])
            } else {
                m[i].mul(&m[j]) == m[j].mul(&m[i])
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Whether `a b` is the identity.
pub fn is_exact_inverse(a: &Mat<LaurentPoly>, b: &Mat<LaurentPoly>) -> bool {
    a.mul(b) == Mat::identity(a.rows())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::RepLabel;

    fn numeric(q: f64, ls: &[(f64, f64)]) -> NumericModel {
        let labels: Vec<_> = ls.iter().map(|&(g, c)| RepLabel::new(g, c).unwrap()).collect();
        NumericModel::new(q, LabelSet::new(&labels).unwrap()).unwrap()
    }

    fn opts(route: Route) -> BuildOptions {
        BuildOptions { route, ..Default::default() }
    }

    #[test]
    fn word_parsing() {
        assert_eq!(parse_word("1 2, -1").unwrap(), vec![1, 2, -1]);
        assert!(parse_word("1 0").is_err());
        assert!(parse_word("a").is_err());
    }

    #[test]
    fn routes_agree_inhomogeneous() {
        let tol = Tolerances::default();
        let m = numeric(0.58, &[(1.2, 0.6), (0.8, 1.7), (1.2, 0.6)]);
        for total in 0..=2 {
            let d = build_numeric(&m, total, opts(Route::Direct), &tol).unwrap();
            let r = build_numeric(&m, total, opts(Route::Rewrite), &tol).unwrap();
            let c = compare_matrices(&d.matrices, &r.matrices, tol.route_rel, tol.entry_floor).unwrap();
            assert!(c.agrees(), "N={total}: {c:?}");
            assert!(d.solve_residual.unwrap() < 1e-10);
        }
    }

    #[test]
    fn exact_routes_agree_with_closed_forms() {
        let l = LabelSet::homogeneous(4, RepLabel::new(1.0, 0.5).unwrap()).unwrap();
        let m = ExactModel::new(l).unwrap();
        for total in 0..=2 {
            let r = build_exact(&m, total, opts(Route::Rewrite)).unwrap();
            let d = build_exact(&m, total, opts(Route::Direct)).unwrap();
            let c = build_exact(&m, total, opts(Route::ClosedForm)).unwrap();
            assert_eq!(r.matrices, d.matrices, "N={total}");
            assert_eq!(r.matrices, c.matrices, "N={total}");
            assert!(braid_relations_exact(&r.matrices));
        }
    }

    #[test]
    fn exact_inverse_flag() {
        let l = LabelSet::homogeneous(3, RepLabel::new(1.0, 0.5).unwrap()).unwrap();
        let m = ExactModel::new(l).unwrap();
        let f = build_exact(&m, 2, opts(Route::Rewrite)).unwrap();
        let b = build_exact(&m, 2, BuildOptions { inverse: true, ..opts(Route::Rewrite) }).unwrap();
        for (x, y) in f.matrices.iter().zip(&b.matrices) {
            assert!(is_exact_inverse(x, y));
        }
        let (w, p) = evaluate_word(&f, &b, &[1, 2, -1]).unwrap();
        assert_eq!(w.rows(), 3);
        assert_eq!(p, GlobalPhase::from_integer(1));
    }
}
