//! Dense matrices over any [`Scalar`], numeric decompositions backed by
//! nalgebra, and fraction-free elimination over Laurent polynomials.

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen, SVD};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::scalars::Scalar;

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<S>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, |a, b| a.clone() - b.clone())
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|a| a.clone() * s.clone())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Mat<T> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<T: Scalar>(&self, f: impl Fn(&S) -> Result<T>) -> Result<Mat<T>> {
        let data = self.data.iter().map(f).collect::<Result<Vec<T>>>()?;
        Ok(Mat { rows: self.rows, cols: self.cols, data })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// Submatrix of the given rows and all columns.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(idx.len(), self.cols);
        for (r, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                out.set(r, j, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn hstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows);
        let mut out = Self::zeros(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..rhs.cols {
                out.set(i, self.cols + j, rhs.get(i, j).clone());
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<S: Scalar> fmt::Debug for Mat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

// ---------------------------------------------------------------------------
// numeric

impl Mat<f64> {
    pub fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<f64>) -> Self {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out.set(i, j, m[(i, j)]);
            }
        }
        out
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Singular values and right singular vectors of `a`. The matrix is first
/// reduced to its square triangular factor by QR, which keeps the SVD
/// accurate on matrices with clustered singular values.
struct RightSvd {
    values: Vec<f64>,
    v_t: DMatrix<f64>,
}

fn right_svd(a: &Mat<f64>) -> RightSvd {
    let cols = a.cols();
    let mut m = a.to_nalgebra();
    if m.nrows() < cols {
        m = m.resize_vertically(cols, 0.0);
    }
    let r = m.qr().r();
    let svd = SVD::new(r, false, true);
    RightSvd { values: svd.singular_values.iter().copied().collect(), v_t: svd.v_t.expect("v_t requested") }
}

/// Singular values, largest first.
pub fn singular_values(a: &Mat<f64>) -> Vec<f64> {
    if a.rows() == 0 || a.cols() == 0 {
        return Vec::new();
    }
    let mut s = right_svd(a).values;
    s.truncate(a.rows().min(a.cols()));
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Numeric rank: singular values above `rel * sigma_max` count.
pub fn numeric_rank(a: &Mat<f64>, rel: f64) -> usize {
    let s = singular_values(a);
    let Some(&top) = s.first() else { return 0 };
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > rel * top).count()
}

/// Orthonormal basis of the right null space, returned as matrix columns.
pub fn numeric_kernel(a: &Mat<f64>, rel: f64) -> Mat<f64> {
    let cols = a.cols();
    if cols == 0 {
        return Mat::zeros(0, 0);
    }
    let svd = right_svd(a);
    let top = svd.values.iter().copied().fold(0.0, f64::max);
    let mut basis = Vec::new();
    for (k, &s) in svd.values.iter().enumerate() {
        if top == 0.0 || s <= rel * top {
            basis.push((0..cols).map(|j| svd.v_t[(k, j)]).collect::<Vec<_>>());
        }
    }
    Mat::from_columns(cols, &basis)
}

/// Least-squares solution of `b x = rhs` by QR, plus the largest column
/// residual `|b x - rhs| / max(|rhs|, tiny)`. `b` must have full column rank.
pub fn least_squares(b: &Mat<f64>, rhs: &Mat<f64>, rel: f64) -> Result<(Mat<f64>, f64)> {
    let s = singular_values(b);
    let top = s.first().copied().unwrap_or(0.0);
    let low = s.last().copied().unwrap_or(0.0);
    if b.cols() > 0 && (b.rows() < b.cols() || top == 0.0 || low <= rel * top) {
        return Err(Error::Singular(format!(
            "basis matrix is rank deficient (sigma_min/sigma_max = {:e})",
            if top == 0.0 { 0.0 } else { low / top }
        )));
    }
    let bn = b.to_nalgebra();
    let rn = rhs.to_nalgebra();
    let qr = bn.clone().qr();
    let qt_rhs = qr.q().transpose() * &rn;
    let x = qr
        .r()
        .solve_upper_triangular(&qt_rhs)
        .ok_or_else(|| Error::Singular("triangular factor is singular".into()))?;
    let resid = &bn * &x - &rn;
    let mut worst: f64 = 0.0;
    for j in 0..rn.ncols() {
        let scale = rn.column(j).norm().max(f64::MIN_POSITIVE);
        worst = worst.max(resid.column(j).norm() / scale);
    }
    Ok((Mat::from_nalgebra(&x), worst))
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(a: &Mat<f64>) -> Vec<f64> {
    let n = a.to_nalgebra();
    let sym = (&n + n.transpose()) * 0.5;
    let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Smallest eigenvalue of the symmetrized matrix.
pub fn min_eigenvalue(a: &Mat<f64>) -> f64 {
    symmetric_eigenvalues(a).first().copied().unwrap_or(f64::INFINITY)
}

/// Relative entry-wise comparison. Entries smaller than `floor` times the
/// largest entry of either matrix are compared absolutely against
/// `tol * max_entry`. Returns the first offending `(row, col, a, b)`.
pub fn first_entry_mismatch(a: &Mat<f64>, b: &Mat<f64>, tol: f64, floor: f64) -> Option<(usize, usize, f64, f64)> {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Some((a.rows(), a.cols(), f64::NAN, f64::NAN));
    }
    let top = a.max_abs().max(b.max_abs());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let (x, y) = (*a.get(i, j), *b.get(i, j));
            let scale = x.abs().max(y.abs());
            let ok = if scale <= floor * top { (x - y).abs() <= tol * top } else { (x - y).abs() <= tol * scale };
            if !ok || !x.is_finite() || !y.is_finite() {
                return Some((i, j, x, y));
            }
        }
    }
    None
}

/// Largest relative entry-wise error, with the same floor rule as
/// [`first_entry_mismatch`].
pub fn max_relative_error(a: &Mat<f64>, b: &Mat<f64>, floor: f64) -> f64 {
    let top = a.max_abs().max(b.max_abs()).max(f64::MIN_POSITIVE);
    let mut worst: f64 = 0.0;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let (x, y) = (*a.get(i, j), *b.get(i, j));
            let scale = x.abs().max(y.abs());
            let scale = if scale <= floor * top { top } else { scale };
            worst = worst.max((x - y).abs() / scale);
        }
    }
    worst
}

// ---------------------------------------------------------------------------
// exact

/// Fraction-free Gauss-Jordan elimination restricted to the first
/// `pivot_cols` columns. On return every pivot row has the common pivot
/// value `d` in its pivot column and zeros in the other pivot columns.
pub struct Echelon {
    pub matrix: Mat<LaurentPoly>,
    pub pivots: Vec<usize>,
    pub denominator: LaurentPoly,
}

pub fn fraction_free_echelon(a: &Mat<LaurentPoly>, pivot_cols: usize) -> Result<Echelon> {
    let mut m = a.clone();
    let mut prev = LaurentPoly::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..pivot_cols.min(m.cols()) {
        if r == m.rows() {
            break;
        }
        let Some(p) = (r..m.rows()).find(|&i| !m.get(i, col).is_zero()) else {
            continue;
        };
        m.swap_rows(p, r);
        let piv = m.get(r, col).clone();
        for i in 0..m.rows() {
            if i == r {
                continue;
            }
            let f = m.get(i, col).clone();
            for j in 0..m.cols() {
                let v = &(&piv * m.get(i, j)) - &(&f * m.get(r, j));
                let q = v
                    .div_exact(&prev)
                    .ok_or_else(|| Error::InexactDivision(format!("elimination step at column {col}")))?;
                m.set(i, j, q);
            }
        }
        prev = piv;
        pivots.push(col);
        r += 1;
    }
    Ok(Echelon { matrix: m, pivots, denominator: prev })
}

pub fn exact_rank(a: &Mat<LaurentPoly>) -> Result<usize> {
    Ok(fraction_free_echelon(a, a.cols())?.pivots.len())
}

/// Polynomial basis of the right null space over the fraction field.
pub fn exact_kernel(a: &Mat<LaurentPoly>) -> Result<Vec<Vec<LaurentPoly>>> {
    let ech = fraction_free_echelon(a, a.cols())?;
    let cols = a.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !ech.pivots.contains(c)).collect();
    let mut out = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x = vec![LaurentPoly::zero(); cols];
        x[f] = ech.denominator.clone();
        for (row, &p) in ech.pivots.iter().enumerate() {
            x[p] = -ech.matrix.get(row, f).clone();
        }
        out.push(x);
    }
    Ok(out)
}

/// Exact solution of `b x = rhs` for `b` of full column rank. Fails when a
/// right-hand side is outside the column span or the solution is not a
/// Laurent polynomial.
pub fn exact_solve(b: &Mat<LaurentPoly>, rhs: &Mat<LaurentPoly>) -> Result<Mat<LaurentPoly>> {
    let k = b.cols();
    let aug = b.hstack(rhs);
    let ech = fraction_free_echelon(&aug, k)?;
    if ech.pivots.len() != k {
        return Err(Error::Singular(format!("basis has rank {} < {k} over the Laurent field", ech.pivots.len())));
    }
    for i in k..ech.matrix.rows() {
        for j in 0..rhs.cols() {
            if !ech.matrix.get(i, k + j).is_zero() {
                return Err(Error::Singular(format!("right-hand side column {j} is outside the span")));
            }
        }
    }
    let mut x = Mat::zeros(k, rhs.cols());
    for (row, &p) in ech.pivots.iter().enumerate() {
        for j in 0..rhs.cols() {
            let v = ech.matrix.get(row, k + j).div_exact(&ech.denominator).ok_or_else(|| {
                Error::InexactDivision(format!("solution entry ({p}, {j}) is not a Laurent polynomial"))
            })?;
            x.set(p, j, v);
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i32, i64)]) -> LaurentPoly {
        terms.iter().fold(LaurentPoly::zero(), |acc, &(e, c)| acc + LaurentPoly::int_monomial(c, e))
    }

    #[test]
    fn numeric_kernel_of_wide_matrix() {
        let a = Mat::from_rows(vec![vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 1.0]]);
        let k = numeric_kernel(&a, 1e-10);
        assert_eq!(k.cols(), 1);
        assert!(a.mul(&k).max_abs() < 1e-14);
        assert_eq!(numeric_rank(&a, 1e-10), 2);
    }

    #[test]
    fn least_squares_recovers_coordinates() {
        let b = Mat::from_rows(vec![vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 2.0]]);
        let x = Mat::from_rows(vec![vec![3.0], vec![-1.5]]);
        let (sol, resid) = least_squares(&b, &b.mul(&x), 1e-12).unwrap();
        assert!(sol.sub(&x).max_abs() < 1e-13);
        assert!(resid < 1e-14);
    }

    #[test]
    fn exact_kernel_annihilates() {
        // [[x, 1, 0], [0, x, 1 - x^2]]
        let a = Mat::from_rows(vec![
            vec![lp(&[(1, 1)]), lp(&[(0, 1)]), LaurentPoly::zero()],
            vec![LaurentPoly::zero(), lp(&[(1, 1)]), lp(&[(0, 1), (2, -1)])],
        ]);
        let ker = exact_kernel(&a).unwrap();
        assert_eq!(ker.len(), 1);
        let v = Mat::from_columns(3, &ker);
        assert!(a.mul(&v).is_zero());
    }

    #[test]
    fn exact_solve_round_trip() {
        let b = Mat::from_rows(vec![
            vec![lp(&[(1, 1)]), lp(&[(0, 1)])],
            vec![lp(&[(-1, 2)]), lp(&[(0, 1), (1, 1)])],
            vec![lp(&[(0, 3)]), LaurentPoly::zero()],
        ]);
        let x = Mat::from_rows(vec![vec![lp(&[(2, 1)])], vec![lp(&[(-3, -1), (0, 4)])]]);
        let sol = exact_solve(&b, &b.mul(&x)).unwrap();
        assert_eq!(sol, x);
        let outside = Mat::from_rows(vec![vec![lp(&[(0, 1)])], vec![LaurentPoly::zero()], vec![LaurentPoly::zero()]]);
        assert!(exact_solve(&b, &outside).is_err());
    }

    #[test]
    fn mismatch_reports_position() {
        let a = Mat::from_rows(vec![vec![1.0, 2.0], vec![0.0, 1e-20]]);
        let b = Mat::from_rows(vec![vec![1.0, 2.0 + 1e-6], vec![0.0, 0.0]]);
        assert_eq!(first_entry_mismatch(&a, &b, 1e-8, 1e-12).map(|m| (m.0, m.1)), Some((0, 1)));
        assert!(first_entry_mismatch(&a, &a, 1e-8, 1e-12).is_none());
    }
}
