//! Closed-form generator families, transcribed rule by rule.
//!
//! Matrices use the column convention: column `c` holds the image of basis
//! vector `c`. Laurent entries are in `x = q^{-gamma}`.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::linalg::{singular_values, Mat};
use crate::oscillator::{LabelSet, Model, NumericModel};

fn x(e: i32) -> LaurentPoly {
    LaurentPoly::int_monomial(1, e)
}

fn cx(c: i64, e: i32) -> LaurentPoly {
    LaurentPoly::int_monomial(c, e)
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    Ok(())
}

/// `sigma_k w_k = -x^2 w_k`, `sigma_k w_{k+-1} = w_{k+-1} + x w_k`, identity
/// elsewhere, on `w_1, ..., w_{n-1}`.
pub fn closed_form_burau(n: usize) -> Result<Vec<Mat<LaurentPoly>>> {
    check_n(n)?;
    let d = n - 1;
    Ok((1..n)
        .map(|k| {
            let mut m = Mat::identity(d);
            let r = k - 1;
            m.set(r, r, cx(-1, 2));
            if k < d {
                m.set(r, r + 1, x(1));
            }
            if k >= 2 {
                m.set(r, r - 1, x(1));
            }
            m
        })
        .collect())
}

/// Basis `w_{i,j}`, `1 <= i <= j <= n-1`, lexicographic.
pub fn lkb_basis(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..n {
        for j in i..n {
            out.push((i, j));
        }
    }
    out
}

/// Image of `w_{a,b}` under `sigma_i` by the case table for `N = 2`.
fn lkb_image(i: usize, a: usize, b: usize) -> Vec<((usize, usize), LaurentPoly)> {
    let w = |p: usize, q: usize| if p <= q { (p, q) } else { (q, p) };
    let near = |k: usize| k + 1 >= i && k <= i + 1;
    let one = LaurentPoly::one;
    match (a, b) {
        _ if a == i && b == i => vec![(w(i, i), x(4))],
        _ if i >= 2 && a == i - 1 && b == i => vec![(w(i - 1, i), cx(-1, 2)), (w(i, i), cx(-1, 3))],
        _ if a == i && b == i + 1 => vec![(w(i, i + 1), cx(-1, 2)), (w(i, i), cx(-1, 3))],
        _ if i >= 2 && a == i - 1 && b == i - 1 => {
            vec![(w(i, i), x(2)), (w(i - 1, i), cx(2, 1)), (w(i - 1, i - 1), one())]
        }
        _ if a == i + 1 && b == i + 1 => {
            vec![(w(i, i), x(2)), (w(i, i + 1), cx(2, 1)), (w(i + 1, i + 1), one())]
        }
        _ if i >= 2 && a == i - 1 && b == i + 1 => {
            vec![(w(i, i), x(2)), (w(i - 1, i), x(1)), (w(i, i + 1), x(1)), (w(i - 1, i + 1), one())]
        }
        _ => {
            // One index is `i` or `i +- 1`, the other `k` is away from `i`.
            let (near_idx, k) = if near(a) && !near(b) {
                (a, b)
            } else if near(b) && !near(a) {
                (b, a)
            } else {
                return vec![(w(a, b), one())];
            };
            if near_idx == i {
                vec![(w(i, k), cx(-1, 2))]
            } else {
                vec![(w(i, k), x(1)), (w(near_idx, k), one())]
            }
        }
    }
}

/// Generators on `w_{i,j} = O_i O_j v_0` for homogeneous labels at `N = 2`.
pub fn closed_form_lkb(n: usize) -> Result<Vec<Mat<LaurentPoly>>> {
    check_n(n)?;
    let basis = lkb_basis(n);
    let index: HashMap<(usize, usize), usize> = basis.iter().enumerate().map(|(p, &b)| (b, p)).collect();
    let d = basis.len();
    Ok((1..n)
        .map(|i| {
            let mut m = Mat::<LaurentPoly>::zeros(d, d);
            for (col, &(a, b)) in basis.iter().enumerate() {
                for (t, c) in lkb_image(i, a, b) {
                    let row = index[&t];
                    let v = m.get(row, col).clone() + c;
                    m.set(row, col, v);
                }
            }
            m
        })
        .collect())
}

/// `N = 0`: the 1x1 identity after renormalization.
pub fn closed_form_trivial(n: usize) -> Result<Vec<Mat<LaurentPoly>>> {
    check_n(n)?;
    Ok((1..n).map(|_| Mat::identity(1)).collect())
}

/// Label classes of the one-distinguished family.
struct Distinguished {
    base: u8,
    other: u8,
}

fn distinguished(labels: &LabelSet) -> Result<Distinguished> {
    let n = labels.n();
    if labels.classes().len() != 2 || n < 3 {
        return Err(Error::Unsupported(
            "the N = 1 inhomogeneous family needs n >= 3 slots with exactly one different label".into(),
        ));
    }
    let count = |c: u8| labels.initial().iter().filter(|&&x| x == c).count();
    match (count(0), count(1)) {
        (1, _) => Ok(Distinguished { base: 1, other: 0 }),
        (_, 1) => Ok(Distinguished { base: 0, other: 1 }),
        _ => Err(Error::Unsupported("the N = 1 inhomogeneous family needs exactly one different label".into())),
    }
}

/// 1-based slot of the distinguished label in a sector.
fn j_of(sector: &[u8], other: u8) -> usize {
    sector.iter().position(|&c| c == other).expect("sector holds the class") + 1
}

/// Generators on `w_k^{(j)} = O_k v_0^{(j)}`, where the `j`-th slot carries
/// the distinguished label, by the case table for one different label at
/// `N = 1`. Entries are evaluated at the model's `q`; the phases `d_1`, `d_2`
/// are kept. The basis order is `k` major and then the sectors in
/// [`LabelSet::sectors`] order.
pub fn closed_form_distinguished(model: &NumericModel) -> Result<Vec<Mat<f64>>> {
    let labels = model.labels();
    let lay = distinguished(labels)?;
    let n = labels.n();
    let sectors = labels.sectors();
    let l1 = labels.class(lay.base);
    let l2 = labels.class(lay.other);
    let q = model.q();
    let (g1, c1, g2, c2) = (l1.gamma, l1.c, l2.gamma, l2.c);
    let x1 = q.powf(-g1);
    let d1 = q.powf(-2.0 * c1 * g1);
    let d2 = q.powf(-c2 * g1 - c1 * g2);
    let d3 = (model.qnum(lay.base) / model.qnum(lay.other)).sqrt();
    let g12 = q.powf(-g1 - g2);
    let xq2 = q.powf(-g2);

    let mut index = HashMap::new();
    let mut p = 0;
    for k in 1..n {
        for s in &sectors {
            index.insert((k, j_of(s, lay.other)), p);
            p += 1;
        }
    }
    let dim = p;

    let mut mats = Vec::with_capacity(n - 1);
    for i in 1..n {
        let mut m = Mat::zeros(dim, dim);
        let mut put = |from: (usize, usize), to: (usize, usize), v: f64| {
            let (r, c) = (index[&to], index[&from]);
            let cur = *m.get(r, c);
            m.set(r, c, cur + v);
        };
        for s in &sectors {
            let j = j_of(s, lay.other);
            for k in 1..n {
                let from = (k, j);
                let ii = i as i64;
                let (jj, kk) = (j as i64, k as i64);
                if ii == jj - 1 {
                    let t = j - 1;
                    if k == i {
                        put(from, (i, t), -g12 * d2);
                    } else if k == i + 1 {
                        put(from, (i, t), x1 * d2);
                        put(from, (i + 1, t), d2 / d3);
                    } else if kk == ii - 1 {
                        put(from, (k, t), d3 * d2);
                        put(from, (i, t), d3 * xq2 * d2);
                    } else {
                        put(from, (k, t), d2);
                    }
                } else if ii == jj {
                    let t = j + 1;
                    if k == i {
                        put(from, (i, t), -g12 * d2);
                    } else if k == i + 1 {
                        put(from, (i, t), d3 * xq2 * d2);
                        put(from, (i + 1, t), d3 * d2);
                    } else if kk == ii - 1 {
                        put(from, (k, t), d2 / d3);
                        put(from, (i, t), x1 * d2);
                    } else {
                        put(from, (k, t), d2);
                    }
                } else {
                    // Sector unchanged: `i > j+1`, `i < j-2`, `i = j-2` or `i = j+1`.
                    let up = if ii == jj - 2 { 1.0 / d3 } else { 1.0 };
                    let down = if ii == jj + 1 { 1.0 / d3 } else { 1.0 };
                    if k == i {
                        put(from, (i, j), -x1 * x1 * d1);
                    } else if k == i + 1 {
                        put(from, (i, j), x1 * d1 * up);
                        put(from, (k, j), d1);
                    } else if kk == ii - 1 {
                        put(from, (k, j), d1);
                        put(from, (i, j), x1 * d1 * down);
                    } else {
                        put(from, (k, j), d1);
                    }
                }
            }
        }
        mats.push(m);
    }
    Ok(mats)
}

/// Which closed-form family applies to a parameter set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedFamily {
    Trivial,
    Burau,
    Lkb,
    Distinguished,
}

pub fn closed_family(labels: &LabelSet, total: u32) -> Result<ClosedFamily> {
    match (labels.is_homogeneous(), total) {
        (true, 0) => Ok(ClosedFamily::Trivial),
        (true, 1) => Ok(ClosedFamily::Burau),
        (true, 2) => Ok(ClosedFamily::Lkb),
        (false, 1) => distinguished(labels).map(|_| ClosedFamily::Distinguished),
        _ => Err(Error::Unsupported(format!(
            "no closed form for N = {total} with these labels; closed forms cover homogeneous N <= 2 and one different label at N = 1"
        ))),
    }
}

/// Laurent closed forms for the homogeneous families.
pub fn closed_form_laurent(n: usize, family: ClosedFamily) -> Result<Vec<Mat<LaurentPoly>>> {
    match family {
        ClosedFamily::Trivial => closed_form_trivial(n),
        ClosedFamily::Burau => closed_form_burau(n),
        ClosedFamily::Lkb => closed_form_lkb(n),
        ClosedFamily::Distinguished => Err(Error::Unsupported("the inhomogeneous family has no Laurent form".into())),
    }
}

/// Linear map expressing each `w_{i,j}` in an external basis `W_{a,b}`,
/// `1 <= a < b <= n`.
#[derive(Clone, Debug, Serialize)]
pub struct CorrJk {
    pub n: usize,
    pub s: f64,
    /// Row labels `(a, b)` of `W_{a,b}`.
    pub rows: Vec<(usize, usize)>,
    /// Column labels `(i, j)` of `w_{i,j}`.
    pub cols: Vec<(usize, usize)>,
    pub matrix: Vec<Vec<f64>>,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub invertible: bool,
}

pub fn corrjk_change_of_basis(n: usize, s: f64, rel: f64) -> Result<CorrJk> {
    check_n(n)?;
    if s == 0.0 || !s.is_finite() {
        return Err(Error::InvalidParameter("s must be finite and nonzero".into()));
    }
    let cols = lkb_basis(n);
    let mut rows = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            rows.push((a, b));
        }
    }
    let index: HashMap<(usize, usize), usize> = rows.iter().enumerate().map(|(p, &r)| (r, p)).collect();
    let mut m = Mat::<f64>::zeros(rows.len(), cols.len());
    for (c, &(i, r)) in cols.iter().enumerate() {
        let mut put = |a: usize, b: usize, v: f64| {
            let row = index[&(a, b)];
            let cur = *m.get(row, c);
            m.set(row, c, cur + v);
        };
        if r == i {
            put(i, i + 1, -2.0);
        } else if r == i + 1 {
            put(i, i + 1, 1.0 / s);
            put(i, i + 2, -1.0);
            put(i + 1, i + 2, s);
        } else {
            put(i, r + 1, -1.0);
            put(i + 1, r + 1, s);
            put(i, r, 1.0 / s);
            put(i + 1, r, -1.0);
        }
    }
    let sv = singular_values(&m);
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let sigma_min = sv.last().copied().unwrap_or(0.0);
    Ok(CorrJk {
        n,
        s,
        rows,
        cols,
        matrix: m.to_rows(),
        sigma_min,
        sigma_max,
        invertible: sigma_max > 0.0 && sigma_min > rel * sigma_max,
    })
}

/// Evaluate a Laurent matrix at `x`.
pub fn eval_laurent(m: &Mat<LaurentPoly>, xv: f64) -> Mat<f64> {
    m.map(|p| if p.is_zero() { 0.0 } else { p.eval(xv) })
}
