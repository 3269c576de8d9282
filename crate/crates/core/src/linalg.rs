//! Small dense matrices: determinants, exact and numerical rank, null vectors.

use std::any::Any;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::numeric::{ComplexF, GaussianRational, NumericError, Scalar};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let n = rows.len();
        Self { rows: n, cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |r, c| self.get(rows[r], cols[c]).clone())
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<U: Clone, E>(&self, f: impl FnMut(&T) -> Result<U, E>) -> Result<Matrix<U>, E> {
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<_, _>>()? })
    }
}

/// Commutative ring with exact division, enough for fraction-free elimination.
pub trait ExactDivRing: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self / rhs` where the quotient is known to be exact.
    fn div_exact(&self, rhs: &Self) -> Self;
}

impl<S: Scalar> ExactDivRing for S {
    fn zero() -> Self {
        <S as Scalar>::zero()
    }
    fn one() -> Self {
        <S as Scalar>::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.clone() * rhs.clone()
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.clone() - rhs.clone()
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        self.clone() / rhs.clone()
    }
}

/// Fraction-free (Bareiss) determinant of a square matrix.
///
/// Zero pivots are handled by a row swap; every division is exact.
pub fn bareiss_det<R: ExactDivRing>(m: &Matrix<R>) -> R {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return R::one();
    }
    let mut a = m.to_rows();
    let mut negate = false;
    let mut prev = R::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return R::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.div_exact(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        det.neg()
    } else {
        det
    }
}

/// Determinant by elimination with partial pivoting on magnitude.
pub fn pivoted_det<S: Scalar>(m: &Matrix<S>) -> S {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    let mut a = m.to_rows();
    let mut det = S::one();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| a[x][k].magnitude().total_cmp(&a[y][k].magnitude()))
            .expect("non-empty range");
        if a[p][k].is_zero() {
            return S::zero();
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let pivot = a[k][k].clone();
        det = det * pivot.clone();
        for i in k + 1..n {
            let factor = a[i][k].clone() / pivot.clone();
            if factor.is_zero() {
                continue;
            }
            for j in k + 1..n {
                let v = a[i][j].clone() - factor.clone() * a[k][j].clone();
                a[i][j] = v;
            }
        }
    }
    det
}

/// Determinant in the domain's preferred algorithm: fraction-free for exact
/// scalars, partially pivoted for floats.
pub fn det<S: Scalar>(m: &Matrix<S>) -> S {
    if let Some(g) = (m as &dyn Any).downcast_ref::<Matrix<GaussianRational>>() {
        let d: Box<dyn Any> = Box::new(gaussian_det(g));
        return *d.downcast::<S>().expect("S is GaussianRational here");
    }
    if S::EXACT {
        bareiss_det(m)
    } else {
        pivoted_det(m)
    }
}

/// Rank by fraction-free elimination with exact zero tests.
pub fn bareiss_rank<R: ExactDivRing>(m: &Matrix<R>) -> usize {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.to_rows();
    let mut rank = 0;
    let mut prev = R::one();
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][c].clone();
        for r in rank + 1..rows {
            for j in c + 1..cols {
                a[r][j] = a[r][j].mul(&pivot).sub(&a[r][c].mul(&a[rank][j])).div_exact(&prev);
            }
            a[r][c] = R::zero();
        }
        prev = pivot;
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Rank with exact zero tests. Gaussian rationals are eliminated over the
/// Gaussian integers after clearing denominators row by row.
pub fn exact_rank<S: Scalar>(m: &Matrix<S>) -> usize {
    match (m as &dyn Any).downcast_ref::<Matrix<GaussianRational>>() {
        Some(g) => bareiss_rank(&integral_rows(g).0),
        None => bareiss_rank(m),
    }
}

/// `a + bi` with integer parts; a ring with exact division where the
/// quotient is known to be integral.
#[derive(Clone, Debug, PartialEq)]
struct GaussianInteger {
    re: BigInt,
    im: BigInt,
}

impl ExactDivRing for GaussianInteger {
    fn zero() -> Self {
        Self { re: BigInt::zero(), im: BigInt::zero() }
    }
    fn one() -> Self {
        Self { re: BigInt::one(), im: BigInt::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn mul(&self, rhs: &Self) -> Self {
        Self { re: &self.re * &rhs.re - &self.im * &rhs.im, im: &self.re * &rhs.im + &self.im * &rhs.re }
    }
    fn sub(&self, rhs: &Self) -> Self {
        Self { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
    fn neg(&self) -> Self {
        Self { re: -&self.re, im: -&self.im }
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        if rhs.im.is_zero() {
            return Self { re: &self.re / &rhs.re, im: &self.im / &rhs.re };
        }
        let norm = &rhs.re * &rhs.re + &rhs.im * &rhs.im;
        Self {
            re: (&self.re * &rhs.re + &self.im * &rhs.im) / &norm,
            im: (&self.im * &rhs.re - &self.re * &rhs.im) / &norm,
        }
    }
}

/// Each row times the lcm of its denominators, and the product of those
/// multipliers.
fn integral_rows(m: &Matrix<GaussianRational>) -> (Matrix<GaussianInteger>, BigInt) {
    let mut scale = BigInt::one();
    let mut data = Vec::with_capacity(m.data.len());
    for r in 0..m.rows {
        let row = m.row(r);
        let d = GaussianRational::common_denominator(row).re().to_integer();
        for v in row {
            let re = (v.re() * BigRational::from_integer(d.clone())).to_integer();
            let im = (v.im() * BigRational::from_integer(d.clone())).to_integer();
            data.push(GaussianInteger { re, im });
        }
        scale *= d;
    }
    (Matrix { rows: m.rows, cols: m.cols, data }, scale)
}

fn gaussian_det(m: &Matrix<GaussianRational>) -> GaussianRational {
    let (ints, scale) = integral_rows(m);
    let d = bareiss_det(&ints);
    let scale = BigRational::from_integer(scale);
    GaussianRational::new(BigRational::from_integer(d.re) / scale.clone(), BigRational::from_integer(d.im) / scale)
}

/// A basis of `{ v : M v = 0 }`. Exact fields use reduced row echelon
/// form; float fields take right singular vectors with singular values at
/// most `1e-10 · σ_max`.
pub fn kernel<S: Scalar>(m: &Matrix<S>) -> Result<Vec<Vec<S>>, NumericError> {
    let (rows, cols) = (m.rows, m.cols);
    if !S::EXACT {
        let svd = Svd::new(&m.try_map(Scalar::to_complexf)?)?;
        let rank = svd.rank(1e-10);
        return Ok(svd.right_vectors[rank..]
            .iter()
            .map(|v| v.iter().map(|&c| S::from_complexf(ComplexF::raw(c))).collect())
            .collect());
    }
    let mut a = m.to_rows();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = S::one() / a[r][c].clone();
        for j in c..cols {
            a[r][j] = a[r][j].clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let v = a[i][j].clone() - f.clone() * a[r][j].clone();
                    a[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free = (0..cols).filter(|c| !pivots.contains(c));
    Ok(free
        .map(|f| {
            let mut v = vec![S::zero(); cols];
            v[f] = S::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[i][f].clone();
            }
            v
        })
        .collect())
}

/// All `r`-element subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < r - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    rec(0, n, r, &mut cur, &mut out);
    out
}

/// A square minor: which rows and columns, and its value.
#[derive(Clone, Debug, PartialEq)]
pub struct Minor<S> {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub value: S,
}

/// Every `size × size` minor, rows-major then columns, lexicographic.
pub fn minors<S: Scalar>(m: &Matrix<S>, size: usize) -> Vec<Minor<S>> {
    let row_sets = combinations(m.rows, size);
    let col_sets = combinations(m.cols, size);
    let mut out = Vec::with_capacity(row_sets.len() * col_sets.len());
    for rows in &row_sets {
        for cols in &col_sets {
            let value = det(&m.submatrix(rows, cols));
            out.push(Minor { rows: rows.clone(), cols: cols.clone(), value });
        }
    }
    out
}

/// Singular values (descending) and right singular vectors of a complex matrix.
#[derive(Clone, Debug)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    /// `v[j]` is the right singular vector paired with `singular_values[j]`.
    pub right_vectors: Vec<Vec<Complex64>>,
}

impl Svd {
    pub fn new(m: &Matrix<ComplexF>) -> Result<Self, NumericError> {
        let (rows, cols) = (m.rows, m.cols);
        // pad wide matrices with zero rows so V is a full basis of C^cols
        let padded = rows.max(cols);
        let dm = DMatrix::<Complex64>::from_fn(padded, cols, |r, c| {
            if r < rows {
                m.get(r, c).complex()
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        if dm.iter().any(|z| !z.is_finite()) {
            return Err(NumericError::NonFinite);
        }
        let svd = dm.svd(false, true);
        let v_t = svd.v_t.expect("requested V^H");
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        let singular_values = order.iter().map(|&j| svd.singular_values[j]).collect();
        let right_vectors = order
            .iter()
            .map(|&j| (0..cols).map(|c| v_t[(j, c)].conj()).collect())
            .collect();
        Ok(Self { singular_values, right_vectors })
    }

    pub fn max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values strictly above `rel_tol · σ_max`.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let cut = rel_tol * self.max();
        self.singular_values.iter().filter(|&&s| s > cut).count()
    }
}

/// Numerical rank with a relative singular-value threshold.
pub fn numerical_rank(m: &Matrix<ComplexF>, rel_tol: f64) -> Result<usize, NumericError> {
    Ok(Svd::new(m)?.rank(rel_tol))
}
