//! Subspace pairs `(D, E)` of `C^m ⊗ C^n` given by hyperplane equations, the
//! matrix of linear forms that a product vector must annihilate, and the
//! determinant polynomial `P(z, w)` of the qubit case.
//!
//! A hyperplane vector `A` (an `m × n` coefficient matrix, stored row-major)
//! cuts out `{ Z : Σ A_ij Z_ij = 0 }`. The pairing is bilinear: no entry of
//! `A` is conjugated.

use std::collections::BTreeMap;

use serde_json::Value;

use crate::classify::{kiem_regime, Regime};
use crate::linalg::{combinations, det, exact_rank, kernel, numerical_rank, Matrix};
use crate::numeric::{ComplexF, NumericError, Scalar};
use crate::poly::BiPoly;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SubspaceError {
    #[error("both tensor factors need dimension at least 2 (got m={m}, n={n})")]
    Dimension { m: usize, n: usize },
    #[error("{which} vector {index} has {got} entries, expected m·n = {expected}")]
    VectorLength { which: &'static str, index: usize, got: usize, expected: usize },
    #[error("{which} has {count} vectors but m·n = {mn}")]
    TooManyVectors { which: &'static str, count: usize, mn: usize },
    #[error("{which} vectors are linearly dependent (rank {rank} < {count})")]
    Dependent { which: &'static str, rank: usize, count: usize },
    #[error("k + l = {sum} but the boundary case needs m + n - 2 = {boundary}: {regime}")]
    Regime { sum: usize, boundary: usize, regime: Regime },
    #[error("this construction needs m = 2 (got m = {0})")]
    NotQubit(usize),
    #[error("invalid subspace JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// The pair `(D, E)` through the hyperplanes cutting them out.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspacePair<S> {
    m: usize,
    n: usize,
    d_perp: Vec<Vec<S>>,
    e_perp: Vec<Vec<S>>,
}

impl<S: Scalar> SubspacePair<S> {
    /// Validates shapes and linear independence of each family.
    pub fn new(m: usize, n: usize, d_perp: Vec<Vec<S>>, e_perp: Vec<Vec<S>>) -> Result<Self, SubspaceError> {
        if m < 2 || n < 2 {
            return Err(SubspaceError::Dimension { m, n });
        }
        let mn = m * n;
        for (which, family) in [("D_perp", &d_perp), ("E_perp", &e_perp)] {
            if family.len() > mn {
                return Err(SubspaceError::TooManyVectors { which, count: family.len(), mn });
            }
            for (index, v) in family.iter().enumerate() {
                if v.len() != mn {
                    return Err(SubspaceError::VectorLength { which, index, got: v.len(), expected: mn });
                }
            }
            let rank = family_rank(family, mn)?;
            if rank < family.len() {
                return Err(SubspaceError::Dependent { which, rank, count: family.len() });
            }
        }
        Ok(Self { m, n, d_perp, e_perp })
    }

    /// Builds the pair from spanning sets of `D` and `E` (each vector has
    /// `mn` entries). The hyperplanes are a kernel basis of the span; an
    /// empty span gives the zero subspace.
    pub fn from_spans(m: usize, n: usize, d_span: &[Vec<S>], e_span: &[Vec<S>]) -> Result<Self, SubspaceError> {
        Self::new(m, n, span_complement(m * n, "D_span", d_span)?, span_complement(m * n, "E_span", e_span)?)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `dim D⊥`.
    pub fn k(&self) -> usize {
        self.d_perp.len()
    }

    /// `dim E⊥`.
    pub fn l(&self) -> usize {
        self.e_perp.len()
    }

    pub fn dim_d(&self) -> usize {
        self.m * self.n - self.k()
    }

    pub fn dim_e(&self) -> usize {
        self.m * self.n - self.l()
    }

    pub fn d_perp(&self) -> &[Vec<S>] {
        &self.d_perp
    }

    pub fn e_perp(&self) -> &[Vec<S>] {
        &self.e_perp
    }

    /// Coefficient `A_ij` of hyperplane vector `v` (0-based indices).
    pub fn entry<'a>(&self, v: &'a [S], i: usize, j: usize) -> &'a S {
        &v[i * self.n + j]
    }

    pub fn to_complexf(&self) -> Result<SubspacePair<ComplexF>, NumericError> {
        let conv = |fam: &[Vec<S>]| -> Result<Vec<Vec<ComplexF>>, NumericError> {
            fam.iter().map(|v| v.iter().map(Scalar::to_complexf).collect()).collect()
        };
        Ok(SubspacePair { m: self.m, n: self.n, d_perp: conv(&self.d_perp)?, e_perp: conv(&self.e_perp)? })
    }

    /// Largest normalized violation `|Σ A_ij x_i y_j| / ‖A‖` over `D⊥`,
    /// i.e. the distance of the unit vector `x⊗y/‖x⊗y‖` to `D`'s hyperplanes.
    pub fn residual_d(&self, x: &[ComplexF], y: &[ComplexF]) -> Result<f64, NumericError> {
        self.residual(&self.d_perp, x, y)
    }

    /// Same as [`Self::residual_d`] for `x̄⊗y` against `E⊥`.
    pub fn residual_e(&self, x: &[ComplexF], y: &[ComplexF]) -> Result<f64, NumericError> {
        let xbar: Vec<ComplexF> = x.iter().map(Scalar::conj).collect();
        self.residual(&self.e_perp, &xbar, y)
    }

    fn residual(&self, family: &[Vec<S>], x: &[ComplexF], y: &[ComplexF]) -> Result<f64, NumericError> {
        let xn = x.iter().map(|c| c.norm().powi(2)).sum::<f64>().sqrt();
        let yn = y.iter().map(|c| c.norm().powi(2)).sum::<f64>().sqrt();
        let mut worst: f64 = 0.0;
        for v in family {
            let mut acc = ComplexF::zero();
            let mut norm = 0.0;
            for i in 0..self.m {
                for j in 0..self.n {
                    let a = self.entry(v, i, j).to_complexf()?;
                    norm += a.norm().powi(2);
                    acc = acc + a * x[i] * y[j];
                }
            }
            worst = worst.max(acc.checked()?.norm() / (norm.sqrt() * xn * yn));
        }
        Ok(worst)
    }

    /// `{"m": .., "n": .., "D_perp": [[scalar; mn], ...], "E_perp": [...]}`.
    pub fn to_json(&self) -> Value {
        let fam = |f: &[Vec<S>]| f.iter().map(|v| v.iter().map(Scalar::to_json).collect::<Vec<_>>()).collect::<Vec<_>>();
        serde_json::json!({
            "m": self.m,
            "n": self.n,
            "D_perp": fam(&self.d_perp),
            "E_perp": fam(&self.e_perp),
        })
    }

    /// Reads `D_perp`/`E_perp`, or `D_span`/`E_span` for spanning sets.
    /// A missing key leaves that subspace unconstrained.
    pub fn from_json(v: &Value) -> Result<Self, SubspaceError> {
        let bad = |s: &str| SubspaceError::Json(s.to_string());
        let m = v.get("m").and_then(Value::as_u64).ok_or_else(|| bad("missing integer field m"))? as usize;
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| bad("missing integer field n"))? as usize;
        let family = |key: &str| -> Result<Vec<Vec<S>>, SubspaceError> {
            let Some(list) = v.get(key) else {
                return Ok(Vec::new());
            };
            let list = list.as_array().ok_or_else(|| bad(&format!("{key} must be an array")))?;
            list.iter()
                .map(|vec| {
                    let vec = vec.as_array().ok_or_else(|| bad(&format!("entries of {key} must be arrays")))?;
                    vec.iter().map(|s| S::from_json(s).map_err(SubspaceError::from)).collect()
                })
                .collect()
        };
        let spans = v.get("D_span").is_some() || v.get("E_span").is_some();
        let perps = v.get("D_perp").is_some() || v.get("E_perp").is_some();
        match (spans, perps) {
            (true, true) => Err(bad("give either D_perp/E_perp or D_span/E_span, not both")),
            (true, false) => {
                let side = |key: &'static str| -> Result<Vec<Vec<S>>, SubspaceError> {
                    match v.get(key) {
                        Some(_) => span_complement(m * n, key, &family(key)?),
                        None => Ok(Vec::new()),
                    }
                };
                Self::new(m, n, side("D_span")?, side("E_span")?)
            }
            _ => Self::new(m, n, family("D_perp")?, family("E_perp")?),
        }
    }
}

fn span_complement<S: Scalar>(mn: usize, which: &'static str, span: &[Vec<S>]) -> Result<Vec<Vec<S>>, SubspaceError> {
    for (index, v) in span.iter().enumerate() {
        if v.len() != mn {
            return Err(SubspaceError::VectorLength { which, index, got: v.len(), expected: mn });
        }
    }
    if span.is_empty() {
        return Ok((0..mn).map(|i| (0..mn).map(|j| if i == j { S::one() } else { S::zero() }).collect()).collect());
    }
    Ok(kernel(&Matrix::from_fn(span.len(), mn, |r, c| span[r][c].clone()))?)
}

fn family_rank<S: Scalar>(family: &[Vec<S>], mn: usize) -> Result<usize, NumericError> {
    if family.is_empty() {
        return Ok(0);
    }
    let mat = Matrix::from_fn(family.len(), mn, |r, c| family[r][c].clone());
    if S::EXACT {
        Ok(exact_rank(&mat))
    } else {
        numerical_rank(&mat.try_map(Scalar::to_complexf)?, 1e-10)
    }
}

/// One entry `L_j^{(q)}(x) = Σ_i cx[i]·x_i + Σ_i cxbar[i]·x̄_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearForm<S> {
    pub cx: Vec<S>,
    pub cxbar: Vec<S>,
}

impl<S: Scalar> LinearForm<S> {
    pub fn eval(&self, x: &[S]) -> S {
        let mut acc = S::zero();
        for (i, xi) in x.iter().enumerate() {
            if !self.cx[i].is_zero() {
                acc = acc + self.cx[i].clone() * xi.clone();
            }
            if !self.cxbar[i].is_zero() {
                acc = acc + self.cxbar[i].clone() * xi.conj();
            }
        }
        acc
    }
}

/// Rows are the hyperplanes (`D⊥` first, then `E⊥`), columns are the
/// `y_j`; a product vector `x⊗y` works iff `y` is in the kernel of `L(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFormMatrix<S> {
    m: usize,
    n: usize,
    k: usize,
    rows: Vec<Vec<LinearForm<S>>>,
}

impl<S: Scalar> LinearFormMatrix<S> {
    /// Builds the forms for any `k, l` (no regime check).
    pub fn from_pair(pair: &SubspacePair<S>) -> Self {
        let (m, n) = (pair.m(), pair.n());
        let zeros = || vec![S::zero(); m];
        let mut rows = Vec::with_capacity(pair.k() + pair.l());
        for a in pair.d_perp() {
            rows.push((0..n).map(|j| LinearForm { cx: (0..m).map(|i| pair.entry(a, i, j).clone()).collect(), cxbar: zeros() }).collect());
        }
        for b in pair.e_perp() {
            rows.push((0..n).map(|j| LinearForm { cx: zeros(), cxbar: (0..m).map(|i| pair.entry(b, i, j).clone()).collect() }).collect());
        }
        Self { m, n, k: pair.k(), rows }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of leading rows that come from `D⊥`.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn form(&self, q: usize, j: usize) -> &LinearForm<S> {
        &self.rows[q][j]
    }

    /// `L(x, x̄)` as a scalar matrix.
    pub fn eval(&self, x: &[S]) -> Matrix<S> {
        Matrix::from_fn(self.rows.len(), self.n, |q, j| self.rows[q][j].eval(x))
    }

    /// `L(x, x̄)` in floats.
    pub fn eval_f(&self, x: &[ComplexF]) -> Result<Matrix<ComplexF>, NumericError> {
        let mut out = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let mut r = Vec::with_capacity(self.n);
            for form in row {
                let mut acc = ComplexF::zero();
                for (i, xi) in x.iter().enumerate() {
                    acc = acc + form.cx[i].to_complexf()? * *xi + form.cxbar[i].to_complexf()? * xi.conj();
                }
                r.push(acc.checked()?);
            }
            out.push(r);
        }
        Ok(Matrix::from_rows(out))
    }
}

/// The linear system for the boundary case `k + l = m + n - 2`.
pub fn build_linear_system<S: Scalar>(pair: &SubspacePair<S>) -> Result<LinearFormMatrix<S>, SubspaceError> {
    let sum = pair.k() + pair.l();
    let boundary = pair.m() + pair.n() - 2;
    if sum != boundary {
        let regime = kiem_regime(pair.m(), pair.n(), pair.k(), pair.l()).regime;
        return Err(SubspaceError::Regime { sum, boundary, regime });
    }
    Ok(LinearFormMatrix::from_pair(pair))
}

/// `P(z, w) = det L` on the chart `x₂ = 1`, with `x₁ → z`, `x̄₁ → w`.
///
/// Each row of `L` is `t·a + b` with `t = z` for D-rows and `t = w` for
/// E-rows. Exact fields evaluate the determinant on the integer grid
/// `{0..k} × {0..l}` and interpolate; float fields expand by
/// multilinearity over the `2^n` choices of `a` or `b` per row. The formal
/// bidegree is `(k, l)`.
pub fn det_poly_2xn<S: Scalar>(lin: &LinearFormMatrix<S>) -> Result<BiPoly<S>, SubspaceError> {
    let rows = RowPencil::new(lin)?;
    let grid = if S::EXACT { rows.interpolated() } else { rows.expanded() };
    Ok(BiPoly::from_grid(grid).expect("grid is (k+1)×(l+1)"))
}

/// The rows of `L` as pencils `t·a_q + b_q`, scaled to integral entries in
/// exact fields (which keeps fraction-free elimination cheap).
struct RowPencil<S> {
    n: usize,
    k: usize,
    a: Vec<Vec<S>>,
    b: Vec<Vec<S>>,
    /// Inverse of the product of the row scales.
    unscale: S,
}

impl<S: Scalar> RowPencil<S> {
    fn new(lin: &LinearFormMatrix<S>) -> Result<Self, SubspaceError> {
        if lin.m != 2 {
            return Err(SubspaceError::NotQubit(lin.m));
        }
        let (n, k, rows) = (lin.n, lin.k, lin.rows.len());
        if rows != n {
            return Err(SubspaceError::Regime { sum: rows, boundary: n, regime: kiem_regime(2, n, k, rows - k).regime });
        }
        let part = |q: usize, var: usize| -> Vec<S> {
            lin.rows[q].iter().map(|f| if q < k { f.cx[var].clone() } else { f.cxbar[var].clone() }).collect()
        };
        let (mut a, mut b): (Vec<Vec<S>>, Vec<Vec<S>>) = (0..n).map(|q| (part(q, 0), part(q, 1))).unzip();
        let mut product = S::one();
        for q in 0..n {
            let scale = S::common_denominator(&[a[q].as_slice(), b[q].as_slice()].concat());
            for v in a[q].iter_mut().chain(b[q].iter_mut()) {
                *v = v.clone() * scale.clone();
            }
            product = product * scale;
        }
        Ok(Self { n, k, a, b, unscale: S::one() / product })
    }

    fn det_at(&self, z: &S, w: &S) -> S {
        det(&Matrix::from_fn(self.n, self.n, |q, j| {
            let t = if q < self.k { z } else { w };
            t.clone() * self.a[q][j].clone() + self.b[q][j].clone()
        }))
    }

    fn expanded(&self) -> Vec<Vec<S>> {
        let (n, k) = (self.n, self.k);
        let mut grid = vec![vec![S::zero(); n - k + 1]; k + 1];
        for mask in 0u64..(1u64 << n) {
            let chosen = |q: usize| mask >> q & 1 == 1;
            let d = det(&Matrix::from_fn(n, n, |q, j| if chosen(q) { self.a[q][j].clone() } else { self.b[q][j].clone() }));
            if d.is_zero() {
                continue;
            }
            let p = (0..k).filter(|&q| chosen(q)).count();
            let w = (k..n).filter(|&q| chosen(q)).count();
            grid[p][w] = grid[p][w].clone() + d;
        }
        self.unscaled(grid)
    }

    fn interpolated(&self) -> Vec<Vec<S>> {
        let (k, l) = (self.k, self.n - self.k);
        // values[p][q] = det at (z, w) = (p, q)
        let values: Vec<Vec<S>> = (0..=k)
            .map(|p| (0..=l).map(|q| self.det_at(&S::from_i64(p as i64), &S::from_i64(q as i64))).collect())
            .collect();
        let in_w: Vec<Vec<S>> = values.iter().map(|row| interpolate_at_naturals(row)).collect();
        let mut grid = vec![vec![S::zero(); l + 1]; k + 1];
        for q in 0..=l {
            let column: Vec<S> = in_w.iter().map(|row| row[q].clone()).collect();
            for (p, c) in interpolate_at_naturals(&column).into_iter().enumerate() {
                grid[p][q] = c;
            }
        }
        self.unscaled(grid)
    }

    fn unscaled(&self, grid: Vec<Vec<S>>) -> Vec<Vec<S>> {
        grid.into_iter().map(|row| row.into_iter().map(|c| c * self.unscale.clone()).collect()).collect()
    }
}

/// Ascending coefficients of the polynomial of degree `< values.len()`
/// taking `values[i]` at `i = 0, 1, ...` (Newton divided differences).
fn interpolate_at_naturals<S: Scalar>(values: &[S]) -> Vec<S> {
    let d = values.len();
    let mut diff = values.to_vec();
    for order in 1..d {
        for i in (order..d).rev() {
            diff[i] = (diff[i].clone() - diff[i - 1].clone()) / S::from_i64(order as i64);
        }
    }
    // Horner in the Newton basis: poly = diff[i] + (x - i)·poly
    let mut poly = vec![S::zero(); d];
    for i in (0..d).rev() {
        let mut next = vec![S::zero(); d];
        for (e, c) in poly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if e + 1 < d {
                next[e + 1] = next[e + 1].clone() + c.clone();
            }
            next[e] = next[e].clone() - c.clone() * S::from_i64(i as i64);
        }
        next[0] = next[0].clone() + diff[i].clone();
        poly = next;
    }
    poly
}

/// Polynomial in `x_1..x_m, x̄_1..x̄_m` (variables `0..m` then `m..2m`).
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly<S> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, S>,
}

impl<S: Scalar> MultiPoly<S> {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    fn from_linear(form: &LinearForm<S>) -> Self {
        let m = form.cx.len();
        let mut out = Self::zero(2 * m);
        for (idx, c) in form.cx.iter().chain(&form.cxbar).enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; 2 * m];
                e[idx] = 1;
                out.terms.insert(e, c.clone());
            }
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &S)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    fn add_term(&mut self, e: Vec<u32>, c: S) {
        let v = match self.terms.remove(&e) {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(e, v);
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect() }
    }

    /// Evaluates at `x` with the conjugate variables set to `x̄`.
    pub fn eval_conj(&self, x: &[S]) -> S {
        let vals: Vec<S> = x.iter().cloned().chain(x.iter().map(Scalar::conj)).collect();
        self.eval(&vals)
    }

    pub fn eval(&self, vals: &[S]) -> S {
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &p) in vals.iter().zip(e) {
                if p > 0 {
                    t = t * v.pow(p);
                }
            }
            acc = acc + t;
        }
        acc
    }
}

/// All `n × n` minors of `L` as polynomials in `x, x̄`, in lexicographic
/// order of the chosen rows.
///
/// Each minor is expanded along its rows with memoization over the set of
/// columns already used, which costs `O(2^n · n)` polynomial products.
pub fn minors_system<S: Scalar>(lin: &LinearFormMatrix<S>) -> Vec<MultiPoly<S>> {
    let n = lin.n;
    let nvars = 2 * lin.m;
    combinations(lin.rows.len(), n)
        .into_iter()
        .map(|rows| {
            // table[mask] = det of the first popcount(mask) chosen rows on columns `mask`
            let mut table: Vec<Option<MultiPoly<S>>> = vec![None; 1 << n];
            let mut unit = MultiPoly::zero(nvars);
            unit.terms.insert(vec![0; nvars], S::one());
            table[0] = Some(unit);
            for mask in 1usize..(1 << n) {
                let r = mask.count_ones() as usize - 1;
                let mut acc = MultiPoly::zero(nvars);
                let mut sign_pos = true;
                // columns in increasing order; the sign alternates with the
                // position of the removed column inside `mask`
                for j in (0..n).rev() {
                    if mask >> j & 1 == 0 {
                        continue;
                    }
                    let rest = table[mask & !(1 << j)].as_ref().expect("subsets computed first");
                    let term = MultiPoly::from_linear(lin.form(rows[r], j)).mul(rest);
                    acc = acc.add(&if sign_pos { term } else { term.neg() });
                    sign_pos = !sign_pos;
                }
                table[mask] = Some(acc);
            }
            table[(1 << n) - 1].take().expect("full mask computed")
        })
        .collect()
}

/// Numerical rank of `L(x, x̄)` at a nonzero point, singular values below
/// `rel_tol · σ_max` counted as zero.
pub fn chart_point_check<S: Scalar>(lin: &LinearFormMatrix<S>, x: &[ComplexF], rel_tol: f64) -> Result<usize, NumericError> {
    let norm = x.iter().map(|c| c.norm().powi(2)).sum::<f64>().sqrt();
    let unit: Vec<ComplexF> = x.iter().map(|c| *c / ComplexF::new(norm, 0.0).expect("finite")).collect();
    numerical_rank(&lin.eval_f(&unit)?, rel_tol)
}

/// Exact rank of `L(x, x̄)`.
pub fn exact_rank_at<S: Scalar>(lin: &LinearFormMatrix<S>, x: &[S]) -> usize {
    exact_rank(&lin.eval(x))
}
