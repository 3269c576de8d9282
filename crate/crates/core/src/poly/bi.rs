use std::fmt;

use serde_json::Value;

use crate::numeric::{ComplexF, NumericError, Scalar};

use super::{PolyError, UniPoly};

/// Dense bivariate polynomial `Σ c[p][q] z^p w^q` with formal bidegree
/// `(dz, dw)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly<S> {
    dz: usize,
    dw: usize,
    c: Vec<Vec<S>>,
}

impl<S: Scalar> BiPoly<S> {
    pub fn zero(dz: usize, dw: usize) -> Self {
        Self { dz, dw, c: vec![vec![S::zero(); dw + 1]; dz + 1] }
    }

    /// `grid[p][q]` is the coefficient of `z^p w^q`; the grid fixes the
    /// formal bidegree.
    pub fn from_grid(grid: Vec<Vec<S>>) -> Result<Self, PolyError> {
        let dz = grid.len().checked_sub(1).ok_or(PolyError::BadGrid)?;
        let cols = grid[0].len();
        if cols == 0 || grid.iter().any(|r| r.len() != cols) {
            return Err(PolyError::BadGrid);
        }
        Ok(Self { dz, dw: cols - 1, c: grid })
    }

    /// Builds from `(p, q, coefficient)` terms; repeated terms add up.
    pub fn from_terms(dz: usize, dw: usize, terms: impl IntoIterator<Item = (usize, usize, S)>) -> Result<Self, PolyError> {
        let mut out = Self::zero(dz, dw);
        for (p, q, v) in terms {
            if p > dz || q > dw {
                return Err(PolyError::BidegreeExceeded { p, q, dz, dw });
            }
            out.c[p][q] = out.c[p][q].clone() + v;
        }
        Ok(out)
    }

    /// `a(z) · b(w)`.
    pub fn from_product(a: &UniPoly<S>, b: &UniPoly<S>) -> Self {
        let (dz, dw) = (a.formal_degree(), b.formal_degree());
        let mut out = Self::zero(dz, dw);
        for p in 0..=dz {
            for q in 0..=dw {
                out.c[p][q] = a.coeff(p) * b.coeff(q);
            }
        }
        out
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.dz, self.dw)
    }

    pub fn get(&self, p: usize, q: usize) -> S {
        if p <= self.dz && q <= self.dw {
            self.c[p][q].clone()
        } else {
            S::zero()
        }
    }

    pub fn grid(&self) -> &[Vec<S>] {
        &self.c
    }

    /// Largest `(p, q)` degrees with a nonzero coefficient.
    pub fn actual_bidegree(&self) -> Option<(usize, usize)> {
        let mut out: Option<(usize, usize)> = None;
        for (p, row) in self.c.iter().enumerate() {
            for (q, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    let (a, b) = out.unwrap_or((0, 0));
                    out = Some((a.max(p), b.max(q)));
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().flatten().all(Scalar::is_zero)
    }

    /// Identically zero: exact zero grid, or every entry at most
    /// `rel_tol · scale` in float fields.
    pub fn is_negligible(&self, rel_tol: f64, scale: f64) -> bool {
        if S::EXACT {
            self.is_zero()
        } else {
            self.c.iter().flatten().all(|v| v.magnitude() <= rel_tol * scale)
        }
    }

    pub fn max_coeff_magnitude(&self) -> f64 {
        self.c.iter().flatten().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// Coefficient of `w^q` as a polynomial in `z` of formal degree `dz`.
    pub fn w_coefficient(&self, q: usize) -> UniPoly<S> {
        UniPoly::new((0..=self.dz).map(|p| self.get(p, q)).collect())
    }

    /// Coefficient of `z^p` as a polynomial in `w` of formal degree `dw`.
    pub fn z_coefficient(&self, p: usize) -> UniPoly<S> {
        UniPoly::new((0..=self.dw).map(|q| self.get(p, q)).collect())
    }

    /// Same polynomial with the formal w-degree lowered to the actual one.
    pub fn trimmed_w(&self) -> Self {
        let dw = self.actual_bidegree().map_or(0, |(_, q)| q);
        Self { dz: self.dz, dw, c: self.c.iter().map(|row| row[..=dw].to_vec()).collect() }
    }

    /// Same polynomial with formal bidegree lowered to the actual one, with
    /// coefficients below `rel_tol · max|c|` treated as zero in float fields.
    pub fn trimmed_rel(&self, rel_tol: f64) -> Self {
        let cut = if S::EXACT { 0.0 } else { rel_tol * self.max_coeff_magnitude() };
        let keep = |v: &S| if S::EXACT { !v.is_zero() } else { v.magnitude() > cut };
        let (mut dz, mut dw) = (0, 0);
        for (p, row) in self.c.iter().enumerate() {
            for (q, v) in row.iter().enumerate() {
                if keep(v) {
                    dz = dz.max(p);
                    dw = dw.max(q);
                }
            }
        }
        Self { dz, dw, c: self.c[..=dz].iter().map(|row| row[..=dw].to_vec()).collect() }
    }

    pub fn eval(&self, z: &S, w: &S) -> S {
        self.c.iter().rev().fold(S::zero(), |acc, row| {
            let inner = row.iter().rev().fold(S::zero(), |a, v| a * w.clone() + v.clone());
            acc * z.clone() + inner
        })
    }

    /// `(P, ∂P/∂z, ∂P/∂w)` at `(z, w)`.
    pub fn eval_with_partials(&self, z: &S, w: &S) -> (S, S, S) {
        let mut val = S::zero();
        let mut dz = S::zero();
        let mut dw = S::zero();
        let zp: Vec<S> = (0..=self.dz as u32).map(|e| z.pow(e)).collect();
        let wq: Vec<S> = (0..=self.dw as u32).map(|e| w.pow(e)).collect();
        for (p, row) in self.c.iter().enumerate() {
            for (q, v) in row.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                val = val + v.clone() * zp[p].clone() * wq[q].clone();
                if p > 0 {
                    dz = dz + v.clone() * S::from_i64(p as i64) * zp[p - 1].clone() * wq[q].clone();
                }
                if q > 0 {
                    dw = dw + v.clone() * S::from_i64(q as i64) * zp[p].clone() * wq[q - 1].clone();
                }
            }
        }
        (val, dz, dw)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let (dz, dw) = (self.dz.max(rhs.dz), self.dw.max(rhs.dw));
        let mut out = Self::zero(dz, dw);
        for p in 0..=dz {
            for q in 0..=dw {
                out.c[p][q] = self.get(p, q) + rhs.get(p, q);
            }
        }
        out
    }

    /// Formal bidegrees add.
    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.dz + rhs.dz, self.dw + rhs.dw);
        for (p1, row1) in self.c.iter().enumerate() {
            for (q1, a) in row1.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (p2, row2) in rhs.c.iter().enumerate() {
                    for (q2, b) in row2.iter().enumerate() {
                        let v = out.c[p1 + p2][q1 + q2].clone() + a.clone() * b.clone();
                        out.c[p1 + p2][q1 + q2] = v;
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        Self { dz: self.dz, dw: self.dw, c: self.c.iter().map(|r| r.iter().map(|v| v.clone() * s.clone()).collect()).collect() }
    }

    pub fn to_complexf(&self) -> Result<BiPoly<ComplexF>, NumericError> {
        let c = self
            .c
            .iter()
            .map(|r| r.iter().map(Scalar::to_complexf).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()?;
        Ok(BiPoly { dz: self.dz, dw: self.dw, c })
    }

    /// `{"dz": int, "dw": int, "c": [[scalar, ...], ...]}`, rows by z-power.
    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "dz": self.dz,
            "dw": self.dw,
            "c": self.c.iter().map(|r| r.iter().map(Scalar::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, PolyError> {
        let bad = |what: &str| PolyError::Json(what.to_string());
        let dz = v.get("dz").and_then(Value::as_u64).ok_or_else(|| bad("missing dz"))? as usize;
        let dw = v.get("dw").and_then(Value::as_u64).ok_or_else(|| bad("missing dw"))? as usize;
        let rows = v.get("c").and_then(Value::as_array).ok_or_else(|| bad("missing c"))?;
        if rows.len() != dz + 1 {
            return Err(bad("c must have dz+1 rows"));
        }
        let mut grid = Vec::with_capacity(dz + 1);
        for row in rows {
            let row = row.as_array().ok_or_else(|| bad("rows of c must be arrays"))?;
            if row.len() != dw + 1 {
                return Err(bad("each row of c must have dw+1 entries"));
            }
            grid.push(row.iter().map(S::from_json).collect::<Result<Vec<_>, _>>()?);
        }
        Self::from_grid(grid)
    }
}

/// The conjugate polynomial: `Q.c[p][q] = conj(P.c[q][p])`, so that
/// `Q(z, w) = conj(P(w̄, z̄))` and `Q(x, x̄) = conj(P(x, x̄))`.
pub fn conjugate_poly<S: Scalar>(p: &BiPoly<S>) -> BiPoly<S> {
    let mut out = BiPoly::zero(p.dw, p.dz);
    for (a, row) in p.c.iter().enumerate() {
        for (b, v) in row.iter().enumerate() {
            out.c[b][a] = v.conj();
        }
    }
    out
}

impl<S: Scalar> fmt::Display for BiPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in (0..=self.dz).rev() {
            for q in (0..=self.dw).rev() {
                let v = &self.c[p][q];
                if v.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "({v})")?;
                match p {
                    0 => {}
                    1 => write!(f, "z")?,
                    _ => write!(f, "z^{p}")?,
                }
                match q {
                    0 => {}
                    1 => write!(f, "w")?,
                    _ => write!(f, "w^{q}")?,
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
