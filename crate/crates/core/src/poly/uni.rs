use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::Value;

use crate::linalg::ExactDivRing;
use crate::numeric::{ComplexF, NumericError, Scalar};

use super::PolyError;

/// Dense univariate polynomial `Σ c[i] z^i` with a formal degree.
///
/// The coefficient vector always has `formal_degree + 1` entries; entries
/// above the actual degree are zero. The zero polynomial has formal degree 0.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> UniPoly<S> {
    /// Formal degree is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<S>) -> Self {
        if coeffs.is_empty() {
            return Self::zero();
        }
        Self { coeffs }
    }

    pub fn with_formal_degree(mut coeffs: Vec<S>, formal_degree: usize) -> Result<Self, PolyError> {
        let actual = Self::new(coeffs.clone()).degree();
        if actual.is_some_and(|d| d > formal_degree) {
            return Err(PolyError::FormalDegree { formal: formal_degree, actual: actual.unwrap_or(0) });
        }
        coeffs.resize(formal_degree + 1, S::zero());
        Ok(Self { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| S::from_i64(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![S::zero()] }
    }

    pub fn constant(c: S) -> Self {
        Self { coeffs: vec![c] }
    }

    /// `z - root`.
    pub fn linear_factor(root: S) -> Self {
        Self { coeffs: vec![-root, S::one()] }
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Coefficient of `z^i` (zero past the formal degree).
    pub fn coeff(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(S::zero)
    }

    pub fn formal_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Actual degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Leading coefficient of the actual support.
    pub fn leading(&self) -> S {
        self.degree().map_or_else(S::zero, |d| self.coeffs[d].clone())
    }

    /// Same polynomial with formal degree equal to its actual degree.
    pub fn trimmed(&self) -> Self {
        match self.degree() {
            Some(d) => Self { coeffs: self.coeffs[..=d].to_vec() },
            None => Self::zero(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    /// Horner evaluation.
    pub fn eval(&self, z: &S) -> S {
        self.coeffs.iter().rev().fold(S::zero(), |acc, c| acc * z.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.clone() * S::from_i64(i as i64)).collect(),
        }
    }

    /// Conjugates every coefficient.
    pub fn conj(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(Scalar::conj).collect() }
    }

    pub fn max_coeff_magnitude(&self) -> f64 {
        self.coeffs.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// Zero test for a computed polynomial: exact zero in exact fields,
    /// every coefficient at most `rel_tol · scale` in float fields.
    pub fn is_negligible(&self, rel_tol: f64, scale: f64) -> bool {
        if S::EXACT {
            self.is_zero()
        } else {
            self.coeffs.iter().all(|c| c.magnitude() <= rel_tol * scale)
        }
    }

    /// Drops coefficients that are negligible relative to the largest one.
    /// Exact polynomials are only trimmed of exact zeros.
    pub fn trimmed_rel(&self, rel_tol: f64) -> Self {
        if S::EXACT {
            return self.trimmed();
        }
        let cut = rel_tol * self.max_coeff_magnitude();
        match self.coeffs.iter().rposition(|c| c.magnitude() > cut) {
            Some(d) => Self { coeffs: self.coeffs[..=d].to_vec() },
            None => Self::zero(),
        }
    }

    /// Euclidean division by a nonzero polynomial.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), PolyError> {
        let dd = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.trimmed().coeffs;
        let Some(nd) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if nd < dd {
            return Ok((Self::zero(), self.trimmed()));
        }
        let mut quot = vec![S::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let c = rem[i + dd].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs[..=dd].iter().enumerate() {
                let v = rem[i + j].clone() - c.clone() * d.clone();
                rem[i + j] = v;
            }
            rem[i + dd] = S::zero();
            quot[i] = c;
        }
        Ok((Self::new(quot).trimmed(), Self::new(rem).trimmed()))
    }

    /// Divides by the leading coefficient; the zero polynomial is returned
    /// unchanged.
    pub fn monic(&self) -> Self {
        let t = self.trimmed();
        if t.is_zero() {
            return t;
        }
        let inv = S::one() / t.leading();
        t.scale(&inv)
    }

    /// Monic greatest common divisor by the Euclidean algorithm. Meant for
    /// exact fields; float inputs get no tolerance handling.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.monic(), other.monic());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("b is nonzero");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `self / gcd(self, self')`: same roots, each simple.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.trimmed();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).expect("gcd of a nonzero polynomial is nonzero").0.monic()
    }

    pub fn to_complexf(&self) -> Result<UniPoly<ComplexF>, NumericError> {
        Ok(UniPoly { coeffs: self.coeffs.iter().map(Scalar::to_complexf).collect::<Result<_, _>>()? })
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "degree": self.formal_degree(),
            "c": self.coeffs.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        })
    }
}

impl<S: Scalar> Add for &UniPoly<S> {
    type Output = UniPoly<S>;
    fn add(self, rhs: &UniPoly<S>) -> UniPoly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly { coeffs: (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect() }
    }
}

impl<S: Scalar> Sub for &UniPoly<S> {
    type Output = UniPoly<S>;
    fn sub(self, rhs: &UniPoly<S>) -> UniPoly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly { coeffs: (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect() }
    }
}

impl<S: Scalar> Mul for &UniPoly<S> {
    type Output = UniPoly<S>;
    /// Formal degrees add.
    fn mul(self, rhs: &UniPoly<S>) -> UniPoly<S> {
        let mut out = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let v = out[i + j].clone() + a.clone() * b.clone();
                out[i + j] = v;
            }
        }
        UniPoly { coeffs: out }
    }
}

impl<S: Scalar> Neg for &UniPoly<S> {
    type Output = UniPoly<S>;
    fn neg(self) -> UniPoly<S> {
        UniPoly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

impl<S: Scalar> ExactDivRing for UniPoly<S> {
    fn zero() -> Self {
        UniPoly::zero()
    }
    fn one() -> Self {
        UniPoly::constant(S::one())
    }
    fn is_zero(&self) -> bool {
        UniPoly::is_zero(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        (self * rhs).trimmed()
    }
    fn sub(&self, rhs: &Self) -> Self {
        (self - rhs).trimmed()
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        let (q, r) = self.div_rem(rhs).expect("nonzero divisor");
        debug_assert!(!S::EXACT || r.is_zero(), "inexact polynomial division");
        q
    }
}

impl<S: Scalar> fmt::Display for UniPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
