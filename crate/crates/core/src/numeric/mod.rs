//! Coefficient fields.
//!
//! Every algebra routine in this crate is generic over [`Scalar`], which is
//! implemented by an exact field ([`GaussianRational`], `a + bi` with
//! arbitrary-precision rational parts) and by double-precision complex
//! floats ([`ComplexF`]). The exact field carries the algebra (determinants,
//! resultants); the float field carries root finding and rank decisions.

mod complexf;
mod gaussian;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub use complexf::ComplexF;
pub use gaussian::GaussianRational;

use serde_json::Value;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericError {
    #[error("value {0} does not fit in a double-precision float")]
    Overflow(String),
    #[error("non-finite floating-point value")]
    NonFinite,
    #[error("cannot parse scalar: {0}")]
    Parse(String),
}

/// A coefficient field with complex conjugation.
///
/// Implementations are immutable values; all operations are pure.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` for fields where equality and zero tests are exact.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// Embeds an exact value, rounding when the target field is inexact.
    fn from_gaussian(v: &GaussianRational) -> Result<Self, NumericError>;
    /// Embeds a float; exact fields represent every finite float exactly.
    fn from_complexf(v: ComplexF) -> Self;
    /// Exact zero test (`== 0.0` for floats).
    fn is_zero(&self) -> bool;
    fn conj(&self) -> Self;
    fn to_complexf(&self) -> Result<ComplexF, NumericError>;
    /// Approximate modulus, used for pivoting and relative tolerances.
    fn magnitude(&self) -> f64;
    /// `[re, im]`, parts as `"p/q"` strings (exact) or numbers (float).
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self, NumericError>;

    /// A nonzero multiplier that makes every value integral, where the
    /// field has a notion of denominators; `one` otherwise.
    fn common_denominator(values: &[Self]) -> Self {
        let _ = values;
        Self::one()
    }

    fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }
}

/// Nearest double-precision value of an exact scalar.
pub fn approx(x: &GaussianRational) -> Result<ComplexF, NumericError> {
    x.to_complexf()
}

pub(crate) fn json_pair(v: &Value) -> Result<(&Value, &Value), NumericError> {
    match v.as_array() {
        Some(parts) if parts.len() == 2 => Ok((&parts[0], &parts[1])),
        _ => Err(NumericError::Parse(format!("expected [re, im], got {v}"))),
    }
}
