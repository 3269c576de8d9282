use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use serde_json::Value;

use super::{json_pair, GaussianRational, NumericError, Scalar};

/// Double-precision complex number.
///
/// Constructors reject NaN and infinities. Arithmetic follows IEEE rules, so
/// code that can overflow checks [`ComplexF::is_finite`] on its results.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct ComplexF(Complex64);

impl ComplexF {
    pub fn new(re: f64, im: f64) -> Result<Self, NumericError> {
        if re.is_finite() && im.is_finite() {
            Ok(Self(Complex64::new(re, im)))
        } else {
            Err(NumericError::NonFinite)
        }
    }

    /// Wraps a value already known to be finite.
    pub(crate) const fn raw(c: Complex64) -> Self {
        Self(c)
    }

    pub fn re(self) -> f64 {
        self.0.re
    }

    pub fn im(self) -> f64 {
        self.0.im
    }

    pub fn norm(self) -> f64 {
        self.0.norm()
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn checked(self) -> Result<Self, NumericError> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(NumericError::NonFinite)
        }
    }

    pub fn complex(self) -> Complex64 {
        self.0
    }
}

impl From<ComplexF> for Complex64 {
    fn from(c: ComplexF) -> Self {
        c.0
    }
}

impl fmt::Display for ComplexF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |x: f64| {
            let a = x.abs();
            if a != 0.0 && !(1e-4..1e15).contains(&a) {
                format!("{x:e}")
            } else {
                format!("{x}")
            }
        };
        let (re, im) = (self.0.re, self.0.im);
        let sign = if im.is_sign_negative() { '-' } else { '+' };
        write!(f, "{}{sign}{}i", part(re), part(im.abs()))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ComplexF {
            type Output = Self;
            fn $method(self, rhs: Self) -> Self {
                Self(self.0.$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ComplexF {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

fn json_part(v: &Value) -> Result<f64, NumericError> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| NumericError::Parse(n.to_string())),
        Value::String(s) => {
            let r: GaussianRational = s.parse()?;
            Ok(r.to_complexf()?.re())
        }
        other => Err(NumericError::Parse(format!("expected number, got {other}"))),
    }
}

impl Scalar for ComplexF {
    const EXACT: bool = false;

    fn zero() -> Self {
        Self::default()
    }

    fn one() -> Self {
        Self(Complex64::new(1.0, 0.0))
    }

    fn from_i64(v: i64) -> Self {
        Self(Complex64::new(v as f64, 0.0))
    }

    fn from_gaussian(v: &GaussianRational) -> Result<Self, NumericError> {
        v.to_complexf()
    }

    fn from_complexf(v: ComplexF) -> Self {
        v
    }

    fn is_zero(&self) -> bool {
        self.0.re == 0.0 && self.0.im == 0.0
    }

    fn conj(&self) -> Self {
        Self(self.0.conj())
    }

    fn to_complexf(&self) -> Result<ComplexF, NumericError> {
        self.checked()
    }

    fn magnitude(&self) -> f64 {
        self.0.norm()
    }

    fn to_json(&self) -> Value {
        serde_json::json!([self.0.re, self.0.im])
    }

    fn from_json(v: &Value) -> Result<Self, NumericError> {
        let (re, im) = json_pair(v)?;
        Self::new(json_part(re)?, json_part(im)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite() {
        assert!(ComplexF::new(f64::NAN, 0.0).is_err());
        assert!(ComplexF::new(0.0, f64::INFINITY).is_err());
        let big = ComplexF::new(1e308, 0.0).unwrap();
        assert!((big * big).checked().is_err());
    }

    #[test]
    fn conj_is_involutive() {
        let z = ComplexF::new(3.0, 4.0).unwrap();
        assert_eq!(z.conj(), ComplexF::new(3.0, -4.0).unwrap());
        assert_eq!(z.conj().conj(), z);
    }

    #[test]
    fn json_float_round_trip_is_bit_exact() {
        let z = ComplexF::new(0.1 + 0.2, -1.0 / 3.0).unwrap();
        let text = z.to_json().to_string();
        let back = ComplexF::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.re().to_bits(), z.re().to_bits());
        assert_eq!(back.im().to_bits(), z.im().to_bits());
    }

    #[test]
    fn json_accepts_rational_strings() {
        let z = ComplexF::from_json(&serde_json::json!(["1/4", "-3"])).unwrap();
        assert_eq!((z.re(), z.im()), (0.25, -3.0));
    }
}
