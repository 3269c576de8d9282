use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use super::{json_pair, ComplexF, NumericError, Scalar};

/// Exact complex number `re + im·i` with rational parts.
///
/// `BigRational` keeps both parts in lowest terms with a positive
/// denominator after every operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_integers(re: i64, im: i64) -> Self {
        Self::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    /// The real rational `num/den`. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::new(BigRational::new(num.into(), den.into()), BigRational::zero())
    }

    pub fn real(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }

    /// Exact value of a finite float.
    pub fn from_f64_exact(re: f64, im: f64) -> Result<Self, NumericError> {
        let conv = |x: f64| BigRational::from_float(x).ok_or(NumericError::NonFinite);
        Ok(Self::new(conv(re)?, conv(im)?))
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// `re² + im²`.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let d = self.norm_sqr();
        Some(Self::new(&self.re / &d, -&self.im / &d))
    }
}

fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_rational(s: &str) -> Result<BigRational, NumericError> {
    let s = s.trim();
    let err = || NumericError::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| err())?)),
    }
}

fn rational_to_f64(r: &BigRational) -> Result<f64, NumericError> {
    match r.to_f64() {
        Some(v) if v.is_finite() => Ok(v),
        _ => Err(NumericError::Overflow(rational_to_string(r))),
    }
}

fn json_part(v: &Value) -> Result<BigRational, NumericError> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(i.into()))
            } else {
                let f = n.as_f64().ok_or_else(|| NumericError::Parse(n.to_string()))?;
                BigRational::from_float(f).ok_or(NumericError::NonFinite)
            }
        }
        other => Err(NumericError::Parse(format!("expected rational, got {other}"))),
    }
}

impl FromStr for GaussianRational {
    type Err = NumericError;

    /// Parses a real rational such as `"3"`, `"-1/10"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational(s).map(Self::real)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", rational_to_string(&self.re));
        }
        if self.re.is_zero() {
            return write!(f, "{}i", rational_to_string(&self.im));
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}i", rational_to_string(&self.re), sign, rational_to_string(&self.im.abs()))
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::real(&self.re * &rhs.re);
        }
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div for GaussianRational {
    type Output = Self;
    /// Panics on division by zero, like `BigRational`.
    fn div(self, rhs: Self) -> Self {
        let inv = rhs.inv().expect("division by zero");
        &self * &inv
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Scalar for GaussianRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Self::default()
    }

    fn one() -> Self {
        Self::real(BigRational::one())
    }

    fn from_i64(v: i64) -> Self {
        Self::from_integers(v, 0)
    }

    fn from_gaussian(v: &GaussianRational) -> Result<Self, NumericError> {
        Ok(v.clone())
    }

    fn from_complexf(v: ComplexF) -> Self {
        Self::from_f64_exact(v.re(), v.im()).expect("ComplexF is finite")
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    fn to_complexf(&self) -> Result<ComplexF, NumericError> {
        ComplexF::new(rational_to_f64(&self.re)?, rational_to_f64(&self.im)?)
    }

    /// Least common multiple of all denominators.
    fn common_denominator(values: &[Self]) -> Self {
        let lcm = values
            .iter()
            .flat_map(|v| [v.re.denom(), v.im.denom()])
            .fold(BigInt::one(), |acc, d| acc.lcm(d));
        Self::real(BigRational::from_integer(lcm))
    }

    fn magnitude(&self) -> f64 {
        let re = self.re.to_f64().unwrap_or(f64::INFINITY);
        let im = self.im.to_f64().unwrap_or(f64::INFINITY);
        re.hypot(im)
    }

    fn to_json(&self) -> Value {
        Value::Array(vec![
            Value::String(rational_to_string(&self.re)),
            Value::String(rational_to_string(&self.im)),
        ])
    }

    fn from_json(v: &Value) -> Result<Self, NumericError> {
        let (re, im) = json_pair(v)?;
        Ok(Self::new(json_part(re)?, json_part(im)?))
    }
}
