//! Regime trichotomy, the genericity test for `(D, E)`, count bounds and
//! the range-criterion report.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::Value;

use crate::numeric::{ComplexF, Scalar};
use crate::solve::{count_product_vectors_2xn, SolveError, Tolerances};
use crate::subspace::SubspacePair;

/// How `k + l` compares with `m + n - 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `k + l < m + n - 2`: infinitely many product vectors.
    InfiniteRegime,
    /// `k + l = m + n - 2`: finitely many for generic pairs.
    Boundary,
    /// `k + l > m + n - 2`: no product vector for generic pairs.
    GenericallyEmptyRegime,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::InfiniteRegime => "InfiniteRegime",
            Regime::Boundary => "Boundary",
            Regime::GenericallyEmptyRegime => "GenericallyEmptyRegime",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self {
            Regime::InfiniteRegime => "k + l < m + n - 2, so there are infinitely many product vectors",
            Regime::Boundary => "k + l = m + n - 2, finitely many product vectors for generic pairs",
            Regime::GenericallyEmptyRegime => "k + l > m + n - 2, so a generic pair has no product vector",
        };
        write!(f, "{} ({what})", self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegimeReport {
    pub regime: Regime,
    /// `Σ_{r+s=m-1} (-1)^r C(k,r) C(l,s)`; nonzero guarantees existence of
    /// a product vector in the boundary case.
    pub existence_coefficient: BigInt,
}

impl RegimeReport {
    pub fn existence_guaranteed(&self) -> bool {
        self.regime == Regime::Boundary && !self.existence_coefficient.is_zero()
    }
}

fn binomial(n: usize, r: usize) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    (0..r).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

pub fn kiem_regime(m: usize, n: usize, k: usize, l: usize) -> RegimeReport {
    let boundary = m + n - 2;
    let regime = match (k + l).cmp(&boundary) {
        std::cmp::Ordering::Less => Regime::InfiniteRegime,
        std::cmp::Ordering::Equal => Regime::Boundary,
        std::cmp::Ordering::Greater => Regime::GenericallyEmptyRegime,
    };
    let mut coefficient = BigInt::zero();
    for r in 0..m {
        let term = binomial(k, r) * binomial(l, m - 1 - r);
        if r % 2 == 0 {
            coefficient += term;
        } else {
            coefficient -= term;
        }
    }
    RegimeReport { regime, existence_coefficient: coefficient }
}

/// `n (2n-1)^(2m-2)`.
pub fn milnor_bound(m: usize, n: usize) -> u128 {
    n as u128 * (2 * n as u128 - 1).pow(2 * m as u32 - 2)
}

/// `C(m+n-2, m-1)`.
pub fn segre_degree(m: usize, n: usize) -> u128 {
    binomial(m + n - 2, m - 1).try_into().expect("fits in u128 for reasonable dimensions")
}

/// `k² + l²`.
pub fn k2l2_bound(k: usize, l: usize) -> u128 {
    (k as u128).pow(2) + (l as u128).pow(2)
}

/// Why a pair fails the genericity test.
#[derive(Clone, Debug, PartialEq)]
pub enum Reason {
    /// The eliminated resultant vanishes identically.
    ResultantIdenticallyZero,
    /// Every `(n-1)×(n-1)` minor of `L` vanishes at this root.
    RankDefectAtRoot { z: ComplexF },
}

impl Reason {
    pub fn to_json(&self) -> Value {
        match self {
            Reason::ResultantIdenticallyZero => Value::from("ResultantIdenticallyZero"),
            Reason::RankDefectAtRoot { z } => Value::from(format!("RankDefectAtRoot({z})")),
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::ResultantIdenticallyZero => write!(f, "resultant is identically zero"),
            Reason::RankDefectAtRoot { z } => write!(f, "L has rank below n-1 at the root z = {z}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    InU,
    NotInU(Reason),
    /// A test landed in the ambiguous tolerance band.
    Indeterminate(String),
}

impl Verdict {
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::InU => "InU",
            Verdict::NotInU(_) => "NotInU",
            Verdict::Indeterminate(_) => "Indeterminate",
        }
    }

    /// The reason for `NotInU` or the ambiguity behind `Indeterminate`.
    pub fn reason_json(&self) -> Value {
        match self {
            Verdict::InU => Value::Null,
            Verdict::NotInU(reason) => reason.to_json(),
            Verdict::Indeterminate(why) => Value::from(why.as_str()),
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({ "verdict": self.tag(), "reason": self.reason_json() })
    }
}

/// JSON number when it fits in `u64`, decimal string otherwise.
pub fn bound_json(b: u128) -> Value {
    u64::try_from(b).map(Value::from).unwrap_or_else(|_| Value::from(b.to_string()))
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::InU => write!(f, "InU"),
            Verdict::NotInU(r) => write!(f, "NotInU ({r})"),
            Verdict::Indeterminate(why) => write!(f, "Indeterminate ({why})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeObstruction {
    pub obstructed: bool,
    pub explanation: String,
}

impl RangeObstruction {
    pub fn to_json(&self) -> Value {
        serde_json::json!({ "obstructed": self.obstructed, "explanation": self.explanation })
    }
}

/// Whether `count` product vectors are too few to span `D` or `E`.
pub fn range_obstruction<S: Scalar>(count: usize, pair: &SubspacePair<S>) -> RangeObstruction {
    let (dim_d, dim_e) = (pair.dim_d(), pair.dim_e());
    let mut failures = Vec::new();
    if count < dim_d {
        failures.push(format!("the dimension of D is {dim_d}, so no collection of product vectors spans D"));
    }
    if count < dim_e {
        failures.push(format!("the dimension of E is {dim_e}, so their partial conjugates cannot span E"));
    }
    let obstructed = !failures.is_empty();
    let explanation = if obstructed {
        format!("{count} product vector(s) found; {}", failures.join("; "))
    } else {
        format!("{count} product vector(s) found; not fewer than dim D = {dim_d} or dim E = {dim_e}")
    };
    RangeObstruction { obstructed, explanation }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Bounds {
    pub milnor: u128,
    /// Only for `m = 2`.
    pub k2l2: Option<u128>,
    /// Only when `k·l = 0`.
    pub segre: Option<u128>,
}

pub fn bounds_for(m: usize, n: usize, k: usize, l: usize) -> Bounds {
    Bounds {
        milnor: milnor_bound(m, n),
        k2l2: (m == 2).then(|| k2l2_bound(k, l)),
        segre: (k * l == 0).then(|| segre_degree(m, n)),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationReport {
    pub regime: RegimeReport,
    /// Present only in the boundary regime.
    pub verdict: Option<Verdict>,
    pub bounds: Bounds,
    pub range_obstruction: Option<RangeObstruction>,
}

impl ClassificationReport {
    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "regime": self.regime.regime.name(),
            "existence_coefficient": self.regime.existence_coefficient.to_string(),
            "verdict": self.verdict.as_ref().map(Verdict::tag),
            "reason": self.verdict.as_ref().map_or(Value::Null, Verdict::reason_json),
            "bounds": {
                "milnor": bound_json(self.bounds.milnor),
                "k2l2": self.bounds.k2l2.map(bound_json),
                "segre": self.bounds.segre.map(bound_json),
            },
            "range_obstruction": self.range_obstruction.as_ref().map(RangeObstruction::to_json),
        })
    }
}

/// Runs the genericity test on a qubit pair. Outside the boundary regime
/// no verdict is produced. Numerical ambiguity becomes an `Indeterminate`
/// verdict rather than an error.
pub fn algorithm1_classify<S: Scalar>(pair: &SubspacePair<S>, tol: &Tolerances) -> Result<ClassificationReport, SolveError> {
    let (m, n, k, l) = (pair.m(), pair.n(), pair.k(), pair.l());
    let regime = kiem_regime(m, n, k, l);
    let bounds = bounds_for(m, n, k, l);
    if regime.regime != Regime::Boundary {
        return Ok(ClassificationReport { regime, verdict: None, bounds, range_obstruction: None });
    }
    match count_product_vectors_2xn(pair, tol) {
        Ok(cert) => {
            let range = (!cert.infinite_or_indeterminate).then(|| cert.range_obstruction.clone());
            Ok(ClassificationReport { regime, verdict: Some(cert.verdict), bounds, range_obstruction: range })
        }
        Err(SolveError::Indeterminate(why)) => {
            Ok(ClassificationReport { regime, verdict: Some(Verdict::Indeterminate(why)), bounds, range_obstruction: None })
        }
        Err(e) => Err(e),
    }
}
