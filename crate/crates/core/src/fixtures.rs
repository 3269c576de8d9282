//! Named subspace pairs and seeded random pairs.

use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::numeric::{GaussianRational, Scalar};
use crate::subspace::{SubspaceError, SubspacePair};

type G = GaussianRational;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FixtureError {
    #[error("parameter constraint violated: {0}")]
    Constraint(String),
    #[error("unknown fixture {0:?} (expected hakye-2x4, example-4-6 or diagonal)")]
    Unknown(String),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
}

fn g(re: i64, im: i64) -> G {
    G::from_integers(re, im)
}

fn ints(v: &[(i64, i64)]) -> Vec<G> {
    v.iter().map(|&(re, im)| g(re, im)).collect()
}

/// `D = {z12 = z21, z13 = z22, z14 = z23}`, `E = {b z11 + z14 - a z22 = 0}`
/// in `C^2 ⊗ C^4`, for real rationals `0 < b < 4a³/27`.
pub fn hakye_2x4(a: &G, b: &G) -> Result<SubspacePair<G>, FixtureError> {
    if !a.is_real() || !b.is_real() {
        return Err(FixtureError::Constraint("a and b must be real".into()));
    }
    let bound = a.re() * a.re() * a.re() * BigRational::from_integer(4.into()) / BigRational::from_integer(27.into());
    if !b.re().is_positive() || b.re() >= &bound {
        return Err(FixtureError::Constraint(format!("need 0 < b < 4a^3/27, got a = {a}, b = {b}")));
    }
    let unit = |plus: usize, minus: usize| {
        let mut v = vec![G::zero(); 8];
        v[plus] = g(1, 0);
        v[minus] = g(-1, 0);
        v
    };
    let d_perp = vec![unit(1, 4), unit(2, 5), unit(3, 6)];
    let mut e = vec![G::zero(); 8];
    e[0] = b.clone();
    e[3] = g(1, 0);
    e[5] = -a.clone();
    Ok(SubspacePair::new(2, 4, d_perp, vec![e])?)
}

/// The Gaussian-integer pair in `C^2 ⊗ C^4` with `k = l = 2`.
pub fn example_4_6() -> SubspacePair<G> {
    let d_perp = vec![
        ints(&[(1, 0), (-1, 0), (3, 0), (-3, 0), (2, 0), (1, 1), (0, 0), (0, 0)]),
        ints(&[(-2, 3), (0, 0), (0, 0), (3, 0), (1, 0), (2, 0), (7, -1), (-1, 0)]),
    ];
    let e_perp = vec![
        ints(&[(11, 0), (3, 0), (1, 0), (0, 0), (0, 0), (0, 0), (-2, 0), (0, 0)]),
        ints(&[(0, 0), (0, 0), (0, 0), (0, 0), (13, -39), (0, 0), (0, 0), (-33, 9)]),
    ];
    SubspacePair::new(2, 4, d_perp, e_perp).expect("fixture vectors are independent")
}

/// `D⊥ = {z1j + j z2j : j ≤ k}`, `E⊥ = {z1j - j z2j : k < j ≤ n}`.
pub fn diagonal(k: usize, l: usize, n: usize) -> Result<SubspacePair<G>, FixtureError> {
    if k + l != n || n < 2 {
        return Err(FixtureError::Constraint(format!("need k + l = n >= 2, got k = {k}, l = {l}, n = {n}")));
    }
    let row = |j: usize, sign: i64| {
        let mut v = vec![G::zero(); 2 * n];
        v[j - 1] = g(1, 0);
        v[n + j - 1] = g(sign * j as i64, 0);
        v
    };
    Ok(SubspacePair::new(2, n, (1..=k).map(|j| row(j, 1)).collect(), (k + 1..=n).map(|j| row(j, -1)).collect())?)
}

/// Resolves a fixture by name. `diagonal` reads `k`, `l`, `n`.
pub fn named(name: &str, a: &G, b: &G, k: usize, l: usize, n: usize) -> Result<SubspacePair<G>, FixtureError> {
    match name {
        "hakye-2x4" => hakye_2x4(a, b),
        "example-4-6" => Ok(example_4_6()),
        "diagonal" => diagonal(k, l, n),
        other => Err(FixtureError::Unknown(other.to_string())),
    }
}

const DENOMINATOR: f64 = 65536.0;

fn sample(rng: &mut ChaCha8Rng) -> G {
    let mut part = || {
        let x: f64 = rng.sample(StandardNormal);
        BigRational::new(((x * DENOMINATOR).round() as i64).into(), (DENOMINATOR as i64).into())
    };
    let re = part();
    G::new(re, part())
}

/// `k` and `l` hyperplanes with independent standard-normal real and
/// imaginary parts rounded to multiples of `2^-16`, drawn from ChaCha8
/// seeded with `seed`. A dependent family is redrawn.
pub fn random_pair(m: usize, n: usize, k: usize, l: usize, seed: u64) -> Result<SubspacePair<G>, FixtureError> {
    if m < 2 || n < 2 || k > m * n || l > m * n {
        return Err(FixtureError::Constraint(format!("need m, n >= 2 and k, l <= mn, got ({m}, {n}, {k}, {l})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut family = |count: usize| (0..count).map(|_| (0..m * n).map(|_| sample(&mut rng)).collect::<Vec<_>>()).collect::<Vec<_>>();
    loop {
        let d = family(k);
        let e = family(l);
        match SubspacePair::new(m, n, d, e) {
            Ok(pair) => return Ok(pair),
            Err(SubspaceError::Dependent { .. }) => continue,
            Err(other) => return Err(other.into()),
        }
    }
}
