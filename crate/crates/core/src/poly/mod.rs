//! Dense polynomials, Sylvester matrices and resultants.
//!
//! Sylvester matrices are always built from *formal* degrees, so a
//! polynomial declared with bidegree at most `(k, l)` keeps a fixed-size
//! Sylvester matrix even when its leading coefficients vanish.

mod bi;
mod uni;

use num_complex::Complex64;

pub use bi::{conjugate_poly, BiPoly};
pub use uni::UniPoly;

use crate::linalg::{bareiss_det, det, Matrix};
use crate::numeric::{ComplexF, NumericError, Scalar};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolyError {
    #[error("Sylvester matrix needs at least one operand of positive formal degree")]
    DegenerateSylvester,
    #[error("formal degree {formal} is below the actual degree {actual}")]
    FormalDegree { formal: usize, actual: usize },
    #[error("term z^{p} w^{q} exceeds the formal bidegree ({dz}, {dw})")]
    BidegreeExceeded { p: usize, q: usize, dz: usize, dw: usize },
    #[error("coefficient grid must be rectangular and non-empty")]
    BadGrid,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("invalid polynomial JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// Lays out the Sylvester matrix from ascending coefficient lists.
///
/// With `f` of formal degree `m` and `g` of formal degree `n`, the first `n`
/// rows hold `a_m, …, a_0` shifted one column right per row, the last `m`
/// rows hold `b_n, …, b_0` the same way.
fn sylvester_layout<T: Clone>(f: &[T], g: &[T], zero: T) -> Matrix<T> {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    Matrix::from_fn(size, size, |r, c| {
        let (coeffs, shift, deg) = if r < n { (f, r, m) } else { (g, r - n, n) };
        match c.checked_sub(shift) {
            Some(off) if off <= deg => coeffs[deg - off].clone(),
            _ => zero.clone(),
        }
    })
}

pub fn sylvester_matrix<S: Scalar>(f: &UniPoly<S>, g: &UniPoly<S>) -> Result<Matrix<S>, PolyError> {
    if f.formal_degree() == 0 && g.formal_degree() == 0 {
        return Err(PolyError::DegenerateSylvester);
    }
    Ok(sylvester_layout(f.coeffs(), g.coeffs(), S::zero()))
}

/// `Res(f, g)`: the determinant of the Sylvester matrix at formal degrees.
pub fn resultant<S: Scalar>(f: &UniPoly<S>, g: &UniPoly<S>) -> Result<S, PolyError> {
    Ok(det(&sylvester_matrix(f, g)?))
}

/// Formal z-degree of `Res_w(P, Q)`: each Sylvester term takes `dw(Q)`
/// entries from `P` and `dw(P)` entries from `Q`.
pub fn resultant_w_degree_bound<S: Scalar>(p: &BiPoly<S>, q: &BiPoly<S>) -> usize {
    let (pz, pw) = p.bidegree();
    let (qz, qw) = q.bidegree();
    qw * pz + pw * qz
}

/// `Res_w(P, Q)` as a polynomial in `z`, treating `P` and `Q` as
/// polynomials in `w` with coefficients in `K[z]`.
///
/// Exact fields use fraction-free elimination over `K[z]`. Float fields
/// evaluate the Sylvester determinant at roots of unity and interpolate by
/// an inverse discrete Fourier transform.
pub fn resultant_w<S: Scalar>(p: &BiPoly<S>, q: &BiPoly<S>) -> Result<UniPoly<S>, PolyError> {
    let (_, pw) = p.bidegree();
    let (_, qw) = q.bidegree();
    if pw == 0 && qw == 0 {
        return Err(PolyError::DegenerateSylvester);
    }
    let bound = resultant_w_degree_bound(p, q);
    // a Sylvester matrix against a constant is diagonal
    let power = |base: UniPoly<S>, exp: usize| (0..exp).fold(UniPoly::constant(S::one()), |acc, _| &acc * &base);
    if pw == 0 || qw == 0 {
        let r = if pw == 0 { power(p.w_coefficient(0), qw) } else { power(q.w_coefficient(0), pw) };
        let r = r.trimmed();
        return Ok(UniPoly::with_formal_degree(r.coeffs().to_vec(), bound.max(r.formal_degree()))?);
    }
    if S::EXACT {
        let fc: Vec<UniPoly<S>> = (0..=pw).map(|i| p.w_coefficient(i)).collect();
        let gc: Vec<UniPoly<S>> = (0..=qw).map(|i| q.w_coefficient(i)).collect();
        let syl = sylvester_layout(&fc, &gc, UniPoly::zero());
        let r = bareiss_det(&syl).trimmed();
        let coeffs = r.coeffs().to_vec();
        Ok(UniPoly::with_formal_degree(coeffs, bound.max(r.formal_degree()))?)
    } else {
        resultant_w_by_dft(p, q, bound)
    }
}

fn resultant_w_by_dft<S: Scalar>(p: &BiPoly<S>, q: &BiPoly<S>, bound: usize) -> Result<UniPoly<S>, PolyError> {
    let pf = p.to_complexf()?;
    let qf = q.to_complexf()?;
    let (_, pw) = pf.bidegree();
    let (_, qw) = qf.bidegree();
    let points = bound + 1;
    let omega = |j: usize| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / points as f64);
    let mut values = Vec::with_capacity(points);
    for j in 0..points {
        let z = ComplexF::raw(omega(j));
        let fc: Vec<ComplexF> = (0..=pw).map(|i| pf.w_coefficient(i).eval(&z)).collect();
        let gc: Vec<ComplexF> = (0..=qw).map(|i| qf.w_coefficient(i).eval(&z)).collect();
        values.push(det(&sylvester_layout(&fc, &gc, ComplexF::zero())).complex());
    }
    let mut coeffs = Vec::with_capacity(points);
    for i in 0..points {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, v) in values.iter().enumerate() {
            acc += v * omega(j).powu(i as u32).conj();
        }
        let c = ComplexF::raw(acc / points as f64).checked()?;
        coeffs.push(S::from_complexf(c));
    }
    Ok(UniPoly::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::GaussianRational;

    type G = GaussianRational;

    fn g(re: i64, im: i64) -> G {
        G::from_integers(re, im)
    }

    #[test]
    fn sylvester_examples() {
        let f = UniPoly::<G>::from_i64(&[-1, 0, 1]);
        let gp = UniPoly::<G>::from_i64(&[-2, 1]);
        let s = sylvester_matrix(&f, &gp).unwrap();
        let expected = Matrix::from_rows(vec![vec![1, 0, -1], vec![1, -2, 0], vec![0, 1, -2]]).map(|&v| g(v, 0));
        assert_eq!(s, expected);

        let degenerate = sylvester_matrix(&UniPoly::<G>::from_i64(&[0, 1]).trimmed().trimmed(), &UniPoly::from_i64(&[1]));
        assert!(degenerate.is_ok(), "f = z has formal degree 1");
        assert_eq!(sylvester_matrix(&UniPoly::<G>::from_i64(&[3]), &UniPoly::from_i64(&[1])), Err(PolyError::DegenerateSylvester));

        let f2 = UniPoly::with_formal_degree(UniPoly::<G>::from_i64(&[-1, 1]).coeffs().to_vec(), 2).unwrap();
        let s2 = sylvester_matrix(&f2, &UniPoly::from_i64(&[1, 1])).unwrap();
        assert_eq!(s2.rows(), 3);
        assert!(s2.get(0, 0).is_zero());
    }

    #[test]
    fn resultant_examples() {
        let f = UniPoly::<G>::from_i64(&[-1, 0, 1]);
        assert_eq!(resultant(&f, &UniPoly::from_i64(&[-2, 1])).unwrap(), g(3, 0));
        assert_eq!(resultant(&f, &f).unwrap(), g(0, 0));
    }

    #[test]
    fn resultant_w_product_fixture() {
        // P = (z+1)(w-2), Q = (z-2)(w+1)
        let p = BiPoly::from_product(&UniPoly::<G>::from_i64(&[1, 1]), &UniPoly::from_i64(&[-2, 1]));
        let q = conjugate_poly(&p);
        assert_eq!(q, BiPoly::from_product(&UniPoly::from_i64(&[-2, 1]), &UniPoly::from_i64(&[1, 1])));
        let r = resultant_w(&p, &q).unwrap();
        assert_eq!(r, UniPoly::from_i64(&[-6, -3, 3]));
    }

    #[test]
    fn resultant_w_float_matches_exact() {
        let p = BiPoly::from_terms(3, 1, [(3, 1, g(-1, 0)), (2, 0, g(3, 0)), (0, 1, g(-1, 0))]).unwrap();
        let q = conjugate_poly(&p);
        let exact = resultant_w(&p, &q).unwrap();
        let float = resultant_w(&p.to_complexf().unwrap(), &q.to_complexf().unwrap()).unwrap();
        assert_eq!(float.formal_degree(), exact.formal_degree());
        for (a, b) in exact.coeffs().iter().zip(float.coeffs()) {
            assert!((a.to_complexf().unwrap().complex() - b.complex()).norm() < 1e-12);
        }
    }

    #[test]
    fn resultant_w_against_constant_in_w() {
        // P = z^2 - 2 (no w), Q = 3w^2 + 1: Res_w = (z^2 - 2)^2
        let p = BiPoly::from_terms(2, 0, [(2, 0, g(1, 0)), (0, 0, g(-2, 0))]).unwrap();
        let q = BiPoly::from_terms(0, 2, [(0, 2, g(3, 0)), (0, 0, g(1, 0))]).unwrap();
        let expected = UniPoly::from_i64(&[4, 0, -4, 0, 1]);
        assert_eq!(resultant_w(&p, &q).unwrap(), expected);
        assert_eq!(resultant_w(&q, &p).unwrap(), expected);
        let fp = p.to_complexf().unwrap();
        let fq = q.to_complexf().unwrap();
        assert_eq!(resultant_w(&fp, &fq).unwrap(), expected.to_complexf().unwrap());
    }

    #[test]
    fn resultant_w_rejects_constants_in_w() {
        let p = BiPoly::<G>::zero(2, 0);
        assert_eq!(resultant_w(&p, &p), Err(PolyError::DegenerateSylvester));
    }
}
