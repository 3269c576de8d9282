//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's determinant or elimination code.

#![allow(dead_code)]

use prodvec::numeric::{GaussianRational as G, Scalar};
use prodvec::poly::{resultant, BiPoly, UniPoly};

pub fn g(re: i64, im: i64) -> G {
    G::from_integers(re, im)
}

/// Determinant by Gaussian elimination with division, first nonzero pivot.
pub fn det(mut a: Vec<Vec<G>>) -> G {
    let n = a.len();
    let mut acc = G::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return G::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            acc = -acc;
        }
        let inv = a[col][col].inv().expect("nonzero pivot");
        acc = acc * a[col][col].clone();
        for r in col + 1..n {
            let factor = a[r][col].clone() * inv.clone();
            if factor.is_zero() {
                continue;
            }
            for c in col..n {
                let sub = factor.clone() * a[col][c].clone();
                a[r][c] = a[r][c].clone() - sub;
            }
        }
    }
    acc
}

/// Rows `z^i f` for `i < deg g`, then `z^j g` for `j < deg f`, each written
/// from the constant term upward. Its determinant is `±Res(f, g)`.
fn multiplication_matrix(f: &UniPoly<G>, g: &UniPoly<G>) -> Vec<Vec<G>> {
    let (m, n) = (f.formal_degree(), g.formal_degree());
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (poly, shifts) in [(f, n), (g, m)] {
        for i in 0..shifts {
            let mut row = vec![G::zero(); size];
            for (d, c) in poly.coeffs().iter().enumerate() {
                row[i + d] = c.clone();
            }
            rows.push(row);
        }
    }
    rows
}

/// `A`, `B` with `A f + B g = r` for a nonzero constant `r`, found by
/// Cramer's rule on the coefficient equations.
pub fn bezout_cramer(f: &UniPoly<G>, g: &UniPoly<G>, r: &G) -> Option<(UniPoly<G>, UniPoly<G>)> {
    let (m, n) = (f.formal_degree(), g.formal_degree());
    let rows = multiplication_matrix(f, g);
    let size = m + n;
    // unknown u_i multiplies row i; equation c collects coefficient z^c
    let system: Vec<Vec<G>> = (0..size).map(|c| (0..size).map(|i| rows[i][c].clone()).collect()).collect();
    let d = det(system.clone());
    let inv = d.inv()?;
    let mut u = Vec::with_capacity(size);
    for i in 0..size {
        let mut replaced = system.clone();
        for (c, row) in replaced.iter_mut().enumerate() {
            row[i] = if c == 0 { r.clone() } else { G::zero() };
        }
        u.push(det(replaced) * inv.clone());
    }
    let b = u.split_off(n);
    Some((UniPoly::new(u), UniPoly::new(b)))
}

/// `±Res(f, g)` from the oracle determinant.
pub fn resultant_up_to_sign(f: &UniPoly<G>, g: &UniPoly<G>) -> G {
    det(multiplication_matrix(f, g))
}

/// `P(z0, w)` as a polynomial in `w` of formal degree `dw`.
pub fn specialize_z(p: &BiPoly<G>, z0: &G) -> UniPoly<G> {
    let (_, dw) = p.bidegree();
    let coeffs = (0..=dw).map(|q| p.w_coefficient(q).eval(z0)).collect();
    UniPoly::with_formal_degree(coeffs, dw).expect("length matches formal degree")
}

/// Newton interpolation through `(x_i, y_i)`, returned in the monomial basis.
pub fn interpolate(xs: &[G], ys: &[G]) -> UniPoly<G> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = dd[i].clone() - dd[i - 1].clone();
            let den = xs[i].clone() - xs[i - j].clone();
            dd[i] = num * den.inv().expect("distinct nodes");
        }
    }
    let mut out = UniPoly::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        out = &(&out * &UniPoly::linear_factor(xs[i].clone())) + &UniPoly::constant(dd[i].clone());
    }
    out.trimmed()
}

/// `Res_w(P, Q)` by evaluating at `bound + 1` integer points and
/// interpolating.
pub fn resultant_w_by_interpolation(p: &BiPoly<G>, q: &BiPoly<G>, bound: usize) -> UniPoly<G> {
    let xs: Vec<G> = (0..=bound as i64).map(G::from_i64).collect();
    let ys: Vec<G> = xs.iter().map(|z| resultant(&specialize_z(p, z), &specialize_z(q, z)).expect("not both constant")).collect();
    interpolate(&xs, &ys)
}

/// Whether `a = c·b` for some nonzero `c`, fixed by the coefficient of `z^pin`.
pub fn proportional(a: &UniPoly<G>, b: &UniPoly<G>, pin: usize) -> Option<G> {
    let c = a.coeff(pin) * b.coeff(pin).inv()?;
    let len = a.coeffs().len().max(b.coeffs().len());
    (0..len).all(|i| a.coeff(i) == c.clone() * b.coeff(i)).then_some(c)
}
