use num_complex::Complex64;

use crate::numeric::{ComplexF, Scalar};
use crate::poly::{conjugate_poly, resultant_w, UniPoly};
use crate::subspace::SubspacePair;

use super::pipeline::{conj_error, Context, Tolerances};
use super::SolveError;

/// `1 + max_{i<d} |c_i| / |c_d|`, or `None` for constants.
fn cauchy_bound(p: &UniPoly<ComplexF>) -> Option<f64> {
    let t = p.trimmed_rel(1e-12);
    let d = t.degree().filter(|&d| d > 0)?;
    let lead = t.coeffs()[d].norm();
    Some(1.0 + t.coeffs()[..d].iter().map(|c| c.norm() / lead).fold(0.0, f64::max))
}

/// Undamped Newton on `z ↦ P(z, z̄)` in real coordinates.
fn newton(p: &crate::poly::BiPoly<ComplexF>, mut z: Complex64, iterations: usize) -> Option<Complex64> {
    for _ in 0..iterations {
        let zc = ComplexF::raw(z);
        let (f, fz, fw) = p.eval_with_partials(&zc, &zc.conj());
        let (f, fz, fw) = (f.complex(), fz.complex(), fw.complex());
        let jx = fz + fw;
        let jy = Complex64::i() * (fz - fw);
        let det = jx.re * jy.im - jy.re * jx.im;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let step = Complex64::new(-(f.re * jy.im - jy.re * f.im) / det, -(jx.re * f.im - f.re * jx.im) / det);
        z += step;
        if !z.is_finite() {
            return None;
        }
        if step.norm() <= 4.0 * f64::EPSILON * (1.0 + z.norm()) {
            break;
        }
    }
    Some(z)
}

/// Counts product vectors without eliminating `w`: Newton's method on
/// `P(z, z̄) = 0` from a polar grid of starts, converged points merged and
/// then verified like the main pipeline.
///
/// The grid has `grid_density` geometrically spaced radii up to the
/// largest Cauchy root bound of `P`'s coefficient polynomials and of the
/// resultant, with `2 · grid_density` angles each.
pub fn brute_force_count_2xn<S: Scalar>(pair: &SubspacePair<S>, grid_density: usize, newton_iters: usize) -> Result<usize, SolveError> {
    let tol = Tolerances::default();
    let ctx = Context::new(pair, &tol)?;
    let (dz, dw) = ctx.pf.bidegree();
    let mut bound: f64 = 1.0;
    for q in 0..=dw {
        bound = bound.max(cauchy_bound(&ctx.pf.w_coefficient(q)).unwrap_or(0.0));
    }
    for p in 0..=dz {
        bound = bound.max(cauchy_bound(&ctx.pf.z_coefficient(p)).unwrap_or(0.0));
    }
    let r = resultant_w(&ctx.pf, &conjugate_poly(&ctx.pf))?;
    bound = bound.max(cauchy_bound(&r).unwrap_or(0.0));

    let grid_density = grid_density.max(2);
    let mut starts = vec![Complex64::new(0.0, 0.0)];
    for a in 0..grid_density {
        let radius = bound * 1e-3f64.powf(1.0 - a as f64 / (grid_density - 1) as f64);
        for b in 0..2 * grid_density {
            let theta = std::f64::consts::TAU * (b as f64 + 0.5) / (2 * grid_density) as f64 + 0.1 * a as f64;
            starts.push(Complex64::from_polar(radius, theta));
        }
    }
    let mut found: Vec<Complex64> = Vec::new();
    for &z0 in &starts {
        let Some(z) = newton(&ctx.pf, z0, newton_iters) else { continue };
        if conj_error(&ctx.pf, z) > 1e-12 {
            continue;
        }
        if !found.iter().any(|f| (f - z).norm() <= 1e-6 * (1.0 + z.norm())) {
            found.push(z);
        }
    }
    found.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut solutions = Vec::new();
    for z in found {
        solutions.extend(ctx.examine_root(ComplexF::raw(z), None)?.solution);
    }
    solutions.extend(ctx.examine_chart_point()?.solution);
    Ok(ctx.dedup(solutions).len())
}
