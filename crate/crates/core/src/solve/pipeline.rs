use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::Value;

use crate::classify::{bound_json, k2l2_bound, range_obstruction, RangeObstruction, Reason, Verdict};
use crate::linalg::{exact_rank, minors, Matrix, Svd};
use crate::numeric::{ComplexF, GaussianRational, Scalar};
use crate::poly::{conjugate_poly, resultant_w, BiPoly, UniPoly};
use crate::subspace::{build_linear_system, det_poly_2xn, LinearFormMatrix, SubspaceError, SubspacePair};

use super::roots::roots;
use super::SolveError;

/// Thresholds of the float tests. Each relative test has a rejection
/// threshold and an ambiguous band up to `band ×` that threshold which
/// raises [`SolveError::Indeterminate`].
#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    /// Conjugate consistency: backward error of `P(z, z̄) = 0`.
    pub conj: f64,
    /// Rank tests: singular values relative to the largest.
    pub rank: f64,
    pub band: f64,
    /// Certification of `x⊗y ∈ D`, `x̄⊗y ∈ E`.
    pub residual: f64,
    /// Projective distance under which two solutions are identified.
    pub dedup: f64,
    /// Float polynomials with all coefficients below this (relative) are zero.
    pub zero_poly: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { conj: 1e-8, rank: 1e-8, band: 10.0, residual: 1e-9, dedup: 1e-6, zero_poly: 1e-12 }
    }
}

/// The `(n-1)×(n-1)` minor of `L(x)` of largest modulus.
#[derive(Clone, Debug, PartialEq)]
pub struct RankCertificate {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub value: ComplexF,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductVectorSolution {
    /// Chart coordinate `x₁/x₂`; `None` for `x = (1, 0)`.
    pub z: Option<ComplexF>,
    /// Unit vector, first nonzero coordinate real positive.
    pub x: Vec<ComplexF>,
    pub y: Vec<ComplexF>,
    pub residual_d: f64,
    pub residual_e: f64,
    /// Rank of `L(x)`, always `n - 1`.
    pub rank: usize,
    pub rank_certificate: RankCertificate,
    /// Whether `z` was verified in exact arithmetic.
    pub exact: bool,
}

impl ProductVectorSolution {
    pub fn to_json(&self) -> Value {
        let vec = |v: &[ComplexF]| v.iter().map(Scalar::to_json).collect::<Vec<_>>();
        serde_json::json!({
            "z": self.z.map(|z| z.to_json()),
            "x": vec(&self.x),
            "y": vec(&self.y),
            "residual_D": self.residual_d,
            "residual_E": self.residual_e,
            "rank": self.rank,
            "rank_certificate": {
                "rows": self.rank_certificate.rows,
                "cols": self.rank_certificate.cols,
                "value": self.rank_certificate.value.to_json(),
            },
            "exact": self.exact,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CountCertificate {
    pub verdict: Verdict,
    pub k2l2_bound: u128,
    /// The bound is only claimed for pairs in the generic locus.
    pub bound_applies: bool,
    pub solutions: Vec<ProductVectorSolution>,
    /// `Res_w(P, Q)` in floats, at its formal degree.
    pub resultant: UniPoly<ComplexF>,
    /// Actual degree of the resultant; `None` when it vanishes identically.
    pub resultant_degree: Option<usize>,
    /// `x = (1, 0)` is among the solutions.
    pub chart_at_infinity: bool,
    /// A finite count reported for a pair outside the generic locus.
    pub caveat: bool,
    /// The solution set is infinite or could not be enumerated.
    pub infinite_or_indeterminate: bool,
    pub range_obstruction: RangeObstruction,
}

impl CountCertificate {
    pub fn count(&self) -> usize {
        self.solutions.len()
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "verdict": self.verdict.tag(),
            "reason": self.verdict.reason_json(),
            "count": self.count(),
            "k2l2_bound": bound_json(self.k2l2_bound),
            "bound_applies": self.bound_applies,
            "resultant_degree": self.resultant_degree,
            "resultant_formal_degree": self.resultant.formal_degree(),
            "chart_at_infinity": self.chart_at_infinity,
            "caveat": self.caveat,
            "infinite_or_indeterminate": self.infinite_or_indeterminate,
            "range_obstruction": self.range_obstruction.to_json(),
            "solutions": self.solutions.iter().map(ProductVectorSolution::to_json).collect::<Vec<_>>(),
        })
    }
}

/// `sqrt(1 - |⟨u, v⟩|²)` for unit vectors.
pub fn projective_distance(u: &[ComplexF], v: &[ComplexF]) -> f64 {
    let ip: Complex64 = u.iter().zip(v).map(|(a, b)| a.complex().conj() * b.complex()).sum();
    (1.0 - ip.norm_sqr()).max(0.0).sqrt()
}

/// Unit vector with its first non-negligible coordinate real positive.
fn normalize_projective(v: &[Complex64]) -> Vec<ComplexF> {
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let lead = v.iter().find(|c| c.norm() > 1e-10 * norm).copied().unwrap_or(Complex64::new(1.0, 0.0));
    let phase = lead.conj() / lead.norm();
    v.iter().map(|c| ComplexF::raw(c * phase / norm)).collect()
}

/// Unit kernel vector of a matrix of numerical rank exactly `n - 1`.
pub fn null_space_y(lx: &Matrix<ComplexF>, rel_tol: f64) -> Result<Vec<ComplexF>, SolveError> {
    let n = lx.cols();
    let svd = Svd::new(lx)?;
    match svd.rank(rel_tol) {
        r if r == n => Err(SolveError::FullRank),
        r if r + 1 < n => Err(SolveError::RankDeficient { rank: r, expected: n - 1 }),
        _ => Ok(normalize_projective(&svd.right_vectors[n - 1])),
    }
}

fn rational_approx(x: f64, max_den: i64) -> Option<BigRational> {
    if !x.is_finite() || x.abs() > 1e12 {
        return None;
    }
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = a as i64;
        let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
        let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    let close = (h1 as f64 / k1 as f64 - x).abs() <= 1e-8 * (1.0 + x.abs());
    close.then(|| BigRational::new(BigInt::from(h1), BigInt::from(k1)))
}

/// Exact root of `poly` near `z` with small denominators, if there is one.
fn snap_exact<S: Scalar>(z: ComplexF, poly: &UniPoly<S>) -> Option<S> {
    const MAX_DEN: i64 = 1_000_000;
    let g = GaussianRational::new(rational_approx(z.re(), MAX_DEN)?, rational_approx(z.im(), MAX_DEN)?);
    let s = S::from_gaussian(&g).ok()?;
    poly.eval(&s).is_zero().then_some(s)
}

/// `|P(z, z̄)|` relative to the largest coefficient, measured on the
/// unit representative of `(z, 1)`: `|P(z, z̄)| / (max|c| (1+|z|²)^((k+l)/2))`.
pub(crate) fn conj_error(p: &BiPoly<ComplexF>, z: Complex64) -> f64 {
    let scale = p.max_coeff_magnitude();
    if scale == 0.0 {
        return 0.0;
    }
    let (dz, dw) = p.bidegree();
    let zc = ComplexF::raw(z);
    let homogenizer = (1.0 + z.norm_sqr()).powf((dz + dw) as f64 / 2.0);
    p.eval(&zc, &zc.conj()).norm() / (scale * homogenizer)
}

/// Newton's method on `z ↦ P(z, z̄)` as a map of `R^2`.
pub(crate) fn newton_conj(p: &BiPoly<ComplexF>, mut z: Complex64, iterations: usize) -> Complex64 {
    let mut best = conj_error(p, z);
    for _ in 0..iterations {
        let zc = ComplexF::raw(z);
        let (f, fz, fw) = p.eval_with_partials(&zc, &zc.conj());
        let (f, fz, fw) = (f.complex(), fz.complex(), fw.complex());
        // dF = (Pz + Pw) dx + i (Pz - Pw) dy
        let jx = fz + fw;
        let jy = Complex64::i() * (fz - fw);
        let det = jx.re * jy.im - jy.re * jx.im;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dx = -(f.re * jy.im - jy.re * f.im) / det;
        let dy = -(jx.re * f.im - f.re * jx.im) / det;
        let next = z + Complex64::new(dx, dy);
        let err = conj_error(p, next);
        if !next.is_finite() || err > best {
            break;
        }
        let small = (next - z).norm() <= f64::EPSILON * (1.0 + z.norm());
        (z, best) = (next, err);
        if small || err == 0.0 {
            break;
        }
    }
    z
}

/// What happened at one candidate point.
pub(crate) struct PointOutcome {
    /// `L(x)` has rank below `n - 1`.
    pub rank_defect: bool,
    pub solution: Option<ProductVectorSolution>,
}

/// Shared state for examining candidate points of one pair.
pub(crate) struct Context<S: Scalar> {
    pair_f: SubspacePair<ComplexF>,
    pub lin: LinearFormMatrix<S>,
    pub p: BiPoly<S>,
    pub pf: BiPoly<ComplexF>,
    pub n: usize,
    pub tol: Tolerances,
}

impl<S: Scalar> Context<S> {
    pub fn new(pair: &SubspacePair<S>, tol: &Tolerances) -> Result<Self, SolveError> {
        if pair.m() != 2 {
            return Err(SubspaceError::NotQubit(pair.m()).into());
        }
        let lin = build_linear_system(pair)?;
        let p = det_poly_2xn(&lin)?;
        let pf = p.to_complexf()?;
        Ok(Self { pair_f: pair.to_complexf()?, lin, p, pf, n: pair.n(), tol: tol.clone() })
    }

    fn svd_at(&self, x: &[Complex64]) -> Result<(Matrix<ComplexF>, Svd), SolveError> {
        let unit = normalize_projective(x);
        let m = self.lin.eval_f(&unit)?;
        let svd = Svd::new(&m)?;
        Ok((m, svd))
    }

    /// Rank classification from singular values: `Some(true)` for rank
    /// below `n - 1`, `Some(false)` for at least `n - 1`.
    fn rank_defect_from(&self, svd: &Svd, what: &str) -> Result<bool, SolveError> {
        let ratio = svd.singular_values[self.n - 2] / svd.max();
        let cut = self.tol.rank;
        if ratio <= cut || svd.max() == 0.0 {
            Ok(true)
        } else if ratio <= self.tol.band * cut {
            Err(SolveError::Indeterminate(format!("rank test at {what}: σ_(n-1)/σ_max = {ratio:e} is inside the ambiguous band")))
        } else {
            Ok(false)
        }
    }

    fn build_solution(&self, z: Option<ComplexF>, x: &[Complex64], m: &Matrix<ComplexF>, svd: &Svd, exact: bool) -> Result<ProductVectorSolution, SolveError> {
        let what = z.map_or("x = (1, 0)".to_string(), |z| format!("z = {z}"));
        let null_ratio = svd.singular_values[self.n - 1] / svd.max();
        if null_ratio > self.tol.band * self.tol.rank {
            return Err(SolveError::Indeterminate(format!("L is not numerically singular at {what} (σ_min/σ_max = {null_ratio:e})")));
        }
        let x = normalize_projective(x);
        let y = normalize_projective(&svd.right_vectors[self.n - 1]);
        let residual_d = self.pair_f.residual_d(&x, &y)?;
        let residual_e = self.pair_f.residual_e(&x, &y)?;
        if residual_d > self.tol.residual || residual_e > self.tol.residual {
            return Err(SolveError::Indeterminate(format!(
                "solution at {what} fails certification (residuals {residual_d:e}, {residual_e:e})"
            )));
        }
        let best = minors(m, self.n - 1)
            .into_iter()
            .max_by(|a, b| a.value.norm().total_cmp(&b.value.norm()))
            .expect("n >= 2 gives at least one minor");
        Ok(ProductVectorSolution {
            z,
            x,
            y,
            residual_d,
            residual_e,
            rank: self.n - 1,
            rank_certificate: RankCertificate { rows: best.rows, cols: best.cols, value: best.value },
            exact,
        })
    }

    /// Examines a finite root `z` of the eliminated polynomial.
    pub fn examine_root(&self, z: ComplexF, exact: Option<&S>) -> Result<PointOutcome, SolveError> {
        if let Some(ze) = exact {
            let rank = exact_rank(&self.lin.eval(&[ze.clone(), S::one()]));
            let rank_defect = rank + 1 < self.n;
            if rank + 1 != self.n {
                return Ok(PointOutcome { rank_defect, solution: None });
            }
            let x = [z.complex(), Complex64::new(1.0, 0.0)];
            let (m, svd) = self.svd_at(&x)?;
            let sol = self.build_solution(Some(z), &x, &m, &svd, true)?;
            return Ok(PointOutcome { rank_defect: false, solution: Some(sol) });
        }
        // roots of the float resultant can be far less accurate than the
        // solutions of P(z, z̄) = 0 they approximate, so polish first
        let polished = newton_conj(&self.pf, z.complex(), 30);
        let err = conj_error(&self.pf, polished);
        let (consistent, zc) = if err <= self.tol.conj {
            (true, polished)
        } else if err <= self.tol.band * self.tol.conj {
            return Err(SolveError::Indeterminate(format!("conjugate consistency at z = {z}: error {err:e} is inside the ambiguous band")));
        } else {
            (false, z.complex())
        };
        let x = [zc, Complex64::new(1.0, 0.0)];
        let (m, svd) = self.svd_at(&x)?;
        let rank_defect = self.rank_defect_from(&svd, &format!("z = {z}"))?;
        if !consistent || rank_defect {
            return Ok(PointOutcome { rank_defect, solution: None });
        }
        let sol = self.build_solution(Some(ComplexF::raw(zc)), &x, &m, &svd, false)?;
        Ok(PointOutcome { rank_defect: false, solution: Some(sol) })
    }

    /// Examines `x = (1, 0)`, the one point off the chart `x₂ = 1`.
    pub fn examine_chart_point(&self) -> Result<PointOutcome, SolveError> {
        let (k, l) = self.p.bidegree();
        let top = self.p.get(k, l);
        let on_variety = if S::EXACT {
            top.is_zero()
        } else {
            let ratio = top.magnitude() / self.pf.max_coeff_magnitude();
            if ratio > self.tol.conj && ratio <= self.tol.band * self.tol.conj {
                return Err(SolveError::Indeterminate(format!("det L at x = (1, 0) is {ratio:e} relative, inside the ambiguous band")));
            }
            ratio <= self.tol.conj
        };
        if !on_variety {
            return Ok(PointOutcome { rank_defect: false, solution: None });
        }
        let x = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let (m, svd) = self.svd_at(&x)?;
        let rank_defect = if S::EXACT {
            exact_rank(&self.lin.eval(&[S::one(), S::zero()])) + 1 < self.n
        } else {
            self.rank_defect_from(&svd, "x = (1, 0)")?
        };
        if rank_defect {
            return Ok(PointOutcome { rank_defect, solution: None });
        }
        let sol = self.build_solution(None, &x, &m, &svd, S::EXACT)?;
        Ok(PointOutcome { rank_defect: false, solution: Some(sol) })
    }

    /// Largest modulus among the hyperplane coefficients.
    pub fn input_scale(&self) -> f64 {
        let fam = |f: &[Vec<ComplexF>]| f.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
        fam(self.pair_f.d_perp()).max(fam(self.pair_f.e_perp()))
    }

    /// Drops solutions within the dedup distance of an earlier one.
    pub fn dedup(&self, solutions: Vec<ProductVectorSolution>) -> Vec<ProductVectorSolution> {
        dedup_solutions(solutions, self.tol.dedup)
    }
}

/// Keeps the first of any solutions whose `x` and `y` both lie within
/// projective distance `dist` of each other.
pub fn dedup_solutions(solutions: Vec<ProductVectorSolution>, dist: f64) -> Vec<ProductVectorSolution> {
    let mut kept: Vec<ProductVectorSolution> = Vec::with_capacity(solutions.len());
    for s in solutions {
        let dup = kept.iter().any(|k| projective_distance(&k.x, &s.x) < dist && projective_distance(&k.y, &s.y) < dist);
        if !dup {
            kept.push(s);
        }
    }
    kept
}

/// Candidate chart coordinates, each distinct root once, sorted.
///
/// Exact polynomials are solved in floats first; only when a cluster of
/// multiplicity above one shows up is the exact square-free part taken.
/// Roots with small rational parts that satisfy the exact polynomial are
/// returned exactly as well.
fn candidates<S: Scalar>(poly: &UniPoly<S>, tol: &Tolerances) -> Result<Vec<(ComplexF, Option<S>)>, SolveError> {
    if S::EXACT {
        let t = poly.trimmed();
        if t.degree().unwrap_or(0) == 0 {
            return Ok(Vec::new());
        }
        let mut clusters = roots(&t.to_complexf()?)?;
        let mut target = t;
        if clusters.iter().any(|c| c.multiplicity > 1) {
            target = target.squarefree_part();
            clusters = roots(&target.to_complexf()?)?;
        }
        Ok(clusters
            .into_iter()
            .map(|c| {
                let exact = snap_exact(c.center, &target);
                let center = match &exact {
                    Some(e) => e.to_complexf().unwrap_or(c.center),
                    None => c.center,
                };
                (center, exact)
            })
            .collect())
    } else {
        let trimmed = poly.to_complexf()?.trimmed_rel(tol.zero_poly);
        if trimmed.degree().unwrap_or(0) == 0 {
            return Ok(Vec::new());
        }
        Ok(roots(&trimmed)?.into_iter().map(|c| (c.center, None)).collect())
    }
}

/// Counts the product vectors `x⊗y ∈ D` with `x̄⊗y ∈ E` for `m = 2`,
/// `k + l = n`, and decides whether the pair is generic.
///
/// Finite chart roots come from `Res_w(P, Q)` (or from `P` itself when it
/// depends on one variable only); the point `x = (1, 0)` is checked
/// separately. When the resultant vanishes identically, it is recomputed
/// at the actual bidegree of `P`; a nonzero result gives a finite count
/// flagged with `caveat`, otherwise no solutions are listed and
/// `infinite_or_indeterminate` is set.
pub fn count_product_vectors_2xn<S: Scalar>(pair: &SubspacePair<S>, tol: &Tolerances) -> Result<CountCertificate, SolveError> {
    let ctx = Context::new(pair, tol)?;
    let (k, l, n) = (pair.k(), pair.l(), pair.n());
    let q = conjugate_poly(&ctx.p);
    let r = resultant_w(&ctx.p, &q)?;
    let p_scale = ctx.input_scale().powi(n as i32);
    let r_zero = r.is_negligible(tol.zero_poly, p_scale.powi(n as i32));
    let resultant = r.to_complexf()?;
    let resultant_degree = match (r_zero, S::EXACT) {
        (true, _) => None,
        (false, true) => r.degree(),
        (false, false) => resultant.trimmed_rel(tol.zero_poly).degree(),
    };

    let mut verdict = if r_zero { Verdict::NotInU(Reason::ResultantIdenticallyZero) } else { Verdict::InU };
    let mut infinite = false;
    // `None`: no finite chart points to examine
    let candidate_poly = if !r_zero {
        Some(if l == 0 {
            ctx.p.w_coefficient(0)
        } else if k == 0 {
            q.w_coefficient(0)
        } else {
            r.clone()
        })
    } else if ctx.p.is_negligible(tol.zero_poly, p_scale) {
        infinite = true;
        None
    } else {
        let pt = ctx.p.trimmed_rel(tol.zero_poly);
        let (dz, dw) = pt.bidegree();
        if dz + dw == 0 {
            None
        } else {
            let rt = resultant_w(&pt, &conjugate_poly(&pt))?;
            let scale = pt.to_complexf()?.max_coeff_magnitude().powi((dz + dw) as i32);
            if rt.is_negligible(tol.zero_poly, scale) {
                infinite = true;
                None
            } else {
                Some(rt)
            }
        }
    };

    let mut solutions = Vec::new();
    if let Some(poly) = &candidate_poly {
        for (z, exact) in candidates(poly, tol)? {
            let outcome = ctx.examine_root(z, exact.as_ref())?;
            if outcome.rank_defect {
                infinite = true;
                if verdict == Verdict::InU {
                    verdict = Verdict::NotInU(Reason::RankDefectAtRoot { z });
                }
            }
            solutions.extend(outcome.solution);
        }
    }
    if !infinite {
        let chart = ctx.examine_chart_point()?;
        infinite |= chart.rank_defect;
        solutions.extend(chart.solution);
    }
    let mut solutions = ctx.dedup(solutions);
    if infinite && r_zero {
        solutions.clear();
    }
    let chart_at_infinity = solutions.iter().any(|s| s.z.is_none());
    let in_u = verdict == Verdict::InU;
    let range = range_obstruction(solutions.len(), pair);
    Ok(CountCertificate {
        k2l2_bound: k2l2_bound(k, l),
        bound_applies: in_u,
        caveat: !in_u && !infinite,
        infinite_or_indeterminate: infinite,
        verdict,
        solutions,
        resultant,
        resultant_degree,
        chart_at_infinity,
        range_obstruction: range,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexF {
        ComplexF::new(re, im).unwrap()
    }

    #[test]
    fn null_space_examples() {
        let m = Matrix::from_rows(vec![vec![c(3.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]]);
        let y = null_space_y(&m, 1e-8).unwrap();
        assert!(y[0].norm() < 1e-15 && (y[1].re() - 1.0).abs() < 1e-15 && y[1].im() == 0.0);
        let full = Matrix::from_rows(vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(2.0, 0.0)]]);
        assert_eq!(null_space_y(&full, 1e-8), Err(SolveError::FullRank));
        let zero = Matrix::from_fn(3, 3, |_, _| c(0.0, 0.0));
        assert!(matches!(null_space_y(&zero, 1e-8), Err(SolveError::RankDeficient { rank: 0, .. })));
    }

    #[test]
    fn diagonal_shape_kernel() {
        // diag(z+1, z+2, z̄-3) at z = 3
        let m = Matrix::from_fn(3, 3, |r, col| if r != col { c(0.0, 0.0) } else { [c(4.0, 0.0), c(5.0, 0.0), c(0.0, 0.0)][r] });
        let y = null_space_y(&m, 1e-8).unwrap();
        assert!(projective_distance(&y, &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]) < 1e-12);
    }

    #[test]
    fn rational_snapping() {
        assert_eq!(rational_approx(-0.25, 1000), Some(BigRational::new((-1).into(), 4.into())));
        assert_eq!(rational_approx(3.0, 1000), Some(BigRational::from_integer(3.into())));
        assert_eq!(rational_approx(std::f64::consts::PI, 1000), None);
    }

    #[test]
    fn projective_normalization() {
        let v = normalize_projective(&[Complex64::new(0.0, 2.0), Complex64::new(0.0, 0.0)]);
        assert_eq!(v, vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let w = normalize_projective(&[Complex64::new(0.0, 0.0), Complex64::new(-3.0, 0.0)]);
        assert_eq!(w[1], c(1.0, 0.0));
    }
}
