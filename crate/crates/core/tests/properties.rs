mod common;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

use common::*;
use prodvec::classify::{algorithm1_classify, k2l2_bound, kiem_regime, segre_degree, Regime, Verdict};
use prodvec::fixtures::{diagonal, random_pair};
use prodvec::numeric::{ComplexF, GaussianRational as G, Scalar};
use prodvec::poly::{conjugate_poly, resultant, resultant_w, resultant_w_degree_bound, BiPoly, UniPoly};
use prodvec::solve::{count_product_vectors_2xn, dedup_solutions, roots, SolveError, Tolerances};
use prodvec::subspace::{build_linear_system, det_poly_2xn, minors_system, SubspaceError, SubspacePair};

fn rational() -> impl Strategy<Value = BigRational> {
    (-60i64..=60, 1i64..=12).prop_map(|(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
}

fn gaussian() -> impl Strategy<Value = G> {
    (rational(), rational()).prop_map(|(re, im)| G::new(re, im))
}

fn small_gaussian() -> impl Strategy<Value = G> {
    (-6i64..=6, -6i64..=6).prop_map(|(re, im)| g(re, im))
}

/// A polynomial of exact degree in `1..=max_degree`.
fn uni(max_degree: usize) -> impl Strategy<Value = UniPoly<G>> {
    prop::collection::vec(small_gaussian(), 2..=max_degree + 1).prop_map(|mut c| {
        let last = c.len() - 1;
        if c[last].is_zero() {
            c[last] = G::one();
        }
        UniPoly::new(c)
    })
}

fn bipoly(max_dz: usize, max_dw: usize) -> impl Strategy<Value = BiPoly<G>> {
    (0..=max_dz, 0..=max_dw).prop_flat_map(|(dz, dw)| {
        prop::collection::vec(prop::option::weighted(0.7, small_gaussian()), (dz + 1) * (dw + 1)).prop_map(move |cells| {
            let terms = cells.into_iter().enumerate().map(|(i, c)| (i / (dw + 1), i % (dw + 1), c.unwrap_or_else(G::zero)));
            BiPoly::from_terms(dz, dw, terms).unwrap()
        })
    })
}

fn proportional_bi(a: &BiPoly<G>, b: &BiPoly<G>) -> bool {
    if a.bidegree() != b.bidegree() {
        return false;
    }
    let (dz, dw) = a.bidegree();
    let cells: Vec<(usize, usize)> = (0..=dz).flat_map(|p| (0..=dw).map(move |q| (p, q))).collect();
    let Some(&(p0, q0)) = cells.iter().find(|&&(p, q)| !b.get(p, q).is_zero()) else {
        return a.is_zero();
    };
    let c = a.get(p0, q0) * b.get(p0, q0).inv().unwrap();
    !c.is_zero() && cells.iter().all(|&(p, q)| a.get(p, q) == c.clone() * b.get(p, q))
}

fn cf(z: Complex64) -> ComplexF {
    ComplexF::new(z.re, z.im).unwrap()
}

fn boundary_shape() -> impl Strategy<Value = (usize, usize, u64)> {
    (2usize..=4).prop_flat_map(|n| (Just(n), 0..=n, any::<u64>()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn gaussian_field_axioms(a in gaussian(), b in gaussian(), c in gaussian()) {
        prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert_eq!(a.clone() + (-a.clone()), G::zero());
        if let Some(inv) = a.inv() {
            prop_assert_eq!(a.clone() * inv, G::one());
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn conj_is_an_involutive_automorphism(a in gaussian(), b in gaussian()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((a.clone() * b.clone()).conj(), a.conj() * b.conj());
        prop_assert_eq!((a.clone() + b.clone()).conj(), a.conj() + b.conj());
        let (fa, fb) = (a.to_complexf().unwrap(), b.to_complexf().unwrap());
        prop_assert_eq!(fa.conj().conj(), fa);
        let lhs = (fa * fb).conj().complex();
        let rhs = (fa.conj() * fb.conj()).complex();
        prop_assert!((lhs - rhs).norm() <= 1e-15 * lhs.norm().max(1.0));
    }

    #[test]
    fn shared_factor_kills_resultant(f in uni(3), g in uni(3), h in uni(2)) {
        prop_assert!(resultant(&(&f * &h), &(&g * &h)).unwrap().is_zero());
    }

    #[test]
    fn bezout_identity_by_cramer(f in uni(4), g in uni(4)) {
        let r = resultant(&f, &g).unwrap();
        prop_assume!(!r.is_zero());
        let oracle = resultant_up_to_sign(&f, &g);
        prop_assert!(oracle == r || oracle == -r.clone());
        let (a, b) = bezout_cramer(&f, &g, &r).unwrap();
        prop_assert_eq!((&(&a * &f) + &(&b * &g)).trimmed(), UniPoly::constant(r));
    }

    #[test]
    fn resultant_is_multiplicative(f in uni(2), g in uni(2), h in uni(3)) {
        let lhs = resultant(&(&f * &g), &h).unwrap();
        prop_assert_eq!(lhs, resultant(&f, &h).unwrap() * resultant(&g, &h).unwrap());
    }

    #[test]
    fn conjugate_poly_is_an_involution(p in bipoly(3, 3), x in small_gaussian()) {
        let q = conjugate_poly(&p);
        prop_assert_eq!(q.bidegree(), (p.bidegree().1, p.bidegree().0));
        prop_assert_eq!(conjugate_poly(&q), p.clone());
        prop_assert_eq!(q.eval(&x, &x.conj()), p.eval(&x, &x.conj()).conj());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sylvester_agrees_with_interpolation(p in bipoly(3, 3), q in bipoly(3, 3)) {
        prop_assume!(p.bidegree().1 + q.bidegree().1 > 0);
        let bound = resultant_w_degree_bound(&p, &q);
        let r = resultant_w(&p, &q).unwrap();
        prop_assert_eq!(r.trimmed(), resultant_w_by_interpolation(&p, &q, bound));
    }

    #[test]
    fn degree_bound_for_conjugate_pairs(p in bipoly(4, 4)) {
        let (k, l) = p.bidegree();
        prop_assume!(k + l <= 6 && k + l > 0);
        let r = resultant_w(&p, &conjugate_poly(&p)).unwrap();
        prop_assert!(r.degree().unwrap_or(0) <= k * k + l * l);
    }

    #[test]
    fn representation_independence(
        (n, k, seed) in boundary_shape(),
        mix in prop::collection::vec(-3i64..=3, 32),
    ) {
        let pair = random_pair(2, n, k, n - k, seed).unwrap();
        let recombine = |family: &[Vec<G>], offset: usize| -> Vec<Vec<G>> {
            let size = family.len();
            // unit lower triangular times upper triangular with nonzero diagonal
            (0..size).map(|r| {
                (0..2 * n).map(|c| {
                    (0..size).fold(G::zero(), |acc, s| {
                        let coeff = if s == r { G::from_i64(1 + mix[(offset + r) % 32].abs()) } else if s < r { G::from_i64(mix[(offset + r * size + s) % 32]) } else { G::zero() };
                        acc + coeff * family[s][c].clone()
                    })
                }).collect()
            }).collect()
        };
        let mixed = SubspacePair::new(2, n, recombine(pair.d_perp(), 0), recombine(pair.e_perp(), 7)).unwrap();
        let p = det_poly_2xn(&build_linear_system(&pair).unwrap()).unwrap();
        let p_mixed = det_poly_2xn(&build_linear_system(&mixed).unwrap()).unwrap();
        prop_assert!(proportional_bi(&p_mixed, &p));
    }

    #[test]
    fn det_poly_bidegree((n, k, seed) in boundary_shape()) {
        let p = det_poly_2xn(&build_linear_system(&random_pair(2, n, k, n - k, seed).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(p.bidegree(), (k, n - k));
        if let Some((az, aw)) = p.actual_bidegree() {
            prop_assert!(az <= k && aw <= n - k);
        }
    }

    #[test]
    fn pipeline_invariants((n, k, seed) in boundary_shape()) {
        let pair = random_pair(2, n, k, n - k, seed).unwrap();
        let tol = Tolerances::default();
        let cert = count_product_vectors_2xn(&pair, &tol).unwrap();
        for s in &cert.solutions {
            // re-checked against the original hyperplanes
            prop_assert!(pair.residual_d(&s.x, &s.y).unwrap() <= 1e-9);
            prop_assert!(pair.residual_e(&s.x, &s.y).unwrap() <= 1e-9);
        }
        if cert.verdict == Verdict::InU {
            prop_assert!(cert.count() as u128 <= k2l2_bound(k, n - k));
        }
        let once = dedup_solutions(cert.solutions.clone(), tol.dedup);
        prop_assert_eq!(&dedup_solutions(once.clone(), tol.dedup), &once);
        prop_assert_eq!(once.len(), cert.count());
        let report = algorithm1_classify(&pair, &tol).unwrap();
        prop_assert_eq!(report.verdict, Some(cert.verdict));
    }
}

/// The single maximal minor of `L(x, x̄)`, with `x = (z, 1)` and `x̄`
/// replaced by `(w, 1)`, is `P(z, w)` up to a constant.
#[test]
fn minor_expansion_matches_det_poly() {
    for seed in 0..16u64 {
        let n = 2 + (seed % 3) as usize;
        let k = (seed / 3) as usize % (n + 1);
        let lin = build_linear_system(&random_pair(2, n, k, n - k, 900 + seed).unwrap()).unwrap();
        let p = det_poly_2xn(&lin).unwrap();
        let minors = minors_system(&lin);
        assert_eq!(minors.len(), 1);
        let mut ratio: Option<G> = None;
        for (z, w) in (-2..=2).flat_map(|a| (-2..=2).map(move |b| (G::from_integers(a, b), G::from_integers(b - 1, a)))) {
            let (lhs, rhs) = (p.eval(&z, &w), minors[0].eval(&[z.clone(), G::one(), w.clone(), G::one()]));
            assert_eq!(lhs.is_zero(), rhs.is_zero(), "seed {seed}");
            if !lhs.is_zero() {
                let r = lhs / rhs;
                assert_eq!(ratio.get_or_insert_with(|| r.clone()), &r, "seed {seed}");
            }
        }
        assert!(ratio.is_some());
    }
}

/// `x = (z, 1)` for each root `z` of the diagonal resultant is a solution,
/// so every maximal minor of `L(x)` vanishes there.
#[test]
fn minors_vanish_at_diagonal_solutions() {
    for n in 2..=4usize {
        for k in 0..=n {
            let lin = build_linear_system(&diagonal(k, n - k, n).unwrap()).unwrap();
            let minors = minors_system(&lin);
            let roots = (1..=k as i64).map(|j| -j).chain(k as i64 + 1..=n as i64);
            for z in roots {
                let x = [G::from_i64(z), G::one()];
                assert!(minors.iter().all(|m| m.eval_conj(&x).is_zero()), "n = {n}, k = {k}, z = {z}");
            }
            let off = [G::from_i64(n as i64 + 7), G::one()];
            assert!(minors.iter().any(|m| !m.eval_conj(&off).is_zero()));
        }
    }
}

/// A root `z₀` of `R` with partner `w₀` (a common root of `P(z₀, ·)` and
/// `Q(z₀, ·)`) forces `w̄₀` to be a root too; inconsistent roots pair up.
#[test]
fn inconsistent_roots_pair_up() {
    let mut checked = 0;
    for seed in 0..12u64 {
        let n = 2 + (seed % 3) as usize;
        let k = 1 + (seed / 3) as usize % (n - 1);
        let pair = random_pair(2, n, k, n - k, 500 + seed).unwrap();
        let p = det_poly_2xn(&build_linear_system(&pair).unwrap()).unwrap().to_complexf().unwrap();
        let q = conjugate_poly(&p);
        let r = resultant_w(&p, &q).unwrap();
        let r_roots: Vec<Complex64> = roots(&r.trimmed_rel(1e-12)).unwrap().iter().map(|c| c.center.complex()).collect();
        let rel = |z: Complex64| p.eval(&cf(z), &cf(z.conj())).complex().norm() / p.max_coeff_magnitude() / (1.0 + z.norm_sqr()).powf(n as f64 / 2.0);
        for &z0 in &r_roots {
            if rel(z0) < 1e-6 {
                continue;
            }
            let zc = cf(z0);
            let fiber = UniPoly::new((0..=p.bidegree().1).map(|j| p.w_coefficient(j).eval(&zc)).collect()).trimmed_rel(1e-12);
            let Some(w0) = roots(&fiber)
                .unwrap()
                .into_iter()
                .map(|c| c.center)
                .min_by(|a, b| q.eval(&zc, a).magnitude().total_cmp(&q.eval(&zc, b).magnitude()))
            else {
                continue;
            };
            let partner = w0.complex().conj();
            let nearest = r_roots.iter().map(|r| (r - partner).norm()).fold(f64::INFINITY, f64::min);
            assert!(nearest <= 1e-5 * (1.0 + partner.norm()), "seed {seed}: root {z0} has partner {partner} at distance {nearest}");
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn regime_routing() {
    let tol = Tolerances::default();
    for n in 2..=4usize {
        for k in 0..=2 * n {
            for l in 0..=2 * n {
                let regime = kiem_regime(2, n, k, l).regime;
                let trials = if regime == Regime::Boundary { 10 } else { 100 };
                for seed in 0..trials {
                    let pair = random_pair(2, n, k, l, seed).unwrap();
                    let report = algorithm1_classify(&pair, &tol).unwrap();
                    assert_eq!(report.verdict.is_some(), regime == Regime::Boundary);
                    if regime != Regime::Boundary {
                        assert!(matches!(
                            count_product_vectors_2xn(&pair, &tol),
                            Err(SolveError::Subspace(SubspaceError::Regime { .. }))
                        ));
                    }
                }
            }
        }
    }
}

#[test]
fn random_boundary_pairs_are_generic() {
    let tol = Tolerances::default();
    let in_u = (0..100u64).filter(|&seed| algorithm1_classify(&random_pair(2, 4, 2, 2, seed).unwrap(), &tol).unwrap().verdict == Some(Verdict::InU)).count();
    assert!(in_u >= 95, "{in_u} of 100");
}

#[test]
fn segre_count_for_a_small_case() {
    let cert = count_product_vectors_2xn(&random_pair(2, 2, 0, 2, 1).unwrap(), &Tolerances::default()).unwrap();
    assert_eq!(cert.count() as u128, segre_degree(2, 2));
    assert_eq!(cert.count(), 2);
}

#[test]
fn pair_json_round_trip() {
    for seed in 0..10u64 {
        let pair = random_pair(2, 3, 1, 2, seed).unwrap();
        assert_eq!(SubspacePair::<G>::from_json(&pair.to_json()).unwrap(), pair);
        let float = pair.to_complexf().unwrap();
        assert_eq!(SubspacePair::<ComplexF>::from_json(&float.to_json()).unwrap(), float);
    }
}
