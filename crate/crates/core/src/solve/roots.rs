//! Simultaneous root finding with inclusion disks.

use num_complex::Complex64;
use serde_json::Value;

use crate::numeric::{ComplexF, Scalar};
use crate::poly::UniPoly;

use super::SolveError;

const MAX_ITERATIONS: usize = 1000;

/// A group of root approximations whose inclusion disks overlap.
#[derive(Clone, Debug, PartialEq)]
pub struct RootCluster {
    pub center: ComplexF,
    /// Every member root lies within this distance of `center`.
    pub radius: f64,
    pub multiplicity: usize,
    /// Backward error `|p(c)| / Σ|a_i||c|^i` at the center.
    pub residual: f64,
}

impl RootCluster {
    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "center": self.center.to_json(),
            "radius": self.radius,
            "multiplicity": self.multiplicity,
            "residual": self.residual,
        })
    }
}

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a)
}

/// `Σ |a_i| |z|^i`.
fn abs_horner(c: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    c.iter().rev().fold(0.0, |acc, a| acc * r + a.norm())
}

fn derivative(c: &[Complex64]) -> Vec<Complex64> {
    c.iter().enumerate().skip(1).map(|(i, a)| a * i as f64).collect()
}

pub(crate) fn backward_error(c: &[Complex64], z: Complex64) -> f64 {
    let scale = abs_horner(c, z);
    if scale == 0.0 {
        return 0.0;
    }
    horner(c, z).norm() / scale
}

/// All roots of `p` grouped into clusters, sorted by `(Re, Im)`.
///
/// Exactly-zero leading coefficients lower the degree; exactly-zero
/// trailing coefficients give a cluster at `0`. The rest is solved by
/// Aberth iteration, enclosed in Gershgorin disks of the Weierstrass
/// corrections (inflated by a rounding bound on `p`), merged when disks
/// overlap, and polished by Newton's method on `p^(m-1)` for a cluster of
/// multiplicity `m`.
pub fn roots(p: &UniPoly<ComplexF>) -> Result<Vec<RootCluster>, SolveError> {
    let full: Vec<Complex64> = p.trimmed().coeffs().iter().map(|c| c.complex()).collect();
    if p.is_zero() {
        return Err(SolveError::ZeroPolynomial);
    }
    let zeros = full.iter().position(|c| c.norm() != 0.0).expect("nonzero polynomial");
    let reduced = &full[zeros..];
    let mut clusters = Vec::new();
    if zeros > 0 {
        clusters.push(RootCluster { center: ComplexF::zero(), radius: 0.0, multiplicity: zeros, residual: 0.0 });
    }
    if reduced.len() > 1 {
        let approx = aberth(reduced);
        for group in group_by_disks(reduced, &approx) {
            clusters.push(polish(&full, reduced, &approx, &group));
        }
    }
    clusters.sort_by(|a, b| a.center.re().total_cmp(&b.center.re()).then(a.center.im().total_cmp(&b.center.im())));
    Ok(clusters)
}

fn aberth(c: &[Complex64]) -> Vec<Complex64> {
    let d = c.len() - 1;
    let dc = derivative(c);
    let lead = c[d];
    let radius = (c[0].norm() / lead.norm()).powf(1.0 / d as f64).max(f64::MIN_POSITIVE);
    let mut z: Vec<Complex64> = (0..d)
        .map(|j| Complex64::from_polar(radius, std::f64::consts::TAU * j as f64 / d as f64 + 0.4))
        .collect();
    let mut done = vec![false; d];
    for _ in 0..MAX_ITERATIONS {
        let mut moved = false;
        for i in 0..d {
            if done[i] {
                continue;
            }
            let pv = horner(c, z[i]);
            if pv.norm() == 0.0 {
                done[i] = true;
                continue;
            }
            let ratio = pv / horner(&dc, z[i]);
            let sum: Complex64 = (0..d).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if !step.is_finite() {
                done[i] = true;
                continue;
            }
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * (1.0 + z[i].norm()) {
                done[i] = true;
            } else {
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    z
}

/// Connected components of overlapping inclusion disks.
fn group_by_disks(c: &[Complex64], z: &[Complex64]) -> Vec<Vec<(usize, f64)>> {
    let d = z.len();
    let lead = c[d].norm();
    let radii: Vec<f64> = (0..d)
        .map(|i| {
            let prod: f64 = (0..d).filter(|&j| j != i).map(|j| (z[i] - z[j]).norm()).product();
            let noise = 4.0 * d as f64 * f64::EPSILON * abs_horner(c, z[i]);
            let r = d as f64 * (horner(c, z[i]).norm() + noise) / (lead * prod);
            if r.is_finite() {
                r
            } else {
                f64::INFINITY
            }
        })
        .collect();
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..d {
        for j in i + 1..d {
            if (z[i] - z[j]).norm() <= radii[i] + radii[j] {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut slot = vec![usize::MAX; d];
    for i in 0..d {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push((i, radii[i]));
    }
    groups
}

fn polish(full: &[Complex64], reduced: &[Complex64], z: &[Complex64], group: &[(usize, f64)]) -> RootCluster {
    let m = group.len();
    let mean = group.iter().map(|&(i, _)| z[i]).sum::<Complex64>() / m as f64;
    let radius = group.iter().map(|&(i, r)| (z[i] - mean).norm() + r).fold(0.0, f64::max);
    let mut target = reduced.to_vec();
    for _ in 1..m {
        target = derivative(&target);
    }
    let dtarget = derivative(&target);
    let mut center = mean;
    let mut best = backward_error(full, center);
    let mut trial = center;
    for _ in 0..20 {
        let step = horner(&target, trial) / horner(&dtarget, trial);
        if !step.is_finite() {
            break;
        }
        trial -= step;
        if (trial - mean).norm() > radius.max(f64::EPSILON * (1.0 + mean.norm())) {
            break;
        }
        let err = backward_error(full, trial);
        if err <= best {
            best = err;
            center = trial;
        }
        if step.norm() <= f64::EPSILON * (1.0 + trial.norm()) {
            break;
        }
    }
    let radius = group.iter().map(|&(i, r)| (z[i] - center).norm() + r).fold(0.0, f64::max);
    RootCluster { center: ComplexF::raw(center), radius, multiplicity: m, residual: best }
}
