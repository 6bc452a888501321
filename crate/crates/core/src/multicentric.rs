//! Series calculus with several expansion centers at once.
//!
//! A scalar function is rewritten as `phi(z) = sum_j delta_j(z) f_j(p(z))`,
//! where `p` is the monic polynomial vanishing on a set of distinct centers,
//! `delta_j` are the Lagrange cardinal polynomials of those centers, and each
//! `f_j` is a power series in the single variable `w = p(z)`.  Evaluating the
//! right-hand side at a matrix argument only needs polynomials in `A` and a
//! power series in `p(A)`, which is the entire point: a good `p` makes `p(A)`
//! small, and small arguments make the series benign.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkernel::matrix::CMatrix;
use crate::numkernel::poly::{poly_eval, poly_roots, MonicPoly};
use crate::numkernel::{lu, schur, svd};

/// Distinct expansion centers.
#[derive(Clone, Debug)]
pub struct CenterSet {
    centers: Vec<Complex64>,
}

impl CenterSet {
    /// Pairwise distinctness is enforced at tolerance `1e-12`.
    pub fn new(centers: Vec<Complex64>) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::Dimension("center set must be nonempty".into()));
        }
        if !centers.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite("center set"));
        }
        for i in 0..centers.len() {
            for j in i + 1..centers.len() {
                if (centers[i] - centers[j]).norm() <= 1e-12 {
                    return Err(Error::CentersNotDistinct { i, j });
                }
            }
        }
        Ok(Self { centers })
    }

    pub fn centers(&self) -> &[Complex64] {
        &self.centers
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty sets
    }
}

/// Monic polynomial vanishing exactly on the centers: `p(z) = prod (z - l_i)`.
pub fn basis_poly(cs: &CenterSet) -> MonicPoly {
    MonicPoly::from_roots(cs.centers())
}

/// Geometric-mean distance to the centers: `prod |z - l_i|^(1/d) = |p(z)|^(1/d)`.
pub fn dist_to_centers(z: Complex64, cs: &CenterSet) -> f64 {
    let p = basis_poly(cs);
    p.eval(z).norm().powf(1.0 / cs.len() as f64)
}

/// Lagrange cardinal polynomial for center `j` (zero-based): degree `d - 1`
/// coefficients, low order first, with `delta_j(l_k) = [j == k]`.
pub fn lagrange(cs: &CenterSet, j: usize) -> Vec<Complex64> {
    let centers = cs.centers();
    let d = centers.len();
    assert!(j < d, "center index {j} out of range {d}");
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    let mut denom = Complex64::new(1.0, 0.0);
    for (k, &lk) in centers.iter().enumerate() {
        if k == j {
            continue;
        }
        // multiply by (z - l_k)
        let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * lk;
        }
        coeffs = next;
        denom *= centers[j] - lk;
    }
    for c in &mut coeffs {
        *c /= denom;
    }
    coeffs
}

/// A function in multicentric form: `d` truncated power series in `w = p(z)`,
/// one per center, all cut at the same length.
#[derive(Clone, Debug)]
pub struct MulticentricFn {
    pub centers: CenterSet,
    /// `series[j][k]` is the coefficient of `w^k` in `f_j`.
    pub series: Vec<Vec<Complex64>>,
    /// Radius in `w` on which the representation was sampled; the series are
    /// trustworthy for arguments with `|p(z)|` strictly below this.
    pub radius: f64,
    /// `max |f_j|` observed on the sample circle, one entry per center;
    /// feeds the truncation tail bound at evaluation time.
    pub sup_bounds: Vec<f64>,
}

impl MulticentricFn {
    /// Common truncation length `K` of the series.
    pub fn truncation(&self) -> usize {
        self.series.first().map(|s| s.len()).unwrap_or(0)
    }

    /// Evaluates `sum_j delta_j(z) f_j(p(z))` at a scalar argument.
    pub fn eval_scalar(&self, z: Complex64) -> Complex64 {
        let p = basis_poly(&self.centers);
        let w = p.eval(z);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, coeffs) in self.series.iter().enumerate() {
            let delta = poly_eval(&lagrange(&self.centers, j), z);
            let fj = poly_eval(coeffs, w);
            acc += delta * fj;
        }
        acc
    }
}

/// Smallest nonzero modulus of `p` at a critical point (`p'(c) = 0`), or
/// `None` when `p` has no critical points (degree 1).  Sampling circles in
/// `w` must stay strictly below this value: at a critical value two roots of
/// `p(z) = w` collide and the interpolation system degenerates.
pub fn smallest_critical_value(p: &MonicPoly) -> Option<f64> {
    if p.degree() <= 1 {
        return None;
    }
    let dp = p.derivative();
    let crit = poly_roots(&dp).expect("derivative of a valid monic polynomial");
    crit.iter()
        .map(|&c| p.eval(c).norm())
        .filter(|v| *v > 1e-14)
        .min_by(|a, b| a.partial_cmp(b).unwrap())
}

/// Greedy nearest-neighbor matching of the current root set to the previous
/// one.  Returns the permuted roots and the largest matched jump.
fn continue_roots(prev: &[Complex64], cur: &[Complex64]) -> (Vec<Complex64>, f64) {
    let d = prev.len();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(d * d);
    for (i, &pz) in prev.iter().enumerate() {
        for (k, &cz) in cur.iter().enumerate() {
            pairs.push(((pz - cz).norm(), i, k));
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut taken_prev = vec![false; d];
    let mut taken_cur = vec![false; d];
    let mut ordered = vec![Complex64::new(0.0, 0.0); d];
    let mut worst = 0.0f64;
    for (dist, i, k) in pairs {
        if taken_prev[i] || taken_cur[k] {
            continue;
        }
        taken_prev[i] = true;
        taken_cur[k] = true;
        ordered[i] = cur[k];
        worst = worst.max(dist);
    }
    (ordered, worst)
}

fn min_pairwise_gap(zs: &[Complex64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..zs.len() {
        for j in i + 1..zs.len() {
            gap = gap.min((zs[i] - zs[j]).norm());
        }
    }
    gap
}

/// Builds the multicentric form of `phi` by sampling the circle
/// `|w| = w_radius`.
///
/// At each of `M = max(4K, 32)` sample points the `d` preimages of `w` under
/// `p` are found by companion-matrix rootfinding (ordered along the circle by
/// nearest-neighbor continuation), the `d x d` interpolation system
/// `phi(z_i) = sum_j delta_j(z_i) f_j(w)` is solved, and the resulting
/// samples of each `f_j` are Fourier-inverted into `K` series coefficients.
///
/// The sampling radius must sit strictly below the smallest nonzero critical
/// value of `p`: beyond it preimages collide and the system turns singular.
/// Discontinuous root paths (branch swaps between adjacent samples) abort the
/// decomposition, since they signal exactly that degeneracy.
pub fn decompose<F: Fn(Complex64) -> Complex64>(
    phi: F,
    cs: &CenterSet,
    w_radius: f64,
    truncation: usize,
) -> Result<MulticentricFn> {
    if !(w_radius > 0.0) || !w_radius.is_finite() {
        return Err(Error::Dimension(format!("sampling radius must be positive, got {w_radius}")));
    }
    if truncation == 0 {
        return Err(Error::Dimension("truncation length must be at least 1".into()));
    }
    let d = cs.len();
    let p = basis_poly(cs);
    if let Some(critical) = smallest_critical_value(&p) {
        if w_radius >= critical {
            return Err(Error::CriticalRadius { radius: w_radius, critical });
        }
    }

    let m = (4 * truncation).max(32);
    let mut samples: Vec<Vec<Complex64>> = vec![Vec::with_capacity(m); d];
    let mut prev_roots: Option<Vec<Complex64>> = None;
    for s in 0..m {
        let angle = std::f64::consts::TAU * s as f64 / m as f64;
        let w = Complex64::from_polar(w_radius, angle);
        // roots of p(z) - w
        let mut shifted = p.coeffs().to_vec();
        shifted[0] -= w;
        let roots = MonicPoly::new(shifted).roots()?;
        let roots = match &prev_roots {
            None => roots,
            Some(prev) => {
                let gap = min_pairwise_gap(prev);
                let (ordered, jump) = continue_roots(prev, &roots);
                if d > 1 && jump > 0.5 * gap {
                    return Err(Error::NoConvergence(
                        "root continuation detected a branch swap; sampling radius too close to a critical value",
                    ));
                }
                ordered
            }
        };

        // interpolation system: rows are preimages, columns are centers
        let mut sys = CMatrix::zeros(d, d);
        for (i, &zi) in roots.iter().enumerate() {
            for j in 0..d {
                sys[(i, j)] = poly_eval(&lagrange(cs, j), zi);
            }
        }
        let rhs: Vec<Complex64> = roots.iter().map(|&z| phi(z)).collect();
        let f_at_w = lu::lu_factor(&sys)
            .map_err(|_| Error::CriticalRadius { radius: w_radius, critical: w_radius })?
            .solve_vec(&rhs);
        for j in 0..d {
            samples[j].push(f_at_w[j]);
        }
        prev_roots = Some(roots);
    }

    // discrete Fourier inversion: c_{j,k} = (1/M) sum_s f_j(w_s) e^{-iks} / r^k
    let mut series = Vec::with_capacity(d);
    let mut sup_bounds = Vec::with_capacity(d);
    for fj in &samples {
        let mut coeffs = Vec::with_capacity(truncation);
        for k in 0..truncation {
            let mut acc = Complex64::new(0.0, 0.0);
            for (s, &val) in fj.iter().enumerate() {
                let angle = -std::f64::consts::TAU * (k * s % m) as f64 / m as f64;
                acc += val * Complex64::from_polar(1.0, angle);
            }
            coeffs.push(acc / (m as f64 * w_radius.powi(k as i32)));
        }
        series.push(coeffs);
        sup_bounds.push(fj.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }

    Ok(MulticentricFn { centers: cs.clone(), series, radius: w_radius, sup_bounds })
}

/// Result of a matrix evaluation: the value and the truncation tail bound.
#[derive(Clone, Debug)]
pub struct PhiEval {
    pub value: CMatrix,
    /// Bound on the norm of the discarded series tail, from Cauchy estimates:
    /// `sum_j ||delta_j(A)|| * B_j * q^K / (1 - q)` with `q` the ratio of the
    /// spectral radius of `p(A)` to the sampling radius.
    pub tail_bound: f64,
}

/// Evaluates `phi(A) = sum_j delta_j(A) f_j(p(A))` with each series applied
/// to `p(A)` by Horner.  Requires the spectral radius of `p(A)` to sit
/// strictly inside the sampled radius.
pub fn eval_phi(a: &CMatrix, f: &MulticentricFn) -> Result<PhiEval> {
    if !a.is_square() {
        return Err(Error::Dimension("matrix argument must be square".into()));
    }
    let p = basis_poly(&f.centers);
    let pa = p.eval_matrix(a);
    let eigs = schur::eigenvalues_only(&pa)?;
    let sprad = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if sprad >= f.radius {
        return Err(Error::RadiusExceeded { spectral: sprad, radius: f.radius });
    }

    let n = a.rows();
    let mut value = CMatrix::zeros(n, n);
    let mut tail = 0.0f64;
    let q = sprad / f.radius;
    let k = f.truncation() as i32;
    for (j, coeffs) in f.series.iter().enumerate() {
        let delta_a = crate::numkernel::poly::poly_eval_matrix(&lagrange(&f.centers, j), a);
        // Horner in p(A)
        let mut acc = CMatrix::zeros(n, n);
        for &c in coeffs.iter().rev() {
            acc = pa.matmul(&acc);
            acc = acc.add_scalar_diag(c);
        }
        value = &value + &delta_a.matmul(&acc);
        let delta_norm = svd::op_norm_est(&delta_a, 1e-6, 200);
        tail += delta_norm * f.sup_bounds[j] * q.powi(k) / (1.0 - q);
    }
    Ok(PhiEval { value, tail_bound: tail })
}

// ── Tests ──────────────────────────────────────────────────────────────────

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::poly::poly_eval_matrix;
    use crate::numkernel::{qr, rng};
    use crate::synth;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_centers() -> CenterSet {
        CenterSet::new(vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap()
    }

    #[test]
    fn rejects_coinciding_centers() {
        let err = CenterSet::new(vec![c(1.0, 0.0), c(1.0, 1e-13)]).unwrap_err();
        assert!(matches!(err, Error::CentersNotDistinct { .. }));
    }

    #[test]
    fn basis_poly_examples() {
        let single = CenterSet::new(vec![c(0.0, 0.0)]).unwrap();
        assert_eq!(basis_poly(&single).full_coeffs().len(), 2); // z

        let p = basis_poly(&two_centers()); // z^2 - 1
        assert!((p.coeffs()[0] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(p.coeffs()[1].norm() < 1e-15);

        let cs = CenterSet::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let p = basis_poly(&cs); // z^3 - 3z^2 + 2z
        assert!((p.coeffs()[2] - c(-3.0, 0.0)).norm() < 1e-14);
        assert!((p.coeffs()[1] - c(2.0, 0.0)).norm() < 1e-14);
        assert!(p.coeffs()[0].norm() < 1e-14);
    }

    #[test]
    fn geometric_mean_distance_examples() {
        let cs = two_centers();
        assert_eq!(dist_to_centers(c(1.0, 0.0), &cs), 0.0);
        assert!((dist_to_centers(c(0.0, 0.0), &cs) - 1.0).abs() < 1e-15);
        let single = CenterSet::new(vec![c(0.0, 0.0)]).unwrap();
        assert!((dist_to_centers(c(3.0, 0.0), &single) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn cardinal_and_partition_properties() {
        let cs = CenterSet::new(vec![c(1.0, 0.0), c(-1.0, 0.0), c(0.5, 0.8), c(-0.3, -0.4)])
            .unwrap();
        let d = cs.len();
        for j in 0..d {
            let dj = lagrange(&cs, j);
            for (k, &lk) in cs.centers().iter().enumerate() {
                let want = if j == k { 1.0 } else { 0.0 };
                assert!(
                    (poly_eval(&dj, lk) - c(want, 0.0)).norm() < 1e-12,
                    "cardinal failure at ({j},{k})"
                );
            }
        }
        // partition of unity as a polynomial identity
        let mut sum = vec![c(0.0, 0.0); d];
        for j in 0..d {
            for (i, &v) in lagrange(&cs, j).iter().enumerate() {
                sum[i] += v;
            }
        }
        assert!((sum[0] - c(1.0, 0.0)).norm() < 1e-12);
        for v in &sum[1..] {
            assert!(v.norm() < 1e-12);
        }
        // and at random points
        let mut r = rng::stream("multicentric-unity", 0);
        for _ in 0..100 {
            let z = rng::gaussian(&mut r).scale(2.0);
            let total: Complex64 = (0..d).map(|j| poly_eval(&lagrange(&cs, j), z)).sum();
            assert!((total - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn lagrange_of_single_center_is_one() {
        let single = CenterSet::new(vec![c(2.0, 0.0)]).unwrap();
        let l = lagrange(&single, 0);
        assert_eq!(l.len(), 1);
        assert!((l[0] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn decomposing_p_itself_gives_identity_series() {
        let cs = two_centers();
        let p = basis_poly(&cs);
        let f = decompose(|z| p.eval(z), &cs, 0.5, 8).unwrap();
        for series in &f.series {
            // f_j(w) = w: coefficient 1 at k=1, all else 0
            assert!((series[1] - c(1.0, 0.0)).norm() < 1e-12, "linear coeff {:?}", series[1]);
            for (k, &v) in series.iter().enumerate() {
                if k != 1 {
                    assert!(v.norm() < 1e-12, "stray coeff at {k}: {v}");
                }
            }
        }
    }

    #[test]
    fn single_center_recovers_taylor_series() {
        let cs = CenterSet::new(vec![c(0.0, 0.0)]).unwrap();
        let f = decompose(|z| z.exp(), &cs, 1.0, 20).unwrap();
        let mut factorial = 1.0;
        for (k, &coeff) in f.series[0].iter().enumerate() {
            if k > 0 {
                factorial *= k as f64;
            }
            assert!(
                (coeff - c(1.0 / factorial, 0.0)).norm() < 1e-12,
                "Taylor coefficient {k}: {coeff}"
            );
        }
    }

    #[test]
    fn reconstruction_matches_least_squares_oracle() {
        // Independent oracle: fit the same series coefficients by least
        // squares on a grid of points in the sampled region, with no Fourier
        // machinery involved, then compare reconstructions point by point.
        let cs = two_centers();
        let phi = |z: Complex64| z;
        let w_radius = 0.5;
        let k = 16usize;
        let f = decompose(phi, &cs, w_radius, k).unwrap();

        // grid: preimages of |w| in {0.1, 0.25, 0.4} at 24 angles each
        let p = basis_poly(&cs);
        let mut pts = Vec::new();
        for &r in &[0.1, 0.25, 0.4] {
            for s in 0..24 {
                let w = Complex64::from_polar(r, std::f64::consts::TAU * s as f64 / 24.0);
                let mut shifted = p.coeffs().to_vec();
                shifted[0] -= w;
                pts.extend(MonicPoly::new(shifted).roots().unwrap());
            }
        }
        let d = cs.len();
        let rows = pts.len();
        let mut design = CMatrix::zeros(rows, d * k);
        let mut rhs = Vec::with_capacity(rows);
        for (row, &z) in pts.iter().enumerate() {
            let w = p.eval(z);
            for j in 0..d {
                let dj = poly_eval(&lagrange(&cs, j), z);
                let mut wk = c(1.0, 0.0);
                for kk in 0..k {
                    design[(row, j * k + kk)] = dj * wk;
                    wk *= w;
                }
            }
            rhs.push(phi(z));
        }
        let fitted = qr::least_squares(&design, &rhs);

        let mut r = rng::stream("multicentric-oracle", 0);
        for _ in 0..200 {
            let z = rng::gaussian(&mut r);
            if p.eval(z).norm() > 0.9 * w_radius {
                continue;
            }
            let direct = f.eval_scalar(z);
            let mut oracle = c(0.0, 0.0);
            let w = p.eval(z);
            for j in 0..d {
                let dj = poly_eval(&lagrange(&cs, j), z);
                let mut wk = c(1.0, 0.0);
                for kk in 0..k {
                    oracle += dj * fitted[j * k + kk] * wk;
                    wk *= w;
                }
            }
            assert!((direct - oracle).norm() < 1e-9, "oracle mismatch at {z}: {direct} vs {oracle}");
            assert!((direct - phi(z)).norm() < 1e-10, "reconstruction off at {z}");
        }
    }

    #[test]
    fn reconstruction_of_analytic_function_on_region() {
        let cs = CenterSet::new(vec![c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.2)]).unwrap();
        let p = basis_poly(&cs);
        let critical = smallest_critical_value(&p).unwrap();
        let w_radius = 0.4 * critical;
        let phi = |z: Complex64| (z * c(0.3, 0.1)).exp();
        let f = decompose(phi, &cs, w_radius, 48).unwrap();
        let mut r = rng::stream("multicentric-recon", 1);
        let mut checked = 0;
        while checked < 200 {
            let z = rng::gaussian(&mut r).scale(1.2);
            if p.eval(z).norm() >= 0.8 * w_radius {
                continue;
            }
            let err = (f.eval_scalar(z) - phi(z)).norm();
            assert!(err < 1e-8, "reconstruction error {err} at {z}");
            checked += 1;
        }
    }

    #[test]
    fn rejects_radius_at_critical_value() {
        let cs = two_centers(); // p = z^2 - 1, critical value |p(0)| = 1
        let err = decompose(|z| z, &cs, 1.0, 8).unwrap_err();
        assert!(matches!(err, Error::CriticalRadius { .. }), "got {err}");
    }

    #[test]
    fn eval_phi_identity_function_returns_matrix() {
        let cs = two_centers();
        let mut r = rng::stream("multicentric-eval-id", 0);
        // spectrum near the centers: eigenvalues in small disks around +-1
        let eigs: Vec<Complex64> = (0..8)
            .map(|i| {
                let base = if i % 2 == 0 { c(1.0, 0.0) } else { c(-1.0, 0.0) };
                base + rng::gaussian(&mut r).scale(0.05)
            })
            .collect();
        let (a, _) = synth::with_eigenvalues(&eigs, 0.2, &mut r);
        let f = decompose(|z| z, &cs, 0.5, 40).unwrap();
        let out = eval_phi(&a, &f).unwrap();
        let rel = (&out.value - &a).fro_norm() / a.fro_norm();
        assert!(rel < 1e-8, "relative error {rel}, tail bound {}", out.tail_bound);
    }

    #[test]
    fn eval_phi_matches_direct_polynomial_evaluation() {
        let cs = two_centers();
        let mut r = rng::stream("multicentric-eval-poly", 0);
        let eigs: Vec<Complex64> = (0..12)
            .map(|i| {
                let base = if i % 2 == 0 { c(1.0, 0.0) } else { c(-1.0, 0.0) };
                base + rng::gaussian(&mut r).scale(0.04)
            })
            .collect();
        let (a, _) = synth::with_eigenvalues(&eigs, 0.2, &mut r);
        // phi: fixed degree-8 polynomial
        let coeffs: Vec<Complex64> =
            (0..9).map(|k| c(0.3, -0.1).powu(k) * c(1.0, 0.5)).collect();
        let f = decompose(|z| poly_eval(&coeffs, z), &cs, 0.5, 48).unwrap();
        let out = eval_phi(&a, &f).unwrap();
        let direct = poly_eval_matrix(&coeffs, &a);
        let rel = (&out.value - &direct).fro_norm() / direct.fro_norm();
        assert!(rel < 1e-8, "relative error {rel}");
    }

    #[test]
    fn eval_phi_exponential_of_nilpotent_is_truncated_taylor() {
        let cs = CenterSet::new(vec![c(0.0, 0.0)]).unwrap();
        let f = decompose(|z| z.exp(), &cs, 1.0, 16).unwrap();
        let a = synth::jordan_block(c(0.0, 0.0), 3);
        let out = eval_phi(&a, &f).unwrap();
        let mut want = CMatrix::eye(3);
        want = &want + &a;
        want = &want + &a.matmul(&a).map(|z| z * 0.5);
        assert!((&out.value - &want).fro_norm() < 1e-12);
    }

    #[test]
    fn eval_phi_rejects_large_spectral_radius() {
        let cs = two_centers();
        let f = decompose(|z| z, &cs, 0.5, 16).unwrap();
        // eigenvalue 2: p(2) = 3 is far outside the sampled radius
        let a = CMatrix::diag(&[c(2.0, 0.0), c(-1.0, 0.0)]);
        let err = eval_phi(&a, &f).unwrap_err();
        assert!(matches!(err, Error::RadiusExceeded { .. }));
    }

    #[test]
    fn eval_phi_commutes_with_similarity() {
        let cs = two_centers();
        let mut r = rng::stream("multicentric-similarity", 0);
        let eigs: Vec<Complex64> = (0..6)
            .map(|i| {
                let base = if i % 2 == 0 { c(1.0, 0.0) } else { c(-1.0, 0.0) };
                base + rng::gaussian(&mut r).scale(0.05)
            })
            .collect();
        let d = CMatrix::diag(&eigs);
        let s = synth::mild_similarity(6, 0.3, &mut r);
        let sinv = lu::lu_inverse(&s).unwrap();
        let conj = s.matmul(&d).matmul(&sinv);
        let f = decompose(|z| (z * c(0.2, 0.0)).exp(), &cs, 0.5, 40).unwrap();
        let lhs = s.matmul(&eval_phi(&d, &f).unwrap().value).matmul(&sinv);
        let rhs = eval_phi(&conj, &f).unwrap().value;
        let rel = (&lhs - &rhs).fro_norm() / rhs.fro_norm();
        assert!(rel < 1e-6, "similarity mismatch {rel}");
    }
}
