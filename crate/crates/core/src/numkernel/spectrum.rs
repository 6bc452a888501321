//! Eigenvalue bookkeeping: canonical ordering, clustering, pole orders.

use num_complex::Complex64;

use crate::error::Result;
use crate::numkernel::lu;
use crate::numkernel::matrix::{vec_norm, CMatrix};
use crate::numkernel::qr;
use crate::numkernel::rng;
use crate::numkernel::schur;
use crate::numkernel::svd;

/// A group of eigenvalues that coincide at working precision.
#[derive(Clone, Debug)]
pub struct Cluster {
    /// Mean of the clustered eigenvalues.
    pub center: Complex64,
    /// Algebraic multiplicity (number of clustered eigenvalues).
    pub multiplicity: usize,
}

/// Eigenvalues of a matrix plus derived grouping and a quality estimate.
#[derive(Clone, Debug)]
pub struct Spectrum {
    /// All eigenvalues, sorted by decreasing modulus, ties by increasing argument.
    pub eigenvalues: Vec<Complex64>,
    /// Clusters of coinciding eigenvalues, in the same ordering.
    pub clusters: Vec<Cluster>,
    /// Clustering tolerance that was applied: `1e-6 * (1 + ||A||)`.
    pub cluster_tol: f64,
    /// Max sampled backward error `||A v - lambda v|| / ||A||` over a few
    /// eigenpairs recovered by inverse iteration.
    pub residual: f64,
}

/// Canonical eigenvalue ordering used across the crate.
pub fn sort_canonical(vals: &mut [Complex64]) {
    vals.sort_by(|a, b| {
        b.norm()
            .partial_cmp(&a.norm())
            .unwrap()
            .then_with(|| a.arg().partial_cmp(&b.arg()).unwrap())
    });
}

fn cluster_eigenvalues(vals: &[Complex64], tol: f64) -> Vec<Cluster> {
    let n = vals.len();
    // union-find over all pairs within tolerance (transitive closure)
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        let mut root = i;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = i;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for i in 0..n {
        for j in i + 1..n {
            if (vals[i] - vals[j]).norm() <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut clusters: Vec<Cluster> = Vec::new();
    let mut root_of: Vec<(usize, usize)> = Vec::new(); // (root, cluster index)
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_of.iter().find(|&&(root, _)| root == r) {
            Some(&(_, ci)) => {
                let c = &mut clusters[ci];
                let m = c.multiplicity as f64;
                c.center = (c.center * m + vals[i]) / (m + 1.0);
                c.multiplicity += 1;
            }
            None => {
                root_of.push((r, clusters.len()));
                clusters.push(Cluster { center: vals[i], multiplicity: 1 });
            }
        }
    }
    clusters.sort_by(|a, b| {
        b.center
            .norm()
            .partial_cmp(&a.center.norm())
            .unwrap()
            .then_with(|| a.center.arg().partial_cmp(&b.center.arg()).unwrap())
    });
    clusters
}

/// Backward-error spot check: inverse iteration at a few computed eigenvalues.
fn sample_residual(a: &CMatrix, vals: &[Complex64]) -> f64 {
    let n = a.rows();
    if n == 0 {
        return 0.0;
    }
    let scale = svd::op_norm_est(a, 1e-6, 200).max(f64::MIN_POSITIVE);
    let samples = if n <= 128 { vals.len().min(8) } else { 3 };
    let stride = (vals.len() / samples.max(1)).max(1);
    let mut worst = 0.0f64;
    for s in 0..samples {
        let lambda = vals[(s * stride).min(vals.len() - 1)];
        // tiny diagonal offset keeps the shifted solve nonsingular
        let shifted = a.add_scalar_diag(-(lambda + Complex64::new(1e-9 * scale, 1e-9 * scale)));
        let fac = match lu::lu_factor(&shifted) {
            Ok(f) => f,
            Err(_) => continue,
        };
        let mut v = rng::start_vector(n);
        for _ in 0..2 {
            v = fac.solve_vec(&v);
            let norm = vec_norm(&v);
            if !norm.is_finite() || norm == 0.0 {
                break;
            }
            for z in &mut v {
                *z /= norm;
            }
        }
        if !v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            continue;
        }
        let av = a.matvec(&v);
        let err = av
            .iter()
            .zip(&v)
            .map(|(p, q)| (p - q * lambda).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst = worst.max(err / scale);
    }
    worst
}

/// Computes the spectrum of `a` with canonical ordering, clustering at
/// `1e-6 * (1 + ||A||)`, and a sampled backward-error estimate.
pub fn eigenvalues(a: &CMatrix) -> Result<Spectrum> {
    let tol = 1e-6 * (1.0 + svd::op_norm_est(a, 1e-6, 300));
    eigenvalues_with_tol(a, tol)
}

/// Same as [`eigenvalues`] with a caller-chosen clustering tolerance.
/// A multiple eigenvalue in a Jordan block of height `k` scatters like
/// `(backward error)^{1/k}`, so callers that must recover tall blocks need
/// tolerances well above the default.
pub fn eigenvalues_with_tol(a: &CMatrix, tol: f64) -> Result<Spectrum> {
    let mut vals = schur::eigenvalues_only(a)?;
    sort_canonical(&mut vals);
    let clusters = cluster_eigenvalues(&vals, tol);
    let residual = sample_residual(a, &vals);
    Ok(Spectrum { eigenvalues: vals, clusters, cluster_tol: tol, residual })
}

/// Spectral radius helper.
pub fn spectral_radius(spec: &Spectrum) -> f64 {
    spec.eigenvalues.first().map(|z| z.norm()).unwrap_or(0.0)
}

/// Multiplicity of each cluster's eigenvalue in the minimal polynomial
/// (equivalently: its largest Jordan block, equivalently: the order of the
/// resolvent's pole there).  Returned in the same order as `spec.clusters`.
///
/// Determined as the smallest `k` with `nullity((A - c)^k) >= multiplicity`,
/// using column-pivoted QR rank with a relative threshold.  Clusters of
/// multiplicity 1 are order 1 by construction and cost nothing.
pub fn jordan_heights(a: &CMatrix, spec: &Spectrum) -> Vec<usize> {
    let n = a.rows();
    let mut out = Vec::with_capacity(spec.clusters.len());
    for cl in &spec.clusters {
        if cl.multiplicity <= 1 {
            out.push(1);
            continue;
        }
        let shifted = a.add_scalar_diag(-cl.center);
        let norm = shifted.fro_norm();
        if norm == 0.0 {
            out.push(1);
            continue;
        }
        let base = shifted.map(|z| z / norm);
        let mut power = base.clone();
        let mut order = cl.multiplicity; // fallback: full chain
        for k in 1..=cl.multiplicity {
            let rank = qr::numerical_rank(&power, 1e-8 * power.fro_norm().max(f64::MIN_POSITIVE));
            if n - rank >= cl.multiplicity {
                order = k;
                break;
            }
            if k < cl.multiplicity {
                power = power.matmul(&base);
            }
        }
        out.push(order);
    }
    out
}
