//! Singular values and Hermitian eigenvalues via Jacobi rotations.
//!
//! One-sided Jacobi is slower than bidiagonalization-based SVD by a small
//! constant but is simple, deterministic, and accurate to high relative
//! precision — the right trade for matrices capped at a few hundred rows.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkernel::matrix::{vec_dot, vec_norm, CMatrix};
use crate::numkernel::rng;

const MAX_SWEEPS: usize = 64;

/// Thin singular value decomposition `a = u diag(sigma) v^H`.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: CMatrix,
    /// Descending, non-negative.
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

/// Computes the real Jacobi rotation angle for the Hermitian 2x2 Gram block
/// `[[alpha, g], [conj(g), beta]]` with `g = |g| * omega`.  Returns `(c, s)`
/// of the real rotation; the caller re-applies the phase `omega`.
fn jacobi_cs(alpha: f64, beta: f64, gabs: f64) -> (f64, f64) {
    let tau = (beta - alpha) / (2.0 * gabs);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, c * t)
}

/// One-sided Jacobi kernel: orthogonalizes the columns of `work` in place,
/// optionally accumulating the right factor into `v`.
fn jacobi_columns(work: &mut CMatrix, mut v: Option<&mut CMatrix>) -> Result<()> {
    let n = work.cols();
    let eps = f64::EPSILON;
    // Rotations preserve the Frobenius norm, so this floor is sweep-invariant.
    // Columns below it carry singular values that are numerically zero for
    // this matrix; rotating against them only stirs roundoff (rank-deficient
    // inputs would otherwise never settle).
    let zero_floor = {
        let total: f64 = (0..n)
            .map(|j| work.col(j).iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum();
        total * eps * eps
    };
    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let ci = work.col(i);
                let cj = work.col(j);
                let alpha = ci.iter().map(|z| z.norm_sqr()).sum::<f64>();
                let beta = cj.iter().map(|z| z.norm_sqr()).sum::<f64>();
                if alpha <= zero_floor || beta <= zero_floor {
                    continue;
                }
                let g = vec_dot(&ci, &cj);
                let gabs = g.norm();
                if gabs <= 8.0 * eps * (alpha * beta).sqrt() || gabs == 0.0 {
                    continue;
                }
                rotated = true;
                let omega = g / gabs;
                let (c, s) = jacobi_cs(alpha, beta, gabs);
                let so = omega * s;
                // [col_i, col_j] <- [col_i, col_j] * [[c, so], [-conj(so), c]]
                for r in 0..work.rows() {
                    let (x, y) = (work[(r, i)], work[(r, j)]);
                    work[(r, i)] = x * c - y * so.conj();
                    work[(r, j)] = x * so + y * c;
                }
                if let Some(vm) = v.as_deref_mut() {
                    for r in 0..vm.rows() {
                        let (x, y) = (vm[(r, i)], vm[(r, j)]);
                        vm[(r, i)] = x * c - y * so.conj();
                        vm[(r, j)] = x * so + y * c;
                    }
                }
            }
        }
        if !rotated {
            return Ok(());
        }
    }
    Err(Error::NoConvergence("one-sided Jacobi SVD"))
}

/// Full thin SVD.  For wide matrices the decomposition is computed on the
/// adjoint and swapped back.
pub fn svd(a: &CMatrix) -> Result<Svd> {
    if a.rows() < a.cols() {
        let t = svd(&a.adjoint())?;
        return Ok(Svd { u: t.v, sigma: t.sigma, v: t.u });
    }
    let (m, n) = (a.rows(), a.cols());
    let mut work = a.clone();
    let mut v = CMatrix::eye(n);
    jacobi_columns(&mut work, Some(&mut v))?;

    // Column norms are the singular values; sort descending.
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|j| vec_norm(&work.col(j))).collect();
    order.sort_by(|&p, &q| norms[q].partial_cmp(&norms[p]).unwrap());

    let mut u = CMatrix::zeros(m, n);
    let mut vs = CMatrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    // Columns at or below roundoff for this matrix were not orthogonalized
    // by the sweeps; route them through the completion pass below instead of
    // normalizing noise into U.
    let fro = norms.iter().map(|x| x * x).sum::<f64>().sqrt();
    for (dst, &src) in order.iter().enumerate() {
        sigma.push(norms[src]);
        vs.set_col(dst, &v.col(src));
        if norms[src] > fro * f64::EPSILON {
            let col: Vec<Complex64> = work.col(src).iter().map(|z| z / norms[src]).collect();
            u.set_col(dst, &col);
        }
    }
    // Orthonormal completion for (numerically) zero singular directions.
    for dst in 0..n {
        if vec_norm(&u.col(dst)) > 0.5 {
            continue;
        }
        // deterministic fill: orthogonalize seeded vectors against current columns
        let mut r = rng::stream("svd-null-fill", dst as u64);
        'fill: for _try in 0..(m + 4) {
            let mut cand: Vec<Complex64> = (0..m).map(|_| rng::gaussian(&mut r)).collect();
            for k in 0..n {
                if k == dst || vec_norm(&u.col(k)) < 0.5 {
                    continue;
                }
                let uk = u.col(k);
                let d = vec_dot(&uk, &cand);
                for (c, b) in cand.iter_mut().zip(&uk) {
                    *c -= d * b;
                }
            }
            let nn = vec_norm(&cand);
            if nn > 1e-3 {
                for c in &mut cand {
                    *c /= nn;
                }
                u.set_col(dst, &cand);
                break 'fill;
            }
        }
    }
    Ok(Svd { u, sigma, v: vs })
}

/// Singular values only (descending).  Skips accumulating factors.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    let mut work = if a.rows() < a.cols() { a.adjoint() } else { a.clone() };
    jacobi_columns(&mut work, None)?;
    let mut s: Vec<f64> = (0..work.cols()).map(|j| vec_norm(&work.col(j))).collect();
    s.sort_by(|p, q| q.partial_cmp(p).unwrap());
    Ok(s)
}

/// Operator (spectral) norm: the largest singular value.
pub fn op_norm(a: &CMatrix) -> Result<f64> {
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(0.0);
    }
    Ok(singular_values(a)?[0])
}

/// Fast estimate of the operator norm by power iteration on `A^H A`.
///
/// Converges from below; `rel_tol` around 1e-6 gives plenty of accuracy for
/// logarithmic quantities at a fraction of the cost of a full SVD.
pub fn op_norm_est(a: &CMatrix, rel_tol: f64, max_iters: usize) -> f64 {
    let n = a.cols();
    if n == 0 || a.rows() == 0 {
        return 0.0;
    }
    let mut v = rng::start_vector(n);
    let mut prev = 0.0;
    for _ in 0..max_iters {
        let av = a.matvec(&v);
        let mut w = a.adjoint_matvec(&av);
        let norm = vec_norm(&w);
        if norm == 0.0 {
            return 0.0;
        }
        for z in &mut w {
            *z /= norm;
        }
        let est = norm.sqrt(); // ||A^H A v|| -> sigma_max^2
        v = w;
        if (est - prev).abs() <= rel_tol * est {
            return est;
        }
        prev = est;
    }
    prev
}

/// Smallest singular value of an upper-triangular matrix by inverse power
/// iteration with triangular solves (`O(n^2)` per step).  Returns 0 when the
/// matrix is exactly singular (zero diagonal entry).
///
/// Accuracy target is modest (relative `1e-8` plateau); intended for
/// resolvent-norm quadrature where the value enters through a logarithm.
pub fn min_singular_upper_tri(t: &CMatrix, max_iters: usize) -> f64 {
    assert!(t.is_square());
    let n = t.rows();
    if n == 0 {
        return 0.0;
    }
    let mut diag_min = f64::INFINITY;
    for i in 0..n {
        diag_min = diag_min.min(t[(i, i)].norm());
    }
    if diag_min == 0.0 {
        return 0.0;
    }
    let mut v = rng::start_vector(n);
    let mut prev = 0.0f64;
    let mut est = diag_min; // |t_ii| bounds sigma_min from above for triangular t
    for _ in 0..max_iters {
        // w = (T^H T)^{-1} v, so ||w|| -> 1/sigma_min^2
        let y = crate::numkernel::lu::upper_tri_adjoint_solve_vec(t, &v);
        let w = crate::numkernel::lu::upper_tri_solve_vec(t, &y);
        let norm = vec_norm(&w);
        if !norm.is_finite() || norm == 0.0 {
            return 0.0;
        }
        est = norm.sqrt().recip();
        v = w.into_iter().map(|z| z / norm).collect();
        if (est - prev).abs() <= 1e-8 * est {
            break;
        }
        prev = est;
    }
    est
}

/// Index and norm of the largest column; `||A e_j||` is a lower bound on
/// `sigma_max` for every `j`, with equality when `A` is diagonal.
fn best_column(a: &CMatrix) -> (usize, f64) {
    let (mut jmax, mut best) = (0usize, 0.0f64);
    for j in 0..a.cols() {
        let s: f64 = (0..a.rows()).map(|i| a[(i, j)].norm_sqr()).sum();
        if s > best {
            jmax = j;
            best = s;
        }
    }
    (jmax, best.sqrt())
}

/// Top singular triple `(sigma, u, v)` by power iteration on `A^H A`,
/// starting from `v0` when supplied (warm starts across related calls).
///
/// A warm start can lie in an invariant subspace that misses the top
/// singular direction entirely — for a diagonal matrix every coordinate
/// vector is a fixed point — so a plateau below the best column norm
/// (a certified lower bound on `sigma_max`) triggers a restart mixed with
/// that column's axis, and the final answer never drops below the bound.
pub fn top_singular_triple(
    a: &CMatrix,
    v0: Option<&[Complex64]>,
    rel_tol: f64,
    max_iters: usize,
) -> (f64, Vec<Complex64>, Vec<Complex64>) {
    let n = a.cols();
    let (jmax, col_bound) = best_column(a);
    let mut v: Vec<Complex64> = match v0 {
        Some(start) if start.len() == n && vec_norm(start) > 0.0 => {
            let norm = vec_norm(start);
            start.iter().map(|z| z / norm).collect()
        }
        _ => rng::start_vector(n),
    };
    let escape = |v: &[Complex64]| -> Vec<Complex64> {
        let noise = rng::start_vector(n);
        let mut w: Vec<Complex64> = v
            .iter()
            .zip(&noise)
            .map(|(a, b)| a + b.scale(0.25))
            .collect();
        w[jmax] += Complex64::new(1.0, 0.0);
        let norm = vec_norm(&w).max(1e-300);
        w.into_iter().map(|z| z / norm).collect()
    };
    let mut injections = 0usize;
    let mut prev = 0.0;
    let mut it = 0usize;
    while it < max_iters {
        it += 1;
        let av = a.matvec(&v);
        let mut w = a.adjoint_matvec(&av);
        let norm = vec_norm(&w);
        if norm == 0.0 {
            if injections < 3 && col_bound > 0.0 {
                injections += 1;
                v = escape(&v);
                prev = 0.0;
                continue;
            }
            return (0.0, vec![Complex64::new(0.0, 0.0); a.rows()], v);
        }
        for z in &mut w {
            *z /= norm;
        }
        let est = norm.sqrt();
        v = w;
        if (est - prev).abs() <= rel_tol * est {
            if est >= col_bound * (1.0 - 1e-9) || injections >= 3 {
                break;
            }
            injections += 1;
            v = escape(&v);
            prev = 0.0;
            continue;
        }
        prev = est;
    }
    let mut u = a.matvec(&v);
    let mut sigma = vec_norm(&u);
    if sigma < col_bound * (1.0 - 1e-9) {
        // fall back to the certified column: sigma = ||A e_jmax|| exactly
        v = vec![Complex64::new(0.0, 0.0); n];
        v[jmax] = Complex64::new(1.0, 0.0);
        u = a.col(jmax);
        sigma = col_bound;
    }
    if sigma > 0.0 {
        for z in &mut u {
            *z /= sigma;
        }
    }
    (sigma, u, v)
}

/// Leading `k` singular triples by subspace iteration on `A^H A` with QR
/// re-orthonormalization.  `v0` warm-starts the right subspace.  Returns
/// `(sigma_i, u_i, v_i)` in descending order along with the final right
/// block for reuse.
///
/// A stale warm block can span an invariant subspace that excludes the top
/// singular direction (coordinate blocks are invariant for diagonal
/// matrices), so when the leading estimate lands below the best column norm
/// the block is re-run with that column's axis mixed in.
pub fn top_singular_block(
    a: &CMatrix,
    k: usize,
    v0: Option<&CMatrix>,
    iters: usize,
) -> (Vec<(f64, Vec<Complex64>, Vec<Complex64>)>, CMatrix) {
    let n = a.cols();
    let k = k.min(n).max(1);
    let (jmax, col_bound) = best_column(a);
    let mut v = match v0 {
        Some(b) if b.rows() == n && b.cols() == k => {
            // re-expose directions the stale block may have lost: overwrite
            // the weakest column with noise plus the strongest coordinate
            let mut b = b.clone();
            let mut r = rng::stream("svd-subspace-mix", (n * 31 + k) as u64);
            for i in 0..n {
                b[(i, k - 1)] = rng::gaussian(&mut r).scale(0.25);
            }
            b[(jmax, k - 1)] += Complex64::new(1.0, 0.0);
            b
        }
        _ => {
            let mut r = rng::stream("svd-subspace", (n * 31 + k) as u64);
            CMatrix::from_fn(n, k, |_, _| rng::gaussian(&mut r))
        }
    };
    let iterate = |v0: &CMatrix, rounds: usize| -> CMatrix {
        let mut v = v0.clone();
        for _ in 0..rounds {
            let av = a.matmul(&v);
            let w = a.adjoint().matmul(&av);
            let (q, _) = crate::numkernel::qr::qr_factor(&w);
            v = q;
        }
        v
    };
    v = iterate(&v, iters);
    // escape hatch: the top Ritz value must reach the certified lower bound
    let top_est = {
        let av = a.matmul(&v);
        let mut best = 0.0f64;
        for j in 0..k {
            best = best.max(vec_norm(&av.col(j)));
        }
        best
    };
    if top_est < col_bound * (1.0 - 1e-9) {
        let mut r = rng::stream("svd-subspace-retry", (n * 31 + k) as u64);
        for i in 0..n {
            let noise = rng::gaussian(&mut r).scale(0.25);
            v[(i, k - 1)] = v[(i, k - 1)] + noise;
        }
        v[(jmax, k - 1)] += Complex64::new(1.0, 0.0);
        v = iterate(&v, iters.max(2));
    }
    // Rayleigh-Ritz on the subspace: small SVD of A V
    let av = a.matmul(&v);
    let small = match svd(&av) {
        Ok(s) => s,
        Err(_) => {
            // degenerate block: fall back to column norms
            let mut out = Vec::new();
            for j in 0..k {
                let col = av.col(j);
                let sigma = vec_norm(&col);
                let u = if sigma > 0.0 {
                    col.iter().map(|z| z / sigma).collect()
                } else {
                    col.clone()
                };
                out.push((sigma, u, v.col(j)));
            }
            out.sort_by(|p, q| q.0.partial_cmp(&p.0).unwrap());
            return (out, v);
        }
    };
    // right factors: V * small.v; left factors: small.u columns
    let vr = v.matmul(&small.v);
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        out.push((small.sigma[j], small.u.col(j), vr.col(j)));
    }
    (out, v)
}

/// Eigenvalues and eigenvectors of a Hermitian matrix by two-sided Jacobi.
///
/// Returns eigenvalues in descending order with the matching eigenvector
/// columns.  Input is symmetrized; the caller is responsible for `a` being
/// at least numerically Hermitian.
pub fn hermitian_eigen(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    assert!(a.is_square());
    let n = a.rows();
    let mut m = CMatrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5);
    let mut v = CMatrix::eye(n);
    let eps = f64::EPSILON;
    let mut converged = false;
    'sweeps: for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                off = off.max(m[(i, j)].norm());
            }
        }
        let scale = (0..n).map(|i| m[(i, i)].norm()).fold(off, f64::max);
        if off <= 32.0 * eps * scale.max(f64::MIN_POSITIVE) {
            converged = true;
            break 'sweeps;
        }
        for p in 0..n {
            for q in p + 1..n {
                let g = m[(p, q)];
                let gabs = g.norm();
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                if gabs <= eps * (app.abs() + aqq.abs()).max(f64::MIN_POSITIVE) {
                    continue;
                }
                let omega = g / gabs;
                let (c, s) = jacobi_cs(app, aqq, gabs);
                let so = omega * s;
                // columns p/q: M <- M J, with J = [[c, so], [-conj(so), c]]
                for r in 0..n {
                    let (x, y) = (m[(r, p)], m[(r, q)]);
                    m[(r, p)] = x * c - y * so.conj();
                    m[(r, q)] = x * so + y * c;
                }
                // rows p/q: M <- J^H M
                for cidx in 0..n {
                    let (x, y) = (m[(p, cidx)], m[(q, cidx)]);
                    m[(p, cidx)] = x * c - y * so;
                    m[(q, cidx)] = x * so.conj() + y * c;
                }
                for r in 0..n {
                    let (x, y) = (v[(r, p)], v[(r, q)]);
                    v[(r, p)] = x * c - y * so.conj();
                    v[(r, q)] = x * so + y * c;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence("Hermitian Jacobi eigensolver"));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&p, &q| diag[q].partial_cmp(&diag[p]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vecs = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_col(dst, &v.col(src));
    }
    Ok((vals, vecs))
}
