//! Householder QR: orthonormal bases, least squares, numerical rank.

use num_complex::Complex64;

use crate::numkernel::matrix::{vec_norm, CMatrix};

/// Householder reflectors for `A = Q R`, stored compactly.
struct Reflectors {
    /// Each reflector's vector `v` (length m), with `H = I - beta v v^H`.
    vs: Vec<Vec<Complex64>>,
    betas: Vec<f64>,
    r: CMatrix,
}

fn householder_factor(a: &CMatrix) -> Reflectors {
    let (m, n) = (a.rows(), a.cols());
    let steps = m.min(n);
    let mut r = a.clone();
    let mut vs = Vec::with_capacity(steps);
    let mut betas = Vec::with_capacity(steps);
    for k in 0..steps {
        // Build the reflector that zeroes column k below the diagonal.
        let mut v = vec![Complex64::new(0.0, 0.0); m];
        for i in k..m {
            v[i] = r[(i, k)];
        }
        let norm = vec_norm(&v[k..]);
        let (beta, scale) = if norm == 0.0 {
            (0.0, Complex64::new(0.0, 0.0))
        } else {
            let x0 = v[k];
            let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
            let alpha = -phase * norm;
            v[k] = x0 - alpha;
            let vn2: f64 = v[k..].iter().map(|z| z.norm_sqr()).sum();
            if vn2 == 0.0 {
                (0.0, alpha)
            } else {
                (2.0 / vn2, alpha)
            }
        };
        // Apply H = I - beta v v^H to the remaining columns.
        if beta != 0.0 {
            for j in k..n {
                let mut dot = Complex64::new(0.0, 0.0);
                for i in k..m {
                    dot += v[i].conj() * r[(i, j)];
                }
                dot *= beta;
                for i in k..m {
                    let sub = dot * v[i];
                    r[(i, j)] -= sub;
                }
            }
            r[(k, k)] = scale;
            for i in k + 1..m {
                r[(i, k)] = Complex64::new(0.0, 0.0);
            }
        }
        vs.push(v);
        betas.push(beta);
    }
    Reflectors { vs, betas, r }
}

impl Reflectors {
    /// Applies `Q^H` to a vector (length m).
    fn apply_qh(&self, b: &mut [Complex64]) {
        for (v, &beta) in self.vs.iter().zip(&self.betas) {
            if beta == 0.0 {
                continue;
            }
            let mut dot = Complex64::new(0.0, 0.0);
            for (x, y) in v.iter().zip(b.iter()) {
                dot += x.conj() * y;
            }
            dot *= beta;
            for (x, y) in v.iter().zip(b.iter_mut()) {
                *y -= dot * x;
            }
        }
    }

    /// Applies `Q` to a vector (length m).
    fn apply_q(&self, b: &mut [Complex64]) {
        for (v, &beta) in self.vs.iter().zip(&self.betas).rev() {
            if beta == 0.0 {
                continue;
            }
            let mut dot = Complex64::new(0.0, 0.0);
            for (x, y) in v.iter().zip(b.iter()) {
                dot += x.conj() * y;
            }
            dot *= beta;
            for (x, y) in v.iter().zip(b.iter_mut()) {
                *y -= dot * x;
            }
        }
    }
}

/// Thin QR factorization: `a = q r` with `q` of size `m x min(m,n)` having
/// orthonormal columns and `r` upper triangular `min(m,n) x n`.
pub fn qr_factor(a: &CMatrix) -> (CMatrix, CMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let k = m.min(n);
    let h = householder_factor(a);
    let mut q = CMatrix::zeros(m, k);
    for j in 0..k {
        let mut e = vec![Complex64::new(0.0, 0.0); m];
        e[j] = Complex64::new(1.0, 0.0);
        h.apply_q(&mut e);
        q.set_col(j, &e);
    }
    let mut r = CMatrix::zeros(k, n);
    for i in 0..k {
        for j in i..n {
            r[(i, j)] = h.r[(i, j)];
        }
    }
    (q, r)
}

/// Least-squares solve `min ||a x - b||_2` for full-column-rank `a` (m >= n).
pub fn least_squares(a: &CMatrix, b: &[Complex64]) -> Vec<Complex64> {
    let (m, n) = (a.rows(), a.cols());
    assert!(m >= n, "least_squares expects a tall system");
    assert_eq!(b.len(), m);
    let h = householder_factor(a);
    let mut rhs = b.to_vec();
    h.apply_qh(&mut rhs);
    // back substitution on the leading n x n block of R
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        for j in i + 1..n {
            acc -= h.r[(i, j)] * x[j];
        }
        x[i] = acc / h.r[(i, i)];
    }
    x
}

/// Numerical rank by column-pivoted elimination: the number of pivot columns
/// whose remaining norm exceeds `tol`.
pub fn numerical_rank(a: &CMatrix, tol: f64) -> usize {
    let (m, n) = (a.rows(), a.cols());
    let mut work = a.clone();
    let steps = m.min(n);
    let mut cols: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    for k in 0..steps {
        // choose the remaining column with the largest tail norm
        let mut best = k;
        let mut best_norm = 0.0;
        for (idx, &j) in cols.iter().enumerate().skip(k) {
            let norm: f64 = (k..m).map(|i| work[(i, j)].norm_sqr()).sum::<f64>().sqrt();
            if norm > best_norm {
                best_norm = norm;
                best = idx;
            }
        }
        if best_norm <= tol {
            break;
        }
        cols.swap(k, best);
        rank += 1;
        let j = cols[k];
        // Householder step restricted to rows k..m, applied to remaining columns.
        let mut v: Vec<Complex64> = (k..m).map(|i| work[(i, j)]).collect();
        let norm = vec_norm(&v);
        let x0 = v[0];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        v[0] = x0 + phase * norm;
        let vn2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vn2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vn2;
        for &jc in cols.iter().skip(k) {
            let mut dot = Complex64::new(0.0, 0.0);
            for (off, vi) in v.iter().enumerate() {
                dot += vi.conj() * work[(k + off, jc)];
            }
            dot *= beta;
            for (off, vi) in v.iter().enumerate() {
                let sub = dot * vi;
                work[(k + off, jc)] -= sub;
            }
        }
    }
    rank
}

/// Orthonormal basis of the span of the given columns (modified Gram-Schmidt
/// with reorthogonalization).  Columns contributing less than `tol` after
/// projection are dropped.
pub fn orthonormal_basis(columns: &[Vec<Complex64>], tol: f64) -> CMatrix {
    if columns.is_empty() {
        return CMatrix::zeros(0, 0);
    }
    let m = columns[0].len();
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for col in columns {
        assert_eq!(col.len(), m);
        let mut v = col.clone();
        for _pass in 0..2 {
            for b in &basis {
                let mut dot = Complex64::new(0.0, 0.0);
                for (x, y) in b.iter().zip(v.iter()) {
                    dot += x.conj() * y;
                }
                for (x, y) in b.iter().zip(v.iter_mut()) {
                    *y -= dot * x;
                }
            }
        }
        let norm = vec_norm(&v);
        if norm > tol {
            for z in &mut v {
                *z /= norm;
            }
            basis.push(v);
        }
    }
    let mut q = CMatrix::zeros(m, basis.len());
    for (j, b) in basis.iter().enumerate() {
        q.set_col(j, b);
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::rng;

    fn random_matrix(m: usize, n: usize, salt: u64) -> CMatrix {
        let mut r = rng::stream("qr-test", salt);
        CMatrix::from_fn(m, n, |_, _| rng::gaussian(&mut r))
    }

    #[test]
    fn qr_reconstructs_and_q_is_isometric() {
        let a = random_matrix(10, 6, 1);
        let (q, r) = qr_factor(&a);
        assert!((&q.matmul(&r) - &a).fro_norm() < 1e-12 * a.fro_norm());
        let qh_q = q.adjoint().matmul(&q);
        assert!((&qh_q - &CMatrix::eye(6)).fro_norm() < 1e-12);
    }

    #[test]
    fn least_squares_solves_consistent_system() {
        let a = random_matrix(8, 8, 2);
        let x_true: Vec<Complex64> = random_matrix(8, 1, 3).col(0);
        let b = a.matvec(&x_true);
        let x = least_squares(&a, &b);
        let err: f64 = x.iter().zip(&x_true).map(|(p, q)| (p - q).norm()).sum();
        assert!(err < 1e-9);
    }

    #[test]
    fn rank_of_outer_product_is_one() {
        let u = random_matrix(9, 1, 4);
        let v = random_matrix(9, 1, 5);
        let a = u.matmul(&v.adjoint());
        assert_eq!(numerical_rank(&a, 1e-10 * a.fro_norm()), 1);
        let full = random_matrix(9, 9, 6);
        assert_eq!(numerical_rank(&full, 1e-10 * full.fro_norm()), 9);
    }

    #[test]
    fn orthonormal_basis_spans_and_dedupes() {
        let mut r = rng::stream("qr-test-basis", 0);
        let v1: Vec<Complex64> = (0..7).map(|_| rng::gaussian(&mut r)).collect();
        let v2: Vec<Complex64> = (0..7).map(|_| rng::gaussian(&mut r)).collect();
        let v1_copy: Vec<Complex64> = v1.iter().map(|z| z * Complex64::new(2.0, 1.0)).collect();
        let q = orthonormal_basis(&[v1.clone(), v1_copy, v2], 1e-10);
        assert_eq!(q.cols(), 2);
        let gram = q.adjoint().matmul(&q);
        assert!((&gram - &CMatrix::eye(2)).fro_norm() < 1e-12);
    }
}
