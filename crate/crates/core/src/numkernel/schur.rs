//! Complex Schur form: Hessenberg reduction followed by shifted QR iteration.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkernel::matrix::{vec_norm, CMatrix};

/// Dimension cap for the dense eigensolver.
pub const EIGEN_DIM_CAP: usize = 512;

/// Unitary Schur factorization `a = u t u^H` with upper-triangular `t`.
#[derive(Clone, Debug)]
pub struct Schur {
    pub t: CMatrix,
    /// Accumulated only when requested; `None` saves roughly half the work.
    pub u: Option<CMatrix>,
}

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Complex Givens rotation: returns `(c, s, r)` with real `c >= 0` such that
/// `[[c, s], [-conj(s), c]] * [a; b] = [r; 0]` and `c^2 + |s|^2 = 1`.
fn rotg(a: Complex64, b: Complex64) -> (f64, Complex64, Complex64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, czero(), a);
    }
    if an == 0.0 {
        return (0.0, b.conj() / bn, Complex64::new(bn, 0.0));
    }
    let nrm = an.hypot(bn);
    let c = an / nrm;
    let phase = a / an;
    let s = phase * (b.conj() / nrm);
    let r = phase * nrm;
    (c, s, r)
}

/// Householder reduction to upper Hessenberg form.  Returns `(h, q)` with
/// `a = q h q^H`; `q` is accumulated only when `want_q` is set.
pub fn hessenberg(a: &CMatrix, want_q: bool) -> (CMatrix, Option<CMatrix>) {
    assert!(a.is_square());
    let n = a.rows();
    let mut h = a.clone();
    let mut q = if want_q { Some(CMatrix::eye(n)) } else { None };
    if n < 3 {
        return (h, q);
    }
    for k in 0..n - 2 {
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let norm = vec_norm(&v);
        if norm == 0.0 {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        v[0] = x0 - alpha;
        let vn2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vn2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vn2;
        // left: rows k+1..n of columns k..n
        for j in k..n {
            let mut dot = czero();
            for (off, vi) in v.iter().enumerate() {
                dot += vi.conj() * h[(k + 1 + off, j)];
            }
            dot *= beta;
            for (off, vi) in v.iter().enumerate() {
                let sub = dot * vi;
                h[(k + 1 + off, j)] -= sub;
            }
        }
        // right: columns k+1..n of all rows
        for i in 0..n {
            let mut dot = czero();
            for (off, vi) in v.iter().enumerate() {
                dot += h[(i, k + 1 + off)] * vi;
            }
            dot *= beta;
            for (off, vi) in v.iter().enumerate() {
                let sub = dot * vi.conj();
                h[(i, k + 1 + off)] -= sub;
            }
        }
        if let Some(qm) = q.as_mut() {
            for i in 0..n {
                let mut dot = czero();
                for (off, vi) in v.iter().enumerate() {
                    dot += qm[(i, k + 1 + off)] * vi;
                }
                dot *= beta;
                for (off, vi) in v.iter().enumerate() {
                    let sub = dot * vi.conj();
                    qm[(i, k + 1 + off)] -= sub;
                }
            }
        }
        // clean the column below the subdiagonal
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = czero();
        }
    }
    (h, q)
}

/// Eigenvalues of the trailing 2x2 block, returning the root closer to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let tr_half = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (tr_half * tr_half - det).sqrt();
    let mu1 = tr_half + disc;
    let mu2 = tr_half - disc;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

/// Shifted QR iteration on a Hessenberg matrix, in place.
fn qr_iterate(t: &mut CMatrix, mut u: Option<&mut CMatrix>) -> Result<()> {
    let n = t.rows();
    if n <= 1 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let smlnum = f64::MIN_POSITIVE * (n as f64 / eps);
    let mut hi = n - 1;
    let mut stall = 0usize;
    let mut guard = 0usize;
    let guard_cap = 60 * n * n + 4000;
    while hi > 0 {
        guard += 1;
        if guard > guard_cap {
            return Err(Error::NoConvergence("shifted QR eigensolver"));
        }
        // find the smallest l <= hi with a negligible subdiagonal above it
        let mut l = hi;
        while l > 0 {
            let sub = t[(l, l - 1)].norm();
            let local = t[(l - 1, l - 1)].norm() + t[(l, l)].norm();
            let floor = if local == 0.0 { t.fro_norm() } else { local };
            if sub <= (eps * floor).max(smlnum) {
                t[(l, l - 1)] = czero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            // 1x1 block deflated
            hi -= 1;
            stall = 0;
            continue;
        }
        stall += 1;
        if stall > 400 {
            return Err(Error::NoConvergence("shifted QR eigensolver (stalled window)"));
        }
        let mu = if stall % 12 == 0 {
            // exceptional shift to break symmetry-induced cycles
            t[(hi, hi)] + Complex64::new(0.75 * t[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                t[(hi - 1, hi - 1)],
                t[(hi - 1, hi)],
                t[(hi, hi - 1)],
                t[(hi, hi)],
            )
        };
        // implicit single-shift bulge chase over the window [l, hi]
        for k in l..hi {
            let (x, y) = if k == l {
                (t[(l, l)] - mu, t[(l + 1, l)])
            } else {
                (t[(k, k - 1)], t[(k + 1, k - 1)])
            };
            let (c, s, r) = rotg(x, y);
            if k > l {
                t[(k, k - 1)] = r;
                t[(k + 1, k - 1)] = czero();
            }
            // rows k, k+1 from column k onward
            for j in k..t.cols() {
                let (p, q) = (t[(k, j)], t[(k + 1, j)]);
                t[(k, j)] = p * c + q * s;
                t[(k + 1, j)] = -p * s.conj() + q * c;
            }
            // columns k, k+1 down to the bulge row
            let row_end = (k + 2).min(hi);
            for i in 0..=row_end {
                let (p, q) = (t[(i, k)], t[(i, k + 1)]);
                t[(i, k)] = p * c + q * s.conj();
                t[(i, k + 1)] = -p * s + q * c;
            }
            if let Some(um) = u.as_deref_mut() {
                for i in 0..um.rows() {
                    let (p, q) = (um[(i, k)], um[(i, k + 1)]);
                    um[(i, k)] = p * c + q * s.conj();
                    um[(i, k + 1)] = -p * s + q * c;
                }
            }
        }
    }
    // zero out everything below the diagonal that deflation left behind
    for i in 1..n {
        for j in 0..i {
            t[(i, j)] = czero();
        }
    }
    Ok(())
}

/// Full Schur factorization.  `want_u` controls accumulation of the unitary
/// factor; eigenvalue-only callers should pass `false` and read `t`'s diagonal.
pub fn schur_factor(a: &CMatrix, want_u: bool) -> Result<Schur> {
    assert!(a.is_square());
    let n = a.rows();
    if n > EIGEN_DIM_CAP {
        return Err(Error::CapExceeded { what: "eigensolver dimension", got: n, cap: EIGEN_DIM_CAP });
    }
    if !a.all_finite() {
        return Err(Error::NonFinite("eigensolver input"));
    }
    let (mut t, u) = hessenberg(a, want_u);
    let mut u = u;
    qr_iterate(&mut t, u.as_mut())?;
    Ok(Schur { t, u })
}

/// Parlett-Reinsch balancing: a diagonal similarity with power-of-two scales
/// that roughly equalizes row and column norms.  Eigenvalues are preserved
/// exactly; returns the balanced matrix.
pub fn balance(a: &CMatrix) -> CMatrix {
    let n = a.rows();
    let mut m = a.clone();
    let mut changed = true;
    let mut rounds = 0;
    while changed && rounds < 40 {
        changed = false;
        rounds += 1;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    r += m[(i, j)].norm();
                    c += m[(j, i)].norm();
                }
            }
            if r == 0.0 || c == 0.0 {
                continue;
            }
            let mut f = 1.0f64;
            let s = r + c;
            while c < r / 2.0 {
                c *= 4.0;
                r /= 4.0;
                f *= 2.0;
            }
            while c >= r * 2.0 {
                c /= 4.0;
                r *= 4.0;
                f /= 2.0;
            }
            if (c + r) < 0.95 * s {
                changed = true;
                let inv = 1.0 / f;
                for j in 0..n {
                    m[(i, j)] = m[(i, j)] * inv;
                }
                for j in 0..n {
                    m[(j, i)] = m[(j, i)] * f;
                }
            }
        }
    }
    m
}

/// Eigenvalues only, with balancing (the factorization is discarded, so the
/// non-unitary similarity is harmless and buys accuracy on badly scaled
/// inputs such as companion matrices).
pub fn eigenvalues_only(a: &CMatrix) -> Result<Vec<Complex64>> {
    let balanced = balance(a);
    let s = schur_factor(&balanced, false)?;
    Ok((0..a.rows()).map(|i| s.t[(i, i)]).collect())
}

/// Eigenvectors of an upper-triangular matrix by guarded back-substitution:
/// column `k` solves `(t - t_kk) y = 0` normalized to unit length.
pub fn triangular_eigenvectors(t: &CMatrix) -> CMatrix {
    let n = t.rows();
    let mut y = CMatrix::zeros(n, n);
    let scale = t.fro_norm().max(f64::MIN_POSITIVE);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut col = vec![czero(); n];
        col[k] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut acc = czero();
            for j in i + 1..=k {
                acc += t[(i, j)] * col[j];
            }
            let mut denom = t[(i, i)] - lambda;
            if denom.norm() < f64::EPSILON * scale {
                denom = Complex64::new(f64::EPSILON * scale, 0.0);
            }
            col[i] = -acc / denom;
        }
        let norm = vec_norm(&col);
        for z in &mut col {
            *z /= norm;
        }
        y.set_col(k, &col);
    }
    y
}

/// Eigenvalues plus (right) eigenvector matrix `v` with unit columns.
pub fn eigen_pairs(a: &CMatrix) -> Result<(Vec<Complex64>, CMatrix)> {
    let s = schur_factor(a, true)?;
    let u = s.u.expect("requested unitary factor");
    let y = triangular_eigenvectors(&s.t);
    let mut v = u.matmul(&y);
    for j in 0..v.cols() {
        let norm = vec_norm(&v.col(j));
        if norm > 0.0 {
            for i in 0..v.rows() {
                v[(i, j)] = v[(i, j)] / norm;
            }
        }
    }
    let vals = (0..a.rows()).map(|i| s.t[(i, i)]).collect();
    Ok((vals, v))
}
