//! Seeded generators for test instances.
//!
//! All generators take an explicit [`ChaCha8Rng`] so callers control
//! reproducibility; see [`crate::numkernel::rng`] for stream derivation.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::numkernel::matrix::CMatrix;
use crate::numkernel::qr;
use crate::numkernel::rng::gaussian;

/// Matrix with independent standard complex Gaussian entries.
pub fn gaussian_matrix(rows: usize, cols: usize, r: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(r))
}

/// Haar-distributed random unitary via the phase-fixed QR of a Gaussian.
pub fn random_unitary(n: usize, r: &mut ChaCha8Rng) -> CMatrix {
    let g = gaussian_matrix(n, n, r);
    let (q, rr) = qr::qr_factor(&g);
    // absorb R's diagonal phases so the distribution is exactly Haar
    let mut out = q;
    for j in 0..n {
        let d = rr[(j, j)];
        let phase = if d.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { d / d.norm() };
        for i in 0..n {
            let v = out[(i, j)] * phase;
            out[(i, j)] = v;
        }
    }
    out
}

/// Unit-norm random vector.
pub fn random_unit_vector(n: usize, r: &mut ChaCha8Rng) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| gaussian(r)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Invertible matrix `U * (I + s * strictly_upper)` with unitary `U`: always
/// nonsingular, condition number grows gently with `s` and `n`.
pub fn mild_similarity(n: usize, skew: f64, r: &mut ChaCha8Rng) -> CMatrix {
    let u = random_unitary(n, r);
    let mut t = CMatrix::eye(n);
    for i in 0..n {
        for j in i + 1..n {
            t[(i, j)] = gaussian(r).scale(skew);
        }
    }
    u.matmul(&t)
}

/// Diagonalizable matrix with prescribed eigenvalues and a mildly
/// non-unitary eigenvector basis.  Returns `(A, V)` with `A = V D V^-1`.
pub fn with_eigenvalues(eigs: &[Complex64], skew: f64, r: &mut ChaCha8Rng) -> (CMatrix, CMatrix) {
    let n = eigs.len();
    let v = mild_similarity(n, skew, r);
    let vinv = crate::numkernel::lu::lu_inverse(&v).expect("unipotent-times-unitary is invertible");
    let a = v.matmul(&CMatrix::diag(eigs)).matmul(&vinv);
    (a, v)
}

/// Eigenvalue sample with well-separated moduli in `[lo, hi]` and uniform
/// phases; separation in modulus is at least `(hi - lo) / (2n)`.
pub fn spread_moduli(n: usize, lo: f64, hi: f64, r: &mut ChaCha8Rng) -> Vec<Complex64> {
    assert!(n >= 1 && hi > lo && lo > 0.0);
    let slot = (hi - lo) / n as f64;
    let mut vals: Vec<Complex64> = (0..n)
        .map(|k| {
            let modulus = lo + slot * (k as f64 + 0.25 + 0.5 * r.gen::<f64>());
            let phase = std::f64::consts::TAU * r.gen::<f64>();
            Complex64::from_polar(modulus, phase)
        })
        .collect();
    // shuffle so modulus order carries no information
    for i in (1..n).rev() {
        let j = r.gen_range(0..=i);
        vals.swap(i, j);
    }
    vals
}

/// Block with `lambda` on the diagonal and ones on the superdiagonal.
pub fn jordan_block(lambda: Complex64, size: usize) -> CMatrix {
    let mut m = CMatrix::diag(&vec![lambda; size]);
    for i in 0..size.saturating_sub(1) {
        m[(i, i + 1)] = Complex64::new(1.0, 0.0);
    }
    m
}

/// Matrix similar to a direct sum of the given Jordan blocks, conjugated by
/// a mild similarity.  Returns the matrix; the block list is the ground truth
/// for eigenvalues (algebraic multiplicity) and largest-block heights.
pub fn jordan_structured(blocks: &[(Complex64, usize)], skew: f64, r: &mut ChaCha8Rng) -> CMatrix {
    let parts: Vec<CMatrix> = blocks.iter().map(|&(l, s)| jordan_block(l, s)).collect();
    let j = CMatrix::direct_sum(&parts);
    let v = mild_similarity(j.rows(), skew, r);
    let vinv = crate::numkernel::lu::lu_inverse(&v).expect("invertible by construction");
    v.matmul(&j).matmul(&vinv)
}

/// Rank-`k` matrix `sum u_i v_i^*` with unit factors scaled by `scale`.
pub fn rank_k(n: usize, k: usize, scale: f64, r: &mut ChaCha8Rng) -> CMatrix {
    let mut b = CMatrix::zeros(n, n);
    for _ in 0..k {
        let u = random_unit_vector(n, r);
        let v = random_unit_vector(n, r);
        for i in 0..n {
            for j in 0..n {
                let add = u[i] * v[j].conj() * scale;
                b[(i, j)] += add;
            }
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::rng::stream;
    use crate::numkernel::{singular_values, spectrum};

    #[test]
    fn random_unitary_is_unitary() {
        let mut r = stream("synth-unitary", 0);
        let u = random_unitary(6, &mut r);
        let gram = u.adjoint().matmul(&u);
        let err = (&gram - &CMatrix::eye(6)).fro_norm();
        assert!(err < 1e-12, "gram deviation {err}");
    }

    #[test]
    fn with_eigenvalues_hits_prescribed_spectrum() {
        let mut r = stream("synth-eigs", 1);
        let want = spread_moduli(5, 0.5, 2.0, &mut r);
        let (a, _) = with_eigenvalues(&want, 0.3, &mut r);
        let spec = spectrum::eigenvalues(&a).unwrap();
        let mut want_sorted = want.clone();
        spectrum::sort_canonical(&mut want_sorted);
        for (got, want) in spec.eigenvalues.iter().zip(&want_sorted) {
            assert!((got - want).norm() < 1e-8, "eigenvalue drift {got} vs {want}");
        }
    }

    #[test]
    fn rank_k_has_exact_rank() {
        let mut r = stream("synth-rank", 2);
        let b = rank_k(8, 3, 2.0, &mut r);
        let sv = singular_values(&b).unwrap();
        assert!(sv[2] > 1e-8 && sv[3] < 1e-10, "rank profile {:?}", sv);
    }

    #[test]
    fn jordan_structured_recovers_heights() {
        let mut r = stream("synth-jordan", 3);
        let l1 = Complex64::new(1.0, 0.5);
        let l2 = Complex64::new(-0.5, 0.0);
        let a = jordan_structured(&[(l1, 2), (l2, 1)], 0.2, &mut r);
        let spec = spectrum::eigenvalues(&a).unwrap();
        assert_eq!(spec.clusters.len(), 2);
        let heights = spectrum::jordan_heights(&a, &spec);
        let by_mult: Vec<(usize, usize)> =
            spec.clusters.iter().map(|c| c.multiplicity).zip(heights).collect();
        assert!(by_mult.contains(&(2, 2)));
        assert!(by_mult.contains(&(1, 1)));
    }
}
