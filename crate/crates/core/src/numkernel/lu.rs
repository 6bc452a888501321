//! LU factorization with partial pivoting, linear solves, triangular kernels.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkernel::matrix::CMatrix;

/// Packed LU factors of a square matrix: `P A = L U` with unit-diagonal `L`.
#[derive(Clone, Debug)]
pub struct LuFactors {
    /// `L` strictly below the diagonal, `U` on and above, in one matrix.
    packed: CMatrix,
    /// Row permutation: factored row `i` came from original row `perm[i]`.
    perm: Vec<usize>,
    /// Permutation parity (+1/-1), for determinants.
    sign: f64,
}

/// Factors `a` with partial pivoting.
///
/// Fails with [`Error::Singular`] when a pivot falls below
/// `1e-12 * max|a_ij|`, i.e. the matrix is singular at working precision.
pub fn lu_factor(a: &CMatrix) -> Result<LuFactors> {
    assert!(a.is_square(), "lu_factor needs a square matrix");
    let n = a.rows();
    let mut m = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let scale = a.max_abs();
    if scale == 0.0 {
        return Err(Error::Singular("lu_factor of the zero matrix"));
    }
    let tol = 1e-12 * scale;
    for k in 0..n {
        // pivot search in column k
        let (mut best, mut best_abs) = (k, m[(k, k)].norm());
        for i in k + 1..n {
            let v = m[(i, k)].norm();
            if v > best_abs {
                best = i;
                best_abs = v;
            }
        }
        if best_abs <= tol {
            return Err(Error::Singular("lu_factor pivot below tolerance"));
        }
        if best != k {
            for j in 0..n {
                let tmp = m[(k, j)];
                m[(k, j)] = m[(best, j)];
                m[(best, j)] = tmp;
            }
            perm.swap(k, best);
            sign = -sign;
        }
        let pivot = m[(k, k)];
        for i in k + 1..n {
            let factor = m[(i, k)] / pivot;
            m[(i, k)] = factor;
            if factor.re == 0.0 && factor.im == 0.0 {
                continue;
            }
            for j in k + 1..n {
                let sub = factor * m[(k, j)];
                m[(i, j)] -= sub;
            }
        }
    }
    Ok(LuFactors { packed: m, perm, sign })
}

impl LuFactors {
    pub fn order(&self) -> usize {
        self.packed.rows()
    }

    /// Solves `A x = b` for one right-hand side in place of a fresh vector.
    pub fn solve_vec(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.order();
        assert_eq!(b.len(), n);
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        // forward substitution with unit L
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.packed[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        // back substitution with U
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= self.packed[(i, j)] * x[j];
            }
            x[i] = acc / self.packed[(i, i)];
        }
        x
    }

    /// Solves `A X = B` column by column.
    pub fn solve(&self, b: &CMatrix) -> CMatrix {
        let n = self.order();
        assert_eq!(b.rows(), n);
        let mut x = CMatrix::zeros(n, b.cols());
        for j in 0..b.cols() {
            let col = self.solve_vec(&b.col(j));
            x.set_col(j, &col);
        }
        x
    }

    /// Determinant from the factorization.
    pub fn det(&self) -> Complex64 {
        let mut d = Complex64::new(self.sign, 0.0);
        for i in 0..self.order() {
            d *= self.packed[(i, i)];
        }
        d
    }
}

/// One-shot solve `A X = B`.
///
/// The residual satisfies `||A X - B|| <= c n eps ||A|| ||X||` by backward
/// stability of pivoted elimination; callers that need a certificate should
/// check the residual explicitly.
pub fn lu_solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    Ok(lu_factor(a)?.solve(b))
}

/// Inverse via LU (prefer `solve` when a product is all you need).
pub fn lu_inverse(a: &CMatrix) -> Result<CMatrix> {
    lu_solve(a, &CMatrix::eye(a.rows()))
}

/// Solves `U x = b` with upper-triangular `U` (entries below the diagonal ignored).
pub fn upper_tri_solve_vec(u: &CMatrix, b: &[Complex64]) -> Vec<Complex64> {
    let n = u.rows();
    let mut x = b.to_vec();
    for i in (0..n).rev() {
        let mut acc = x[i];
        for j in i + 1..n {
            acc -= u[(i, j)] * x[j];
        }
        x[i] = acc / u[(i, i)];
    }
    x
}

/// Solves `U^H x = b` with upper-triangular `U`.
pub fn upper_tri_adjoint_solve_vec(u: &CMatrix, b: &[Complex64]) -> Vec<Complex64> {
    let n = u.rows();
    let mut x = b.to_vec();
    for i in 0..n {
        let mut acc = x[i];
        for j in 0..i {
            acc -= u[(j, i)].conj() * x[j];
        }
        x[i] = acc / u[(i, i)].conj();
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::rng;

    fn random_matrix(n: usize, salt: u64) -> CMatrix {
        let mut r = rng::stream("lu-test", salt);
        CMatrix::from_fn(n, n, |_, _| rng::gaussian(&mut r))
    }

    #[test]
    fn solve_reproduces_rhs() {
        for salt in 0..4 {
            let n = 3 + 5 * salt as usize;
            let a = random_matrix(n, salt);
            let b = random_matrix(n, salt + 100);
            let x = lu_solve(&a, &b).unwrap();
            let resid = (&a.matmul(&x) - &b).fro_norm();
            assert!(
                resid <= 1e-10 * a.fro_norm() * x.fro_norm().max(1.0),
                "residual {resid}"
            );
        }
    }

    #[test]
    fn inverse_of_identity_like() {
        let a = random_matrix(12, 7);
        let inv = lu_inverse(&a).unwrap();
        let eye = a.matmul(&inv);
        assert!((&eye - &CMatrix::eye(12)).fro_norm() < 1e-10 * a.fro_norm().max(1.0));
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let mut a = random_matrix(6, 3);
        let r0 = a.row(0);
        a.set_col(0, &vec![Complex64::new(0.0, 0.0); 6]);
        for j in 0..6 {
            // make column 0 a copy of column 1 so the matrix is rank deficient
            let v = a[(j, 1)];
            a[(j, 0)] = v;
        }
        let _ = r0;
        assert!(matches!(lu_factor(&a), Err(Error::Singular(_))));
    }

    #[test]
    fn det_of_triangular_product() {
        let a = CMatrix::new(
            2,
            2,
            vec![
                Complex64::new(2.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 3.0),
            ],
        )
        .unwrap();
        let d = lu_factor(&a).unwrap().det();
        assert!((d - Complex64::new(0.0, 6.0)).norm() < 1e-14);
    }

    #[test]
    fn triangular_solvers_agree_with_lu() {
        let n = 9;
        let mut u = random_matrix(n, 11);
        for i in 0..n {
            for j in 0..i {
                u[(i, j)] = Complex64::new(0.0, 0.0);
            }
            u[(i, i)] += Complex64::new(4.0, 0.0); // keep well conditioned
        }
        let b: Vec<Complex64> = random_matrix(n, 12).col(0);
        let x = upper_tri_solve_vec(&u, &b);
        let bx = u.matvec(&x);
        let err: f64 = bx.iter().zip(&b).map(|(p, q)| (p - q).norm()).sum();
        assert!(err < 1e-10);

        let y = upper_tri_adjoint_solve_vec(&u, &b);
        let by = u.adjoint().matvec(&y);
        let err2: f64 = by.iter().zip(&b).map(|(p, q)| (p - q).norm()).sum();
        assert!(err2 < 1e-10);
    }
}
