//! Monic polynomials and slice-based polynomial helpers.
//!
//! Coefficient slices are always low-to-high: `coeffs[k]` multiplies `z^k`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkernel::matrix::CMatrix;
use crate::numkernel::schur;

/// Largest polynomial degree accepted by the companion-matrix root finder.
pub const ROOTS_DEGREE_CAP: usize = 64;

/// A monic polynomial `z^d + c[d-1] z^{d-1} + ... + c[0]`.
///
/// Only the non-leading coefficients are stored; the leading 1 is implicit,
/// which keeps "monic" a type-level fact rather than a runtime convention.
///
/// ```
/// use num_complex::Complex64;
/// use polyops_core::numkernel::MonicPoly;
///
/// // z^2 - 1
/// let p = MonicPoly::new(vec![Complex64::new(-1.0, 0.0), Complex64::new(0.0, 0.0)]);
/// assert_eq!(p.degree(), 2);
/// assert!((p.eval(Complex64::new(3.0, 0.0)) - Complex64::new(8.0, 0.0)).norm() < 1e-15);
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct MonicPoly {
    coeffs: Vec<Complex64>,
}

impl MonicPoly {
    /// Monic polynomial with the given non-leading coefficients (low-to-high).
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        MonicPoly { coeffs }
    }

    /// The monomial `z^d`.
    pub fn monomial(d: usize) -> Self {
        MonicPoly { coeffs: vec![Complex64::new(0.0, 0.0); d] }
    }

    /// Expands `prod_j (z - roots[j])`.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut full = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            full = poly_mul(&full, &[-r, Complex64::new(1.0, 0.0)]);
        }
        full.pop(); // drop the leading 1
        MonicPoly { coeffs: full }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Non-leading coefficients, low-to-high.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// All coefficients including the leading 1, low-to-high.
    pub fn full_coeffs(&self) -> Vec<Complex64> {
        let mut v = self.coeffs.clone();
        v.push(Complex64::new(1.0, 0.0));
        v
    }

    /// Horner evaluation at a scalar.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Horner evaluation at a square matrix: `A^d + c[d-1] A^{d-1} + ...`.
    pub fn eval_matrix(&self, a: &CMatrix) -> CMatrix {
        assert!(a.is_square(), "polynomial of a non-square matrix");
        let mut acc = CMatrix::eye(a.rows());
        for &c in self.coeffs.iter().rev() {
            acc = a.matmul(&acc).add_scalar_diag(c);
        }
        acc
    }

    /// Derivative as a plain coefficient vector (degree `d-1`, leading `d`).
    pub fn derivative(&self) -> Vec<Complex64> {
        let d = self.degree();
        let mut out = Vec::with_capacity(d);
        for (k, &c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c * k as f64);
        }
        out.push(Complex64::new(d as f64, 0.0));
        out
    }

    /// Product of two monic polynomials (again monic).
    pub fn mul(&self, other: &MonicPoly) -> MonicPoly {
        let mut full = poly_mul(&self.full_coeffs(), &other.full_coeffs());
        full.pop();
        MonicPoly { coeffs: full }
    }

    /// Companion matrix whose characteristic polynomial is `self`.
    pub fn companion(&self) -> CMatrix {
        let d = self.degree();
        assert!(d >= 1, "companion matrix of a constant");
        let mut c = CMatrix::zeros(d, d);
        for i in 1..d {
            c[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        for i in 0..d {
            c[(i, d - 1)] = -self.coeffs[i];
        }
        c
    }

    /// All roots, via the balanced companion matrix.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        if self.degree() == 0 {
            return Ok(Vec::new());
        }
        if self.degree() > ROOTS_DEGREE_CAP {
            return Err(Error::CapExceeded {
                what: "polynomial degree",
                got: self.degree(),
                cap: ROOTS_DEGREE_CAP,
            });
        }
        schur::eigenvalues_only(&self.companion())
    }
}

/// Horner evaluation of a general coefficient slice (low-to-high).
pub fn poly_eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Horner evaluation of a general coefficient slice at a square matrix.
pub fn poly_eval_matrix(coeffs: &[Complex64], a: &CMatrix) -> CMatrix {
    assert!(a.is_square());
    let n = a.rows();
    let mut acc = CMatrix::zeros(n, n);
    for &c in coeffs.iter().rev() {
        acc = a.matmul(&acc).add_scalar_diag(c);
    }
    acc
}

/// Coefficient-space product.
pub fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficient-space sum.
pub fn poly_add(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len().max(b.len())];
    for (o, &x) in out.iter_mut().zip(a) {
        *o += x;
    }
    for (o, &y) in out.iter_mut().zip(b) {
        *o += y;
    }
    out
}

/// Term-by-term antiderivative with constant 0.
pub fn poly_integrate(a: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() + 1);
    out.push(Complex64::new(0.0, 0.0));
    for (k, &c) in a.iter().enumerate() {
        out.push(c / (k as f64 + 1.0));
    }
    out
}

/// Roots of a general (not necessarily monic) coefficient slice.
///
/// Leading coefficients smaller than `1e-14 * max|coeff|` are trimmed before
/// normalizing to monic form; the degree cap matches [`MonicPoly::roots`].
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::Singular("poly_roots of the zero polynomial"));
    }
    let mut trimmed = coeffs.to_vec();
    while let Some(last) = trimmed.last() {
        if last.norm() <= 1e-14 * scale && trimmed.len() > 1 {
            trimmed.pop();
        } else {
            break;
        }
    }
    let lead = *trimmed.last().unwrap();
    let monic: Vec<Complex64> = trimmed[..trimmed.len() - 1].iter().map(|&c| c / lead).collect();
    MonicPoly::new(monic).roots()
}
