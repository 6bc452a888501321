//! Detection of polynomial structure: minimal and simplifying polynomials,
//! searches for polynomials making a matrix normal or unitary, resolvent
//! growth constants, and power-boundedness scans.
//!
//! A matrix is *polynomially normal* (resp. *unitary*) of degree `d` when
//! some polynomial `p` of that degree with `p(0) = 0` makes `p(A)` normal
//! (resp. `A q(A)` unitary with `p(z) = z q(z)`).  Restricting to zero
//! constant terms loses nothing: adding a constant never changes normality,
//! and an invertible unitary image forces the factored form.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkernel::matrix::CMatrix;
use crate::numkernel::poly::{poly_eval, MonicPoly};
use crate::numkernel::{lu, qr, rng, schur, spectrum, svd};
use rand::Rng;

/// Relative certification threshold for the normal-commutator defect.
pub const NORMAL_TOL: f64 = 1e-8;
/// Certification threshold for the unitary singular-value defect.
pub const UNITARY_TOL: f64 = 1e-6;

/// Outcome of a polynomial-class search.
#[derive(Clone, Debug)]
pub struct ClassReport {
    /// Which class was searched: "normal" or "unitary".
    pub class_name: &'static str,
    /// Degree of the achieved polynomial `p`.
    pub degree: usize,
    /// Monic normalization of the achieved `p` (constant term exactly 0).
    pub poly: MonicPoly,
    /// The achieved `p` itself, low-to-high coefficients (constant term 0).
    pub coeffs: Vec<Complex64>,
    /// Achieved residual: commutator norm for "normal", singular-value
    /// distance from 1 for "unitary".
    pub defect: f64,
    /// Eigenvalue lower bound `max_λ ||λ q(λ)| - 1|` for the unitary class
    /// (never exceeds the defect); 0 for the normal class.
    pub eigen_lower_bound: f64,
    /// Whether the defect beat the class tolerance.
    pub certified: bool,
}

/// Minimal polynomial of `A`: the monic polynomial of smallest degree `d`
/// with `p(A) = 0`, found by a rank test on the vectorized scaled powers
/// `I, A, A², …` — the first power that is a combination of its
/// predecessors (relative residual ≤ `tol`) yields the coefficients.
/// The result satisfies `||p(A)|| ≤ tol · max_k ||A^k||`.
pub fn minimal_polynomial(a: &CMatrix, tol: f64) -> Result<MonicPoly> {
    if !a.is_square() {
        return Err(Error::Dimension("minimal polynomial of a non-square matrix".into()));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(MonicPoly::new(Vec::new()));
    }
    let mut powers: Vec<CMatrix> = vec![CMatrix::eye(n)];
    let mut scales: Vec<f64> = vec![(n as f64).sqrt()];
    for d in 1..=n {
        let next = powers[d - 1].matmul(a);
        let scale = next.fro_norm().max(1e-300);
        powers.push(next);
        scales.push(scale);

        // least-squares fit of the scaled power d on the scaled powers < d
        let rows = n * n;
        let mut basis = CMatrix::zeros(rows, d);
        for k in 0..d {
            for (i, &v) in powers[k].data().iter().enumerate() {
                basis[(i, k)] = v / scales[k];
            }
        }
        let target: Vec<Complex64> =
            powers[d].data().iter().map(|&v| v / scales[d]).collect();
        let combo = qr::least_squares(&basis, &target);
        let mut residual = 0.0f64;
        for i in 0..rows {
            let mut fit = Complex64::new(0.0, 0.0);
            for k in 0..d {
                fit += basis[(i, k)] * combo[k];
            }
            residual += (target[i] - fit).norm_sqr();
        }
        if residual.sqrt() <= tol {
            // unscale: A^d = Σ combo_k (s_d / s_k) A^k, so the monic
            // coefficients are the negatives of those ratios
            let coeffs: Vec<Complex64> = (0..d)
                .map(|k| -combo[k] * (scales[d] / scales[k]))
                .collect();
            return Ok(MonicPoly::new(coeffs));
        }
    }
    // Cayley–Hamilton guarantees degree ≤ n; if nothing matched earlier the
    // eigenvalue product form is the fallback.
    let spec = spectrum::eigenvalues(a)?;
    Ok(MonicPoly::from_roots(&spec.eigenvalues))
}

/// Simplifying polynomial and its diagonalizability certificate.
#[derive(Clone, Debug)]
pub struct Simplifier {
    /// Monic normalization of `s(z) = ∫₀^z Π_j (ζ - λ_j)^{n_j - 1} dζ`,
    /// where `λ_j` are the distinct minimal-polynomial roots with
    /// multiplicities `n_j`; `s(A)` is diagonalizable.
    pub poly: MonicPoly,
    /// `||s(A) - V D V^{-1}|| / ||s(A)||` for the computed eigenbasis.
    pub diag_residual: f64,
    /// Condition number of the eigenvector matrix.
    pub cond_v: f64,
    /// True when the residual is ≤ 1e-6 with a trustworthy eigenbasis
    /// (`cond_v ≤ 1e6`).  A tiny residual with an enormous `cond_v` proves
    /// nothing: `V D V^{-1}` reconstructs even a defective matrix to within
    /// `ε · cond(V)`.
    pub certified: bool,
}

/// Builds the simplifying polynomial of `A` from its minimal polynomial:
/// integrating `Π (ζ - λ_j)^{n_j - 1}` knocks every multiplicity down to
/// one, so `s(A)` is diagonalizable.  Returns `z` (the identity map) when
/// the minimal polynomial already has simple roots.
pub fn simplifying_polynomial(a: &CMatrix) -> Result<Simplifier> {
    // The multiplicity of each eigenvalue in the minimal polynomial is the
    // height of its tallest Jordan block.  A height-k multiple eigenvalue
    // scatters like ε^{1/k} under the eigensolver, so no single clustering
    // tolerance recovers every structure; instead, the candidate from each
    // rung of a tolerance ladder is checked against the construction's own
    // certificate (the diagonalizability residual of s(A)) and the first
    // one that verifies wins.
    let scale = 1.0 + svd::op_norm(a)?;
    let mut best: Option<Simplifier> = None;
    for rel_tol in [1e-6, 1e-5, 1e-4, 1e-3, 1e-2] {
        let spec = spectrum::eigenvalues_with_tol(a, rel_tol * scale)?;
        let heights = spectrum::jordan_heights(a, &spec);
        let clusters: Vec<(Complex64, usize)> = spec
            .clusters
            .iter()
            .zip(heights.iter())
            .map(|(cl, &h)| (cl.center, h))
            .collect();

        let poly = if clusters.iter().all(|&(_, n)| n == 1) {
            MonicPoly::monomial(1)
        } else {
            // integrand Π (z - λ_j)^{n_j - 1}, monic-normalized integral
            let mut integrand = vec![Complex64::new(1.0, 0.0)];
            for &(root, mult) in &clusters {
                for _ in 1..mult {
                    integrand = crate::numkernel::poly::poly_mul(
                        &integrand,
                        &[-root, Complex64::new(1.0, 0.0)],
                    );
                }
            }
            let integral = crate::numkernel::poly::poly_integrate(&integrand);
            let lead = *integral.last().expect("nonempty integral");
            let mut coeffs: Vec<Complex64> = integral.iter().map(|&c| c / lead).collect();
            coeffs.pop();
            MonicPoly::new(coeffs)
        };

        let sa = poly.eval_matrix(a);
        let (vals, v) = schur::eigen_pairs(&sa)?;
        let sv = svd::singular_values(&v)?;
        let smin = sv.last().copied().unwrap_or(0.0);
        let cond_v = if smin > 0.0 { sv[0] / smin } else { f64::INFINITY };
        let diag_residual = if cond_v.is_finite() {
            let vinv = lu::lu_inverse(&v)?;
            let mut scaled = v.clone();
            for (j, &val) in vals.iter().enumerate() {
                for i in 0..scaled.rows() {
                    scaled[(i, j)] = scaled[(i, j)] * val;
                }
            }
            let recon = scaled.matmul(&vinv);
            svd::op_norm(&(&recon - &sa))? / svd::op_norm(&sa)?.max(1e-300)
        } else {
            f64::INFINITY
        };
        let candidate = Simplifier {
            poly,
            diag_residual,
            cond_v,
            certified: diag_residual <= 1e-6 && cond_v <= 1e6,
        };
        if candidate.certified {
            return Ok(candidate);
        }
        if best
            .as_ref()
            .map_or(true, |b| candidate.diag_residual < b.diag_residual)
        {
            best = Some(candidate);
        }
    }
    Ok(best.expect("ladder is nonempty"))
}

/// Frobenius norm of the self-commutator `[P, P*] = P P* - P* P`.
fn commutator_defect(p: &CMatrix) -> f64 {
    let k = &p.matmul(&p.adjoint()) - &p.adjoint().matmul(p);
    k.fro_norm()
}

/// Searches for a monic `p` of degree `d ≤ d_max` with `p(0) = 0` making
/// `p(A)` normal: for each degree, `ν(c) = ||[p(A), p(A)*]||_F²` is
/// minimized by Wirtinger gradient descent (5 deterministic restarts), and
/// the first degree whose defect falls below `1e-8 ||p(A)||_F²` certifies.
pub fn poly_normal_search(a: &CMatrix, d_max: usize) -> Result<ClassReport> {
    if !a.is_square() {
        return Err(Error::Dimension("class search on a non-square matrix".into()));
    }
    if d_max == 0 || d_max > a.rows().max(1) {
        return Err(Error::Domain(format!(
            "normal search degree must be in 1..={}, got {d_max}",
            a.rows()
        )));
    }
    let n = a.rows();
    let mut powers: Vec<CMatrix> = vec![CMatrix::eye(n)];
    for k in 1..=d_max {
        powers.push(powers[k - 1].matmul(a));
    }
    let anorm = svd::op_norm(a)?.max(1e-300);

    let mut best: Option<(f64, ClassReport)> = None;
    for d in 1..=d_max {
        let free = d - 1; // coefficients of z^1..z^{d-1}
        let assemble = |c: &[Complex64]| -> CMatrix {
            let mut p = powers[d].clone();
            for (j, &cj) in c.iter().enumerate() {
                for (dst, src) in p.data_mut().iter_mut().zip(powers[j + 1].data().iter()) {
                    *dst += cj * src;
                }
            }
            p
        };
        // ν and its Wirtinger gradient: with K = [P, P*],
        // ∂ν/∂c̄_j = 2 <A^{j+1}, K P - P K>_F
        let objective = |c: &[Complex64]| -> (f64, Vec<Complex64>) {
            let p = assemble(c);
            let k = &p.matmul(&p.adjoint()) - &p.adjoint().matmul(&p);
            let nu = k.data().iter().map(|z| z.norm_sqr()).sum::<f64>();
            let kp = &k.matmul(&p) - &p.matmul(&k);
            let mut grad = Vec::with_capacity(free);
            for j in 0..free {
                let mut g = Complex64::new(0.0, 0.0);
                for (aij, kij) in powers[j + 1].data().iter().zip(kp.data().iter()) {
                    g += aij.conj() * kij;
                }
                grad.push(2.0 * g);
            }
            (nu, grad)
        };

        let mut d_best: Option<(f64, Vec<Complex64>)> = None;
        for restart in 0..5 {
            let mut c: Vec<Complex64> = if restart == 0 {
                vec![Complex64::new(0.0, 0.0); free]
            } else {
                let mut r = rng::stream("normal-search", (d * 8 + restart) as u64);
                (0..free)
                    .map(|j| {
                        let re: f64 = r.gen_range(-1.0..1.0);
                        let im: f64 = r.gen_range(-1.0..1.0);
                        Complex64::new(re, im) * anorm.powi((d - 1 - j) as i32)
                    })
                    .collect()
            };
            let (mut val, mut grad) = objective(&c);
            if free > 0 {
                let mut step = 1.0;
                for _ in 0..300 {
                    let gn2: f64 = grad.iter().map(|g| g.norm_sqr()).sum();
                    if gn2.sqrt() <= 1e-14 * (1.0 + val) {
                        break;
                    }
                    // Armijo backtracking on the Wirtinger descent direction
                    let mut accepted = false;
                    for _ in 0..40 {
                        let trial: Vec<Complex64> = c
                            .iter()
                            .zip(grad.iter())
                            .map(|(&ci, &gi)| ci - gi * step)
                            .collect();
                        let (tval, tgrad) = objective(&trial);
                        if tval <= val - 1e-4 * step * gn2 {
                            c = trial;
                            val = tval;
                            grad = tgrad;
                            step *= 1.5;
                            accepted = true;
                            break;
                        }
                        step *= 0.5;
                    }
                    if !accepted {
                        break;
                    }
                }
            }
            if d_best.as_ref().map_or(true, |(bv, _)| val < *bv) {
                d_best = Some((val, c));
            }
        }
        let (_, c) = d_best.expect("at least one restart ran");
        let p = assemble(&c);
        let defect = commutator_defect(&p);
        let pnorm2 = p.data().iter().map(|z| z.norm_sqr()).sum::<f64>();
        // an annihilating p (p(A) ≈ 0) is vacuously normal and certifies
        // nothing: the commutator must be small relative to ||p(A)||²
        let pscale: f64 = powers[1..=d].iter().map(|m| m.fro_norm()).fold(1e-300, f64::max);
        let degenerate = pnorm2.sqrt() <= 1e-10 * pscale;
        let rel_defect =
            if degenerate { f64::INFINITY } else { defect / pnorm2 };
        let certified = !degenerate && defect < NORMAL_TOL * pnorm2;

        let mut coeffs = vec![Complex64::new(0.0, 0.0)];
        coeffs.extend_from_slice(&c);
        coeffs.push(Complex64::new(1.0, 0.0));
        let mut monic = coeffs.clone();
        monic.pop();
        let report = ClassReport {
            class_name: "normal",
            degree: d,
            poly: MonicPoly::new(monic),
            coeffs,
            defect,
            eigen_lower_bound: 0.0,
            certified,
        };
        if certified {
            return Ok(report);
        }
        if best.as_ref().map_or(true, |(r, _)| rel_defect < *r) {
            best = Some((rel_defect, report));
        }
    }
    let (_, mut out) = best.expect("at least one degree searched");
    out.certified = false;
    Ok(out)
}

/// Searches for `q` of degree < `d_max` making `A q(A)` unitary, reporting
/// `p(z) = z q(z)`.  The defect is the singular-value distance
/// `max_i |σ_i(A q(A)) - 1|` (the true distance to the unitary group),
/// minimized by subgradient descent from 7 deterministic starts per degree
/// — including, when `A` is invertible through its minimal polynomial, the
/// algebraic candidate with `q(A) = A^{-1}`.  The spectral lower bound
/// `max_λ ||λ q(λ)| - 1| ≤ defect` is evaluated and reported.
pub fn poly_unitary_search(a: &CMatrix, d_max: usize) -> Result<ClassReport> {
    if !a.is_square() {
        return Err(Error::Dimension("class search on a non-square matrix".into()));
    }
    if d_max == 0 {
        return Err(Error::Domain("unitary search needs d_max ≥ 1".into()));
    }
    let n = a.rows();
    let sv = svd::singular_values(a)?;
    let smin = sv.last().copied().unwrap_or(0.0);
    if smin <= 1e-12 * sv.first().copied().unwrap_or(1.0) {
        return Err(Error::NotInvertible("a unitary polynomial image of a matrix"));
    }
    let anorm = sv[0];
    let mut powers: Vec<CMatrix> = vec![a.clone()]; // powers[j] = A^{j+1}
    for j in 1..d_max {
        let next = powers[j - 1].matmul(a);
        powers.push(next);
    }
    let spec = spectrum::eigenvalues(a)?;

    // algebraic candidate: q(z) = (1 - m(z)/m(0)) / z has q(A) = A^{-1}
    let minimal = minimal_polynomial(a, 1e-10)?;
    let alg_q: Option<Vec<Complex64>> = {
        let full = minimal.full_coeffs();
        let m0 = full[0];
        if m0.norm() > 1e-12 {
            // (1 - m(z)/m0) has zero constant term; divide by z
            Some(full[1..].iter().map(|&c| -c / m0).collect())
        } else {
            None
        }
    };

    let mut best: Option<(f64, Vec<Complex64>, usize)> = None; // (defect, q, deg_q)
    for deg_q in 0..d_max {
        let width = deg_q + 1;
        let assemble = |q: &[Complex64]| -> CMatrix {
            let mut m = CMatrix::zeros(n, n);
            for (j, &qj) in q.iter().enumerate() {
                for (dst, src) in m.data_mut().iter_mut().zip(powers[j].data().iter()) {
                    *dst += qj * src;
                }
            }
            m
        };
        let defect_and_grad = |q: &[Complex64]| -> Result<(f64, Vec<Complex64>)> {
            let m = assemble(q);
            let f = svd::svd(&m)?;
            let top = f.sigma[0];
            let bottom = *f.sigma.last().expect("nonempty spectrum");
            let (value, col, sign) = if top - 1.0 >= 1.0 - bottom {
                (top - 1.0, 0, 1.0)
            } else {
                (1.0 - bottom, f.sigma.len() - 1, -1.0)
            };
            let u = f.u.col(col);
            let v = f.v.col(col);
            let mut grad = Vec::with_capacity(width);
            for p in powers.iter().take(width) {
                let pv = p.matvec(&v);
                let mut uh_pv = Complex64::new(0.0, 0.0);
                for (ui, pi) in u.iter().zip(pv.iter()) {
                    uh_pv += ui.conj() * pi;
                }
                grad.push(Complex64::new(sign, 0.0) * uh_pv.conj());
            }
            Ok((value, grad))
        };

        let mut starts: Vec<Vec<Complex64>> = Vec::new();
        if let Some(qa) = &alg_q {
            if qa.len() == width {
                starts.push(qa.clone());
            }
        }
        let mut base = vec![Complex64::new(0.0, 0.0); width];
        base[deg_q] = Complex64::new(1.0 / anorm.powi(width as i32), 0.0);
        starts.push(base);
        while starts.len() < 7 {
            let salt = (deg_q * 16 + starts.len()) as u64;
            let mut r = rng::stream("unitary-search", salt);
            starts.push(
                (0..width)
                    .map(|j| {
                        let re: f64 = r.gen_range(-1.0..1.0);
                        let im: f64 = r.gen_range(-1.0..1.0);
                        Complex64::new(re, im) / anorm.powi(j as i32 + 1)
                    })
                    .collect(),
            );
        }

        for start in starts {
            let mut q = start;
            let (mut val, mut grad) = defect_and_grad(&q)?;
            let mut best_q = q.clone();
            let mut best_val = val;
            let mut step = 0.5 / (1.0 + anorm);
            for it in 0..250 {
                let gn2: f64 = grad.iter().map(|g| g.norm_sqr()).sum();
                if gn2.sqrt() < 1e-14 || val < 1e-13 {
                    break;
                }
                // Polyak-flavoured step on the subgradient, with decay
                let t = step * val / gn2.max(1e-300);
                let trial: Vec<Complex64> =
                    q.iter().zip(grad.iter()).map(|(&qi, &gi)| qi - gi * t).collect();
                let (tval, tgrad) = defect_and_grad(&trial)?;
                q = trial;
                val = tval;
                grad = tgrad;
                if val < best_val {
                    best_val = val;
                    best_q = q.clone();
                }
                if it % 50 == 49 {
                    step *= 0.5;
                }
            }
            if best.as_ref().map_or(true, |(bv, _, _)| best_val < *bv) {
                best = Some((best_val, best_q, deg_q));
            }
        }
    }

    let (defect, q, deg_q) = best.expect("at least one degree searched");
    let eigen_lower_bound = spec
        .eigenvalues
        .iter()
        .map(|&lam| ((lam * poly_eval(&q, lam)).norm() - 1.0).abs())
        .fold(0.0, f64::max);

    // p(z) = z q(z): low-to-high, constant term exactly zero
    let mut coeffs = vec![Complex64::new(0.0, 0.0)];
    coeffs.extend_from_slice(&q);
    let lead = *coeffs.last().expect("nonempty");
    let monic: Vec<Complex64> = if lead.norm() > 1e-300 {
        let mut m: Vec<Complex64> = coeffs.iter().map(|&c| c / lead).collect();
        m.pop();
        m
    } else {
        vec![Complex64::new(0.0, 0.0); deg_q + 1]
    };
    Ok(ClassReport {
        class_name: "unitary",
        degree: deg_q + 1,
        poly: MonicPoly::new(monic),
        coeffs,
        defect,
        eigen_lower_bound,
        certified: defect < UNITARY_TOL,
    })
}

/// Inverse produced by a near-unitary polynomial image.
#[derive(Clone, Debug)]
pub struct InverseReport {
    /// `q(A) q(A)* A*`, which inverts `A` when `A q(A)` is unitary.
    pub inverse: CMatrix,
    /// `||A · inverse - 1||`.
    pub residual: f64,
    /// Unitary defect of `A q(A)` that justified the construction.
    pub defect: f64,
}

/// Explicit inverse from a certified unitary polynomial: with `U = A q(A)`
/// unitary, `A^{-1} = q(A) q(A)* A*`.  Requires the defect of `U` to be at
/// most `1e-6`; the residual obeys `||A·inv - 1|| ≤ 10 · defect · max(1, ||U||)`.
pub fn unitary_inverse(a: &CMatrix, q: &[Complex64]) -> Result<InverseReport> {
    if !a.is_square() {
        return Err(Error::Dimension("inverting a non-square matrix".into()));
    }
    let n = a.rows();
    let mut qa = CMatrix::zeros(n, n);
    let mut power = CMatrix::eye(n);
    for &qj in q {
        for (dst, src) in qa.data_mut().iter_mut().zip(power.data().iter()) {
            *dst += qj * src;
        }
        power = power.matmul(a);
    }
    let u = a.matmul(&qa);
    let sv = svd::singular_values(&u)?;
    let defect = sv
        .iter()
        .map(|&s| (s - 1.0).abs())
        .fold(0.0, f64::max);
    if defect > UNITARY_TOL {
        return Err(Error::Domain(format!(
            "unitary defect {defect:.3e} exceeds the 1e-6 contract for the \
             explicit inverse"
        )));
    }
    let inverse = qa.matmul(&qa.adjoint()).matmul(&a.adjoint());
    let eye = CMatrix::eye(n);
    let residual = svd::op_norm(&(&a.matmul(&inverse) - &eye))?;
    let budget = 10.0 * defect.max(f64::EPSILON) * sv[0].max(1.0);
    if residual > budget {
        return Err(Error::NoConvergence(
            "explicit inverse residual exceeded its defect budget",
        ));
    }
    Ok(InverseReport { inverse, residual, defect })
}

/// Mean-square and flatness data for a polynomial on the unit circle.
#[derive(Clone, Debug)]
pub struct CircleFlatReport {
    /// `Σ |coeff|²`: the exact mean square of `|q|` on the circle.
    pub mean_square: f64,
    /// Trapezoidal estimate of the same integral.
    pub quadrature_mean_square: f64,
    /// Max of `|q|` over the quadrature nodes.
    pub max_modulus: f64,
    pub nodes: usize,
    /// True when `q` is a single monomial (flat modulus on the circle).
    pub is_flat: bool,
}

/// Checks the circle mean-square identity `(1/2π)∫|q(e^{iθ})|² = Σ|coeff|²`
/// by comparing the coefficient formula against quadrature, and reports the
/// maximum modulus.  A monic `q` with any nonzero lower coefficient has
/// mean square strictly above 1 — hence maximum strictly above 1 — so only
/// the flat monomials `αz^k` with `|α| = 1` keep the circle image on the
/// unit circle.
pub fn circle_flat_check(q: &[Complex64], nodes: usize) -> Result<CircleFlatReport> {
    if q.is_empty() || q.iter().all(|c| c.norm() == 0.0) {
        return Err(Error::Domain("circle check needs a nonzero polynomial".into()));
    }
    if nodes < 2 * q.len() {
        return Err(Error::Domain(
            "circle quadrature needs at least twice as many nodes as coefficients".into(),
        ));
    }
    let mean_square: f64 = q.iter().map(|c| c.norm_sqr()).sum();
    let mut quad = 0.0;
    let mut max_modulus = 0.0f64;
    for m in 0..nodes {
        let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * m as f64 / nodes as f64);
        let val = poly_eval(q, z).norm();
        quad += val * val;
        max_modulus = max_modulus.max(val);
    }
    let quadrature_mean_square = quad / nodes as f64;
    let nonzero = q.iter().filter(|c| c.norm() > 0.0).count();
    Ok(CircleFlatReport {
        mean_square,
        quadrature_mean_square,
        max_modulus,
        nodes,
        is_flat: nonzero == 1,
    })
}

/// Linear-resolvent-growth data: the best constant observed on a grid.
#[derive(Clone, Debug)]
pub struct LrgReport {
    /// `sup over grid of dist(λ, σ(A)) · ||(λ-A)^{-1}||`.
    pub constant: f64,
    /// Per-ring maxima, nearest ring last (ring `k` sits at distance
    /// `2^{-k}` times the local spectral scale).
    pub ring_maxima: Vec<f64>,
    /// True when the constant keeps growing as the rings tighten
    /// (non-trivial Jordan structure shows itself this way).
    pub unbounded_trend: bool,
}

/// Measures `dist(λ, σ(A)) · ||(λ - A)^{-1}||` over a grid of sample
/// points.  With no explicit grid, 8 rings of 16 points are placed around
/// every distinct eigenvalue at distances `2^{-k}` times the local
/// spectral scale (the gap to the nearest other eigenvalue, or `1 + ||A||`
/// for a lone one).  Normal matrices give exactly 1; diagonalizable ones
/// are bounded by the eigenbasis condition number.  Grid points landing
/// within `1e-8` of the spectrum are skipped with a warning.
pub fn lrg_constant(a: &CMatrix, grid: Option<&[Complex64]>) -> Result<LrgReport> {
    let spec = spectrum::eigenvalues(a)?;
    if spec.eigenvalues.is_empty() {
        return Err(Error::Domain("resolvent growth of an empty matrix".into()));
    }
    let dist_to_spec = |z: Complex64| -> f64 {
        spec.eigenvalues
            .iter()
            .map(|&e| (z - e).norm())
            .fold(f64::INFINITY, f64::min)
    };
    let anorm = spec.eigenvalues[0].norm().max(1.0);
    let eye = CMatrix::eye(a.rows());

    let mut rings: Vec<Vec<Complex64>> = Vec::new();
    match grid {
        Some(points) => rings.push(points.to_vec()),
        None => {
            let centers: Vec<Complex64> = spec.clusters.iter().map(|c| c.center).collect();
            for k in 1..=8 {
                let mut ring = Vec::new();
                for (i, &c) in centers.iter().enumerate() {
                    let local = centers
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, &o)| (c - o).norm())
                        .fold(f64::INFINITY, f64::min);
                    let scale = if local.is_finite() { local } else { 1.0 + anorm };
                    let radius = scale * 2f64.powi(-k);
                    for t in 0..16 {
                        let phase = 2.0 * std::f64::consts::PI * t as f64 / 16.0;
                        ring.push(c + Complex64::from_polar(radius, phase));
                    }
                }
                rings.push(ring);
            }
        }
    }

    let mut constant = 0.0f64;
    let mut ring_maxima = Vec::with_capacity(rings.len());
    for ring in &rings {
        let mut ring_max = 0.0f64;
        for &z in ring {
            let dist = dist_to_spec(z);
            if dist < 1e-8 {
                eprintln!(
                    "lrg_constant: grid point {z} within 1e-8 of the spectrum, skipped"
                );
                continue;
            }
            let shifted = CMatrix::from_fn(a.rows(), a.rows(), |i, j| {
                z * eye[(i, j)] - a[(i, j)]
            });
            let res_norm = svd::op_norm(&lu::lu_inverse(&shifted)?)?;
            ring_max = ring_max.max(dist * res_norm);
        }
        ring_maxima.push(ring_max);
        constant = constant.max(ring_max);
    }
    let unbounded_trend = ring_maxima.len() >= 4 && {
        let last = ring_maxima[ring_maxima.len() - 1];
        let mid = ring_maxima[ring_maxima.len() / 2];
        last > 2.0 * mid && last > 4.0
    };
    Ok(LrgReport { constant, ring_maxima, unbounded_trend })
}

/// Power norms over a symmetric range of exponents.
#[derive(Clone, Debug)]
pub struct PowerScan {
    /// `||A^n||` for `n = 1..=N`.
    pub norms_pos: Vec<f64>,
    /// `||A^{-n}||` for `n = 1..=N`, when `A` is invertible.
    pub norms_neg: Option<Vec<f64>>,
    pub sup_pos: f64,
    /// `None` when the negative scan was skipped (singular input).
    pub sup_neg: Option<f64>,
    /// True when the positive norms are still climbing at the end of the
    /// range (growth typical of nontrivial Jordan structure).
    pub unbounded_trend: bool,
}

/// Records `||A^n||` for `n = 1..=N` and, when `A` is invertible,
/// `||A^{-n}||` as well.  Bounded two-sided scans are the finite-scale
/// shadow of similarity to a unitary.
pub fn power_bounded_scan(a: &CMatrix, n_range: usize) -> Result<PowerScan> {
    if !a.is_square() {
        return Err(Error::Dimension("power scan of a non-square matrix".into()));
    }
    if n_range == 0 {
        return Err(Error::Domain("power scan needs a positive range".into()));
    }
    let mut norms_pos = Vec::with_capacity(n_range);
    let mut power = a.clone();
    norms_pos.push(svd::op_norm(&power)?);
    for _ in 1..n_range {
        power = power.matmul(a);
        norms_pos.push(svd::op_norm(&power)?);
    }
    let sup_pos = norms_pos.iter().fold(0.0f64, |acc, &x| acc.max(x));

    let sv = svd::singular_values(a)?;
    let invertible = sv.last().copied().unwrap_or(0.0) > 1e-12 * sv[0].max(1e-300);
    let (norms_neg, sup_neg) = if invertible {
        let ainv = lu::lu_inverse(a)?;
        let mut norms = Vec::with_capacity(n_range);
        let mut power = ainv.clone();
        norms.push(svd::op_norm(&power)?);
        for _ in 1..n_range {
            power = power.matmul(&ainv);
            norms.push(svd::op_norm(&power)?);
        }
        let sup = norms.iter().fold(0.0f64, |acc, &x| acc.max(x));
        (Some(norms), Some(sup))
    } else {
        (None, None)
    };

    let unbounded_trend = n_range >= 4 && {
        let last = norms_pos[n_range - 1];
        let mid = norms_pos[n_range / 2];
        last > 1.5 * mid && last > 2.0
    };
    Ok(PowerScan { norms_pos, norms_neg, sup_pos, sup_neg, unbounded_trend })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn minimal_polynomial_of_nilpotent_block() {
        let a = synth::jordan_block(c(0.0, 0.0), 3);
        let m = minimal_polynomial(&a, 1e-10).unwrap();
        assert_eq!(m.degree(), 3);
        for cf in m.coeffs() {
            assert!(cf.norm() < 1e-10);
        }
    }

    #[test]
    fn minimal_polynomial_ignores_repetition() {
        let a = CMatrix::diag(&[c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
        let m = minimal_polynomial(&a, 1e-10).unwrap();
        assert_eq!(m.degree(), 2);
        // (z-1)(z-2) = z² - 3z + 2
        assert!((m.coeffs()[0] - c(2.0, 0.0)).norm() < 1e-9);
        assert!((m.coeffs()[1] - c(-3.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn minimal_polynomial_of_circulant() {
        // 4-cycle permutation: minimal polynomial z⁴ - 1
        let mut a = CMatrix::zeros(4, 4);
        for j in 0..4 {
            a[((j + 1) % 4, j)] = c(1.0, 0.0);
        }
        let m = minimal_polynomial(&a, 1e-10).unwrap();
        assert_eq!(m.degree(), 4);
        assert!((m.coeffs()[0] - c(-1.0, 0.0)).norm() < 1e-9);
        for k in 1..4 {
            assert!(m.coeffs()[k].norm() < 1e-9);
        }
    }

    #[test]
    fn minimal_polynomial_annihilates_structured_suite() {
        let mut r = rng::stream("minpoly-suite", 0);
        for trial in 0..100 {
            let n = 3 + trial % 6;
            let a = if trial % 3 == 0 {
                synth::jordan_structured(
                    &[(c(0.5, 0.2), 2), (c(-0.3, 0.0), (n - 2).max(1))],
                    0.2,
                    &mut r,
                )
            } else {
                synth::mild_similarity(n, 0.3, &mut r)
            };
            let m = minimal_polynomial(&a, 1e-10).unwrap();
            let pa = m.eval_matrix(&a);
            let mut max_power_norm = 1.0f64;
            let mut pw = CMatrix::eye(a.rows());
            for _ in 0..m.degree() {
                pw = pw.matmul(&a);
                max_power_norm = max_power_norm.max(pw.fro_norm());
            }
            assert!(
                pa.fro_norm() <= 1e-8 * max_power_norm,
                "trial {trial}: residual {} vs scale {max_power_norm}",
                pa.fro_norm()
            );
        }
    }

    #[test]
    fn simplifier_flattens_jordan_block() {
        let a = synth::jordan_block(c(2.0, 0.0), 4);
        let s = simplifying_polynomial(&a).unwrap();
        // s(z) = (z-2)⁴ monic-normalized; s(A) is a scalar matrix
        assert_eq!(s.poly.degree(), 4);
        let sa = s.poly.eval_matrix(&a);
        let scalar = sa[(0, 0)];
        let eye_scaled = CMatrix::eye(4).map(|z| z * scalar);
        assert!(svd::op_norm(&(&sa - &eye_scaled)).unwrap() < 1e-9);
        assert!(s.certified, "residual {}", s.diag_residual);
    }

    #[test]
    fn simplifier_is_identity_for_diagonalizable() {
        let mut r = rng::stream("simplifier-diag", 0);
        let (a, _) = synth::with_eigenvalues(
            &[c(1.0, 0.0), c(-0.5, 0.3), c(0.2, -0.7), c(2.0, 1.0)],
            0.4,
            &mut r,
        );
        let s = simplifying_polynomial(&a).unwrap();
        assert_eq!(s.poly.degree(), 1);
        assert!(s.poly.coeffs()[0].norm() < 1e-12);
        assert!(s.certified);
    }

    #[test]
    fn simplifier_handles_mixed_blocks() {
        let mut r = rng::stream("simplifier-mixed", 0);
        let a = synth::jordan_structured(&[(c(1.0, 0.0), 2), (c(-1.0, 0.0), 3)], 0.1, &mut r);
        let s = simplifying_polynomial(&a).unwrap();
        // integrand (z-1)(z+1)², integral degree 4
        assert_eq!(s.poly.degree(), 4);
        assert!(s.certified, "residual {} cond {}", s.diag_residual, s.cond_v);
    }

    #[test]
    fn normal_search_stops_at_degree_one_for_normal() {
        let mut r = rng::stream("normal-d1", 0);
        let u = synth::random_unitary(5, &mut r);
        let d = CMatrix::diag(&[c(1.0, 0.0), c(-2.0, 0.5), c(0.3, 0.0), c(0.0, 1.5), c(2.0, 2.0)]);
        let a = u.matmul(&d).matmul(&u.adjoint());
        let rep = poly_normal_search(&a, 3).unwrap();
        assert!(rep.certified);
        assert_eq!(rep.degree, 1);
        assert_eq!(rep.coeffs[0], c(0.0, 0.0));
    }

    #[test]
    fn normal_search_finds_square_for_shifted_chain() {
        // tridiagonal shift plus alternating imaginary diagonal: the square
        // is exactly Hermitian, the matrix itself is not normal
        let n = 16;
        let mut a = CMatrix::zeros(n, n);
        for j in 0..n - 1 {
            a[(j + 1, j)] = c(1.0, 0.0);
            a[(j, j + 1)] = c(1.0, 0.0);
        }
        for j in 0..n {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            a[(j, j)] = c(0.0, 0.35 * sign);
        }
        let rep = poly_normal_search(&a, 2).unwrap();
        assert!(rep.certified, "defect {}", rep.defect);
        assert_eq!(rep.degree, 2);
        // the witness is essentially z² (the linear coefficient vanishes)
        assert!(rep.coeffs[1].norm() < 1e-5, "c1 = {}", rep.coeffs[1]);
    }

    #[test]
    fn normal_search_rejects_jordan_block() {
        let a = synth::jordan_block(c(0.0, 0.0), 2);
        let rep = poly_normal_search(&a, 2).unwrap();
        assert!(!rep.certified);
        // brute-force corroboration: relative to ||p(A)||², no monic
        // z² + c₁z comes close to normal (A² = 0, so p(A) = c₁A and the
        // relative commutator is a positive constant along the whole grid)
        let mut brute_min = f64::INFINITY;
        for re in -8..=8 {
            for im in -8..=8 {
                let c1 = c(re as f64 * 0.25, im as f64 * 0.25);
                let p = &a.matmul(&a) + &a.map(|z| z * c1);
                let pnorm2 = p.data().iter().map(|z| z.norm_sqr()).sum::<f64>();
                if pnorm2.sqrt() <= 1e-10 {
                    continue; // annihilating: vacuous, excluded
                }
                brute_min = brute_min.min(commutator_defect(&p) / pnorm2);
            }
        }
        assert!(brute_min > 1e-3, "grid minimum {brute_min}");
    }

    #[test]
    fn normal_certified_degree_is_scale_invariant() {
        let n = 12;
        let mut a = CMatrix::zeros(n, n);
        for j in 0..n - 1 {
            a[(j + 1, j)] = c(1.0, 0.0);
            a[(j, j + 1)] = c(1.0, 0.0);
        }
        for j in 0..n {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            a[(j, j)] = c(0.0, 0.5 * sign);
        }
        let base = poly_normal_search(&a, 3).unwrap();
        for scale in [c(2.0, 0.0), c(0.0, 1.0)] {
            let scaled = a.map(|z| z * scale);
            let rep = poly_normal_search(&scaled, 3).unwrap();
            assert_eq!(rep.certified, base.certified, "scale {scale}");
            assert_eq!(rep.degree, base.degree, "scale {scale}");
        }
    }

    #[test]
    fn normal_gradient_matches_finite_differences() {
        let mut r = rng::stream("normal-fd", 0);
        let a = synth::gaussian_matrix(5, 5, &mut r);
        let powers: Vec<CMatrix> = {
            let mut p = vec![CMatrix::eye(5)];
            for k in 1..=3 {
                let next = p[k - 1].matmul(&a);
                p.push(next);
            }
            p
        };
        let assemble = |cs: &[Complex64]| -> CMatrix {
            let mut p = powers[3].clone();
            for (j, &cj) in cs.iter().enumerate() {
                for (dst, src) in p.data_mut().iter_mut().zip(powers[j + 1].data().iter()) {
                    *dst += cj * src;
                }
            }
            p
        };
        let nu = |cs: &[Complex64]| -> f64 {
            let p = assemble(cs);
            let k = &p.matmul(&p.adjoint()) - &p.adjoint().matmul(&p);
            k.data().iter().map(|z| z.norm_sqr()).sum()
        };
        let cs = vec![c(0.3, -0.2), c(-0.1, 0.4)];
        // analytic Wirtinger gradient
        let p = assemble(&cs);
        let k = &p.matmul(&p.adjoint()) - &p.adjoint().matmul(&p);
        let kp = &k.matmul(&p) - &p.matmul(&k);
        let mut grad = Vec::new();
        for j in 0..2 {
            let mut g = Complex64::new(0.0, 0.0);
            for (aij, kij) in powers[j + 1].data().iter().zip(kp.data().iter()) {
                g += aij.conj() * kij;
            }
            grad.push(2.0 * g);
        }
        // finite differences: dν = 2 Re <grad, dc>
        let h = 1e-6;
        for j in 0..2 {
            for dir in [c(1.0, 0.0), c(0.0, 1.0)] {
                let mut plus = cs.clone();
                plus[j] += dir * h;
                let mut minus = cs.clone();
                minus[j] -= dir * h;
                let fd = (nu(&plus) - nu(&minus)) / (2.0 * h);
                let analytic = 2.0 * (grad[j].conj() * dir).re;
                assert!(
                    (fd - analytic).abs() <= 1e-4 * (1.0 + fd.abs()),
                    "coeff {j} dir {dir}: fd {fd} vs analytic {analytic}"
                );
            }
        }
    }

    #[test]
    fn unitary_search_accepts_unitary_input() {
        let mut r = rng::stream("unitary-d0", 0);
        let a = synth::random_unitary(5, &mut r);
        let rep = poly_unitary_search(&a, 2).unwrap();
        assert!(rep.certified, "defect {}", rep.defect);
        assert!(rep.eigen_lower_bound <= rep.defect + 1e-9);
        assert_eq!(rep.coeffs[0], c(0.0, 0.0));
    }

    #[test]
    fn unitary_search_uses_algebraic_inverse() {
        // permutation two-cycle plus a phase: algebraic with m(0) ≠ 0
        let mut a = CMatrix::zeros(3, 3);
        a[(0, 1)] = c(1.0, 0.0);
        a[(1, 0)] = c(1.0, 0.0);
        a[(2, 2)] = Complex64::from_polar(1.0, 0.7);
        let rep = poly_unitary_search(&a, 3).unwrap();
        assert!(rep.certified, "defect {}", rep.defect);
        assert!(rep.defect <= 1e-8, "defect {}", rep.defect);
        assert!(rep.eigen_lower_bound <= rep.defect + 1e-9);
    }

    #[test]
    fn unitary_search_rejects_singular_input() {
        let a = synth::jordan_block(c(0.0, 0.0), 4);
        match poly_unitary_search(&a, 3) {
            Err(Error::NotInvertible(_)) => {}
            other => panic!("expected invertibility error, got {other:?}"),
        }
    }

    #[test]
    fn truncated_shift_stays_far_from_identity() {
        // least-squares over q cannot bring S q(S) near the identity: the
        // first column of S q(S) is orthogonal to e₁, forcing norm ≥ 1
        let n = 64;
        let mut s = CMatrix::zeros(n, n);
        for j in 0..n - 1 {
            s[(j + 1, j)] = c(1.0, 0.0);
        }
        let dmax = 6;
        let rows = n * n;
        let mut basis = CMatrix::zeros(rows, dmax);
        let mut power = s.clone();
        for k in 0..dmax {
            for (i, &v) in power.data().iter().enumerate() {
                basis[(i, k)] = v;
            }
            power = power.matmul(&s);
        }
        let eye = CMatrix::eye(n);
        let target: Vec<Complex64> = eye.data().to_vec();
        let combo = qr::least_squares(&basis, &target);
        let mut sq = CMatrix::zeros(n, n);
        let mut power = s.clone();
        for k in 0..dmax {
            for (dst, src) in sq.data_mut().iter_mut().zip(power.data().iter()) {
                *dst += combo[k] * src;
            }
            power = power.matmul(&s);
        }
        let dist = svd::op_norm(&(&sq - &eye)).unwrap();
        assert!(dist > 0.95, "distance {dist}");
    }

    #[test]
    fn explicit_inverse_from_unitary_witness() {
        let mut r = rng::stream("unitary-inverse", 0);
        let a = synth::random_unitary(4, &mut r);
        let q = [c(1.0, 0.0)]; // q = 1: U = A itself
        let rep = unitary_inverse(&a, &q).unwrap();
        assert!(rep.residual < 1e-10);
        let diff = svd::op_norm(&(&rep.inverse - &a.adjoint())).unwrap();
        assert!(diff < 1e-10);
    }

    #[test]
    fn explicit_inverse_from_algebraic_witness() {
        let mut a = CMatrix::zeros(3, 3);
        a[(0, 1)] = c(1.0, 0.0);
        a[(1, 0)] = c(1.0, 0.0);
        a[(2, 2)] = Complex64::from_polar(1.0, -1.1);
        let rep = poly_unitary_search(&a, 3).unwrap();
        assert!(rep.certified);
        // coeffs = z·q: strip the zero constant to recover q
        let q = &rep.coeffs[1..];
        let inv = unitary_inverse(&a, q).unwrap();
        assert!(inv.residual <= 1e-7, "residual {}", inv.residual);
    }

    #[test]
    fn explicit_inverse_scalar_case() {
        let a = CMatrix::diag(&[c(2.0, 0.0), c(2.0, 0.0)]);
        let q = [c(0.5, 0.0)]; // q = 1/2 makes A q(A) the identity
        let rep = unitary_inverse(&a, &q).unwrap();
        let half_eye = CMatrix::eye(2).map(|z| z * c(0.5, 0.0));
        assert!(svd::op_norm(&(&rep.inverse - &half_eye)).unwrap() < 1e-12);
    }

    #[test]
    fn unitary_defect_dominates_eigenvalue_bound_on_suite() {
        let mut r = rng::stream("unitary-bound-suite", 0);
        for trial in 0..10 {
            let n = 3 + trial % 4;
            let a = synth::mild_similarity(n, 0.4, &mut r);
            match poly_unitary_search(&a, 3) {
                Ok(rep) => assert!(
                    rep.eigen_lower_bound <= rep.defect + 1e-9,
                    "trial {trial}: bound {} defect {}",
                    rep.eigen_lower_bound,
                    rep.defect
                ),
                Err(Error::NotInvertible(_)) => {}
                Err(e) => panic!("trial {trial}: {e}"),
            }
        }
    }

    #[test]
    fn circle_monomial_is_flat() {
        let rep = circle_flat_check(&[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 4096)
            .unwrap();
        assert!((rep.mean_square - 1.0).abs() < 1e-14);
        assert!((rep.max_modulus - 1.0).abs() < 1e-12);
        assert!(rep.is_flat);
    }

    #[test]
    fn circle_mean_square_identity() {
        // z² + 0.5: mean square 1.25
        let rep = circle_flat_check(&[c(0.5, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 4096).unwrap();
        assert!((rep.mean_square - 1.25).abs() < 1e-14);
        assert!(
            (rep.mean_square - rep.quadrature_mean_square).abs() < 1e-12,
            "quadrature {}",
            rep.quadrature_mean_square
        );
        assert!(rep.mean_square > 1.0);
        assert!(rep.max_modulus > 1.0);
        assert!(!rep.is_flat);
    }

    #[test]
    fn circle_linear_poly_peaks_at_two() {
        let rep = circle_flat_check(&[c(1.0, 0.0), c(1.0, 0.0)], 4096).unwrap();
        assert!((rep.max_modulus - 2.0).abs() < 1e-6);
        assert!(rep.max_modulus > 1.0);
    }

    #[test]
    fn lrg_constant_is_one_for_normal() {
        let mut r = rng::stream("lrg-normal", 0);
        let u = synth::random_unitary(4, &mut r);
        let d = CMatrix::diag(&[c(1.0, 0.0), c(-1.0, 0.5), c(0.3, -0.2), c(2.0, 0.0)]);
        let a = u.matmul(&d).matmul(&u.adjoint());
        let rep = lrg_constant(&a, None).unwrap();
        assert!((rep.constant - 1.0).abs() < 1e-6, "constant {}", rep.constant);
        assert!(!rep.unbounded_trend);
    }

    #[test]
    fn lrg_blows_up_on_jordan_block() {
        let a = synth::jordan_block(c(0.0, 0.0), 2);
        let rep = lrg_constant(&a, None).unwrap();
        assert!(rep.unbounded_trend, "rings {:?}", rep.ring_maxima);
        // closed form: at distance δ the product behaves like 1/δ
        let last = *rep.ring_maxima.last().unwrap();
        let first = rep.ring_maxima[0];
        assert!(last > 8.0 * first, "first {first} last {last}");
    }

    #[test]
    fn lrg_bounded_by_eigenbasis_condition() {
        let mut r = rng::stream("lrg-cond", 0);
        let (a, v) = synth::with_eigenvalues(
            &[c(1.0, 0.0), c(0.4, 0.3), c(-0.8, 0.1), c(0.0, -1.2)],
            0.6,
            &mut r,
        );
        let sv = svd::singular_values(&v).unwrap();
        let cond = sv[0] / sv.last().unwrap();
        let rep = lrg_constant(&a, None).unwrap();
        assert!(
            rep.constant <= cond * (1.0 + 1e-9),
            "constant {} cond {cond}",
            rep.constant
        );
    }

    #[test]
    fn power_scan_flat_for_unitary() {
        let mut r = rng::stream("power-unitary", 0);
        let a = synth::random_unitary(5, &mut r);
        let scan = power_bounded_scan(&a, 12).unwrap();
        assert!((scan.sup_pos - 1.0).abs() < 1e-9);
        assert!((scan.sup_neg.unwrap() - 1.0).abs() < 1e-9);
        assert!(!scan.unbounded_trend);
    }

    #[test]
    fn power_scan_on_weighted_cycle_sum() {
        // blocks n = 2..12 of weighted cyclic shifts with period-n powers
        // and peak norm 2: the direct sum keeps sup ||A^k|| = 2 for k ≤ 11
        let sizes: Vec<usize> = (2..=12).collect();
        let total: usize = sizes.iter().sum();
        let mut a = CMatrix::zeros(total, total);
        let mut offset = 0;
        for &n in &sizes {
            let r = 2f64.powf(-1.0 / (n as f64 - 1.0));
            for j in 0..n {
                let w = if j == n - 1 {
                    r.powi(n as i32 - 1)
                } else {
                    1.0 / r
                };
                a[(offset + (j + 1) % n, offset + j)] = c(w, 0.0);
            }
            offset += n;
        }
        let scan = power_bounded_scan(&a, 11).unwrap();
        for (k, &norm) in scan.norms_pos.iter().enumerate() {
            assert!((norm - 2.0).abs() < 1e-9, "k = {}: ||A^k|| = {norm}", k + 1);
        }
        assert!((scan.sup_pos - 2.0).abs() < 1e-9);
    }

    #[test]
    fn power_scan_flags_jordan_growth() {
        let a = synth::jordan_block(c(1.0, 0.0), 2);
        let scan = power_bounded_scan(&a, 16).unwrap();
        assert!(scan.unbounded_trend);
        // ||Aⁿ|| grows like n for this block
        assert!(scan.norms_pos[15] > 14.0 && scan.norms_pos[15] < 18.0);
    }
}
