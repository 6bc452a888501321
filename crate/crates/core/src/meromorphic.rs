//! Nevanlinna-style growth functions for matrix-valued functions.
//!
//! For `F(z) = (1 - zA)^{-1}` the proximity term `m(r)` averages
//! `log⁺ ||F||` over the circle `|z| = r`, the counting term `N(r)` sums
//! `log⁺(r/|b|)` over the poles `b` of `F` listed with multiplicities, and
//! the characteristic `T(r) = m(r) + N(r)` measures total growth.  A variant
//! `T₁` replaces `log⁺ ||·||` by the total logarithmic size
//! `s(·) = Σ log⁺ σ_j`, for which inversion `F ↔ F^{-1}` preserves the
//! characteristic exactly.  The slope of `T` against `log r` recovers the
//! degree of the minimal polynomial when no eigenvalue vanishes (a zero
//! eigenvalue trades one unit of pole counting for polynomial growth of the
//! entire part, lowering the slope by one).
//!
//! All logarithms are natural; `log⁺ x = max(log x, 0)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkernel::matrix::{vec_norm, CMatrix};
use crate::numkernel::{qr, schur, spectrum, svd};

/// Default quadrature node count for operations that do not take one.
pub const DEFAULT_NODES: usize = 1024;

fn log_plus(x: f64) -> f64 {
    if x > 1.0 {
        x.ln()
    } else {
        0.0
    }
}

/// Growth functionals sampled over a grid of radii.
#[derive(Clone, Debug)]
pub struct GrowthCurve {
    /// Increasing radii (nudged outward by 1e-6 relative on pole collision).
    pub radii: Vec<f64>,
    /// Circle average of `log⁺ ||F||` at each radius.
    pub m_inf: Vec<f64>,
    /// Pole counting term at each radius (exact, from eigenvalues).
    pub n_inf: Vec<f64>,
    /// `m_inf + n_inf`, elementwise.
    pub t_inf: Vec<f64>,
    /// Characteristic with the total-logarithmic-size proximity term, when
    /// the caller requested it.
    pub t_one: Option<Vec<f64>>,
    /// Quadrature node count used for the proximity terms.
    pub quadrature_nodes: usize,
}

/// Poles of a matrix-valued function, listed with multiplicities (a pole of
/// order `m` appears `m` times).  The normalization `F(0) = 1` excludes a
/// pole at the origin.
#[derive(Clone, Debug)]
pub struct PoleSet {
    poles: Vec<Complex64>,
}

impl PoleSet {
    /// Validates that no pole sits at (or numerically hugs) the origin.
    pub fn new(poles: Vec<Complex64>) -> Result<Self> {
        for b in &poles {
            if b.norm() <= 1e-300 {
                return Err(Error::Domain(
                    "pole set contains a pole at the origin; growth functions \
                     require F(0) = 1"
                        .into(),
                ));
            }
        }
        Ok(Self { poles })
    }

    /// Poles of the resolvent `(1 - zA)^{-1}`: `b = 1/lambda` over distinct
    /// nonzero eigenvalues, each listed with the order of the pole (the
    /// numerically observable local degree of the minimal polynomial).
    pub fn of_resolvent(a: &CMatrix) -> Result<Self> {
        let spec = spectrum::eigenvalues(a)?;
        let heights = spectrum::jordan_heights(a, &spec);
        let mut poles = Vec::new();
        for (cluster, order) in spec.clusters.iter().zip(heights) {
            if cluster.center.norm() <= spec.cluster_tol {
                continue; // zero eigenvalue: the resolvent is entire there
            }
            let b = cluster.center.inv();
            for _ in 0..order {
                poles.push(b);
            }
        }
        Ok(Self { poles })
    }

    pub fn poles(&self) -> &[Complex64] {
        &self.poles
    }

    pub fn is_empty(&self) -> bool {
        self.poles.is_empty()
    }

    /// The counting term `N(r) = Σ_j log⁺(r / |b_j|)`.
    pub fn counting(&self, r: f64) -> f64 {
        self.poles.iter().map(|b| log_plus(r / b.norm())).sum()
    }

    /// Smallest distance from `z` to any pole, `∞` when there are none.
    fn clearance(&self, z: Complex64) -> f64 {
        self.poles
            .iter()
            .map(|b| (z - b).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Moves `r` outward until it no longer coincides with a pole modulus
    /// (1e-6 relative steps).
    fn nudge_radius(&self, mut r: f64) -> f64 {
        loop {
            let collides = self
                .poles
                .iter()
                .any(|b| (r - b.norm()).abs() <= 1e-6 * b.norm());
            if !collides {
                return r;
            }
            r *= 1.0 + 1e-6;
        }
    }
}

/// Growth functions of the resolvent `F(z) = (1 - zA)^{-1}` over `radii`.
///
/// The proximity term is quadrature on `nodes` equispaced angles; resolvent
/// norms come from one Schur factorization of `A` and a triangular
/// smallest-singular-value solve per node, so the cost is one `O(n^3)`
/// factorization plus `O(nodes * n^2)` per radius.  The counting term is
/// exact from the eigenvalues.  A node landing within 1e-9 of a pole is
/// skipped (with a warning on stderr); the average is over the surviving
/// nodes.
pub fn resolvent_growth(a: &CMatrix, radii: &[f64], nodes: usize) -> Result<GrowthCurve> {
    if !a.is_square() {
        return Err(Error::Dimension("resolvent growth needs a square matrix".into()));
    }
    if radii.is_empty() || nodes == 0 {
        return Err(Error::Domain(
            "resolvent growth needs at least one radius and one node".into(),
        ));
    }
    for w in radii.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::Domain("radii must be strictly increasing".into()));
        }
    }
    if radii[0] <= 0.0 {
        return Err(Error::Domain("radii must be positive".into()));
    }
    let poles = PoleSet::of_resolvent(a)?;
    let t = schur::schur_factor(a, false)?.t;

    let mut out_radii = Vec::with_capacity(radii.len());
    let mut m_inf = Vec::with_capacity(radii.len());
    let mut n_inf = Vec::with_capacity(radii.len());
    let mut t_inf = Vec::with_capacity(radii.len());
    for &raw_r in radii {
        let r = poles.nudge_radius(raw_r);
        let (m, skipped) = proximity_resolvent(&t, &poles, r, nodes);
        if skipped > 0 {
            eprintln!(
                "resolvent_growth: skipped {skipped} of {nodes} quadrature nodes \
                 within 1e-9 of a pole at radius {r}"
            );
        }
        let nv = poles.counting(r);
        out_radii.push(r);
        m_inf.push(m);
        n_inf.push(nv);
        t_inf.push(m + nv);
    }
    Ok(GrowthCurve {
        radii: out_radii,
        m_inf,
        n_inf,
        t_inf,
        t_one: None,
        quadrature_nodes: nodes,
    })
}

/// Circle average of `log⁺ ||(1 - zT)^{-1}||` for upper-triangular `T`.
/// Returns the average over surviving nodes and the skipped-node count.
fn proximity_resolvent(t: &CMatrix, poles: &PoleSet, r: f64, nodes: usize) -> (f64, usize) {
    let n = t.rows();
    let mut sum = 0.0;
    let mut used = 0usize;
    let mut skipped = 0usize;
    for s in 0..nodes {
        let theta = 2.0 * std::f64::consts::PI * s as f64 / nodes as f64;
        let z = Complex64::from_polar(r, theta);
        if poles.clearance(z) <= 1e-9 * (1.0 + z.norm()) {
            skipped += 1;
            continue;
        }
        // || (1 - zT)^{-1} || = 1 / sigma_min(1 - zT)
        let m = CMatrix::from_fn(n, n, |i, j| {
            let tij = -z * t[(i, j)];
            if i == j {
                tij + 1.0
            } else if i < j {
                tij
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let smin = svd::min_singular_upper_tri(&m, 60);
        if smin > 0.0 {
            sum += log_plus(smin.recip());
            used += 1;
        } else {
            skipped += 1;
        }
    }
    if used == 0 {
        (0.0, skipped)
    } else {
        (sum / used as f64, skipped)
    }
}

/// Total logarithmic size `s(A) = Σ_j log⁺ σ_j(A)` over all singular values.
pub fn total_log_size(a: &CMatrix) -> Result<f64> {
    Ok(svd::singular_values(a)?.iter().map(|&s| log_plus(s)).sum())
}

/// Characteristic with the total-logarithmic-size proximity term:
/// quadrature of `s(F(re^{iθ}))` over `nodes` angles plus the counting term
/// of the supplied pole set.  Nodes within 1e-9 of a pole are skipped.
pub fn t_one<F>(f: F, poles: &PoleSet, r: f64, nodes: usize) -> Result<f64>
where
    F: Fn(Complex64) -> CMatrix,
{
    if r <= 0.0 || nodes == 0 {
        return Err(Error::Domain("t_one needs a positive radius and nodes".into()));
    }
    let r = poles.nudge_radius(r);
    let mut sum = 0.0;
    let mut used = 0usize;
    for s in 0..nodes {
        let theta = 2.0 * std::f64::consts::PI * s as f64 / nodes as f64;
        let z = Complex64::from_polar(r, theta);
        if poles.clearance(z) <= 1e-9 * (1.0 + z.norm()) {
            continue;
        }
        sum += total_log_size(&f(z))?;
        used += 1;
    }
    if used == 0 {
        return Err(Error::Domain(
            "every quadrature node collided with a pole".into(),
        ));
    }
    Ok(sum / used as f64 + poles.counting(r))
}

/// Verification record for the inversion identity `T₁(r,F) = T₁(r,F^{-1})`.
#[derive(Clone, Debug)]
pub struct InversionReport {
    /// `T₁(r, F)`.
    pub lhs: f64,
    /// `T₁(r, F^{-1})`.
    pub rhs: f64,
    /// `lhs - rhs`.
    pub gap: f64,
    pub nodes: usize,
}

/// Checks the exact inversion identity for `F(z) = 1 + Σ_k G_k z^k`.
///
/// Both proximity integrals come from one compressed eigenproblem per node:
/// with `H = G + G^H + G^H G` one has `F^H F = 1 + H`, `H` vanishes on the
/// orthogonal complement of `range(G) + range(G^H)`, and the singular values
/// of `F` are `√(1+μ_i)` over the eigenvalues `μ_i` of `H` compressed to
/// that joint subspace — so `s(F)` and `s(F^{-1})` cost `O(n·w² + w³)` per
/// node for joint dimension `w`.  The poles of `F^{-1}` (zeros of `det F`)
/// come with exact multiplicities from the block companion matrix of the
/// reversed matrix polynomial `w^K + G_1 w^{K-1} + … + G_K`.
///
/// Fails when more than 20% of the quadrature nodes find `F` numerically
/// singular.
pub fn verify_inversion(g: &[CMatrix], r: f64, nodes: usize) -> Result<InversionReport> {
    if r <= 0.0 || nodes == 0 {
        return Err(Error::Domain(
            "verify_inversion needs a positive radius and nodes".into(),
        ));
    }
    let kdeg = g.len();
    if kdeg == 0 {
        return Ok(InversionReport { lhs: 0.0, rhs: 0.0, gap: 0.0, nodes });
    }
    let n = g[0].rows();
    for gk in g {
        if !gk.is_square() || gk.rows() != n {
            return Err(Error::Dimension(
                "all coefficient matrices must be square of equal size".into(),
            ));
        }
    }

    // joint range basis of all coefficients and their adjoints
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    for gk in g {
        for j in 0..n {
            cols.push(gk.col(j));
            cols.push(gk.adjoint().col(j));
        }
    }
    let w_basis = qr::orthonormal_basis(&cols, 1e-12);
    let w = w_basis.cols();

    // poles of F^{-1}: nonzero eigenvalues w_i of the companion matrix of
    // the reversed polynomial, pole at z = 1/w_i, multiplicities included
    let mut companion_eigs: Vec<Complex64> = Vec::new();
    if n * kdeg > 0 {
        let big = n * kdeg;
        let mut comp = CMatrix::zeros(big, big);
        for blk in 0..kdeg.saturating_sub(1) {
            for i in 0..n {
                comp[(blk * n + i, (blk + 1) * n + i)] = Complex64::new(1.0, 0.0);
            }
        }
        // last block row: -G_K, -G_{K-1}, ..., -G_1
        for (blk, gk) in g.iter().rev().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    comp[((kdeg - 1) * n + i, blk * n + j)] = -gk[(i, j)];
                }
            }
        }
        companion_eigs = schur::eigenvalues_only(&comp)?;
    }
    let n_term_inverse: f64 = companion_eigs.iter().map(|wi| log_plus(r * wi.norm())).sum();

    let mut lhs_sum = 0.0;
    let mut rhs_sum = 0.0;
    let mut singular_nodes = 0usize;
    let mut used = 0usize;
    for s in 0..nodes {
        let theta = 2.0 * std::f64::consts::PI * s as f64 / nodes as f64;
        let z = Complex64::from_polar(r, theta);
        // G(z), applied to the compressed basis only
        let mut gz = CMatrix::zeros(n, n);
        let mut zp = z;
        for gk in g {
            for (dst, src) in gz.data_mut().iter_mut().zip(gk.data().iter()) {
                *dst += zp * src;
            }
            zp *= z;
        }
        // H = G + G^H + G^H G compressed to the joint basis
        let gw = gz.matmul(&w_basis); // n x w
        let gaw = gz.adjoint().matmul(&w_basis); // n x w
        let mut h = CMatrix::zeros(w, w);
        for i in 0..w {
            for j in 0..w {
                let wi = w_basis.col(i);
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..n {
                    // W^H (G W) + W^H (G^H W) + (G W)^H (G W)
                    acc += wi[t].conj() * gw[(t, j)];
                    acc += wi[t].conj() * gaw[(t, j)];
                    acc += gw[(t, i)].conj() * gw[(t, j)];
                }
                h[(i, j)] = acc;
            }
        }
        let (mu, _) = svd::hermitian_eigen(&h)?;
        let mut smallest = f64::INFINITY;
        let mut s_f = 0.0;
        let mut s_finv = 0.0;
        for &m in &mu {
            let sq = 1.0 + m;
            smallest = smallest.min(sq);
            if sq > 0.0 {
                s_f += 0.5 * log_plus(sq);
                s_finv += 0.5 * log_plus(sq.recip());
            }
        }
        if smallest <= 1e-12 {
            singular_nodes += 1;
            continue;
        }
        lhs_sum += s_f;
        rhs_sum += s_finv;
        used += 1;
    }
    if singular_nodes * 5 > nodes {
        return Err(Error::Singular(
            "the function is singular on too much of the quadrature circle",
        ));
    }
    let lhs = lhs_sum / used.max(1) as f64; // F is polynomial: no pole term
    let rhs = rhs_sum / used.max(1) as f64 + n_term_inverse;
    Ok(InversionReport { lhs, rhs, gap: lhs - rhs, nodes })
}

/// Verification record for a growth inequality: `lhs ≤ rhs` up to
/// quadrature tolerance, reported as `slack = rhs - lhs`.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`; the inequality holds when this is ≥ -tolerance.
    pub slack: f64,
    pub nodes: usize,
}

fn t_inf_at(a: &CMatrix, r: f64, nodes: usize) -> Result<f64> {
    Ok(resolvent_growth(a, &[r], nodes)?.t_inf[0])
}

/// Rank-one perturbation bound: the resolvent characteristic of `A + ab^H`
/// is at most `2(T(r, A-resolvent) + log⁺ r + log⁺(||a|| ||b||) + log 2)`.
pub fn verify_rank1_bound(
    a: &CMatrix,
    avec: &[Complex64],
    bvec: &[Complex64],
    r: f64,
    nodes: usize,
) -> Result<BoundReport> {
    if avec.len() != a.rows() || bvec.len() != a.rows() {
        return Err(Error::Dimension(
            "perturbation vectors must match the matrix dimension".into(),
        ));
    }
    let n = a.rows();
    let perturbed = CMatrix::from_fn(n, n, |i, j| a[(i, j)] + avec[i] * bvec[j].conj());
    let lhs = t_inf_at(&perturbed, r, nodes)?;
    let t_base = t_inf_at(a, r, nodes)?;
    let rhs = 2.0
        * (t_base + log_plus(r) + log_plus(vec_norm(avec) * vec_norm(bvec)) + 2f64.ln());
    Ok(BoundReport { lhs, rhs, slack: rhs - lhs, nodes })
}

/// Finite-rank perturbation bound: with `q = rank(B)`, the characteristic of
/// `A + B` is at most `(q+1) T(r, A-resolvent) + q (log⁺(r ||B||) + log 2)`.
pub fn verify_finite_rank_bound(
    a: &CMatrix,
    b: &CMatrix,
    r: f64,
    nodes: usize,
) -> Result<BoundReport> {
    if !b.is_square() || b.rows() != a.rows() {
        return Err(Error::Dimension(
            "perturbation must be square of the same size".into(),
        ));
    }
    let sv = svd::singular_values(b)?;
    let bnorm = sv.first().copied().unwrap_or(0.0);
    let q = sv.iter().filter(|&&s| s > 1e-10 * bnorm).count();
    let lhs = t_inf_at(&(a + b), r, nodes)?;
    let t_base = t_inf_at(a, r, nodes)?;
    let rhs = (q as f64 + 1.0) * t_base + q as f64 * (log_plus(r * bnorm) + 2f64.ln());
    Ok(BoundReport { lhs, rhs, slack: rhs - lhs, nodes })
}

/// Schatten-class growth bound: for `k` the integer with `k < p ≤ k+1`,
/// `T(r, B-resolvent) ≤ ((k+1)/p) ||B||_p^p r^p + k log(1 + r ||B||)`.
pub fn schatten_growth_bound(b: &CMatrix, p: f64, r: f64) -> Result<BoundReport> {
    if p <= 0.0 {
        return Err(Error::Domain("Schatten exponent must be positive".into()));
    }
    let sv = svd::singular_values(b)?;
    let bnorm = sv.first().copied().unwrap_or(0.0);
    let pnorm_p: f64 = sv.iter().map(|s| s.powf(p)).sum();
    let k = p.ceil() as u32 - 1; // k < p <= k+1
    let lhs = t_inf_at(b, r, DEFAULT_NODES)?;
    let rhs = ((k + 1) as f64 / p) * pnorm_p * r.powf(p)
        + k as f64 * (1.0 + r * bnorm).ln();
    Ok(BoundReport { lhs, rhs, slack: rhs - lhs, nodes: DEFAULT_NODES })
}
