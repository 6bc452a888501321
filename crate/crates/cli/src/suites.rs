//! Randomized verification suites behind `polyops verify`.  Each suite
//! draws its instances from the user seed, aggregates worst-case measures
//! into the results block, and registers named assertions.

use anyhow::Result;
use num_complex::Complex64;

use polyops_core::blockops::{self, BlockTriple};
use polyops_core::capacity as cap;
use polyops_core::classify as cls;
use polyops_core::meromorphic;
use polyops_core::multicentric::{self, CenterSet};
use polyops_core::numkernel::matrix::CMatrix;
use polyops_core::numkernel::poly;
use polyops_core::numkernel::rng;
use polyops_core::numkernel::svd;
use polyops_core::projection as proj;
use polyops_core::synth;
use polyops_core::zoo::{self, Family, OperatorSpec};

use crate::report::Reporter;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Perturbation growth bounds: rank-one, finite-rank, Schatten, and the
/// inversion identity, on random dense instances.
pub fn growth(rep: &mut Reporter, seed: u64, instances: usize, nodes: usize) -> Result<()> {
    let mut rank1_min = f64::INFINITY;
    let mut finite_min = f64::INFINITY;
    let mut schatten_min = f64::INFINITY;
    let mut inversion_max = 0.0f64;
    for i in 0..instances {
        let mut r = rng::user_stream(seed, &format!("verify-growth-{i}"));
        let n = 4 + (i * 7) % 13;
        let scale = 1.0 / (n as f64).sqrt();
        let a = synth::gaussian_matrix(n, n, &mut r).map(|z| z * scale);
        let radius = [2.0, 4.0, 8.0, 16.0][i % 4];

        let amp = 0.5 + (i % 5) as f64;
        let u: Vec<Complex64> = synth::random_unit_vector(n, &mut r)
            .into_iter()
            .map(|z| z * amp)
            .collect();
        let v = synth::random_unit_vector(n, &mut r);
        let rank1 = meromorphic::verify_rank1_bound(&a, &u, &v, radius, nodes)?;
        rank1_min = rank1_min.min(rank1.slack);

        let b = synth::rank_k(n, 1 + i % 3, 1.0, &mut r);
        let finite = meromorphic::verify_finite_rank_bound(&a, &b, radius, nodes)?;
        finite_min = finite_min.min(finite.slack);

        let schatten = meromorphic::schatten_growth_bound(&b, 2.0, radius)?;
        schatten_min = schatten_min.min(schatten.slack);

        let g1 = synth::gaussian_matrix(n, n, &mut r).map(|z| z * (0.5 * scale));
        let g2 = synth::gaussian_matrix(n, n, &mut r).map(|z| z * (0.25 * scale));
        let inv = meromorphic::verify_inversion(&[g1, g2], 2.0, nodes)?;
        inversion_max = inversion_max.max(inv.gap.abs());
    }
    rep.result("growth_rank1_min_slack", rank1_min);
    rep.result("growth_finite_rank_min_slack", finite_min);
    rep.result("growth_schatten_min_slack", schatten_min);
    rep.result("growth_inversion_max_gap", inversion_max);
    rep.check_lower("growth-rank1-slack", rank1_min, -0.1);
    rep.check_lower("growth-finite-rank-slack", finite_min, -0.1);
    rep.check_lower("growth-schatten-slack", schatten_min, -0.1);
    rep.check_upper("growth-inversion-identity", inversion_max, 0.15);
    Ok(())
}

/// Spectral projection bounds: idempotency, norm bound, and pole-count
/// bound at the selected radius.
pub fn projection(rep: &mut Reporter, seed: u64, instances: usize) -> Result<()> {
    let eps = 0.1;
    let theta = 4.0;
    let c_th = proj::c_theta(theta)?;
    let mut worst_idem = 0.0f64;
    let mut worst_norm_margin = f64::NEG_INFINITY;
    let mut worst_count_margin = f64::NEG_INFINITY;
    for i in 0..instances {
        let mut r = rng::user_stream(seed, &format!("verify-projection-{i}"));
        let n = 4 + (i * 5) % 9;
        let moduli = synth::spread_moduli(n, 0.05, 3.0, &mut r);
        let (a, _) = synth::with_eigenvalues(&moduli, 0.3, &mut r);
        let (_rho, p) = proj::choose_rho(&a, eps, theta)?;
        worst_idem = worst_idem.max(p.idem_residual);
        if let Some(bound) = p.bound_rhs {
            let log_norm = svd::op_norm(&p.p)?.max(1.0).ln();
            worst_norm_margin = worst_norm_margin.max(log_norm - bound);
            let growth_t = bound / c_th;
            worst_count_margin =
                worst_count_margin.max(p.pole_count as f64 - growth_t / theta.ln());
        }
    }
    rep.result("projection_worst_idempotency", worst_idem);
    rep.result("projection_worst_norm_margin", worst_norm_margin);
    rep.result("projection_worst_count_margin", worst_count_margin);
    rep.check_upper("projection-idempotent", worst_idem, proj::DEFAULT_TOL);
    rep.check_upper("projection-log-norm-bound", worst_norm_margin, 0.1);
    rep.check_upper("projection-pole-count-bound", worst_count_margin, 0.1);
    Ok(())
}

/// Multicentric representation round-trip against direct polynomial
/// evaluation.
pub fn roundtrip(rep: &mut Reporter, seed: u64, instances: usize) -> Result<()> {
    let mut worst = 0.0f64;
    for i in 0..instances {
        let mut r = rng::user_stream(seed, &format!("verify-roundtrip-{i}"));
        let d = 1 + i % 3;
        // well-separated centers on a circle, mildly perturbed
        let centers: Vec<Complex64> = (0..d)
            .map(|j| {
                let angle = 2.0 * std::f64::consts::PI * j as f64 / d as f64;
                Complex64::from_polar(1.0, angle) + rng::gaussian(&mut r) * 0.1
            })
            .collect();
        let cs = CenterSet::new(centers.clone())?;
        let p = multicentric::basis_poly(&cs);
        // eigenvalues in small disks around the centers
        let n = 4 + (i * 3) % 9;
        let eigs: Vec<Complex64> = (0..n)
            .map(|j| centers[j % d] + rng::gaussian(&mut r) * 0.03)
            .collect();
        let (a, _) = synth::with_eigenvalues(&eigs, 0.2, &mut r);
        let sprad = eigs.iter().map(|&z| p.eval(z).norm()).fold(0.0f64, f64::max);
        let critical = multicentric::smallest_critical_value(&p);
        let radius = match critical {
            None => 2.0 * sprad + 0.5,
            Some(crit) => {
                if sprad >= crit {
                    continue; // drawn degenerate; skip rather than force
                }
                (sprad.max(1e-6) * crit).sqrt()
            }
        };
        let deg_phi = 2 + (i % 7);
        let phi: Vec<Complex64> = (0..=deg_phi).map(|_| rng::gaussian(&mut r)).collect();
        let f = multicentric::decompose(|z| poly::poly_eval(&phi, z), &cs, radius, 64)?;
        let out = multicentric::eval_phi(&a, &f)?;
        let direct = poly::poly_eval_matrix(&phi, &a);
        let rel = (&out.value - &direct).fro_norm() / direct.fro_norm().max(1e-300);
        worst = worst.max(rel);
    }
    rep.result("roundtrip_worst_error", worst);
    rep.check_upper("multicentric-roundtrip", worst, 1e-8);
    Ok(())
}

/// Capacity oracles with closed-form answers.
pub fn capacity(rep: &mut Reporter) -> Result<()> {
    // nilpotent block: annihilated exactly at its index
    let nil = synth::jordan_block(c(0.0, 0.0), 4);
    let r_nil = cap::cheb_min(&nil, 4)?;
    rep.result("capacity_nilpotent_value", r_nil.value);
    rep.check_upper("capacity-nilpotent", r_nil.value, 1e-10);

    // roots of unity: minimal polynomial z^6 - 1 gives value 0
    let roots: Vec<Complex64> = (0..6)
        .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 6.0))
        .collect();
    let unity = CMatrix::diag(&roots);
    let r_unity = cap::cheb_min(&unity, 6)?;
    rep.result("capacity_unity_value", r_unity.value);
    rep.check_upper("capacity-roots-of-unity", r_unity.value, 1e-10);

    // 128 equispaced points on [-2, 2] at degree 6: the discrete minimax
    // oracle evaluates to 1.9965959549 (the continuum value is exactly 2,
    // from the rescaled Chebyshev polynomial)
    let pts: Vec<Complex64> = (0..128)
        .map(|i| c(-2.0 + 4.0 * i as f64 / 127.0, 0.0))
        .collect();
    let interval = CMatrix::diag(&pts);
    let r_int = cap::cheb_min(&interval, 6)?;
    let oracle = 1.996_595_954_9;
    rep.result("capacity_interval_value", r_int.value);
    rep.result("capacity_interval_oracle", oracle);
    let rel = (r_int.value - oracle).abs() / oracle;
    rep.check_upper("capacity-interval-chebyshev", rel, 1e-3);
    Ok(())
}

/// Block-triangular suite on disjoint-spectrum instances.
pub fn block(rep: &mut Reporter, seed: u64, instances: usize) -> Result<()> {
    let mut worst_sylvester = 0.0f64;
    let mut worst_pairing = 0.0f64;
    let mut worst_corner = 0.0f64;
    let mut worst_square = 0.0f64;
    let mut degree_ok = true;
    for i in 0..instances {
        let mut r = rng::user_stream(seed, &format!("verify-block-{i}"));
        let n = 3 + i % 5;
        let m = 3 + (i * 2) % 5;
        // spectra in disjoint annuli: |lambda_A| in [2, 3], |lambda_B| in [0.2, 0.8]
        let eig_a = synth::spread_moduli(n, 2.0, 3.0, &mut r);
        let eig_b = synth::spread_moduli(m, 0.2, 0.8, &mut r);
        let (a, _) = synth::with_eigenvalues(&eig_a, 0.3, &mut r);
        let (b, _) = synth::with_eigenvalues(&eig_b, 0.3, &mut r);
        let cm = synth::gaussian_matrix(n, m, &mut r);
        let triple = BlockTriple::new(a.clone(), b.clone(), cm.clone())?;

        let sol = blockops::sylvester_solve(&a, &b, &cm)?;
        worst_sylvester = worst_sylvester.max(sol.residual);

        let sc = blockops::spectrum_check(&triple)?;
        let m_norm = svd::op_norm(&blockops::assemble(&triple))?;
        worst_pairing = worst_pairing.max(sc.pairing_max / (1.0 + m_norm));

        let dg = blockops::degree_bound_check(&triple)?;
        degree_ok = degree_ok && dg.bound_ok;
        worst_corner = worst_corner.max(dg.corner_only_residual);
        worst_square = worst_square.max(dg.square_residual);
    }
    rep.result("block_worst_sylvester_residual", worst_sylvester);
    rep.result("block_worst_spectrum_pairing", worst_pairing);
    rep.result("block_worst_corner_residual", worst_corner);
    rep.result("block_worst_square_residual", worst_square);
    rep.check_upper("sylvester-residual", worst_sylvester, 1e-9);
    rep.check_upper("block-spectrum-union", worst_pairing, 1e-7);
    rep.check_flag("degree-bound-holds", degree_ok);
    rep.check_upper("product-corner-only", worst_corner, 1e-8);
    rep.check_upper("product-square-vanishes", worst_square, 1e-8);
    Ok(())
}

/// Gallery examples with closed-form checks.
pub fn zoo(rep: &mut Reporter) -> Result<()> {
    let specs: Vec<OperatorSpec> = vec![
        OperatorSpec::new(
            Family::AlternatingShift { lambda1: c(1.0, 0.0), lambda2: c(-1.0, 0.0), rho: 1.0 },
            64,
        )?,
        OperatorSpec::new(Family::PhaseBlocks(vec![0.3, 1.1, -0.4]), 4)?,
        OperatorSpec::new(Family::CirculantSum { min_block: 2, max_block: 12 }, 4)?,
        OperatorSpec::new(Family::WindowedCoupling, 32)?,
        OperatorSpec::new(Family::FoiasPearcy, 64)?,
        OperatorSpec::new(Family::CirculantWeighted { r: 0.7 }, 5)?,
        OperatorSpec::new(Family::ShiftRankOne { alpha: c(2.0, 0.0), k: 0 }, 128)?,
        OperatorSpec::new(Family::VolterraHomotopy { alpha: 0.5 }, 100)?,
    ];
    for spec in &specs {
        let report = zoo::verify_example(spec)?;
        for check in &report.checks {
            rep.push_assertion(
                &format!("zoo-{}-{}", report.family, check.name),
                check.measured,
                check.budget,
                check.pass,
            );
        }
    }
    Ok(())
}

/// Polynomial classification on structured random matrices.
pub fn classify(rep: &mut Reporter, seed: u64, instances: usize) -> Result<()> {
    let mut worst_simplifier = 0.0f64;
    let mut certified = 0usize;
    for i in 0..instances {
        let mut r = rng::user_stream(seed, &format!("verify-classify-{i}"));
        let sizes = [(2usize, 2usize), (3, 1), (2, 1), (1, 3)];
        let (s1, s2) = sizes[i % sizes.len()];
        let l1 = rng::gaussian(&mut r);
        let l2 = rng::gaussian(&mut r) + c(2.0, 0.0);
        let a = synth::jordan_structured(&[(l1, s1), (l2, s2)], 0.2, &mut r);
        let simp = cls::simplifying_polynomial(&a)?;
        if simp.certified {
            certified += 1;
            worst_simplifier = worst_simplifier.max(simp.diag_residual);
        }
    }
    rep.result("classify_certified", certified);
    rep.result("classify_worst_simplifier_residual", worst_simplifier);
    rep.check_flag("simplifier-all-certified", certified == instances);
    rep.check_upper("simplifier-diagonalizes", worst_simplifier, 1e-6);

    // invertible weighted cycle: the algebraic start must certify the
    // unitary class essentially exactly
    let cycle = zoo::weighted_cycle(5, 0.8);
    let unitary = cls::poly_unitary_search(&cycle, 5)?;
    rep.result("classify_cycle_unitary_defect", unitary.defect);
    rep.check_upper("unitary-algebraic-certifies", unitary.defect, 1e-8);
    rep.push_assertion(
        "unitary-eigen-bound-dominated",
        unitary.eigen_lower_bound,
        unitary.defect + 1e-9,
        unitary.eigen_lower_bound <= unitary.defect + 1e-9,
    );
    Ok(())
}
