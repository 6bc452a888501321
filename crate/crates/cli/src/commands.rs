//! Implementations of the CLI commands.  Each returns a [`Reporter`] whose
//! `results` block is fully determined by the configuration and seed.

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use serde_json::json;

use polyops_core::blockops::{self, BlockTriple};
use polyops_core::capacity;
use polyops_core::classify;
use polyops_core::error::Error as CoreError;
use polyops_core::meromorphic;
use polyops_core::multicentric::{self, CenterSet};
use polyops_core::numkernel::io;
use polyops_core::numkernel::matrix::CMatrix;
use polyops_core::numkernel::poly;
use polyops_core::numkernel::spectrum;
use polyops_core::numkernel::svd;
use polyops_core::projection;
use polyops_core::zoo::{self, Boundary, Family, OperatorSpec, Quantity};

use crate::parse;
use crate::report::Reporter;
use crate::suites;
use crate::{
    BlockArgs, CapacityArgs, ClassifyArgs, FamilyArgs, GrowthArgs, MulticentricArgs,
    ProjectArgs, SplitArgs, VerifyArgs, ZooAction, ZooArgs, ZooConvergeArgs, ZooRunArgs,
};

/// Renders a complex number as a `[re, im]` JSON pair.
fn jc(z: Complex64) -> serde_json::Value {
    json!([z.re, z.im])
}

fn load(rep: &mut Reporter, path: &std::path::Path) -> Result<CMatrix> {
    rep.input(path)?;
    io::load_cmx(path).map_err(|e| anyhow!("loading {}: {e}", path.display()))
}

pub fn capacity(args: &CapacityArgs, seed: u64, tol: f64) -> Result<Reporter> {
    let mut rep = Reporter::new("capacity", seed, tol);
    rep.param("degree", args.degree);
    rep.param("profile", args.profile);
    let a = load(&mut rep, &args.matrix)?;
    if args.degree == 0 {
        bail!("degree must be at least 1");
    }
    if args.profile {
        let profile = capacity::capacity_profile(&a, args.degree)?;
        let caps: Vec<serde_json::Value> =
            profile.results.iter().map(|r| json!(r.cap_n)).collect();
        let values: Vec<serde_json::Value> =
            profile.results.iter().map(|r| json!(r.value)).collect();
        rep.result("cap_by_degree", caps);
        rep.result("value_by_degree", values);
        rep.result("envelope", json!(profile.envelope));
        let monotone = profile
            .envelope
            .windows(2)
            .all(|w| w[1] <= w[0] + 1e-15);
        rep.check_flag("capacity-envelope-monotone", monotone);
        let all_converged = profile.results.iter().all(|r| r.converged);
        rep.check_flag("capacity-solver-converged", all_converged);
    } else {
        let r = capacity::cheb_min(&a, args.degree)?;
        rep.result("value", r.value);
        rep.result("cap_n", r.cap_n);
        rep.result("iterations", r.iterations);
        rep.result("stationarity_residual", r.stationarity_residual);
        rep.result(
            "poly_coeffs",
            r.poly.coeffs().iter().map(|&z| jc(z)).collect::<Vec<_>>(),
        );
        rep.check_flag("capacity-solver-converged", r.converged);
    }
    Ok(rep)
}

pub fn growth(args: &GrowthArgs, seed: u64, tol: f64) -> Result<Reporter> {
    let mut rep = Reporter::new("growth", seed, tol);
    let radii = parse::real_list(&args.radii)?;
    if radii.is_empty() || radii.iter().any(|&r| !(r > 0.0)) {
        bail!("radii must be positive");
    }
    rep.param("radii", json!(radii));
    rep.param("nodes", args.nodes);
    let a = load(&mut rep, &args.matrix)?;
    let curve = meromorphic::resolvent_growth(&a, &radii, args.nodes)?;
    rep.result("radii", json!(curve.radii));
    rep.result("m_inf", json!(curve.m_inf));
    rep.result("n_inf", json!(curve.n_inf));
    rep.result("t_inf", json!(curve.t_inf));
    let finite = curve
        .t_inf
        .iter()
        .chain(&curve.m_inf)
        .chain(&curve.n_inf)
        .all(|v| v.is_finite());
    rep.check_flag("growth-values-finite", finite);
    let mut csv = String::from("r,m,N,T\n");
    for i in 0..curve.radii.len() {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            curve.radii[i], curve.m_inf[i], curve.n_inf[i], curve.t_inf[i]
        ));
    }
    rep.set_csv(csv);
    Ok(rep)
}

pub fn project(args: &ProjectArgs, seed: u64, tol: f64) -> Result<Reporter> {
    let mut rep = Reporter::new("project", seed, tol);
    rep.param("eps", args.eps);
    rep.param("theta", args.theta);
    let a = load(&mut rep, &args.matrix)?;
    let (rho, p) = projection::choose_rho(&a, args.eps, args.theta)?;
    let p_norm = svd::op_norm(&p.p)?;
    rep.result("rho", rho);
    rep.result("projection_norm", p_norm);
    rep.result("idempotency_residual", p.idem_residual);
    rep.result("rank", p.rank);
    rep.result("pole_count", p.pole_count);
    rep.check_upper(
        "projection-idempotent",
        p.idem_residual,
        projection::DEFAULT_TOL,
    );
    if let Some(bound) = p.bound_rhs {
        rep.result("norm_bound_rhs", bound);
        let log_norm = p_norm.max(1.0).ln();
        rep.push_assertion(
            "projection-log-norm-bound",
            log_norm,
            bound + 0.1,
            log_norm <= bound + 0.1,
        );
        let growth_t = bound / projection::c_theta(args.theta)?;
        let count_rhs = growth_t / args.theta.ln() + 0.1;
        rep.push_assertion(
            "projection-pole-count-bound",
            p.pole_count as f64,
            count_rhs,
            (p.pole_count as f64) < count_rhs,
        );
    }
    Ok(rep)
}

pub fn split(args: &SplitArgs, seed: u64, tol: f64) -> Result<Reporter> {
    let mut rep = Reporter::new("split", seed, tol);
    rep.param("eps", args.eps);
    rep.param("theta", args.theta);
    let a = load(&mut rep, &args.matrix)?;
    let s = projection::split_algebraic(&a, args.eps, args.theta)?;
    rep.result("rho", s.p.rho);
    rep.result("algebraic_degree", s.deg_b);
    rep.result("annihilation_residual", s.annihilation_residual);
    rep.result("idempotency_residual", s.p.idem_residual);
    let sum_err = (&(&s.b + &s.e) - &a).fro_norm();
    rep.result("recombination_error", sum_err);
    rep.push_assertion("split-exact-sum", sum_err, 0.0, sum_err == 0.0);
    rep.check_upper(
        "split-annihilation",
        s.annihilation_residual,
        projection::DEFAULT_TOL,
    );
    rep.check_upper(
        "split-projection-idempotent",
        s.p.idem_residual,
        projection::DEFAULT_TOL,
    );
    Ok(rep)
}

pub fn classify(args: &ClassifyArgs, seed: u64, tol: f64) -> Result<Reporter> {
    let mut rep = Reporter::new("classify", seed, tol);
    let a = load(&mut rep, &args.matrix)?;
    let n = a.rows();
    let d_max = args.degree_max.unwrap_or_else(|| n.min(6));
    rep.param("degree_max", d_max);
    rep.param("powers", args.powers);

    let min_poly = classify::minimal_polynomial(&a, 1e-8)?;
    let d = min_poly.degree();
    rep.result("minimal_degree", d);
    // annihilation quality relative to the largest power norm
    let mut power = CMatrix::eye(n);
    let mut max_pow: f64 = power.fro_norm();
    for _ in 0..d {
        power = power.matmul(&a);
        max_pow = max_pow.max(power.fro_norm());
    }
    let resid = min_poly.eval_matrix(&a).fro_norm() / max_pow;
    rep.result("minimal_residual", resid);
    rep.check_upper("minimal-poly-annihilates", resid, 1e-6);

    let simp = classify::simplifying_polynomial(&a)?;
    rep.result("simplifier_degree", simp.poly.degree());
    rep.result("simplifier_residual", simp.diag_residual);
    rep.result("simplifier_cond_v", simp.cond_v);
    rep.result("simplifier_certified", simp.certified);
    if simp.certified {
        rep.check_upper("simplifier-diagonalizes", simp.diag_residual, 1e-6);
    }

    let normal = classify::poly_normal_search(&a, d_max)?;
    rep.result("normal_degree", normal.degree);
    rep.result("normal_defect", normal.defect);
    rep.result("normal_certified", normal.certified);

    match classify::poly_unitary_search(&a, d_max) {
        Ok(unitary) => {
            rep.result("unitary_degree", unitary.degree);
            rep.result("unitary_defect", unitary.defect);
            rep.result("unitary_eigen_lower_bound", unitary.eigen_lower_bound);
            rep.result("unitary_certified", unitary.certified);
            rep.push_assertion(
                "unitary-eigen-bound-dominated",
                unitary.eigen_lower_bound,
                unitary.defect + 1e-9,
                unitary.eigen_lower_bound <= unitary.defect + 1e-9,
            );
        }
        Err(CoreError::NotInvertible(_)) => {
            rep.result("unitary_search", "skipped: matrix numerically singular");
        }
        Err(e) => return Err(e.into()),
    }

    let scan = classify::power_bounded_scan(&a, args.powers)?;
    rep.result("power_sup_forward", scan.sup_pos);
    rep.result(
        "power_sup_backward",
        scan.sup_neg.map_or(json!(null), |v| json!(v)),
    );
    rep.result("power_unbounded_trend", scan.unbounded_trend);
    Ok(rep)
}

pub fn multicentric(args: &MulticentricArgs, seed: u64, tol: f64) -> Result<Reporter> {
    let mut rep = Reporter::new("multicentric", seed, tol);
    let centers = parse::complex_list(&args.centers)?;
    let phi = parse::complex_list(&args.phi)?;
    rep.param("centers", centers.iter().map(|&z| jc(z)).collect::<Vec<_>>());
    rep.param("phi", phi.iter().map(|&z| jc(z)).collect::<Vec<_>>());
    rep.param("truncation", args.truncation);
    let a = load(&mut rep, &args.matrix)?;

    let cs = CenterSet::new(centers)?;
    let p = multicentric::basis_poly(&cs);
    let eigs = spectrum::eigenvalues(&a)?.eigenvalues;
    let sprad = eigs
        .iter()
        .map(|&z| p.eval(z).norm())
        .fold(0.0f64, f64::max);
    let critical = multicentric::smallest_critical_value(&p);
    let radius = match (args.radius, critical) {
        (Some(r), _) => r,
        (None, None) => 2.0 * sprad + 1.0,
        (None, Some(crit)) => {
            if sprad >= crit {
                bail!(
                    "spectrum of p(A) reaches {sprad:.3e}, at or beyond the critical level \
                     {crit:.3e}; choose different centers or pass --radius"
                );
            }
            // geometric mean between spectrum and critical level, with the
            // spectral side floored so a spectrum collapsing onto the
            // centers (sprad ~ 0) cannot drive the sampling circle so small
            // that w^{-k} overflows in the series extraction
            (sprad.max(1e-3 * crit) * crit).sqrt()
        }
    };
    rep.param("radius", radius);

    let f = multicentric::decompose(|z| poly::poly_eval(&phi, z), &cs, radius, args.truncation)?;
    let out = multicentric::eval_phi(&a, &f)?;
    let direct = poly::poly_eval_matrix(&phi, &a);
    let scale = direct.fro_norm().max(1e-300);
    let rel = (&out.value - &direct).fro_norm() / scale;
    rep.result("spectral_radius_of_p", sprad);
    rep.result("tail_bound", out.tail_bound);
    rep.result("roundtrip_error", rel);
    rep.check_upper("multicentric-roundtrip", rel, 1e-8);
    Ok(rep)
}

pub fn block(args: &BlockArgs, seed: u64, tol: f64) -> Result<Reporter> {
    let mut rep = Reporter::new("block", seed, tol);
    rep.param("check", args.check.clone());
    let a = load(&mut rep, &args.a)?;
    let b = load(&mut rep, &args.b)?;
    let c = load(&mut rep, &args.c)?;
    let triple = BlockTriple::new(a.clone(), b.clone(), c.clone())?;
    let which = args.check.as_str();
    let all = which == "all";
    let mut matched_any = all;

    if all || which == "spectrum" {
        matched_any = true;
        let sc = blockops::spectrum_check(&triple)?;
        let m_norm = svd::op_norm(&blockops::assemble(&triple))?;
        rep.result("spectrum_pairing_max", sc.pairing_max);
        rep.result("spectrum_hausdorff", sc.hausdorff);
        rep.check_upper("block-spectrum-union", sc.pairing_max, 1e-7 * (1.0 + m_norm));
    }
    if all || which == "sylvester" {
        matched_any = true;
        let sol = blockops::sylvester_solve(&a, &b, &c)?;
        rep.result("sylvester_residual", sol.residual);
        rep.result("sylvester_gap", sol.gap);
        rep.check_upper("sylvester-residual", sol.residual, 1e-9);
    }
    if all || which == "diagonalize" {
        matched_any = true;
        let bd = blockops::block_diagonalize(&triple)?;
        rep.result("diagonalize_offdiag_residual", bd.residual);
        rep.check_upper("block-diagonalized", bd.residual, 1e-8);
    }
    if all || which == "degree" {
        matched_any = true;
        let dg = blockops::degree_bound_check(&triple)?;
        rep.result("degree_a", dg.deg_a);
        rep.result("degree_b", dg.deg_b);
        rep.result("degree_assembled", dg.deg_assembled);
        rep.result("degree_bound", dg.bound);
        rep.check_flag("degree-bound-holds", dg.bound_ok);
        rep.check_upper("product-corner-only", dg.corner_only_residual, 1e-8);
        rep.check_upper("product-square-vanishes", dg.square_residual, 1e-8);
    }
    if all || which == "obstruction" {
        matched_any = true;
        let ob = blockops::normality_obstruction(&triple)?;
        rep.result("commutator_defect", ob.commutator);
        rep.result("normality_obstruction", ob.obstruction);
        rep.check_flag("obstruction-consistent", ob.consistent);
    }
    if all || which == "growth" {
        matched_any = true;
        let gs = blockops::growth_subadditivity(&triple, &[1.0, 2.0, 4.0, 8.0])?;
        rep.result("growth_min_slack", gs.min_slack);
        rep.check_lower("growth-subadditive", gs.min_slack, -1e-6);
    }
    if !matched_any {
        bail!(
            "unknown check '{which}' (expected all, spectrum, sylvester, diagonalize, \
             degree, obstruction, or growth)"
        );
    }
    Ok(rep)
}

impl FamilyArgs {
    fn complex_opt(text: &Option<String>, default: Complex64) -> Result<Complex64> {
        match text {
            Some(t) => parse::complex(t),
            None => Ok(default),
        }
    }

    pub fn build_family(&self) -> Result<Family> {
        let fam = match self.family.as_str() {
            "forward-shift" => Family::ForwardShift,
            "backward-shift" => Family::BackwardShift,
            "bilateral-shift" => Family::Bilateral,
            "diagonal" => {
                let entries = self
                    .entries
                    .as_ref()
                    .context("diagonal family needs --entries")?;
                Family::Diagonal(parse::complex_list(entries)?)
            }
            "circulant" => Family::Circulant,
            "circulant-weighted" => Family::CirculantWeighted { r: self.r.unwrap_or(0.5) },
            "circulant-sum" => {
                let (lo, hi) =
                    parse::block_range(self.blocks.as_deref().unwrap_or("2..12"))?;
                Family::CirculantSum { min_block: lo, max_block: hi }
            }
            "shift-rank-one" => Family::ShiftRankOne {
                alpha: Self::complex_opt(&self.alpha, Complex64::new(2.0, 0.0))?,
                k: self.k.unwrap_or(0),
            },
            "bilateral-rank-one" => Family::BilateralRankOne {
                alpha: Self::complex_opt(&self.alpha, Complex64::new(0.25, 0.0))?,
                k: self.k.unwrap_or(3),
            },
            "alternating-shift" => Family::AlternatingShift {
                lambda1: Self::complex_opt(&self.lambda1, Complex64::new(1.0, 0.0))?,
                lambda2: Self::complex_opt(&self.lambda2, Complex64::new(-1.0, 0.0))?,
                rho: self.rho.unwrap_or(1.0),
            },
            "phase-blocks" => {
                let thetas = self.thetas.as_deref().unwrap_or("0.3,1.1,2.0");
                Family::PhaseBlocks(parse::real_list(thetas)?)
            }
            "lacunary-shift" => Family::FoiasPearcy,
            "volterra-squared" => Family::VolterraSquared,
            "boundary-green" => Family::BoundaryGreen,
            "volterra-homotopy" => {
                let alpha = Self::complex_opt(&self.alpha, Complex64::new(0.5, 0.0))?;
                if alpha.im != 0.0 {
                    bail!("homotopy parameter must be real");
                }
                Family::VolterraHomotopy { alpha: alpha.re }
            }
            "windowed-coupling" => Family::WindowedCoupling,
            "identity" => Family::Identity,
            other => bail!(
                "unknown family '{other}'; run `polyops zoo list` for the catalog"
            ),
        };
        Ok(fam)
    }

    pub fn build_boundary(&self) -> Result<Boundary> {
        match self.boundary.as_str() {
            "zero-fill" => Ok(Boundary::ZeroFill),
            "periodic" => Ok(Boundary::Periodic),
            other => bail!("unknown boundary '{other}' (zero-fill or periodic)"),
        }
    }

    pub fn build_spec(&self) -> Result<OperatorSpec> {
        Ok(OperatorSpec::with_boundary(
            self.build_family()?,
            self.window,
            self.build_boundary()?,
        )?)
    }
}

fn zoo_run(args: &ZooRunArgs, rep: &mut Reporter) -> Result<()> {
    rep.param("family", args.family.family.clone());
    rep.param("window", args.family.window);
    rep.param("boundary", args.family.boundary.clone());
    let spec = args.family.build_spec()?;
    let report = zoo::verify_example(&spec)?;
    rep.result("family", report.family.clone());
    rep.result("checks_run", report.checks.len());
    let mut kept = 0;
    for check in &report.checks {
        if let Some(filter) = &args.check {
            if !check.name.contains(filter.as_str()) {
                continue;
            }
        }
        kept += 1;
        rep.push_assertion(
            &format!("{}-{}", report.family, check.name),
            check.measured,
            check.budget,
            check.pass,
        );
    }
    if kept == 0 {
        bail!(
            "check filter '{}' matched none of the {} checks for family {}",
            args.check.as_deref().unwrap_or(""),
            report.checks.len(),
            report.family
        );
    }
    Ok(())
}

fn zoo_converge(args: &ZooConvergeArgs, rep: &mut Reporter) -> Result<()> {
    rep.param("family", args.family.family.clone());
    rep.param("quantity", args.quantity.clone());
    let windows = parse::usize_list(&args.windows)?;
    rep.param("windows", json!(windows));
    let family = args.family.build_family()?;
    let boundary = args.family.build_boundary()?;
    let quantity = match args.quantity.as_str() {
        "eigenvalue" => {
            let target = FamilyArgs::complex_opt(&args.target, Complex64::new(2.0, 0.0))?;
            rep.param("target", jc(target));
            Quantity::EigenvalueNear(target)
        }
        "power-norm" => {
            rep.param("power", args.power);
            Quantity::PowerNorm(args.power)
        }
        "growth" => {
            rep.param("at", args.at);
            Quantity::GrowthAt(args.at)
        }
        other => bail!("unknown quantity '{other}' (eigenvalue, power-norm, or growth)"),
    };
    let table = zoo::truncation_convergence(&family, boundary, &quantity, &windows)?;
    rep.result("windows", json!(table.windows));
    rep.result("values", json!(table.values));
    rep.result("differences", json!(table.differences));
    let mut csv = String::from("window,value,difference\n");
    for (i, &w) in table.windows.iter().enumerate() {
        let diff = if i == 0 {
            String::new()
        } else {
            format!("{}", table.differences[i - 1])
        };
        csv.push_str(&format!("{w},{},{diff}\n", table.values[i]));
    }
    rep.set_csv(csv);
    Ok(())
}

pub fn zoo(args: &ZooArgs, seed: u64, tol: f64) -> Result<Reporter> {
    match &args.action {
        ZooAction::List => {
            let mut rep = Reporter::new("zoo list", seed, tol);
            rep.result("families", json!(zoo::list_families()));
            Ok(rep)
        }
        ZooAction::Run(run_args) => {
            let mut rep = Reporter::new("zoo run", seed, tol);
            zoo_run(run_args, &mut rep)?;
            Ok(rep)
        }
        ZooAction::Converge(conv_args) => {
            let mut rep = Reporter::new("zoo converge", seed, tol);
            zoo_converge(conv_args, &mut rep)?;
            Ok(rep)
        }
    }
}

pub fn verify(args: &VerifyArgs, seed: u64, tol: f64) -> Result<Reporter> {
    let mut rep = Reporter::new("verify", seed, tol);
    rep.param("suite", args.suite.clone());
    rep.param("instances", args.instances);
    rep.param("nodes", args.nodes);
    let instances = args.instances.max(1);
    match args.suite.as_str() {
        "growth" => suites::growth(&mut rep, seed, instances, args.nodes)?,
        "projection" => suites::projection(&mut rep, seed, instances)?,
        "roundtrip" => suites::roundtrip(&mut rep, seed, instances)?,
        "capacity" => suites::capacity(&mut rep)?,
        "block" => suites::block(&mut rep, seed, instances)?,
        "zoo" => suites::zoo(&mut rep)?,
        "classify" => suites::classify(&mut rep, seed, instances)?,
        "all" => {
            suites::growth(&mut rep, seed, instances, args.nodes)?;
            suites::projection(&mut rep, seed, instances)?;
            suites::roundtrip(&mut rep, seed, instances)?;
            suites::capacity(&mut rep)?;
            suites::block(&mut rep, seed, instances)?;
            suites::zoo(&mut rep)?;
            suites::classify(&mut rep, seed, instances)?;
        }
        other => bail!(
            "unknown suite '{other}' (growth, projection, roundtrip, capacity, block, \
             zoo, classify, or all)"
        ),
    }
    Ok(rep)
}
