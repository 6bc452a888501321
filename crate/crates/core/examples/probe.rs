use num_complex::Complex64;
use polyops_core::numkernel::{schur, spectrum, svd, CMatrix};
use polyops_core::zoo::{Family, OperatorSpec};

fn resolvent_log(t: &CMatrix, z: Complex64) -> f64 {
    let n = t.rows();
    let m = CMatrix::from_fn(n, n, |i, j| {
        let tij = -z * t[(i, j)];
        if i == j { tij + 1.0 } else if i < j { tij } else { Complex64::new(0.0, 0.0) }
    });
    let smin = svd::min_singular_upper_tri(&m, 60);
    if smin > 0.0 { -smin.ln() } else { f64::NAN }
}

fn main() {
    for alpha in [0.0, 0.5, 1.0] {
        let spec = OperatorSpec::new(Family::VolterraHomotopy { alpha }, 400).unwrap();
        let a = polyops_core::zoo::make(&spec).unwrap();
        let sp = spectrum::eigenvalues(&a).unwrap();
        let mut mods: Vec<f64> = sp.eigenvalues.iter().map(|l| l.norm()).collect();
        mods.sort_by(|x, y| y.partial_cmp(x).unwrap());
        println!("alpha={alpha}: cluster_tol={:.3e} top |lambda|: {:?}", sp.cluster_tol,
            &mods[..8.min(mods.len())].iter().map(|m| format!("{m:.3e}")).collect::<Vec<_>>());
        println!("  count |lambda|>1e-4: {}  >3.16e-4: {}  >1e-3: {}",
            mods.iter().filter(|&&m| m > 1e-4).count(),
            mods.iter().filter(|&&m| m > 3.16e-4).count(),
            mods.iter().filter(|&&m| m > 1e-3).count());
        let t = schur::schur_factor(&a, false).unwrap().t;
        let r = 1.0e4f64;
        for frac in [0.0f64, 0.125, 0.25, 0.5, 0.75, 1.0] {
            let theta = std::f64::consts::PI * frac;
            let z = Complex64::from_polar(r, theta);
            let g = resolvent_log(&t, z);
            let model = r.sqrt() * (theta / 2.0).cos();
            println!("  theta={:5.3}pi  ln||R||={:9.3}  model sqrt(r)cos(th/2)={:8.2}", frac, g, model);
        }
    }
}
