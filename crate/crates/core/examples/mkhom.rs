fn main() {
    for (tag, alpha) in [("h0", 0.0), ("h5", 0.5), ("h1", 1.0)] {
        let spec = polyops_core::zoo::OperatorSpec::new(
            polyops_core::zoo::Family::VolterraHomotopy { alpha }, 400).unwrap();
        let m = polyops_core::zoo::make(&spec).unwrap();
        polyops_core::numkernel::io::save_cmx(&m, format!("/tmp/polyops-smoke/{tag}.cmx")).unwrap();
    }
}
