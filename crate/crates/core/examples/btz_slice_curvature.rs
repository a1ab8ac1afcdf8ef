//! Mean and Gauss curvature of a constant-time slice of BTZ.

use btz_geometry::kerr::{surface_geometry, BTZParams, SurfaceGrid};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = BTZParams::new(2.0, 1.0)?;
    let grid = SurfaceGrid {
        eta: (0.2, 1.5),
        varphi: (-1.0, 1.0),
        n_eta: 5,
        n_varphi: 3,
    };
    let report = surface_geometry(&params, 0.0, &grid)?;
    println!("max |H| = {:.2e}", report.max_abs_mean);
    for s in report.samples.iter().step_by(3) {
        println!(
            "eta {:.3} r {:.4}: K numeric {:+.6e}, closed form {:+.6e}",
            s.eta, s.r, s.gauss_curvature, s.gauss_closed
        );
    }
    Ok(())
}
