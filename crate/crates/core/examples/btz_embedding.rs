//! The rotating BTZ metric pulled back from AdS₃, the holonomy and radial
//! geodesic lengths.

use btz_geometry::kerr::{
    holonomy_translation_check, kerr_metric, metric_max_abs_diff, pullback_check,
    radial_geodesic_length, BTZParams, KerrPoint,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = BTZParams::new(2.0, 1.0)?;
    println!(
        "r+ = 2, r- = 1: mass {:.3}, angular momentum {:.3}",
        params.m(),
        params.j()
    );

    for p in [
        KerrPoint::new(0.0, 0.0, 2.5),
        KerrPoint::new(0.3, -1.0, 4.0),
        KerrPoint::new(-0.8, 2.5, 9.0),
    ] {
        let exact = kerr_metric(&params, p.r)?;
        let pulled = pullback_check(&params, p, 1e-5)?;
        let hol = holonomy_translation_check(&params, p)?;
        println!(
            "{p:?}: metric residual {:.2e}, holonomy residual {:.2e}",
            metric_max_abs_diff(&exact, &pulled),
            hol.residual
        );
    }

    let len = radial_geodesic_length(&params, 2.5, 6.0)?;
    println!("radial length 2.5 -> 6: {:.8}", len.numeric);

    let extreme = BTZParams::new(1.5, 1.5)?;
    let len = radial_geodesic_length(&extreme, 2.0, 5.0)?;
    println!(
        "extreme radial length 2 -> 5: {:.10} (closed form {:?})",
        len.numeric, len.closed
    );
    Ok(())
}
