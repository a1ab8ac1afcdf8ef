//! Extreme BTZ: the lightlike Killing field and the extreme invisible domain.

use std::f64::consts::FRAC_PI_2;

use btz_geometry::achronal::AchronalSpec;
use btz_geometry::analysis::{
    black_hole_membership, sample_ads_points, Sampling, Scenario, Tolerances,
};
use btz_geometry::boundary::EinPoint;
use btz_geometry::group::GroupPresentation;
use btz_geometry::kerr::{extreme_lightlike_killing, BTZParams, KerrPoint};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = BTZParams::new(1.0, 1.0)?;
    let pts: Vec<_> = (0..20)
        .map(|i| {
            KerrPoint::new(
                0.1 * i as f64 - 1.0,
                0.3 * i as f64 - 3.0,
                1.2 + 0.4 * i as f64,
            )
        })
        .collect();
    let k = extreme_lightlike_killing(&params, &pts)?;
    println!("max |g(∂φ+∂t, ∂φ+∂t)| = {:.2e}", k.max_norm);
    println!("max |<∂φφ|p> + r²|   = {:.2e}", k.max_phi_phi_residual);

    let spec = AchronalSpec::extreme(
        EinPoint::new(0.0, 0.0),
        EinPoint::new(FRAC_PI_2, FRAC_PI_2),
        1024,
    )?;
    let gp = GroupPresentation::new(vec![params.holonomy()], vec!["holonomy".into()])?;
    let s = Scenario::new(
        "extreme",
        spec,
        gp,
        Sampling::default(),
        Tolerances::default(),
    )?;
    println!("validation: {}", s.validation.message);
    let mut hits = 0;
    for c in sample_ads_points(5000, 9) {
        if let Ok(true) = black_hole_membership(&s, c.to_vec22()) {
            hits += 1;
        }
    }
    // Every point of an extreme domain sees the boundary.
    println!("{hits} of 5000 samples lie in the black hole region");
    Ok(())
}
