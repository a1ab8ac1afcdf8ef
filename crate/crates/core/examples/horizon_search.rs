//! Locating the event horizon along timelike segments by bisection.

use std::f64::consts::PI;

use btz_geometry::achronal::AchronalSpec;
use btz_geometry::analysis::{
    horizon_locate, lift_to_domain, visibility_slack, Sampling, Scenario, Tolerances,
};
use btz_geometry::boundary::EinPoint;
use btz_geometry::geometry::{CylCoord3, DELTA};
use btz_geometry::group::GroupPresentation;
use btz_geometry::isometry::IsometryPair;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = AchronalSpec::splitting(EinPoint::new(0.0, 0.0), EinPoint::new(PI, 0.0), 1024)?;
    let g = IsometryPair::from_logs(DELTA.scale(0.5), DELTA.scale(-0.7));
    let gp = GroupPresentation::from_generators(vec![g])?;
    let s = Scenario::new(
        "standard",
        spec,
        gp,
        Sampling::default(),
        Tolerances::default(),
    )?;

    for (rho, phi) in [(0.2, 0.5), (0.5, 1.2), (0.8, 4.0)] {
        let start = CylCoord3::new(-0.4, rho, phi).to_vec22();
        let Some(l) = lift_to_domain(&s.spec, start) else {
            println!("rho' {rho} phi {phi}: start not in E(Λ)");
            continue;
        };
        println!("start slack {:+.4}", visibility_slack(&s, l));
        match horizon_locate(&s, start, [PI, 0.0, 0.0], 1e-10) {
            Ok(h) => println!(
                "  horizon at s = {:.9} after {} steps, theta {:+.6}",
                h.s, h.iterations, h.cyl.theta
            ),
            Err(e) => println!("  {e}"),
        }
    }
    Ok(())
}
