//! Region labels of the invisible domain of a splitting datum.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use btz_geometry::achronal::{
    invisible_membership, split_region_classify, AchronalSpec, HORIZON_TOL,
};
use btz_geometry::analysis::sample_ads_points;
use btz_geometry::boundary::EinPoint;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = AchronalSpec::splitting(EinPoint::new(0.0, 0.0), EinPoint::new(PI, 0.0), 1024)?;
    let mut counts = BTreeMap::new();
    let mut invisible = 0;
    let points = sample_ads_points(20_000, 5);
    for c in &points {
        let v = c.to_vec22();
        invisible += invisible_membership(&spec, v) as usize;
        *counts
            .entry(split_region_classify(&spec, v, HORIZON_TOL)?.label())
            .or_insert(0) += 1;
    }
    println!("{} samples, {invisible} in E(Λ)", points.len());
    for (label, n) in counts {
        println!("  {label:<15} {n}");
    }
    Ok(())
}
