//! Limit set of a two-generator Schottky-like group and its achronality.

use std::path::Path;

use btz_geometry::boundary::achronality_check;
use btz_geometry::group::{admissibility_probe, limit_set, DEDUP_EPS};
use btz_geometry::scenario::load_scenario;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/schottky.toml");
    let s = load_scenario(&path)?;
    let report = admissibility_probe(&s.group);
    println!(
        "{}: abelian {} admissible {}",
        s.id, report.abelian, report.admissible
    );

    for len in [2, 4, 6, 8] {
        let ls = limit_set(&s.group, len, DEDUP_EPS)?;
        let a = achronality_check(&ls.ein_points(), false);
        println!(
            "word length {len}: {:>4} points, {} skipped, achronal {}",
            ls.points.len(),
            ls.skipped.len(),
            a.achronal
        );
    }
    let ls = limit_set(&s.group, 3, DEDUP_EPS)?;
    for p in ls.points.iter().take(6) {
        println!(
            "  {:<6} phi {:+.5} theta {:+.5}",
            p.word, p.point.phi, p.point.theta
        );
    }
    Ok(())
}
