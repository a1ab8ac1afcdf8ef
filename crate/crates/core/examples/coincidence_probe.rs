//! Compares D(ρ) with the truncated C_∞(ρ) on random points for a flat and
//! a non-flat group.

use std::path::Path;

use btz_geometry::analysis::coincidence_probe;
use btz_geometry::scenario::load_scenario;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["schottky_flat", "cyclic"] {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("scenarios/{name}.toml"));
        let s = load_scenario(&path)?;
        let r = coincidence_probe(&s.group, 1000, 4, 4, 1e-6, 0)?;
        println!(
            "{name:<14} {}: {} in D, {} in D only ({:.3}), by decade {:?}",
            s.group_summary(),
            r.d_members,
            r.d_only,
            r.d_only_fraction,
            r.histogram
        );
    }
    Ok(())
}
