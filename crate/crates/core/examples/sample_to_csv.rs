//! Loads a scenario file, samples labelled points and writes them as CSV.

use std::path::Path;

use btz_geometry::analysis::sample_domain;
use btz_geometry::csv::{parse_csv, to_csv_string};
use btz_geometry::scenario::load_scenario;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/cyclic.toml");
    let scenario = load_scenario(&path)?.into_scenario()?;
    let cloud = sample_domain(&scenario, 2000, 42)?;
    for (label, n) in cloud.label_counts() {
        println!("{label:<12} {n}");
    }
    let text = to_csv_string(&cloud)?;
    print!(
        "{}",
        text.lines()
            .take(4)
            .map(|l| format!("{l}\n"))
            .collect::<String>()
    );
    assert_eq!(parse_csv(&text)?, cloud);

    let out = std::env::temp_dir().join("btz_sample.csv");
    btz_geometry::csv::emit(&cloud, &out)?;
    println!("wrote {}", out.display());
    Ok(())
}
