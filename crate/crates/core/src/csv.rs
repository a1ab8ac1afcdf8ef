//! Point cloud CSV: a fixed header, LF line endings and shortest round-trip
//! decimals, so that re-parsing reproduces every value bit for bit.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use thiserror::Error;

use crate::analysis::{LabeledPoint, LabeledPointCloud};
use crate::geometry::{CylCoord3, Vec22};

pub const HEADER: &str = "x1,x2,y1,y2,theta,rho_prime,phi,label,visible,scenario_id";

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("field may not contain a comma or newline: {0:?}")]
    BadField(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn check_field(s: &str) -> Result<(), CsvError> {
    if s.contains([',', '\n', '\r']) {
        return Err(CsvError::BadField(s.to_string()));
    }
    Ok(())
}

/// Renders the cloud. `{:?}` on `f64` prints the shortest decimal that
/// parses back to the same value.
pub fn to_csv_string(cloud: &LabeledPointCloud) -> Result<String, CsvError> {
    let mut out = String::with_capacity(64 * (cloud.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for r in &cloud.rows {
        check_field(&r.label)?;
        check_field(&r.scenario_id)?;
        let v = r.v;
        let c = r.cyl;
        writeln!(
            out,
            "{:?},{:?},{:?},{:?},{:?},{:?},{:?},{},{},{}",
            v.x1, v.x2, v.y1, v.y2, c.theta, c.rho_prime, c.phi, r.label, r.visible, r.scenario_id
        )
        .expect("writing to a String");
    }
    Ok(out)
}

pub fn write_csv<W: Write>(cloud: &LabeledPointCloud, mut w: W) -> Result<(), CsvError> {
    w.write_all(to_csv_string(cloud)?.as_bytes())?;
    Ok(())
}

pub fn emit(cloud: &LabeledPointCloud, path: &Path) -> Result<(), CsvError> {
    std::fs::write(path, to_csv_string(cloud)?)?;
    Ok(())
}

pub fn parse_csv(text: &str) -> Result<LabeledPointCloud, CsvError> {
    let mut lines = text.split('\n');
    let err = |line: usize, message: String| CsvError::Format { line, message };
    match lines.next() {
        Some(HEADER) => {}
        other => return Err(err(1, format!("unexpected header {other:?}"))),
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let n = i + 2;
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 10 {
            return Err(err(n, format!("expected 10 fields, got {}", f.len())));
        }
        let num = |k: usize| -> Result<f64, CsvError> {
            f[k].parse().map_err(|e| err(n, format!("field {k}: {e}")))
        };
        let visible = f[8].parse().map_err(|e| err(n, format!("field 8: {e}")))?;
        rows.push(LabeledPoint {
            v: Vec22::new(num(0)?, num(1)?, num(2)?, num(3)?),
            cyl: CylCoord3::new(num(4)?, num(5)?, num(6)?),
            label: f[7].to_string(),
            visible,
            scenario_id: f[9].to_string(),
        });
    }
    Ok(LabeledPointCloud { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(x: [f64; 7]) -> LabeledPoint {
        LabeledPoint {
            v: Vec22::new(x[0], x[1], x[2], x[3]),
            cyl: CylCoord3::new(x[4], x[5], x[6]),
            label: "end1".into(),
            visible: true,
            scenario_id: "s".into(),
        }
    }

    #[test]
    fn empty_cloud_is_header_only() {
        let s = to_csv_string(&LabeledPointCloud::default()).unwrap();
        assert_eq!(s, format!("{HEADER}\n"));
        assert!(parse_csv(&s).unwrap().is_empty());
    }

    #[test]
    fn awkward_values_round_trip() {
        let c = LabeledPointCloud {
            rows: vec![row([
                0.1,
                -0.0,
                1e-300,
                1e300,
                f64::MIN_POSITIVE,
                5e-324,
                1.0 / 3.0,
            ])],
        };
        let s = to_csv_string(&c).unwrap();
        assert!(!s.contains('\r'));
        let back = parse_csv(&s).unwrap();
        let (a, b) = (&c.rows[0], &back.rows[0]);
        for (x, y) in a.v.to_array().iter().zip(b.v.to_array()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
        assert_eq!(a.cyl.phi.to_bits(), b.cyl.phi.to_bits());
    }

    #[test]
    fn commas_in_labels_are_rejected() {
        let mut r = row([0.0; 7]);
        r.label = "a,b".into();
        assert!(to_csv_string(&LabeledPointCloud { rows: vec![r] }).is_err());
    }

    proptest! {
        #[test]
        fn bit_exact_round_trip(x in proptest::array::uniform7(proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO)) {
            let c = LabeledPointCloud { rows: vec![row(x)] };
            let back = parse_csv(&to_csv_string(&c).unwrap()).unwrap();
            let r = &back.rows[0];
            let got = [r.v.x1, r.v.x2, r.v.y1, r.v.y2, r.cyl.theta, r.cyl.rho_prime, r.cyl.phi];
            for (a, b) in x.iter().zip(got) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }
}
