//! The domains D(γ) and C(γ) of a single isometry, the seven normal forms
//! and the bounded-n causal test.

use btz_geometry::analysis::sample_ads_points;
use btz_geometry::causal::{in_c_range, in_d_closed_form, NormalCase};
use btz_geometry::geometry::ads_matrix;
use btz_geometry::isometry::{killing_norm, IsometryPair};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        NormalCase::Elliptic { lambda: 0.7 },
        NormalCase::HyperbolicTranslation { lambda: 1.0 },
        NormalCase::ParabolicTranslation,
        NormalCase::ParabolicOpposite,
        NormalCase::ParabolicSame,
        NormalCase::HypHyp {
            lambda: 1.0,
            mu: 2.0,
        },
        NormalCase::HypPar { lambda: 1.0 },
    ];
    let points = sample_ads_points(2000, 3);
    for nc in cases {
        let (xl, xr) = nc.generators();
        let iso = IsometryPair::from_logs(xl, xr);
        let (mut d, mut agree, mut c) = (0, 0, 0);
        for p in &points {
            let v = p.to_vec22();
            let g = ads_matrix(v)?;
            let numeric = killing_norm(xl, xr, g) > 0.0;
            d += numeric as usize;
            agree += (numeric == in_d_closed_form(&nc, g)) as usize;
            if iso.gl.trace() > -2.0 && in_c_range(&iso, v, 4)? {
                c += 1;
            }
        }
        println!(
            "case {} {:<40} D {:>4}/{}  closed form agrees {:>4}  C(n≤4) {:>4}",
            nc.case_id(),
            format!("{nc:?}"),
            d,
            points.len(),
            agree,
            c
        );
    }
    Ok(())
}
