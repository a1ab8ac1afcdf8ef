//! Points of AdS₃ as vectors and as SL(2,R) matrices, and the conformal chart.

use btz_geometry::geometry::{
    ads_matrix, conformal_coords, matrix_to_vec, pairing, quadratic_form, CylCoord3, Mat2, Vec22,
    DELTA,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = CylCoord3::new(0.4, 0.7, 2.0);
    let v = c.to_vec22();
    println!(
        "cyl {c:?}\n -> vec {v:?}, q = {:+.3e}",
        quadratic_form(v) + 1.0
    );

    let g = ads_matrix(v)?;
    println!("matrix {:?}, det = {:.12}", g.to_row_major(), g.det());
    let w = matrix_to_vec(g);
    assert!(w
        .to_array()
        .iter()
        .zip(v.to_array())
        .all(|(a, b)| (a - b).abs() < 1e-12));

    let back = conformal_coords(v);
    println!("round trip {back:?}");

    // Unit timelike and spacelike vectors through the basepoint.
    let base = Vec22::new(0.0, 0.0, 1.0, 0.0);
    println!("<base, base> = {}", pairing(base, base));
    println!("<base, v> = {:.6}", pairing(base, v));

    // One-parameter subgroup and its logarithm.
    let a = DELTA.scale(0.75).exp();
    let x = a.log()?;
    println!(
        "exp(0.75 Δ) = {:?}, log = {:?}",
        a.to_row_major(),
        x.to_row_major()
    );
    assert!(x.max_abs_diff(DELTA.scale(0.75)) < 1e-12);

    let r = Mat2::from_row_major([0.0, 1.0, -1.0, 0.0]);
    println!(
        "rotation trace {}, unimodular: {}",
        r.trace(),
        r.check_unimodular().is_ok()
    );
    Ok(())
}
