//! Causality on the universal cover of the Einstein boundary, achronal sets
//! and their Lipschitz envelopes.

use std::f64::consts::{FRAC_PI_2, PI};

use btz_geometry::boundary::{
    achronality_check, causal_relation, envelopes, omega_membership, EinPoint, LIGHTLIKE_TOL,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let o = EinPoint::new(0.0, 0.0);
    for p in [
        EinPoint::new(FRAC_PI_2, 1.0),
        EinPoint::new(FRAC_PI_2, FRAC_PI_2),
        EinPoint::new(1.0, 2.5),
        EinPoint::new(PI, -PI),
    ] {
        println!(
            "{p:?} relative to the origin: {:?}",
            causal_relation(&o, &p, LIGHTLIKE_TOL)
        );
    }

    let lambda = vec![
        EinPoint::new(0.0, 0.0),
        EinPoint::new(FRAC_PI_2, 0.5),
        EinPoint::new(PI, 0.2),
        EinPoint::new(3.0 * FRAC_PI_2, -0.4),
    ];
    let a = achronality_check(&lambda, false);
    println!("achronal: {} {:?}", a.achronal, a.offending);

    let (plus, minus) = envelopes(&lambda, 1024)?;
    for k in 0..8 {
        let phi = k as f64 * PI / 4.0;
        println!(
            "phi {phi:.3}: Λ- = {:+.4}  Λ+ = {:+.4}",
            minus.eval(phi),
            plus.eval(phi)
        );
    }
    println!("lipschitz violation {:.2e}", plus.max_lipschitz_violation());

    let inside = EinPoint::new(FRAC_PI_2 / 2.0, 0.3);
    let above = EinPoint::new(FRAC_PI_2 / 2.0, 2.0);
    println!(
        "Ω contains {inside:?}: {}",
        omega_membership(&plus, &minus, inside, 0.0)
    );
    println!(
        "Ω contains {above:?}: {}",
        omega_membership(&plus, &minus, above, 0.0)
    );
    Ok(())
}
