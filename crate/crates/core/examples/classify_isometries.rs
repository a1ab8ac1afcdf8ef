//! Classification of isometry pairs and their attractive fixed points.

use btz_geometry::geometry::{Mat2, DELTA, H, R0};
use btz_geometry::isometry::{attractive_fixed_point, classify_pair, killing_norm, IsometryPair};

fn main() {
    let pairs = [
        (
            "hyperbolic translation",
            IsometryPair::from_logs(DELTA, Mat2::ZERO),
        ),
        (
            "parabolic translation",
            IsometryPair::from_logs(H, Mat2::ZERO),
        ),
        ("hyp-hyp", IsometryPair::from_logs(DELTA, DELTA.scale(2.0))),
        ("hyp-par", IsometryPair::from_logs(DELTA, H)),
        ("par-par", IsometryPair::from_logs(H, H)),
        (
            "elliptic",
            IsometryPair::from_logs(R0.scale(0.5), R0.scale(0.5)),
        ),
        ("mixed", IsometryPair::from_logs(R0, DELTA)),
    ];
    for (name, g) in &pairs {
        let c = classify_pair(g);
        let fp = attractive_fixed_point(g)
            .map(|v| format!("{v:?}"))
            .unwrap_or_else(|e| format!("none ({e})"));
        println!(
            "{name:<24} {:?} λ={:?} μ={:?} left={} right={}\n{:<24} fixed point {fp}",
            c.tag,
            c.lambda,
            c.mu,
            c.left.name(),
            c.right.name(),
            ""
        );
    }

    // The Killing field of (Δ, 2Δ) at the identity is timelike.
    println!(
        "killing norm at I: {:.3}",
        killing_norm(DELTA, DELTA.scale(2.0), Mat2::IDENTITY)
    );
}
