//! Causality on the Einstein cylinders Êin₂ = S¹×R and Êin₃ = S²×R,
//! Lipschitz envelopes of achronal point sets and their invisible region Ω.
//!
//! Both cylinders carry the product metric `ds² − dθ²`, so `b` lies in the
//! causal future of `a` exactly when `θ_b − θ_a ≥ d(a, b)`, with `d` the
//! round distance on the spatial factor.

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{circle_distance, pairing, CylCoord3, Vec22};

/// Tolerance for lightlike contact between exact points.
pub const LIGHTLIKE_TOL: f64 = 1e-9;
/// Default envelope grid resolution.
pub const DEFAULT_GRID: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundaryError {
    #[error("empty point set")]
    EmptyInput,
    #[error("points {0} and {1} are timelike related")]
    NonAchronalInput(usize, usize),
}

/// A point of the universal cover Êin₂.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EinPoint {
    pub phi: f64,
    pub theta: f64,
}

impl EinPoint {
    pub const fn new(phi: f64, theta: f64) -> Self {
        EinPoint { phi, theta }
    }

    /// The generator of the center: `(φ, θ) ↦ (φ + π, θ + π)`.
    pub fn delta(self) -> Self {
        EinPoint::new(self.phi + PI, self.theta + PI)
    }

    pub fn delta_inv(self) -> Self {
        EinPoint::new(self.phi - PI, self.theta - PI)
    }

    /// The longitude reduced to `[0, 2π)`.
    pub fn phi_mod(self) -> f64 {
        self.phi.rem_euclid(TAU)
    }

    /// Cylinder metric distance used for deduplication and Hausdorff distances.
    pub fn cylinder_distance(self, o: EinPoint) -> f64 {
        circle_distance(self.phi, o.phi).hypot(self.theta - o.theta)
    }
}

/// A point of the universal cover Êin₃.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ein3Point {
    pub sphere: [f64; 3],
    pub theta: f64,
}

impl Ein3Point {
    pub fn from_cyl(c: CylCoord3) -> Self {
        Ein3Point {
            sphere: c.sphere_point(),
            theta: c.theta,
        }
    }

    /// A boundary point of Êin₂ seen inside Êin₃ (on the equator).
    pub fn from_boundary(p: EinPoint) -> Self {
        Ein3Point {
            sphere: [0.0, p.phi.cos(), p.phi.sin()],
            theta: p.theta,
        }
    }
}

/// Points of a cylinder over a round space.
pub trait CylinderPoint: Copy {
    fn time(&self) -> f64;
    fn spatial_distance(&self, other: &Self) -> f64;
}

impl CylinderPoint for EinPoint {
    fn time(&self) -> f64 {
        self.theta
    }
    fn spatial_distance(&self, other: &Self) -> f64 {
        circle_distance(self.phi, other.phi)
    }
}

impl CylinderPoint for Ein3Point {
    fn time(&self) -> f64 {
        self.theta
    }
    fn spatial_distance(&self, other: &Self) -> f64 {
        sphere_distance(self.sphere, other.sphere)
    }
}

/// Great-circle distance between unit vectors, accurate for small and large angles.
pub fn sphere_distance(a: [f64; 3], b: [f64; 3]) -> f64 {
    let cross = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    let sin = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
    let cos = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    sin.atan2(cos)
}

/// Causal position of `b` relative to `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CausalRelation {
    StrictFuture,
    LightlikeFuture,
    Unrelated,
    LightlikePast,
    StrictPast,
}

impl CausalRelation {
    pub fn reversed(self) -> Self {
        match self {
            CausalRelation::StrictFuture => CausalRelation::StrictPast,
            CausalRelation::LightlikeFuture => CausalRelation::LightlikePast,
            CausalRelation::Unrelated => CausalRelation::Unrelated,
            CausalRelation::LightlikePast => CausalRelation::LightlikeFuture,
            CausalRelation::StrictPast => CausalRelation::StrictFuture,
        }
    }

    /// True unless the points are unrelated.
    pub fn is_causal(self) -> bool {
        self != CausalRelation::Unrelated
    }

    pub fn is_strict(self) -> bool {
        matches!(
            self,
            CausalRelation::StrictFuture | CausalRelation::StrictPast
        )
    }

    pub fn is_future(self) -> bool {
        matches!(
            self,
            CausalRelation::StrictFuture | CausalRelation::LightlikeFuture
        )
    }
}

/// Relation of `b` with respect to `a`; lightlike within `tol`.
pub fn causal_relation<P: CylinderPoint>(a: &P, b: &P, tol: f64) -> CausalRelation {
    let dt = b.time() - a.time();
    let d = a.spatial_distance(b);
    if dt - d > tol {
        CausalRelation::StrictFuture
    } else if -dt - d > tol {
        CausalRelation::StrictPast
    } else if (dt - d).abs() <= tol && dt >= 0.0 {
        CausalRelation::LightlikeFuture
    } else if (dt + d).abs() <= tol {
        CausalRelation::LightlikePast
    } else {
        CausalRelation::Unrelated
    }
}

/// Outcome of [`achronality_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Achronality {
    pub achronal: bool,
    pub offending: Option<(usize, usize)>,
}

/// Pairwise achronality test. With `strict`, lightlike contact also fails.
pub fn achronality_check(points: &[EinPoint], strict: bool) -> Achronality {
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let rel = causal_relation(&points[i], &points[j], LIGHTLIKE_TOL);
            let bad = if strict {
                rel.is_causal()
            } else {
                rel.is_strict()
            };
            if bad {
                return Achronality {
                    achronal: false,
                    offending: Some((i, j)),
                };
            }
        }
    }
    Achronality {
        achronal: true,
        offending: None,
    }
}

/// Upper or lower Lipschitz envelope of an achronal point set.
///
/// The upper envelope is `Λ⁺(φ) = min_p (θ_p + d(φ, φ_p))` and the lower one is
/// `Λ⁻(φ) = max_p (θ_p − d(φ, φ_p))`. Between two consecutive points the
/// envelope is a single tent, which gives exact evaluation in `O(log n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzEnvelope {
    upper: bool,
    /// Generating points with `phi ∈ [0, 2π)`, sorted by `phi`.
    points: Vec<EinPoint>,
    grid: Vec<f64>,
}

impl LipschitzEnvelope {
    fn build(points: &[EinPoint], upper: bool, n_grid: usize) -> Self {
        let mut pts: Vec<EinPoint> = points
            .iter()
            .map(|p| EinPoint::new(p.phi_mod(), p.theta))
            .collect();
        pts.sort_by(|p, q| {
            p.phi
                .partial_cmp(&q.phi)
                .unwrap_or(Ordering::Equal)
                .then(p.theta.partial_cmp(&q.theta).unwrap_or(Ordering::Equal))
        });
        pts.dedup_by(|p, q| p.phi == q.phi && p.theta == q.theta);
        let mut env = LipschitzEnvelope {
            upper,
            points: pts,
            grid: Vec::new(),
        };
        env.grid = (0..n_grid)
            .map(|k| env.eval(TAU * k as f64 / n_grid as f64))
            .collect();
        env
    }

    pub fn is_upper(&self) -> bool {
        self.upper
    }

    pub fn points(&self) -> &[EinPoint] {
        &self.points
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn n_grid(&self) -> usize {
        self.grid.len()
    }

    /// Neighbouring generating points around `phi`, unwrapped so that
    /// `left.phi ≤ phi ≤ right.phi`.
    fn gap(&self, phi: f64) -> (EinPoint, EinPoint, f64) {
        let n = self.points.len();
        let phi = phi.rem_euclid(TAU);
        let idx = self.points.partition_point(|p| p.phi <= phi);
        let (left, right) = if idx == 0 {
            let l = self.points[n - 1];
            (EinPoint::new(l.phi - TAU, l.theta), self.points[0])
        } else if idx == n {
            let r = self.points[0];
            (self.points[n - 1], EinPoint::new(r.phi + TAU, r.theta))
        } else {
            (self.points[idx - 1], self.points[idx])
        };
        (left, right, phi)
    }

    /// Exact value of the envelope at `phi`.
    pub fn eval(&self, phi: f64) -> f64 {
        let (l, r, phi) = self.gap(phi);
        if self.upper {
            (l.theta + (phi - l.phi)).min(r.theta + (r.phi - phi))
        } else {
            (l.theta - (phi - l.phi)).max(r.theta - (r.phi - phi))
        }
    }

    /// Brute-force evaluation of the defining min/max formula.
    pub fn eval_brute(&self, phi: f64) -> f64 {
        let it = self.points.iter().map(|p| {
            let d = circle_distance(phi, p.phi);
            if self.upper {
                p.theta + d
            } else {
                p.theta - d
            }
        });
        if self.upper {
            it.fold(f64::INFINITY, f64::min)
        } else {
            it.fold(f64::NEG_INFINITY, f64::max)
        }
    }

    /// Apexes of the tents between consecutive generating points: the local
    /// maxima of `Λ⁺` (or minima of `Λ⁻`).
    pub fn corners(&self) -> Vec<EinPoint> {
        let n = self.points.len();
        let sign = if self.upper { 1.0 } else { -1.0 };
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let l = self.points[i];
            let r = if i + 1 < n {
                self.points[i + 1]
            } else {
                let r = self.points[0];
                EinPoint::new(r.phi + TAU, r.theta)
            };
            if r.phi - l.phi <= 0.0 {
                continue;
            }
            let phi = 0.5 * (l.phi + r.phi + sign * (r.theta - l.theta));
            let theta = 0.5 * (l.theta + r.theta + sign * (r.phi - l.phi));
            let phi = phi.clamp(l.phi, r.phi);
            out.push(EinPoint::new(phi, theta));
        }
        out
    }

    /// Generating points, tent apexes and `n_extra` uniformly spaced samples.
    pub fn vertices(&self, n_extra: usize) -> Vec<EinPoint> {
        let mut v = self.points.clone();
        v.extend(self.corners());
        for k in 0..n_extra {
            let phi = TAU * k as f64 / n_extra as f64;
            v.push(EinPoint::new(phi, self.eval(phi)));
        }
        v
    }

    /// Largest excess of `|Λ(φ_i) − Λ(φ_j)|` over `d(φ_i, φ_j)` on adjacent grid nodes.
    pub fn max_lipschitz_violation(&self) -> f64 {
        let n = self.grid.len();
        let step = TAU / n as f64;
        (0..n)
            .map(|k| (self.grid[(k + 1) % n] - self.grid[k]).abs() - step)
            .fold(0.0, f64::max)
    }
}

/// Upper and lower envelopes of an achronal point set.
pub fn envelopes(
    points: &[EinPoint],
    n_grid: usize,
) -> Result<(LipschitzEnvelope, LipschitzEnvelope), BoundaryError> {
    if points.is_empty() {
        return Err(BoundaryError::EmptyInput);
    }
    let check = achronality_check(points, false);
    if let Some((i, j)) = check.offending {
        return Err(BoundaryError::NonAchronalInput(i, j));
    }
    Ok((
        LipschitzEnvelope::build(points, true, n_grid),
        LipschitzEnvelope::build(points, false, n_grid),
    ))
}

/// Whether `p` lies in the open region Ω between the envelopes.
pub fn omega_membership(
    plus: &LipschitzEnvelope,
    minus: &LipschitzEnvelope,
    p: EinPoint,
    tol: f64,
) -> bool {
    minus.eval(p.phi) + tol < p.theta && p.theta < plus.eval(p.phi) - tol
}

/// The null vector `(cos φ, sin φ, cos θ, sin θ)` of a boundary point.
pub fn ein_to_null_vector(p: EinPoint) -> Vec22 {
    Vec22::new(p.phi.cos(), p.phi.sin(), p.theta.cos(), p.theta.sin())
}

/// Null representatives of a point set with one sign for the whole set.
///
/// The vectors `(cos φ, sin φ, cos θ, sin θ)` already encode the lifted time,
/// so a single global sign keeps every pairing test consistent. The sign is
/// chosen so that the lexicographically smallest point pairs negatively with
/// the basepoint (or with `(0,0,0,1)` when that pairing vanishes).
pub fn coherent_lift(points: &[EinPoint]) -> Vec<Vec22> {
    let Some(anchor) = points.iter().min_by(|p, q| {
        p.phi_mod()
            .partial_cmp(&q.phi_mod())
            .unwrap_or(Ordering::Equal)
            .then(p.theta.partial_cmp(&q.theta).unwrap_or(Ordering::Equal))
    }) else {
        return Vec::new();
    };
    let a = ein_to_null_vector(*anchor);
    let mut s = pairing(Vec22::BASEPOINT, a);
    if s.abs() < 1e-12 {
        s = pairing(Vec22::new(0.0, 0.0, 0.0, 1.0), a);
    }
    let sign = if s > 0.0 { -1.0 } else { 1.0 };
    points
        .iter()
        .map(|p| ein_to_null_vector(*p).scale(sign))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::quadratic_form;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rel(a: (f64, f64), b: (f64, f64)) -> CausalRelation {
        causal_relation(
            &EinPoint::new(a.0, a.1),
            &EinPoint::new(b.0, b.1),
            LIGHTLIKE_TOL,
        )
    }

    #[test]
    fn causal_relation_examples() {
        assert_eq!(rel((0.0, 0.0), (PI, PI)), CausalRelation::LightlikeFuture);
        assert_eq!(rel((0.0, 0.0), (PI, 0.0)), CausalRelation::Unrelated);
        let c = CylCoord3::new(0.0, 0.7, 1.3);
        let a = Ein3Point::from_cyl(c);
        let b = Ein3Point::from_cyl(CylCoord3 { theta: 0.1, ..c });
        assert_eq!(
            causal_relation(&a, &b, LIGHTLIKE_TOL),
            CausalRelation::StrictFuture
        );
        assert_eq!(
            causal_relation(&b, &a, LIGHTLIKE_TOL),
            CausalRelation::StrictPast
        );
    }

    #[test]
    fn achronality_examples() {
        let pair = [EinPoint::new(0.0, 0.0), EinPoint::new(PI, 0.0)];
        assert!(achronality_check(&pair, true).achronal);
        let light = [EinPoint::new(0.0, 0.0), EinPoint::new(PI, PI)];
        assert!(achronality_check(&light, false).achronal);
        assert!(!achronality_check(&light, true).achronal);
        let timelike = [EinPoint::new(0.0, 0.0), EinPoint::new(0.1, PI)];
        let res = achronality_check(&timelike, false);
        assert_eq!(res.offending, Some((0, 1)));
        assert_eq!(
            envelopes(&timelike, 64),
            Err(BoundaryError::NonAchronalInput(0, 1))
        );
        assert_eq!(envelopes(&[], 64), Err(BoundaryError::EmptyInput));
    }

    #[test]
    fn splitting_envelopes() {
        let pair = [EinPoint::new(0.0, 0.0), EinPoint::new(PI, 0.0)];
        let (plus, minus) = envelopes(&pair, DEFAULT_GRID).unwrap();
        assert!((plus.eval(PI / 2.0) - PI / 2.0).abs() < 1e-15);
        assert!((minus.eval(PI / 2.0) + PI / 2.0).abs() < 1e-15);
        let corners = plus.corners();
        assert_eq!(corners.len(), 2);
        assert!((corners[0].phi - PI / 2.0).abs() < 1e-15);
        assert!((corners[0].theta - PI / 2.0).abs() < 1e-15);
        assert!((corners[1].phi - 3.0 * PI / 2.0).abs() < 1e-15);
        assert!((corners[1].theta - PI / 2.0).abs() < 1e-15);
        assert!(omega_membership(
            &plus,
            &minus,
            EinPoint::new(PI / 2.0, 0.0),
            LIGHTLIKE_TOL
        ));
        assert!(!omega_membership(
            &plus,
            &minus,
            EinPoint::new(PI / 2.0, PI / 2.0),
            LIGHTLIKE_TOL
        ));
        assert!(!omega_membership(
            &plus,
            &minus,
            EinPoint::new(0.0, 0.0),
            LIGHTLIKE_TOL
        ));
    }

    #[test]
    fn single_point_envelope() {
        let (plus, _) = envelopes(&[EinPoint::new(0.0, 0.0)], 256).unwrap();
        for k in 0..100 {
            let phi = -PI + 0.0628 * k as f64;
            assert!((plus.eval(phi) - circle_distance(phi, 0.0)).abs() < 1e-14);
        }
        let c = plus.corners();
        assert_eq!(c.len(), 1);
        assert!((c[0].phi - PI).abs() < 1e-15 && (c[0].theta - PI).abs() < 1e-15);
    }

    #[test]
    fn null_vector_examples() {
        assert_eq!(
            ein_to_null_vector(EinPoint::new(0.0, 0.0)),
            Vec22::new(1.0, 0.0, 1.0, 0.0)
        );
        let v = ein_to_null_vector(EinPoint::new(PI, 0.0));
        assert!((v - Vec22::new(-1.0, 0.0, 1.0, 0.0)).euclidean_norm() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let p = EinPoint::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
            assert!(quadratic_form(ein_to_null_vector(p)).abs() < 1e-14);
        }
        let lifts = coherent_lift(&[EinPoint::new(PI, 0.0), EinPoint::new(0.0, PI)]);
        assert!(pairing(Vec22::BASEPOINT, lifts[1]) < 0.0);
        assert_eq!(
            lifts[0],
            ein_to_null_vector(EinPoint::new(PI, 0.0)).scale(-1.0)
        );
    }

    /// Random achronal sets: points on the graph of a random 1-Lipschitz function.
    fn random_achronal(rng: &mut ChaCha8Rng, n: usize) -> Vec<EinPoint> {
        let anchors: Vec<EinPoint> = (0..3)
            .map(|_| EinPoint::new(rng.gen_range(0.0..TAU), rng.gen_range(-0.5..0.5)))
            .collect();
        let f = |phi: f64| {
            anchors
                .iter()
                .map(|a| a.theta + 0.9 * circle_distance(phi, a.phi))
                .fold(f64::INFINITY, f64::min)
        };
        (0..n)
            .map(|_| {
                let phi = rng.gen_range(0.0..TAU);
                EinPoint::new(phi, f(phi))
            })
            .collect()
    }

    #[test]
    fn envelope_matches_brute_force_and_is_lipschitz() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let pts = random_achronal(&mut rng, 12);
            let (plus, minus) = envelopes(&pts, 1024).unwrap();
            for k in 0..500 {
                let phi = TAU * k as f64 / 500.0;
                assert!((plus.eval(phi) - plus.eval_brute(phi)).abs() < 1e-12);
                assert!((minus.eval(phi) - minus.eval_brute(phi)).abs() < 1e-12);
                assert!(minus.eval(phi) <= plus.eval(phi) + 1e-12);
            }
            for p in &pts {
                assert!((plus.eval(p.phi) - p.theta).abs() < 1e-12);
                assert!((minus.eval(p.phi) - p.theta).abs() < 1e-12);
            }
            assert!(plus.max_lipschitz_violation() < TAU / 1024.0);
            assert!(minus.max_lipschitz_violation() < TAU / 1024.0);
        }
    }

    #[test]
    fn causal_transitivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut checked = 0;
        while checked < 1000 {
            let mut p = || {
                Ein3Point::from_cyl(CylCoord3::new(
                    rng.gen_range(-2.0..2.0),
                    rng.gen_range(0.0..PI / 2.0),
                    rng.gen_range(0.0..TAU),
                ))
            };
            let (a, b, c) = (p(), p(), p());
            let ab = causal_relation(&a, &b, 0.0);
            let bc = causal_relation(&b, &c, 0.0);
            if ab == CausalRelation::StrictFuture && bc == CausalRelation::StrictFuture {
                assert_eq!(causal_relation(&a, &c, 0.0), CausalRelation::StrictFuture);
                checked += 1;
            }
        }
    }

    #[test]
    fn union_envelope_is_pointwise_min() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let pts = random_achronal(&mut rng, 20);
        let (a, b) = pts.split_at(9);
        let (pa, ma) = envelopes(a, 512).unwrap();
        let (pb, mb) = envelopes(b, 512).unwrap();
        let (pu, mu) = envelopes(&pts, 512).unwrap();
        for k in 0..512 {
            assert!((pu.grid()[k] - pa.grid()[k].min(pb.grid()[k])).abs() < 1e-12);
            assert!((mu.grid()[k] - ma.grid()[k].max(mb.grid()[k])).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn relation_is_antisymmetric(
            a in (0.0..TAU, -3.0f64..3.0),
            b in (0.0..TAU, -3.0f64..3.0),
        ) {
            let (p, q) = (EinPoint::new(a.0, a.1), EinPoint::new(b.0, b.1));
            let r = causal_relation(&p, &q, LIGHTLIKE_TOL);
            let s = causal_relation(&q, &p, LIGHTLIKE_TOL);
            if p != q {
                prop_assert_eq!(r.reversed(), s);
            }
        }

        #[test]
        fn orthogonal_lifts_are_lightlike(
            a in (0.0..TAU, -PI..PI),
            b in (0.0..TAU, -PI..PI),
        ) {
            let (p, q) = (EinPoint::new(a.0, a.1), EinPoint::new(b.0, b.1));
            let orth = pairing(ein_to_null_vector(p), ein_to_null_vector(q)).abs() < 1e-12;
            let light = (-1..=1).any(|k| {
                let qk = EinPoint::new(q.phi, q.theta + TAU * k as f64);
                let r = causal_relation(&p, &qk, 1e-9);
                matches!(r, CausalRelation::LightlikeFuture | CausalRelation::LightlikePast)
            });
            if orth {
                prop_assert!(light);
            }
            if light {
                prop_assert!(
                    pairing(ein_to_null_vector(p), ein_to_null_vector(q)).abs() < 1e-8
                );
            }
        }
    }
}
