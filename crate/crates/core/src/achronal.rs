//! Invisible domains E(Λ) of achronal boundary sets and the anatomy of the
//! elementary cases: splitting pairs, extreme lightlike segments and conical
//! tents.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boundary::{
    achronality_check, causal_relation, ein_to_null_vector, envelopes, BoundaryError,
    CausalRelation, Ein3Point, EinPoint, LipschitzEnvelope, LIGHTLIKE_TOL,
};
use crate::geometry::{
    matrix_to_vec, pairing, principal_angle, vec_to_matrix, CylCoord3, Mat2, Vec22,
};
use crate::isometry::IsometryPair;

/// Samples per lightlike segment of a conical or extreme datum.
pub const SEGMENT_SAMPLES: usize = 512;
/// Width of the horizon bands in normalized affine coordinates.
pub const HORIZON_TOL: f64 = 1e-6;
/// Extra uniform samples added to envelope vertices for core tests.
const ENVELOPE_EXTRA: usize = 256;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AchronalError {
    #[error("achronal datum is empty")]
    EmptySpec,
    #[error("degenerate datum: {0}")]
    DegenerateSpec(String),
    #[error("invalid datum: {0}")]
    InvalidSpec(String),
    #[error("operation needs a {0} datum")]
    WrongKind(&'static str),
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
}

/// The boundary datum Λ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SpecKind {
    Splitting {
        x: EinPoint,
        y: EinPoint,
    },
    Extreme {
        x: EinPoint,
        y: EinPoint,
    },
    Conical {
        x: EinPoint,
        z: EinPoint,
        y: EinPoint,
    },
    PointCloud(Vec<EinPoint>),
    LimitSet {
        points: Vec<EinPoint>,
        source: String,
    },
}

impl SpecKind {
    pub fn name(&self) -> &'static str {
        match self {
            SpecKind::Splitting { .. } => "splitting",
            SpecKind::Extreme { .. } => "extreme",
            SpecKind::Conical { .. } => "conical",
            SpecKind::PointCloud(_) => "point-cloud",
            SpecKind::LimitSet { .. } => "limit-set",
        }
    }
}

/// An achronal datum with its sampled points, null lifts and envelopes.
#[derive(Debug, Clone)]
pub struct AchronalSpec {
    pub kind: SpecKind,
    points: Vec<EinPoint>,
    sign: f64,
    lifts: Vec<Vec22>,
    plus: LipschitzEnvelope,
    minus: LipschitzEnvelope,
    plus_lifts: Vec<Vec22>,
    minus_lifts: Vec<Vec22>,
    normalizer: Option<IsometryPair>,
}

/// Points of the lightlike segment from `a` to its lightlike future `b`.
fn segment(a: EinPoint, b: EinPoint, n: usize) -> Vec<EinPoint> {
    let dtheta = b.theta - a.theta;
    let dphi = principal_angle(b.phi - a.phi);
    let dphi = if dphi >= 0.0 { dtheta } else { -dtheta };
    (0..n)
        .map(|k| {
            let s = k as f64 / (n - 1) as f64;
            EinPoint::new(a.phi + s * dphi, a.theta + s * dtheta)
        })
        .collect()
}

fn rel(a: EinPoint, b: EinPoint) -> CausalRelation {
    causal_relation(&a, &b, LIGHTLIKE_TOL)
}

impl AchronalSpec {
    fn build(kind: SpecKind, points: Vec<EinPoint>, n_grid: usize) -> Result<Self, AchronalError> {
        if points.is_empty() {
            return Err(AchronalError::EmptySpec);
        }
        let (plus, minus) = envelopes(&points, n_grid)?;
        let sign = lift_sign(&points);
        let lift = |p: &EinPoint| ein_to_null_vector(*p).scale(sign);
        let lifts = points.iter().map(lift).collect();
        let plus_lifts = plus.vertices(ENVELOPE_EXTRA).iter().map(lift).collect();
        let minus_lifts = minus.vertices(ENVELOPE_EXTRA).iter().map(lift).collect();
        let mut spec = AchronalSpec {
            kind,
            points,
            sign,
            lifts,
            plus,
            minus,
            plus_lifts,
            minus_lifts,
            normalizer: None,
        };
        if let Some((x, y)) = spec.splitting_pair() {
            spec.normalizer = Some(normalize_pair(spec.lift(x), spec.lift(y))?);
        }
        Ok(spec)
    }

    /// A pair of causally unrelated points.
    pub fn splitting(x: EinPoint, y: EinPoint, n_grid: usize) -> Result<Self, AchronalError> {
        if rel(x, y) != CausalRelation::Unrelated {
            return Err(AchronalError::InvalidSpec(
                "splitting points are causally related".into(),
            ));
        }
        Self::build(SpecKind::Splitting { x, y }, vec![x, y], n_grid)
    }

    /// A lightlike segment from `x` to `y`, with `y` in the lightlike future of `x`.
    pub fn extreme(x: EinPoint, y: EinPoint, n_grid: usize) -> Result<Self, AchronalError> {
        if rel(x, y) != CausalRelation::LightlikeFuture || y.theta - x.theta <= LIGHTLIKE_TOL {
            return Err(AchronalError::InvalidSpec(
                "extreme endpoint is not in the lightlike future".into(),
            ));
        }
        if y.theta - x.theta >= PI - LIGHTLIKE_TOL {
            return Err(AchronalError::InvalidSpec(
                "segment is pure lightlike".into(),
            ));
        }
        let pts = segment(x, y, SEGMENT_SAMPLES);
        Self::build(SpecKind::Extreme { x, y }, pts, n_grid)
    }

    /// A tent `[x, z] ∪ [z, y]` with `z` the common lightlike future corner.
    pub fn conical(
        x: EinPoint,
        z: EinPoint,
        y: EinPoint,
        n_grid: usize,
    ) -> Result<Self, AchronalError> {
        if rel(x, y) != CausalRelation::Unrelated {
            return Err(AchronalError::InvalidSpec(
                "tent feet are causally related".into(),
            ));
        }
        for foot in [x, y] {
            if rel(foot, z) != CausalRelation::LightlikeFuture || z.theta - foot.theta <= 0.0 {
                return Err(AchronalError::InvalidSpec(
                    "tent corner is not the lightlike future of both feet".into(),
                ));
            }
        }
        let mut pts = segment(x, z, SEGMENT_SAMPLES);
        let mut right = segment(y, z, SEGMENT_SAMPLES);
        right.pop();
        pts.extend(right);
        Self::build(SpecKind::Conical { x, z, y }, pts, n_grid)
    }

    /// A finite achronal point set that is not purely lightlike.
    pub fn point_cloud(points: Vec<EinPoint>, n_grid: usize) -> Result<Self, AchronalError> {
        Self::check_cloud(&points)?;
        Self::build(SpecKind::PointCloud(points.clone()), points, n_grid)
    }

    /// A sampled limit set.
    pub fn limit_set(
        points: Vec<EinPoint>,
        source: &str,
        n_grid: usize,
    ) -> Result<Self, AchronalError> {
        Self::check_cloud(&points)?;
        let kind = SpecKind::LimitSet {
            points: points.clone(),
            source: source.to_string(),
        };
        Self::build(kind, points, n_grid)
    }

    fn check_cloud(points: &[EinPoint]) -> Result<(), AchronalError> {
        if points.is_empty() {
            return Err(AchronalError::EmptySpec);
        }
        let res = achronality_check(points, false);
        if let Some((i, j)) = res.offending {
            return Err(BoundaryError::NonAchronalInput(i, j).into());
        }
        for (i, p) in points.iter().enumerate() {
            for q in &points[i + 1..] {
                if (q.theta - p.theta).abs() >= PI - LIGHTLIKE_TOL
                    && rel(*p, *q) != CausalRelation::Unrelated
                {
                    return Err(AchronalError::InvalidSpec(
                        "contains a point and its δ-image (pure lightlike)".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// The pair of feet for splitting and conical data.
    pub fn splitting_pair(&self) -> Option<(EinPoint, EinPoint)> {
        match self.kind {
            SpecKind::Splitting { x, y } | SpecKind::Conical { x, y, .. } => Some((x, y)),
            _ => None,
        }
    }

    /// Sampled points of Λ.
    pub fn points(&self) -> &[EinPoint] {
        &self.points
    }

    /// Coherent null lifts of the sampled points.
    pub fn lifts(&self) -> &[Vec22] {
        &self.lifts
    }

    pub fn lift(&self, p: EinPoint) -> Vec22 {
        ein_to_null_vector(p).scale(self.sign)
    }

    pub fn plus(&self) -> &LipschitzEnvelope {
        &self.plus
    }

    pub fn minus(&self) -> &LipschitzEnvelope {
        &self.minus
    }

    /// The isometry taking the feet of a splitting or conical datum to the
    /// standard frame.
    pub fn normalizer(&self) -> Option<&IsometryPair> {
        self.normalizer.as_ref()
    }

    /// Range of times covered by the envelopes.
    pub fn theta_window(&self) -> (f64, f64) {
        let lo = self
            .minus
            .grid()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let hi = self
            .plus
            .grid()
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let lo = self
            .minus
            .corners()
            .iter()
            .map(|c| c.theta)
            .fold(lo, f64::min);
        let hi = self
            .plus
            .corners()
            .iter()
            .map(|c| c.theta)
            .fold(hi, f64::max);
        (lo, hi)
    }
}

/// Global sign of the lifts: the lexicographically smallest point pairs
/// negatively with the basepoint, or with `(0,0,0,1)` when that vanishes.
fn lift_sign(points: &[EinPoint]) -> f64 {
    let anchor = points
        .iter()
        .min_by(|p, q| {
            p.phi_mod()
                .partial_cmp(&q.phi_mod())
                .unwrap()
                .then(p.theta.partial_cmp(&q.theta).unwrap())
        })
        .copied()
        .unwrap_or(EinPoint::new(0.0, 0.0));
    let a = ein_to_null_vector(anchor);
    let mut s = pairing(Vec22::BASEPOINT, a);
    if s.abs() < 1e-12 {
        s = pairing(Vec22::new(0.0, 0.0, 0.0, 1.0), a);
    }
    if s > 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Whether `pairing(v, p) < 0` for every lift `p` of Λ.
pub fn invisible_membership(spec: &AchronalSpec, v: Vec22) -> bool {
    spec.lifts.iter().all(|p| pairing(v, *p) < 0.0)
}

/// The cylinder version of invisibility: a lifted point of Êin₃ that is not
/// causally related to any sampled point of Λ.
pub fn invisible_membership_lifted(spec: &AchronalSpec, c: CylCoord3) -> bool {
    let v = Ein3Point::from_cyl(c);
    spec.points
        .iter()
        .all(|p| !causal_relation(&v, &Ein3Point::from_boundary(*p), 0.0).is_causal())
}

/// Signed distance to causal contact with Λ: `min_p (d(v,p) − |θ_v − θ_p|)`.
pub fn invisibility_slack_lifted(spec: &AchronalSpec, c: CylCoord3) -> f64 {
    let v = Ein3Point::from_cyl(c);
    spec.points
        .iter()
        .map(|p| {
            let b = Ein3Point::from_boundary(*p);
            crate::boundary::sphere_distance(v.sphere, b.sphere) - (v.theta - b.theta).abs()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Invisible domain of `Λ⁺` (future core) or `Λ⁻` (past core).
pub fn core_membership(spec: &AchronalSpec, v: Vec22, plus: bool) -> bool {
    let lifts = if plus {
        &spec.plus_lifts
    } else {
        &spec.minus_lifts
    };
    lifts.iter().all(|p| pairing(v, *p) < 0.0)
}

/// Writes a null rank-one matrix as `u·wᵀ`.
fn rank_one_factors(m: Mat2) -> ([f64; 2], [f64; 2]) {
    let r1 = m.a.hypot(m.b);
    let r2 = m.c.hypot(m.d);
    if r1 >= r2 {
        let k = (m.c * m.a + m.d * m.b) / (r1 * r1);
        ([1.0, k], [m.a, m.b])
    } else {
        let k = (m.a * m.c + m.b * m.d) / (r2 * r2);
        ([k, 1.0], [m.c, m.d])
    }
}

/// Standard null directions of the splitting frame: `(±1, 0, 1, 0)`.
pub const STANDARD_X: Vec22 = Vec22::new(1.0, 0.0, 1.0, 0.0);
pub const STANDARD_Y: Vec22 = Vec22::new(-1.0, 0.0, 1.0, 0.0);

/// Isometry mapping the null vectors `px`, `py` to positive multiples of
/// [`STANDARD_X`] and [`STANDARD_Y`]. Requires `⟨px, py⟩ < 0`.
pub fn normalize_pair(px: Vec22, py: Vec22) -> Result<IsometryPair, AchronalError> {
    let pp = pairing(px, py);
    if pp > -1e-12 * px.euclidean_norm() * py.euclidean_norm() {
        return Err(AchronalError::DegenerateSpec(format!(
            "lifts are not in splitting position (pairing {pp})"
        )));
    }
    let (ux, wx) = rank_one_factors(vec_to_matrix(px));
    let (uy, wy) = rank_one_factors(vec_to_matrix(py));
    let u = Mat2::new(ux[0], uy[0], ux[1], uy[1]);
    let w = Mat2::new(wx[0], wy[0], wx[1], wy[1]);
    let (du, dw) = (u.det(), w.det());
    let s1 = du.abs().sqrt();
    let t1 = dw.abs().sqrt();
    let d = Mat2::diag(s1, du / s1);
    let dp = Mat2::diag(t1, dw / t1);
    let gl = d * u
        .inverse()
        .ok_or(AchronalError::DegenerateSpec("dependent lifts".into()))?;
    let gr = dp.inverse().unwrap() * w.transpose();
    IsometryPair::new(gl, gr).map_err(|e| AchronalError::DegenerateSpec(e.to_string()))
}

/// The normalizing isometry of a splitting datum.
pub fn normalize_splitting(spec: &AchronalSpec) -> Result<IsometryPair, AchronalError> {
    match spec.kind {
        SpecKind::Splitting { .. } => Ok(*spec.normalizer.as_ref().unwrap()),
        _ => Err(AchronalError::WrongKind("splitting")),
    }
}

/// Affine chart `(x, y, z) = (x1, x2, y2) / y1` on the normalized frame.
pub fn affine_coords(v: Vec22) -> Option<[f64; 3]> {
    if v.y1 <= 0.0 {
        return None;
    }
    Some([v.x1 / v.y1, v.x2 / v.y1, v.y2 / v.y1])
}

/// The AdS point with affine coordinates `(x, y, z)`, when `x² + y² < 1 + z²`.
pub fn from_affine(p: [f64; 3]) -> Option<Vec22> {
    Vec22::new(p[0], p[1], 1.0, p[2]).to_quadric().ok()
}

/// Regions of E(Λ) for a splitting pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SplitRegion {
    End1,
    End2,
    FutureCore,
    PastCore,
    FutureHorizon,
    PastHorizon,
    Outside,
}

impl SplitRegion {
    pub fn label(self) -> &'static str {
        match self {
            SplitRegion::End1 => "end1",
            SplitRegion::End2 => "end2",
            SplitRegion::FutureCore => "future_core",
            SplitRegion::PastCore => "past_core",
            SplitRegion::FutureHorizon => "future_horizon",
            SplitRegion::PastHorizon => "past_horizon",
            SplitRegion::Outside => "outside",
        }
    }
}

/// Labels a point given in normalized affine coordinates.
///
/// In this chart `E(Λ)` is the slab `−1 < x < 1`, the ends are `|z| < ±y`,
/// the future core is `z > |y|` and the past core `z < −|y|`.
pub fn classify_affine(p: [f64; 3], tol_h: f64) -> SplitRegion {
    let [x, y, z] = p;
    if !(-1.0 < x && x < 1.0) {
        return SplitRegion::Outside;
    }
    if z >= 0.0 && (z - y.abs()).abs() <= tol_h {
        return SplitRegion::FutureHorizon;
    }
    if z < 0.0 && (z + y.abs()).abs() <= tol_h {
        return SplitRegion::PastHorizon;
    }
    if z > y.abs() {
        SplitRegion::FutureCore
    } else if z < -y.abs() {
        SplitRegion::PastCore
    } else if y > 0.0 {
        SplitRegion::End1
    } else {
        SplitRegion::End2
    }
}

/// Normalized affine coordinates of `v` in the frame of a splitting or
/// conical datum, or `None` outside the slab.
pub fn normalized_affine(spec: &AchronalSpec, v: Vec22) -> Option<[f64; 3]> {
    let n = spec.normalizer.as_ref()?;
    let w = n.act(v);
    let m = vec_to_matrix(w);
    if m.a <= 0.0 || m.d <= 0.0 {
        return None;
    }
    affine_coords(w)
}

/// Region label of `v` for a splitting or conical datum.
pub fn split_region_classify(
    spec: &AchronalSpec,
    v: Vec22,
    tol_h: f64,
) -> Result<SplitRegion, AchronalError> {
    if spec.normalizer.is_none() {
        return Err(AchronalError::WrongKind("splitting"));
    }
    Ok(match normalized_affine(spec, v) {
        Some(p) => classify_affine(p, tol_h),
        None => SplitRegion::Outside,
    })
}

/// Upper and lower tent corners of a splitting pair in the lifted cylinder.
pub fn tent_corners(spec: &AchronalSpec) -> Result<(Vec<EinPoint>, Vec<EinPoint>), AchronalError> {
    if spec.splitting_pair().is_none() {
        return Err(AchronalError::WrongKind("splitting"));
    }
    Ok((spec.plus.corners(), spec.minus.corners()))
}

/// Null vector of the rank-one matrix with the given factors, for tests.
#[doc(hidden)]
pub fn rank_one(u: [f64; 2], w: [f64; 2]) -> Vec22 {
    matrix_to_vec(Mat2::new(
        u[0] * w[0],
        u[0] * w[1],
        u[1] * w[0],
        u[1] * w[1],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::DEFAULT_GRID;
    use crate::geometry::testutil::random_ads;
    use crate::geometry::{conformal_coords, quadratic_form};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn standard() -> AchronalSpec {
        AchronalSpec::splitting(
            EinPoint::new(0.0, 0.0),
            EinPoint::new(PI, 0.0),
            DEFAULT_GRID,
        )
        .unwrap()
    }

    fn conical() -> AchronalSpec {
        AchronalSpec::conical(
            EinPoint::new(0.0, 0.0),
            EinPoint::new(FRAC_PI_2, FRAC_PI_2),
            EinPoint::new(PI, 0.0),
            DEFAULT_GRID,
        )
        .unwrap()
    }

    fn extreme() -> AchronalSpec {
        let q = PI / 4.0;
        AchronalSpec::extreme(EinPoint::new(-q, -q), EinPoint::new(q, q), DEFAULT_GRID).unwrap()
    }

    #[test]
    fn construction_rules() {
        let a = EinPoint::new(0.0, 0.0);
        assert!(AchronalSpec::splitting(a, EinPoint::new(PI, PI), 64).is_err());
        assert!(AchronalSpec::extreme(a, EinPoint::new(0.5, 0.5), 64).is_ok());
        assert!(AchronalSpec::extreme(a, EinPoint::new(0.5, 0.2), 64).is_err());
        assert!(AchronalSpec::extreme(a, EinPoint::new(PI, PI), 64).is_err());
        assert!(AchronalSpec::point_cloud(vec![a, EinPoint::new(PI, PI)], 64).is_err());
        assert!(AchronalSpec::point_cloud(vec![a, EinPoint::new(0.1, 1.0)], 64).is_err());
        assert_eq!(
            AchronalSpec::point_cloud(vec![], 64).unwrap_err(),
            AchronalError::EmptySpec
        );
        let c = conical();
        assert_eq!(c.points().len(), 2 * SEGMENT_SAMPLES - 1);
        for p in c.lifts() {
            assert!(quadratic_form(*p).abs() < 1e-12);
        }
    }

    #[test]
    fn invisibility_examples() {
        let s = standard();
        assert!(invisible_membership(&s, Vec22::BASEPOINT));
        for p in s.lifts() {
            assert_eq!(pairing(Vec22::BASEPOINT, *p), -1.0);
        }
        // A point in the strict future of x = (0, 0) is not invisible.
        let v = CylCoord3::new(0.5, 1.2, 0.0).to_vec22();
        assert!(!invisible_membership(&s, v));
        // Conical: E(Λ) is {z > y} in the slab.
        let c = conical();
        let inside = from_affine([0.0, -0.5, 0.0]).unwrap();
        let core = from_affine([0.0, 0.0, 0.5]).unwrap();
        let end1 = from_affine([0.0, 0.5, 0.0]).unwrap();
        assert!(invisible_membership(&c, inside));
        assert!(invisible_membership(&c, core));
        assert!(!invisible_membership(&c, end1));
    }

    #[test]
    fn pairing_and_cylinder_tests_agree() {
        let s = standard();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut n = 0;
        while n < 3000 {
            let c = CylCoord3::new(
                rng.gen_range(-FRAC_PI_2..FRAC_PI_2),
                rng.gen_range(0.0..1.5),
                rng.gen_range(-PI..PI),
            );
            if invisibility_slack_lifted(&s, c).abs() < 1e-9 {
                continue;
            }
            n += 1;
            assert_eq!(
                invisible_membership(&s, c.to_vec22()),
                invisible_membership_lifted(&s, c)
            );
        }
    }

    #[test]
    fn standard_pair_normalizes_to_identity() {
        let s = standard();
        let n = normalize_splitting(&s).unwrap();
        assert!(n.gl.max_abs_diff(Mat2::IDENTITY) < 1e-15);
        assert!(n.gr.max_abs_diff(Mat2::IDENTITY) < 1e-15);
    }

    #[test]
    fn random_pairs_normalize_to_standard_frame() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut done = 0;
        while done < 200 {
            let x = EinPoint::new(rng.gen_range(-PI..PI), rng.gen_range(-1.0..1.0));
            let y = EinPoint::new(rng.gen_range(-PI..PI), rng.gen_range(-1.0..1.0));
            let Ok(s) = AchronalSpec::splitting(x, y, 64) else {
                continue;
            };
            if circle_gap(x, y) < 1e-3 {
                continue;
            }
            done += 1;
            let n = normalize_splitting(&s).unwrap();
            let (ix, iy) = (n.act(s.lift(x)), n.act(s.lift(y)));
            let gram = pairing(ix, iy);
            assert!((gram - pairing(s.lift(x), s.lift(y))).abs() < 1e-8);
            let kx = ix.x1;
            let ky = iy.y1;
            assert!(kx > 0.0 && ky > 0.0);
            assert!((ix - STANDARD_X.scale(kx)).euclidean_norm() < 1e-8 * kx.max(1.0));
            assert!((iy - STANDARD_Y.scale(ky)).euclidean_norm() < 1e-8 * ky.max(1.0));
        }
    }

    fn circle_gap(x: EinPoint, y: EinPoint) -> f64 {
        crate::geometry::circle_distance(x.phi, y.phi) - (x.theta - y.theta).abs()
    }

    #[test]
    fn affine_classification_examples() {
        assert_eq!(
            classify_affine([0.0, 0.5, 0.4], HORIZON_TOL),
            SplitRegion::End1
        );
        assert_eq!(
            classify_affine([0.0, 0.0, 0.5], HORIZON_TOL),
            SplitRegion::FutureCore
        );
        assert_eq!(
            classify_affine([0.0, 0.5, 0.5], HORIZON_TOL),
            SplitRegion::FutureHorizon
        );
        assert_eq!(
            classify_affine([0.0, -0.5, 0.1], HORIZON_TOL),
            SplitRegion::End2
        );
        assert_eq!(
            classify_affine([0.0, 0.2, -0.5], HORIZON_TOL),
            SplitRegion::PastCore
        );
        assert_eq!(
            classify_affine([1.5, 0.0, 0.0], HORIZON_TOL),
            SplitRegion::Outside
        );
        let s = standard();
        let v = from_affine([0.0, 0.5, 0.4]).unwrap();
        assert_eq!(
            split_region_classify(&s, v, HORIZON_TOL).unwrap(),
            SplitRegion::End1
        );
        assert_eq!(
            split_region_classify(&s, -v, HORIZON_TOL).unwrap(),
            SplitRegion::Outside
        );
    }

    /// Region predicates from pairings with the corner lifts, in the original frame.
    fn corner_predicates(s: &AchronalSpec, v: Vec22) -> [bool; 4] {
        let (upper, lower) = tent_corners(s).unwrap();
        // Upper corners above Δ₁ and Δ₂, lower corners below them.
        let c1 = s.lift(upper[0]);
        let c2 = s.lift(upper[1]);
        let l1 = s.lift(lower[0]);
        let l2 = s.lift(lower[1]);
        // P_i: past of the upper corner; F_i: future of the lower corner.
        [
            pairing(v, c1) > 0.0,
            pairing(v, l1) > 0.0,
            pairing(v, c2) > 0.0,
            pairing(v, l2) > 0.0,
        ]
    }

    #[test]
    fn partition_matches_corner_pairings() {
        let s = standard();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let mut n = 0;
        while n < 10_000 {
            let v = random_ads(&mut rng, 2.0);
            if !invisible_membership(&s, v) {
                continue;
            }
            n += 1;
            let label = split_region_classify(&s, v, HORIZON_TOL).unwrap();
            let [p1, f1, p2, f2] = corner_predicates(&s, v);
            let expect = match (p1, f1, p2, f2) {
                (true, true, false, false) => SplitRegion::End1,
                (false, false, true, true) => SplitRegion::End2,
                (false, true, false, true) => SplitRegion::FutureCore,
                (true, false, true, false) => SplitRegion::PastCore,
                _ => continue,
            };
            if matches!(label, SplitRegion::FutureHorizon | SplitRegion::PastHorizon) {
                continue;
            }
            assert_eq!(label, expect);
            assert_eq!(
                core_membership(&s, v, true),
                label == SplitRegion::FutureCore
            );
            assert_eq!(
                core_membership(&s, v, false),
                label == SplitRegion::PastCore
            );
        }
    }

    #[test]
    fn conical_invisible_set_is_future_of_second_diamond() {
        let s = standard();
        let c = conical();
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for _ in 0..20_000 {
            let v = random_ads(&mut rng, 2.0);
            let Some(p) = normalized_affine(&s, v) else {
                continue;
            };
            if (p[2] - p[1]).abs() < 1e-9 || !invisible_membership(&s, v) {
                continue;
            }
            let label = classify_affine(p, HORIZON_TOL);
            let expect = matches!(label, SplitRegion::FutureCore | SplitRegion::End2);
            if matches!(label, SplitRegion::FutureHorizon | SplitRegion::PastHorizon) {
                continue;
            }
            assert_eq!(invisible_membership(&c, v), expect, "{p:?}");
        }
    }

    #[test]
    fn extreme_cores_are_empty() {
        let e = extreme();
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        for _ in 0..20_000 {
            let v = random_ads(&mut rng, 2.5);
            assert!(!core_membership(&e, v, true));
            assert!(!core_membership(&e, v, false));
        }
    }

    #[test]
    fn adding_points_never_grows_the_invisible_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        let base = vec![EinPoint::new(0.0, 0.0), EinPoint::new(PI, 0.0)];
        let more = {
            let mut m = base.clone();
            m.push(EinPoint::new(FRAC_PI_2, 0.3));
            m.push(EinPoint::new(-FRAC_PI_2, -0.2));
            m
        };
        let a = AchronalSpec::point_cloud(base, 256).unwrap();
        let b = AchronalSpec::point_cloud(more, 256).unwrap();
        for _ in 0..10_000 {
            let v = random_ads(&mut rng, 2.0);
            assert!(!invisible_membership(&b, v) || invisible_membership(&a, v));
        }
    }

    proptest! {
        #[test]
        fn holonomy_preserves_invisibility(seed in any::<u64>(), l in 0.2f64..1.5, m in 0.2f64..1.5) {
            use crate::geometry::DELTA;
            // (exp(uΔ), exp(−vΔ)) fixes both standard feet.
            let s = standard();
            let g = IsometryPair::from_logs(DELTA.scale(l), DELTA.scale(-m));
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..50 {
                let v = random_ads(&mut rng, 2.0);
                let w = g.act(v);
                let slack = s.lifts().iter().map(|p| pairing(v, *p).abs()).fold(f64::INFINITY, f64::min);
                if slack < 1e-7 {
                    continue;
                }
                prop_assert_eq!(invisible_membership(&s, v), invisible_membership(&s, w));
                let c = conformal_coords(w);
                prop_assert!(c.rho_prime.is_finite());
            }
        }
    }
}
