//! Isometries of AdS as pairs `(g_L, g_R)` acting by `x ↦ g_L·x·g_R⁻¹`,
//! their classification, fixed points and Killing fields.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{matrix_to_vec, vec_to_matrix, GeometryError, Mat2, Vec22};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IsometryError {
    #[error("no unique dominant invariant direction ({0})")]
    NoDominantDirection(&'static str),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// An element of `G × G`, optionally with Lie algebra representatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsometryPair {
    pub gl: Mat2,
    pub gr: Mat2,
    pub logl: Option<Mat2>,
    pub logr: Option<Mat2>,
}

impl IsometryPair {
    /// A pair of unit-determinant matrices.
    pub fn new(gl: Mat2, gr: Mat2) -> Result<Self, GeometryError> {
        gl.check_unimodular()?;
        gr.check_unimodular()?;
        Ok(IsometryPair {
            gl,
            gr,
            logl: None,
            logr: None,
        })
    }

    /// `(exp X_L, exp X_R)` with the logarithms recorded.
    pub fn from_logs(xl: Mat2, xr: Mat2) -> Self {
        IsometryPair {
            gl: xl.exp(),
            gr: xr.exp(),
            logl: Some(xl),
            logr: Some(xr),
        }
    }

    pub fn identity() -> Self {
        IsometryPair::from_logs(Mat2::ZERO, Mat2::ZERO)
    }

    pub fn inverse(&self) -> Self {
        IsometryPair {
            gl: self.gl.adjugate(),
            gr: self.gr.adjugate(),
            logl: self.logl.map(|x| -x),
            logr: self.logr.map(|x| -x),
        }
    }

    /// Group product `self ∘ other`.
    pub fn compose(&self, other: &IsometryPair) -> Self {
        IsometryPair {
            gl: self.gl * other.gl,
            gr: self.gr * other.gr,
            logl: None,
            logr: None,
        }
    }

    /// `γⁿ`, via logarithms when available.
    pub fn power(&self, n: i64) -> Self {
        if let (Some(xl), Some(xr)) = (self.logl, self.logr) {
            let s = n as f64;
            return IsometryPair::from_logs(xl.scale(s), xr.scale(s));
        }
        let base = if n < 0 { self.inverse() } else { *self };
        let mut acc = IsometryPair {
            gl: Mat2::IDENTITY,
            gr: Mat2::IDENTITY,
            logl: None,
            logr: None,
        };
        for _ in 0..n.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    /// Lie algebra representatives, computing principal logarithms if absent.
    pub fn logs(&self) -> Result<(Mat2, Mat2), GeometryError> {
        let xl = match self.logl {
            Some(x) => x,
            None => self.gl.log()?,
        };
        let xr = match self.logr {
            Some(x) => x,
            None => self.gr.log()?,
        };
        Ok((xl, xr))
    }

    /// Action on an AdS point in matrix form.
    pub fn act_matrix(&self, g: Mat2) -> Mat2 {
        conjugate_action(self.gl, g, self.gr)
    }

    /// Linear action on E.
    pub fn act(&self, v: Vec22) -> Vec22 {
        matrix_to_vec(self.act_matrix(vec_to_matrix(v)))
    }

    pub fn max_abs_diff(&self, o: &IsometryPair) -> f64 {
        self.gl.max_abs_diff(o.gl).max(self.gr.max_abs_diff(o.gr))
    }
}

/// `g_L · g · g_R⁻¹`.
pub fn conjugate_action(gl: Mat2, g: Mat2, gr: Mat2) -> Mat2 {
    gl * g * gr.adjugate()
}

/// Classification of one component, up to the sign ambiguity of `PSL(2,R)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ComponentClass {
    Trivial,
    /// Rotation angle in `(0, π)` and sense `±1`.
    Elliptic {
        angle: f64,
        sense: f64,
    },
    /// Unique fixed direction and sense `±1` (the sign of `b − c` of `±g − I`).
    Parabolic {
        fixed: [f64; 2],
        sense: f64,
    },
    /// Translation parameter `λ = arccosh(|tr|/2)` and the eigendirections.
    Hyperbolic {
        lambda: f64,
        attracting: [f64; 2],
        repelling: [f64; 2],
    },
}

impl ComponentClass {
    pub fn name(&self) -> &'static str {
        match self {
            ComponentClass::Trivial => "trivial",
            ComponentClass::Elliptic { .. } => "elliptic",
            ComponentClass::Parabolic { .. } => "parabolic",
            ComponentClass::Hyperbolic { .. } => "hyperbolic",
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        matches!(self, ComponentClass::Hyperbolic { .. })
    }

    pub fn is_parabolic(&self) -> bool {
        matches!(self, ComponentClass::Parabolic { .. })
    }

    pub fn is_elliptic(&self) -> bool {
        matches!(self, ComponentClass::Elliptic { .. })
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, ComponentClass::Trivial)
    }
}

fn unit(v: [f64; 2]) -> [f64; 2] {
    let n = v[0].hypot(v[1]);
    let s = if v[0].abs() >= v[1].abs() {
        v[0].signum()
    } else {
        v[1].signum()
    };
    [s * v[0] / n, s * v[1] / n]
}

/// Eigenvector of `m` for the eigenvalue `l`, picking the better-conditioned row.
fn eigenvector(m: Mat2, l: f64) -> [f64; 2] {
    let v1 = [m.b, l - m.a];
    let v2 = [l - m.d, m.c];
    let n1 = v1[0].hypot(v1[1]);
    let n2 = v2[0].hypot(v2[1]);
    unit(if n1 >= n2 { v1 } else { v2 })
}

/// Classifies a unit-determinant matrix by its trace.
pub fn classify_component(m: Mat2) -> ComponentClass {
    let scale = m.max_abs().max(1.0);
    let tol = 1e-9 * scale;
    let m = if m.trace() < 0.0 { -m } else { m };
    let tr = m.trace();
    if tr > 2.0 + tol {
        let disc = (tr * tr - 4.0).sqrt();
        let big = 0.5 * (tr + disc);
        let small = 1.0 / big;
        ComponentClass::Hyperbolic {
            lambda: (0.5 * tr).acosh(),
            attracting: eigenvector(m, big),
            repelling: eigenvector(m, small),
        }
    } else if tr >= 2.0 - tol {
        let n = m - Mat2::IDENTITY;
        if n.max_abs() <= tol {
            ComponentClass::Trivial
        } else {
            ComponentClass::Parabolic {
                fixed: eigenvector(m, 1.0),
                sense: (n.b - n.c).signum(),
            }
        }
    } else {
        ComponentClass::Elliptic {
            angle: (0.5 * tr).clamp(-1.0, 1.0).acos(),
            sense: (m.b - m.c).signum(),
        }
    }
}

/// The kinds of isometries, following the synchronized taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IsoTag {
    HyperbolicTranslationL,
    HyperbolicTranslationR,
    ParabolicTranslationL,
    ParabolicTranslationR,
    HypHyp,
    ParHyp,
    HypPar,
    ParPar,
    Elliptic,
    Trivial,
    NonSynchronized,
}

impl IsoTag {
    pub fn is_synchronized_nontrivial(self) -> bool {
        !matches!(self, IsoTag::Trivial | IsoTag::NonSynchronized)
    }
}

/// Classification of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsoClass {
    pub tag: IsoTag,
    /// Left translation parameter or rotation angle.
    pub lambda: Option<f64>,
    /// Right translation parameter.
    pub mu: Option<f64>,
    /// Common rotation angle of an elliptic pair.
    pub eta: Option<f64>,
    /// For parabolic pairs: whether both components turn the same way.
    pub same_sense: Option<bool>,
    pub left: ComponentClass,
    pub right: ComponentClass,
}

/// Classifies a pair of components.
pub fn classify_pair(iso: &IsometryPair) -> IsoClass {
    use ComponentClass as C;
    let left = classify_component(iso.gl);
    let right = classify_component(iso.gr);
    let param = |c: &C| match c {
        C::Hyperbolic { lambda, .. } => Some(*lambda),
        _ => None,
    };
    let mut out = IsoClass {
        tag: IsoTag::NonSynchronized,
        lambda: param(&left),
        mu: param(&right),
        eta: None,
        same_sense: None,
        left,
        right,
    };
    out.tag = match (&left, &right) {
        (C::Trivial, C::Trivial) => IsoTag::Trivial,
        (C::Hyperbolic { .. }, C::Trivial) => IsoTag::HyperbolicTranslationL,
        (C::Trivial, C::Hyperbolic { .. }) => IsoTag::HyperbolicTranslationR,
        (C::Parabolic { .. }, C::Trivial) => IsoTag::ParabolicTranslationL,
        (C::Trivial, C::Parabolic { .. }) => IsoTag::ParabolicTranslationR,
        (C::Hyperbolic { .. }, C::Hyperbolic { .. }) => IsoTag::HypHyp,
        (C::Parabolic { .. }, C::Hyperbolic { .. }) => IsoTag::ParHyp,
        (C::Hyperbolic { .. }, C::Parabolic { .. }) => IsoTag::HypPar,
        (C::Parabolic { sense: s1, .. }, C::Parabolic { sense: s2, .. }) => {
            out.same_sense = Some(s1 == s2);
            IsoTag::ParPar
        }
        (
            C::Elliptic {
                angle: a1,
                sense: s1,
            },
            C::Elliptic {
                angle: a2,
                sense: s2,
            },
        ) => {
            if (a1 - a2).abs() < 1e-8 && s1 == s2 {
                out.eta = Some(*a1);
                IsoTag::Elliptic
            } else {
                IsoTag::NonSynchronized
            }
        }
        _ => IsoTag::NonSynchronized,
    };
    out
}

/// Norm of the Killing field of `(X_L, X_R)` at `g`: `−det(X_L − g·X_R·g⁻¹)`.
pub fn killing_norm(xl: Mat2, xr: Mat2, g: Mat2) -> f64 {
    -(xl - g * xr * g.adjugate()).det()
}

/// Dominant direction of `m` as a projective transformation of `R²`.
fn dominant_direction(c: &ComponentClass) -> Option<[f64; 2]> {
    match c {
        ComponentClass::Hyperbolic { attracting, .. } => Some(*attracting),
        ComponentClass::Parabolic { fixed, .. } => Some(*fixed),
        _ => None,
    }
}

/// Null representative `(cos φ, sin φ, cos θ, sin θ)`-scaled vector of `u·wᵀ`.
fn rank_one_vector(u: [f64; 2], w: [f64; 2]) -> Vec22 {
    let m = Mat2::new(u[0] * w[0], u[0] * w[1], u[1] * w[0], u[1] * w[1]);
    let v = matrix_to_vec(m);
    v.scale(1.0 / v.x1.hypot(v.x2))
}

/// The attracting fixed point of `x ↦ g_L·x·g_R⁻¹` in the projectivized null cone.
///
/// On rank-one matrices the action is `u·wᵀ ↦ (g_L u)·(g_R⁻ᵀ w)ᵀ`, so the
/// dominant direction is the tensor product of the dominant directions of
/// `g_L` and of `g_R⁻ᵀ`. The vector is scaled so that `x1² + x2² = 1`.
pub fn attractive_fixed_point(iso: &IsometryPair) -> Result<Vec22, IsometryError> {
    let class = classify_pair(iso);
    match class.tag {
        IsoTag::HypHyp | IsoTag::HypPar | IsoTag::ParHyp | IsoTag::ParPar => {}
        IsoTag::HyperbolicTranslationL
        | IsoTag::HyperbolicTranslationR
        | IsoTag::ParabolicTranslationL
        | IsoTag::ParabolicTranslationR => {
            return Err(IsometryError::NoDominantDirection("translation"))
        }
        IsoTag::Elliptic | IsoTag::NonSynchronized => {
            return Err(IsometryError::NoDominantDirection("elliptic component"))
        }
        IsoTag::Trivial => return Err(IsometryError::NoDominantDirection("trivial")),
    }
    let u = dominant_direction(&class.left).ok_or(IsometryError::NoDominantDirection("left"))?;
    let rt = classify_component(iso.gr.adjugate().transpose());
    let w = dominant_direction(&rt).ok_or(IsometryError::NoDominantDirection("right"))?;
    Ok(rank_one_vector(u, w))
}

/// Power-iteration estimate of the dominant direction of the linear action on E.
pub fn attractive_fixed_point_power(iso: &IsometryPair, iterations: usize) -> Vec22 {
    let mut v = Vec22::new(0.3, 0.5, 0.7, 0.4);
    for _ in 0..iterations {
        let w = iso.act(v);
        v = w.scale(1.0 / w.euclidean_norm());
    }
    v.scale(1.0 / v.x1.hypot(v.x2))
}

/// The action on E as a 4×4 matrix in the basis `(x1, y1, x2, y2)`.
pub fn so22_matrix(iso: &IsometryPair) -> [[f64; 4]; 4] {
    let basis = [
        Vec22::new(1.0, 0.0, 0.0, 0.0),
        Vec22::new(0.0, 0.0, 1.0, 0.0),
        Vec22::new(0.0, 1.0, 0.0, 0.0),
        Vec22::new(0.0, 0.0, 0.0, 1.0),
    ];
    let mut m = [[0.0; 4]; 4];
    for (j, e) in basis.iter().enumerate() {
        let col = to_so22_coords(iso.act(*e));
        for i in 0..4 {
            m[i][j] = col[i];
        }
    }
    m
}

/// `(x1, x2, y1, y2) ↦ (x1, y1, x2, y2)`.
pub fn to_so22_coords(v: Vec22) -> [f64; 4] {
    [v.x1, v.y1, v.x2, v.y2]
}

pub fn from_so22_coords(c: [f64; 4]) -> Vec22 {
    Vec22::new(c[0], c[2], c[1], c[3])
}

/// Multiplies a 4×4 matrix in the `(x1, y1, x2, y2)` basis with a vector.
pub fn apply_so22(m: &[[f64; 4]; 4], v: Vec22) -> Vec22 {
    let c = to_so22_coords(v);
    let mut out = [0.0; 4];
    for i in 0..4 {
        out[i] = (0..4).map(|j| m[i][j] * c[j]).sum();
    }
    from_so22_coords(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::testutil::{random_ads, random_sl2};
    use crate::geometry::{pairing, quadratic_form, DELTA, H, R0};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn pair(xl: Mat2, xr: Mat2) -> IsometryPair {
        IsometryPair::from_logs(xl, xr)
    }

    #[test]
    fn component_examples() {
        let e = std::f64::consts::E;
        match classify_component(Mat2::diag(e, 1.0 / e)) {
            ComponentClass::Hyperbolic {
                lambda,
                attracting,
                repelling,
            } => {
                assert!((lambda - 1.0).abs() < 1e-12);
                assert_eq!(attracting, [1.0, 0.0]);
                assert_eq!(repelling, [0.0, 1.0]);
            }
            c => panic!("{c:?}"),
        }
        match classify_component(Mat2::new(1.0, 1.0, 0.0, 1.0)) {
            ComponentClass::Parabolic { fixed, sense } => {
                assert_eq!(fixed, [1.0, 0.0]);
                assert_eq!(sense, 1.0);
            }
            c => panic!("{c:?}"),
        }
        assert!(classify_component(R0.scale(0.3).exp()).is_elliptic());
        assert!(classify_component(Mat2::IDENTITY).is_trivial());
        assert!(classify_component(-Mat2::IDENTITY).is_trivial());
    }

    #[test]
    fn pair_examples() {
        let c = classify_pair(&pair(DELTA, DELTA.scale(2.0)));
        assert_eq!(c.tag, IsoTag::HypHyp);
        assert!((c.lambda.unwrap() - 1.0).abs() < 1e-12 && (c.mu.unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(classify_pair(&pair(H, DELTA)).tag, IsoTag::ParHyp);
        assert_eq!(classify_pair(&pair(DELTA, H)).tag, IsoTag::HypPar);
        let c = classify_pair(&pair(H, -H));
        assert_eq!((c.tag, c.same_sense), (IsoTag::ParPar, Some(false)));
        let c = classify_pair(&pair(H, H));
        assert_eq!((c.tag, c.same_sense), (IsoTag::ParPar, Some(true)));
        assert_eq!(classify_pair(&pair(R0, R0)).tag, IsoTag::Elliptic);
        assert_eq!(
            classify_pair(&pair(R0, R0.scale(0.5))).tag,
            IsoTag::NonSynchronized
        );
        assert_eq!(classify_pair(&pair(R0, DELTA)).tag, IsoTag::NonSynchronized);
        assert_eq!(
            classify_pair(&pair(DELTA, Mat2::ZERO)).tag,
            IsoTag::HyperbolicTranslationL
        );
        assert_eq!(
            classify_pair(&pair(Mat2::ZERO, H)).tag,
            IsoTag::ParabolicTranslationR
        );
        assert_eq!(
            classify_pair(&IsometryPair::identity()).tag,
            IsoTag::Trivial
        );
    }

    /// Same/opposite parabolic sense decides whether the Killing field can be spacelike.
    #[test]
    fn parabolic_sense_matches_killing_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let (mut pos_same, mut pos_opp) = (0, 0);
        for _ in 0..10_000 {
            let g = random_sl2(&mut rng);
            if killing_norm(H, H, g) > 1e-9 {
                pos_same += 1;
            }
            if killing_norm(H, -H, g) > 1e-9 {
                pos_opp += 1;
            }
        }
        assert!(pos_same > 0);
        assert_eq!(pos_opp, 0);
    }

    #[test]
    fn killing_norm_examples() {
        let two = DELTA.scale(2.0);
        assert!((killing_norm(DELTA, two, Mat2::IDENTITY) - 1.0).abs() < 1e-15);
        let g = Mat2::new(2.0, 1.0, 1.0, 1.0);
        assert!((killing_norm(DELTA, two, g) + 7.0).abs() < 1e-12);
        let diff = DELTA - g * two * g.adjugate();
        assert_eq!(diff, Mat2::new(-5.0, 8.0, -4.0, 5.0));
        for t in [0.0, 0.4, 2.0, -1.3] {
            assert!(killing_norm(R0, R0, R0.scale(t).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn fixed_point_examples() {
        let g = pair(DELTA, DELTA.scale(2.0));
        let p = attractive_fixed_point(&g).unwrap();
        assert!((p - Vec22::new(0.0, 1.0, 0.0, 1.0)).euclidean_norm() < 1e-15);
        let q = attractive_fixed_point(&g.inverse()).unwrap();
        assert!((q - Vec22::new(0.0, 1.0, 0.0, -1.0)).euclidean_norm() < 1e-15);
        let power = attractive_fixed_point_power(&g, 200);
        assert!((power - p).euclidean_norm() < 1e-10);
        assert!(matches!(
            attractive_fixed_point(&pair(DELTA, Mat2::ZERO)),
            Err(IsometryError::NoDominantDirection(_))
        ));
        assert!(attractive_fixed_point(&pair(R0, R0)).is_err());
    }

    #[test]
    fn random_fixed_points_are_null_and_fixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..200 {
            let h = random_sl2(&mut rng);
            let k = random_sl2(&mut rng);
            let l: f64 = rng.gen_range(0.3..2.0);
            let m: f64 = rng.gen_range(0.3..2.0);
            let xl = h * DELTA.scale(l) * h.adjugate();
            let xr = k * DELTA.scale(m) * k.adjugate();
            let g = pair(xl, xr);
            let p = attractive_fixed_point(&g).unwrap();
            assert!(quadratic_form(p).abs() < 1e-10);
            let img = g.act(p);
            let cos = pairing_euclid(img, p) / (img.euclidean_norm() * p.euclidean_norm());
            assert!((1.0 - cos.abs()).abs() < 1e-12);
            if (l - m).abs() > 0.2 {
                let pw = attractive_fixed_point_power(&g, 400);
                let c = pairing_euclid(pw, p) / (pw.euclidean_norm() * p.euclidean_norm());
                assert!((1.0 - c.abs()) < 1e-8, "{l} {m}");
            }
        }
    }

    fn pairing_euclid(a: Vec22, b: Vec22) -> f64 {
        a.x1 * b.x1 + a.x2 * b.x2 + a.y1 * b.y1 + a.y2 * b.y2
    }

    #[test]
    fn so22_btz_holonomy_blocks() {
        let (rp, rm) = (2.0, 1.0);
        let (u, v) = (PI * (rp - rm), PI * (rp + rm));
        let g = pair(DELTA.scale(u), DELTA.scale(v));
        let m = so22_matrix(&g);
        let (a, b) = (2.0 * PI * rm, 2.0 * PI * rp);
        let expect = [
            [a.cosh(), -a.sinh(), 0.0, 0.0],
            [-a.sinh(), a.cosh(), 0.0, 0.0],
            [0.0, 0.0, b.cosh(), b.sinh()],
            [0.0, 0.0, b.sinh(), b.cosh()],
        ];
        for i in 0..4 {
            for j in 0..4 {
                let scale = expect[i][j].abs().max(1.0);
                assert!((m[i][j] - expect[i][j]).abs() < 1e-12 * scale, "{i}{j}");
            }
        }
        let id = so22_matrix(&IsometryPair::identity());
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(id[i][j], if i == j { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn conjugate_action_examples() {
        let (rp, rm) = (2.0, 1.0);
        let (u, v) = (PI * (rp - rm), PI * (rp + rm));
        let gl = DELTA.scale(u).exp();
        let gr = DELTA.scale(v).exp();
        let g = Mat2::new(1.3, 0.4, 0.5, (1.0 + 0.4 * 0.5) / 1.3);
        let out = conjugate_action(gl, g, gr);
        let e = |x: f64| x.exp();
        let want = Mat2::new(
            g.a * e(-2.0 * PI * rm),
            g.b * e(2.0 * PI * rp),
            g.c * e(-2.0 * PI * rp),
            g.d * e(2.0 * PI * rm),
        );
        for (x, y) in out.to_row_major().iter().zip(want.to_row_major()) {
            assert!((x - y).abs() < 1e-12 * y.abs().max(1.0));
        }
        assert_eq!(conjugate_action(Mat2::IDENTITY, g, Mat2::IDENTITY), g);
    }

    proptest! {
        #[test]
        fn so22_preserves_form_and_matches_matrix_action(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = IsometryPair::new(random_sl2(&mut rng), random_sl2(&mut rng)).unwrap();
            let m = so22_matrix(&g);
            let eta = [1.0, -1.0, 1.0, -1.0];
            for i in 0..4 {
                for j in 0..4 {
                    let s: f64 = (0..4).map(|k| m[k][i] * eta[k] * m[k][j]).sum();
                    let want = if i == j { eta[i] } else { 0.0 };
                    prop_assert!((s - want).abs() < 1e-12 * (1.0 + m[i][j].abs()).powi(2));
                }
            }
            let v = random_ads(&mut rng, 2.0);
            let a = apply_so22(&m, v);
            let b = g.act(v);
            prop_assert!((a - b).euclidean_norm() < 1e-10 * (1.0 + b.euclidean_norm()));
        }

        #[test]
        fn killing_norm_is_conjugation_equivariant(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let xl = Mat2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), 0.0);
            let xl = Mat2::new(xl.a, xl.b, xl.c, -xl.a);
            let xr = Mat2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), 0.0);
            let xr = Mat2::new(xr.a, xr.b, xr.c, -xr.a);
            let (g, h, k) = (random_sl2(&mut rng), random_sl2(&mut rng), random_sl2(&mut rng));
            let a = killing_norm(xl, xr, g);
            let b = killing_norm(h * xl * h.adjugate(), k * xr * k.adjugate(), h * g * k.adjugate());
            prop_assert!((a - b).abs() < 1e-9 * (1.0 + a.abs()));
        }

        #[test]
        fn classification_is_conjugation_invariant(seed in any::<u64>(), kind in 0usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let gens = [
                (DELTA, DELTA.scale(1.7)),
                (H, DELTA),
                (H, -H),
                (R0.scale(0.8), R0.scale(0.8)),
                (DELTA.scale(0.5), Mat2::ZERO),
            ];
            let (xl, xr) = gens[kind];
            let g = pair(xl, xr);
            let (h, k) = (random_sl2(&mut rng), random_sl2(&mut rng));
            let c = pair(h * xl * h.adjugate(), k * xr * k.adjugate());
            let (a, b) = (classify_pair(&g), classify_pair(&c));
            prop_assert_eq!(a.tag, b.tag);
            prop_assert_eq!(a.same_sense, b.same_sense);
        }
    }

    #[test]
    fn pairing_of_fixed_points() {
        // The two fixed points of a hyperbolic pair are not orthogonal.
        let g = pair(DELTA, DELTA.scale(2.0));
        let p = attractive_fixed_point(&g).unwrap();
        let q = attractive_fixed_point(&g.inverse()).unwrap();
        assert!(pairing(p, q).abs() > 0.5);
    }
}
