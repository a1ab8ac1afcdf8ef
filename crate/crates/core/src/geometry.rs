//! Linear algebra of E = R^{2,2}, the quadric model of AdS and conformal
//! cylinder coordinates.
//!
//! A point of E is written `(x1, x2, y1, y2)` and carries the quadratic form
//! `Q = x1² + x2² − y1² − y2²`. Anti-de Sitter space is the level set
//! `Q = −1`, identified with `SL(2,R)` through [`ads_matrix`].

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance for quadric and determinant constraints.
pub const QUADRIC_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("point is off the AdS quadric: Q = {q}")]
    OffQuadric { q: f64 },
    #[error("matrix does not have unit determinant: det = {det}")]
    NotUnimodular { det: f64 },
    #[error("matrix has no traceless logarithm in the principal branch (trace {trace})")]
    NoLog { trace: f64 },
}

/// A vector of E = R^{2,2}.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec22 {
    pub x1: f64,
    pub x2: f64,
    pub y1: f64,
    pub y2: f64,
}

impl Vec22 {
    pub const fn new(x1: f64, x2: f64, y1: f64, y2: f64) -> Self {
        Vec22 { x1, x2, y1, y2 }
    }

    /// The basepoint of AdS, corresponding to the identity matrix.
    pub const BASEPOINT: Vec22 = Vec22::new(0.0, 0.0, 1.0, 0.0);

    pub fn to_array(self) -> [f64; 4] {
        [self.x1, self.x2, self.y1, self.y2]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Vec22::new(a[0], a[1], a[2], a[3])
    }

    /// Euclidean norm of the coordinate vector (not the form).
    pub fn euclidean_norm(self) -> f64 {
        (self.x1 * self.x1 + self.x2 * self.x2 + self.y1 * self.y1 + self.y2 * self.y2).sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Vec22::new(self.x1 * s, self.x2 * s, self.y1 * s, self.y2 * s)
    }

    /// Rescales a timelike vector onto the quadric `Q = −1`.
    pub fn to_quadric(self) -> Result<Self, GeometryError> {
        let q = quadratic_form(self);
        if q >= 0.0 {
            return Err(GeometryError::OffQuadric { q });
        }
        Ok(self.scale(1.0 / (-q).sqrt()))
    }
}

impl Add for Vec22 {
    type Output = Vec22;
    fn add(self, o: Vec22) -> Vec22 {
        Vec22::new(
            self.x1 + o.x1,
            self.x2 + o.x2,
            self.y1 + o.y1,
            self.y2 + o.y2,
        )
    }
}

impl Sub for Vec22 {
    type Output = Vec22;
    fn sub(self, o: Vec22) -> Vec22 {
        Vec22::new(
            self.x1 - o.x1,
            self.x2 - o.x2,
            self.y1 - o.y1,
            self.y2 - o.y2,
        )
    }
}

impl Neg for Vec22 {
    type Output = Vec22;
    fn neg(self) -> Vec22 {
        self.scale(-1.0)
    }
}

impl Mul<Vec22> for f64 {
    type Output = Vec22;
    fn mul(self, v: Vec22) -> Vec22 {
        v.scale(self)
    }
}

/// `Q(v) = x1² + x2² − y1² − y2²`.
pub fn quadratic_form(v: Vec22) -> f64 {
    v.x1 * v.x1 + v.x2 * v.x2 - v.y1 * v.y1 - v.y2 * v.y2
}

/// Polarization of [`quadratic_form`].
pub fn pairing(v: Vec22, w: Vec22) -> f64 {
    v.x1 * w.x1 + v.x2 * w.x2 - v.y1 * w.y1 - v.y2 * w.y2
}

/// A real 2×2 matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// Generator of the diagonal one-parameter subgroup, `exp(tΔ) = diag(e^t, e^-t)`.
pub const DELTA: Mat2 = Mat2::new(1.0, 0.0, 0.0, -1.0);
/// Nilpotent generator, `exp(tH) = [[1, t], [0, 1]]`.
pub const H: Mat2 = Mat2::new(0.0, 1.0, 0.0, 0.0);
/// Rotation generator, `exp(tR0) = [[cos t, sin t], [−sin t, cos t]]`.
pub const R0: Mat2 = Mat2::new(0.0, 1.0, -1.0, 0.0);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2::new(1.0, 0.0, 0.0, 1.0);
    pub const ZERO: Mat2 = Mat2::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_row_major(m: [f64; 4]) -> Self {
        Mat2::new(m[0], m[1], m[2], m[3])
    }

    pub fn to_row_major(self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn diag(p: f64, q: f64) -> Self {
        Mat2::new(p, 0.0, 0.0, q)
    }

    pub fn det(self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(self) -> f64 {
        self.a + self.d
    }

    pub fn transpose(self) -> Self {
        Mat2::new(self.a, self.c, self.b, self.d)
    }

    pub fn scale(self, s: f64) -> Self {
        Mat2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    /// Adjugate; equals the inverse for unit-determinant matrices.
    pub fn adjugate(self) -> Self {
        Mat2::new(self.d, -self.b, -self.c, self.a)
    }

    /// General inverse. Returns `None` for (numerically) singular matrices.
    pub fn inverse(self) -> Option<Self> {
        let det = self.det();
        let scale = self.max_abs().powi(2);
        if det.abs() <= 1e-300 || det.abs() < 1e-15 * scale {
            return None;
        }
        Some(self.adjugate().scale(1.0 / det))
    }

    pub fn max_abs(self) -> f64 {
        self.a
            .abs()
            .max(self.b.abs())
            .max(self.c.abs())
            .max(self.d.abs())
    }

    pub fn apply(self, v: [f64; 2]) -> [f64; 2] {
        [self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1]]
    }

    /// Checks `det = 1` within [`QUADRIC_TOL`].
    pub fn check_unimodular(self) -> Result<(), GeometryError> {
        let det = self.det();
        if (det - 1.0).abs() > QUADRIC_TOL {
            return Err(GeometryError::NotUnimodular { det });
        }
        Ok(())
    }

    /// Exponential of a traceless matrix, using `X² = −det(X)·I`.
    ///
    /// The trace part, if any, is exponentiated separately.
    pub fn exp(self) -> Mat2 {
        let half_tr = 0.5 * self.trace();
        let x = self - Mat2::IDENTITY.scale(half_tr);
        let delta = -x.det();
        if delta > 0.25 {
            // Spectral form (e^s P₊ + e^-s P₋) keeps small entries accurate.
            let s = delta.sqrt();
            let (ep, em) = (s.exp(), (-s).exp());
            let y = x.scale(1.0 / s);
            let p = Mat2::IDENTITY + y;
            let m = Mat2::IDENTITY - y;
            return (p.scale(0.5 * ep) + m.scale(0.5 * em)).scale(half_tr.exp());
        }
        let (ch, shc) = if delta.abs() < 1e-8 {
            (
                1.0 + delta / 2.0 + delta * delta / 24.0,
                1.0 + delta / 6.0 + delta * delta / 120.0,
            )
        } else if delta > 0.0 {
            let s = delta.sqrt();
            (s.cosh(), s.sinh() / s)
        } else {
            let s = (-delta).sqrt();
            (s.cos(), s.sin() / s)
        };
        (Mat2::IDENTITY.scale(ch) + x.scale(shc)).scale(half_tr.exp())
    }

    /// Traceless logarithm of a unit-determinant matrix with trace > −2.
    ///
    /// Hyperbolic and parabolic elements use the one-parameter subgroup through
    /// the identity; elliptic elements use the rotation angle in `(0, π)`.
    pub fn log(self) -> Result<Mat2, GeometryError> {
        let tr = self.trace();
        if tr <= -2.0 + 1e-12 {
            return Err(GeometryError::NoLog { trace: tr });
        }
        let half = 0.5 * tr;
        let traceless = self - Mat2::IDENTITY.scale(half);
        let factor = if (half - 1.0).abs() < 1e-12 {
            1.0
        } else if half > 1.0 {
            let s = half.acosh();
            s / s.sinh()
        } else {
            let s = half.acos();
            s / s.sin()
        };
        Ok(traceless.scale(factor))
    }

    /// `self · x · other⁻¹` for unit-determinant `other`.
    pub fn conjugate_by(self, x: Mat2, other: Mat2) -> Mat2 {
        self * x * other.adjugate()
    }

    pub fn max_abs_diff(self, o: Mat2) -> f64 {
        (self - o).max_abs()
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-1.0)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

impl Mul<Mat2> for f64 {
    type Output = Mat2;
    fn mul(self, m: Mat2) -> Mat2 {
        m.scale(self)
    }
}

/// Linear identification of E with 2×2 matrices:
/// `(x1,x2,y1,y2) ↦ [[y1+x1, x2+y2], [x2−y2, y1−x1]]`, with `det = −Q`.
pub fn vec_to_matrix(v: Vec22) -> Mat2 {
    Mat2::new(v.y1 + v.x1, v.x2 + v.y2, v.x2 - v.y2, v.y1 - v.x1)
}

/// Inverse of [`vec_to_matrix`].
pub fn matrix_to_vec(m: Mat2) -> Vec22 {
    Vec22::new(
        0.5 * (m.a - m.d),
        0.5 * (m.b + m.c),
        0.5 * (m.a + m.d),
        0.5 * (m.b - m.c),
    )
}

/// The `SL(2,R)` element of an AdS point.
pub fn ads_matrix(v: Vec22) -> Result<Mat2, GeometryError> {
    let q = quadratic_form(v);
    if (q + 1.0).abs() > QUADRIC_TOL {
        return Err(GeometryError::OffQuadric { q });
    }
    Ok(vec_to_matrix(v))
}

/// The AdS point of a unit-determinant matrix.
pub fn matrix_ads(m: Mat2) -> Result<Vec22, GeometryError> {
    m.check_unimodular()?;
    Ok(matrix_to_vec(m))
}

/// Coordinates of the conformal chart of AdS inside the Einstein universe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylCoord3 {
    /// Time; principal branch unless explicitly lifted.
    pub theta: f64,
    /// Colatitude on the hemisphere, `π/2` on the boundary.
    pub rho_prime: f64,
    /// Longitude.
    pub phi: f64,
}

impl CylCoord3 {
    pub fn new(theta: f64, rho_prime: f64, phi: f64) -> Self {
        CylCoord3 {
            theta,
            rho_prime,
            phi,
        }
    }

    /// The AdS point with these coordinates (`rho_prime < π/2`).
    pub fn to_vec22(self) -> Vec22 {
        let r = self.rho_prime.tan();
        let s = 1.0 / self.rho_prime.cos();
        Vec22::new(
            r * self.phi.cos(),
            r * self.phi.sin(),
            s * self.theta.cos(),
            s * self.theta.sin(),
        )
    }

    /// Point of the unit sphere with colatitude `rho_prime` and longitude `phi`.
    pub fn sphere_point(self) -> [f64; 3] {
        let (s, c) = self.rho_prime.sin_cos();
        [c, s * self.phi.cos(), s * self.phi.sin()]
    }
}

/// Conformal coordinates of an AdS point, with `theta ∈ (−π, π]`.
///
/// The point is assumed to lie on the quadric; `phi` is 0 on the axis.
pub fn conformal_coords(v: Vec22) -> CylCoord3 {
    let theta = principal_angle(v.y2.atan2(v.y1));
    let r = v.x1.hypot(v.x2);
    let phi = if r == 0.0 { 0.0 } else { v.x2.atan2(v.x1) };
    CylCoord3::new(theta, r.atan(), phi)
}

/// Maps an angle to `(−π, π]`.
pub fn principal_angle(t: f64) -> f64 {
    let mut a = t.rem_euclid(2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    a
}

/// Distance on the unit circle, in `[0, π]`.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    principal_angle(a - b).abs()
}
