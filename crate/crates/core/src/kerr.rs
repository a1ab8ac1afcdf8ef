//! Kerr-like coordinates `(t, φ, r)` on the outer region of a BTZ black hole:
//! holonomy parameters, the embedding into AdS and numerical checks of the
//! metric and of the geometry of the slices `t = const`.
//!
//! Naming: `T = r₊t − r₋φ` and `Φ = r₊φ − r₋t` are the hyperbolic angles of
//! the embedding; `φ` (field `varphi`) is always the Kerr angle.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{matrix_to_vec, vec_to_matrix, Mat2, Vec22, DELTA, H};
use crate::isometry::{so22_matrix, IsometryPair};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KerrError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("r = {r} is not in the outer region r > {r_plus}")]
    ChartDomain { r: f64, r_plus: f64 },
    #[error("point is outside the outer region of the chart")]
    OutsideChart,
    #[error("finite-difference step {h} too large for distance {gap} to the horizon")]
    StepTooLarge { h: f64, gap: f64 },
    #[error("operation needs extreme parameters")]
    NotExtreme,
}

/// Outer and inner horizon radii.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BTZParams {
    pub r_plus: f64,
    pub r_minus: f64,
}

impl BTZParams {
    pub fn new(r_plus: f64, r_minus: f64) -> Result<Self, KerrError> {
        if !(r_plus > 0.0) || !(r_minus >= 0.0) || r_minus > r_plus {
            return Err(KerrError::InvalidParams(format!(
                "need r_plus ≥ r_minus ≥ 0 and r_plus > 0, got ({r_plus}, {r_minus})"
            )));
        }
        Ok(BTZParams { r_plus, r_minus })
    }

    pub fn extreme(&self) -> bool {
        self.r_plus == self.r_minus
    }

    pub fn u(&self) -> f64 {
        PI * (self.r_plus - self.r_minus)
    }

    pub fn v(&self) -> f64 {
        PI * (self.r_plus + self.r_minus)
    }

    /// Angular momentum `J = −2r₋r₊`.
    pub fn j(&self) -> f64 {
        -2.0 * self.r_minus * self.r_plus
    }

    /// Mass `M = r₊² + r₋²`.
    pub fn m(&self) -> f64 {
        self.r_plus * self.r_plus + self.r_minus * self.r_minus
    }

    /// Lapse `N(r) = (r² − r₊²)(r² − r₋²)/r²`.
    pub fn n(&self, r: f64) -> f64 {
        let r2 = r * r;
        (r2 - self.r_plus * self.r_plus) * (r2 - self.r_minus * self.r_minus) / r2
    }

    fn denom(&self) -> f64 {
        self.r_plus * self.r_plus - self.r_minus * self.r_minus
    }

    fn check_outer(&self, r: f64) -> Result<(), KerrError> {
        if r > self.r_plus {
            Ok(())
        } else {
            Err(KerrError::ChartDomain {
                r,
                r_plus: self.r_plus,
            })
        }
    }

    /// Holonomy of `φ ↦ φ + 2π`: `(exp uΔ, exp vΔ)`, or `(exp −2πH, exp −2πr₊Δ)`
    /// in the extreme case.
    pub fn holonomy(&self) -> IsometryPair {
        if self.extreme() {
            IsometryPair::from_logs(H.scale(-2.0 * PI), DELTA.scale(-2.0 * PI * self.r_plus))
        } else {
            IsometryPair::from_logs(DELTA.scale(self.u()), DELTA.scale(self.v()))
        }
    }
}

/// Recovers `(r₊, r₋)` from the translation lengths `u = π(r₊ − r₋)`, `v = π(r₊ + r₋)`.
pub fn params_from_holonomy(u: f64, v: f64) -> Result<BTZParams, KerrError> {
    if !(v > 0.0) || !(u >= 0.0) || v < u {
        return Err(KerrError::InvalidParams(format!(
            "need v ≥ u ≥ 0, v > 0, got ({u}, {v})"
        )));
    }
    BTZParams::new((v + u) / (2.0 * PI), (v - u) / (2.0 * PI))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KerrPoint {
    pub t: f64,
    pub varphi: f64,
    pub r: f64,
}

impl KerrPoint {
    pub fn new(t: f64, varphi: f64, r: f64) -> Self {
        KerrPoint { t, varphi, r }
    }
}

pub type Metric3 = [[f64; 3]; 3];

/// `−N dt² + N⁻¹ dr² + r²(dφ + J/(2r²) dt)²` in the order `(t, φ, r)`.
pub fn kerr_metric(params: &BTZParams, r: f64) -> Result<Metric3, KerrError> {
    params.check_outer(r)?;
    let n = params.n(r);
    let j = params.j();
    let mut g = [[0.0; 3]; 3];
    g[0][0] = -n + j * j / (4.0 * r * r);
    g[0][1] = j / 2.0;
    g[1][0] = j / 2.0;
    g[1][1] = r * r;
    g[2][2] = 1.0 / n;
    Ok(g)
}

/// `g(r)` of the extreme chart, with `κ = (r² − r₊²)/(2r₊)`.
fn extreme_profile(r_plus: f64, r: f64) -> Mat2 {
    let k = (r * r - r_plus * r_plus) / (2.0 * r_plus);
    let s = k.sqrt();
    Mat2::new(0.5 / s, 0.5 / s, -s, s)
}

/// The point of AdS with Kerr-like coordinates `p`.
///
/// Non-extreme: `x1 = ρ₁ cosh T`, `y1 = ρ₁ sinh T`, `x2 = ρ₂ sinh Φ`,
/// `y2 = ρ₂ cosh Φ`, with `ρ₁² = (r² − r₊²)/(r₊² − r₋²)` and `ρ₂² = ρ₁² + 1`.
/// Extreme: `exp(−(t+φ)H)·g(r)·exp(r₊(φ−t)Δ)`, oriented so that the
/// conformal time runs the same way as in the non-extreme chart.
pub fn embed_outer(params: &BTZParams, p: KerrPoint) -> Result<Vec22, KerrError> {
    Ok(matrix_to_vec(embed_outer_matrix(params, p)?))
}

/// [`embed_outer`] in matrix form. The entries are the light-cone
/// coordinates `a = ρ₁e^T`, `b = ρ₂e^Φ`, `c = −ρ₂e^{−Φ}`, `d = −ρ₁e^{−T}`,
/// each of one sign, so finite differences of them stay accurate.
pub fn embed_outer_matrix(params: &BTZParams, p: KerrPoint) -> Result<Mat2, KerrError> {
    params.check_outer(p.r)?;
    let (rp, rm) = (params.r_plus, params.r_minus);
    if params.extreme() {
        return Ok(H.scale(-(p.t + p.varphi)).exp()
            * extreme_profile(rp, p.r)
            * DELTA.scale(rp * (p.varphi - p.t)).exp());
    }
    let d = params.denom();
    let big_t = rp * p.t - rm * p.varphi;
    let big_phi = rp * p.varphi - rm * p.t;
    let r2 = p.r * p.r;
    let rho1 = ((r2 - rp * rp) / d).sqrt();
    let rho2 = ((r2 - rm * rm) / d).sqrt();
    Ok(Mat2::new(
        rho1 * big_t.exp(),
        rho2 * big_phi.exp(),
        -rho2 * (-big_phi).exp(),
        -rho1 * (-big_t).exp(),
    ))
}

/// The ambient form on matrices: `−½ tr(A·adj B)`, so that `⟨A, A⟩ = −det A`.
pub fn matrix_pairing(a: Mat2, b: Mat2) -> f64 {
    -0.5 * (a.a * b.d + a.d * b.a - a.b * b.c - a.c * b.b)
}

/// `s` with `(e^s, −e^{−s})·ρ = (p, q)`, read off the larger entry.
fn hyperbolic_angle(p: f64, q: f64, rho: f64) -> f64 {
    if p.abs() >= q.abs() {
        (p / rho).ln()
    } else {
        -(-q / rho).ln()
    }
}

/// Inverse of [`embed_outer`], with `φ` lifted to the real line.
pub fn kerr_coords(params: &BTZParams, v: Vec22) -> Result<KerrPoint, KerrError> {
    kerr_coords_matrix(params, vec_to_matrix(v))
}

/// Inverse of [`embed_outer_matrix`].
///
/// Each hyperbolic angle is read from the dominant light-cone entry and
/// `ρ₂² = 1 + ρ₁²` comes from the quadric, so points far along the holonomy
/// stay accurate.
pub fn kerr_coords_matrix(params: &BTZParams, m: Mat2) -> Result<KerrPoint, KerrError> {
    let (rp, rm) = (params.r_plus, params.r_minus);
    if params.extreme() {
        let k = -m.c * m.d;
        if !(k > 0.0) || m.d <= 0.0 {
            return Err(KerrError::OutsideChart);
        }
        let s = k.sqrt();
        // m = exp(σH)·g·exp(−wΔ) with σ = −(t+φ) and w = −r₊(φ−t).
        let w = 0.5 * (-m.d / m.c).ln();
        let sigma = if m.c.abs() >= m.d.abs() {
            (m.a - (-w).exp() * 0.5 / s) / m.c
        } else {
            (m.b - w.exp() * 0.5 / s) / m.d
        };
        let diff = -w / rp;
        let sum = -sigma;
        let r = (rp * rp + 2.0 * rp * k).sqrt();
        return Ok(KerrPoint::new(0.5 * (sum - diff), 0.5 * (sum + diff), r));
    }
    let rho1_sq = -m.a * m.d;
    if !(rho1_sq > 0.0) || m.a <= 0.0 || m.b <= 0.0 {
        return Err(KerrError::OutsideChart);
    }
    let rho1 = rho1_sq.sqrt();
    let rho2 = (1.0 + rho1_sq).sqrt();
    let big_t = hyperbolic_angle(m.a, m.d, rho1);
    let big_phi = hyperbolic_angle(m.b, m.c, rho2);
    let d = params.denom();
    Ok(KerrPoint::new(
        (rm * big_phi + rp * big_t) / d,
        (rp * big_phi + rm * big_t) / d,
        (rp * rp + rho1_sq * d).sqrt(),
    ))
}

/// Finite-difference pullback `Jᵀ·η·J` of the ambient form by [`embed_outer`],
/// differentiated and paired in light-cone coordinates.
pub fn pullback_check(params: &BTZParams, p: KerrPoint, h: f64) -> Result<Metric3, KerrError> {
    let gap = p.r - params.r_plus;
    if gap <= 10.0 * h {
        return Err(KerrError::StepTooLarge { h, gap });
    }
    let jac = jacobian(params, p, h)?;
    let mut g = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] = matrix_pairing(jac[i], jac[j]);
        }
    }
    Ok(g)
}

fn shifted(p: KerrPoint, axis: usize, s: f64) -> KerrPoint {
    let mut q = p;
    match axis {
        0 => q.t += s,
        1 => q.varphi += s,
        _ => q.r += s,
    }
    q
}

fn jacobian(params: &BTZParams, p: KerrPoint, h: f64) -> Result<[Mat2; 3], KerrError> {
    let mut out = [Mat2::ZERO; 3];
    for (axis, col) in out.iter_mut().enumerate() {
        let fwd = embed_outer_matrix(params, shifted(p, axis, h))?;
        let bwd = embed_outer_matrix(params, shifted(p, axis, -h))?;
        *col = (fwd - bwd).scale(0.5 / h);
    }
    Ok(out)
}

/// Largest entrywise difference between two metrics.
pub fn metric_max_abs_diff(a: &Metric3, b: &Metric3) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            m = m.max((a[i][j] - b[i][j]).abs());
        }
    }
    m
}

/// Radius of the slice `t = const` in the `(η, φ)` parametrization:
/// `cosh²η = (r² − r₋²)/(r₊² − r₋²)`, or `r² = r₊² + e^{2η}` when extreme.
pub fn slice_radius(params: &BTZParams, eta: f64) -> f64 {
    let (rp, rm) = (params.r_plus, params.r_minus);
    if params.extreme() {
        (rp * rp + (2.0 * eta).exp()).sqrt()
    } else {
        (rm * rm + params.denom() * eta.cosh().powi(2)).sqrt()
    }
}

/// Step sizes for first and second derivatives.
pub const FD_STEP_1: f64 = 1e-5;
pub const FD_STEP_2: f64 = 1e-4;

/// Second-order data of the slice `t = t0` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSample {
    pub eta: f64,
    pub varphi: f64,
    pub r: f64,
    /// First fundamental form `(E, F, G)` in `(η, φ)`.
    pub first: [f64; 3],
    /// Second fundamental form `(L, M, N)` against the unit normal.
    pub second: [f64; 3],
    pub mean_curvature: f64,
    /// `det II / det I`.
    pub gauss_curvature: f64,
    /// The closed form `r₋²r₊²/(4r⁴)`.
    pub gauss_closed: f64,
    /// `⟨n | ∂_ηφ⟩` with `n` the normal of norm `−r²`.
    pub n_eta_phi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceReport {
    pub samples: Vec<SurfaceSample>,
    pub max_abs_mean: f64,
    pub max_rel_gauss_error: f64,
}

/// A rectangular `(η, φ)` grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceGrid {
    pub eta: (f64, f64),
    pub varphi: (f64, f64),
    pub n_eta: usize,
    pub n_varphi: usize,
}

fn lin(range: (f64, f64), n: usize, i: usize) -> f64 {
    if n <= 1 {
        return range.0;
    }
    range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64
}

/// Matrix `n` with `⟨n, a⟩ = ⟨n, b⟩ = ⟨n, c⟩ = 0`: the cofactor vector of
/// the entries `(a, b, c, d)`, mapped through the inverse Gram matrix.
fn q_normal(a: Mat2, b: Mat2, c: Mat2) -> Mat2 {
    let rows = [a.to_row_major(), b.to_row_major(), c.to_row_major()];
    let minor = |skip: usize| {
        let cols: Vec<usize> = (0..4).filter(|&k| k != skip).collect();
        let m = |i: usize, j: usize| rows[i][cols[j]];
        m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
            - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
            + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
    };
    let w = [minor(0), -minor(1), minor(2), -minor(3)];
    // The Gram matrix of the pairing in (a, b, c, d) is −½ times the signed
    // anti-diagonal, which is its own inverse up to the factor.
    Mat2::new(-2.0 * w[3], 2.0 * w[2], 2.0 * w[1], -2.0 * w[0])
}

/// Numerical first and second fundamental forms of the slice `t = t0`.
pub fn surface_point(
    params: &BTZParams,
    t0: f64,
    eta: f64,
    varphi: f64,
) -> Result<SurfaceSample, KerrError> {
    let x =
        |e: f64, f: f64| embed_outer_matrix(params, KerrPoint::new(t0, f, slice_radius(params, e)));
    let r = slice_radius(params, eta);
    let gap = r - params.r_plus;
    if !params.extreme() && eta - FD_STEP_2 <= 0.0 || gap <= 10.0 * FD_STEP_2 {
        return Err(KerrError::StepTooLarge { h: FD_STEP_2, gap });
    }
    let (h1, h2) = (FD_STEP_1, FD_STEP_2);
    let p = x(eta, varphi)?;
    let xe = (x(eta + h1, varphi)? - x(eta - h1, varphi)?).scale(0.5 / h1);
    let xf = (x(eta, varphi + h1)? - x(eta, varphi - h1)?).scale(0.5 / h1);
    let xee = (x(eta + h2, varphi)? - p.scale(2.0) + x(eta - h2, varphi)?).scale(1.0 / (h2 * h2));
    let xff = (x(eta, varphi + h2)? - p.scale(2.0) + x(eta, varphi - h2)?).scale(1.0 / (h2 * h2));
    let xef = (x(eta + h2, varphi + h2)? - x(eta + h2, varphi - h2)? - x(eta - h2, varphi + h2)?
        + x(eta - h2, varphi - h2)?)
    .scale(0.25 / (h2 * h2));
    let n = q_normal(p, xe, xf);
    let norm = (-matrix_pairing(n, n)).sqrt();
    let n0 = n.scale(1.0 / norm);
    let first = [
        matrix_pairing(xe, xe),
        matrix_pairing(xe, xf),
        matrix_pairing(xf, xf),
    ];
    let second = [
        matrix_pairing(n0, xee),
        matrix_pairing(n0, xef),
        matrix_pairing(n0, xff),
    ];
    let det_i = first[0] * first[2] - first[1] * first[1];
    let det_ii = second[0] * second[2] - second[1] * second[1];
    let mean =
        0.5 * (second[0] * first[2] - 2.0 * second[1] * first[1] + second[2] * first[0]) / det_i;
    let (rp, rm) = (params.r_plus, params.r_minus);
    Ok(SurfaceSample {
        eta,
        varphi,
        r,
        first,
        second,
        mean_curvature: mean,
        gauss_curvature: det_ii / det_i,
        gauss_closed: rm * rm * rp * rp / (4.0 * r.powi(4)),
        n_eta_phi: (second[1] * r).abs(),
    })
}

/// Evaluates [`surface_point`] over a grid.
pub fn surface_geometry(
    params: &BTZParams,
    t0: f64,
    grid: &SurfaceGrid,
) -> Result<SurfaceReport, KerrError> {
    let mut samples = Vec::with_capacity(grid.n_eta * grid.n_varphi);
    for i in 0..grid.n_eta {
        for j in 0..grid.n_varphi {
            let e = lin(grid.eta, grid.n_eta, i);
            let f = lin(grid.varphi, grid.n_varphi, j);
            samples.push(surface_point(params, t0, e, f)?);
        }
    }
    let max_abs_mean = samples
        .iter()
        .map(|s| s.mean_curvature.abs())
        .fold(0.0, f64::max);
    let max_rel_gauss_error = samples
        .iter()
        .map(|s| {
            let scale = s.gauss_closed.abs().max(1e-300);
            (s.gauss_curvature - s.gauss_closed).abs() / scale
        })
        .fold(0.0, f64::max);
    Ok(SurfaceReport {
        samples,
        max_abs_mean,
        max_rel_gauss_error,
    })
}

/// Inverse of [`slice_radius`].
pub fn slice_eta(params: &BTZParams, r: f64) -> f64 {
    let (rp, rm) = (params.r_plus, params.r_minus);
    if params.extreme() {
        0.5 * (r * r - rp * rp).ln()
    } else {
        ((r * r - rm * rm) / params.denom()).sqrt().acosh()
    }
}

/// Geodesic curvature of the radial curve `t, φ = const`, parametrized by
/// arc length `η`: the part of its acceleration outside `span(p, ∂_η)`.
pub fn radial_geodesic_residual(params: &BTZParams, p: KerrPoint) -> Result<f64, KerrError> {
    let h = FD_STEP_2;
    let eta = slice_eta(params, p.r);
    if p.r - params.r_plus <= 10.0 * h || (!params.extreme() && eta <= 10.0 * h) {
        return Err(KerrError::StepTooLarge {
            h,
            gap: p.r - params.r_plus,
        });
    }
    let x = |e: f64| {
        embed_outer_matrix(
            params,
            KerrPoint::new(p.t, p.varphi, slice_radius(params, e)),
        )
    };
    let (x0, xp, xm) = (x(eta)?, x(eta + h)?, x(eta - h)?);
    let xr = (xp - xm).scale(0.5 / h);
    let xrr = (xp - x0.scale(2.0) + xm).scale(1.0 / (h * h));
    // Solve the Gram system for the projection onto span(x0, xr).
    let mp = matrix_pairing;
    let (g00, g01, g11) = (mp(x0, x0), mp(x0, xr), mp(xr, xr));
    let (b0, b1) = (mp(xrr, x0), mp(xrr, xr));
    let det = g00 * g11 - g01 * g01;
    let c0 = (b0 * g11 - b1 * g01) / det;
    let c1 = (g00 * b1 - g01 * b0) / det;
    let rest = xrr - x0.scale(c0) - xr.scale(c1);
    Ok(mp(rest, rest).abs().sqrt() / g11)
}

/// Length of the radial segment from `r` to `r'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialLength {
    pub numeric: f64,
    /// `½ log((r'² − r₊²)/(r² − r₊²))`, for extreme parameters.
    pub closed: Option<f64>,
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// `∫ √g_rr dr` from `r` to `r'`, with the extreme closed form alongside.
pub fn radial_geodesic_length(
    params: &BTZParams,
    r: f64,
    r_prime: f64,
) -> Result<RadialLength, KerrError> {
    params.check_outer(r)?;
    params.check_outer(r_prime)?;
    let (lo, hi, sign) = if r <= r_prime {
        (r, r_prime, 1.0)
    } else {
        (r_prime, r, -1.0)
    };
    let f = |s: f64| {
        kerr_metric(params, s)
            .map(|g| g[2][2].sqrt())
            .unwrap_or(f64::NAN)
    };
    let numeric = if hi == lo {
        0.0
    } else {
        sign * adaptive_simpson(&f, lo, hi, 1e-13)
    };
    let rp2 = params.r_plus * params.r_plus;
    let closed = params
        .extreme()
        .then(|| 0.5 * ((r_prime * r_prime - rp2) / (r * r - rp2)).ln());
    Ok(RadialLength { numeric, closed })
}

/// The displayed `SO(2,2)` matrix of the holonomy in the basis `(x1, y1, x2, y2)`.
pub fn holonomy_block_matrix(params: &BTZParams) -> [[f64; 4]; 4] {
    let a = 2.0 * PI * params.r_minus;
    let b = 2.0 * PI * params.r_plus;
    [
        [a.cosh(), -a.sinh(), 0.0, 0.0],
        [-a.sinh(), a.cosh(), 0.0, 0.0],
        [0.0, 0.0, b.cosh(), b.sinh()],
        [0.0, 0.0, b.sinh(), b.cosh()],
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolonomyReport {
    pub dt: f64,
    pub dvarphi: f64,
    pub dr: f64,
    /// `max(|dt|, |dφ − 2π|, |dr|)`.
    pub residual: f64,
}

/// Applies a matrix in the basis `(x1, y1, x2, y2)` and returns the image in
/// light-cone form. Rows are combined before the product, so a boost by
/// `e^s` never multiplies a coordinate that later cancels.
pub fn apply_so22_light_cone(m: &[[f64; 4]; 4], v: Vec22) -> Mat2 {
    let s = [v.x1, v.y1, v.x2, v.y2];
    let row = |w: [f64; 4]| -> f64 {
        (0..4)
            .map(|j| (w[0] * m[0][j] + w[1] * m[1][j] + w[2] * m[2][j] + w[3] * m[3][j]) * s[j])
            .sum()
    };
    // a = y1 + x1, b = x2 + y2, c = x2 − y2, d = y1 − x1.
    Mat2::new(
        row([1.0, 1.0, 0.0, 0.0]),
        row([0.0, 0.0, 1.0, 1.0]),
        row([0.0, 0.0, 1.0, -1.0]),
        row([-1.0, 1.0, 0.0, 0.0]),
    )
}

/// Applies the holonomy to `embed_outer(p)` and reads off the coordinate shift.
pub fn holonomy_translation_check(
    params: &BTZParams,
    p: KerrPoint,
) -> Result<HolonomyReport, KerrError> {
    let m = if params.extreme() {
        so22_matrix(&params.holonomy())
    } else {
        holonomy_block_matrix(params)
    };
    let image = apply_so22_light_cone(&m, embed_outer(params, p)?);
    let q = kerr_coords_matrix(params, image)?;
    let (dt, dvarphi, dr) = (q.t - p.t, q.varphi - p.varphi, q.r - p.r);
    let residual = dt.abs().max((dvarphi - 2.0 * PI).abs()).max(dr.abs());
    Ok(HolonomyReport {
        dt,
        dvarphi,
        dr,
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LightlikeKillingReport {
    /// `max |g(∂φ + ∂t, ∂φ + ∂t)|` from the metric.
    pub max_norm: f64,
    /// `max |⟨∂φφ | p⟩ + r²|` by finite differences of the embedding.
    pub max_phi_phi_residual: f64,
}

/// Checks that `∂φ + ∂t` is lightlike and `⟨∂φφ | p⟩ = −r²` for extreme parameters.
pub fn extreme_lightlike_killing(
    params: &BTZParams,
    samples: &[KerrPoint],
) -> Result<LightlikeKillingReport, KerrError> {
    if !params.extreme() {
        return Err(KerrError::NotExtreme);
    }
    let h = FD_STEP_2;
    let mut rep = LightlikeKillingReport {
        max_norm: 0.0,
        max_phi_phi_residual: 0.0,
    };
    for p in samples {
        let g = kerr_metric(params, p.r)?;
        let norm = g[1][1] + 2.0 * g[0][1] + g[0][0];
        rep.max_norm = rep.max_norm.max(norm.abs());
        let x0 = embed_outer_matrix(params, *p)?;
        let xff = (embed_outer_matrix(params, shifted(*p, 1, h))? - x0.scale(2.0)
            + embed_outer_matrix(params, shifted(*p, 1, -h))?)
        .scale(1.0 / (h * h));
        let res = matrix_pairing(xff, x0) + p.r * p.r;
        rep.max_phi_phi_residual = rep.max_phi_phi_residual.max(res.abs());
    }
    Ok(rep)
}
