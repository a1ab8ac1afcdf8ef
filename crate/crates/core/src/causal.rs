//! Causal domains of isometries: the standard domain C(γ), the convex domain
//! C_∞(γ), the absolute domain D(γ) where the Killing field is spacelike, and
//! their intersections over a word ball.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boundary::{sphere_distance, LIGHTLIKE_TOL};
use crate::geometry::{
    ads_matrix, conformal_coords, matrix_to_vec, principal_angle, GeometryError, Mat2, Vec22,
    DELTA, H, R0,
};
use crate::group::{enumerate_ball, GroupError, GroupPresentation};
use crate::isometry::{classify_pair, killing_norm, IsometryPair};

/// Largest admissible θ increment between two consecutive path samples.
const MAX_THETA_STEP: f64 = std::f64::consts::FRAC_PI_4;
const MAX_HALVINGS: u32 = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CausalError {
    #[error("isometry is trivial or not synchronized")]
    NotSynchronized,
    #[error("θ tracking did not converge after {0} halvings")]
    LiftFailure(u32),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// The seven normal forms of synchronized Killing pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NormalCase {
    /// `(λR₀, λR₀)`, `λ > 0`.
    Elliptic { lambda: f64 },
    /// `(λΔ, 0)`, `λ > 0`.
    HyperbolicTranslation { lambda: f64 },
    /// `(H, 0)`.
    ParabolicTranslation,
    /// `(H, −H)`.
    ParabolicOpposite,
    /// `(H, H)`.
    ParabolicSame,
    /// `(λΔ, μΔ)`, `0 < λ ≤ μ`.
    HypHyp { lambda: f64, mu: f64 },
    /// `(λΔ, H)`, `λ > 0`.
    HypPar { lambda: f64 },
}

impl NormalCase {
    pub fn case_id(&self) -> u8 {
        match self {
            NormalCase::Elliptic { .. } => 1,
            NormalCase::HyperbolicTranslation { .. } => 2,
            NormalCase::ParabolicTranslation => 3,
            NormalCase::ParabolicOpposite => 4,
            NormalCase::ParabolicSame => 5,
            NormalCase::HypHyp { .. } => 6,
            NormalCase::HypPar { .. } => 7,
        }
    }

    /// The Killing pair `(X_L, X_R)`.
    pub fn generators(&self) -> (Mat2, Mat2) {
        match *self {
            NormalCase::Elliptic { lambda } => (R0.scale(lambda), R0.scale(lambda)),
            NormalCase::HyperbolicTranslation { lambda } => (DELTA.scale(lambda), Mat2::ZERO),
            NormalCase::ParabolicTranslation => (H, Mat2::ZERO),
            NormalCase::ParabolicOpposite => (H, -H),
            NormalCase::ParabolicSame => (H, H),
            NormalCase::HypHyp { lambda, mu } => (DELTA.scale(lambda), DELTA.scale(mu)),
            NormalCase::HypPar { lambda } => (DELTA.scale(lambda), H),
        }
    }

    /// Whether the parameters satisfy the constraints of the normal form.
    pub fn is_valid(&self) -> bool {
        match *self {
            NormalCase::Elliptic { lambda }
            | NormalCase::HyperbolicTranslation { lambda }
            | NormalCase::HypPar { lambda } => lambda > 0.0,
            NormalCase::HypHyp { lambda, mu } => 0.0 < lambda && lambda <= mu,
            _ => true,
        }
    }

    /// Slack of the closed-form inequality describing D(γ) at `g`: positive
    /// inside, non-positive outside. Always-full and always-empty cases
    /// return `+∞` and `−∞`.
    pub fn slack(&self, g: Mat2) -> f64 {
        let Mat2 { a, b, c, d } = g;
        match *self {
            NormalCase::Elliptic { .. } => (a - d).powi(2) + (b + c).powi(2),
            NormalCase::HyperbolicTranslation { .. } => f64::INFINITY,
            NormalCase::ParabolicTranslation | NormalCase::ParabolicOpposite => f64::NEG_INFINITY,
            NormalCase::ParabolicSame => c * c,
            NormalCase::HypHyp { lambda, mu } => {
                (lambda - mu).powi(2) / (4.0 * lambda * mu) - b * c
            }
            NormalCase::HypPar { lambda } => lambda + 2.0 * a * c,
        }
    }
}

/// Whether the Killing field of `(X_L, X_R)` is spacelike at `g` with norm above `margin`.
pub fn in_d(xl: Mat2, xr: Mat2, g: Mat2, margin: f64) -> bool {
    killing_norm(xl, xr, g) > margin
}

/// The closed-form description of D(γ) for a normal case.
pub fn in_d_closed_form(nc: &NormalCase, g: Mat2) -> bool {
    nc.slack(g) > 0.0
}

/// Lie algebra representatives for the canonical lift of an isometry.
///
/// Components with negative trace are replaced by their opposites. When
/// exactly one side is flipped the isometry differs from the flow by `−1`,
/// which on the universal cover is taken to be the central shift `δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftedLogs {
    pub xl: Mat2,
    pub xr: Mat2,
    pub delta_shift: bool,
}

impl LiftedLogs {
    pub fn of(iso: &IsometryPair) -> Result<Self, GeometryError> {
        let (fl, gl) = if iso.gl.trace() < 0.0 {
            (true, -iso.gl)
        } else {
            (false, iso.gl)
        };
        let (fr, gr) = if iso.gr.trace() < 0.0 {
            (true, -iso.gr)
        } else {
            (false, iso.gr)
        };
        let xl = match (fl, iso.logl) {
            (false, Some(x)) => x,
            _ => gl.log()?,
        };
        let xr = match (fr, iso.logr) {
            (false, Some(x)) => x,
            _ => gr.log()?,
        };
        Ok(LiftedLogs {
            xl,
            xr,
            delta_shift: fl != fr,
        })
    }
}

fn theta_of(m: Mat2) -> f64 {
    // θ = arg(y1 + i y2) with y1 = (a+d)/2 and y2 = (b−c)/2.
    (m.b - m.c).atan2(m.a + m.d)
}

/// Lifted θ increments of `s ↦ exp(s X_L)·g·exp(−s X_R)` sampled at the
/// integers `s = 0, 1, …, n_max` (or `0, −1, …` for negative direction).
///
/// Each unit interval is subdivided until every increment is below `π/4`.
fn lifted_orbit(
    logs: &LiftedLogs,
    g: Mat2,
    n_max: u32,
    backwards: bool,
) -> Result<Vec<(Mat2, f64)>, CausalError> {
    let sgn = if backwards { -1.0 } else { 1.0 };
    let step_l = logs.xl.scale(sgn).exp();
    let step_r = logs.xr.scale(sgn).exp().adjugate();
    let mut out = Vec::with_capacity(n_max as usize);
    let mut cur = g;
    let mut theta = theta_of(g);
    let mut k: u32 = 2;
    let mut cache: Option<(u32, Mat2, Mat2)> = None;
    for _ in 0..n_max {
        let target = step_l * cur * step_r;
        let mut halvings = 0;
        let dtheta = loop {
            let (sl, sr) = match cache {
                Some((kk, a, b)) if kk == k => (a, b),
                _ => {
                    let h = sgn / k as f64;
                    let a = logs.xl.scale(h).exp();
                    let b = logs.xr.scale(h).exp().adjugate();
                    cache = Some((k, a, b));
                    (a, b)
                }
            };
            let mut m = cur;
            let mut prev = theta_of(m);
            let mut acc = 0.0;
            let mut ok = true;
            for j in 0..k {
                m = if j + 1 == k { target } else { sl * m * sr };
                let t = theta_of(m);
                let inc = principal_angle(t - prev);
                if inc.abs() > MAX_THETA_STEP {
                    ok = false;
                    break;
                }
                acc += inc;
                prev = t;
            }
            if ok {
                break acc;
            }
            halvings += 1;
            if halvings > MAX_HALVINGS {
                return Err(CausalError::LiftFailure(MAX_HALVINGS));
            }
            k *= 2;
        };
        theta += dtheta;
        cur = target;
        out.push((cur, theta));
    }
    Ok(out)
}

/// Whether `x` and the iterate with matrix `m` and lifted time `theta` are
/// causally unrelated in Êin₃, with the given margin. `flip` replaces the
/// iterate by its antipode `−m`.
fn unrelated(cx: [f64; 3], theta_x: f64, m: Mat2, theta: f64, flip: bool, margin: f64) -> bool {
    let y = matrix_to_vec(if flip { -m } else { m });
    let d = sphere_distance(cx, conformal_coords(y).sphere_point());
    (theta - theta_x).abs() < d - margin
}

/// The `SU(1,1)` entries `(α, β)` of `g`, as `(re, im)` pairs. The time of
/// `g` is `arg α`, and products compose as `α₁₂ = α₁α₂ + β₁β̄₂`.
fn su11(m: Mat2) -> ([f64; 2], [f64; 2]) {
    (
        [0.5 * (m.a + m.d), 0.5 * (m.b - m.c)],
        [0.5 * (m.a - m.d), -0.5 * (m.b + m.c)],
    )
}

/// `θ̃(pq) − θ̃(p) − θ̃(q) = arg(1 + β_p β̄_q / (α_p α_q))`, which lies in
/// `(−π/2, π/2)` because `|β| < |α|`.
fn time_defect(p: Mat2, q: Mat2) -> f64 {
    let ((ap, bp), (aq, bq)) = (su11(p), su11(q));
    let mul = |x: [f64; 2], y: [f64; 2]| [x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0]];
    let aa = mul(ap, aq);
    let bb = mul(bp, [bq[0], -bq[1]]);
    // arg(aa + bb) − arg(aa) = arg((aa + bb)·conj(aa)).
    let s = [aa[0] + bb[0], aa[1] + bb[1]];
    let z = mul(s, [aa[0], -aa[1]]);
    z[1].atan2(z[0])
}

/// One direction of a flow table: `exp(±n X_L)` and `exp(∓n X_R)` with their
/// lifted times, for `n = 1, 2, …`.
#[derive(Debug, Clone, Default)]
struct FlowPowers {
    left: Vec<(Mat2, f64)>,
    right: Vec<(Mat2, f64)>,
}

/// Lifted powers of a pair of one-parameter groups, precomputed so that the
/// lifted time of `γⁿx` follows from two time defects.
#[derive(Debug, Clone)]
pub struct FlowTable {
    logs: LiftedLogs,
    fwd: FlowPowers,
    bwd: FlowPowers,
}

impl FlowTable {
    pub fn new(logs: LiftedLogs, n_max: u32) -> Result<Self, CausalError> {
        let side = |x: Mat2, backwards: bool| {
            lifted_orbit(
                &LiftedLogs {
                    xl: x,
                    xr: Mat2::ZERO,
                    delta_shift: false,
                },
                Mat2::IDENTITY,
                n_max,
                backwards,
            )
        };
        let inv = |v: Vec<(Mat2, f64)>| v.into_iter().map(|(m, t)| (m.adjugate(), -t)).collect();
        Ok(FlowTable {
            logs,
            fwd: FlowPowers {
                left: side(logs.xl, false)?,
                right: inv(side(logs.xr, false)?),
            },
            bwd: FlowPowers {
                left: side(logs.xl, true)?,
                right: inv(side(logs.xr, true)?),
            },
        })
    }

    pub fn n_max(&self) -> u32 {
        self.fwd.left.len() as u32
    }

    /// Whether `γⁿx` is causally unrelated to `x` for `1 ≤ n ≤ n_max`, and
    /// also for negative `n` when `both` is set.
    pub fn c_range(
        &self,
        x: Vec22,
        n_max: u32,
        both: bool,
        margin: f64,
    ) -> Result<bool, CausalError> {
        if n_max > self.n_max() {
            return FlowTable::new(self.logs, n_max)?.c_range(x, n_max, both, margin);
        }
        let g = ads_matrix(x)?;
        let theta_x = theta_of(g);
        let cx = conformal_coords(x).sphere_point();
        for (backwards, powers) in [(false, &self.fwd), (true, &self.bwd)] {
            if backwards && !both {
                break;
            }
            for (i, (&(l, tl), &(r, tr))) in powers
                .left
                .iter()
                .zip(&powers.right)
                .take(n_max as usize)
                .enumerate()
            {
                let n = i + 1;
                let lg = l * g;
                let m = lg * r;
                let mut theta = tl + theta_x + tr + time_defect(l, g) + time_defect(lg, r);
                // With one flipped side, γⁿ is the flow composed with δⁿ.
                let mut flip = false;
                if self.logs.delta_shift {
                    theta += if backwards { -PI } else { PI } * n as f64;
                    flip = n % 2 == 1;
                }
                if !unrelated(cx, theta_x, m, theta, flip, margin) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Iterates `γⁿx` for `1 ≤ n ≤ n_max` (and `−n_max ≤ n ≤ −1` when `both`)
/// are not causally related to `x`, lifting times along the flow path.
#[cfg(test)]
fn c_range_along_path(
    logs: &LiftedLogs,
    x: Vec22,
    n_max: u32,
    both: bool,
    margin: f64,
) -> Result<bool, CausalError> {
    let g = ads_matrix(x)?;
    let theta_x = theta_of(g);
    let cx = conformal_coords(x).sphere_point();
    let dirs: &[bool] = if both { &[false, true] } else { &[false] };
    for &backwards in dirs {
        let orbit = lifted_orbit(logs, g, n_max, backwards)?;
        for (i, (m, theta)) in orbit.into_iter().enumerate() {
            let n = i + 1;
            let (theta, flip) = if logs.delta_shift {
                let s = if backwards { -PI } else { PI };
                (theta + s * n as f64, n % 2 == 1)
            } else {
                (theta, false)
            };
            if !unrelated(cx, theta_x, m, theta, flip, margin) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `γⁿx` is causally unrelated to `x` for all `1 ≤ |n| ≤ n_max`.
///
/// Times are lifted to the universal cover, where `t ↦ exp(t·X_L)·x·exp(−t·X_R)`
/// is continuous; causality is evaluated in Êin₃.
pub fn in_c_range(iso: &IsometryPair, x: Vec22, n_max: u32) -> Result<bool, CausalError> {
    if !classify_pair(iso).tag.is_synchronized_nontrivial() {
        return Err(CausalError::NotSynchronized);
    }
    let logs = LiftedLogs::of(iso)?;
    FlowTable::new(logs, n_max)?.c_range(x, n_max, true, LIGHTLIKE_TOL)
}

/// Which domain a ball test evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomainMode {
    D,
    CInf { n_max: u32 },
}

/// Powers tabulated by [`BallTester::new`].
pub const BALL_TABLE_POWERS: u32 = 8;

/// Precomputed word ball for repeated domain membership tests.
#[derive(Debug, Clone)]
pub struct BallTester {
    tables: Vec<FlowTable>,
    pub word_len: usize,
}

impl BallTester {
    pub fn new(gp: &GroupPresentation, word_len: usize) -> Result<Self, CausalError> {
        let ball = enumerate_ball(gp, word_len)?;
        let tables = ball
            .iter()
            .map(|e| FlowTable::new(LiftedLogs::of(&e.iso)?, BALL_TABLE_POWERS))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BallTester { tables, word_len })
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    /// Smallest Killing norm over the ball at `g`.
    pub fn min_killing_norm(&self, g: Mat2) -> f64 {
        self.tables
            .iter()
            .map(|t| killing_norm(t.logs.xl, t.logs.xr, g))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn in_d(&self, g: Mat2, margin: f64) -> bool {
        self.tables
            .iter()
            .all(|t| killing_norm(t.logs.xl, t.logs.xr, g) > margin)
    }

    /// C_∞ truncated at `n_max`; the ball is closed under inversion, so only
    /// positive powers of each element are needed.
    pub fn in_c_inf(&self, x: Vec22, n_max: u32, margin: f64) -> Result<bool, CausalError> {
        for t in &self.tables {
            if !t.c_range(x, n_max, false, margin)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn contains(&self, x: Vec22, mode: DomainMode, margin: f64) -> Result<bool, CausalError> {
        match mode {
            DomainMode::D => Ok(self.in_d(ads_matrix(x)?, margin)),
            DomainMode::CInf { n_max } => self.in_c_inf(x, n_max, margin),
        }
    }
}

/// Membership of `x` in D(ρ) or C_∞(ρ) approximated over the reduced words
/// of length at most `word_len`, with a strict margin in every inequality.
pub fn group_domain_membership(
    gp: &GroupPresentation,
    x: Vec22,
    word_len: usize,
    mode: DomainMode,
    margin: f64,
) -> Result<bool, CausalError> {
    BallTester::new(gp, word_len)?.contains(x, mode, margin)
}

/// `X_n = exp(nλΔ)·A_L·exp(−nλΔ)·g − g·exp(nμΔ)·A_R·exp(−nμΔ)`, the Killing
/// matrix of `γ₁ⁿγ₂γ₁⁻ⁿ` at `g` when `γ₂ = (exp A_L, exp A_R)`.
pub fn xn_matrix(al: Mat2, ar: Mat2, g: Mat2, lambda: f64, mu: f64, n: i32) -> Mat2 {
    let n = n as f64;
    let cl = DELTA.scale(n * lambda).exp();
    let cr = DELTA.scale(n * mu).exp();
    cl * al * cl.adjugate() * g - g * cr * ar * cr.adjugate()
}

/// Entrywise closed form of [`xn_matrix`] for symmetric traceless
/// `A = [[α, β], [β, −α]]` and `g` with lower-left entry 0.
pub fn xn_closed_form(
    (alpha_l, beta_l): (f64, f64),
    (alpha_r, beta_r): (f64, f64),
    g: Mat2,
    lambda: f64,
    mu: f64,
    n: i32,
) -> Mat2 {
    let Mat2 { a, b, d, .. } = g;
    let n = n as f64;
    let el = |s: f64| (s * n * lambda).exp();
    let em = |s: f64| (s * n * mu).exp();
    Mat2::new(
        a * (alpha_l - alpha_r) - b * beta_r * em(-2.0),
        b * (alpha_l + alpha_r) + d * beta_l * el(2.0) - a * beta_r * em(2.0),
        a * beta_l * el(-2.0) - d * beta_r * em(-2.0),
        b * beta_l * el(-2.0) - d * (alpha_l - alpha_r),
    )
}
