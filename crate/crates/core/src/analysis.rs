//! Visibility from the conformal boundary Ω(Λ), black holes, horizons,
//! the sampled comparison of the causal domains D and C_∞, and labelled
//! samples of E(Λ).
//!
//! A point `v` of the lifted invisible domain is visible when some point of
//! Ω(Λ) lies in its causal future. On a column of fixed longitude `φ` the
//! best candidate is the top of Ω, i.e. `Λ⁺(φ)`, so visibility reduces to the
//! sign of
//!
//! ```text
//! slack(v) = max_φ  Λ⁺(φ) − θ_v − d(v, e(φ))
//! ```
//!
//! over the columns where Ω is nonempty. Away from the ends of Λ the function
//! is maximal at the apexes of `Λ⁺`, which are always included as columns.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::achronal::{
    invisible_membership_lifted, split_region_classify, AchronalError, AchronalSpec, SpecKind,
    SplitRegion, HORIZON_TOL,
};
use crate::boundary::sphere_distance;
use crate::causal::{BallTester, CausalError, LiftedLogs};
use crate::geometry::{
    ads_matrix, conformal_coords, vec_to_matrix, CylCoord3, GeometryError, Vec22, QUADRIC_TOL,
};
use crate::group::{action_validation, GroupPresentation, ValidationReport};
use crate::isometry::{classify_pair, killing_norm, IsoTag, IsometryPair};

/// Uniform columns of Ω(Λ) used on top of the envelope apexes.
pub const OMEGA_COLUMNS: usize = 256;
/// Largest colatitude used when sampling AdS.
pub const RHO_MAX: f64 = 1.4;
/// Rejection sampling gives up after this many candidates per requested point.
const MAX_TRIES_PER_POINT: usize = 2000;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("scenario failed validation ({clause}): {message}")]
    Validation { clause: String, message: String },
    #[error("point is not in the invisible domain")]
    NotInDomain,
    #[error("ray does not cross the horizon (slack {start} at start, {end} at end)")]
    NoStraddle { start: f64, end: f64 },
    #[error("ray direction is not future timelike")]
    NotTimelike,
    #[error("rejection sampling accepted {accepted} of {requested} points")]
    SamplingExhausted { accepted: usize, requested: usize },
    #[error(transparent)]
    Achronal(#[from] AchronalError),
    #[error(transparent)]
    Causal(#[from] CausalError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sampling {
    pub n: usize,
    pub seed: u64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling { n: 10_000, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub quadric: f64,
    /// Width of the undecided band around the visibility flip.
    pub margin: f64,
    /// Envelope grid resolution.
    pub grid: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            quadric: QUADRIC_TOL,
            margin: 1e-6,
            grid: crate::boundary::DEFAULT_GRID,
        }
    }
}

/// A column `φ` of Ω(Λ) with its top `Λ⁺(φ)` and boundary direction.
#[derive(Debug, Clone, Copy)]
struct Column {
    top: f64,
    dir: [f64; 3],
}

/// An achronal datum together with a group validated to act on E(Λ).
#[derive(Debug, Clone)]
pub struct Scenario {
    pub id: String,
    pub spec: AchronalSpec,
    pub group: GroupPresentation,
    pub sampling: Sampling,
    pub tolerances: Tolerances,
    pub validation: ValidationReport,
    /// Also sample D(γ) outside E(Λ) when the group is a cyclic hyperbolic pair.
    pub sample_d_bands: bool,
    columns: Vec<Column>,
}

impl Scenario {
    pub fn new(
        id: impl Into<String>,
        spec: AchronalSpec,
        group: GroupPresentation,
        sampling: Sampling,
        tolerances: Tolerances,
    ) -> Result<Self, AnalysisError> {
        let validation = action_validation(&spec, &group);
        if !validation.passed {
            return Err(AnalysisError::Validation {
                clause: validation.clause.clone().unwrap_or_default(),
                message: validation.message.clone(),
            });
        }
        let columns = omega_columns(&spec);
        Ok(Scenario {
            id: id.into(),
            spec,
            group,
            sampling,
            tolerances,
            validation,
            sample_d_bands: false,
            columns,
        })
    }

    pub fn with_d_bands(mut self, on: bool) -> Self {
        self.sample_d_bands = on;
        self
    }

    /// Whether the group is a single hyperbolic pair with both sides nontrivial
    /// acting on a splitting datum.
    pub fn is_cyclic_hyp_hyp(&self) -> bool {
        matches!(self.spec.kind, SpecKind::Splitting { .. })
            && self.group.rank() == 1
            && classify_pair(&self.group.generators()[0]).tag == IsoTag::HypHyp
    }
}

fn omega_columns(spec: &AchronalSpec) -> Vec<Column> {
    let (plus, minus) = (spec.plus(), spec.minus());
    let phis = (0..OMEGA_COLUMNS)
        .map(|k| TAU * k as f64 / OMEGA_COLUMNS as f64)
        .chain(plus.corners().into_iter().map(|c| c.phi));
    phis.filter_map(|phi| {
        let top = plus.eval(phi);
        (minus.eval(phi) < top - 1e-12).then(|| Column {
            top,
            dir: [0.0, phi.cos(), phi.sin()],
        })
    })
    .collect()
}

/// Lift of `v` to the component of E(Λ) in the cylinder, if `v` is invisible from Λ.
pub fn lift_to_domain(spec: &AchronalSpec, v: Vec22) -> Option<CylCoord3> {
    let c = conformal_coords(v);
    [0, 1, -1, 2, -2]
        .into_iter()
        .map(|k| CylCoord3::new(c.theta + TAU * k as f64, c.rho_prime, c.phi))
        .find(|l| invisible_membership_lifted(spec, *l))
}

fn slack_at(columns: &[Column], c: CylCoord3) -> f64 {
    let s = c.sphere_point();
    columns
        .iter()
        .map(|col| col.top - c.theta - sphere_distance(s, col.dir))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Signed visibility slack of a lifted point: positive when some point of
/// Ω(Λ) lies in its strict causal future.
pub fn visibility_slack(scenario: &Scenario, c: CylCoord3) -> f64 {
    slack_at(&scenario.columns, c)
}

fn domain_slack(scenario: &Scenario, v: Vec22) -> Result<f64, AnalysisError> {
    let c = lift_to_domain(&scenario.spec, v).ok_or(AnalysisError::NotInDomain)?;
    Ok(visibility_slack(scenario, c))
}

/// Whether `v ∈ E(Λ)` can send a causal curve to Ω(Λ).
pub fn visible_from_boundary(scenario: &Scenario, v: Vec22) -> Result<bool, AnalysisError> {
    Ok(domain_slack(scenario, v)? > 0.0)
}

/// Whether `v ∈ E(Λ)` is invisible from Ω(Λ) by more than the scenario margin.
pub fn black_hole_membership(scenario: &Scenario, v: Vec22) -> Result<bool, AnalysisError> {
    Ok(domain_slack(scenario, v)? < -scenario.tolerances.margin)
}

/// A point located on the visibility flip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HorizonPoint {
    /// Ray parameter in `[0, 1]`.
    pub s: f64,
    pub cyl: CylCoord3,
    pub point: Vec22,
    pub iterations: u32,
}

/// Bisects the visibility flip along the segment `start + s·dir`, `s ∈ [0, 1]`,
/// written in cylinder coordinates `(θ, ρ', φ)`.
///
/// The start is lifted into E(Λ); the direction must be future timelike for
/// the cylinder metric at the start point.
pub fn horizon_locate(
    scenario: &Scenario,
    start: Vec22,
    dir: [f64; 3],
    tol: f64,
) -> Result<HorizonPoint, AnalysisError> {
    let c0 = lift_to_domain(&scenario.spec, start).ok_or(AnalysisError::NotInDomain)?;
    let spatial = dir[1].hypot(c0.rho_prime.sin() * dir[2]);
    if dir[0] <= spatial {
        return Err(AnalysisError::NotTimelike);
    }
    let at = |s: f64| {
        CylCoord3::new(
            c0.theta + s * dir[0],
            c0.rho_prime + s * dir[1],
            c0.phi + s * dir[2],
        )
    };
    let f = |s: f64| visibility_slack(scenario, at(s));
    let (f0, f1) = (f(0.0), f(1.0));
    if !(f0 > 0.0 && f1 < 0.0) {
        return Err(AnalysisError::NoStraddle { start: f0, end: f1 });
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let s = 0.5 * (lo + hi);
    let cyl = at(s);
    Ok(HorizonPoint {
        s,
        cyl,
        point: cyl.to_vec22(),
        iterations,
    })
}

/// Outcome of [`coincidence_probe`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoincidenceReport {
    pub samples: usize,
    pub word_len: usize,
    pub n_max: u32,
    pub margin: f64,
    pub d_members: usize,
    pub d_only: usize,
    pub d_only_fraction: f64,
    /// Counts of D-only points by decade of their smallest Killing norm.
    pub histogram: BTreeMap<i32, usize>,
}

/// A point of AdS with uniform conformal coordinates, `ρ' < RHO_MAX`.
pub fn random_cyl<R: Rng>(rng: &mut R) -> CylCoord3 {
    CylCoord3::new(
        rng.gen_range(-PI..PI),
        rng.gen_range(0.0..RHO_MAX),
        rng.gen_range(0.0..TAU),
    )
}

/// `n` points from [`random_cyl`], deterministic in `seed`.
pub fn sample_ads_points(n: usize, seed: u64) -> Vec<CylCoord3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_cyl(&mut rng)).collect()
}

/// Samples points of AdS and compares membership in D(ρ), with Killing norms
/// above `margin` over the word ball, against the truncated C_∞(ρ).
pub fn coincidence_probe(
    group: &GroupPresentation,
    n_samples: usize,
    word_len: usize,
    n_max: u32,
    margin: f64,
    seed: u64,
) -> Result<CoincidenceReport, AnalysisError> {
    let tester = BallTester::new(group, word_len)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CoincidenceReport {
        samples: n_samples,
        word_len,
        n_max,
        margin,
        d_members: 0,
        d_only: 0,
        d_only_fraction: 0.0,
        histogram: BTreeMap::new(),
    };
    for _ in 0..n_samples {
        let v = random_cyl(&mut rng).to_vec22();
        let g = ads_matrix(v)?;
        if !tester.in_d(g, margin) {
            continue;
        }
        report.d_members += 1;
        if !tester.in_c_inf(v, n_max, 0.0)? {
            report.d_only += 1;
            let decade = tester.min_killing_norm(g).log10().floor() as i32;
            *report.histogram.entry(decade).or_default() += 1;
        }
    }
    if report.d_members > 0 {
        report.d_only_fraction = report.d_only as f64 / report.d_members as f64;
    }
    Ok(report)
}

/// One labelled sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledPoint {
    pub v: Vec22,
    /// Conformal coordinates, with the time lifted into E(Λ) when the point
    /// lies there.
    pub cyl: CylCoord3,
    pub label: String,
    pub visible: bool,
    pub scenario_id: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LabeledPointCloud {
    pub rows: Vec<LabeledPoint>,
}

impl LabeledPointCloud {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Number of rows per label.
    pub fn label_counts(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for r in &self.rows {
            *out.entry(r.label.clone()).or_default() += 1;
        }
        out
    }
}

/// Label of a point outside E(Λ) lying in the absolute causal domain of a
/// cyclic hyperbolic holonomy.
pub const INNER_LABEL: &str = "inner";
/// Label of the remaining points of D(γ) outside E(Λ).
pub const D_OTHER_LABEL: &str = "d_other";

/// `bc` in the frame where the cyclic holonomy is diagonal and the splitting
/// pair is `{e₁e₂ᵀ, −e₂e₁ᵀ}`; in that frame E(Λ) is `{b > 0 > c}`.
pub fn diagonal_frame_bc(scenario: &Scenario, v: Vec22) -> Option<f64> {
    let n = scenario.spec.normalizer()?;
    let m = vec_to_matrix(n.act(v));
    // Right multiplication by R₀ turns e₁e₁ᵀ into e₁e₂ᵀ and e₂e₂ᵀ into −e₂e₁ᵀ.
    Some(-m.a * m.d)
}

fn region_label(scenario: &Scenario, v: Vec22, slack: f64) -> Result<String, AnalysisError> {
    let margin = scenario.tolerances.margin;
    Ok(match scenario.spec.kind {
        SpecKind::Splitting { .. } | SpecKind::Conical { .. } => {
            split_region_classify(&scenario.spec, v, HORIZON_TOL)?
                .label()
                .to_string()
        }
        SpecKind::Extreme { .. } => "end".into(),
        _ if slack > margin => "visible".into(),
        _ if slack < -margin => "black_hole".into(),
        _ => "horizon_band".into(),
    })
}

/// Rejection samples E(Λ), plus D(γ) for cyclic hyperbolic scenarios with
/// [`Scenario::sample_d_bands`] set, and labels every point. Deterministic in `seed`.
pub fn sample_domain(
    scenario: &Scenario,
    n: usize,
    seed: u64,
) -> Result<LabeledPointCloud, AnalysisError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cyclic = if scenario.sample_d_bands && scenario.is_cyclic_hyp_hyp() {
        Some(LiftedLogs::of(&scenario.group.generators()[0])?)
    } else {
        None
    };
    let mut rows = Vec::with_capacity(n);
    let mut tries = 0;
    while rows.len() < n {
        tries += 1;
        if tries > MAX_TRIES_PER_POINT * n.max(1) {
            return Err(AnalysisError::SamplingExhausted {
                accepted: rows.len(),
                requested: n,
            });
        }
        let c = random_cyl(&mut rng);
        let v = c.to_vec22();
        if let Some(l) = lift_to_domain(&scenario.spec, v) {
            let slack = visibility_slack(scenario, l);
            let label = region_label(scenario, v, slack)?;
            if label == SplitRegion::Outside.label() {
                continue;
            }
            rows.push(LabeledPoint {
                v,
                cyl: l,
                label,
                visible: slack > 0.0,
                scenario_id: scenario.id.clone(),
            });
        } else if let Some(logs) = &cyclic {
            if killing_norm(logs.xl, logs.xr, ads_matrix(v)?) <= scenario.tolerances.margin {
                continue;
            }
            let bc = diagonal_frame_bc(scenario, v).expect("splitting datum has a normalizer");
            let label = if bc >= 0.0 {
                INNER_LABEL
            } else {
                D_OTHER_LABEL
            };
            rows.push(LabeledPoint {
                v,
                cyl: c,
                label: label.into(),
                visible: false,
                scenario_id: scenario.id.clone(),
            });
        }
    }
    Ok(LabeledPointCloud { rows })
}

/// Applies an isometry to a point and returns its label in `scenario`, if
/// the image lies in E(Λ).
pub fn image_label(
    scenario: &Scenario,
    g: &IsometryPair,
    v: Vec22,
) -> Result<Option<String>, AnalysisError> {
    let w = g.act(v);
    match lift_to_domain(&scenario.spec, w) {
        Some(l) => Ok(Some(region_label(
            scenario,
            w,
            visibility_slack(scenario, l),
        )?)),
        None => Ok(None),
    }
}

/// `max_φ θ_v − Λ⁻(φ) − d(v, e(φ))`: positive when some point of Ω(Λ) lies in
/// the strict causal past of the lifted point.
pub fn past_visibility_slack(scenario: &Scenario, c: CylCoord3) -> f64 {
    let minus = scenario.spec.minus();
    let plus = scenario.spec.plus();
    let s = c.sphere_point();
    (0..OMEGA_COLUMNS)
        .map(|k| TAU * k as f64 / OMEGA_COLUMNS as f64)
        .chain(minus.corners().into_iter().map(|p| p.phi))
        .filter_map(|phi| {
            let bottom = minus.eval(phi);
            (bottom < plus.eval(phi) - 1e-12)
                .then(|| c.theta - bottom - sphere_distance(s, [0.0, phi.cos(), phi.sin()]))
        })
        .fold(f64::NEG_INFINITY, f64::max)
}
