//! Finitely generated groups of isometries: word balls, limit sets and the
//! admissibility and action-validity predicates.

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::achronal::{AchronalSpec, SpecKind};
use crate::boundary::EinPoint;
use crate::geometry::{pairing, GeometryError, Mat2, Vec22};
use crate::isometry::{
    attractive_fixed_point, classify_component, classify_pair, ComponentClass, IsoTag, IsometryPair,
};

/// Largest ball `enumerate_ball` will build.
pub const BALL_CAP: usize = 1_000_000;
/// Default deduplication radius for limit points.
pub const DEDUP_EPS: f64 = 1e-7;
/// Projective tolerance for comparing fixed points.
pub const FIXED_POINT_TOL: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("presentation has no generators")]
    NoGenerators,
    #[error("generator {index} is trivial")]
    TrivialGenerator { index: usize },
    #[error("labels do not match generators ({labels} labels, {generators} generators)")]
    LabelMismatch { labels: usize, generators: usize },
    #[error("word length must be at least 1")]
    ZeroWordLength,
    #[error("word ball has {size} elements, above the cap of {cap}")]
    BallTooLarge { size: u128, cap: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Generators of a (presumed free) group `Γ` and its representation `ρ = (ρ_L, ρ_R)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupPresentation {
    generators: Vec<IsometryPair>,
    labels: Vec<String>,
}

impl GroupPresentation {
    pub fn new(generators: Vec<IsometryPair>, labels: Vec<String>) -> Result<Self, GroupError> {
        if generators.is_empty() {
            return Err(GroupError::NoGenerators);
        }
        if labels.len() != generators.len() {
            return Err(GroupError::LabelMismatch {
                labels: labels.len(),
                generators: generators.len(),
            });
        }
        for (index, g) in generators.iter().enumerate() {
            g.gl.check_unimodular()?;
            g.gr.check_unimodular()?;
            if classify_pair(g).tag == IsoTag::Trivial {
                return Err(GroupError::TrivialGenerator { index });
            }
        }
        Ok(GroupPresentation { generators, labels })
    }

    /// Generators labelled `a`, `b`, `c`, ...
    pub fn from_generators(generators: Vec<IsometryPair>) -> Result<Self, GroupError> {
        let labels = (0..generators.len())
            .map(|i| letter(i, false).to_string())
            .collect();
        Self::new(generators, labels)
    }

    pub fn generators(&self) -> &[IsometryPair] {
        &self.generators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// The presentation conjugated by `h`: generators `h·γ·h⁻¹`.
    pub fn conjugate(&self, h: &IsometryPair) -> Self {
        let hi = h.inverse();
        let generators = self
            .generators
            .iter()
            .map(|g| h.compose(g).compose(&hi))
            .collect::<Vec<_>>();
        GroupPresentation {
            generators,
            labels: self.labels.clone(),
        }
    }

    /// Whether all generators commute in `PSL(2,R) × PSL(2,R)`.
    pub fn is_abelian(&self) -> bool {
        let commute = |a: Mat2, b: Mat2| {
            let (ab, ba) = (a * b, b * a);
            let tol = 1e-9 * ab.max_abs().max(1.0);
            ab.max_abs_diff(ba) <= tol || ab.max_abs_diff(-ba) <= tol
        };
        self.generators.iter().enumerate().all(|(i, g)| {
            self.generators[i + 1..]
                .iter()
                .all(|h| commute(g.gl, h.gl) && commute(g.gr, h.gr))
        })
    }
}

fn letter(i: usize, inverse: bool) -> char {
    let c = (b'a' + (i % 26) as u8) as char;
    if inverse {
        c.to_ascii_uppercase()
    } else {
        c
    }
}

/// A reduced word and its image. Letters are `±(i+1)` for generator `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallElement {
    pub word: Vec<i8>,
    pub iso: IsometryPair,
}

impl BallElement {
    /// The word with inverses in upper case, e.g. `aB`.
    pub fn word_string(&self) -> String {
        word_string(&self.word)
    }
}

pub fn word_string(word: &[i8]) -> String {
    word.iter()
        .map(|&l| letter(l.unsigned_abs() as usize - 1, l < 0))
        .collect()
}

/// Number of nontrivial reduced words of length at most `len` in `rank` letters.
pub fn ball_size(rank: usize, len: usize) -> u128 {
    let (n, m) = (2 * rank as u128, 2 * rank as u128 - 1);
    let mut total = 0u128;
    let mut layer = n;
    for _ in 0..len {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(m);
    }
    total
}

/// All nontrivial freely reduced words of length at most `len`, by length and
/// then lexicographically with `a < A < b < B < …`.
pub fn enumerate_ball(gp: &GroupPresentation, len: usize) -> Result<Vec<BallElement>, GroupError> {
    if len == 0 {
        return Err(GroupError::ZeroWordLength);
    }
    let size = ball_size(gp.rank(), len);
    if size > BALL_CAP as u128 {
        return Err(GroupError::BallTooLarge {
            size,
            cap: BALL_CAP,
        });
    }
    let letters: Vec<(i8, IsometryPair)> = gp
        .generators
        .iter()
        .enumerate()
        .flat_map(|(i, g)| [((i + 1) as i8, *g), (-((i + 1) as i8), g.inverse())])
        .collect();
    let mut out: Vec<BallElement> = Vec::with_capacity(size as usize);
    let mut layer: Vec<BallElement> = letters
        .iter()
        .map(|(l, g)| BallElement {
            word: vec![*l],
            iso: *g,
        })
        .collect();
    for k in 1..=len {
        let start = out.len();
        out.extend(layer);
        if k == len {
            break;
        }
        let mut next = Vec::new();
        for e in &out[start..] {
            let last = *e.word.last().unwrap();
            for (l, g) in &letters {
                if *l == -last {
                    continue;
                }
                let mut word = e.word.clone();
                word.push(*l);
                // Powers of one letter keep exact logarithms.
                let iso = if word.iter().all(|x| x == l) && g.logl.is_some() {
                    g.power(word.len() as i64)
                } else {
                    e.iso.compose(g)
                };
                next.push(BallElement { word, iso });
            }
        }
        layer = next;
    }
    Ok(out)
}

/// A sampled limit point and the word whose attractive fixed point it is.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitPoint {
    pub point: EinPoint,
    pub vector: Vec22,
    pub word: String,
}

/// Finite approximation of the limit set `Λ(ρ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSetApprox {
    pub points: Vec<LimitPoint>,
    pub word_len: usize,
    pub dedup: f64,
    /// Words without an attractive fixed point, with the reason.
    pub skipped: Vec<(String, String)>,
}

impl LimitSetApprox {
    pub fn ein_points(&self) -> Vec<EinPoint> {
        self.points.iter().map(|p| p.point).collect()
    }
}

/// EinPoint of a null vector, with `θ, φ ∈ (−π, π]`.
pub fn null_vector_to_ein(v: Vec22) -> EinPoint {
    EinPoint::new(v.x2.atan2(v.x1), v.y2.atan2(v.y1))
}

/// Deduplication on a hashed grid of cell size `eps`.
struct Dedup {
    eps: f64,
    n_phi: i64,
    cells: HashMap<(i64, i64), Vec<EinPoint>>,
}

impl Dedup {
    fn new(eps: f64) -> Self {
        Dedup {
            eps,
            n_phi: (2.0 * PI / eps).ceil() as i64,
            cells: HashMap::new(),
        }
    }

    fn key(&self, p: EinPoint) -> (i64, i64) {
        (
            (p.phi_mod() / self.eps).floor() as i64,
            (p.theta / self.eps).floor() as i64,
        )
    }

    /// Inserts `p` unless a stored point is within `eps`.
    fn insert(&mut self, p: EinPoint) -> bool {
        let (i, j) = self.key(p);
        for di in -1..=1 {
            for dj in -1..=1 {
                let k = ((i + di).rem_euclid(self.n_phi), j + dj);
                if let Some(v) = self.cells.get(&k) {
                    if v.iter().any(|q| q.cylinder_distance(p) < self.eps) {
                        return false;
                    }
                }
            }
        }
        self.cells.entry((i, j)).or_default().push(p);
        true
    }
}

/// Attractive fixed points of the word ball, signed coherently and deduplicated.
///
/// Signs: the fixed point `A` of the first element gets `y1 > 0` (or `y2 > 0`
/// when `y1` vanishes), the fixed point `B` of its inverse gets `⟨A, B⟩ < 0`,
/// and every other point `p` gets `⟨p, A⟩ + ⟨p, B⟩ < 0`.
pub fn limit_set(
    gp: &GroupPresentation,
    len: usize,
    eps: f64,
) -> Result<LimitSetApprox, GroupError> {
    let ball = enumerate_ball(gp, len)?;
    let mut skipped = Vec::new();
    let mut fixed = Vec::new();
    for e in &ball {
        match attractive_fixed_point(&e.iso) {
            Ok(v) => fixed.push((e, v)),
            Err(err) => skipped.push((e.word_string(), err.to_string())),
        }
    }
    let mut approx = LimitSetApprox {
        points: Vec::new(),
        word_len: len,
        dedup: eps,
        skipped,
    };
    let Some(&(first, a)) = fixed.first() else {
        return Ok(approx);
    };
    let a = if a.y1 > 1e-12 || (a.y1.abs() <= 1e-12 && a.y2 > 0.0) {
        a
    } else {
        -a
    };
    let b = attractive_fixed_point(&first.iso.inverse()).map_err(|_| GeometryError::NoLog {
        trace: first.iso.gl.trace(),
    })?;
    let b = if pairing(a, b) < 0.0 { b } else { -b };
    let mut dedup = Dedup::new(eps);
    for (e, v) in fixed {
        let s = pairing(v, a) + pairing(v, b);
        if s.abs() < 1e-12 * v.euclidean_norm() {
            approx
                .skipped
                .push((e.word_string(), "sign undetermined".into()));
            continue;
        }
        let v = if s < 0.0 { v } else { -v };
        let p = null_vector_to_ein(v);
        if dedup.insert(p) {
            approx.points.push(LimitPoint {
                point: p,
                vector: v,
                word: e.word_string(),
            });
        }
    }
    Ok(approx)
}

/// Hausdorff distance in the cylinder metric.
pub fn hausdorff_distance(a: &[EinPoint], b: &[EinPoint]) -> f64 {
    let one_sided = |x: &[EinPoint], y: &[EinPoint]| {
        x.iter()
            .map(|p| {
                y.iter()
                    .map(|q| p.cylinder_distance(*q))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}

/// Largest distance from a point of the depth-`len` limit set to the orbit
/// of `seed` under the ball of depth `len + extra`.
pub fn minimality_probe(
    gp: &GroupPresentation,
    seed: Vec22,
    len: usize,
    extra: usize,
) -> Result<f64, GroupError> {
    let ls = limit_set(gp, len, DEDUP_EPS)?;
    let ball = enumerate_ball(gp, len + extra)?;
    let orbit: Vec<Vec22> = ball
        .iter()
        .map(|e| {
            let w = e.iso.act(seed);
            w.scale(1.0 / w.euclidean_norm())
        })
        .collect();
    // Compare projectively, since orbit points carry no coherent sign.
    let worst = ls
        .points
        .iter()
        .map(|p| {
            let v = p.vector.scale(1.0 / p.vector.euclidean_norm());
            orbit
                .iter()
                .map(|w| projective_distance(v, *w))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    Ok(worst)
}

/// Chordal distance between the lines spanned by two nonzero vectors.
pub fn projective_distance(u: Vec22, v: Vec22) -> f64 {
    let (u, v) = (
        u.scale(1.0 / u.euclidean_norm()),
        v.scale(1.0 / v.euclidean_norm()),
    );
    (u - v).euclidean_norm().min((u + v).euclidean_norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AbelianFamily {
    AHyp,
    AExt,
    APar,
    None,
}

impl AbelianFamily {
    pub fn name(self) -> &'static str {
        match self {
            AbelianFamily::AHyp => "A_hyp",
            AbelianFamily::AExt => "A_ext",
            AbelianFamily::APar => "A_par",
            AbelianFamily::None => "none",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    /// Outcome of the cyclic rule, for single-generator groups.
    pub cyclic_rule: Option<bool>,
    pub abelian: bool,
    pub abelian_family: AbelianFamily,
    /// Failed necessary conditions, one line per offending word or clause.
    pub necessary_conditions: Vec<String>,
    /// True when no check failed. For non-abelian groups this is only a
    /// necessary condition.
    pub admissible: bool,
}

/// Single-generator rule: one side hyperbolic and the other non-elliptic, or
/// both parabolic turning the same way.
pub fn cyclic_rule(g: &IsometryPair) -> bool {
    let (l, r) = (classify_component(g.gl), classify_component(g.gr));
    (l.is_hyperbolic() && !r.is_elliptic())
        || (r.is_hyperbolic() && !l.is_elliptic())
        || match (l, r) {
            (
                ComponentClass::Parabolic { sense: s1, .. },
                ComponentClass::Parabolic { sense: s2, .. },
            ) => s1 == s2,
            _ => false,
        }
}

fn hyp_or_trivial(c: &ComponentClass) -> bool {
    c.is_hyperbolic() || c.is_trivial()
}

fn par_or_trivial(c: &ComponentClass) -> bool {
    c.is_parabolic() || c.is_trivial()
}

/// Signed nilpotent part of a parabolic or trivial element, normalized to positive trace.
fn nilpotent(m: Mat2) -> Mat2 {
    let m = if m.trace() < 0.0 { -m } else { m };
    m - Mat2::IDENTITY
}

/// Ratio `t` with `n = t·n0`, when the two nilpotents are proportional.
fn nil_ratio(n: Mat2, n0: Mat2) -> Option<f64> {
    let d = n0.a * n0.a + n0.b * n0.b + n0.c * n0.c + n0.d * n0.d;
    let t = (n.a * n0.a + n.b * n0.b + n.c * n0.c + n.d * n0.d) / d;
    (n.max_abs_diff(n0.scale(t)) < 1e-8 * n.max_abs().max(1.0)).then_some(t)
}

fn abelian_family(gp: &GroupPresentation) -> AbelianFamily {
    let cls: Vec<_> = gp
        .generators
        .iter()
        .map(|g| (classify_component(g.gl), classify_component(g.gr)))
        .collect();
    if cls
        .iter()
        .all(|(l, r)| hyp_or_trivial(l) && hyp_or_trivial(r))
    {
        return AbelianFamily::AHyp;
    }
    let ext_l = cls
        .iter()
        .all(|(l, r)| par_or_trivial(l) && hyp_or_trivial(r));
    let ext_r = cls
        .iter()
        .all(|(l, r)| hyp_or_trivial(l) && par_or_trivial(r));
    if ext_l || ext_r {
        return AbelianFamily::AExt;
    }
    if cls
        .iter()
        .all(|(l, r)| l.is_parabolic() && r.is_parabolic())
    {
        let g0 = &gp.generators[0];
        let (l0, r0) = (nilpotent(g0.gl), nilpotent(g0.gr));
        let same = cls.iter().all(|(l, r)| match (l, r) {
            (
                ComponentClass::Parabolic { sense: a, .. },
                ComponentClass::Parabolic { sense: b, .. },
            ) => a == b,
            _ => false,
        });
        let one_parameter = gp.generators.iter().all(|g| {
            match (
                nil_ratio(nilpotent(g.gl), l0),
                nil_ratio(nilpotent(g.gr), r0),
            ) {
                (Some(t), Some(s)) => (t - s).abs() < 1e-8 * t.abs().max(1.0),
                _ => false,
            }
        });
        if same && one_parameter {
            return AbelianFamily::APar;
        }
    }
    AbelianFamily::None
}

/// Necessary conditions for `ρ` to be admissible. Faithfulness and
/// discreteness are not decided.
pub fn admissibility_probe(gp: &GroupPresentation) -> AdmissibilityReport {
    let abelian = gp.is_abelian();
    let mut report = AdmissibilityReport {
        cyclic_rule: None,
        abelian,
        abelian_family: AbelianFamily::None,
        necessary_conditions: Vec::new(),
        admissible: true,
    };
    if gp.rank() == 1 {
        let ok = cyclic_rule(&gp.generators[0]);
        report.cyclic_rule = Some(ok);
        report.abelian_family = abelian_family(gp);
        if !ok {
            report.necessary_conditions.push(format!(
                "cyclic rule: {} component types ({}, {})",
                gp.labels[0],
                classify_component(gp.generators[0].gl).name(),
                classify_component(gp.generators[0].gr).name()
            ));
        }
    } else if abelian {
        report.abelian_family = abelian_family(gp);
        if report.abelian_family == AbelianFamily::None {
            report
                .necessary_conditions
                .push("abelian but in no admissible family".into());
        }
    } else {
        match enumerate_ball(gp, 3) {
            Ok(ball) => {
                for e in ball {
                    let (l, r) = (classify_component(e.iso.gl), classify_component(e.iso.gr));
                    for (side, c) in [("left", l), ("right", r)] {
                        if c.is_elliptic() || c.is_trivial() {
                            report.necessary_conditions.push(format!(
                                "word {}: {side} component is {}",
                                e.word_string(),
                                c.name()
                            ));
                        }
                    }
                }
            }
            Err(e) => report.necessary_conditions.push(e.to_string()),
        }
    }
    report.admissible = report.necessary_conditions.is_empty();
    report
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub passed: bool,
    /// The violated clause, when failing.
    pub clause: Option<String>,
    pub message: String,
}

impl ValidationReport {
    fn pass(message: impl Into<String>) -> Self {
        ValidationReport {
            passed: true,
            clause: None,
            message: message.into(),
        }
    }

    fn fail(clause: &str, message: impl Into<String>) -> Self {
        ValidationReport {
            passed: false,
            clause: Some(clause.into()),
            message: message.into(),
        }
    }
}

fn fixes(g: &IsometryPair, p: Vec22) -> bool {
    projective_distance(g.act(p), p) < FIXED_POINT_TOL
}

/// Whether the action of `Γ` on `E(Λ)` is of the kind the elementary theory
/// allows: free, properly discontinuous and strongly causal.
pub fn action_validation(spec: &AchronalSpec, gp: &GroupPresentation) -> ValidationReport {
    match spec.kind.clone() {
        SpecKind::Splitting { x, y } | SpecKind::Conical { x, y, .. } => {
            let (px, py) = (spec.lift(x), spec.lift(y));
            for (g, label) in gp.generators.iter().zip(&gp.labels) {
                if !fixes(g, px) || !fixes(g, py) {
                    return ValidationReport::fail(
                        "fixed-point mismatch",
                        format!("generator {label} does not fix both feet"),
                    );
                }
            }
            if gp.rank() > 1 {
                return ValidationReport::fail(
                    "non-cyclic",
                    "a non-cyclic subgroup of A_hyp cannot act properly discontinuously",
                );
            }
            let g = &gp.generators[0];
            match classify_pair(g).tag {
                IsoTag::HyperbolicTranslationL | IsoTag::HyperbolicTranslationR => {
                    ValidationReport::pass("cyclic translation fixing the feet")
                }
                IsoTag::HypHyp => {
                    let (Ok(a), Ok(r)) = (
                        attractive_fixed_point(g),
                        attractive_fixed_point(&g.inverse()),
                    ) else {
                        return ValidationReport::fail("fixed-point mismatch", "no fixed points");
                    };
                    let d = |u: Vec22, v: Vec22| projective_distance(u, v) < FIXED_POINT_TOL;
                    if (d(px, a) && d(py, r)) || (d(px, r) && d(py, a)) {
                        ValidationReport::pass("fixed points match")
                    } else {
                        ValidationReport::fail(
                            "fixed-point mismatch",
                            "feet are not the attractive and repulsive fixed points",
                        )
                    }
                }
                tag => ValidationReport::fail(
                    "not in A_hyp",
                    format!("generator of type {tag:?} is not hyperbolic-or-trivial on both sides"),
                ),
            }
        }
        SpecKind::Extreme { x, y } => {
            let (px, py) = (spec.lift(x), spec.lift(y));
            for (g, label) in gp.generators.iter().zip(&gp.labels) {
                if !fixes(g, px) || !fixes(g, py) {
                    return ValidationReport::fail(
                        "fixed-point mismatch",
                        format!("generator {label} does not fix the segment ends"),
                    );
                }
            }
            if !gp.is_abelian() {
                return ValidationReport::fail("non-abelian", "group is not abelian");
            }
            let tags: Vec<IsoTag> = gp.generators.iter().map(|g| classify_pair(g).tag).collect();
            let translations = |t: &IsoTag| {
                matches!(
                    t,
                    IsoTag::HyperbolicTranslationL | IsoTag::HyperbolicTranslationR
                )
            };
            if tags.iter().any(|t| {
                matches!(
                    t,
                    IsoTag::ParabolicTranslationL | IsoTag::ParabolicTranslationR
                )
            }) {
                return ValidationReport::fail(
                    "parabolic translation",
                    "a parabolic translation leaves no domain where the action is causal",
                );
            }
            if tags
                .iter()
                .all(|t| matches!(t, IsoTag::ParHyp | IsoTag::HypPar))
            {
                return ValidationReport::pass("abelian subgroup of A_ext");
            }
            if gp.rank() == 1 && translations(&tags[0]) {
                return ValidationReport::pass("cyclic translation");
            }
            if tags.iter().all(|t| *t == IsoTag::HyperbolicTranslationL)
                || tags.iter().all(|t| *t == IsoTag::HyperbolicTranslationR)
            {
                return ValidationReport::pass("subgroup of one factor");
            }
            if tags.contains(&IsoTag::HypHyp) {
                return ValidationReport::fail(
                    "A_hyp outside the factors",
                    "hyperbolic pairs with both sides nontrivial never act causally here",
                );
            }
            ValidationReport::fail("not in A_ext", format!("generator types {tags:?}"))
        }
        SpecKind::PointCloud(_) | SpecKind::LimitSet { .. } => {
            let report = admissibility_probe(gp);
            if report.admissible {
                ValidationReport::pass("necessary admissibility conditions hold")
            } else {
                ValidationReport::fail("admissibility", report.necessary_conditions.join("; "))
            }
        }
    }
}

/// Splitting datum from the fixed points of a single generator.
pub fn cyclic_splitting_spec(
    g: &IsometryPair,
    n_grid: usize,
) -> Result<AchronalSpec, crate::achronal::AchronalError> {
    let gp = GroupPresentation::from_generators(vec![*g])
        .map_err(|e| crate::achronal::AchronalError::InvalidSpec(e.to_string()))?;
    let ls = limit_set(&gp, 1, DEDUP_EPS)
        .map_err(|e| crate::achronal::AchronalError::InvalidSpec(e.to_string()))?;
    match ls.points.as_slice() {
        [p, q] => AchronalSpec::splitting(p.point, q.point, n_grid),
        _ => Err(crate::achronal::AchronalError::InvalidSpec(
            "generator does not have two fixed points".into(),
        )),
    }
}
