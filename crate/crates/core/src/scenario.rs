//! Scenario files: a TOML description of an achronal datum, a group acting
//! on its invisible domain, and sampling parameters.
//!
//! ```toml
//! [scenario]
//! kind = "splitting"          # splitting | extreme | conical | cyclic | schottky | custom
//! id = "demo"
//!
//! [lambda]
//! points = [[0.0, 0.0], [3.141592653589793, 0.0]]   # [phi, theta]
//!
//! [[group.generators]]
//! exp = true                  # left/right are Lie algebra elements
//! left = [1.0, 0.0, 0.0, -1.0]
//! right = [2.0, 0.0, 0.0, -2.0]
//!
//! [sampling]
//! n = 10000
//! seed = 7
//! ```
//!
//! Instead of `[group]` a `[btz]` table with `r_plus` and `r_minus` uses the
//! BTZ holonomy as the only generator.

use std::ops::Range;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use toml::Spanned;

use crate::achronal::AchronalSpec;
use crate::analysis::{AnalysisError, Sampling, Scenario, Tolerances};
use crate::boundary::EinPoint;
use crate::geometry::Mat2;
use crate::group::{
    action_validation, cyclic_splitting_spec, limit_set, GroupPresentation, ValidationReport,
    DEDUP_EPS,
};
use crate::isometry::{classify_pair, IsometryPair};
use crate::kerr::BTZParams;

/// Word length used for the limit set of a Schottky scenario.
pub const DEFAULT_LIMIT_WORD_LEN: usize = 8;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{line}:{col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: {message}")]
    Invalid {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Splitting,
    Extreme,
    Conical,
    Cyclic,
    Schottky,
    Custom,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Splitting => "splitting",
            ScenarioKind::Extreme => "extreme",
            ScenarioKind::Conical => "conical",
            ScenarioKind::Cyclic => "cyclic",
            ScenarioKind::Schottky => "schottky",
            ScenarioKind::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Header {
    pub kind: ScenarioKind,
    pub id: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaSection {
    /// `[phi, theta]` pairs.
    pub points: Spanned<Vec<[f64; 2]>>,
}

/// A generator as a pair of row-major 2×2 matrices, or of Lie algebra
/// elements when `exp` is set.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub label: Option<String>,
    #[serde(default)]
    pub exp: bool,
    pub left: [f64; 4],
    pub right: [f64; 4],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSection {
    pub generators: Spanned<Vec<Spanned<GeneratorSpec>>>,
    /// Word length for limit sets.
    pub word_len: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BtzSection {
    pub r_plus: f64,
    pub r_minus: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub scenario: Spanned<Header>,
    pub lambda: Option<LambdaSection>,
    pub group: Option<GroupSection>,
    pub btz: Option<BtzSection>,
    #[serde(default)]
    pub sampling: Sampling,
    #[serde(default)]
    pub tolerances: Tolerances,
}

/// A parsed scenario whose group action has not been validated yet.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub id: String,
    pub kind: ScenarioKind,
    pub spec: AchronalSpec,
    pub group: GroupPresentation,
    pub btz: Option<BTZParams>,
    pub sampling: Sampling,
    pub tolerances: Tolerances,
}

impl LoadedScenario {
    pub fn validate(&self) -> ValidationReport {
        action_validation(&self.spec, &self.group)
    }

    /// One-line description of the generators, e.g. `cyclic HypHyp`.
    pub fn group_summary(&self) -> String {
        let tags: Vec<String> = self
            .group
            .generators()
            .iter()
            .map(|g| format!("{:?}", classify_pair(g).tag))
            .collect();
        match self.group.rank() {
            1 => format!("cyclic {}", tags[0]),
            n => format!("rank {n} [{}]", tags.join(", ")),
        }
    }

    /// Validates the action and builds the analysis scenario.
    pub fn into_scenario(self) -> Result<Scenario, AnalysisError> {
        let d_bands = self.kind == ScenarioKind::Cyclic;
        Ok(Scenario::new(
            self.id,
            self.spec,
            self.group,
            self.sampling,
            self.tolerances,
        )?
        .with_d_bands(d_bands))
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before
        .rfind('\n')
        .map_or(before.len(), |i| before.len() - i - 1)
        + 1;
    (line, col)
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn invalid(&self, span: Range<usize>, message: impl Into<String>) -> ScenarioError {
        let (line, col) = line_col(self.text, span.start);
        ScenarioError::Invalid {
            line,
            col,
            message: message.into(),
        }
    }
}

fn generator(g: &GeneratorSpec) -> Result<IsometryPair, String> {
    let l = Mat2::from_row_major(g.left);
    let r = Mat2::from_row_major(g.right);
    if g.exp {
        if l.trace().abs() > 1e-12 || r.trace().abs() > 1e-12 {
            return Err("Lie algebra elements must be traceless".into());
        }
        Ok(IsometryPair::from_logs(l, r))
    } else {
        IsometryPair::new(l, r).map_err(|e| e.to_string())
    }
}

/// Parses scenario text; `default_id` is used when the file has no `scenario.id`.
pub fn parse_scenario(text: &str, default_id: &str) -> Result<LoadedScenario, ScenarioError> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| {
        let (line, col) = e.span().map_or((1, 1), |s| line_col(text, s.start));
        ScenarioError::Parse {
            line,
            col,
            message: e.message().to_string(),
        }
    })?;
    let ctx = Ctx { text };
    let header_span = file.scenario.span();
    let header = file.scenario.into_inner();
    let kind = header.kind;
    let id = header.id.unwrap_or_else(|| default_id.to_string());
    if id.contains([',', '\n', '\r', '"']) {
        return Err(ctx.invalid(
            header_span,
            "scenario id may not contain commas, quotes or newlines",
        ));
    }
    let tol = file.tolerances;
    if !(tol.quadric > 0.0 && tol.margin >= 0.0 && tol.grid >= 8) {
        return Err(ctx.invalid(
            header_span,
            "tolerances need quadric > 0, margin ≥ 0, grid ≥ 8",
        ));
    }

    let (group, btz, word_len) = match (&file.group, &file.btz) {
        (Some(_), Some(_)) => {
            return Err(ctx.invalid(header_span, "give either [group] or [btz], not both"))
        }
        (None, None) => return Err(ctx.invalid(header_span, "missing [group] or [btz] table")),
        (None, Some(b)) => {
            let p = BTZParams::new(b.r_plus, b.r_minus)
                .map_err(|e| ctx.invalid(header_span.clone(), e.to_string()))?;
            let gp = GroupPresentation::new(vec![p.holonomy()], vec!["holonomy".into()])
                .map_err(|e| ctx.invalid(header_span.clone(), e.to_string()))?;
            (gp, Some(p), DEFAULT_LIMIT_WORD_LEN)
        }
        (Some(g), None) => {
            let mut gens = Vec::new();
            let mut labels = Vec::new();
            for (i, spanned) in g.generators.get_ref().iter().enumerate() {
                let iso = generator(spanned.get_ref())
                    .map_err(|m| ctx.invalid(spanned.span(), format!("generator {i}: {m}")))?;
                gens.push(iso);
                labels.push(
                    spanned
                        .get_ref()
                        .label
                        .clone()
                        .unwrap_or_else(|| ((b'a' + i as u8) as char).to_string()),
                );
            }
            let gp = GroupPresentation::new(gens, labels)
                .map_err(|e| ctx.invalid(g.generators.span(), e.to_string()))?;
            (gp, None, g.word_len.unwrap_or(DEFAULT_LIMIT_WORD_LEN))
        }
    };

    let (points, points_span) = match &file.lambda {
        Some(l) => (
            Some(
                l.points
                    .get_ref()
                    .iter()
                    .map(|p| EinPoint::new(p[0], p[1]))
                    .collect::<Vec<_>>(),
            ),
            l.points.span(),
        ),
        None => (None, header_span.clone()),
    };
    let need = |n: usize| -> Result<Vec<EinPoint>, ScenarioError> {
        match &points {
            Some(p) if p.len() == n => Ok(p.clone()),
            Some(p) => Err(ctx.invalid(
                points_span.clone(),
                format!("{} scenario needs {n} points, got {}", kind.name(), p.len()),
            )),
            None => Err(ctx.invalid(
                points_span.clone(),
                format!("{} scenario needs lambda.points", kind.name()),
            )),
        }
    };
    let grid = tol.grid;
    let spec = match kind {
        ScenarioKind::Splitting | ScenarioKind::Cyclic if points.is_none() => {
            if group.rank() != 1 {
                return Err(ctx.invalid(
                    header_span,
                    "without lambda.points the splitting pair comes from a single generator",
                ));
            }
            cyclic_splitting_spec(&group.generators()[0], grid)
        }
        ScenarioKind::Splitting | ScenarioKind::Cyclic => {
            let p = need(2)?;
            AchronalSpec::splitting(p[0], p[1], grid)
        }
        ScenarioKind::Extreme => {
            let p = need(2)?;
            AchronalSpec::extreme(p[0], p[1], grid)
        }
        ScenarioKind::Conical => {
            let p = need(3)?;
            AchronalSpec::conical(p[0], p[1], p[2], grid)
        }
        ScenarioKind::Custom => match &points {
            Some(p) => AchronalSpec::point_cloud(p.clone(), grid),
            None => return Err(ctx.invalid(points_span, "custom scenario needs lambda.points")),
        },
        ScenarioKind::Schottky => {
            let ls = limit_set(&group, word_len, DEDUP_EPS)
                .map_err(|e| ctx.invalid(header_span.clone(), e.to_string()))?;
            AchronalSpec::limit_set(ls.ein_points(), &format!("word length {word_len}"), grid)
        }
    }
    .map_err(|e| ctx.invalid(points_span.clone(), e.to_string()))?;

    Ok(LoadedScenario {
        id,
        kind,
        spec,
        group,
        btz,
        sampling: file.sampling,
        tolerances: tol,
    })
}

/// Reads and parses a scenario file; the file stem is the default id.
pub fn load_scenario(path: &Path) -> Result<LoadedScenario, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("scenario");
    parse_scenario(&text, stem)
}
