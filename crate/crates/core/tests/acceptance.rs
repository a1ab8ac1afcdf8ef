//! Acceptance suite. Prints one line per criterion and exits non-zero when a
//! criterion fails that is not listed in `KNOWN_FAILURES`.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use btz_geometry::achronal::{
    core_membership, normalized_affine, split_region_classify, HORIZON_TOL,
};
use btz_geometry::analysis::{
    black_hole_membership, coincidence_probe, horizon_locate, lift_to_domain, random_cyl,
    sample_ads_points, sample_domain, visibility_slack,
};
use btz_geometry::boundary::achronality_check;
use btz_geometry::causal::{in_d_closed_form, xn_closed_form, xn_matrix, NormalCase};
use btz_geometry::geometry::{ads_matrix, Mat2, Vec22};
use btz_geometry::group::{limit_set, projective_distance, DEDUP_EPS};
use btz_geometry::isometry::killing_norm;
use btz_geometry::kerr::{
    extreme_lightlike_killing, holonomy_translation_check, kerr_metric, metric_max_abs_diff,
    pullback_check, radial_geodesic_length, surface_geometry, BTZParams, KerrPoint, SurfaceGrid,
    FD_STEP_1,
};
use btz_geometry::scenario::load_scenario;

/// Criteria whose reference value cannot be reproduced; see the README.
const KNOWN_FAILURES: &[u32] = &[3];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(format!("{name}.toml"))
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn kerr_points(rng: &mut ChaCha8Rng, r_plus: f64, n: usize) -> Vec<KerrPoint> {
    (0..n)
        .map(|_| {
            KerrPoint::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-PI..PI),
                rng.gen_range(r_plus + 0.1..10.0),
            )
        })
        .collect()
}

fn closed_form_agreement() -> Outcome {
    let cases = [
        NormalCase::Elliptic { lambda: 0.8 },
        NormalCase::HyperbolicTranslation { lambda: 1.3 },
        NormalCase::ParabolicTranslation,
        NormalCase::ParabolicOpposite,
        NormalCase::ParabolicSame,
        NormalCase::HypHyp {
            lambda: 0.7,
            mu: 1.9,
        },
        NormalCase::HypPar { lambda: 1.1 },
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut lines = Vec::new();
    let mut ok = true;
    for nc in cases {
        let (xl, xr) = nc.generators();
        let (mut tested, mut disagree, mut positive) = (0, 0, 0);
        while tested < 10_000 {
            let g = ads_matrix(random_cyl(&mut rng).to_vec22()).map_err(|e| e.to_string())?;
            let norm = killing_norm(xl, xr, g);
            positive += (norm > 0.0) as usize;
            if nc.slack(g).abs() <= 1e-6 {
                continue;
            }
            tested += 1;
            disagree += ((norm > 0.0) != in_d_closed_form(&nc, g)) as usize;
        }
        let empty_case = matches!(
            nc,
            NormalCase::ParabolicTranslation | NormalCase::ParabolicOpposite
        );
        ok &= disagree == 0 && (!empty_case || positive == 0);
        lines.push(format!("case {} disagreements {disagree}", nc.case_id()));
        if empty_case {
            lines.push(format!("case {} positive norms {positive}", nc.case_id()));
        }
    }
    check(ok, lines.join(", "))
}

fn kerr_metric_verification() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for (rp, rm) in [(1.0, 0.0), (2.0, 1.0), (1.0, 1.0)] {
        let params = BTZParams::new(rp, rm).map_err(|e| e.to_string())?;
        for p in kerr_points(&mut rng, rp, 100) {
            let fd = pullback_check(&params, p, FD_STEP_1).map_err(|e| e.to_string())?;
            let exact = kerr_metric(&params, p.r).map_err(|e| e.to_string())?;
            worst = worst.max(metric_max_abs_diff(&fd, &exact));
        }
    }
    check(
        worst < 1e-6,
        format!("max component error {worst:.2e} (< 1e-6)"),
    )
}

fn curvature_identities() -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for (rp, rm) in [(2.0, 1.0), (1.0, 1.0)] {
        let params = BTZParams::new(rp, rm).map_err(|e| e.to_string())?;
        let grid = SurfaceGrid {
            eta: (0.1, 2.0),
            varphi: (-PI, PI),
            n_eta: 50,
            n_varphi: 50,
        };
        let r = surface_geometry(&params, 0.0, &grid).map_err(|e| e.to_string())?;
        let mean_ok = r.max_abs_mean < 1e-5;
        let gauss_ok = r.max_rel_gauss_error < 1e-4;
        ok &= mean_ok && gauss_ok;
        detail.push(format!(
            "({rp},{rm}): max |H| {:.2e} {}, max rel Gauss error {:.3} {}",
            r.max_abs_mean,
            if mean_ok { "ok" } else { "bad" },
            r.max_rel_gauss_error,
            if gauss_ok { "ok" } else { "bad" }
        ));
    }
    check(ok, detail.join("; "))
}

fn geodesic_length() -> Outcome {
    let params = BTZParams::new(1.0, 1.0).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let r = rng.gen_range(1.05..5.0);
        let rp = rng.gen_range(r + 0.01..10.0);
        let l = radial_geodesic_length(&params, r, rp).map_err(|e| e.to_string())?;
        let closed = 0.5 * ((rp * rp - 1.0) / (r * r - 1.0)).ln();
        worst = worst.max((l.numeric - closed).abs());
    }
    check(
        worst < 1e-8,
        format!("max |numeric - closed| {worst:.2e} (< 1e-8)"),
    )
}

fn holonomy_action() -> Outcome {
    let params = BTZParams::new(2.0, 1.0).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst, mut dt) = (0.0f64, 0.0f64);
    for p in kerr_points(&mut rng, 2.0, 100) {
        let h = holonomy_translation_check(&params, p).map_err(|e| e.to_string())?;
        worst = worst.max(h.residual);
        dt = dt.max(h.dt.abs());
    }
    check(
        worst < 1e-9,
        format!("max residual {worst:.2e}, max |dt| {dt:.2e} (< 1e-9)"),
    )
}

// The four open regions and the two horizons between them.
const REGION_LABELS: [&str; 6] = [
    "end1",
    "end2",
    "future_core",
    "past_core",
    "future_horizon",
    "past_horizon",
];

fn splitting_anatomy() -> Outcome {
    let s = load_scenario(&fixture("splitting")).map_err(|e| e.to_string())?;
    let s = s.into_scenario().map_err(|e| e.to_string())?;
    let cloud = sample_domain(&s, 100_000, s.sampling.seed).map_err(|e| e.to_string())?;
    let unlabelled = cloud
        .rows
        .iter()
        .filter(|r| !REGION_LABELS.contains(&r.label.as_str()))
        .count();
    let (mut compared, mut agree) = (0usize, 0usize);
    for r in &cloud.rows {
        if visibility_slack(&s, r.cyl).abs() < 1e-3 {
            continue;
        }
        let core = split_region_classify(&s.spec, r.v, HORIZON_TOL).map_err(|e| e.to_string())?;
        let bh = black_hole_membership(&s, r.v).map_err(|e| e.to_string())?;
        compared += 1;
        agree += (bh == (core.label() == "future_core")) as usize;
    }
    let frac = agree as f64 / compared as f64;
    check(
        cloud.len() == 100_000 && unlabelled == 0 && frac >= 0.999,
        format!(
            "{} samples, {unlabelled} unlabelled, black hole = future core on {agree}/{compared} ({:.4}%)",
            cloud.len(),
            100.0 * frac
        ),
    )
}

fn horizon_bisection() -> Outcome {
    let s = load_scenario(&fixture("splitting")).map_err(|e| e.to_string())?;
    let s = s.into_scenario().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut rays, mut worst) = (0, 0.0f64);
    while rays < 100 {
        let v = random_cyl(&mut rng).to_vec22();
        let Some(l) = lift_to_domain(&s.spec, v) else {
            continue;
        };
        if visibility_slack(&s, l) <= 1e-3 {
            continue;
        }
        let h = horizon_locate(&s, v, [PI, 0.0, 0.0], 1e-10).map_err(|e| e.to_string())?;
        let [_, y, z] = normalized_affine(&s.spec, h.point).ok_or("horizon point left E")?;
        worst = worst.max((z - y.abs()).abs());
        rays += 1;
    }
    check(
        worst < 1e-5,
        format!("{rays} rays, max |z - |y|| {worst:.2e} (< 1e-5)"),
    )
}

fn xn_matrix_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let (al, bl, ar, br): (f64, f64, f64, f64) = (
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let a: f64 = rng.gen_range(0.3..2.0);
        let g = Mat2::new(a, rng.gen_range(-2.0..2.0), 0.0, 1.0 / a);
        let (lambda, mu) = (rng.gen_range(0.1..1.0), rng.gen_range(0.1..1.0));
        for n in -5..=5 {
            let x = xn_matrix(
                Mat2::new(al, bl, bl, -al),
                Mat2::new(ar, br, br, -ar),
                g,
                lambda,
                mu,
                n,
            );
            let y = xn_closed_form((al, bl), (ar, br), g, lambda, mu, n);
            worst = worst.max(x.max_abs_diff(y) / y.max_abs());
        }
    }
    let (al, bl, ar, br) = (0.3, 0.4, -0.2, 0.7);
    let g = Mat2::new(1.5, 0.8, 0.0, 1.0 / 1.5);
    let (lambda, mu) = (1.0, 0.5);
    let x = xn_matrix(
        Mat2::new(al, bl, bl, -al),
        Mat2::new(ar, br, br, -ar),
        g,
        lambda,
        mu,
        20,
    );
    let lead = -x.det() * (-2.0 * 20.0 * (lambda - mu)).exp();
    let expected = -g.d * g.d * bl * br;
    let rel = ((lead - expected) / expected).abs();
    check(
        worst < 1e-9 && rel < 1e-3,
        format!("max entrywise rel error {worst:.2e} (< 1e-9), leading coefficient rel error {rel:.2e} (< 1e-3)"),
    )
}

fn flat_coincidence() -> Outcome {
    let s = load_scenario(&fixture("schottky_flat")).map_err(|e| e.to_string())?;
    let r = coincidence_probe(&s.group, 10_000, 6, 4, 1e-6, 0).map_err(|e| e.to_string())?;
    check(
        r.d_only == 0,
        format!(
            "{} samples, {} in D, D-only fraction {}",
            r.samples, r.d_members, r.d_only_fraction
        ),
    )
}

fn limit_set_achronality() -> Outcome {
    let s = load_scenario(&fixture("schottky")).map_err(|e| e.to_string())?;
    let ls = limit_set(&s.group, 8, DEDUP_EPS).map_err(|e| e.to_string())?;
    let a = achronality_check(&ls.ein_points(), false);
    let c = load_scenario(&fixture("cyclic")).map_err(|e| e.to_string())?;
    let cl = limit_set(&c.group, 4, DEDUP_EPS).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for target in [
        Vec22::new(0.0, 1.0, 0.0, 1.0),
        Vec22::new(0.0, 1.0, 0.0, -1.0),
    ] {
        let d = cl
            .points
            .iter()
            .map(|p| projective_distance(p.vector, target))
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(d);
    }
    // Chordal distance 2 sin(θ/2) ≥ θ·(1 − θ²/24), so this bounds the angle.
    check(
        a.achronal && cl.points.len() == 2 && worst < 1e-10,
        format!(
            "{} limit points, achronal {}; cyclic: {} points, max angle error {worst:.1e}",
            ls.points.len(),
            a.achronal,
            cl.points.len()
        ),
    )
}

fn extreme_degeneracies() -> Outcome {
    let s = load_scenario(&fixture("extreme")).map_err(|e| e.to_string())?;
    let (mut plus, mut minus) = (0, 0);
    for c in sample_ads_points(20_000, s.sampling.seed) {
        let v = c.to_vec22();
        plus += core_membership(&s.spec, v, true) as usize;
        minus += core_membership(&s.spec, v, false) as usize;
    }
    let params = BTZParams::new(1.0, 1.0).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let k = extreme_lightlike_killing(&params, &kerr_points(&mut rng, 1.0, 100))
        .map_err(|e| e.to_string())?;
    check(
        plus == 0 && minus == 0 && k.max_norm < 1e-10,
        format!(
            "core members {plus}/{minus} of 20000, max |g(∂φ+∂t, ∂φ+∂t)| {:.2e}",
            k.max_norm
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let sc = |n: &str| fixture(n).to_string_lossy().into_owned();
    let runs: Vec<(&str, Vec<String>)> = vec![
        (
            "classify",
            vec!["classify".into(), "--scenario".into(), sc("schottky")],
        ),
        (
            "validate",
            vec!["validate".into(), "--scenario".into(), sc("cyclic")],
        ),
        (
            "domain",
            vec![
                "domain".into(),
                "--scenario".into(),
                sc("cyclic"),
                "--samples".into(),
                "500".into(),
                "--seed".into(),
                "3".into(),
            ],
        ),
        (
            "limit-set",
            vec![
                "limit-set".into(),
                "--scenario".into(),
                sc("schottky"),
                "--word-len".into(),
                "6".into(),
            ],
        ),
        (
            "kerr-verify",
            vec![
                "kerr-verify".into(),
                "--r-plus".into(),
                "2".into(),
                "--r-minus".into(),
                "1".into(),
                "--seed".into(),
                "3".into(),
            ],
        ),
        (
            "horizon",
            vec![
                "horizon".into(),
                "--scenario".into(),
                sc("splitting"),
                "--samples".into(),
                "20".into(),
                "--seed".into(),
                "3".into(),
            ],
        ),
        (
            "sample",
            vec![
                "sample".into(),
                "--scenario".into(),
                sc("cyclic"),
                "--samples".into(),
                "2000".into(),
                "--seed".into(),
                "3".into(),
            ],
        ),
        (
            "probe-egal",
            vec![
                "probe-egal".into(),
                "--scenario".into(),
                sc("cyclic"),
                "--samples".into(),
                "300".into(),
                "--word-len".into(),
                "3".into(),
                "--seed".into(),
                "3".into(),
            ],
        ),
    ];
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, args) in runs {
        let mut outputs = Vec::new();
        for k in 0..2 {
            let out = dir.path().join(format!("{name}-{k}.out"));
            let status = Command::new(env!("CARGO_BIN_EXE_btz"))
                .args(&args)
                .arg("--out")
                .arg(&out)
                .output()
                .map_err(|e| e.to_string())?;
            let code = status.status.code();
            let bytes = std::fs::read(&out).unwrap_or_default();
            outputs.push((code, bytes, status.stdout));
        }
        let same = outputs[0] == outputs[1] && !outputs[0].1.is_empty();
        ok &= same;
        lines.push(format!(
            "{name} {}",
            if same { "identical" } else { "DIFFERS" }
        ));
    }
    check(ok, lines.join(", "))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("closed-form domain agreement", closed_form_agreement),
        ("Kerr metric pullback", kerr_metric_verification),
        ("slice curvature identities", curvature_identities),
        ("extreme radial geodesic length", geodesic_length),
        ("holonomy shifts the Kerr chart", holonomy_action),
        ("splitting anatomy", splitting_anatomy),
        ("horizon bisection", horizon_bisection),
        ("X_n closed form", xn_matrix_check),
        ("flat-case coincidence", flat_coincidence),
        ("limit-set achronality", limit_set_achronality),
        ("extreme degeneracies", extreme_degeneracies),
        ("CLI determinism", determinism),
    ];
    let start = Instant::now();
    let (mut passed, mut unexpected) = (0, Vec::new());
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = i as u32 + 1;
        let t = Instant::now();
        let (tag, detail) = match f() {
            Ok(d) => {
                passed += 1;
                ("PASS", d)
            }
            Err(d) if KNOWN_FAILURES.contains(&id) => ("FAIL (known)", d),
            Err(d) => {
                unexpected.push(id);
                ("FAIL", d)
            }
        };
        println!(
            "criterion {id:>2} {tag:<12} {name} [{:.1}s]: {detail}",
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {passed}/12 passed, known failures {KNOWN_FAILURES:?}, unexpected failures {unexpected:?}, {:.1}s",
        start.elapsed().as_secs_f64()
    );
    if !unexpected.is_empty() {
        std::process::exit(1);
    }
}
