//! The four subcommands.

use std::path::PathBuf;

use clap::Args;
use halfpipe::bending::{default_base_point, BendingContext, Sign};
use halfpipe::config::Config;
use halfpipe::doubling::{
    cone_angle_table, cusp_face_point, cusp_stabilizer_check, double_holonomy, ConvexCorePair,
    FacePoint,
};
use halfpipe::export::{export_surface, DOMAIN_SHRINK};
use halfpipe::fuchsian::{
    chart_from_teich, kerckhoff_point, teich_from_chart, FuchsianGroup, KerckhoffOptions,
    WeightedMulticurve, Word,
};
use halfpipe::geometry::{radial_project, V2};
use halfpipe::isometry::{projective_distance, projective_normalize};
use halfpipe::transition::{
    extrapolate_limit, holonomy_family, pleated_surface_convergence, EPS_LIMIT,
};
use halfpipe::Geometry;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::output::Output;

/// Default tolerance of the cone-angle table.
pub const CONE_ANGLE_TOL: f64 = 1e-9;

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Configuration file (JSON).
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Comma-separated parameter grid, overriding the configuration.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub grid: Option<Vec<f64>>,
    /// Seed of the random generator.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance of the pass/fail threshold of the subcommand.
    #[arg(long)]
    pub tol: Option<f64>,
}

struct Setup {
    config: Config,
    group: FuchsianGroup,
    lambda: WeightedMulticurve,
    grid: Vec<f64>,
    out: Output,
}

impl Setup {
    fn load(args: &CommonArgs) -> CliResult<Self> {
        let config = Config::from_path(&args.config)?;
        let grid = args.grid.clone().unwrap_or_else(|| config.grid());
        if let Some(t) = grid.iter().find(|t| !t.is_finite()) {
            return Err(CliError::Config(format!("grid value {t} is not finite")));
        }
        if let Some(tol) = args.tol {
            if !(tol > 0.0) {
                return Err(CliError::Config(format!(
                    "tolerance {tol} must be positive"
                )));
            }
        }
        let group = config.group()?;
        let lambda = config.lambda()?;
        let out = Output::new(&args.out)?;
        Ok(Self {
            config,
            group,
            lambda,
            grid,
            out,
        })
    }

    fn context(
        &self,
        mc: &WeightedMulticurve,
        sign: Sign,
        tag: Geometry,
        scale: f64,
    ) -> CliResult<BendingContext> {
        Ok(BendingContext::new(
            &self.group,
            mc,
            default_base_point(&self.group),
            sign,
            tag,
            scale,
        )?)
    }
}

fn order_value(v: f64) -> Value {
    if v.is_infinite() {
        json!("inf")
    } else {
        json!(v)
    }
}

fn rows(m: &halfpipe::geometry::M4) -> Value {
    json!((0..4)
        .map(|i| (0..4).map(|j| m[(i, j)]).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

/// Random points of the shrunk fundamental quadrilateral, away from the leaves.
fn random_samples(ctx: &BendingContext, n: usize, rng: &mut ChaCha8Rng) -> CliResult<Vec<V2>> {
    let d = ctx.group().domain();
    let c = radial_project(&d.center);
    let v: Vec<V2> = d
        .vertices
        .iter()
        .map(|p| c + (radial_project(p) - c) * DOMAIN_SHRINK)
        .collect();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let (u, w): (f64, f64) = (rng.random(), rng.random());
        let z = v[0] * ((1.0 - u) * (1.0 - w))
            + v[1] * (u * (1.0 - w))
            + v[2] * (u * w)
            + v[3] * ((1.0 - u) * w);
        if ctx.leaves().distance_to_leaves(&z)? > 1e-6 {
            out.push(z);
        }
    }
    Ok(out)
}

/// Rescaled holonomy families of the configured words and pleated-surface convergence.
pub fn transition(args: &CommonArgs) -> CliResult<()> {
    let s = Setup::load(args)?;
    let tol = args.tol.unwrap_or(EPS_LIMIT);
    let ctx = s.context(&s.lambda, Sign::Positive, Geometry::HP, 1.0)?;
    let mut summaries = Vec::new();
    let mut passed = true;
    for (i, w) in s.config.words()?.iter().enumerate() {
        let rep = extrapolate_limit(&holonomy_family(&ctx, w, &s.grid)?)?;
        let direct = projective_normalize(ctx.holonomy(w)?.matrix());
        let hp_distance = projective_distance(&rep.limit, &direct);
        let ok = rep.two_sided_gap < tol;
        passed &= ok;
        let file = format!("transition_{i:03}.json");
        s.out.json(
            &file,
            "convergence_report",
            &json!({
                "schema": "convergence_report/v1",
                "word": w.to_string(),
                "grid": rep.grid,
                "residuals": rep.residuals,
                "order_pos": order_value(rep.order_pos),
                "order_neg": order_value(rep.order_neg),
                "two_sided_gap": rep.two_sided_gap,
                "hp_distance": hp_distance,
                "limit": rows(&rep.limit),
                "seed": args.seed,
            }),
        )?;
        summaries.push(json!({
            "file": file, "word": w.to_string(), "two_sided_gap": rep.two_sided_gap,
            "hp_distance": hp_distance, "passed": ok,
        }));
    }
    let pleated = if s.config.samples.is_some() {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let samples = random_samples(&ctx, s.config.samples(), &mut rng)?;
        let rep = pleated_surface_convergence(&ctx, &samples, &s.grid)?;
        s.out.json(
            "pleated.json",
            "pleated_report",
            &json!({
                "schema": "pleated_report/v1",
                "seed": args.seed,
                "samples": samples.len(),
                "grid": rep.grid,
                "max_residuals": rep.max_residuals,
                "order_pos": order_value(rep.order_pos),
                "order_neg": order_value(rep.order_neg),
            }),
        )?;
        json!("pleated.json")
    } else {
        Value::Null
    };
    s.out.json(
        "transition_summary.json",
        "transition_summary",
        &json!({
            "schema": "transition_summary/v1", "seed": args.seed, "grid": s.grid, "tol": tol,
            "reports": summaries, "pleated": pleated, "passed": passed,
        }),
    )?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Threshold(format!(
            "a two-sided gap exceeds {tol:e}"
        )))
    }
}

/// Minimum of the sum of the lengths of `lambda` and `mu`.
///
/// The search starts from the configured group, moved in the optimization
/// chart by a uniform offset in `[-0.2, 0.2]^2` drawn from the seed.
pub fn kerckhoff(args: &CommonArgs) -> CliResult<()> {
    let s = Setup::load(args)?;
    let mu = s
        .config
        .mu()?
        .ok_or_else(|| CliError::Config("field `multicurves.mu` is required".into()))?;
    let (p0, s0) = chart_from_teich(&s.group.teich_point())?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let init = teich_from_chart(
        p0 + rng.random_range(-0.2..0.2),
        s0 + rng.random_range(-0.2..0.2),
    );
    let mut options = KerckhoffOptions::default();
    if let Some(tol) = args.tol {
        options.gradient_tol = tol;
    }
    let r = kerckhoff_point(&s.lambda, &mu, &init, &options)?;
    s.out.json(
        "kerckhoff.json",
        "kerckhoff",
        &json!({
            "schema": "kerckhoff/v1",
            "seed": args.seed,
            "initial": init,
            "point": r.point,
            "chart": r.chart,
            "objective": r.objective,
            "gradient_norm": r.gradient_norm,
            "hessian_condition": r.hessian_condition,
            "simplex_iterations": r.simplex_iterations,
            "newton_iterations": r.newton_iterations,
            "plausibly_filling": r.filling.plausibly_filling,
        }),
    )
}

#[derive(Serialize)]
struct ConeRow {
    geometry: Geometry,
    component: usize,
    word: String,
    weight: f64,
    t: f64,
    angle: f64,
    expected: f64,
    error: f64,
}

/// Translates of the base point in pairwise distinct faces, with their conjugators.
fn face_translates(ctx: &BendingContext, n: usize) -> CliResult<Vec<(V2, Word)>> {
    let mut out = vec![(*ctx.base_point(), Word::identity())];
    for len in 1..=3 {
        for w in Word::all_of_length(len) {
            if out.len() > n {
                return Ok(out);
            }
            let z = ctx.translate_base_point(&w);
            let mut fresh = true;
            for (y, _) in &out {
                fresh &= !ctx.leaves().crossings(y, &z)?.is_empty();
            }
            if fresh {
                out.push((z, w));
            }
        }
    }
    Ok(out)
}

/// Cone-angle table and doubled holonomy checks.
///
/// The doubled holonomy uses the upper boundary at the first positive grid
/// value, with the base face and up to three neighbouring faces. When `mu`
/// is configured, the cusp stabilizer is checked on the pair of faces of
/// both boundaries adjacent to the cusp.
pub fn double(args: &CommonArgs) -> CliResult<()> {
    let s = Setup::load(args)?;
    let tol = args.tol.unwrap_or(CONE_ANGLE_TOL);
    let hp = s.context(&s.lambda, Sign::Positive, Geometry::HP, 1.0)?;
    let mut ts = s.grid.clone();
    if !ts.contains(&0.0) {
        ts.push(0.0);
    }
    let table = cone_angle_table(&hp, &ts)?;
    let rows: Vec<ConeRow> = table
        .iter()
        .map(|r| ConeRow {
            geometry: r.geometry,
            component: r.component,
            word: s.lambda.components[r.component].word.to_string(),
            weight: r.weight,
            t: r.t,
            angle: r.angle,
            expected: r.expected,
            error: (r.angle - r.expected).abs(),
        })
        .collect();
    let cone_ok = rows.iter().all(|r| r.error <= tol);
    s.out.csv("cone_angles.csv", "cone_angle_row", &rows)?;

    let t = s.grid.iter().copied().find(|t| *t > 0.0).unwrap_or(0.1);
    let tag = Geometry::Hyp;
    let upper = hp.with(tag, t);
    let translates = face_translates(&upper, 3)?;
    let faces: Vec<FacePoint> = translates
        .iter()
        .map(|(z, _)| FacePoint::upper(*z))
        .collect();
    let doubled = double_holonomy(&ConvexCorePair::upper_only(upper.clone()), &faces, 3)?;
    let mut max_relation: f64 = 0.0;
    let mut max_conjugation: f64 = 0.0;
    let generators = [Word::parse("A")?, Word::parse("B")?];
    for i in 0..faces.len() {
        for w in &doubled.stabilizers()[i] {
            max_relation = max_relation.max(doubled.relation_residual(i, w)?);
        }
        for w in &generators {
            max_conjugation = max_conjugation.max(doubled.conjugation_residual(i, w)?);
        }
    }
    let face_json: Vec<Value> = translates
        .iter()
        .zip(doubled.stabilizers())
        .map(|((z, w), st)| {
            json!({
                "point": [z[0], z[1]], "side": "upper", "conjugator": w.to_string(),
                "stabilizers": st.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();

    let cusp = match s.config.mu()? {
        Some(mu) => Some(cusp_json(&s, &mu, tag, t)?),
        None => None,
    };
    let cusp_ok = cusp.as_ref().is_none_or(|c| c["passed"] == json!(true));
    let passed = cone_ok && cusp_ok && max_relation < 1e-9 && max_conjugation < 1e-9;
    s.out.json(
        "double.json",
        "double_report",
        &json!({
            "schema": "double_report/v1",
            "seed": args.seed,
            "t": t,
            "geometry": tag,
            "faces": face_json,
            "max_relation_residual": max_relation,
            "max_conjugation_residual": max_conjugation,
            "cone_angles_passed": cone_ok,
            "cusp": cusp,
            "passed": passed,
        }),
    )?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Threshold(
            "a cone angle or doubled holonomy check failed".into(),
        ))
    }
}

fn cusp_json(s: &Setup, mu: &WeightedMulticurve, tag: Geometry, t: f64) -> CliResult<Value> {
    let up = s.context(&s.lambda, Sign::Positive, tag, t)?;
    let lo = s.context(mu, Sign::Negative, tag, t)?;
    let c = s.group.cusp_words()[0].clone();
    let x = cusp_face_point(&ConvexCorePair::new(up.clone(), lo.clone())?, &c)?;
    let up = BendingContext::from_leaves(up.leaves().clone(), x, Sign::Positive, tag, t)?;
    let lo = BendingContext::from_leaves(lo.leaves().clone(), x, Sign::Negative, tag, t)?;
    let pair = ConvexCorePair::new(up, lo)?;
    let doubled = double_holonomy(&pair, &[FacePoint::upper(x), FacePoint::lower(x)], 2)?;
    let r = cusp_stabilizer_check(&doubled, &c, 1)?;
    Ok(json!({
        "word": c.to_string(),
        "fit_residual": pair.fit_residual(),
        "commutator_residual": r.commutator_residual,
        "class": r.class,
        "ideal_residual": r.ideal_residual,
        "min_power_distance": r.min_power_distance,
        "passed": r.passed,
    }))
}

/// Surface exports at every grid value and at `t = 0`.
pub fn export(args: &CommonArgs) -> CliResult<()> {
    let s = Setup::load(args)?;
    let hp = s.context(&s.lambda, Sign::Positive, Geometry::HP, 1.0)?;
    let n = (s.config.samples() as f64).sqrt().ceil() as usize;
    let mut ts = s.grid.clone();
    if !ts.contains(&0.0) {
        ts.push(0.0);
    }
    for (k, t) in ts.iter().enumerate() {
        let scene = export_surface(&hp, *t, n, args.seed)?;
        let mut v = serde_json::to_value(&scene).expect("scenes serialize");
        v["schema"] = json!("scene_export/v1");
        s.out
            .json(&format!("surface_{k:03}.json"), "scene_export", &v)?;
    }
    Ok(())
}
