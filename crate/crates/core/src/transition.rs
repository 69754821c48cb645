//! Rescaled families `tau_t g_t tau_t^{-1}` and their limits as `t -> 0`.
//!
//! A family is sampled on a grid of nonzero parameters; positive parameters
//! use hyperbolic geometry and negative ones anti-de Sitter geometry, both
//! with scale `|t|`. Each side is extrapolated to `t = 0` separately by
//! polynomial (Neville) extrapolation in `|t|` through all grid points of that
//! side, and the two one-sided limits are compared. Distances between
//! matrices are entrywise maxima after projective normalization.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bending::BendingContext;
use crate::error::{Error, Result};
use crate::fuchsian::Word;
use crate::geometry::{affine_chart, Geometry, Plane, ProjectivePoint, M4, V2, V4};
use crate::isometry::{
    projective_distance, projective_normalize, reflection, rescale_conjugate, rotation,
};
use crate::SpacelikeGeodesicH2;

/// Default parameter grid `{±1e-1, ±1e-2, ±1e-3, ±1e-4}`.
pub const DEFAULT_GRID: [f64; 8] = [1e-1, 1e-2, 1e-3, 1e-4, -1e-1, -1e-2, -1e-3, -1e-4];

/// Minimum number of grid points on each side for extrapolation.
pub const MIN_POINTS_PER_SIDE: usize = 3;

/// Tolerance for the agreement of the two one-sided limits.
pub const EPS_LIMIT: f64 = 1e-6;

/// The default grid as a vector.
pub fn default_grid() -> Vec<f64> {
    DEFAULT_GRID.to_vec()
}

/// Samples of a rescaled family on a grid of nonzero parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionFamily {
    /// Label of the family, such as the word whose holonomy it samples.
    pub label: String,
    /// Parameters, positive side first, each side by decreasing `|t|`.
    pub grid: Vec<f64>,
    /// Rescaled matrices, aligned with `grid`.
    pub values: Vec<M4>,
}

impl TransitionFamily {
    /// Family from samples; rejects zero parameters and sorts the grid.
    pub fn new(label: impl Into<String>, grid: Vec<f64>, values: Vec<M4>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::Config(format!(
                "{} grid points but {} values",
                grid.len(),
                values.len()
            )));
        }
        if let Some(t) = grid.iter().find(|t| !(t.abs() > 0.0) || !t.is_finite()) {
            return Err(Error::Config(format!(
                "grid value {t} must be finite and nonzero"
            )));
        }
        let mut pairs: Vec<(f64, M4)> = grid.into_iter().zip(values).collect();
        pairs.sort_by(|a, b| {
            b.0.is_sign_positive()
                .cmp(&a.0.is_sign_positive())
                .then(b.0.abs().total_cmp(&a.0.abs()))
        });
        let (grid, values) = pairs.into_iter().unzip();
        Ok(Self {
            label: label.into(),
            grid,
            values,
        })
    }

    /// Family sampled from a function of `t`.
    pub fn from_fn<F: FnMut(f64) -> Result<M4>>(
        label: impl Into<String>,
        grid: &[f64],
        mut f: F,
    ) -> Result<Self> {
        let values = grid.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
        Self::new(label, grid.to_vec(), values)
    }

    /// Parameters `|t|` and samples of one side.
    pub fn side(&self, positive: bool) -> (Vec<f64>, Vec<M4>) {
        self.grid
            .iter()
            .zip(&self.values)
            .filter(|(t, _)| (**t > 0.0) == positive)
            .map(|(t, m)| (t.abs(), *m))
            .unzip()
    }
}

/// Extrapolated limit of one side of a family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideLimit {
    /// Projectively normalized limit.
    pub limit: M4,
    /// Empirical order of convergence; infinite when all residuals vanish.
    #[serde(serialize_with = "ser_order", deserialize_with = "de_order")]
    pub order: f64,
    /// Distance of each sample to the limit, by decreasing `|t|`.
    pub residuals: Vec<f64>,
}

/// Two-sided convergence diagnostics of a family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    /// Label of the family.
    pub word: String,
    /// Grid, aligned with `residuals`.
    pub grid: Vec<f64>,
    /// Distance of each sample to the limit of its side.
    pub residuals: Vec<f64>,
    /// Order on the hyperbolic side.
    #[serde(serialize_with = "ser_order", deserialize_with = "de_order")]
    pub order_pos: f64,
    /// Order on the anti-de Sitter side.
    #[serde(serialize_with = "ser_order", deserialize_with = "de_order")]
    pub order_neg: f64,
    /// Distance between the two one-sided limits.
    pub two_sided_gap: f64,
    /// Limit from the hyperbolic side.
    pub limit_pos: M4,
    /// Limit from the anti-de Sitter side.
    pub limit_neg: M4,
    /// Average of the two one-sided limits.
    pub limit: M4,
}

fn ser_order<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*v)
    }
}

fn de_order<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Order {
        Num(f64),
        Str(String),
    }
    match Order::deserialize(d)? {
        Order::Num(v) => Ok(v),
        Order::Str(s) if s == "inf" => Ok(f64::INFINITY),
        Order::Str(s) => Err(serde::de::Error::custom(format!("bad order {s:?}"))),
    }
}

/// Value at `0` of the interpolating polynomial through `(h_i, y_i)`, entrywise.
pub fn neville_at_zero(h: &[f64], y: &[M4]) -> M4 {
    let mut p: Vec<M4> = y.to_vec();
    let n = h.len();
    for k in 1..n {
        for i in 0..n - k {
            let (hi, hk) = (h[i], h[i + k]);
            p[i] = (p[i + 1] * hi - p[i] * hk) / (hi - hk);
        }
    }
    p[0]
}

/// Least-squares slope of `log r` against `log h` over the residuals above
/// the rounding floor; infinite when fewer than two residuals remain.
pub fn fit_order(h: &[f64], r: &[f64], floor: f64) -> f64 {
    let pts: Vec<(f64, f64)> = h
        .iter()
        .zip(r)
        .filter(|(_, r)| **r > floor)
        .map(|(h, r)| (h.ln(), r.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::INFINITY;
    }
    let n = pts.len() as f64;
    let (mx, my) = (
        pts.iter().map(|p| p.0).sum::<f64>() / n,
        pts.iter().map(|p| p.1).sum::<f64>() / n,
    );
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

fn extrapolate_side(h: &[f64], values: &[M4]) -> Result<SideLimit> {
    if h.len() < MIN_POINTS_PER_SIDE {
        return Err(Error::InsufficientGrid {
            needed: MIN_POINTS_PER_SIDE,
            got: h.len(),
        });
    }
    let normalized: Vec<M4> = values.iter().map(projective_normalize).collect();
    let limit = projective_normalize(&neville_at_zero(h, &normalized));
    let residuals: Vec<f64> = normalized.iter().map(|m| (m - limit).amax()).collect();
    let floor = 1e-14 * (1.0 + limit.amax());
    Ok(SideLimit {
        order: fit_order(h, &residuals, floor),
        limit,
        residuals,
    })
}

/// One-sided limits, orders and the two-sided gap of a family.
pub fn extrapolate_limit(f: &TransitionFamily) -> Result<ConvergenceReport> {
    let (hp, vp) = f.side(true);
    let (hn, vn) = f.side(false);
    let pos = extrapolate_side(&hp, &vp)?;
    let neg = extrapolate_side(&hn, &vn)?;
    let mut residuals = pos.residuals.clone();
    residuals.extend_from_slice(&neg.residuals);
    Ok(ConvergenceReport {
        word: f.label.clone(),
        grid: f.grid.clone(),
        residuals,
        order_pos: pos.order,
        order_neg: neg.order,
        two_sided_gap: (pos.limit - neg.limit).amax(),
        limit: (pos.limit + neg.limit) / 2.0,
        limit_pos: pos.limit,
        limit_neg: neg.limit,
    })
}

/// Rescaled bent holonomy of a word: at each `t`, the context with geometry
/// of the sign of `t` and scale `|t|`, conjugated by `tau_t`.
pub fn holonomy_family(
    ctx: &BendingContext,
    word: &Word,
    grid: &[f64],
) -> Result<TransitionFamily> {
    TransitionFamily::from_fn(word.to_string(), grid, |t| {
        Ok(rescale_conjugate(
            t,
            &ctx.with(Geometry::for_parameter(t), t.abs())
                .holonomy(word)?,
        ))
    })
}

/// Rescaled rotations of angle `a t` about a fixed axis; the limit is the
/// HP rotation of angle `a`.
pub fn rotation_family(
    axis: &SpacelikeGeodesicH2,
    a: f64,
    grid: &[f64],
) -> Result<TransitionFamily> {
    TransitionFamily::from_fn("rotation", grid, |t| {
        Ok(rescale_conjugate(
            t,
            &rotation(Geometry::for_parameter(t), axis, a * t),
        ))
    })
}

/// Chart residuals of the rescaled bending maps against the HP bending map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PleatedReport {
    /// Grid, positive side first.
    pub grid: Vec<f64>,
    /// Maximum over the samples of the chart distance at each grid value.
    pub max_residuals: Vec<f64>,
    /// Order fitted on the hyperbolic side.
    #[serde(serialize_with = "ser_order", deserialize_with = "de_order")]
    pub order_pos: f64,
    /// Order fitted on the anti-de Sitter side.
    #[serde(serialize_with = "ser_order", deserialize_with = "de_order")]
    pub order_neg: f64,
}

impl PleatedReport {
    /// Maximum residual at a grid value.
    pub fn residual_at(&self, t: f64) -> Option<f64> {
        self.grid
            .iter()
            .position(|s| *s == t)
            .map(|i| self.max_residuals[i])
    }
}

/// Distance in the affine chart `x0 = 1` between `tau_t b_t(x)` and the
/// HP bending map `b(x)`, maximized over the samples for every `t`.
///
/// The HP map uses the weights of the context at scale 1.
pub fn pleated_surface_convergence(
    ctx: &BendingContext,
    samples: &[V2],
    grid: &[f64],
) -> Result<PleatedReport> {
    let hp = ctx.with(Geometry::HP, 1.0);
    let targets = samples
        .iter()
        .map(|x| Ok(affine_chart(hp.bending_map(x)?.rep())))
        .collect::<Result<Vec<_>>>()?;
    let fam = TransitionFamily::new("pleated", grid.to_vec(), vec![M4::zeros(); grid.len()])?;
    let mut max_residuals = Vec::with_capacity(fam.grid.len());
    for &t in &fam.grid {
        let c = ctx.with(Geometry::for_parameter(t), t.abs());
        let mut worst: f64 = 0.0;
        for (x, target) in samples.iter().zip(&targets) {
            let mut r: V4 = *c.bending_map(x)?.rep();
            r[3] /= t.abs();
            worst = worst.max((affine_chart(&r) - target).amax());
        }
        max_residuals.push(worst);
    }
    let order = |positive: bool| {
        let (h, r): (Vec<f64>, Vec<f64>) = fam
            .grid
            .iter()
            .zip(&max_residuals)
            .filter(|(t, _)| (**t > 0.0) == positive)
            .map(|(t, r)| (t.abs(), *r))
            .unzip();
        fit_order(&h, &r, 1e-14)
    };
    Ok(PleatedReport {
        order_pos: order(true),
        order_neg: order(false),
        grid: fam.grid,
        max_residuals,
    })
}

/// Upper bound `arctan(sinh(norm / 2))` on the width of a convex hull in terms
/// of the norm of the bending data; `norm` must be nonnegative.
pub fn width_bound(norm: f64) -> f64 {
    (norm / 2.0).sinh().atan()
}

/// Linear bound `C |t|` on the width along a transition family.
pub fn width_linear_bound(t: f64, c: f64) -> f64 {
    c * t.abs()
}

/// Point at distance `d` along the geodesic from `x` with unit tangent `v`:
/// `[cosh(d) x + sinh(d) v]`, where `x` is the given representative.
pub fn ideal_geodesic_point(
    x: &ProjectivePoint,
    v: &V4,
    d: f64,
    tag: Geometry,
) -> Result<ProjectivePoint> {
    let xr = x.rep();
    let tol = 1e-9;
    let scale = 1.0 + xr.amax() * v.amax();
    if (tag.form(xr) + 1.0).abs() > tol * (1.0 + xr.norm_squared())
        || tag.pairing(xr, v).abs() > tol * scale
        || (tag.form(v) - 1.0).abs() > tol * (1.0 + v.norm_squared())
    {
        return Err(Error::BadTangent);
    }
    ProjectivePoint::new(xr * d.cosh() + v * d.sinh())
}

/// Convergence of rescaled reflections to an HP reflection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReflectionReport {
    /// Extrapolation of the rescaled reflections.
    pub convergence: ConvergenceReport,
    /// Distance of each sample to the HP reflection, aligned with the grid.
    pub residuals_to_target: Vec<f64>,
    /// Distance of the extrapolated limit to the HP reflection.
    pub limit_error: f64,
    /// The HP reflection along the limit plane.
    pub target: M4,
}

/// Compares `tau_t r_t tau_t^{-1}` for the reflections `r_t` along a plane
/// family with the HP reflection along the limit plane.
pub fn reflection_limit_check<F: FnMut(f64) -> Result<Plane>>(
    mut family: F,
    limit_plane: &Plane,
    grid: &[f64],
) -> Result<ReflectionReport> {
    let target = projective_normalize(reflection(Geometry::HP, limit_plane)?.matrix());
    let fam = TransitionFamily::from_fn("reflection", grid, |t| {
        Ok(rescale_conjugate(
            t,
            &reflection(Geometry::for_parameter(t), &family(t)?)?,
        ))
    })?;
    let convergence = extrapolate_limit(&fam)?;
    let residuals_to_target = fam
        .values
        .iter()
        .map(|m| projective_distance(m, &target))
        .collect();
    let limit_error = (convergence.limit_pos - target)
        .amax()
        .max((convergence.limit_neg - target).amax());
    Ok(ReflectionReport {
        convergence,
        residuals_to_target,
        limit_error,
        target,
    })
}
