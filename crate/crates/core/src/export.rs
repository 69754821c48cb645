//! Static mesh export of bent surfaces in the affine chart `x0 = 1`.
//!
//! The surface is sampled by the bending map on a grid over the fundamental
//! quadrilateral, shrunk towards its centre to stay away from the ideal
//! vertices. Each leaf met by the segments from the base point to the samples
//! is exported as a polyline of bending-map images of points along the leaf.

use serde::{Deserialize, Serialize};

use crate::bending::BendingContext;
use crate::config::ComponentSpec;
use crate::error::{Error, Result};
use crate::fuchsian::FuchsianGroup;
use crate::geometry::{
    affine_chart, radial_project, Geometry, SpacelikeGeodesicH2, EPS_GEOM, V2, V4,
};

/// Name of the chart used by every export.
pub const CHART: &str = "affine x0=1";

/// Fraction of the way from the centre to the ideal vertices covered by the sample grid.
pub const DOMAIN_SHRINK: f64 = 0.9;

/// Range of the arc-length parameter of exported leaves around their closest point to the origin.
pub const LEAF_HALF_LENGTH: f64 = 3.0;

/// Descriptive data of an export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneMetadata {
    /// Geometry of the surface.
    pub geometry: Geometry,
    /// Parameter `t`; zero means half-pipe geometry at scale one.
    pub t: f64,
    /// Bending multicurve.
    pub multicurve: Vec<ComponentSpec>,
    /// Name of the chart.
    pub chart: String,
    /// Seed of the run.
    pub seed: u64,
    /// Number of grid points per side of the sample grid.
    pub grid_size: usize,
    /// Base point of the bending.
    pub base_point: [f64; 2],
}

/// Image of a leaf.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    /// Component of the multicurve.
    pub component: usize,
    /// Chart coordinates of the points.
    pub points: Vec<[f64; 3]>,
}

/// A sampled bent surface with its bending lines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneExport {
    /// Chart coordinates of the sampled surface points.
    pub vertices: Vec<[f64; 3]>,
    /// Disk points the vertices were computed from.
    pub disk_points: Vec<[f64; 2]>,
    /// Bending lines.
    pub polylines: Vec<Polyline>,
    /// Description.
    pub metadata: SceneMetadata,
}

impl SceneExport {
    /// Largest positive value of the quadratic form at `(1, v)` over all
    /// exported points; zero when every point lies in the model region.
    pub fn chart_violation(&self) -> f64 {
        let tag = self.metadata.geometry;
        self.vertices
            .iter()
            .chain(self.polylines.iter().flat_map(|p| p.points.iter()))
            .map(|v| tag.form(&V4::new(1.0, v[0], v[1], v[2])).max(0.0))
            .fold(0.0, f64::max)
    }
}

/// Grid of `n x n` points over the fundamental quadrilateral in the Klein disk.
///
/// The quadrilateral with ideal vertices `v0, ..., v3` is a Euclidean
/// quadrilateral of the Klein disk; the grid is the bilinear patch through
/// its vertices, each pulled towards the centre by [`DOMAIN_SHRINK`].
pub fn fundamental_domain_grid(gp: &FuchsianGroup, n: usize) -> Vec<V2> {
    let d = gp.domain();
    let c = radial_project(&d.center);
    let v: Vec<V2> = d
        .vertices
        .iter()
        .map(|p| c + (radial_project(p) - c) * DOMAIN_SHRINK)
        .collect();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let (u, w) = ((i as f64 + 0.5) / n as f64, (j as f64 + 0.5) / n as f64);
            out.push(
                v[0] * ((1.0 - u) * (1.0 - w))
                    + v[1] * (u * (1.0 - w))
                    + v[2] * (u * w)
                    + v[3] * ((1.0 - u) * w),
            );
        }
    }
    out
}

fn chart_point(p: &V4) -> [f64; 3] {
    let c = affine_chart(p);
    [c[0], c[1], c[2]]
}

/// Samples the bent surface at parameter `t` over an `n x n` grid.
///
/// `t > 0` gives hyperbolic and `t < 0` anti-de Sitter geometry with scale
/// `|t|`; `t = 0` gives the half-pipe surface at scale one. Grid points
/// closer than `1e-6` to a leaf are skipped.
pub fn export_surface(ctx: &BendingContext, t: f64, n: usize, seed: u64) -> Result<SceneExport> {
    if n == 0 {
        return Err(Error::Config("grid size must be positive".into()));
    }
    let tag = Geometry::for_parameter(t);
    let ctx = ctx.with(tag, if tag == Geometry::HP { 1.0 } else { t.abs() });
    let mut vertices = Vec::new();
    let mut disk_points = Vec::new();
    let mut leaves: Vec<(usize, SpacelikeGeodesicH2)> = Vec::new();
    for z in fundamental_domain_grid(ctx.group(), n) {
        if ctx.leaves().distance_to_leaves(&z)? < 1e-6 {
            continue;
        }
        for c in ctx.leaves().crossings(ctx.base_point(), &z)? {
            if !leaves.iter().any(|(_, l)| l.same_set(&c.leaf, 1e-9)) {
                leaves.push((c.component, c.leaf));
            }
        }
        vertices.push(chart_point(&ctx.bending_map(&z)?.normalized(tag)));
        disk_points.push([z[0], z[1]]);
    }
    let mut polylines = Vec::with_capacity(leaves.len());
    let steps = 4 * n.max(8);
    for (component, leaf) in &leaves {
        let f = leaf.frame();
        let (p, u) = (f.column(0).into_owned(), f.column(1).into_owned());
        let mut points = Vec::with_capacity(steps + 1);
        for k in 0..=steps {
            let s = LEAF_HALF_LENGTH * (2.0 * k as f64 / steps as f64 - 1.0);
            let z = radial_project(&(p * s.cosh() + u * s.sinh()));
            points.push(chart_point(&ctx.bending_map(&z)?.normalized(tag)));
        }
        polylines.push(Polyline {
            component: *component,
            points,
        });
    }
    let multicurve = ctx
        .multicurve()
        .components
        .iter()
        .map(|c| ComponentSpec {
            word: c.word.to_string(),
            weight: c.weight,
        })
        .collect();
    let scene = SceneExport {
        vertices,
        disk_points,
        polylines,
        metadata: SceneMetadata {
            geometry: tag,
            t,
            multicurve,
            chart: CHART.into(),
            seed,
            grid_size: n,
            base_point: [ctx.base_point()[0], ctx.base_point()[1]],
        },
    };
    let v = scene.chart_violation();
    if v > EPS_GEOM {
        return Err(Error::NotInSpace(tag));
    }
    Ok(scene)
}
