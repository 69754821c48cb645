//! Lifted leaves of a multicurve and their crossings with geodesic segments.
//!
//! The primary method walks the tessellation of the disk by translates of the
//! fundamental quadrilateral along the segment and tests the lifts meeting
//! each visited tile. The lifts meeting the fundamental domain itself are
//! precomputed once per multicurve by walking one period of each component
//! axis. A brute-force enumeration over reduced words is provided as an
//! independent check.

use serde::{Deserialize, Serialize};

use super::{axis, FuchsianGroup, Letter, WeightedMulticurve, Word};
use crate::error::{Error, Result};
use crate::geometry::{
    affine_lift, hyperboloid_lift, minkowski, SpacelikeGeodesicH2, EPS_GEOM, M3, V2, V3,
};

/// Maximum number of tiles visited by one walk.
const WALK_BUDGET: usize = 100_000;

/// A lifted leaf met by a segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafCrossing {
    /// The leaf, oriented so that its normal points towards the end of the segment.
    pub leaf: SpacelikeGeodesicH2,
    /// Weight of the component.
    pub weight: f64,
    /// Affine parameter of the crossing along the chord, in `(0, 1)`.
    pub parameter: f64,
    /// Index of the component in the multicurve.
    pub component: usize,
    /// Element `g` with `leaf = g . axis(component word)` as sets.
    pub group_element: Word,
}

#[derive(Debug, Clone, PartialEq)]
struct LocalLeaf {
    normal: V3,
    conjugator: Word,
    component: usize,
}

/// A translate `g D` of the fundamental domain.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Tile {
    pub(crate) g: M3,
    pub(crate) ginv: M3,
    pub(crate) word: Word,
}

impl Tile {
    fn identity() -> Self {
        Self {
            g: M3::identity(),
            ginv: M3::identity(),
            word: Word::identity(),
        }
    }

    fn step(&self, gp: &FuchsianGroup, l: Letter) -> Self {
        Self {
            g: self.g * gp.letter_lorentz(l),
            ginv: gp.letter_lorentz(l.inverse()) * self.ginv,
            word: self.word.push(l),
        }
    }
}

/// Tiles met by the chord from `x` to `y`, starting from a tile containing `x`.
pub(crate) fn walk(gp: &FuchsianGroup, x: &V3, y: &V3, start: Tile) -> Result<Vec<Tile>> {
    let dom = gp.domain();
    let mut tiles = vec![start];
    let mut s_cur = 0.0;
    for _ in 0..WALK_BUDGET {
        let t = tiles.last().expect("walk starts from a tile");
        let (gx, gy) = (t.ginv * x, t.ginv * y);
        let mut exit: Option<(usize, f64)> = None;
        for k in 0..4 {
            let n = &dom.normals[k];
            let fy = minkowski(n, &gy);
            if fy <= 0.0 {
                continue;
            }
            let fx = minkowski(n, &gx);
            let s = fx / (fx - fy);
            if s >= s_cur - 1e-12 && exit.is_none_or(|(_, best)| s < best) {
                exit = Some((k, s));
            }
        }
        match exit {
            None => return Ok(tiles),
            Some((k, s)) => {
                s_cur = s;
                let next = t.step(gp, dom.neighbours[k]);
                tiles.push(next);
            }
        }
    }
    Err(Error::EnumerationBudgetExceeded(WALK_BUDGET))
}

/// Tile containing the hyperboloid or affine point `x`.
pub(crate) fn locate(gp: &FuchsianGroup, x: &V3) -> Result<Tile> {
    let c = gp.domain().center;
    let tiles = walk(gp, &c, x, Tile::identity())?;
    Ok(tiles.into_iter().last().expect("nonempty walk"))
}

/// Element `g` of the group with `z` in the tile `g D`, as a word and its Lorentz matrix.
pub fn locate_point(gp: &FuchsianGroup, z: &V2) -> Result<(Word, M3)> {
    let t = locate(gp, &affine_lift(z))?;
    Ok((t.word, t.g))
}

/// Lifts of a multicurve meeting the fundamental domain, ready for segment queries.
#[derive(Debug, Clone, PartialEq)]
pub struct LeafSet {
    group: FuchsianGroup,
    multicurve: WeightedMulticurve,
    axes: Vec<SpacelikeGeodesicH2>,
    local: Vec<LocalLeaf>,
}

impl LeafSet {
    /// Precomputes the lifts meeting the fundamental domain and checks that
    /// the components are hyperbolic, simple, disjoint and pairwise distinct.
    pub fn new(gp: &FuchsianGroup, mc: &WeightedMulticurve) -> Result<Self> {
        Self::build(gp, mc, true)
    }

    /// Same as [`LeafSet::new`] without the disjointness check, for unions
    /// of two multicurves whose components cross each other.
    pub fn new_crossing(gp: &FuchsianGroup, mc: &WeightedMulticurve) -> Result<Self> {
        Self::build(gp, mc, false)
    }

    fn build(gp: &FuchsianGroup, mc: &WeightedMulticurve, disjoint: bool) -> Result<Self> {
        let mut axes = Vec::with_capacity(mc.components.len());
        let mut local: Vec<LocalLeaf> = Vec::new();
        for (i, c) in mc.components.iter().enumerate() {
            let m = gp.eval_sl2(&c.word);
            let ax = axis(&m).map_err(|_| {
                Error::BadMulticurve(format!(
                    "component {} is not hyperbolic (trace {:.6})",
                    c.word,
                    m.trace()
                ))
            })?;
            let l = gp.eval_lorentz(&c.word);
            let p0 = ax.closest_point();
            let q0 = l * p0;
            let start = locate(gp, &p0)?;
            for t in walk(gp, &p0, &q0, start)? {
                let n = t.ginv * ax.normal();
                let n = n / minkowski(&n, &n).sqrt();
                if !local.iter().any(|h| same_unoriented(&h.normal, &n)) {
                    local.push(LocalLeaf {
                        normal: n,
                        conjugator: t.word.inverse(),
                        component: i,
                    });
                } else if let Some(h) = local.iter().find(|h| same_unoriented(&h.normal, &n)) {
                    if h.component != i {
                        return Err(Error::BadMulticurve(format!(
                            "components {} and {} are conjugate",
                            mc.components[h.component].word, c.word
                        )));
                    }
                }
            }
            axes.push(ax);
        }
        for (i, h) in local.iter().enumerate() {
            for k in local.iter().skip(i + 1) {
                if disjoint && minkowski(&h.normal, &k.normal).abs() < 1.0 - 1e-12 {
                    return Err(Error::BadMulticurve(format!(
                        "lifts of {} and {} intersect",
                        mc.components[h.component].word, mc.components[k.component].word
                    )));
                }
            }
        }
        Ok(Self {
            group: gp.clone(),
            multicurve: mc.clone(),
            axes,
            local,
        })
    }

    /// The group.
    pub fn group(&self) -> &FuchsianGroup {
        &self.group
    }

    /// The multicurve.
    pub fn multicurve(&self) -> &WeightedMulticurve {
        &self.multicurve
    }

    /// Oriented axes of the component words.
    pub fn axes(&self) -> &[SpacelikeGeodesicH2] {
        &self.axes
    }

    /// Number of lifts meeting the fundamental domain.
    pub fn local_count(&self) -> usize {
        self.local.len()
    }

    /// Ordered crossings of the open chord from `x` to `y`.
    pub fn crossings(&self, x: &V2, y: &V2) -> Result<Vec<LeafCrossing>> {
        self.crossings_impl(x, y, false)
    }

    /// Crossings of the chord from `x` to `y` when `y` may lie on a leaf;
    /// such a leaf is not counted, so the result is the limit from the side of `x`.
    pub fn crossings_to_closed_end(&self, x: &V2, y: &V2) -> Result<Vec<LeafCrossing>> {
        self.crossings_impl(x, y, true)
    }

    fn crossings_impl(&self, x: &V2, y: &V2, closed_end: bool) -> Result<Vec<LeafCrossing>> {
        let (xa, ya) = (affine_lift(x), affine_lift(y));
        let (xh, yh) = (hyperboloid_lift(x), hyperboloid_lift(y));
        let start = locate(&self.group, &xa)?;
        let tiles = walk(&self.group, &xa, &ya, start)?;
        let mut out: Vec<LeafCrossing> = Vec::new();
        let mut seen: Vec<V3> = Vec::new();
        for t in &tiles {
            for h in &self.local {
                let n = t.g * h.normal;
                let (dx, dy) = (minkowski(&n, &xh), minkowski(&n, &yh));
                if dx.abs() < EPS_GEOM || (dy.abs() < EPS_GEOM && !closed_end) {
                    return Err(Error::EndpointOnLeaf(dx.abs().min(dy.abs())));
                }
                if dx * dy > 0.0
                    || dy.abs() < EPS_GEOM
                    || seen.iter().any(|m| same_unoriented(m, &n))
                {
                    continue;
                }
                seen.push(n);
                let (fx, fy) = (minkowski(&n, &xa), minkowski(&n, &ya));
                let eta = if dy > 0.0 { n } else { -n };
                out.push(LeafCrossing {
                    leaf: SpacelikeGeodesicH2::from_unit_normal(eta),
                    weight: self.multicurve.components[h.component].weight,
                    parameter: fx / (fx - fy),
                    component: h.component,
                    group_element: t.word.concat(&h.conjugator),
                });
            }
        }
        out.sort_by(|a, b| a.parameter.total_cmp(&b.parameter));
        Ok(out)
    }

    /// Distance from a disk point to the nearest lift meeting the tile that
    /// contains it or one of the four adjacent tiles.
    ///
    /// This bounds the distance to the lifted multicurve from above and equals
    /// it whenever the nearest lift meets one of those tiles.
    pub fn distance_to_leaves(&self, z: &V2) -> Result<f64> {
        let t = locate(&self.group, &affine_lift(z))?;
        let zh = hyperboloid_lift(z);
        let mut best = f64::INFINITY;
        let mut tiles = vec![t.clone()];
        for l in Letter::ALL {
            tiles.push(t.step(&self.group, l));
        }
        for tile in &tiles {
            for h in &self.local {
                let n = tile.g * h.normal;
                best = best.min(minkowski(&n, &zh).abs().asinh());
            }
        }
        Ok(best)
    }
}

fn same_unoriented(a: &V3, b: &V3) -> bool {
    let tol = 1e-9 * (1.0 + a.amax());
    (a - b).amax() < tol || (a + b).amax() < tol
}

/// Ordered crossings of the chord from `x` to `y` with the lifts of a multicurve.
pub fn leaves_crossing(
    gp: &FuchsianGroup,
    mc: &WeightedMulticurve,
    x: &V2,
    y: &V2,
) -> Result<Vec<LeafCrossing>> {
    LeafSet::new(gp, mc)?.crossings(x, y)
}

/// Crossings found by enumerating reduced words up to `max_len` letters.
///
/// A translate `g . axis` is kept when its distance to the chord midpoint is
/// at most half the chord length plus one. Enumeration stops once two
/// consecutive word-length shells contribute no new translate within that
/// bound, and fails if `max_len` is reached first.
pub fn leaves_crossing_enumerated(
    gp: &FuchsianGroup,
    mc: &WeightedMulticurve,
    x: &V2,
    y: &V2,
    max_len: usize,
) -> Result<Vec<LeafCrossing>> {
    let (xh, yh) = (hyperboloid_lift(x), hyperboloid_lift(y));
    let (xa, ya) = (affine_lift(x), affine_lift(y));
    let mid = xh + yh;
    let mid = mid / (-minkowski(&mid, &mid)).sqrt();
    let bound = super::hyperbolic_distance(&xh, &yh) / 2.0 + 1.0;
    let axes = mc
        .components
        .iter()
        .map(|c| axis(&gp.eval_sl2(&c.word)))
        .collect::<Result<Vec<_>>>()?;
    let mut near: Vec<V3> = Vec::new();
    let mut out = Vec::new();
    let mut quiet = 0;
    for len in 0..=max_len {
        let mut added = false;
        for w in Word::all_of_length(len) {
            let g = gp.eval_lorentz(&w);
            for (i, ax) in axes.iter().enumerate() {
                let n = g * ax.normal();
                if minkowski(&n, &mid).abs().asinh() > bound
                    || near.iter().any(|m| same_unoriented(m, &n))
                {
                    continue;
                }
                near.push(n);
                added = true;
                let (dx, dy) = (minkowski(&n, &xh), minkowski(&n, &yh));
                if dx.abs() < EPS_GEOM || dy.abs() < EPS_GEOM {
                    return Err(Error::EndpointOnLeaf(dx.abs().min(dy.abs())));
                }
                if dx * dy < 0.0 {
                    let (fx, fy) = (minkowski(&n, &xa), minkowski(&n, &ya));
                    out.push(LeafCrossing {
                        leaf: SpacelikeGeodesicH2::from_unit_normal(if dy > 0.0 { n } else { -n }),
                        weight: mc.components[i].weight,
                        parameter: fx / (fx - fy),
                        component: i,
                        group_element: w.clone(),
                    });
                }
            }
        }
        quiet = if added { 0 } else { quiet + 1 };
        if quiet >= 2 {
            out.sort_by(|a: &LeafCrossing, b| a.parameter.total_cmp(&b.parameter));
            return Ok(out);
        }
    }
    Err(Error::EnumerationBudgetExceeded(max_len))
}
