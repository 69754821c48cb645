//! Doubled holonomy of a convex-core structure, meridian cone angles and
//! cusp stabilizer checks.
//!
//! A convex-core structure is modelled by two bending contexts over the same
//! Fuchsian group: the upper boundary bent along one multicurve with positive
//! sign and the lower boundary bent along another with negative sign. The
//! lower boundary is moved by an aligner, a lift of the half-pipe translation
//! fitted by [`hp_aligner`]. Reflections across the support planes of chosen
//! faces extend the holonomy of the upper boundary by the generators
//! `e_i = r_i r_0`.

use serde::{Deserialize, Serialize};

use crate::bending::{hp_aligner, BendingContext, Sign};
use crate::error::{Error, Result};
use crate::fuchsian::{parabolic_fixed_point, LeafSet, Word};
use crate::geometry::{
    radial_project, Geometry, Plane, SpacelikeGeodesicH2, EPS_GEOM, M4, V2, V3, V4,
};
use crate::isometry::{
    classify_isometry, hp_translation, lift_hp_translation, projective_distance,
    projective_normalize, reflection, rescale_conjugate, rotation_angle, Isometry, IsometryClass,
    PARABOLIC_TOL,
};
use crate::transition::{extrapolate_limit, ConvergenceReport, TransitionFamily};

/// Tolerance of the commutation check between a face reflection and the
/// holonomy of the face stabilizer.
pub const COMMUTATION_TOL: f64 = 1e-9;

/// Tolerance of the cusp stabilizer checks.
pub const CUSP_TOL: f64 = 1e-8;

/// Largest exponent in the rank-two check of a cusp stabilizer.
pub const CUSP_POWER_RANGE: i32 = 4;

/// Boundary component carrying a face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FaceSide {
    /// The upper boundary, bent positively along the first multicurve.
    Upper,
    /// The lower boundary, bent negatively along the second multicurve.
    Lower,
}

/// A point of the disk naming the face of one boundary component that contains it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FacePoint {
    /// Point of the disk, off the leaves of its side.
    pub point: V2,
    /// Boundary component.
    pub side: FaceSide,
}

impl FacePoint {
    /// Face of the upper boundary containing `point`.
    pub fn upper(point: V2) -> Self {
        Self {
            point,
            side: FaceSide::Upper,
        }
    }

    /// Face of the lower boundary containing `point`.
    pub fn lower(point: V2) -> Self {
        Self {
            point,
            side: FaceSide::Lower,
        }
    }
}

/// Upper and lower bent boundaries of a convex-core structure over a fixed
/// Fuchsian group, with the aligner placing the lower one.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexCorePair {
    upper: BendingContext,
    lower: Option<BendingContext>,
    aligner: Isometry,
    v: V3,
    fit_residual: f64,
}

impl ConvexCorePair {
    /// Structure with only the upper boundary; the aligner is the identity.
    pub fn upper_only(upper: BendingContext) -> Self {
        let aligner = Isometry::identity(upper.geometry());
        Self {
            upper,
            lower: None,
            aligner,
            v: V3::zeros(),
            fit_residual: 0.0,
        }
    }

    /// Structure with both boundaries, which must share geometry, scale and group.
    ///
    /// The translation `v` is fitted between the half-pipe versions of the
    /// two contexts at scale one. In half-pipe geometry the aligner is
    /// `Is(Id, scale * v)`; otherwise it is the lift of `Is(Id, v)` at that scale.
    pub fn new(upper: BendingContext, lower: BendingContext) -> Result<Self> {
        if upper.geometry() != lower.geometry() {
            return Err(Error::TagMismatch(upper.geometry(), lower.geometry()));
        }
        if upper.scale() != lower.scale() {
            return Err(Error::Config(format!(
                "scales {} and {} differ",
                upper.scale(),
                lower.scale()
            )));
        }
        if upper.group() != lower.group() {
            return Err(Error::Config(
                "the two boundaries use different groups".into(),
            ));
        }
        if upper.sign() != Sign::Positive || lower.sign() != Sign::Negative {
            return Err(Error::Config(
                "the upper boundary must be bent positively and the lower negatively".into(),
            ));
        }
        let fit = hp_aligner(
            &upper.with(Geometry::HP, 1.0),
            &lower.with(Geometry::HP, 1.0),
        )?;
        let tag = upper.geometry();
        let aligner = match tag {
            Geometry::HP => hp_translation(&(fit.v * upper.scale())),
            _ => lift_hp_translation(&fit.v, tag, upper.scale()),
        };
        Ok(Self {
            upper,
            lower: Some(lower),
            aligner,
            v: fit.v,
            fit_residual: fit.residual,
        })
    }

    /// The upper context.
    pub fn upper(&self) -> &BendingContext {
        &self.upper
    }

    /// The lower context, if any.
    pub fn lower(&self) -> Option<&BendingContext> {
        self.lower.as_ref()
    }

    /// The aligner applied to the lower boundary.
    pub fn aligner(&self) -> &Isometry {
        &self.aligner
    }

    /// Fitted half-pipe translation.
    pub fn aligner_translation(&self) -> &V3 {
        &self.v
    }

    /// Residual of the aligner fit.
    pub fn fit_residual(&self) -> f64 {
        self.fit_residual
    }

    /// Geometry of both boundaries.
    pub fn geometry(&self) -> Geometry {
        self.upper.geometry()
    }

    /// Context of a side.
    pub fn context(&self, side: FaceSide) -> Result<&BendingContext> {
        match side {
            FaceSide::Upper => Ok(&self.upper),
            FaceSide::Lower => self
                .lower
                .as_ref()
                .ok_or_else(|| Error::Config("no lower boundary".into())),
        }
    }

    /// Support plane of a face.
    pub fn plane(&self, face: &FacePoint) -> Result<Plane> {
        let p = self.context(face.side)?.support_plane_at(&face.point)?;
        match face.side {
            FaceSide::Upper => Ok(p),
            FaceSide::Lower => self.aligner.apply_plane(&p),
        }
    }

    /// Holonomy of a side: `rho_+` on the upper boundary and `A rho_- A^{-1}` on the lower.
    ///
    /// The two agree on every word only when the aligner conjugates one
    /// cocycle exactly onto the other.
    pub fn side_holonomy(&self, side: FaceSide, w: &Word) -> Result<Isometry> {
        let g = self.context(side)?.holonomy(w)?;
        match side {
            FaceSide::Upper => Ok(g),
            FaceSide::Lower => self.aligner.compose(&g)?.compose(&self.aligner.inverse()),
        }
    }
}

/// Letters of the extended generating set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DoubledLetter {
    /// A word of the surface group.
    Surface(Word),
    /// The generator `e_i`.
    E(usize),
    /// The inverse of `e_i`.
    EInv(usize),
}

/// Holonomy of the doubled structure.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubledHolonomy {
    pair: ConvexCorePair,
    faces: Vec<FacePoint>,
    planes: Vec<Plane>,
    reflections: Vec<Isometry>,
    stabilizers: Vec<Vec<Word>>,
}

impl DoubledHolonomy {
    /// The convex-core structure.
    pub fn pair(&self) -> &ConvexCorePair {
        &self.pair
    }

    /// Face points, face 0 first.
    pub fn faces(&self) -> &[FacePoint] {
        &self.faces
    }

    /// Support planes of the faces.
    pub fn planes(&self) -> &[Plane] {
        &self.planes
    }

    /// Reflections across the support planes.
    pub fn reflections(&self) -> &[Isometry] {
        &self.reflections
    }

    /// Stabilizer words of each face that passed the commutation check.
    pub fn stabilizers(&self) -> &[Vec<Word>] {
        &self.stabilizers
    }

    /// Number of extra generators `e_1, ..., e_q`.
    pub fn extra_generators(&self) -> usize {
        self.faces.len() - 1
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.faces.len() {
            return Err(Error::Config(format!(
                "face index {i} out of range (have {})",
                self.faces.len()
            )));
        }
        Ok(())
    }

    /// `e_i = r_i r_0`.
    pub fn e(&self, i: usize) -> Result<Isometry> {
        self.check_index(i)?;
        self.reflections[i].compose(&self.reflections[0])
    }

    /// Holonomy of a surface word, given by the upper boundary.
    pub fn surface(&self, w: &Word) -> Result<Isometry> {
        self.pair.upper.holonomy(w)
    }

    /// Holonomy of a word in the extended generating set.
    pub fn eval(&self, word: &[DoubledLetter]) -> Result<Isometry> {
        let mut m = Isometry::identity(self.pair.geometry());
        for l in word {
            let g = match l {
                DoubledLetter::Surface(w) => self.surface(w)?,
                DoubledLetter::E(i) => self.e(*i)?,
                DoubledLetter::EInv(i) => self.e(*i)?.inverse(),
            };
            m = m.compose(&g)?;
        }
        Ok(m)
    }

    /// Relative distance between `e_i^{-1} g e_i` and the mirror image `r_0 g r_0`,
    /// where `g` is the holonomy of `gamma` on the side of face `i`.
    pub fn relation_residual(&self, i: usize, gamma: &Word) -> Result<f64> {
        self.check_index(i)?;
        let g = self.pair.side_holonomy(self.faces[i].side, gamma)?;
        let e = self.e(i)?;
        let lhs = e.inverse().compose(&g)?.compose(&e)?;
        let r0 = &self.reflections[0];
        let rhs = r0.compose(&g)?.compose(r0)?;
        Ok(relative_distance(lhs.matrix(), rhs.matrix()))
    }

    /// Relative distance between `g r_i g^{-1}` and the reflection across `g . P_i`,
    /// where `g` is the holonomy of `gamma` on the side of face `i`.
    pub fn conjugation_residual(&self, i: usize, gamma: &Word) -> Result<f64> {
        self.check_index(i)?;
        let g = self.pair.side_holonomy(self.faces[i].side, gamma)?;
        let lhs = g.compose(&self.reflections[i])?.compose(&g.inverse())?;
        let rhs = reflection(self.pair.geometry(), &g.apply_plane(&self.planes[i])?)?;
        Ok(relative_distance(lhs.matrix(), rhs.matrix()))
    }
}

/// Projective distance divided by `1 + ` the larger normalized entry, so
/// that products of long words are compared at their own rounding level.
pub fn relative_distance(a: &M4, b: &M4) -> f64 {
    let size = projective_normalize(a)
        .amax()
        .max(projective_normalize(b).amax());
    projective_distance(a, b) / (1.0 + size)
}

/// Relative distance between `a b` and `b a`.
pub fn commutator_residual(a: &Isometry, b: &Isometry) -> Result<f64> {
    Ok(relative_distance(
        a.compose(b)?.matrix(),
        b.compose(a)?.matrix(),
    ))
}

/// Nontrivial reduced words of length at most `max_len` whose translate of
/// the face point is reached without crossing a leaf of that side.
pub fn face_stabilizer_words(
    pair: &ConvexCorePair,
    face: &FacePoint,
    max_len: usize,
) -> Result<Vec<Word>> {
    let ctx = pair.context(face.side)?;
    let mut out = Vec::new();
    for len in 1..=max_len {
        for w in Word::all_of_length(len) {
            let gx = crate::bending::translate_point(&ctx.group().eval_lorentz(&w), &face.point);
            if ctx.leaves().crossings(&face.point, &gx)?.is_empty() {
                out.push(w);
            }
        }
    }
    Ok(out)
}

/// Extends the upper holonomy by reflections across the support planes of the faces.
///
/// Face points must be off the leaves of their side and no two of them on
/// the same side may lie in the same lifted face. Every stabilizer word of
/// length at most `stabilizer_len` of each face must commute with the face
/// reflection within [`COMMUTATION_TOL`].
pub fn double_holonomy(
    pair: &ConvexCorePair,
    faces: &[FacePoint],
    stabilizer_len: usize,
) -> Result<DoubledHolonomy> {
    if faces.is_empty() {
        return Err(Error::Config("at least one face point is required".into()));
    }
    for (i, f) in faces.iter().enumerate() {
        let ctx = pair.context(f.side)?;
        if f.point.norm() >= 1.0 || ctx.leaves().distance_to_leaves(&f.point)? < EPS_GEOM {
            return Err(Error::FacePointOnLeaf(i));
        }
    }
    for (i, f) in faces.iter().enumerate() {
        for (j, g) in faces.iter().enumerate().skip(i + 1) {
            if f.side == g.side
                && pair
                    .context(f.side)?
                    .leaves()
                    .crossings(&f.point, &g.point)?
                    .is_empty()
            {
                return Err(Error::Config(format!(
                    "face points {i} and {j} lie in the same face"
                )));
            }
        }
    }
    let tag = pair.geometry();
    let planes = faces
        .iter()
        .map(|f| pair.plane(f))
        .collect::<Result<Vec<_>>>()?;
    let reflections = planes
        .iter()
        .map(|p| reflection(tag, p))
        .collect::<Result<Vec<_>>>()?;
    let mut stabilizers = Vec::with_capacity(faces.len());
    for (f, r) in faces.iter().zip(&reflections) {
        let words = face_stabilizer_words(pair, f, stabilizer_len)?;
        for w in &words {
            let residual = commutator_residual(&pair.side_holonomy(f.side, w)?, r)?;
            if !(residual < COMMUTATION_TOL) {
                return Err(Error::CommutationFailure {
                    word: w.to_string(),
                    residual,
                });
            }
        }
        stabilizers.push(words);
    }
    Ok(DoubledHolonomy {
        pair: pair.clone(),
        faces: faces.to_vec(),
        planes,
        reflections,
        stabilizers,
    })
}

/// Point of the face adjacent to the cusp of `cusp_word` on every boundary.
///
/// Walks from the centre of the fundamental domain towards the parabolic
/// fixed point and returns the first point `x` off the leaves such that the
/// segment from `x` to `c . x` crosses no leaf of either boundary.
pub fn cusp_face_point(pair: &ConvexCorePair, cusp_word: &Word) -> Result<V2> {
    let gp = pair.upper.group();
    let q = parabolic_fixed_point(&gp.eval_sl2(cusp_word));
    let q = V2::new(q[1] / q[0], q[2] / q[0]);
    let c0 = radial_project(&gp.domain().center);
    let g = gp.eval_lorentz(cusp_word);
    let mut sides: Vec<&LeafSet> = vec![pair.upper.leaves()];
    if let Some(l) = &pair.lower {
        sides.push(l.leaves());
    }
    for k in 1..=40 {
        let s = 1.0 - 0.5f64.powi(k);
        let x = c0 + (q - c0) * s;
        let cx = crate::bending::translate_point(&g, &x);
        let mut ok = true;
        for leaves in &sides {
            let clear = leaves.distance_to_leaves(&x)? > 1e-6
                && matches!(leaves.crossings(&x, &cx), Ok(c) if c.is_empty());
            ok &= clear;
        }
        if ok {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence(format!(
        "no face point found near the cusp of {cusp_word}"
    )))
}

/// Results of the cusp stabilizer checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuspReport {
    /// Peripheral word.
    pub word: Word,
    /// Index of the extra generator.
    pub generator: usize,
    /// Relative distance between `c e` and `e c`.
    pub commutator_residual: f64,
    /// Class of the holonomy of the peripheral word.
    pub class: IsometryClass,
    /// Ideal point fixed by the peripheral holonomy on the plane of face 0.
    pub ideal_point: V4,
    /// Largest defect of `q` being null, fixed by `c` and fixed by `e`.
    pub ideal_residual: f64,
    /// Smallest distance to the identity of `c^m e^n` over small nonzero `(m, n)`.
    pub min_power_distance: f64,
    /// Whether every check passed at [`CUSP_TOL`].
    pub passed: bool,
}

/// Checks that the peripheral holonomy and `e` generate a rank-two
/// parabolic subgroup fixing a common ideal point.
pub fn cusp_stabilizer_check(
    doubled: &DoubledHolonomy,
    cusp_word: &Word,
    e_index: usize,
) -> Result<CuspReport> {
    let tag = doubled.pair.geometry();
    let c = doubled.surface(cusp_word)?;
    let e = doubled.e(e_index)?;
    let commutator = commutator_residual(&c, &e)?;
    let class = classify_isometry(&c, PARABOLIC_TOL);
    let q = fixed_ideal_point(&c, &doubled.planes[0])?;
    let wedge = |m: &M4| crate::geometry::wedge_norm(&(m * q).normalize(), &q);
    let scale_c = c.matrix() / c.matrix().amax();
    let scale_e = e.matrix() / e.matrix().amax();
    let ideal_residual = tag.form(&q).abs().max(wedge(&scale_c)).max(wedge(&scale_e));
    let id = M4::identity();
    let mut min_power_distance = f64::INFINITY;
    for m in -CUSP_POWER_RANGE..=CUSP_POWER_RANGE {
        for n in -CUSP_POWER_RANGE..=CUSP_POWER_RANGE {
            if m == 0 && n == 0 {
                continue;
            }
            let g = power(&c, m)?.compose(&power(&e, n)?)?;
            min_power_distance = min_power_distance.min(projective_distance(g.matrix(), &id));
        }
    }
    let passed = commutator < CUSP_TOL
        && class == IsometryClass::Parabolic
        && ideal_residual < CUSP_TOL
        && min_power_distance > CUSP_TOL;
    Ok(CuspReport {
        word: cusp_word.clone(),
        generator: e_index,
        commutator_residual: commutator,
        class,
        ideal_point: q,
        ideal_residual,
        min_power_distance,
        passed,
    })
}

fn power(g: &Isometry, n: i32) -> Result<Isometry> {
    let base = if n < 0 { g.inverse() } else { g.clone() };
    let mut m = Isometry::identity(g.geometry());
    for _ in 0..n.unsigned_abs() {
        m = m.compose(&base)?;
    }
    Ok(m)
}

/// Unit vector in the fixed subspace of `g` lying on `plane`.
fn fixed_ideal_point(g: &Isometry, plane: &Plane) -> Result<V4> {
    let m = g.matrix() / g.matrix()[(3, 3)];
    let svd = (m - M4::identity()).svd(false, true);
    let vt = svd
        .v_t
        .ok_or_else(|| Error::NoConvergence("singular value decomposition".into()))?;
    let cutoff = 1e-8 * (1.0 + m.amax());
    let kernel: Vec<V4> = (0..4)
        .filter(|&i| svd.singular_values[i] < cutoff)
        .map(|i| vt.row(i).transpose())
        .collect();
    match kernel.len() {
        0 => Err(Error::NoConvergence(
            "the peripheral holonomy fixes no point".into(),
        )),
        1 => Ok(kernel[0]),
        _ => {
            // Kernel vectors annihilated by the plane covector, obtained by
            // eliminating the vector with the largest pairing; among them the
            // one closest to the light cone is returned.
            let n = plane.normal();
            let p = (0..kernel.len())
                .max_by(|&i, &j| n.dot(&kernel[i]).abs().total_cmp(&n.dot(&kernel[j]).abs()))
                .unwrap_or(0);
            let kp = kernel[p];
            let tag = g.geometry();
            let on_plane: Vec<V4> = if n.dot(&kp).abs() < 1e-12 * n.norm() {
                kernel.clone()
            } else {
                kernel
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != p)
                    .map(|(_, k)| (k - kp * (n.dot(k) / n.dot(&kp))).normalize())
                    .collect()
            };
            on_plane
                .into_iter()
                .min_by(|u, v| tag.form(u).abs().total_cmp(&tag.form(v).abs()))
                .ok_or_else(|| Error::NoConvergence("empty kernel".into()))
        }
    }
}

/// Holonomy of the meridian around a component and the oriented axis it rotates about.
///
/// The two support planes adjacent along the axis of the component are
/// evaluated at points `x-` and `x+` on either side of it, with `t = 0`
/// meaning half-pipe geometry at scale one. The product of the reflections
/// is conjugated back by `B(x0, x-)`, so that the returned isometry is a
/// rotation about the axis itself.
pub fn meridian_holonomy(
    ctx: &BendingContext,
    component: usize,
    t: f64,
) -> Result<(Isometry, SpacelikeGeodesicH2)> {
    let axes = ctx.leaves().axes();
    let axis = *axes.get(component).ok_or_else(|| {
        Error::Config(format!(
            "component {component} out of range (have {})",
            axes.len()
        ))
    })?;
    let tag = Geometry::for_parameter(t);
    let scale = if tag == Geometry::HP { 1.0 } else { t.abs() };
    let ctx = ctx.with(tag, scale);
    let weight = ctx.multicurve().components[component].weight;
    if tag == Geometry::Hyp && !(scale * weight < std::f64::consts::PI) {
        return Err(Error::Config(format!(
            "scale {scale} times weight {weight} must be below pi"
        )));
    }
    let p = axis.closest_point();
    let eta = axis.normal();
    let mut delta: f64 = 1e-3;
    let (xm, xp) = loop {
        let xm = radial_project(&(p * delta.cosh() - eta * delta.sinh()));
        let xp = radial_project(&(p * delta.cosh() + eta * delta.sinh()));
        if ctx.leaves().crossings(&xm, &xp)?.len() == 1 {
            break (xm, xp);
        }
        delta /= 4.0;
        if delta < 1e-9 {
            return Err(Error::NoConvergence(
                "leaves accumulate at the meridian".into(),
            ));
        }
    };
    let c = ctx.cocycle(ctx.base_point(), &xm)?;
    let cinv = c.inverse();
    let pm = cinv.apply_plane(&ctx.support_plane_at(&xm)?)?;
    let pp = cinv.apply_plane(&ctx.support_plane_at(&xp)?)?;
    let m = reflection(tag, &pm)?.compose(&reflection(tag, &pp)?)?;
    Ok((m, axis))
}

/// Cone angle of the meridian around a component at parameter `t`.
///
/// Returns `2 (pi - |t| a)` for `t > 0`, `-2 |t| a` for `t < 0` and `-2 a`
/// for `t = 0`, where `a` is the weight. In hyperbolic geometry the angle is
/// taken in `[0, 2 pi)`. In anti-de Sitter geometry it is reported with the
/// sign flip used by the bending angles, so that the angles of both sides
/// are affine in `|t|` with slope `-2 a`.
pub fn meridian_cone_angle(ctx: &BendingContext, component: usize, t: f64) -> Result<f64> {
    let (m, axis) = meridian_holonomy(ctx, component, t)?;
    let theta = rotation_angle(&m, &axis)?;
    Ok(match m.geometry() {
        Geometry::Hyp => theta.rem_euclid(2.0 * std::f64::consts::PI),
        Geometry::AdS => -theta,
        Geometry::HP => theta,
    })
}

/// Rescaled meridian holonomies on a grid.
pub fn meridian_family(
    ctx: &BendingContext,
    component: usize,
    grid: &[f64],
) -> Result<TransitionFamily> {
    TransitionFamily::from_fn(format!("meridian[{component}]"), grid, |t| {
        Ok(rescale_conjugate(
            t,
            &meridian_holonomy(ctx, component, t)?.0,
        ))
    })
}

/// Half-pipe angle of the extrapolated limit of the rescaled meridian family.
pub fn meridian_limit_angle(
    ctx: &BendingContext,
    component: usize,
    grid: &[f64],
) -> Result<(f64, ConvergenceReport)> {
    let report = extrapolate_limit(&meridian_family(ctx, component, grid)?)?;
    let axis = ctx.leaves().axes()[component];
    let theta = rotation_angle(&Isometry::from_matrix(report.limit, Geometry::HP), &axis)?;
    Ok((theta, report))
}

/// Closed-form meridian angle at parameter `t` for a component of weight `a`.
pub fn expected_cone_angle(a: f64, t: f64) -> f64 {
    match Geometry::for_parameter(t) {
        Geometry::Hyp => 2.0 * (std::f64::consts::PI - t.abs() * a),
        Geometry::AdS => -2.0 * t.abs() * a,
        Geometry::HP => -2.0 * a,
    }
}

/// One row of a cone-angle table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeAngleRow {
    /// Geometry of the row.
    pub geometry: Geometry,
    /// Component index.
    pub component: usize,
    /// Weight of the component.
    pub weight: f64,
    /// Parameter `t`.
    pub t: f64,
    /// Computed cone angle.
    pub angle: f64,
    /// Closed-form value.
    pub expected: f64,
}

/// Cone angles of every component at every parameter of a grid.
pub fn cone_angle_table(ctx: &BendingContext, grid: &[f64]) -> Result<Vec<ConeAngleRow>> {
    let mut rows = Vec::new();
    for (component, c) in ctx.multicurve().components.iter().enumerate() {
        for &t in grid {
            rows.push(ConeAngleRow {
                geometry: Geometry::for_parameter(t),
                component,
                weight: c.weight,
                t,
                angle: meridian_cone_angle(ctx, component, t)?,
                expected: expected_cone_angle(c.weight, t),
            });
        }
    }
    Ok(rows)
}
