//! Bending cocycles, bent holonomy and bending maps in the three geometries.
//!
//! A context fixes a Fuchsian group, a weighted multicurve, a base point off
//! the lifted leaves, a sign, a geometry and a scale `|t|`. The cocycle
//! `B(x, y)` is the product, in crossing order from `x`, of the rotations
//! about the leaves met by the chord from `x` to `y`. Each leaf is oriented
//! so that its unit normal `eta` points towards `y`, and the rotation angle
//! about it is `sign * e * |t| * a` where `a` is the weight and `e = -1` in
//! anti-de Sitter space and `+1` otherwise. With this choice the rescaled
//! hyperbolic and anti-de Sitter families have the same half-pipe limit,
//! and the half-pipe bending map of a positive context is the graph of the
//! concave function `psi(z) = sum -a_i <eta_i, (1, z)>`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuchsian::{FuchsianGroup, LeafCrossing, LeafSet, WeightedMulticurve, Word};
use crate::geometry::{
    affine_lift, embed_disk_point, hyperboloid_lift, minkowski, radial_project, Geometry, Plane,
    ProjectivePoint, EPS_GEOM, M3, V2, V3,
};
use crate::isometry::{
    hp_to_minkowski, hp_translation, minkowski_to_hp, rotation, Isometry, MinkowskiIsometry,
};

/// Sign of a bending: positive bends the upper boundary, negative the lower.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    /// Positive bending.
    Positive,
    /// Negative bending: all rotation angles change sign.
    Negative,
}

impl Sign {
    /// `+1` or `-1`.
    pub fn value(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        }
    }
}

/// Data of a bent surface over a fixed Fuchsian structure.
#[derive(Debug, Clone, PartialEq)]
pub struct BendingContext {
    leaves: Arc<LeafSet>,
    base_point: V2,
    sign: Sign,
    geometry: Geometry,
    scale: f64,
}

impl BendingContext {
    /// New context; the base point must be off the lifted leaves.
    pub fn new(
        group: &FuchsianGroup,
        multicurve: &WeightedMulticurve,
        base_point: V2,
        sign: Sign,
        geometry: Geometry,
        scale: f64,
    ) -> Result<Self> {
        Self::from_leaves(
            Arc::new(LeafSet::new(group, multicurve)?),
            base_point,
            sign,
            geometry,
            scale,
        )
    }

    /// Context sharing precomputed leaves.
    pub fn from_leaves(
        leaves: Arc<LeafSet>,
        base_point: V2,
        sign: Sign,
        geometry: Geometry,
        scale: f64,
    ) -> Result<Self> {
        if base_point.norm() >= 1.0 {
            return Err(Error::NotInSpace(geometry));
        }
        let d = leaves.distance_to_leaves(&base_point)?;
        if d < EPS_GEOM {
            return Err(Error::EndpointOnLeaf(d));
        }
        if !(scale >= 0.0) {
            return Err(Error::Config(format!(
                "bending scale {scale} must be nonnegative"
            )));
        }
        Ok(Self {
            leaves,
            base_point,
            sign,
            geometry,
            scale,
        })
    }

    /// Same data in another geometry and at another scale.
    pub fn with(&self, geometry: Geometry, scale: f64) -> Self {
        Self {
            geometry,
            scale: scale.abs(),
            ..self.clone()
        }
    }

    /// Same data with the opposite sign.
    pub fn with_sign(&self, sign: Sign) -> Self {
        Self {
            sign,
            ..self.clone()
        }
    }

    /// Leaves of the multicurve.
    pub fn leaves(&self) -> &Arc<LeafSet> {
        &self.leaves
    }

    /// The Fuchsian group.
    pub fn group(&self) -> &FuchsianGroup {
        self.leaves.group()
    }

    /// The multicurve.
    pub fn multicurve(&self) -> &WeightedMulticurve {
        self.leaves.multicurve()
    }

    /// Base point `x0`.
    pub fn base_point(&self) -> &V2 {
        &self.base_point
    }

    /// Sign.
    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Geometry.
    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    /// Scale `|t|`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Rotation angle about a leaf of the given weight.
    pub fn angle(&self, weight: f64) -> f64 {
        let e = if self.geometry == Geometry::AdS {
            -1.0
        } else {
            1.0
        };
        self.sign.value() * e * self.scale * weight
    }

    /// Product of the rotations about a list of crossings, in order.
    pub fn cocycle_from_crossings(&self, crossings: &[LeafCrossing]) -> Isometry {
        self.telescoped(crossings, &Word::identity())
    }

    /// `R_1 ... R_n sigma(tail)` for the rotations `R_i` about the crossings.
    ///
    /// Each `R_i` is written as `sigma(g_i) R'_i sigma(g_i)^{-1}` with `R'_i`
    /// a rotation about the component axis and `g_i` the crossing's group
    /// element, and the product is evaluated as
    /// `sigma(g_1) R'_1 sigma(g_1^{-1} g_2) ... R'_n sigma(g_n^{-1} tail)`.
    /// All factors stay small when the chord is long, which avoids the
    /// cancellation of large entries between far rotations and `sigma(tail)`.
    fn telescoped(&self, crossings: &[LeafCrossing], tail: &Word) -> Isometry {
        let gp = self.group();
        let axes = self.leaves.axes();
        let mut m = Isometry::identity(self.geometry);
        let mut prev = Word::identity();
        for c in crossings {
            let step = prev.inverse().concat(&c.group_element);
            let g = gp.eval_lorentz(&c.group_element);
            let axis = axes[c.component];
            let same = minkowski(&(g * axis.normal()), c.leaf.normal()) > 0.0;
            let local = if same { axis } else { axis.reversed() };
            let r = rotation(self.geometry, &local, self.angle(c.weight));
            m = m
                .compose(&self.sigma_embed(&step))
                .and_then(|m| m.compose(&r))
                .expect("same geometry");
            prev = c.group_element.clone();
        }
        m.compose(&self.sigma_embed(&prev.inverse().concat(tail)))
            .expect("same geometry")
    }

    /// Bending cocycle `B(x, y)`.
    pub fn cocycle(&self, x: &V2, y: &V2) -> Result<Isometry> {
        Ok(self.cocycle_from_crossings(&self.leaves.crossings(x, y)?))
    }

    /// Fuchsian element acting through `diag(L, 1)`.
    pub fn sigma_embed(&self, w: &Word) -> Isometry {
        Isometry::from_h2(&self.group().eval_lorentz(w), self.geometry)
    }

    /// Image of the base point under a group element, as a disk point.
    pub fn translate_base_point(&self, w: &Word) -> V2 {
        translate_point(&self.group().eval_lorentz(w), &self.base_point)
    }

    /// Bent holonomy `rho(g) = B(x0, g x0) diag(sigma(g), 1)`.
    pub fn holonomy(&self, w: &Word) -> Result<Isometry> {
        let gx = self.translate_base_point(w);
        Ok(self.telescoped(&self.leaves.crossings(&self.base_point, &gx)?, w))
    }

    /// Bending map `b(x) = B(x0, x) x`; a point on a leaf gets the value from the side of `x0`.
    pub fn bending_map(&self, x: &V2) -> Result<ProjectivePoint> {
        let c = self.leaves.crossings_to_closed_end(&self.base_point, x)?;
        let b = self.cocycle_from_crossings(&c);
        Ok(b.apply(&ProjectivePoint::new(embed_disk_point(x))?))
    }

    /// Support function `psi(z) = sum -angle_i <eta_i, (1, z)>` over the
    /// leaves crossed by the chord from `x0` to `z`.
    pub fn psi(&self, z: &V2) -> Result<f64> {
        let c = self.leaves.crossings_to_closed_end(&self.base_point, z)?;
        let lift = affine_lift(z);
        Ok(c.iter()
            .map(|k| -self.angle(k.weight) * minkowski(k.leaf.normal(), &lift))
            .sum())
    }

    /// Support plane `B(x0, x) {x3 = 0}` of the face containing `x`.
    pub fn support_plane_at(&self, x: &V2) -> Result<Plane> {
        self.cocycle(&self.base_point, x)?
            .apply_plane(&Plane::horizontal(self.geometry))
    }
}

/// Base point used when none is given: three tenths of the way from the
/// centre of the fundamental domain to its first ideal vertex.
pub fn default_base_point(group: &FuchsianGroup) -> V2 {
    let d = group.domain();
    let c = radial_project(&d.center);
    c + (radial_project(&d.vertices[0]) - c) * 0.3
}

/// Disk point `g . z` for a Lorentz matrix `g`.
pub fn translate_point(g: &M3, z: &V2) -> V2 {
    radial_project(&(g * hyperboloid_lift(z)))
}

/// Free-function form of [`BendingContext::cocycle`].
pub fn bending_cocycle(ctx: &BendingContext, x: &V2, y: &V2) -> Result<Isometry> {
    ctx.cocycle(x, y)
}

/// Free-function form of [`BendingContext::bending_map`].
pub fn bending_map(ctx: &BendingContext, x: &V2) -> Result<ProjectivePoint> {
    ctx.bending_map(x)
}

/// Free-function form of [`BendingContext::psi`].
pub fn psi_lambda(ctx: &BendingContext, z: &V2) -> Result<f64> {
    ctx.psi(z)
}

/// Free-function form of [`BendingContext::support_plane_at`].
pub fn support_plane_at(ctx: &BendingContext, x: &V2) -> Result<Plane> {
    ctx.support_plane_at(x)
}

/// Bent holonomy of a context, evaluated on words.
#[derive(Debug, Clone, PartialEq)]
pub struct BentHolonomy {
    ctx: BendingContext,
}

impl BentHolonomy {
    /// Value on a word.
    pub fn eval(&self, w: &Word) -> Result<Isometry> {
        self.ctx.holonomy(w)
    }

    /// The context.
    pub fn context(&self) -> &BendingContext {
        &self.ctx
    }
}

/// The representation `g -> B(x0, g x0) diag(sigma(g), 1)`.
pub fn bent_holonomy(ctx: &BendingContext) -> BentHolonomy {
    BentHolonomy { ctx: ctx.clone() }
}

/// Translation part `tau` of an HP isometry `Is(A, tau)`.
pub fn translation_part(g: &Isometry) -> V3 {
    hp_to_minkowski(g).v
}

/// HP isometry `Is(Id, v)` aligning the lower bent surface with the upper one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignerFit {
    /// The aligner `Is(Id, v)`.
    pub aligner: Isometry,
    /// Translation `v`.
    pub v: V3,
    /// Max-norm residual of the linear system over the generators.
    pub residual: f64,
}

/// Least-squares aligner between two HP contexts over the same group.
///
/// Writing the bent holonomies as `Is(sigma(g), tau_+(g))` and
/// `Is(sigma(g), tau_-(g))`, conjugation by `Is(Id, v)` replaces `tau_-(g)`
/// by `tau_-(g) + (I - sigma(g)) v`. The returned `v` minimizes the squared
/// mismatch `|(I - sigma(g)) v - (tau_+(g) - tau_-(g))|^2` over both
/// generators; the residual vanishes exactly when the two cocycles are
/// cohomologous, which happens at the minimum of `l_lambda + l_mu`.
pub fn hp_aligner(upper: &BendingContext, lower: &BendingContext) -> Result<AlignerFit> {
    if upper.geometry != Geometry::HP || lower.geometry != Geometry::HP {
        return Err(Error::TagMismatch(upper.geometry, lower.geometry));
    }
    let mut m = nalgebra::DMatrix::<f64>::zeros(6, 3);
    let mut r = nalgebra::DVector::<f64>::zeros(6);
    for (k, w) in ["A", "B"].iter().enumerate() {
        let w = Word::parse(w)?;
        let up = translation_part(&upper.holonomy(&w)?);
        let lo = translation_part(&lower.holonomy(&w)?);
        let s = upper.group().eval_lorentz(&w);
        let lhs = M3::identity() - s;
        m.view_mut((3 * k, 0), (3, 3)).copy_from(&lhs);
        r.rows_mut(3 * k, 3).copy_from(&(up - lo));
    }
    let svd = m.clone().svd(true, true);
    let v = svd
        .solve(&r, 1e-12)
        .map_err(|e| Error::NoConvergence(e.to_string()))?;
    let residual = (&m * &v - &r).amax();
    let v = V3::new(v[0], v[1], v[2]);
    Ok(AlignerFit {
        aligner: hp_translation(&v),
        v,
        residual,
    })
}

/// Point `(x, s L(b_+(x)) + (1 - s) L(A b_-(x)))` of the HP developing map
/// interpolating between the upper and the aligned lower bent surfaces.
pub fn hp_developing_map(
    upper: &BendingContext,
    lower: &BendingContext,
    aligner: &Isometry,
    x: &V2,
    s: f64,
) -> Result<ProjectivePoint> {
    check_aligner(aligner)?;
    let hu = klein_height(&upper.bending_map(x)?);
    let hl = klein_height(&aligner.apply(&lower.bending_map(x)?));
    Ok(ProjectivePoint::from_klein(x, s * hu + (1.0 - s) * hl))
}

/// Holonomy `Is(sigma(g), s tau_+(g) + (1 - s) tau'_-(g))` of the
/// interpolated developing map, where `tau'_-` is the aligned lower cocycle.
pub fn interpolated_holonomy(
    upper: &BendingContext,
    lower: &BendingContext,
    aligner: &Isometry,
    w: &Word,
    s: f64,
) -> Result<Isometry> {
    check_aligner(aligner)?;
    let up = hp_to_minkowski(&upper.holonomy(w)?);
    let lo = hp_to_minkowski(
        &aligner
            .compose(&lower.holonomy(w)?)?
            .compose(&aligner.inverse())?,
    );
    Ok(minkowski_to_hp(&MinkowskiIsometry {
        a: up.a,
        v: up.v * s + lo.v * (1.0 - s),
    }))
}

fn check_aligner(aligner: &Isometry) -> Result<()> {
    if aligner.geometry() != Geometry::HP {
        return Err(Error::TagMismatch(aligner.geometry(), Geometry::HP));
    }
    let m = aligner.matrix() / aligner.matrix()[(3, 3)];
    let defect = (m.fixed_view::<3, 3>(0, 0).into_owned() - M3::identity())
        .amax()
        .max(m.fixed_view::<3, 1>(0, 3).amax());
    if defect > 1e-10 {
        return Err(Error::BadAligner(defect));
    }
    Ok(())
}

/// Height coordinate `x3 / x0` of a point.
pub fn klein_height(p: &ProjectivePoint) -> f64 {
    p.rep()[3] / p.rep()[0]
}
