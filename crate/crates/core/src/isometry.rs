//! Isometry groups of the three models as 4x4 matrices.
//!
//! Hyperbolic and anti-de Sitter isometries preserve their quadratic form.
//! Half-pipe isometries are block lower triangular `[[A, 0], [w, c]]` with `A`
//! in `O(1,2)` and `c = 1` or `c = -1` (the latter for reflections). Those
//! with `c = 1` and `A` in `O_0(1,2)` correspond to affine isometries
//! `x -> A x + v` of Minkowski space through `w = v^T J A`.

use nalgebra::{Matrix2, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    affine_lift, boost_to, embed_block, j3, lorentz_inverse, minkowski, radial_project, Geometry,
    Plane, ProjectivePoint, SpacelikeGeodesicH2, EPS_GEOM, M3, M4, V2, V3, V4,
};

/// Default tolerance for unipotency in [`classify_isometry`].
pub const PARABOLIC_TOL: f64 = 1e-7;

/// A 4x4 matrix acting on one of the three models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Isometry {
    m: M4,
    geometry: Geometry,
}

impl Isometry {
    /// Wraps a matrix; no group check is performed (see [`Isometry::group_residual`]).
    pub fn from_matrix(m: M4, geometry: Geometry) -> Self {
        Self { m, geometry }
    }

    /// Identity.
    pub fn identity(geometry: Geometry) -> Self {
        Self {
            m: M4::identity(),
            geometry,
        }
    }

    /// Block-diagonal `diag(L, 1)` for `L` in `O_0(1,2)`: the action of an
    /// isometry of the hyperbolic plane `{x3 = 0}`.
    pub fn from_h2(l: &M3, geometry: Geometry) -> Self {
        Self {
            m: embed_block(l),
            geometry,
        }
    }

    /// Matrix.
    pub fn matrix(&self) -> &M4 {
        &self.m
    }

    /// Geometry tag.
    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    /// Product `self * other`, i.e. `other` acts first.
    pub fn compose(&self, other: &Isometry) -> Result<Isometry> {
        if self.geometry != other.geometry {
            return Err(Error::TagMismatch(self.geometry, other.geometry));
        }
        Ok(Self {
            m: self.m * other.m,
            geometry: self.geometry,
        })
    }

    /// Inverse, computed from the group structure rather than by elimination.
    pub fn inverse(&self) -> Isometry {
        let m = match self.geometry {
            Geometry::Hyp | Geometry::AdS => {
                let j = self.geometry.gram();
                j * self.m.transpose() * j
            }
            Geometry::HP => {
                let a = self.m.fixed_view::<3, 3>(0, 0).into_owned();
                let w = self.m.fixed_view::<1, 3>(3, 0).into_owned();
                let d = self.m[(3, 3)];
                let ai = lorentz_inverse(&a);
                let mut r = M4::zeros();
                r.fixed_view_mut::<3, 3>(0, 0).copy_from(&ai);
                r.fixed_view_mut::<1, 3>(3, 0).copy_from(&(-(w * ai) / d));
                r[(3, 3)] = 1.0 / d;
                r
            }
        };
        Self {
            m,
            geometry: self.geometry,
        }
    }

    /// Action on a point.
    pub fn apply(&self, p: &ProjectivePoint) -> ProjectivePoint {
        ProjectivePoint::from_rep(self.m * p.rep())
    }

    /// Action on a plane through the inverse transpose.
    pub fn apply_plane(&self, p: &Plane) -> Result<Plane> {
        if self.geometry != p.geometry() {
            return Err(Error::TagMismatch(self.geometry, p.geometry()));
        }
        Ok(Plane::new(
            self.inverse().m.transpose() * p.normal(),
            self.geometry,
        ))
    }

    /// Distance to the group: `||m^T J m - J||_inf` for Hyp and AdS, and the
    /// block-shape defect for HP (zero last column above the diagonal, corner
    /// `+1` or `-1`, Lorentzian linear part).
    pub fn group_residual(&self) -> f64 {
        match self.geometry {
            Geometry::Hyp | Geometry::AdS => {
                let j = self.geometry.gram();
                (self.m.transpose() * j * self.m - j).amax()
            }
            Geometry::HP => {
                let a = self.m.fixed_view::<3, 3>(0, 0).into_owned();
                let j = j3();
                let lin = (a.transpose() * j * a - j).amax();
                let col = self.m.fixed_view::<3, 1>(0, 3).amax();
                lin.max(col).max((self.m[(3, 3)].abs() - 1.0).abs())
            }
        }
    }

    /// Maximum entrywise distance to another isometry.
    pub fn distance(&self, other: &Isometry) -> f64 {
        (self.m - other.m).amax()
    }
}

/// Free-function form of [`Isometry::compose`].
pub fn compose(g: &Isometry, h: &Isometry) -> Result<Isometry> {
    g.compose(h)
}

/// Free-function form of [`Isometry::inverse`].
pub fn inverse(g: &Isometry) -> Isometry {
    g.inverse()
}

/// Free-function form of [`Isometry::apply`].
pub fn apply(g: &Isometry, p: &ProjectivePoint) -> ProjectivePoint {
    g.apply(p)
}

/// Free-function form of [`Isometry::apply_plane`].
pub fn apply_plane(g: &Isometry, p: &Plane) -> Result<Plane> {
    g.apply_plane(p)
}

/// Rotation about the standard geodesic `{[cosh s, sinh s, 0, 0]}`.
///
/// The `(x2, x3)` block is `[[cos, sin], [-sin, cos]]` for Hyp and
/// `[[cosh, sinh], [sinh, cosh]]` for AdS; the HP rotation is the shear
/// `x3 -> x3 - theta x2`.
pub fn standard_rotation(tag: Geometry, theta: f64) -> M4 {
    let mut m = M4::identity();
    match tag {
        Geometry::Hyp => {
            let (s, c) = theta.sin_cos();
            m[(2, 2)] = c;
            m[(2, 3)] = s;
            m[(3, 2)] = -s;
            m[(3, 3)] = c;
        }
        Geometry::AdS => {
            let (s, c) = (theta.sinh(), theta.cosh());
            m[(2, 2)] = c;
            m[(2, 3)] = s;
            m[(3, 2)] = s;
            m[(3, 3)] = c;
        }
        Geometry::HP => m[(3, 2)] = -theta,
    }
    m
}

/// Rotation of angle `theta` about an oriented geodesic of the hyperbolic plane.
///
/// The rotation fixes the span of the geodesic and acts on the normal pair
/// `(eta, e3)` through the block of [`standard_rotation`]. It is assembled as
/// a rank-two update of the identity from the covectors `<eta, .>` and `x3`,
/// which keeps the rounding error proportional to the size of the entries
/// for geodesics far from the origin.
pub fn rotation(tag: Geometry, axis: &SpacelikeGeodesicH2, theta: f64) -> Isometry {
    let b = standard_rotation(tag, theta);
    let (c22, c23, c32, c33) = (b[(2, 2)] - 1.0, b[(2, 3)], b[(3, 2)], b[(3, 3)] - 1.0);
    let eta = axis.normal();
    let flat = j3() * eta;
    let mut m = M4::identity();
    for i in 0..3 {
        for j in 0..3 {
            m[(i, j)] += c22 * eta[i] * flat[j];
        }
        m[(i, 3)] += c23 * eta[i];
        m[(3, i)] += c32 * flat[i];
    }
    m[(3, 3)] += c33;
    Isometry { m, geometry: tag }
}

/// Angle of a rotation about an oriented axis; the Hyp branch is `[-pi, pi)`.
pub fn rotation_angle(g: &Isometry, axis: &SpacelikeGeodesicH2) -> Result<f64> {
    let f = axis.frame();
    let c = embed_block(&lorentz_inverse(&f)) * g.m * embed_block(&f);
    let c = match g.geometry {
        Geometry::HP => c / c[(3, 3)],
        _ => c,
    };
    let theta = match g.geometry {
        Geometry::Hyp => {
            let th = c[(2, 3)].atan2(c[(2, 2)]);
            if th >= std::f64::consts::PI {
                th - 2.0 * std::f64::consts::PI
            } else {
                th
            }
        }
        Geometry::AdS => c[(2, 3)].asinh(),
        Geometry::HP => -c[(3, 2)],
    };
    let defect = (c - standard_rotation(g.geometry, theta)).amax();
    if defect > 1e-8 * (1.0 + c.amax()) {
        return Err(Error::NotARotationAboutAxis(defect));
    }
    Ok(theta)
}

/// Reflection fixing a plane pointwise.
///
/// For Hyp and AdS, `r = Id - 2 J n n^T / (n^T J n)` with `n` the covector of
/// the plane. For HP the plane must not contain a fiber; the reflection of the
/// plane with covector `(a, 1)` is `[[Id, 0], [-2a, -1]]`.
pub fn reflection(tag: Geometry, plane: &Plane) -> Result<Isometry> {
    let plane = plane.with_geometry(tag);
    if !plane.is_spacelike() {
        return Err(Error::DegeneratePlane(tag));
    }
    let n = plane.normal();
    let m = match tag {
        Geometry::Hyp | Geometry::AdS => {
            let j = tag.gram();
            M4::identity() - (j * n) * n.transpose() * (2.0 / tag.pairing(n, n))
        }
        Geometry::HP => {
            let mut m = M4::identity();
            for k in 0..3 {
                m[(3, k)] = -2.0 * n[k] / n[3];
            }
            m[(3, 3)] = -1.0;
            m
        }
    };
    Ok(Isometry { m, geometry: tag })
}

/// The rescaling map `tau_t = diag(1, 1, 1, 1/|t|)`.
pub fn rescaling(t: f64) -> M4 {
    M4::from_diagonal(&V4::new(1.0, 1.0, 1.0, 1.0 / t.abs()))
}

/// `tau_t m tau_t^{-1}`, computed entrywise to avoid rounding in the diagonal products.
pub fn rescale_conjugate_matrix(t: f64, m: &M4) -> M4 {
    let a = t.abs();
    let mut r = *m;
    for k in 0..3 {
        r[(3, k)] /= a;
        r[(k, 3)] *= a;
    }
    r
}

/// `tau_t g tau_t^{-1}` as a raw projective matrix.
pub fn rescale_conjugate(t: f64, g: &Isometry) -> M4 {
    rescale_conjugate_matrix(t, &g.m)
}

/// Projective normalization of a matrix: bottom-right entry set to 1 when it
/// is nonzero, Frobenius normalization with a positive leading entry otherwise.
pub fn projective_normalize(m: &M4) -> M4 {
    let d = m[(3, 3)];
    if d.abs() > 1e-12 * m.amax() {
        m / d
    } else {
        let n = m / m.norm();
        match n.iter().find(|c| c.abs() > 1e-14) {
            Some(c) if *c < 0.0 => -n,
            _ => n,
        }
    }
}

/// Entrywise max distance between projectively normalized matrices.
pub fn projective_distance(a: &M4, b: &M4) -> f64 {
    (projective_normalize(a) - projective_normalize(b)).amax()
}

/// Affine isometry `x -> A x + v` of Minkowski space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinkowskiIsometry {
    /// Linear part in `O_0(1,2)`.
    pub a: M3,
    /// Translation part.
    pub v: V3,
}

impl MinkowskiIsometry {
    /// Composition `self o other`.
    pub fn compose(&self, other: &MinkowskiIsometry) -> MinkowskiIsometry {
        MinkowskiIsometry {
            a: self.a * other.a,
            v: self.a * other.v + self.v,
        }
    }

    /// Action on a point of Minkowski space.
    pub fn apply(&self, x: &V3) -> V3 {
        self.a * x + self.v
    }

    /// `||A^T J A - J||_inf`.
    pub fn residual(&self) -> f64 {
        let j = j3();
        (self.a.transpose() * j * self.a - j).amax()
    }
}

/// The isomorphism `Is(A, v) = [[A, 0], [v^T J A, 1]]`.
pub fn minkowski_to_hp(mi: &MinkowskiIsometry) -> Isometry {
    let mut m = embed_block(&mi.a);
    let w = mi.v.transpose() * j3() * mi.a;
    m.fixed_view_mut::<1, 3>(3, 0).copy_from(&w);
    Isometry {
        m,
        geometry: Geometry::HP,
    }
}

/// Inverse of [`minkowski_to_hp`] (after normalizing the corner entry).
pub fn hp_to_minkowski(g: &Isometry) -> MinkowskiIsometry {
    let m = g.m / g.m[(3, 3)];
    let a = m.fixed_view::<3, 3>(0, 0).into_owned();
    let w = m.fixed_view::<1, 3>(3, 0).transpose();
    // w^T = v^T J A, hence v = J A^{-T} w = A J w for A in O(1,2).
    let v = a * (j3() * w);
    MinkowskiIsometry { a, v }
}

/// HP isometry `Is(Id, v)`.
pub fn hp_translation(v: &V3) -> Isometry {
    minkowski_to_hp(&MinkowskiIsometry {
        a: M3::identity(),
        v: *v,
    })
}

/// Action of an HP isometry on the Klein model `D^2 x R`, computed from the
/// decomposition `Is(A, v) = Is(Id, v) Is(A, 0)`:
/// `Is(A,0) (z, h) = (A.z, h / (-<A(1,z), (1,0,0)>))` and
/// `Is(Id,v) (z, h) = (z, h + <v, (1,z)>)`.
pub fn hp_klein_action(g: &Isometry, z: &V2, h: f64) -> (V2, f64) {
    let mi = hp_to_minkowski(g);
    let w = mi.a * affine_lift(z);
    let denom = -minkowski(&w, &V3::new(1.0, 0.0, 0.0));
    let az = radial_project(&w);
    let h1 = h / denom;
    (az, h1 + minkowski(&mi.v, &affine_lift(&az)))
}

/// Family of isometries of `tag` whose rescaled limit is `Is(Id, v)`.
///
/// Returns `exp(X)` where `X` has last row `|t| v^T J` and last column
/// `-s |t| v`, which lies in the Lie algebra of the form; in HP (`t` ignored)
/// this is `Is(Id, v)` itself.
pub fn lift_hp_translation(v: &V3, tag: Geometry, t: f64) -> Isometry {
    if tag == Geometry::HP {
        return hp_translation(v);
    }
    let a = t.abs();
    let mut x = M4::zeros();
    let row = (j3() * v) * a;
    for k in 0..3 {
        x[(3, k)] = row[k];
        x[(k, 3)] = -tag.s() * a * v[k];
    }
    Isometry {
        m: x.exp(),
        geometry: tag,
    }
}

/// Isometry `B` with `B(x) = target` and `B(P) = {x3 = 0}`, composed of four
/// factors: a motion of `{x3 = 0}` bringing `x` above the origin, a
/// translation along the vertical geodesic, a rotation of `{x3 = 0}` about
/// the origin aligning `P` with the geodesic `{x2 = x3 = 0}`, and a rotation
/// about that geodesic by the dihedral angle. A final motion of `{x3 = 0}`
/// carries the origin to `target`.
pub fn normalize_plane_point(
    x: &ProjectivePoint,
    plane: &Plane,
    target: &ProjectivePoint,
    tag: Geometry,
) -> Result<Isometry> {
    let plane = plane.with_geometry(tag);
    let xr = x.normalized(tag);
    let pairing = plane.pairing(&xr);
    if pairing.abs() > 1e-9 {
        return Err(Error::PointOffPlane(pairing));
    }
    let tr = target.normalized(tag);
    if tr[3].abs() > 1e-12 * tr.amax() {
        return Err(Error::PointOffPlane(tr[3]));
    }
    let horizontal = Plane::horizontal(tag);
    let angle = match tag {
        Geometry::HP => plane
            .hp_dual_point()
            .map(|y| minkowski(&y, &y).max(0.0).sqrt().atan()),
        _ => angle_to_horizontal(&plane),
    }?;
    if angle > std::f64::consts::FRAC_PI_4 {
        return Err(Error::PlaneTooFar(angle));
    }

    // Step 1: bring the projection of x to the origin of {x3 = 0}.
    let w = V3::new(xr[0], xr[1], xr[2]);
    let qw = -minkowski(&w, &w);
    if !(qw > 0.0) {
        return Err(Error::NotInSpace(tag));
    }
    let b1 = embed_block(&lorentz_inverse(&boost_to(&(w / qw.sqrt()))));
    let y = b1 * xr;

    // Step 2: translate along the vertical geodesic through the origin.
    let mut b2 = M4::identity();
    match tag {
        Geometry::Hyp => {
            let d = (y[3] / y[0]).atanh();
            let (c, s) = (d.cosh(), d.sinh());
            b2[(0, 0)] = c;
            b2[(0, 3)] = -s;
            b2[(3, 0)] = -s;
            b2[(3, 3)] = c;
        }
        Geometry::AdS => {
            let d = y[3].atan2(y[0]);
            let (s, c) = d.sin_cos();
            b2[(0, 0)] = c;
            b2[(0, 3)] = s;
            b2[(3, 0)] = -s;
            b2[(3, 3)] = c;
        }
        Geometry::HP => b2[(3, 0)] = -y[3] / y[0],
    }
    let b21 = b2 * b1;
    let q = Plane::new(inverse_transpose(&b21, tag) * plane.normal(), tag);

    // Step 3: rotate about the origin so that the trace of Q on {x3 = 0} is the x1-axis.
    let n = q.normal();
    let mut b3 = M4::identity();
    if n[1].abs().max(n[2].abs()) > 1e-15 * n.amax() {
        let mut beta = n[1].atan2(-n[2]);
        if beta > std::f64::consts::FRAC_PI_2 {
            beta -= std::f64::consts::PI;
        } else if beta < -std::f64::consts::FRAC_PI_2 {
            beta += std::f64::consts::PI;
        }
        let (s, c) = beta.sin_cos();
        b3[(1, 1)] = c;
        b3[(1, 2)] = s;
        b3[(2, 1)] = -s;
        b3[(2, 2)] = c;
    }
    let b321 = b3 * b21;
    let q3 = Plane::new(inverse_transpose(&b321, tag) * plane.normal(), tag);

    // Step 4: rotate about the x1-axis by the dihedral angle.
    let n = q3.normal();
    let alpha = match tag {
        Geometry::Hyp => (-n[2]).atan2(n[3]),
        Geometry::AdS => (n[2] / n[3]).atanh(),
        Geometry::HP => -n[2] / n[3],
    };
    let b4 = standard_rotation_x1(tag, alpha);
    let b = b4 * b321;

    let t = embed_block(&boost_to(&V3::new(tr[0], tr[1], tr[2])));
    let result = Isometry {
        m: t * b,
        geometry: tag,
    };
    debug_assert!(horizontal.geometry() == tag);
    Ok(result)
}

fn standard_rotation_x1(tag: Geometry, alpha: f64) -> M4 {
    standard_rotation(tag, alpha)
}

fn inverse_transpose(m: &M4, tag: Geometry) -> M4 {
    Isometry {
        m: *m,
        geometry: tag,
    }
    .inverse()
    .m
    .transpose()
}

fn angle_to_horizontal(plane: &Plane) -> Result<f64> {
    crate::geometry::angle_between_planes(plane, &Plane::horizontal(plane.geometry()))
}

/// Dynamical type of an isometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IsometryClass {
    /// Fixes a point of the model (including the identity and rotations about geodesics).
    Elliptic,
    /// Unipotent and nontrivial.
    Parabolic,
    /// Has an eigenvalue off the unit circle.
    Hyperbolic,
    /// Not an orientation-preserving element of the group.
    Other,
}

/// Classifies an isometry.
///
/// Hyperbolic and half-pipe isometries are elliptic when their fixed subspace
/// contains a point of the model;
/// parabolic when the characteristic polynomial equals `(x - 1)^4` within
/// `tol` (scaled by the squared matrix norm); otherwise elliptic when every
/// eigenvalue has modulus one and hyperbolic when not.
pub fn classify_isometry(g: &Isometry, tol: f64) -> IsometryClass {
    let scale = 1.0 + g.m.amax();
    if g.group_residual() > 1e-8 * scale * scale {
        return IsometryClass::Other;
    }
    let m = match g.geometry {
        Geometry::HP => g.m / g.m[(3, 3)],
        _ => g.m,
    };
    if m.determinant() < 0.0 || m[(0, 0)] < 0.0 && g.geometry == Geometry::Hyp {
        return IsometryClass::Other;
    }
    if (m - M4::identity()).amax() < tol {
        return IsometryClass::Elliptic;
    }
    // In anti-de Sitter space every isometry of the form diag(A, 1) fixes
    // the point [0, 0, 0, 1], so the fixed-point test is only meaningful for
    // the other two geometries.
    if g.geometry != Geometry::AdS && fixes_model_point(&m, g.geometry, tol) {
        return IsometryClass::Elliptic;
    }
    let m2 = m * m;
    let p1 = m.trace();
    let p2 = m2.trace();
    let p3 = (m2 * m).trace();
    let e1 = p1;
    let e2 = (e1 * p1 - p2) / 2.0;
    let e3 = (e2 * p1 - e1 * p2 + p3) / 3.0;
    let e4 = m.determinant();
    let band = tol * scale * scale;
    if (e1 - 4.0).abs() < band
        && (e2 - 6.0).abs() < band
        && (e3 - 4.0).abs() < band
        && (e4 - 1.0).abs() < band
    {
        return IsometryClass::Parabolic;
    }
    let eig = m.complex_eigenvalues();
    if eig.iter().all(|z| (z.norm() - 1.0).abs() < tol.sqrt()) {
        IsometryClass::Elliptic
    } else {
        IsometryClass::Hyperbolic
    }
}

/// Whether the fixed subspace of `m` contains a vector of negative form.
fn fixes_model_point(m: &M4, tag: Geometry, tol: f64) -> bool {
    let d = m - M4::identity();
    let svd = d.svd(false, true);
    let vt = match svd.v_t {
        Some(v) => v,
        None => return false,
    };
    let cutoff = tol * (1.0 + m.amax());
    let kernel: Vec<V4> = (0..4)
        .filter(|&i| svd.singular_values[i] < cutoff)
        .map(|i| vt.row(i).transpose())
        .collect();
    if kernel.is_empty() {
        return false;
    }
    let k = kernel.len();
    let mut gram = nalgebra::DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = tag.pairing(&kernel[i], &kernel[j]);
        }
    }
    let eig = SymmetricEigen::new(gram);
    eig.eigenvalues.iter().any(|&l| l < -1e-6)
}

/// Ideal points fixed by a parabolic element: null vectors in the fixed subspace.
pub fn fixed_null_directions(g: &Isometry, tol: f64) -> Vec<V4> {
    let m = match g.geometry {
        Geometry::HP => g.m / g.m[(3, 3)],
        _ => g.m,
    };
    let d = m - M4::identity();
    let svd = d.svd(false, true);
    let vt = match svd.v_t {
        Some(v) => v,
        None => return Vec::new(),
    };
    let cutoff = tol * (1.0 + m.amax());
    let kernel: Vec<V4> = (0..4)
        .filter(|&i| svd.singular_values[i] < cutoff)
        .map(|i| vt.row(i).transpose())
        .collect();
    match kernel.len() {
        0 => Vec::new(),
        1 => kernel,
        2 => {
            let (a, b) = (kernel[0], kernel[1]);
            let tag = g.geometry;
            let g2 = Matrix2::new(
                tag.pairing(&a, &a),
                tag.pairing(&a, &b),
                tag.pairing(&a, &b),
                tag.pairing(&b, &b),
            );
            let eig = SymmetricEigen::new(g2);
            let i = if eig.eigenvalues[0].abs() < eig.eigenvalues[1].abs() {
                0
            } else {
                1
            };
            let c = eig.eigenvectors.column(i);
            vec![a * c[0] + b * c[1]]
        }
        _ => kernel,
    }
}

/// Whether an isometry fixes a projective point.
pub fn fixes_point(g: &Isometry, p: &V4, tol: f64) -> bool {
    crate::geometry::wedge_norm(&(g.m * p).normalize(), &p.normalize()) < tol
}

/// Tolerance-aware test that `g` lies in its group.
pub fn is_group_element(g: &Isometry) -> bool {
    g.group_residual() < 1e3 * EPS_GEOM
}
