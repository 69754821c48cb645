//! Projective models of hyperbolic, anti-de Sitter and half-pipe space.
//!
//! All three spaces live in real projective 3-space and are cut out by the
//! quadratic form `q_s(x) = -x0^2 + x1^2 + x2^2 + s x3^2` with `s = 1` for
//! hyperbolic space, `s = -1` for anti-de Sitter space and `s = 0` for
//! half-pipe space. The hyperbolic plane sits in each of them as the slice
//! `{x3 = 0}`; its points are handled through the Klein disk chart
//! `(x1/x0, x2/x0)` and through the hyperboloid `-x0^2 + x1^2 + x2^2 = -1`
//! of Minkowski space `R^{1,2}`.

use nalgebra::{Matrix3, Matrix4, Vector2, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Disk chart coordinates.
pub type V2 = Vector2<f64>;
/// Vectors of Minkowski space `R^{1,2}`.
pub type V3 = Vector3<f64>;
/// Homogeneous coordinates of projective 3-space.
pub type V4 = Vector4<f64>;
/// Linear maps of `R^{1,2}`.
pub type M3 = Matrix3<f64>;
/// Projective transformations of 3-space.
pub type M4 = Matrix4<f64>;

/// Tolerance for membership and projective equality tests.
pub const EPS_GEOM: f64 = 1e-10;

/// The three model geometries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    /// Hyperbolic space, `s = 1`.
    Hyp,
    /// Anti-de Sitter space, `s = -1`.
    #[serde(rename = "ads")]
    AdS,
    /// Half-pipe space, `s = 0`.
    #[serde(rename = "hp")]
    HP,
}

impl Geometry {
    /// Coefficient of `x3^2` in the quadratic form.
    pub fn s(self) -> f64 {
        match self {
            Geometry::Hyp => 1.0,
            Geometry::AdS => -1.0,
            Geometry::HP => 0.0,
        }
    }

    /// Geometry of the transition family at parameter `t`.
    pub fn for_parameter(t: f64) -> Geometry {
        if t > 0.0 {
            Geometry::Hyp
        } else if t < 0.0 {
            Geometry::AdS
        } else {
            Geometry::HP
        }
    }

    /// Gram matrix `diag(-1, 1, 1, s)`.
    pub fn gram(self) -> M4 {
        M4::from_diagonal(&V4::new(-1.0, 1.0, 1.0, self.s()))
    }

    /// Evaluates the quadratic form.
    pub fn form(self, x: &V4) -> f64 {
        -x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + self.s() * x[3] * x[3]
    }

    /// Evaluates the associated bilinear form.
    pub fn pairing(self, x: &V4, y: &V4) -> f64 {
        -x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + self.s() * x[3] * y[3]
    }
}

/// Free-function form of [`Geometry::form`].
pub fn form_eval(tag: Geometry, x: &V4) -> f64 {
    tag.form(x)
}

/// The Minkowski Gram matrix `diag(-1, 1, 1)`.
pub fn j3() -> M3 {
    M3::from_diagonal(&V3::new(-1.0, 1.0, 1.0))
}

/// Minkowski pairing on `R^{1,2}`.
pub fn minkowski(x: &V3, y: &V3) -> f64 {
    -x[0] * y[0] + x[1] * y[1] + x[2] * y[2]
}

/// Lorentzian cross product: the vector `c` with `<c, x> = det[a, b, x]`.
pub fn lorentz_cross(a: &V3, b: &V3) -> V3 {
    j3() * a.cross(b)
}

/// Lift `(1, z)` of a disk point.
pub fn affine_lift(z: &V2) -> V3 {
    V3::new(1.0, z[0], z[1])
}

/// Radial projection of the hyperboloid to the Klein disk.
pub fn radial_project(x: &V3) -> V2 {
    V2::new(x[1] / x[0], x[2] / x[0])
}

/// Section of [`radial_project`]: the hyperboloid point over a disk point.
pub fn hyperboloid_lift(z: &V2) -> V3 {
    let w = affine_lift(z);
    w / (-minkowski(&w, &w)).sqrt()
}

/// Lorentz boost in `SO_0(1,2)` sending `(1,0,0)` to the unit timelike vector `p`.
pub fn boost_to(p: &V3) -> M3 {
    let ps = Vector2::new(p[1], p[2]);
    let k = 1.0 / (1.0 + p[0]);
    let mut m = M3::zeros();
    m[(0, 0)] = p[0];
    for i in 0..2 {
        m[(0, i + 1)] = ps[i];
        m[(i + 1, 0)] = ps[i];
        for j in 0..2 {
            m[(i + 1, j + 1)] = if i == j { 1.0 } else { 0.0 } + k * ps[i] * ps[j];
        }
    }
    m
}

/// Inverse of a matrix in `O(1,2)`, computed as `J L^T J`.
pub fn lorentz_inverse(l: &M3) -> M3 {
    let j = j3();
    j * l.transpose() * j
}

/// Block-diagonal embedding `diag(L, 1)` of a Lorentz matrix.
pub fn embed_block(l: &M3) -> M4 {
    let mut m = M4::identity();
    m.fixed_view_mut::<3, 3>(0, 0).copy_from(l);
    m
}

/// The point of `{x3 = 0}` over a disk point, as a unit lift.
pub fn embed_disk_point(z: &V2) -> V4 {
    let x = hyperboloid_lift(z);
    V4::new(x[0], x[1], x[2], 0.0)
}

/// Point of projective 3-space given by a homogeneous 4-vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectivePoint {
    rep: V4,
}

/// Position of a point relative to a model region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Containment {
    /// Strictly negative form value.
    Interior,
    /// Null within tolerance.
    Boundary,
    /// Strictly positive form value.
    Exterior,
}

impl ProjectivePoint {
    /// Wraps a nonzero vector.
    pub fn new(rep: V4) -> Result<Self> {
        if rep.amax() == 0.0 || !rep.iter().all(|c| c.is_finite()) {
            return Err(Error::ZeroVector);
        }
        Ok(Self { rep })
    }

    /// Wraps a vector known to be nonzero.
    pub(crate) fn from_rep(rep: V4) -> Self {
        Self { rep }
    }

    /// Point with Klein coordinates `(z, h)`, i.e. homogeneous `(1, z, h)`.
    pub fn from_klein(z: &V2, h: f64) -> Self {
        Self {
            rep: V4::new(1.0, z[0], z[1], h),
        }
    }

    /// Underlying homogeneous vector.
    pub fn rep(&self) -> &V4 {
        &self.rep
    }

    /// Unit lift for the given form: `q = -1` and `x0 > 0` for interior
    /// points, Euclidean unit length with the first nonzero coordinate
    /// positive otherwise.
    pub fn normalized(&self, tag: Geometry) -> V4 {
        let q = tag.form(&self.rep);
        let scale = self.rep.amax();
        if q < -EPS_GEOM * scale * scale {
            let v = self.rep / (-q).sqrt();
            if v[0] < 0.0 {
                -v
            } else {
                v
            }
        } else {
            canonical_unit(&self.rep)
        }
    }

    /// Projective equality: the wedge of the Euclidean-normalized reps is below `tol`.
    pub fn proj_eq(&self, other: &ProjectivePoint, tol: f64) -> bool {
        wedge_norm(&self.rep.normalize(), &other.rep.normalize()) < tol
    }
}

fn canonical_unit(v: &V4) -> V4 {
    let u = v.normalize();
    match u.iter().find(|c| c.abs() > 1e-14) {
        Some(c) if *c < 0.0 => -u,
        _ => u,
    }
}

/// Norm of `x ^ y`, i.e. the square root of the sum of squared 2x2 minors.
pub fn wedge_norm(x: &V4, y: &V4) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            let m = x[i] * y[j] - x[j] * y[i];
            s += m * m;
        }
    }
    s.sqrt()
}

/// Classifies a point by the sign of the form on its normalized rep.
pub fn contains(tag: Geometry, p: &ProjectivePoint) -> Containment {
    let u = p.rep.normalize();
    let q = tag.form(&u);
    if q < -EPS_GEOM {
        Containment::Interior
    } else if q > EPS_GEOM {
        Containment::Exterior
    } else {
        Containment::Boundary
    }
}

/// Klein coordinates `(z, h)` of an HP point.
pub fn klein_hp(p: &ProjectivePoint) -> Result<(V2, f64)> {
    let x = p.rep;
    if contains(Geometry::HP, p) != Containment::Interior || x[0].abs() < EPS_GEOM * x.amax() {
        return Err(Error::NotInSpace(Geometry::HP));
    }
    Ok((V2::new(x[1] / x[0], x[2] / x[0]), x[3] / x[0]))
}

/// Inverse of [`klein_hp`].
pub fn klein_hp_inverse(z: &V2, h: f64) -> Result<ProjectivePoint> {
    if z.norm_squared() >= 1.0 {
        return Err(Error::NotInSpace(Geometry::HP));
    }
    Ok(ProjectivePoint::from_klein(z, h))
}

/// Affine chart `(x1, x2, x3) / x0` used for every geometry.
pub fn affine_chart(x: &V4) -> Vector3<f64> {
    Vector3::new(x[1] / x[0], x[2] / x[0], x[3] / x[0])
}

/// Signed height `L([x, t]) = t / sqrt(-<x, x>)` of an HP point.
pub fn hp_height(p: &ProjectivePoint) -> Result<f64> {
    let x = p.rep.fixed_rows::<3>(0).into_owned();
    let q = minkowski(&x, &x);
    if q >= -EPS_GEOM * x.norm_squared() {
        return Err(Error::DegenerateDirection);
    }
    let sign = if x[0] > 0.0 { 1.0 } else { -1.0 };
    Ok(sign * p.rep[3] / (-q).sqrt())
}

/// Affine plane `{y in R^{1,2} : <x, y> = t}` of Minkowski space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinkowskiPlane {
    /// Timelike normal `x`.
    pub normal: V3,
    /// Offset `t`.
    pub offset: f64,
}

impl MinkowskiPlane {
    /// Whether `y` lies on the plane within `tol`.
    pub fn contains(&self, y: &V3, tol: f64) -> bool {
        (minkowski(&self.normal, y) - self.offset).abs() < tol
    }
}

/// Dual Minkowski plane of an interior HP point `[x, t]`.
pub fn dual_plane_of_hp_point(p: &ProjectivePoint) -> Result<MinkowskiPlane> {
    if contains(Geometry::HP, p) != Containment::Interior {
        return Err(Error::NotInSpace(Geometry::HP));
    }
    let x = p.rep;
    Ok(MinkowskiPlane {
        normal: V3::new(x[0], x[1], x[2]),
        offset: x[3],
    })
}

/// HP point `[x, t]` dual to the Minkowski plane `{<x, y> = t}`.
pub fn hp_point_of_dual_plane(plane: &MinkowskiPlane) -> Result<ProjectivePoint> {
    let n = plane.normal;
    ProjectivePoint::new(V4::new(n[0], n[1], n[2], plane.offset))
}

/// Spacelike HP plane `P_y = {[x, t] : <x, y> = t}` dual to a Minkowski point.
pub fn hp_point_of_minkowski_point(y: &V3) -> Plane {
    let jy = j3() * y;
    Plane::new(V4::new(-jy[0], -jy[1], -jy[2], 1.0), Geometry::HP)
}

/// Plane of projective 3-space given by a covector, tagged with a geometry.
///
/// A point `x` lies on the plane iff `normal . x = 0`. The covector sign is
/// canonical: its last nonzero coordinate is positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plane {
    normal: V4,
    geometry: Geometry,
}

impl Plane {
    /// Plane with the given covector, sign canonicalized.
    pub fn new(normal: V4, geometry: Geometry) -> Self {
        let scale = normal.amax();
        let last = (0..4).rev().find(|&i| normal[i].abs() > 1e-14 * scale);
        let n = match last {
            Some(i) if normal[i] < 0.0 => -normal,
            _ => normal,
        };
        Self {
            normal: n,
            geometry,
        }
    }

    /// The copy `{x3 = 0}` of the hyperbolic plane.
    pub fn horizontal(geometry: Geometry) -> Self {
        Self::new(V4::new(0.0, 0.0, 0.0, 1.0), geometry)
    }

    /// Canonical covector.
    pub fn normal(&self) -> &V4 {
        &self.normal
    }

    /// Geometry tag.
    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    /// Same plane with another tag.
    pub fn with_geometry(&self, geometry: Geometry) -> Self {
        Self {
            normal: self.normal,
            geometry,
        }
    }

    /// Value of the dual pairing on a point, after scaling both to unit length.
    pub fn pairing(&self, x: &V4) -> f64 {
        self.normal.normalize().dot(&x.normalize())
    }

    /// Incidence test.
    pub fn contains_point(&self, p: &ProjectivePoint, tol: f64) -> bool {
        self.pairing(p.rep()).abs() < tol
    }

    /// `n^T J^{-1} n` for Hyp and AdS, where `J^{-1} = J`; for HP the
    /// squared last coordinate, which vanishes exactly on planes containing a fiber.
    pub fn dual_norm(&self) -> f64 {
        let n = self.normal;
        match self.geometry {
            Geometry::HP => n[3] * n[3],
            g => g.pairing(&n, &n),
        }
    }

    /// Whether the plane meets the model in a spacelike (Riemannian) surface.
    pub fn is_spacelike(&self) -> bool {
        let scale = self.normal.norm_squared();
        match self.geometry {
            Geometry::Hyp => self.dual_norm() > EPS_GEOM * scale,
            Geometry::AdS => self.dual_norm() < -EPS_GEOM * scale,
            Geometry::HP => self.dual_norm() > EPS_GEOM * scale,
        }
    }

    /// For a spacelike HP plane, the Minkowski point `y` with plane `P_y`.
    pub fn hp_dual_point(&self) -> Result<V3> {
        if self.geometry != Geometry::HP || !self.is_spacelike() {
            return Err(Error::DegeneratePlane(self.geometry));
        }
        let n = self.normal;
        Ok(-(j3() * V3::new(n[0], n[1], n[2])) / n[3])
    }

    /// Approximate equality of planes as projective points of the dual space.
    pub fn proj_eq(&self, other: &Plane, tol: f64) -> bool {
        wedge_norm(&self.normal.normalize(), &other.normal.normalize()) < tol
    }
}

/// Dihedral angle between two planes meeting in the model.
pub fn angle_between_planes(p: &Plane, q: &Plane) -> Result<f64> {
    if p.geometry != q.geometry {
        return Err(Error::TagMismatch(p.geometry, q.geometry));
    }
    let tag = p.geometry;
    match tag {
        Geometry::Hyp | Geometry::AdS => {
            let (n, m) = (p.normal, q.normal);
            let c = tag.pairing(&n, &m).abs()
                / (tag.pairing(&n, &n) * tag.pairing(&m, &m)).abs().sqrt();
            if tag == Geometry::Hyp {
                if c > 1.0 + 1e-9 {
                    return Err(Error::NonIntersecting);
                }
                Ok(c.min(1.0).acos())
            } else {
                if !(p.is_spacelike() && q.is_spacelike()) || c < 1.0 - 1e-9 {
                    return Err(Error::NonIntersecting);
                }
                Ok(c.max(1.0).acosh())
            }
        }
        Geometry::HP => {
            let d = p.hp_dual_point()? - q.hp_dual_point()?;
            let q2 = minkowski(&d, &d);
            if q2 < -EPS_GEOM {
                return Err(Error::HpNotSpacelikeDifference);
            }
            Ok(q2.max(0.0).sqrt())
        }
    }
}

/// Oriented geodesic of the hyperbolic plane, encoded by a unit spacelike
/// normal `eta` in `R^{1,2}`.
///
/// The geodesic is `{z : <eta, (1, z)> = 0}` in the Klein disk. Its
/// orientation is the direction `u` for which `(p, u, eta)` is a positive
/// frame at any of its points `p`; reversing the orientation negates `eta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacelikeGeodesicH2 {
    normal: V3,
}

impl SpacelikeGeodesicH2 {
    /// Geodesic with the given spacelike normal, rescaled to unit length.
    pub fn new(normal: V3) -> Result<Self> {
        let q = minkowski(&normal, &normal);
        if !(q > EPS_GEOM * normal.norm_squared()) {
            return Err(Error::BadAxisType);
        }
        Ok(Self {
            normal: normal / q.sqrt(),
        })
    }

    /// Geodesic with a normal that is already of unit length up to rounding,
    /// such as the image of a unit normal under a Lorentz matrix.
    ///
    /// Far from the origin the entries of such a normal are large and
    /// recomputing its length would amplify rounding errors, so no rescaling
    /// is done.
    pub fn from_unit_normal(normal: V3) -> Self {
        Self { normal }
    }

    /// The standard geodesic `{[cosh s, sinh s, 0]}` oriented by increasing `s`.
    pub fn standard() -> Self {
        Self {
            normal: V3::new(0.0, 0.0, 1.0),
        }
    }

    /// Oriented geodesic from the ideal point `r` to the ideal point `a`,
    /// both given as future null vectors.
    pub fn from_endpoints(r: &V3, a: &V3) -> Result<Self> {
        let k = -2.0 * minkowski(r, a);
        if !(k > EPS_GEOM * r.norm() * a.norm()) {
            return Err(Error::BadAxisType);
        }
        let p = (r + a) / k.sqrt();
        let u = (a - r) / k.sqrt();
        let eta = lorentz_cross(&p, &u);
        let g = Self::new(eta)?;
        Ok(if M3::from_columns(&[p, u, g.normal]).determinant() < 0.0 {
            g.reversed()
        } else {
            g
        })
    }

    /// Unit normal `eta`.
    pub fn normal(&self) -> &V3 {
        &self.normal
    }

    /// Same geodesic with opposite orientation.
    pub fn reversed(&self) -> Self {
        Self {
            normal: -self.normal,
        }
    }

    /// Point of the geodesic closest to the disk center, on the hyperboloid.
    pub fn closest_point(&self) -> V3 {
        let e0 = V3::new(1.0, 0.0, 0.0);
        let p = e0 + self.normal * self.normal[0];
        p / (-minkowski(&p, &p)).sqrt()
    }

    /// Positive frame `(p, u, eta)` in `SO_0(1,2)` with `p` the closest point
    /// and `u` the oriented unit tangent at `p`.
    pub fn frame(&self) -> M3 {
        let p = self.closest_point();
        let mut u = lorentz_cross(&self.normal, &p);
        u /= minkowski(&u, &u).sqrt();
        let f = M3::from_columns(&[p, u, self.normal]);
        if f.determinant() < 0.0 {
            M3::from_columns(&[p, -u, self.normal])
        } else {
            f
        }
    }

    /// Ideal endpoints `(start, end)` as future null vectors.
    pub fn endpoints(&self) -> (V3, V3) {
        let f = self.frame();
        let p = f.column(0).into_owned();
        let u = f.column(1).into_owned();
        (p - u, p + u)
    }

    /// Image under a Lorentz transformation in `SO_0(1,2)`.
    pub fn transformed(&self, l: &M3) -> Self {
        Self {
            normal: l * self.normal,
        }
    }

    /// Signed side function `<eta, (1, z)>`.
    pub fn side(&self, z: &V2) -> f64 {
        minkowski(&self.normal, &affine_lift(z))
    }

    /// Hyperbolic distance from a disk point to the geodesic.
    pub fn distance(&self, z: &V2) -> f64 {
        minkowski(&self.normal, &hyperboloid_lift(z)).abs().asinh()
    }

    /// Whether two geodesics coincide as unoriented sets.
    pub fn same_set(&self, other: &Self, tol: f64) -> bool {
        (self.normal - other.normal).amax() < tol || (self.normal + other.normal).amax() < tol
    }
}

/// Position relative to a horosphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HoroPosition {
    /// Pairing above the level.
    Inside,
    /// Pairing equal to the level within tolerance.
    OnHorosphere,
    /// Pairing below the level.
    Outside,
}

/// Horoball `{x : <x, p> > a}` around an ideal point `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Horoball {
    /// Null vector of the active form.
    pub ideal: V4,
    /// Level `a < 0`.
    pub level: f64,
    /// Active geometry.
    pub geometry: Geometry,
}

impl Horoball {
    /// Checks `q(p) = 0`, `a < 0` and, for HP, that `p` is not the fiber direction.
    pub fn new(ideal: V4, level: f64, geometry: Geometry) -> Result<Self> {
        let scale = ideal.norm_squared();
        if scale == 0.0 {
            return Err(Error::ZeroVector);
        }
        let fiber = ideal.fixed_rows::<3>(0).norm_squared() < EPS_GEOM * scale;
        if geometry.form(&ideal).abs() > EPS_GEOM * scale
            || (geometry == Geometry::HP && fiber)
            || !(level < 0.0)
        {
            return Err(Error::NotInSpace(geometry));
        }
        Ok(Self {
            ideal,
            level,
            geometry,
        })
    }

    /// Rescales the ideal vector so that `reference` has pairing `-1`.
    pub fn normalized_at(
        ideal: V4,
        reference: &ProjectivePoint,
        level: f64,
        geometry: Geometry,
    ) -> Result<Self> {
        let x = reference.normalized(geometry);
        let c = geometry.pairing(&x, &ideal);
        if c.abs() < EPS_GEOM {
            return Err(Error::NotInSpace(geometry));
        }
        Self::new(-ideal / c, level, geometry)
    }

    /// Compares the pairing of the unit lift of `p` with the level.
    pub fn classify(&self, p: &ProjectivePoint) -> Result<HoroPosition> {
        if contains(self.geometry, p) != Containment::Interior {
            return Err(Error::NotInSpace(self.geometry));
        }
        let x = p.normalized(self.geometry);
        let c = self.geometry.pairing(&x, &self.ideal);
        Ok(
            if (c - self.level).abs() < EPS_GEOM * (1.0 + self.level.abs()) {
                HoroPosition::OnHorosphere
            } else if c > self.level {
                HoroPosition::Inside
            } else {
                HoroPosition::Outside
            },
        )
    }
}
