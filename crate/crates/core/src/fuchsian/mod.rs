//! Punctured-torus Fuchsian groups, weighted multicurves and length functions.
//!
//! A group is given by a generator pair `(A, B)` in `SL(2, R)` with
//! `tr [A, B] = -2`. It acts on the hyperbolic plane through the adjoint map
//! `SL(2, R) -> SO_0(1, 2)`, which identifies `R^{1,2}` with symmetric 2x2
//! matrices `X = [[x0 + x1, x2], [x2, x0 - x1]]` acted on by `X -> g X g^T`.
//! Under this identification the point `u + iv` of the upper half-plane
//! corresponds to the hyperboloid point
//! `((|tau|^2 + 1) / 2v, (|tau|^2 - 1) / 2v, u / v)`.

mod kerckhoff;
mod leaves;
mod word;

pub use kerckhoff::{
    chart_from_teich, filling_report, kerckhoff_point, teich_from_chart, FillingReport,
    KerckhoffOptions, KerckhoffResult,
};
pub use leaves::{
    leaves_crossing, leaves_crossing_enumerated, locate_point, LeafCrossing, LeafSet,
};
pub use word::{Letter, Word};

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{lorentz_cross, minkowski, SpacelikeGeodesicH2, M3, V3};

/// 2x2 real matrices.
pub type M2 = Matrix2<f64>;

/// Trace coordinates `(x, y, z) = (tr A, tr B, tr AB)` of a punctured-torus structure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TeichPoint {
    /// Trace of `A`.
    pub x: f64,
    /// Trace of `B`.
    pub y: f64,
    /// Trace of `AB`.
    pub z: f64,
}

impl TeichPoint {
    /// Validated trace coordinates.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let tp = Self { x, y, z };
        if !(x > 2.0 && y > 2.0 && z > 2.0) || tp.fricke_defect().abs() > 1e-9 * (1.0 + x * y * z) {
            return Err(Error::BadTraces(x, y, z));
        }
        Ok(tp)
    }

    /// `x^2 + y^2 + z^2 - xyz`, which vanishes on the Teichmüller space of the punctured torus.
    pub fn fricke_defect(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z - self.x * self.y * self.z
    }
}

/// Image of `g` in `SO_0(1, 2)` under the adjoint map.
pub fn sl2_to_so12(g: &M2) -> M3 {
    let mut l = M3::zeros();
    let basis = [
        V3::new(1.0, 0.0, 0.0),
        V3::new(0.0, 1.0, 0.0),
        V3::new(0.0, 0.0, 1.0),
    ];
    for (k, e) in basis.iter().enumerate() {
        let x = M2::new(e[0] + e[1], e[2], e[2], e[0] - e[1]);
        let y = g * x * g.transpose();
        l[(0, k)] = (y[(0, 0)] + y[(1, 1)]) / 2.0;
        l[(1, k)] = (y[(0, 0)] - y[(1, 1)]) / 2.0;
        l[(2, k)] = y[(0, 1)];
    }
    l
}

/// Hyperboloid point of the upper half-plane point `u + iv`.
pub fn upper_half_plane_point(u: f64, v: f64) -> V3 {
    let r2 = u * u + v * v;
    V3::new((r2 + 1.0) / (2.0 * v), (r2 - 1.0) / (2.0 * v), u / v)
}

/// Future null vector of the boundary point with homogeneous coordinates `(e1 : e2)`,
/// i.e. the real number `e1 / e2` or infinity.
pub fn boundary_point(e1: f64, e2: f64) -> V3 {
    V3::new(
        (e1 * e1 + e2 * e2) / 2.0,
        (e1 * e1 - e2 * e2) / 2.0,
        e1 * e2,
    )
}

/// Hyperbolic translation length `2 arccosh(|tr g| / 2)`, zero when `|tr g| <= 2`.
pub fn translation_length(g: &M2) -> f64 {
    let t = g.trace().abs() / 2.0;
    if t > 1.0 {
        2.0 * t.acosh()
    } else {
        0.0
    }
}

/// Oriented axis of a hyperbolic element, from its repelling to its attracting fixed point.
pub fn axis(g: &M2) -> Result<SpacelikeGeodesicH2> {
    let tr = g.trace();
    if tr.abs() <= 2.0 + 1e-12 {
        return Err(Error::NotHyperbolic(tr.abs()));
    }
    let disc = (tr * tr - 4.0).sqrt();
    let big = (tr + tr.signum() * disc) / 2.0;
    let small = 1.0 / big;
    let fixed = |mu: f64| {
        let v1 = (g[(0, 1)], mu - g[(0, 0)]);
        let v2 = (mu - g[(1, 1)], g[(1, 0)]);
        let (e1, e2) = if v1.0.hypot(v1.1) >= v2.0.hypot(v2.1) {
            v1
        } else {
            v2
        };
        boundary_point(e1, e2)
    };
    SpacelikeGeodesicH2::from_endpoints(&fixed(small), &fixed(big))
}

/// Hyperbolic distance between the hyperboloid points `p` and `q`.
pub fn hyperbolic_distance(p: &V3, q: &V3) -> f64 {
    (-minkowski(p, q)).max(1.0).acosh()
}

/// Normal of the geodesic through two ideal points, oriented from `r` to `a`.
pub(crate) fn chord_normal(r: &V3, a: &V3) -> V3 {
    lorentz_cross(r, a)
}

/// Punctured-torus Fuchsian group generated by `A` and `B`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuchsianGroup {
    generators: [M2; 2],
    lorentz: [M3; 4],
    sl2: [M2; 4],
    cusp_words: Vec<Word>,
    domain: FundamentalDomain,
}

/// Ideal quadrilateral with vertices `P, AP, ABP, BP`, where `P` is the
/// parabolic fixed point of `A^{-1} B^{-1} A B`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FundamentalDomain {
    /// Ideal vertices as future null vectors.
    pub vertices: [V3; 4],
    /// Side normals, with `<N, x> < 0` on the interior.
    pub normals: [V3; 4],
    /// Letter of the neighbouring tile across each side: the tile across
    /// side `k` of `g D` is `g L_k D`.
    pub neighbours: [Letter; 4],
    /// Interior point on the hyperboloid.
    pub center: V3,
}

impl FuchsianGroup {
    /// Group with the normal-form generators of the given trace coordinates:
    /// `A` diagonal with its larger eigenvalue first and `B` with positive
    /// off-diagonal entries.
    pub fn from_traces(tp: &TeichPoint) -> Result<Self> {
        let tp = TeichPoint::new(tp.x, tp.y, tp.z)?;
        let (a, b) = normal_form_generators(&tp);
        Self::from_generators(a, b)
    }

    /// Group generated by an explicit pair.
    pub fn from_generators(a: M2, b: M2) -> Result<Self> {
        for (name, g) in [("A", &a), ("B", &b)] {
            if (g.determinant() - 1.0).abs() > 1e-9 {
                return Err(Error::BadGenerators(format!(
                    "det {name} = {}",
                    g.determinant()
                )));
            }
            if g.trace().abs() <= 2.0 {
                return Err(Error::BadGenerators(format!("{name} is not hyperbolic")));
            }
        }
        let ai = inverse_sl2(&a);
        let bi = inverse_sl2(&b);
        let comm = a * b * ai * bi;
        if (comm.trace() + 2.0).abs() > 1e-9 {
            return Err(Error::BadGenerators(format!(
                "tr[A,B] = {} instead of -2",
                comm.trace()
            )));
        }
        let sl2 = [a, b, ai, bi];
        let lorentz = [
            sl2_to_so12(&a),
            sl2_to_so12(&b),
            sl2_to_so12(&ai),
            sl2_to_so12(&bi),
        ];
        let domain = build_domain(&sl2, &lorentz)?;
        Ok(Self {
            generators: [a, b],
            lorentz,
            sl2,
            cusp_words: vec![Word::parse("ABab")?],
            domain,
        })
    }

    /// The pair `(A, B)`.
    pub fn generators(&self) -> &[M2; 2] {
        &self.generators
    }

    /// Lorentz images of the generators.
    pub fn lorentz_generators(&self) -> [M3; 2] {
        [self.lorentz[0], self.lorentz[1]]
    }

    /// Words of the peripheral loops.
    pub fn cusp_words(&self) -> &[Word] {
        &self.cusp_words
    }

    /// The fundamental domain used by the tessellation walk.
    pub fn domain(&self) -> &FundamentalDomain {
        &self.domain
    }

    /// Trace coordinates of the group.
    pub fn teich_point(&self) -> TeichPoint {
        let [a, b] = self.generators;
        TeichPoint {
            x: a.trace(),
            y: b.trace(),
            z: (a * b).trace(),
        }
    }

    /// SL(2, R) matrix of a letter.
    pub fn letter_sl2(&self, l: Letter) -> &M2 {
        &self.sl2[l.index()]
    }

    /// Lorentz matrix of a letter.
    pub fn letter_lorentz(&self, l: Letter) -> &M3 {
        &self.lorentz[l.index()]
    }

    /// SL(2, R) value of a word.
    pub fn eval_sl2(&self, w: &Word) -> M2 {
        w.letters()
            .iter()
            .fold(M2::identity(), |acc, l| acc * self.sl2[l.index()])
    }

    /// Lorentz value of a word.
    pub fn eval_lorentz(&self, w: &Word) -> M3 {
        w.letters()
            .iter()
            .fold(M3::identity(), |acc, l| acc * self.lorentz[l.index()])
    }
}

fn inverse_sl2(g: &M2) -> M2 {
    M2::new(g[(1, 1)], -g[(0, 1)], -g[(1, 0)], g[(0, 0)])
}

fn normal_form_generators(tp: &TeichPoint) -> (M2, M2) {
    let (x, y, z) = (tp.x, tp.y, tp.z);
    let lam = (x + (x * x - 4.0).sqrt()) / 2.0;
    let a_mat = M2::new(lam, 0.0, 0.0, 1.0 / lam);
    let a = (z - y / lam) / (lam - 1.0 / lam);
    let d = y - a;
    let bc = a * d - 1.0;
    let c = bc.abs().sqrt();
    let b = if bc >= 0.0 { c } else { -c };
    (a_mat, M2::new(a, b, c, d))
}

/// Parabolic fixed point of `g` as a future null vector.
pub fn parabolic_fixed_point(g: &M2) -> V3 {
    // (g - I) has rank one for a parabolic with trace 2 (or -g for trace -2);
    // its kernel is spanned by the fixed eigenvector.
    let h = if g.trace() < 0.0 { -g } else { *g };
    let n = h - M2::identity();
    let r1 = (n[(0, 0)], n[(0, 1)]);
    let r2 = (n[(1, 0)], n[(1, 1)]);
    let (p, q) = if r1.0.hypot(r1.1) >= r2.0.hypot(r2.1) {
        r1
    } else {
        r2
    };
    boundary_point(-q, p)
}

fn build_domain(sl2: &[M2; 4], lorentz: &[M3; 4]) -> Result<FundamentalDomain> {
    let [a, b, ai, bi] = *sl2;
    let p = parabolic_fixed_point(&(ai * bi * a * b));
    let (la, lb) = (lorentz[0], lorentz[1]);
    let vertices = [p, la * p, la * lb * p, lb * p];
    let vertices = vertices.map(|v| v / v[0]);
    let angles = vertices.map(|v| v[2].atan2(v[1]));
    if !is_cyclic(&angles) {
        return Err(Error::BadGenerators(
            "fundamental quadrilateral is not embedded".into(),
        ));
    }
    let center: V3 = vertices.iter().sum();
    let center = center / (-minkowski(&center, &center)).sqrt();
    let mut normals = [V3::zeros(); 4];
    for k in 0..4 {
        let n = chord_normal(&vertices[k], &vertices[(k + 1) % 4]);
        let n = n / minkowski(&n, &n).sqrt();
        normals[k] = if minkowski(&n, &center) > 0.0 { -n } else { n };
    }
    Ok(FundamentalDomain {
        vertices,
        normals,
        neighbours: [Letter::BInv, Letter::A, Letter::B, Letter::AInv],
        center,
    })
}

/// Whether four angles are in cyclic order, in either direction.
fn is_cyclic(angles: &[f64; 4]) -> bool {
    let turn = |i: usize| {
        let d = angles[(i + 1) % 4] - angles[i];
        d.rem_euclid(2.0 * std::f64::consts::PI)
    };
    let total: f64 = (0..4).map(turn).sum();
    let two_pi = 2.0 * std::f64::consts::PI;
    (total - two_pi).abs() < 1e-9 || (total - 3.0 * two_pi).abs() < 1e-9
}

/// One component of a weighted multicurve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    /// Group word representing the curve.
    pub word: Word,
    /// Positive weight.
    pub weight: f64,
}

/// Weighted multicurve: disjoint simple closed curves with positive weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedMulticurve {
    /// Components.
    pub components: Vec<Component>,
}

impl WeightedMulticurve {
    /// Multicurve from `(word, weight)` pairs; checks letters and weights.
    pub fn new(components: Vec<(Word, f64)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::BadMulticurve("no components".into()));
        }
        for (w, a) in &components {
            if !(*a > 0.0) || !a.is_finite() {
                return Err(Error::BadMulticurve(format!(
                    "weight {a} of {w} is not positive"
                )));
            }
            if w.is_empty() {
                return Err(Error::BadMulticurve("empty word".into()));
            }
        }
        Ok(Self {
            components: components
                .into_iter()
                .map(|(word, weight)| Component { word, weight })
                .collect(),
        })
    }

    /// Single component.
    pub fn single(word: &str, weight: f64) -> Result<Self> {
        Self::new(vec![(Word::parse(word)?, weight)])
    }

    /// Same curves with all weights multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            components: self
                .components
                .iter()
                .map(|k| Component {
                    word: k.word.clone(),
                    weight: k.weight * c,
                })
                .collect(),
        }
    }

    /// Union of the components of two multicurves.
    pub fn union(&self, other: &Self) -> Self {
        Self {
            components: self
                .components
                .iter()
                .chain(other.components.iter())
                .cloned()
                .collect(),
        }
    }
}

/// Length `sum a_i l(alpha_i)` of a weighted multicurve at a point of Teichmüller space.
pub fn multicurve_length(tp: &TeichPoint, mc: &WeightedMulticurve) -> Result<f64> {
    let tp = TeichPoint::new(tp.x, tp.y, tp.z)?;
    let (a, b) = normal_form_generators(&tp);
    Ok(length_with_generators(&a, &b, mc))
}

pub(crate) fn length_with_generators(a: &M2, b: &M2, mc: &WeightedMulticurve) -> f64 {
    let mats = [*a, *b, inverse_sl2(a), inverse_sl2(b)];
    mc.components
        .iter()
        .map(|c| {
            let g = c
                .word
                .letters()
                .iter()
                .fold(M2::identity(), |acc, l| acc * mats[l.index()]);
            c.weight * translation_length(&g)
        })
        .sum()
}
