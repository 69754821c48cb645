//! Error type shared by every module of the crate.

use thiserror::Error;

use crate::geometry::Geometry;

/// Failures reported by geometric constructions, enumeration and optimization.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A projective point was given by the zero vector.
    #[error("zero vector does not represent a projective point")]
    ZeroVector,

    /// A point does not lie in the model region required by the operation.
    #[error("point is not in the interior of {0:?}")]
    NotInSpace(Geometry),

    /// The Minkowski part of an HP point is not timelike.
    #[error("Minkowski part of the point is not timelike")]
    DegenerateDirection,

    /// Two planes do not meet inside the model.
    #[error("planes do not intersect in the model")]
    NonIntersecting,

    /// The difference of two HP dual points is not spacelike.
    #[error("difference of dual points is not spacelike")]
    HpNotSpacelikeDifference,

    /// Operands carry different geometry tags.
    #[error("geometry mismatch: {0:?} vs {1:?}")]
    TagMismatch(Geometry, Geometry),

    /// A rotation axis of the wrong causal type.
    #[error("axis is not a spacelike geodesic of the hyperbolic plane")]
    BadAxisType,

    /// The isometry is not a rotation about the requested axis.
    #[error("isometry is not a rotation about the axis (defect {0:.3e})")]
    NotARotationAboutAxis(f64),

    /// A plane that is not spacelike (AdS) or contains a fiber (HP).
    #[error("plane is degenerate for {0:?}: no unique reflection")]
    DegeneratePlane(Geometry),

    /// The plane is too far from the horizontal plane for normalization.
    #[error("plane makes angle {0:.3} with the horizontal plane (limit pi/4)")]
    PlaneTooFar(f64),

    /// The point does not lie on the plane it is supposed to lie on.
    #[error("point is off the plane (pairing {0:.3e})")]
    PointOffPlane(f64),

    /// Trace coordinates violating the Fricke relation or the bound x, y, z > 2.
    #[error("bad trace coordinates ({0}, {1}, {2})")]
    BadTraces(f64, f64, f64),

    /// Generators that do not form a punctured-torus pair.
    #[error("bad generators: {0}")]
    BadGenerators(String),

    /// A word containing letters outside {A, B, a, b}.
    #[error("bad word {0:?}")]
    BadWord(String),

    /// A curve that is not represented by a hyperbolic element.
    #[error("element is not hyperbolic (|trace| = {0:.6})")]
    NotHyperbolic(f64),

    /// A multicurve violating the component requirements.
    #[error("bad multicurve: {0}")]
    BadMulticurve(String),

    /// A segment endpoint lies on a leaf of the multicurve.
    #[error("segment endpoint lies on a leaf (distance {0:.3e})")]
    EndpointOnLeaf(f64),

    /// The leaf enumeration did not terminate within its budget.
    #[error("leaf enumeration exceeded its budget of {0} steps")]
    EnumerationBudgetExceeded(usize),

    /// The optimizer stopped before meeting its tolerance.
    #[error("optimizer did not converge: {0}")]
    NoConvergence(String),

    /// Extrapolation needs more grid points on one side.
    #[error("extrapolation needs at least {needed} grid points per side, got {got}")]
    InsufficientGrid {
        /// Minimum number of points.
        needed: usize,
        /// Number supplied.
        got: usize,
    },

    /// A unit tangent vector that is not tangent or not unit.
    #[error("tangent vector is not a unit tangent at the point")]
    BadTangent,

    /// An HP aligner whose linear part is not the identity.
    #[error("aligner linear part is not the identity (defect {0:.3e})")]
    BadAligner(f64),

    /// A face point lying on a leaf of the bending multicurve.
    #[error("face point {0} lies on a leaf")]
    FacePointOnLeaf(usize),

    /// The base representation does not commute with a face reflection.
    #[error("face stabilizer {word} does not commute with the face reflection (residual {residual:.3e})")]
    CommutationFailure {
        /// Word that failed.
        word: String,
        /// Norm of the commutator defect.
        residual: f64,
    },

    /// Malformed configuration.
    #[error("config error: {0}")]
    Config(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
