//! Fixtures shared by the benchmarks.

use halfpipe::bending::{default_base_point, BendingContext, Sign};
use halfpipe::fuchsian::{FuchsianGroup, TeichPoint, WeightedMulticurve};
use halfpipe::Geometry;

/// Punctured-torus group with all three traces equal to 3.
pub fn symmetric_group() -> FuchsianGroup {
    FuchsianGroup::from_traces(&TeichPoint::new(3.0, 3.0, 3.0).expect("valid traces"))
        .expect("valid group")
}

/// Context bending the symmetric group along the `A` curve with weight one.
pub fn a_curve_context(geometry: Geometry, scale: f64) -> BendingContext {
    let gp = symmetric_group();
    let mc = WeightedMulticurve::single("A", 1.0).expect("valid multicurve");
    BendingContext::new(
        &gp,
        &mc,
        default_base_point(&gp),
        Sign::Positive,
        geometry,
        scale,
    )
    .expect("valid context")
}
