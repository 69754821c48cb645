use approx::assert_abs_diff_eq;
use halfpipe::bending::{BendingContext, Sign};
use halfpipe::doubling::{
    cone_angle_table, cusp_face_point, cusp_stabilizer_check, double_holonomy, expected_cone_angle,
    face_stabilizer_words, meridian_cone_angle, meridian_limit_angle, ConvexCorePair,
    DoubledLetter, FacePoint,
};
use halfpipe::fuchsian::{FuchsianGroup, Letter, TeichPoint, WeightedMulticurve, Word};
use halfpipe::geometry::{radial_project, V2};
use halfpipe::isometry::projective_distance;
use halfpipe::transition::default_grid;
use halfpipe::{Error, Geometry, Isometry};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

const GEOMETRIES: [Geometry; 3] = [Geometry::Hyp, Geometry::AdS, Geometry::HP];

fn symmetric_group() -> FuchsianGroup {
    FuchsianGroup::from_traces(&TeichPoint::new(3.0, 3.0, 3.0).unwrap()).unwrap()
}

fn kerckhoff_group() -> FuchsianGroup {
    let r = 8f64.sqrt();
    FuchsianGroup::from_traces(&TeichPoint::new(r, r, 4.0).unwrap()).unwrap()
}

fn base_point(gp: &FuchsianGroup) -> V2 {
    let d = gp.domain();
    let c = radial_project(&d.center);
    c + (radial_project(&d.vertices[0]) - c) * 0.3
}

fn context(
    gp: &FuchsianGroup,
    mc: &str,
    weight: f64,
    sign: Sign,
    tag: Geometry,
    scale: f64,
) -> BendingContext {
    let mc = WeightedMulticurve::single(mc, weight).unwrap();
    BendingContext::new(gp, &mc, base_point(gp), sign, tag, scale).unwrap()
}

fn random_word(rng: &mut ChaCha8Rng, len: usize) -> Word {
    let letters: Vec<Letter> = (0..len)
        .map(|_| Letter::ALL[rng.random_range(0..4)])
        .collect();
    Word::from_letters(&letters)
}

/// Translates of the base point lying in pairwise distinct lifted faces.
fn other_face_points(ctx: &BendingContext, n: usize) -> Vec<V2> {
    let mut out: Vec<V2> = Vec::new();
    for len in 1..=3 {
        for w in Word::all_of_length(len) {
            let z = ctx.translate_base_point(&w);
            let fresh = std::iter::once(ctx.base_point())
                .chain(out.iter())
                .all(|y| !ctx.leaves().crossings(y, &z).unwrap().is_empty());
            if fresh {
                out.push(z);
            }
            if out.len() == n {
                return out;
            }
        }
    }
    panic!("only {} faces found", out.len())
}

fn faces(ctx: &BendingContext, extra: usize) -> Vec<FacePoint> {
    let mut f = vec![FacePoint::upper(*ctx.base_point())];
    f.extend(
        other_face_points(ctx, extra)
            .into_iter()
            .map(FacePoint::upper),
    );
    f
}

fn dist(a: &Isometry, b: &Isometry) -> f64 {
    projective_distance(a.matrix(), b.matrix())
}

#[test]
fn unbent_base_has_equal_reflections_and_trivial_generators() {
    let gp = symmetric_group();
    let ctx = context(&gp, "A", 1.0, Sign::Positive, Geometry::Hyp, 0.0);
    let pair = ConvexCorePair::upper_only(ctx.clone());
    let d = double_holonomy(&pair, &faces(&ctx, 3), 2).unwrap();
    for i in 0..d.faces().len() {
        assert!(dist(&d.reflections()[i], &d.reflections()[0]) < 1e-12);
        assert!(dist(&d.e(i).unwrap(), &Isometry::identity(Geometry::Hyp)) < 1e-12);
    }
}

#[test]
fn restriction_to_the_surface_group_is_the_bent_holonomy() {
    let gp = symmetric_group();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for tag in GEOMETRIES {
        let ctx = context(&gp, "A", 1.0, Sign::Positive, tag, 0.2);
        let d =
            double_holonomy(&ConvexCorePair::upper_only(ctx.clone()), &faces(&ctx, 2), 2).unwrap();
        for _ in 0..10 {
            let w = random_word(&mut rng, 4);
            let g = d.eval(&[DoubledLetter::Surface(w.clone())]).unwrap();
            assert_eq!(g.matrix(), ctx.holonomy(&w).unwrap().matrix());
        }
    }
}

#[test]
fn reflections_are_involutions_and_generators_invert_by_reversal() {
    let gp = symmetric_group();
    for tag in GEOMETRIES {
        let ctx = context(&gp, "A", 1.0, Sign::Positive, tag, 0.2);
        let d =
            double_holonomy(&ConvexCorePair::upper_only(ctx.clone()), &faces(&ctx, 3), 2).unwrap();
        let id = Isometry::identity(tag);
        for (i, r) in d.reflections().iter().enumerate() {
            assert!(dist(&r.compose(r).unwrap(), &id) < 1e-12, "{tag:?} r{i}");
            let p = d.planes()[i];
            assert!(r.apply_plane(&p).unwrap().proj_eq(&p, 1e-12));
            let back = d.reflections()[0].compose(r).unwrap();
            assert!(dist(&d.e(i).unwrap().inverse(), &back) < 1e-12);
            let ee = d
                .eval(&[DoubledLetter::E(i), DoubledLetter::EInv(i)])
                .unwrap();
            assert!(dist(&ee, &id) < 1e-12);
        }
    }
}

#[test]
fn reflections_are_equivariant_under_the_holonomy() {
    let gp = symmetric_group();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for tag in GEOMETRIES {
        let ctx = context(&gp, "A", 1.0, Sign::Positive, tag, 0.2);
        let d =
            double_holonomy(&ConvexCorePair::upper_only(ctx.clone()), &faces(&ctx, 2), 2).unwrap();
        for _ in 0..10 {
            let w = random_word(&mut rng, 3);
            for i in 0..d.faces().len() {
                let r = d.conjugation_residual(i, &w).unwrap();
                assert!(r < 1e-9, "{tag:?} face {i} word {w}: {r:e}");
            }
        }
    }
}

#[test]
fn face_stabilizers_commute_and_satisfy_the_extension_relation() {
    let gp = symmetric_group();
    for tag in GEOMETRIES {
        let ctx = context(&gp, "A", 1.0, Sign::Positive, tag, 0.2);
        let d =
            double_holonomy(&ConvexCorePair::upper_only(ctx.clone()), &faces(&ctx, 2), 3).unwrap();
        assert!(!d.stabilizers()[0].is_empty());
        for (i, words) in d.stabilizers().iter().enumerate() {
            for w in words {
                let r = d.relation_residual(i, w).unwrap();
                assert!(r < 1e-9, "{tag:?} face {i} word {w}: {r:e}");
            }
        }
    }
}

#[test]
fn stabilizer_words_avoid_the_leaves() {
    let gp = symmetric_group();
    let ctx = context(&gp, "A", 1.0, Sign::Positive, Geometry::HP, 1.0);
    let pair = ConvexCorePair::upper_only(ctx.clone());
    let face = FacePoint::upper(*ctx.base_point());
    let words = face_stabilizer_words(&pair, &face, 3).unwrap();
    for w in &words {
        let g = ctx.holonomy(w).unwrap();
        assert!(dist(&g, &ctx.sigma_embed(w)) < 1e-12, "{w}");
    }
    assert!(!words.is_empty());
}

#[test]
fn face_points_must_be_off_the_leaves_and_in_distinct_faces() {
    let gp = symmetric_group();
    let ctx = context(&gp, "A", 1.0, Sign::Positive, Geometry::Hyp, 0.2);
    let pair = ConvexCorePair::upper_only(ctx.clone());
    let on_leaf = radial_project(&ctx.leaves().axes()[0].closest_point());
    let f = [
        FacePoint::upper(*ctx.base_point()),
        FacePoint::upper(on_leaf),
    ];
    assert!(matches!(
        double_holonomy(&pair, &f, 1),
        Err(Error::FacePointOnLeaf(1))
    ));
    let near = *ctx.base_point() + V2::new(1e-3, 0.0);
    let f = [FacePoint::upper(*ctx.base_point()), FacePoint::upper(near)];
    assert!(matches!(
        double_holonomy(&pair, &f, 1),
        Err(Error::Config(_))
    ));
    let f = [FacePoint::lower(*ctx.base_point())];
    assert!(matches!(
        double_holonomy(&pair, &f, 1),
        Err(Error::Config(_))
    ));
}

#[test]
fn meridian_cone_angles_match_the_closed_forms() {
    let gp = symmetric_group();
    for a in [1.0, 0.7] {
        let ctx = context(&gp, "A", a, Sign::Positive, Geometry::HP, 1.0);
        for t in [0.2, 0.1, 0.05, 0.01] {
            let hyp = meridian_cone_angle(&ctx, 0, t).unwrap();
            assert_abs_diff_eq!(hyp, 2.0 * (PI - t * a), epsilon = 1e-9);
            let ads = meridian_cone_angle(&ctx, 0, -t).unwrap();
            assert_abs_diff_eq!(ads, -2.0 * t * a, epsilon = 1e-9);
        }
        assert_abs_diff_eq!(
            meridian_cone_angle(&ctx, 0, 0.0).unwrap(),
            -2.0 * a,
            epsilon = 1e-9
        );
    }
}

#[test]
fn cone_angle_row_for_unit_weight_at_one_tenth() {
    let gp = symmetric_group();
    let ctx = context(&gp, "A", 1.0, Sign::Positive, Geometry::HP, 1.0);
    let rows = cone_angle_table(&ctx, &[0.1]).unwrap();
    assert_eq!(rows.len(), 1);
    assert_abs_diff_eq!(rows[0].angle, 6.083185307179586, epsilon = 1e-9);
    assert_abs_diff_eq!(
        rows[0].expected,
        expected_cone_angle(1.0, 0.1),
        epsilon = 0.0
    );
}

#[test]
fn meridian_limit_is_the_half_pipe_rotation() {
    let gp = symmetric_group();
    let a = 1.3;
    let ctx = context(&gp, "A", a, Sign::Positive, Geometry::HP, 1.0);
    let (theta, report) = meridian_limit_angle(&ctx, 0, &default_grid()).unwrap();
    assert_abs_diff_eq!(theta, -2.0 * a, epsilon = 1e-6);
    assert!(report.two_sided_gap < 1e-6);
}

#[test]
fn hyperbolic_meridian_requires_a_small_scale() {
    let gp = symmetric_group();
    let ctx = context(&gp, "A", 2.0, Sign::Positive, Geometry::HP, 1.0);
    assert!(matches!(
        meridian_cone_angle(&ctx, 0, 2.0),
        Err(Error::Config(_))
    ));
    assert!(matches!(
        meridian_cone_angle(&ctx, 3, 0.1),
        Err(Error::Config(_))
    ));
}

/// Convex-core pair over the Kerckhoff point with both base points in the cusp face.
fn cusp_pair(tag: Geometry, scale: f64) -> (ConvexCorePair, V2) {
    let gp = kerckhoff_group();
    let up = context(&gp, "A", 1.0, Sign::Positive, tag, scale);
    let lo = context(&gp, "B", 1.0, Sign::Negative, tag, scale);
    let probe = ConvexCorePair::new(up.clone(), lo.clone()).unwrap();
    let c = gp.cusp_words()[0].clone();
    let x = cusp_face_point(&probe, &c).unwrap();
    let up =
        BendingContext::from_leaves(up.leaves().clone(), x, Sign::Positive, tag, scale).unwrap();
    let lo =
        BendingContext::from_leaves(lo.leaves().clone(), x, Sign::Negative, tag, scale).unwrap();
    (ConvexCorePair::new(up, lo).unwrap(), x)
}

#[test]
fn cusp_stabilizer_is_rank_two_parabolic() {
    for tag in GEOMETRIES {
        for scale in [0.0, 0.01] {
            let (pair, x) = cusp_pair(tag, scale);
            assert!(pair.fit_residual() < 1e-10);
            let d = double_holonomy(&pair, &[FacePoint::upper(x), FacePoint::lower(x)], 2).unwrap();
            let c = pair.upper().group().cusp_words()[0].clone();
            let rep = cusp_stabilizer_check(&d, &c, 1).unwrap();
            if scale == 0.0 {
                // Without bending both faces lie in the same plane and e is trivial.
                assert!(rep.commutator_residual < 1e-12);
                continue;
            }
            assert!(rep.passed, "{tag:?} {scale}: {rep:?}");
        }
    }
}
