use criterion::{black_box, criterion_group, criterion_main, Criterion};
use halfpipe::doubling::meridian_cone_angle;
use halfpipe::fuchsian::{WeightedMulticurve, Word};
use halfpipe::isometry::rotation;
use halfpipe::transition::{default_grid, extrapolate_limit, holonomy_family};
use halfpipe::{Geometry, SpacelikeGeodesicH2};
use halfpipe_bench::{a_curve_context, symmetric_group};

fn isometry_kernels(c: &mut Criterion) {
    let axis = SpacelikeGeodesicH2::standard();
    c.bench_function("rotation_compose_64", |b| {
        b.iter(|| {
            let r = rotation(Geometry::Hyp, &axis, 0.3);
            let mut m = r.clone();
            for _ in 0..64 {
                m = m.compose(&r).expect("same geometry");
            }
            black_box(m)
        })
    });
}

fn leaf_kernels(c: &mut Criterion) {
    let gp = symmetric_group();
    let mc = WeightedMulticurve::single("A", 1.0).expect("valid multicurve");
    c.bench_function("leaf_set_new", |b| {
        b.iter(|| black_box(halfpipe::fuchsian::LeafSet::new(&gp, &mc).expect("leaves")))
    });
    let ctx = a_curve_context(Geometry::Hyp, 0.2);
    let w = Word::parse("ABabAB").expect("valid word");
    c.bench_function("holonomy_len6", |b| {
        b.iter(|| black_box(ctx.holonomy(&w).expect("holonomy")))
    });
}

fn transition_kernels(c: &mut Criterion) {
    let ctx = a_curve_context(Geometry::HP, 1.0);
    let w = Word::parse("AB").expect("valid word");
    let grid = default_grid();
    c.bench_function("holonomy_family_extrapolation", |b| {
        b.iter(|| {
            black_box(
                extrapolate_limit(&holonomy_family(&ctx, &w, &grid).expect("family"))
                    .expect("limit"),
            )
        })
    });
    c.bench_function("meridian_cone_angle", |b| {
        b.iter(|| black_box(meridian_cone_angle(&ctx, 0, 0.1).expect("angle")))
    });
}

criterion_group!(benches, isometry_kernels, leaf_kernels, transition_kernels);
criterion_main!(benches);
