use approx::assert_abs_diff_eq;
use halfpipe::fuchsian::{
    axis, kerckhoff_point, leaves_crossing, leaves_crossing_enumerated, multicurve_length,
    sl2_to_so12, translation_length, FuchsianGroup, KerckhoffOptions, LeafSet, Letter, TeichPoint,
    WeightedMulticurve, Word, M2,
};
use halfpipe::geometry::{hyperboloid_lift, j3, minkowski, radial_project, V2, V3};
use halfpipe::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn symmetric_group() -> FuchsianGroup {
    FuchsianGroup::from_traces(&TeichPoint::new(3.0, 3.0, 3.0).unwrap()).unwrap()
}

fn random_word(rng: &mut ChaCha8Rng, len: usize) -> Word {
    let letters: Vec<Letter> = (0..len)
        .map(|_| Letter::ALL[rng.random_range(0..4)])
        .collect();
    Word::from_letters(&letters)
}

fn random_disk_point(rng: &mut ChaCha8Rng, radius: f64) -> V2 {
    let r = radius * rng.random::<f64>().sqrt();
    let th = rng.random::<f64>() * std::f64::consts::TAU;
    V2::new(r * th.cos(), r * th.sin())
}

/// Swaps the letters `A <-> B` and `a <-> b`.
fn swap_letters(w: &Word) -> Word {
    let l: Vec<Letter> = w
        .letters()
        .iter()
        .map(|l| match l {
            Letter::A => Letter::B,
            Letter::B => Letter::A,
            Letter::AInv => Letter::BInv,
            Letter::BInv => Letter::AInv,
        })
        .collect();
    Word::from_letters(&l)
}

#[test]
fn adjoint_map_is_a_homomorphism_into_so12() {
    let gp = symmetric_group();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let w = random_word(&mut rng, 6);
        let l = gp.eval_lorentz(&w);
        let direct = sl2_to_so12(&gp.eval_sl2(&w));
        assert!((l - direct).amax() < 1e-10 * (1.0 + l.amax()));
        assert!((l.transpose() * j3() * l - j3()).amax() < 1e-9 * l.amax() * l.amax());
    }
    for g in gp.lorentz_generators() {
        assert!((g.transpose() * j3() * g - j3()).amax() < 1e-11);
    }
}

#[test]
fn cusp_word_has_trace_minus_two() {
    for tp in [(3.0, 3.0, 3.0), (8f64.sqrt(), 8f64.sqrt(), 4.0)] {
        let gp = FuchsianGroup::from_traces(&TeichPoint::new(tp.0, tp.1, tp.2).unwrap()).unwrap();
        let c = gp.eval_sl2(&gp.cusp_words()[0]);
        assert_abs_diff_eq!(c.trace(), -2.0, epsilon = 1e-9);
    }
}

#[test]
fn swapped_traces_give_the_same_length_spectrum() {
    let p = halfpipe::fuchsian::teich_from_chart(0.4, 0.3);
    let g1 = FuchsianGroup::from_traces(&p).unwrap();
    let g2 = FuchsianGroup::from_traces(&TeichPoint::new(p.y, p.x, p.z).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let w = random_word(&mut rng, 5);
        let l1 = translation_length(&g1.eval_sl2(&w));
        let l2 = translation_length(&g2.eval_sl2(&swap_letters(&w)));
        assert_abs_diff_eq!(l1, l2, epsilon = 1e-9);
    }
}

#[test]
fn axis_reverses_under_inversion_and_is_equivariant() {
    let gp = symmetric_group();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let w = random_word(&mut rng, 3);
        let m = gp.eval_sl2(&w);
        if m.trace().abs() < 2.0 + 1e-6 {
            continue;
        }
        let ax = axis(&m).unwrap();
        let inv = axis(&m.try_inverse().unwrap()).unwrap();
        assert_abs_diff_eq!(*inv.normal(), -*ax.normal(), epsilon = 1e-9);
        let h = gp.eval_sl2(&random_word(&mut rng, 2));
        let conj = axis(&(h * m * h.try_inverse().unwrap())).unwrap();
        let pushed = ax.transformed(&sl2_to_so12(&h));
        assert!((conj.normal() - pushed.normal()).amax() < 1e-8 * (1.0 + pushed.normal().amax()));
    }
}

#[test]
fn translation_length_is_conjugation_invariant() {
    let gp = symmetric_group();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let a = gp.generators()[0];
    for _ in 0..100 {
        let h = gp.eval_sl2(&random_word(&mut rng, 3));
        let c = h * a * h.try_inverse().unwrap();
        assert_abs_diff_eq!(
            translation_length(&c),
            translation_length(&a),
            epsilon = 1e-10
        );
    }
}

#[test]
fn multicurve_length_examples() {
    let tp = TeichPoint::new(3.0, 3.0, 3.0).unwrap();
    let a1 = WeightedMulticurve::single("A", 1.0).unwrap();
    let a2 = WeightedMulticurve::single("A", 2.0).unwrap();
    let l1 = multicurve_length(&tp, &a1).unwrap();
    assert_abs_diff_eq!(l1, 2.0 * 1.5f64.acosh(), epsilon = 1e-12);
    assert_abs_diff_eq!(
        multicurve_length(&tp, &a2).unwrap(),
        2.0 * l1,
        epsilon = 1e-12
    );
    let p = halfpipe::fuchsian::teich_from_chart(0.2, -0.5);
    let swapped = TeichPoint::new(p.y, p.x, p.z).unwrap();
    let b1 = WeightedMulticurve::single("B", 1.0).unwrap();
    assert_abs_diff_eq!(
        multicurve_length(&p, &a1).unwrap(),
        multicurve_length(&swapped, &b1).unwrap(),
        epsilon = 1e-12
    );
}

#[test]
fn leaves_near_the_base_face_are_absent_or_single() {
    let gp = symmetric_group();
    let mc = WeightedMulticurve::single("A", 1.5).unwrap();
    let x = V2::new(0.01, 0.02);
    let y = V2::new(0.03, 0.04);
    assert!(leaves_crossing(&gp, &mc, &x, &y).unwrap().is_empty());
    // The axis of A is the x1-axis of the disk.
    let x = V2::new(0.05, -0.03);
    let y = V2::new(0.06, 0.03);
    let c = leaves_crossing(&gp, &mc, &x, &y).unwrap();
    assert_eq!(c.len(), 1);
    assert_eq!(c[0].weight, 1.5);
    let e = leaves_crossing_enumerated(&gp, &mc, &x, &y, 10).unwrap();
    assert_eq!(e.len(), 1);
    assert!(minkowski(c[0].leaf.normal(), &hyperboloid_lift(&y)) > 0.0);
}

#[test]
fn endpoint_on_leaf_is_rejected() {
    let gp = symmetric_group();
    let mc = WeightedMulticurve::single("A", 1.0).unwrap();
    let r = leaves_crossing(&gp, &mc, &V2::new(0.1, 0.0), &V2::new(0.1, 0.3));
    assert!(matches!(r, Err(Error::EndpointOnLeaf(_))));
}

#[test]
fn conjugate_or_crossing_components_are_rejected() {
    let gp = symmetric_group();
    let conj = WeightedMulticurve::new(vec![
        (Word::parse("A").unwrap(), 1.0),
        (Word::parse("BAb").unwrap(), 1.0),
    ])
    .unwrap();
    assert!(matches!(
        LeafSet::new(&gp, &conj),
        Err(Error::BadMulticurve(_))
    ));
    let crossing = WeightedMulticurve::new(vec![
        (Word::parse("A").unwrap(), 1.0),
        (Word::parse("B").unwrap(), 1.0),
    ])
    .unwrap();
    assert!(matches!(
        LeafSet::new(&gp, &crossing),
        Err(Error::BadMulticurve(_))
    ));
    let peripheral = WeightedMulticurve::single("ABab", 1.0).unwrap();
    assert!(matches!(
        LeafSet::new(&gp, &peripheral),
        Err(Error::BadMulticurve(_))
    ));
}

#[test]
fn walk_agrees_with_word_enumeration() {
    let gp = symmetric_group();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for word in ["A", "AB", "Ab"] {
        let mc = WeightedMulticurve::single(word, 1.0).unwrap();
        let leaves = LeafSet::new(&gp, &mc).unwrap();
        for _ in 0..15 {
            let x = random_disk_point(&mut rng, 0.8);
            let y = random_disk_point(&mut rng, 0.8);
            let walked = match leaves.crossings(&x, &y) {
                Ok(c) => c,
                Err(Error::EndpointOnLeaf(_)) => continue,
                Err(e) => panic!("{e}"),
            };
            let listed = leaves_crossing_enumerated(&gp, &mc, &x, &y, 12).unwrap();
            assert_eq!(walked.len(), listed.len(), "word {word}, x {x:?}, y {y:?}");
            for (a, b) in walked.iter().zip(listed.iter()) {
                assert!((a.leaf.normal() - b.leaf.normal()).amax() < 1e-7);
                assert_abs_diff_eq!(a.parameter, b.parameter, epsilon = 1e-9);
            }
        }
    }
}

#[test]
fn crossings_are_equivariant_under_generators() {
    let gp = symmetric_group();
    let mc = WeightedMulticurve::single("AB", 0.7).unwrap();
    let leaves = LeafSet::new(&gp, &mc).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let x = random_disk_point(&mut rng, 0.7);
        let y = random_disk_point(&mut rng, 0.7);
        let Ok(base) = leaves.crossings(&x, &y) else {
            continue;
        };
        for l in Letter::ALL {
            let g = *gp.letter_lorentz(l);
            let gx = radial_project(&(g * hyperboloid_lift(&x)));
            let gy = radial_project(&(g * hyperboloid_lift(&y)));
            let moved = leaves.crossings(&gx, &gy).unwrap();
            assert_eq!(moved.len(), base.len());
            for (a, b) in base.iter().zip(moved.iter()) {
                let n = g * a.leaf.normal();
                assert!((n - b.leaf.normal()).amax() < 1e-8 * (1.0 + n.amax()));
                assert_eq!(a.weight, b.weight);
            }
        }
    }
}

/// Number of lifts of `lambda` met by one period of the axis of `beta`,
/// counted with the cyclic order of ideal endpoints: a lift meets the axis
/// iff its endpoints separate the endpoints of the axis on the circle.
fn linking_count(gp: &FuchsianGroup, lambda: &Word, beta: &Word, shift: f64) -> usize {
    let ang = |v: &V3| v[2].atan2(v[1]);
    let between = |a: f64, lo: f64, hi: f64| {
        let span = (hi - lo).rem_euclid(std::f64::consts::TAU);
        (a - lo).rem_euclid(std::f64::consts::TAU) < span
    };
    let axb = axis(&gp.eval_sl2(beta)).unwrap();
    let (r, a) = axb.endpoints();
    let (ra, aa) = (ang(&r), ang(&a));
    let f = axb.frame();
    let (p, u) = (f.column(0).into_owned(), f.column(1).into_owned());
    let len = translation_length(&gp.eval_sl2(beta));
    let axl = axis(&gp.eval_sl2(lambda)).unwrap();
    let mut found: Vec<V3> = Vec::new();
    for n in 0..=8 {
        for w in Word::all_of_length(n) {
            let leaf = axl.transformed(&gp.eval_lorentz(&w));
            let (e1, e2) = leaf.endpoints();
            if between(ang(&e1), ra, aa) == between(ang(&e2), ra, aa) {
                continue;
            }
            // Arclength position of the intersection point along the axis.
            let nl = leaf.normal();
            let s = (-minkowski(nl, &p) / minkowski(nl, &u)).atanh();
            if !(s >= shift && s < shift + len) {
                continue;
            }
            let tol = 1e-7 * (1.0 + nl.amax());
            if !found
                .iter()
                .any(|m| (m - nl).amax() < tol || (m + nl).amax() < tol)
            {
                found.push(*nl);
            }
        }
    }
    found.len()
}

fn walked_count(gp: &FuchsianGroup, lambda: &Word, beta: &Word, shift: f64) -> usize {
    let mc = WeightedMulticurve::new(vec![(lambda.clone(), 1.0)]).unwrap();
    let axb = axis(&gp.eval_sl2(beta)).unwrap();
    let f = axb.frame();
    let (p, u) = (f.column(0).into_owned(), f.column(1).into_owned());
    let start = p * shift.cosh() + u * shift.sinh();
    let delta: f64 = 1e-6;
    let start = start * delta.cosh() + axb.normal() * delta.sinh();
    let end = gp.eval_lorentz(beta) * start;
    leaves_crossing(gp, &mc, &radial_project(&start), &radial_project(&end))
        .unwrap()
        .len()
}

#[test]
fn period_crossings_match_intersection_numbers() {
    // Intersection numbers of simple closed curves of slopes p/q and r/s on
    // the torus are |ps - qr|.
    let gp = symmetric_group();
    let cases = [
        ("A", "B", 1),
        ("B", "A", 1),
        ("AB", "Ab", 2),
        ("A", "AB", 1),
        ("AAB", "B", 2),
        ("AB", "AAB", 1),
    ];
    for (lambda, beta, i) in cases {
        let (l, b) = (Word::parse(lambda).unwrap(), Word::parse(beta).unwrap());
        assert_eq!(
            walked_count(&gp, &l, &b, 0.123),
            i,
            "{lambda} across {beta}"
        );
    }
}

#[test]
fn period_crossings_match_the_linking_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pairs = [("A", "B"), ("AB", "Ab"), ("AAB", "B"), ("B", "AB")];
    for k in 0..50 {
        let p = halfpipe::fuchsian::teich_from_chart(
            rng.random_range(-0.5..1.0),
            rng.random_range(-0.5..0.5),
        );
        let gp = FuchsianGroup::from_traces(&p).unwrap();
        let (lambda, beta) = pairs[k % pairs.len()];
        let (l, b) = (Word::parse(lambda).unwrap(), Word::parse(beta).unwrap());
        let shift = rng.random_range(-1.0..1.0);
        assert_eq!(
            walked_count(&gp, &l, &b, shift),
            linking_count(&gp, &l, &b, shift),
            "{lambda} across {beta}"
        );
    }
}

#[test]
fn kerckhoff_point_of_the_symmetric_pair() {
    let lambda = WeightedMulticurve::single("A", 1.0).unwrap();
    let mu = WeightedMulticurve::single("B", 1.0).unwrap();
    let opts = KerckhoffOptions::default();
    let seeds = [
        TeichPoint::new(3.0, 3.0, 3.0).unwrap(),
        halfpipe::fuchsian::teich_from_chart(1.0, 0.8),
        halfpipe::fuchsian::teich_from_chart(-0.5, -0.6),
    ];
    let results: Vec<_> = seeds
        .iter()
        .map(|s| kerckhoff_point(&lambda, &mu, s, &opts).unwrap())
        .collect();
    for r in &results {
        assert_abs_diff_eq!(r.point.x, r.point.y, epsilon = 1e-6);
        assert!(r.gradient_norm < 1e-7);
        assert!(r.filling.plausibly_filling);
        assert_abs_diff_eq!(r.point.x, results[0].point.x, epsilon = 1e-5);
    }
    // Scaling both weights leaves the minimizer unchanged.
    let r3 = kerckhoff_point(&lambda.scaled(3.0), &mu.scaled(3.0), &seeds[1], &opts).unwrap();
    assert_abs_diff_eq!(r3.point.x, results[0].point.x, epsilon = 1e-6);
    assert_abs_diff_eq!(r3.point.z, results[0].point.z, epsilon = 1e-6);
}

#[test]
fn kerckhoff_point_is_a_local_minimum() {
    let lambda = WeightedMulticurve::single("A", 1.0).unwrap();
    let mu = WeightedMulticurve::single("B", 2.0).unwrap();
    let r = kerckhoff_point(
        &lambda,
        &mu,
        &TeichPoint::new(3.0, 3.0, 3.0).unwrap(),
        &KerckhoffOptions::default(),
    )
    .unwrap();
    let f = |p: f64, s: f64| {
        let tp = halfpipe::fuchsian::teich_from_chart(p, s);
        multicurve_length(&tp, &lambda).unwrap() + multicurve_length(&tp, &mu).unwrap()
    };
    let f0 = f(r.chart[0], r.chart[1]);
    for k in 0..8 {
        let th = k as f64 * std::f64::consts::FRAC_PI_4;
        assert!(f(r.chart[0] + 1e-3 * th.cos(), r.chart[1] + 1e-3 * th.sin()) > f0);
    }
}

#[test]
fn non_filling_pair_is_rejected() {
    let lambda = WeightedMulticurve::single("A", 1.0).unwrap();
    let mu = WeightedMulticurve::single("A", 2.0).unwrap();
    let r = kerckhoff_point(
        &lambda,
        &mu,
        &TeichPoint::new(3.0, 3.0, 3.0).unwrap(),
        &KerckhoffOptions::default(),
    );
    assert!(matches!(r, Err(Error::BadMulticurve(_))));
}

#[test]
fn bad_generators_are_rejected() {
    let a = M2::new(2.0, 0.0, 0.0, 0.5);
    let b = M2::new(2.0, 0.0, 0.0, 0.5);
    assert!(matches!(
        FuchsianGroup::from_generators(a, b),
        Err(Error::BadGenerators(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn trace_point_roundtrip(p in -1.5f64..2.0, s in -1.5f64..1.5) {
        let tp = halfpipe::fuchsian::teich_from_chart(p, s);
        let gp = FuchsianGroup::from_traces(&tp).unwrap();
        let back = gp.teich_point();
        prop_assert!((back.x - tp.x).abs() < 1e-9 * tp.x);
        prop_assert!((back.y - tp.y).abs() < 1e-9 * tp.y);
        prop_assert!((back.z - tp.z).abs() < 1e-9 * tp.z);
        let c = gp.eval_sl2(&gp.cusp_words()[0]);
        prop_assert!((c.trace() + 2.0).abs() < 1e-8);
    }

    #[test]
    fn crossing_parameters_increase(seed in 0u64..1000) {
        let gp = symmetric_group();
        let mc = WeightedMulticurve::single("Ab", 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_disk_point(&mut rng, 0.9);
        let y = random_disk_point(&mut rng, 0.9);
        if let Ok(c) = leaves_crossing(&gp, &mc, &x, &y) {
            for pair in c.windows(2) {
                prop_assert!(pair[0].parameter < pair[1].parameter);
            }
            for k in &c {
                prop_assert!(k.parameter > 0.0 && k.parameter < 1.0);
            }
        }
    }

    #[test]
    fn length_is_smooth(p in -0.5f64..1.0, s in -0.5f64..0.5) {
        let mc = WeightedMulticurve::single("AB", 1.0).unwrap();
        let f = |p: f64| multicurve_length(&halfpipe::fuchsian::teich_from_chart(p, s), &mc).unwrap();
        let h = 1e-3;
        let central = (f(p + h) - f(p - h)) / (2.0 * h);
        let fourth = (-f(p + 2.0 * h) + 8.0 * f(p + h) - 8.0 * f(p - h) + f(p - 2.0 * h)) / (12.0 * h);
        prop_assert!((central - fourth).abs() < 1e-5 * (1.0 + fourth.abs()));
    }
}
