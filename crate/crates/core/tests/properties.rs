mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use shapespace::attributes::{attribute, contour_lengths, AttributeKind, Moments};
use shapespace::shape_space::Strategy as Simplification;
use shapespace::shape_space::{
    base_tree, detect_objects, extinction_values, filter_shape_space, make_shape_space,
    second_attribute, second_tree, FilterSpec, Mode, SecondAttribute,
};
use shapespace::synth::{rng, two_disks, well_composed_image};
use shapespace::tos::{build_tree_of_shapes_with_origins, saturate, ShapeOrigin};
use shapespace::tree::brute_force_tree;
use shapespace::{
    build_component_tree, build_tree_of_shapes, grid_graph, is_leveling, reconstruct, shape_filter,
    AttributeMap, Connectivity, Image, Orientation, Polarity, TreeKind,
};

fn image_strategy(max_side: usize, max_value: u8) -> impl Strategy<Value = Image> {
    (1..=max_side, 1..=max_side).prop_flat_map(move |(w, h)| {
        proptest::collection::vec(0..=max_value, w * h)
            .prop_map(move |v| Image::new(w, h, v).unwrap())
    })
}

fn connectivity() -> impl Strategy<Value = Connectivity> {
    prop_oneof![Just(Connectivity::C4), Just(Connectivity::C8)]
}

fn tree_kind() -> impl Strategy<Value = TreeKind> {
    prop_oneof![
        Just(TreeKind::MinTree),
        Just(TreeKind::MaxTree),
        Just(TreeKind::TreeOfShapes)
    ]
}

/// Unit pixel sides facing outside the set, counted one by one.
fn perimeter_by_sides(dims: (usize, usize), pixels: &[usize]) -> f64 {
    let (w, h) = dims;
    let inside: BTreeSet<usize> = pixels.iter().copied().collect();
    let mut sides = 0;
    for &p in pixels {
        let (x, y) = (p % w, p / w);
        sides += usize::from(x == 0 || !inside.contains(&(p - 1)));
        sides += usize::from(x + 1 == w || !inside.contains(&(p + 1)));
        sides += usize::from(y == 0 || !inside.contains(&(p - w)));
        sides += usize::from(y + 1 == h || !inside.contains(&(p + w)));
    }
    sides as f64
}

fn connected(pixels: &[usize], w: usize, h: usize, conn: Connectivity) -> bool {
    let set: BTreeSet<usize> = pixels.iter().copied().collect();
    let mut values = vec![0u8; w * h];
    for &p in pixels {
        values[p] = 1;
    }
    let img = Image::new(w, h, values).unwrap();
    common::pixel_component(&img, conn, pixels[0], |v| v == 1).len() == set.len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn union_find_matches_sweep(f in image_strategy(9, 6), conn in connectivity(), max in any::<bool>()) {
        let pol = if max { Polarity::Max } else { Polarity::Min };
        let g = grid_graph(&f, conn);
        prop_assert_eq!(build_component_tree(&g, pol).unwrap(), brute_force_tree(&g, pol).unwrap());
    }

    #[test]
    fn canonical_ids_put_parents_first(f in image_strategy(10, 20), kind in tree_kind()) {
        let t = base_tree(&f, kind, Connectivity::C4).unwrap();
        prop_assert_eq!(t.parent(0), 0);
        for n in 1..t.len() {
            prop_assert!(t.parent(n) < n);
        }
        let areas = t.areas();
        prop_assert_eq!(areas[0], f.len());
        for n in 1..t.len() {
            prop_assert!(areas[n] < areas[t.parent(n)]);
        }
    }

    #[test]
    fn keep_all_reconstructs_input(f in image_strategy(12, 255), kind in tree_kind()) {
        let t = base_tree(&f, kind, Connectivity::C8).unwrap();
        let back = Image::from_levels(f.dims(), &reconstruct(&t, |_| true)).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn shapes_are_nested_connected_and_hole_free(f in image_strategy(10, 5)) {
        let (t, origins) = build_tree_of_shapes_with_origins(&f);
        let (w, h) = (f.width(), f.height());
        for n in 0..t.len() {
            let px = t.vertices_of(n);
            let conn = origins[n].connectivity();
            prop_assert!(connected(&px, w, h, conn));
            if origins[n] != ShapeOrigin::Border {
                prop_assert_eq!(saturate(&px, f.dims(), conn.dual()), px.clone());
            }
            let parent: BTreeSet<usize> = t.vertices_of(t.parent(n)).into_iter().collect();
            prop_assert!(px.iter().all(|p| parent.contains(p)));
        }
    }

    #[test]
    fn attributes_are_consistent(f in image_strategy(10, 8), kind in tree_kind()) {
        let t = base_tree(&f, kind, Connectivity::C4).unwrap();
        let area = attribute(&t, AttributeKind::Area).unwrap();
        let contour = contour_lengths(&t).unwrap();
        let circ = attribute(&t, AttributeKind::Circularity).unwrap();
        let elong = attribute(&t, AttributeKind::Elongation).unwrap();
        let iaa = attribute(&t, AttributeKind::InertiaOverArea2).unwrap();
        for n in 0..t.len() {
            let px = t.vertices_of(n);
            prop_assert_eq!(area.value(n), px.len() as f64);
            prop_assert_eq!(contour[n], perimeter_by_sides((f.width(), f.height()), &px));
            let mut m = Moments::default();
            for &p in &px {
                m.add(&Moments::of_pixel(p % f.width(), p / f.width()));
            }
            prop_assert!((m.circularity() - circ.value(n)).abs() < 1e-9);
            prop_assert!(circ.value(n) > 0.0 && circ.value(n) <= 1.0);
            prop_assert!(elong.value(n) >= 1.0 - 1e-12);
            prop_assert!(iaa.value(n) > 0.0);
        }
    }

    #[test]
    fn threshold_keeps_low_second_tree_components(f in image_strategy(10, 30), lambda in -1.0f64..1.0) {
        let t = base_tree(&f, TreeKind::MaxTree, Connectivity::C4).unwrap();
        let a = attribute(&t, AttributeKind::Circularity).unwrap();
        let s = make_shape_space(&t, &a).unwrap();
        let tt = second_tree(&s).unwrap();
        let out = filter_shape_space(&s, &tt, Simplification::Threshold(lambda)).unwrap();
        let union: Vec<usize> = (0..tt.len())
            .filter(|&c| tt.level(c) <= lambda)
            .flat_map(|c| tt.vertices_of(c))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        prop_assert_eq!(&out.blobs[0], &union);
    }

    #[test]
    fn extinction_is_dominated_and_monotone(f in image_strategy(12, 40), e1 in 0.0f64..0.5, e2 in 0.0f64..0.5) {
        let t = base_tree(&f, TreeKind::MinTree, Connectivity::C4).unwrap();
        let a = attribute(&t, AttributeKind::Elongation).unwrap();
        let s = make_shape_space(&t, &a).unwrap();
        let tt = second_tree(&s).unwrap();
        let records = extinction_values(&tt, &s);
        prop_assert_eq!(records.iter().filter(|r| r.extinction.is_infinite()).count(), 1);
        prop_assert!(records[0].extinction.is_infinite());
        let (lo, hi) = a.range();
        for r in records.iter().filter(|r| r.extinction.is_finite()) {
            prop_assert!(r.extinction >= 0.0 && r.extinction <= hi - lo);
        }
        let (small, large) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let many: BTreeSet<usize> = filter_shape_space(&s, &tt, Simplification::Extinction(small)).unwrap().survivors.into_iter().collect();
        let few: BTreeSet<usize> = filter_shape_space(&s, &tt, Simplification::Extinction(large)).unwrap().survivors.into_iter().collect();
        prop_assert!(few.is_subset(&many));
    }

    #[test]
    fn blobs_are_disjoint_and_hold_one_survivor(f in image_strategy(12, 40), lambda in 0.0f64..1.0, ext in any::<bool>()) {
        let t = base_tree(&f, TreeKind::MaxTree, Connectivity::C4).unwrap();
        let a = attribute(&t, AttributeKind::Circularity).unwrap();
        let s = make_shape_space(&t, &a).unwrap();
        let tt = second_tree(&s).unwrap();
        let strategy = if ext {
            Simplification::Extinction(lambda)
        } else {
            Simplification::Closing { attribute: SecondAttribute::Height, lambda }
        };
        let out = filter_shape_space(&s, &tt, strategy).unwrap();
        prop_assert!(!out.survivors.is_empty());
        let mut seen = BTreeSet::new();
        for (leaf, blob) in out.survivors.iter().zip(&out.blobs) {
            let set: BTreeSet<usize> = blob.iter().copied().collect();
            for v in tt.own_vertices(*leaf) {
                prop_assert!(set.contains(v));
            }
            for other in out.survivors.iter().filter(|&o| o != leaf) {
                prop_assert!(tt.own_vertices(*other).iter().all(|v| !set.contains(v)));
            }
            prop_assert!(set.is_disjoint(&seen));
            seen.extend(set);
        }
    }

    #[test]
    fn second_attributes_increase(f in image_strategy(10, 20)) {
        let t = base_tree(&f, TreeKind::TreeOfShapes, Connectivity::C4).unwrap();
        let a = attribute(&t, AttributeKind::InertiaOverArea2).unwrap();
        let s = make_shape_space(&t, &a).unwrap();
        let tt = second_tree(&s).unwrap();
        for kind in [SecondAttribute::Height, SecondAttribute::NodeCount, SecondAttribute::PixelArea] {
            let v = second_attribute(&tt, &s, kind);
            for n in 1..tt.len() {
                prop_assert!(v[n] <= v[tt.parent(n)]);
            }
        }
    }

    #[test]
    fn min_and_max_tree_filters_are_levelings(f in image_strategy(14, 30), seed in any::<u64>()) {
        let spec = common::random_leveling_spec(&mut rng(seed), &f);
        let g = shape_filter(&f, &spec).unwrap();
        prop_assert!(is_leveling(&f, &g, spec.connectivity).unwrap());
    }
}

#[test]
fn tree_of_shapes_is_self_dual_on_well_composed_images() {
    let mut r = rng(40);
    for _ in 0..30 {
        let f = well_composed_image(&mut r, 14, 11);
        let a = build_tree_of_shapes(&f);
        let b = build_tree_of_shapes(&f.complement());
        assert_eq!(a.parents(), b.parents());
        assert_eq!(a.node_of_vertex_map(), b.node_of_vertex_map());
        for n in 0..a.len() {
            assert_eq!(a.level(n), 255.0 - b.level(n));
        }
    }
}

#[test]
fn threshold_above_range_is_identity_or_flat() {
    let mut r = rng(41);
    for _ in 0..20 {
        let f = shapespace::synth::random_image(&mut r, 9, 7, 50);
        let keep = FilterSpec::new(
            TreeKind::MinTree,
            AttributeKind::Elongation,
            Simplification::Threshold(f64::INFINITY),
        );
        assert_eq!(shape_filter(&f, &keep).unwrap(), f);
        let gone = shape_filter(&f, &keep.mode(Mode::Remove)).unwrap();
        let top = *f.values().iter().max().unwrap();
        assert!(gone.values().iter().all(|&v| v == top));
        let none = FilterSpec::new(
            TreeKind::MaxTree,
            AttributeKind::Elongation,
            Simplification::Threshold(f64::NEG_INFINITY),
        )
        .mode(Mode::Remove);
        assert_eq!(shape_filter(&f, &none).unwrap(), f);
    }
}

#[test]
fn custom_attribute_combination_filters() {
    let f = shapespace::synth::tools_image(5, 64, 48);
    let t = base_tree(&f, TreeKind::MaxTree, Connectivity::C4).unwrap();
    let c = attribute(&t, AttributeKind::Circularity).unwrap();
    let e = attribute(&t, AttributeKind::Elongation).unwrap();
    let energy: Vec<f64> = (0..t.len())
        .map(|n| e.value(n) - 2.0 * c.value(n))
        .collect();
    let a = AttributeMap::custom(&t, Orientation::RelevantIsLow, energy).unwrap();
    let spec = FilterSpec::new(
        TreeKind::MaxTree,
        AttributeKind::Custom,
        Simplification::Extinction(0.5),
    );
    let p = shapespace::shape_space::run_pipeline_on(&f, t, a, &spec).unwrap();
    assert!(is_leveling(&f, &p.output, Connectivity::C4).unwrap());
}

#[test]
fn two_disks_give_two_detections() {
    let f = two_disks(64);
    let t = build_tree_of_shapes(&f);
    let at = |x: f64, y: f64| t.node_of_vertex(y as usize * 64 + x as usize);
    let disks: BTreeSet<usize> = [at(0.3 * 64.0, 0.3 * 64.0), at(0.7 * 64.0, 0.65 * 64.0)].into();
    let found = detect_objects(&f, &[AttributeKind::Circularity], 0.01).unwrap();
    assert_eq!(found.iter().map(|d| d.node).collect::<BTreeSet<_>>(), disks);
    for d in &found {
        assert!(d.attribute > 0.95);
        let (cx, cy) = d.centroid;
        assert!((0.0..64.0).contains(&cx) && (0.0..64.0).contains(&cy));
    }
    let one = detect_objects(&f, &[AttributeKind::Circularity], f64::INFINITY).unwrap();
    assert_eq!(one.len(), 1);
    assert_eq!(one[0].extinction, f64::INFINITY);
}

#[test]
fn attributes_run_independently_in_detection() {
    let f = two_disks(48);
    let both = detect_objects(
        &f,
        &[AttributeKind::Circularity, AttributeKind::Elongation],
        0.0,
    )
    .unwrap();
    let circ = detect_objects(&f, &[AttributeKind::Circularity], 0.0).unwrap();
    let elong = detect_objects(&f, &[AttributeKind::Elongation], 0.0).unwrap();
    assert_eq!(both.len(), circ.len() + elong.len());
    assert!(both[..circ.len()]
        .iter()
        .all(|d| d.kind == AttributeKind::Circularity));
}

#[test]
fn negative_parameters_are_rejected_by_the_pipeline() {
    let f = two_disks(16);
    let spec = FilterSpec::new(
        TreeKind::TreeOfShapes,
        AttributeKind::Area,
        Simplification::Extinction(-0.1),
    );
    assert!(shape_filter(&f, &spec).is_err());
    assert!(detect_objects(&f, &[AttributeKind::Area], -1.0).is_err());
}
