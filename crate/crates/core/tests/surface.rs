use pantsgraph::farey::*;
use pantsgraph::surface::*;
use proptest::prelude::*;

const TORUS: SurfaceId = SurfaceId::new(1, 1);
const SPHERE4: SurfaceId = SurfaceId::new(0, 4);

fn traced(s: SurfaceId, c: NormalCurve) -> Traced {
    Traced::new(standard_triangulation(s).unwrap(), c).unwrap()
}

fn word(s: &str) -> MappingClassWord {
    s.parse().unwrap()
}

fn small_slope() -> impl Strategy<Value = Slope> {
    (-9i64..=9, 0i64..=9)
        .prop_filter("nonzero", |&(p, q)| p != 0 || q != 0)
        .prop_map(|(p, q)| normalize_slope(p, q).unwrap())
}

#[test]
fn chart_bijection_round_trips() {
    for s in [TORUS, SPHERE4] {
        let tri = standard_triangulation(s).unwrap();
        let curves = enumerate_curves(tri, 12);
        for c in &curves {
            let a = curve_slope(s, c).unwrap();
            assert_eq!(&slope_curve(s, a).unwrap(), c);
        }
        let expected = slopes_within(12).into_iter().filter(|&a| slope_curve(s, a).unwrap().max_weight() <= 12).count();
        assert_eq!(curves.len(), expected, "{s}");
    }
    assert!(slope_curve(SurfaceId::new(0, 5), Slope::ZERO).is_err());
    assert!(curve_slope(TORUS, &NormalCurve::new(vec![2, 2, 0])).is_err());
}

#[test]
fn torus_type_matches_chart_slope() {
    let tri = standard_triangulation(TORUS).unwrap();
    for c in enumerate_curves(tri, 8) {
        let a = curve_slope(TORUS, &c).unwrap();
        assert_eq!(torus_type(tri, &c).unwrap(), TorusType::Slope(a));
        assert!(!separation_data(tri, &c).unwrap().separating);
    }
}

#[test]
fn four_holed_sphere_curves_separate_by_association() {
    let tri = standard_triangulation(SPHERE4).unwrap();
    for c in enumerate_curves(tri, 8) {
        let a = curve_slope(SPHERE4, &c).unwrap();
        let d = separation_data(tri, &c).unwrap();
        assert!(d.separating);
        let [x, y] = d.puncture_partition.unwrap();
        let mut pairs = [[x[0], x[1]], [y[0], y[1]]];
        pairs.sort();
        assert_eq!(pairs, slope_association(a).pairs(), "{a}");
    }
}

#[test]
fn separating_pairs_on_twice_punctured_torus_meet_four_times() {
    let s = SurfaceId::new(1, 2);
    let tri = standard_triangulation(s).unwrap();
    let sep: Vec<Traced> = enumerate_curves(tri, 5)
        .into_iter()
        .filter(|c| separation_data(tri, c).unwrap().separating)
        .map(|c| Traced::new(tri, c).unwrap())
        .collect();
    assert!(sep.len() > 3);
    for (k, a) in sep.iter().enumerate() {
        for b in &sep[k + 1..] {
            let i = geometric_intersection(tri, a, b);
            assert!(i == 0 || i >= 4, "{:?} {:?} meet {i} times", a.weights(), b.weights());
        }
    }
}

#[test]
fn braid_relations_hold_on_curves() {
    let s = SurfaceId::new(0, 6);
    let tri = standard_triangulation(s).unwrap();
    let g = SurfaceGroup::get(s).unwrap();
    let curves: Vec<Traced> = enumerate_curves(tri, 2).into_iter().map(|c| Traced::new(tri, c).unwrap()).collect();
    let pairs = [
        ("s1 s2 s1", "s2 s1 s2"),
        ("s3 s4 s3", "s4 s3 s4"),
        ("s1 s3", "s3 s1"),
        ("s2 s5", "s5 s2"),
        ("s1 s1^-1", "id"),
    ];
    for c in &curves {
        for (l, r) in pairs {
            assert_eq!(g.apply(&word(l), c).unwrap().curve, g.apply(&word(r), c).unwrap().curve, "{l} vs {r}");
        }
    }
}

#[test]
fn reflection_is_an_involution() {
    for s in SurfaceId::SUPPORTED {
        let tri = standard_triangulation(s).unwrap();
        let g = SurfaceGroup::get(s).unwrap();
        let bound = if s.complexity() > 2 { 2 } else { 5 };
        for c in enumerate_curves(tri, bound) {
            let t = Traced::new(tri, c.clone()).unwrap();
            let r = g.apply(&word("rho"), &t).unwrap();
            assert_eq!(g.apply(&word("rho"), &r).unwrap().curve, c, "{s}");
        }
    }
}

#[test]
fn twice_punctured_torus_chain_relations() {
    let s = SurfaceId::new(1, 2);
    let tri = standard_triangulation(s).unwrap();
    let g = SurfaceGroup::get(s).unwrap();
    for c in enumerate_curves(tri, 3) {
        let t = Traced::new(tri, c).unwrap();
        for (l, r) in [("ta tb ta", "tb ta tb"), ("tb tc tb", "tc tb tc"), ("ta tc", "tc ta")] {
            assert_eq!(g.apply(&word(l), &t).unwrap().curve, g.apply(&word(r), &t).unwrap().curve, "{l}");
        }
    }
}

#[test]
fn twist_power_intersection_formula() {
    let s = SurfaceId::new(0, 5);
    let tri = standard_triangulation(s).unwrap();
    let g = SurfaceGroup::get(s).unwrap();
    let c = Traced::new(tri, g.standard_curve(2, 3).unwrap()).unwrap();
    for b in enumerate_curves(tri, 3) {
        let b = Traced::new(tri, b).unwrap();
        let i = geometric_intersection(tri, &b, &c);
        for k in [-2i32, -1, 1, 3] {
            let tb = dehn_twist(tri, &c, &b, k).unwrap();
            assert_eq!(geometric_intersection(tri, &tb, &b), k.unsigned_abs() as u64 * i * i);
            assert_eq!(geometric_intersection(tri, &tb, &c), i);
        }
    }
}

#[test]
fn invalid_weights_are_diagnosed() {
    let tri = standard_triangulation(TORUS).unwrap();
    assert!(!validate_normal_curve(tri, &[1, 0, 0]).unwrap().is_valid());
    assert!(validate_normal_curve(tri, &[1, 1, 0]).unwrap().is_valid());
    assert!(validate_normal_curve(tri, &[1, 1]).is_err());
    assert!(Traced::new(tri, NormalCurve::new(vec![2, 2, 0])).is_err());
}

proptest! {
    #[test]
    fn geometric_matches_slope_intersection(a in small_slope(), b in small_slope()) {
        for (s, kind) in [(TORUS, ChartKind::OneHoledTorus), (SPHERE4, ChartKind::FourHoledSphere)] {
            let tri = standard_triangulation(s).unwrap();
            let x = traced(s, slope_curve(s, a).unwrap());
            let y = traced(s, slope_curve(s, b).unwrap());
            prop_assert_eq!(geometric_intersection(tri, &x, &y), slope_intersection(a, b, kind));
        }
    }

    #[test]
    fn mapping_classes_preserve_intersection(
        w in prop::collection::vec(prop::sample::select(vec!["s1", "s2", "s3", "s4", "s1^-1", "s3^-1", "rho"]), 0..4),
        i in 0usize..40,
        j in 0usize..40,
    ) {
        let s = SurfaceId::new(0, 5);
        let tri = standard_triangulation(s).unwrap();
        let g = SurfaceGroup::get(s).unwrap();
        let curves = enumerate_curves(tri, 2);
        let (a, b) = (traced(s, curves[i % curves.len()].clone()), traced(s, curves[j % curves.len()].clone()));
        let w = word(&if w.is_empty() { "id".to_string() } else { w.join(" ") });
        let (fa, fb) = (g.apply(&w, &a).unwrap(), g.apply(&w, &b).unwrap());
        prop_assert_eq!(geometric_intersection(tri, &a, &b), geometric_intersection(tri, &fa, &fb));
        prop_assert_eq!(
            separation_data(tri, &a.curve).unwrap().separating,
            separation_data(tri, &fa.curve).unwrap().separating
        );
        prop_assert_eq!(g.apply(&w.inverse(), &fa).unwrap().curve, a.curve);
    }
}
