use std::collections::BTreeSet;

use pantsgraph::farey::*;
use pantsgraph::Error;
use proptest::prelude::*;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Independent enumeration: reduced pairs with q > 0, or 1/0.
fn oracle_slopes(bound: i64) -> Vec<(i64, i64)> {
    let mut out = vec![(1, 0)];
    for q in 1..=bound {
        for p in -bound..=bound {
            if gcd(p, q) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

fn oracle_edges(bound: i64) -> usize {
    let s = oracle_slopes(bound);
    let mut n = 0;
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            if (s[i].0 * s[j].1 - s[i].1 * s[j].0).abs() == 1 {
                n += 1;
            }
        }
    }
    n
}

fn slope() -> impl Strategy<Value = Slope> {
    (-40i64..=40, -40i64..=40)
        .prop_filter("nonzero", |&(p, q)| p != 0 || q != 0)
        .prop_map(|(p, q)| normalize_slope(p, q).unwrap())
}

fn word() -> impl Strategy<Value = Pgl2Word> {
    prop::collection::vec(prop::sample::select(Pgl2Token::ALL.to_vec()), 0..8).prop_map(Pgl2Word)
}

#[test]
fn slope_enumeration_matches_oracle() {
    for bound in [1, 3, 7, 12] {
        let ours: BTreeSet<(i64, i64)> = slopes_within(bound).iter().map(|a| (a.p(), a.q())).collect();
        let oracle: BTreeSet<(i64, i64)> = oracle_slopes(bound).into_iter().collect();
        assert_eq!(ours, oracle, "bound {bound}");
    }
}

#[test]
fn edge_counts_frozen() {
    // Frozen from the brute-force oracle above.
    assert_eq!(oracle_edges(1), 5);
    assert_eq!(oracle_edges(12), 365);
    for bound in [1, 5, 12] {
        let s = slopes_within(bound);
        let ours = (0..s.len())
            .flat_map(|i| (i + 1..s.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| is_farey_edge(s[i], s[j]))
            .count();
        assert_eq!(ours, oracle_edges(bound), "bound {bound}");
    }
}

#[test]
fn completions_are_the_only_common_neighbours() {
    let s = slopes_within(12);
    for &a in &s {
        for b in farey_neighbors(a, 12) {
            let [c, d] = triangle_completions(a, b).unwrap();
            assert_ne!(c, d);
            let common: BTreeSet<Slope> =
                slopes_within(30).into_iter().filter(|&x| is_farey_edge(x, a) && is_farey_edge(x, b)).collect();
            assert_eq!(common, BTreeSet::from([c, d]), "{a} {b}");
        }
    }
}

#[test]
fn completions_reject_non_edges() {
    let a = normalize_slope(1, 2).unwrap();
    let b = normalize_slope(2, 1).unwrap();
    assert!(matches!(triangle_completions(a, b), Err(Error::NotAnEdge(..))));
}

#[test]
fn quadrilateral_orbit_bound_eight() {
    let r = quadrilateral_orbit(8);
    assert_eq!(r.reached, r.triples);
    assert!(r.all_normalizable);
    assert!(r.passed(8));
    assert!(!r.passed(r.max_word_length - 1));
}

proptest! {
    #[test]
    fn normalization_is_idempotent(a in slope()) {
        prop_assert_eq!(normalize_slope(a.p(), a.q()).unwrap(), a);
        prop_assert_eq!(normalize_slope(-a.p(), -a.q()).unwrap(), a);
        prop_assert!(a.q() > 0 || a == Slope::INFINITY);
    }

    #[test]
    fn edges_are_symmetric_and_irreflexive(a in slope(), b in slope()) {
        prop_assert_eq!(is_farey_edge(a, b), is_farey_edge(b, a));
        prop_assert!(!is_farey_edge(a, a));
    }

    #[test]
    fn adjacent_slopes_differ_in_association(a in slope(), b in slope()) {
        if is_farey_edge(a, b) {
            prop_assert_ne!(slope_association(a), slope_association(b));
            let [c, d] = triangle_completions(a, b).unwrap();
            let around: BTreeSet<Association> =
                [a, b, c].into_iter().map(slope_association).collect();
            prop_assert_eq!(around.len(), 3);
            prop_assert_eq!(slope_association(c), slope_association(d));
        }
    }

    #[test]
    fn intersection_vanishes_only_on_the_diagonal(a in slope(), b in slope()) {
        for kind in [ChartKind::OneHoledTorus, ChartKind::FourHoledSphere] {
            prop_assert_eq!(slope_intersection(a, b, kind) == 0, a == b);
            prop_assert_eq!(slope_intersection(a, b, kind), slope_intersection(b, a, kind));
        }
        prop_assert_eq!(
            is_farey_edge(a, b),
            slope_intersection(a, b, ChartKind::OneHoledTorus) == 1
        );
    }

    #[test]
    fn pgl2_preserves_edges_and_intersections(w in word(), a in slope(), b in slope()) {
        let (x, y) = (apply_pgl2(&w, a), apply_pgl2(&w, b));
        prop_assert_eq!(is_farey_edge(a, b), is_farey_edge(x, y));
        for kind in [ChartKind::OneHoledTorus, ChartKind::FourHoledSphere] {
            prop_assert_eq!(slope_intersection(a, b, kind), slope_intersection(x, y, kind));
        }
        prop_assert_eq!(mat_det(w.matrix()).abs(), 1);
    }

    #[test]
    fn quadrilateral_central_is_equivariant(w in word(), a in slope(), b in slope(), c in slope()) {
        let central = find_quadrilateral_triple_central(a, b, c);
        let image = find_quadrilateral_triple_central(apply_pgl2(&w, a), apply_pgl2(&w, b), apply_pgl2(&w, c));
        prop_assert_eq!(central.map(|x| apply_pgl2(&w, x)), image);
    }

    #[test]
    fn candidates_are_one_twist_orbit(a in slope()) {
        for target in Association::ALL {
            if target == slope_association(a) {
                prop_assert!(matches!(associativity_candidates(a, target, 12), Err(Error::NoSuchAssociation(_))));
                continue;
            }
            let cands = associativity_candidates(a, target, 12).unwrap();
            for &b in &cands {
                prop_assert!(is_farey_edge(a, b));
                prop_assert_eq!(slope_association(b), target);
            }
            // Consecutive candidates around `a` differ by two parabolic steps,
            // so any two are at torus intersection 2k for some k.
            for &b in &cands {
                for &c in &cands {
                    let i = slope_intersection(b, c, ChartKind::OneHoledTorus);
                    prop_assert_eq!(i % 2, 0);
                }
            }
        }
    }
}
