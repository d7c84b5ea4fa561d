use pantsgraph::bridge::*;
use pantsgraph::loops::*;
use pantsgraph::pants::*;
use pantsgraph::surface::*;
use pantsgraph::Error;

fn ball(g: u32, r: u32, w: u32, radius: u32) -> (Universe, PantsGraphBall) {
    let u = Universe::new(SurfaceId::new(g, r), w).unwrap();
    let b = build_ball(&u, &standard_seed(&u).unwrap(), radius).unwrap();
    (u, b)
}

fn word(s: &str) -> MappingClassWord {
    s.parse().unwrap()
}

#[test]
fn identity_map_preserves_everything() {
    let (u, b) = ball(0, 5, 4, 2);
    let cells = detect_cells(&b, &u).unwrap();
    let id: Vec<Option<usize>> = (0..b.len()).map(Some).collect();
    let r = check_vertex_map(&b, &cells, &id);
    assert!(r.passed());
    assert_eq!(r.defined_vertices, b.len());
    assert!(r.edges_checked == b.edges.len() && r.cells_checked > 0 && r.charts_checked > 0);
}

#[test]
fn corrupted_vertex_maps_are_rejected() {
    let (u, b) = ball(0, 5, 4, 2);
    let cells = detect_cells(&b, &u).unwrap();
    // Swap an interior vertex with a non-neighbour of different degree.
    let v = (0..b.len()).find(|&v| !b.is_frontier(v) && v != 0).unwrap();
    let w =
        (0..b.len()).find(|&w| w != v && !b.has_edge(v, w) && b.neighbors(w).len() != b.neighbors(v).len()).unwrap();
    let mut swapped: Vec<Option<usize>> = (0..b.len()).map(Some).collect();
    swapped.swap(v, w);
    let r = check_vertex_map(&b, &cells, &swapped);
    assert!(!r.passed());
    assert!(!r.edge_violations.is_empty());

    let mut collapsed: Vec<Option<usize>> = (0..b.len()).map(Some).collect();
    collapsed[v] = Some(w);
    assert!(!check_vertex_map(&b, &cells, &collapsed).edge_violations.is_empty());

    // A cyclic shift of vertex ids keeps no structure.
    let shifted: Vec<Option<usize>> = (0..b.len()).map(|x| Some((x + 1) % b.len())).collect();
    assert!(!check_vertex_map(&b, &cells, &shifted).passed());
}

#[test]
fn mapping_classes_induce_structure_preserving_maps() {
    let (u, b) = ball(0, 5, 4, 2);
    let cells = detect_cells(&b, &u).unwrap();
    let action = CurveAction::new(&u).unwrap();
    let id = induced_automorphism(&action, &b, &word("id")).unwrap();
    assert!(id.vertex_map.iter().enumerate().all(|(v, m)| *m == Some(v)));
    let s1 = induced_automorphism(&action, &b, &word("s1")).unwrap();
    assert!(s1.vertex_map.iter().enumerate().any(|(v, m)| m.is_some_and(|m| m != v)));
    for w in ["s1", "s2 s3", "rho", "s4^-1 s1"] {
        let a = induced_automorphism(&action, &b, &word(w)).unwrap();
        assert!(check_vertex_map(&b, &cells, &a.vertex_map).passed(), "{w}");
    }
}

#[test]
fn farey_charts_and_their_intersections() {
    let (u, b) = ball(0, 5, 4, 2);
    let seed = 0;
    let other = b.curve_ids().into_iter().find(|&c| !b.curves(seed).contains(c)).unwrap();
    assert!(matches!(farey_chart(&b, seed, other), Err(Error::CurveNotInDecomposition)));
    for v in (0..b.len()).filter(|&v| !b.is_frontier(v)) {
        assert!(charts_meet_only_at(&b, v).unwrap());
        let charts: Vec<MarkedFareyChart> = b.curves(v).0.iter().map(|&a| farey_chart(&b, v, a).unwrap()).collect();
        for c in &charts {
            assert!(c.vertices.binary_search(&v).is_ok());
            for &x in &c.vertices {
                assert!(c.fixed.iter().all(|&f| b.curves(x).contains(f)));
            }
        }
        for x in &charts {
            for y in &charts {
                assert!(chart_intersection_properties(&b, &u, x, y).consistent);
            }
        }
    }
}

#[test]
fn well_definedness_loops_have_the_predicted_shape() {
    for (g, r, w, radius) in [(0, 5, 6, 2), (0, 6, 4, 2)] {
        let (u, b) = ball(g, r, w, radius);
        let atlas = loop_atlas(&b, &u).unwrap();
        assert!(atlas.certified > 0 && atlas.certified_missing.is_empty() && atlas.bad.is_empty(), "S{g},{r}");
        for (&(x, xp, a1), t) in &atlas.loops {
            let Transport::Loop(l) = t else { panic!("detour on genus zero") };
            assert_eq!((&l.vertices[1], &l.vertices[2]), (b.curves(x), b.curves(xp)));
            assert_eq!(l.tag, l.case.expected());
            assert!(l.alternating_wxxy);
            assert_eq!(l.vertices[0].difference(&l.vertices[1]).map(|d| d.1), Some(a1));
            assert_eq!(l.vertices[3].difference(&l.vertices[2]).map(|d| d.1), Some(a1));
        }
    }
}

#[test]
fn illegal_moves_are_circumvented_through_separating_curves() {
    let (u, b) = ball(1, 2, 8, 2);
    let mut legal_seen = false;
    let mut illegal_seen = 0;
    for e in b.edges.iter().filter(|e| !b.is_frontier(e.source) && !b.is_frontier(e.target)) {
        let (x, xp) = (b.curves(e.source), b.curves(e.target));
        for a1 in x.without(e.removed) {
            if is_illegal_move(&u, x, xp, a1).unwrap() {
                illegal_seen += 1;
                assert!(matches!(find_welldefinedness_loop(&u, x, xp, a1), Err(Error::IllegalMove)));
                let mids = circumvent_illegal_move(&u, x, xp, a1).unwrap();
                for m in &mids {
                    let (_, added) = x.difference(m).unwrap();
                    assert!(separation_data(u.tri, u.curve(added)).unwrap().separating);
                    assert!(m.contains(a1));
                }
                if instance_certified(&u, x, xp) {
                    assert_eq!(mids.len(), 2);
                }
            } else {
                legal_seen = true;
                assert!(matches!(circumvent_illegal_move(&u, x, xp, a1), Err(Error::NotIllegal)));
            }
        }
    }
    assert!(legal_seen && illegal_seen > 0);
}

#[test]
fn phi_is_a_homomorphism_on_short_words() {
    let (u, b) = ball(1, 2, 5, 2);
    let cells = detect_cells(&b, &u).unwrap();
    let atlas = loop_atlas(&b, &u).unwrap();
    let action = CurveAction::new(&u).unwrap();
    let words = action.words(2);
    assert!(words.len() > action.generators().len());
    for w in &words {
        let r = verify_phi(&action, &b, &cells, &atlas, w).unwrap();
        assert!(r.passed(), "{w}: {r:?}");
    }
    let c = verify_composition(&action, &b, &words).unwrap();
    assert!(c.checks > 0);
    assert!(c.violations.is_empty() && c.action_violations.is_empty());
}
