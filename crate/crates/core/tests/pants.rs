use std::collections::{BTreeMap, BTreeSet, VecDeque};

use pantsgraph::farey::*;
use pantsgraph::pants::*;
use pantsgraph::surface::*;
use pantsgraph::Error;

/// Depth profile of a Farey-graph ball restricted to slopes whose chart
/// curve has weight at most `w`.
fn farey_ball_profile(s: SurfaceId, seed: Slope, w: u32, radius: u32) -> Vec<usize> {
    let fits = |a: Slope| slope_curve(s, a).unwrap().max_weight() <= w;
    let slopes: Vec<Slope> = slopes_within(w as i64).into_iter().filter(|&a| fits(a)).collect();
    let mut depth = BTreeMap::from([(seed, 0u32)]);
    let mut queue = VecDeque::from([seed]);
    while let Some(a) = queue.pop_front() {
        let d = depth[&a];
        if d == radius {
            continue;
        }
        for &b in &slopes {
            if is_farey_edge(a, b) && !depth.contains_key(&b) {
                depth.insert(b, d + 1);
                queue.push_back(b);
            }
        }
    }
    let mut profile = vec![0; radius as usize + 1];
    for d in depth.values() {
        profile[*d as usize] += 1;
    }
    profile
}

fn profile(ball: &PantsGraphBall) -> Vec<usize> {
    let mut p = vec![0; ball.radius as usize + 1];
    for v in &ball.vertices {
        p[v.depth as usize] += 1;
    }
    p
}

#[test]
fn complexity_one_balls_are_farey_balls() {
    for s in [SurfaceId::new(1, 1), SurfaceId::new(0, 4)] {
        for (w, r) in [(6, 2), (10, 3)] {
            let u = Universe::new(s, w).unwrap();
            let seed = standard_seed(&u).unwrap();
            let ball = build_ball(&u, &seed, r).unwrap();
            let a = curve_slope(s, u.curve(seed.0[0])).unwrap();
            assert_eq!(profile(&ball), farey_ball_profile(s, a, w, r), "{s} W{w} R{r}");
            for e in &ball.edges {
                let x = curve_slope(s, u.curve(e.removed)).unwrap();
                let y = curve_slope(s, u.curve(e.added)).unwrap();
                assert!(is_farey_edge(x, y));
            }
        }
    }
}

#[test]
fn decompositions_have_the_right_size_and_are_disjoint() {
    for (s, w, r) in [((0, 5), 4, 2), ((1, 2), 4, 2), ((0, 6), 3, 1)] {
        let s = SurfaceId::new(s.0, s.1);
        let u = Universe::new(s, w).unwrap();
        let ball = build_ball(&u, &standard_seed(&u).unwrap(), r).unwrap();
        for v in &ball.vertices {
            let p = &v.curves.0;
            assert_eq!(p.len(), s.complexity());
            assert!(is_pants_decomposition(&u, p).unwrap());
            for (k, &a) in p.iter().enumerate() {
                for &b in &p[k + 1..] {
                    assert!(u.disjoint_pair(a, b));
                }
            }
            let adj = pants_adjacency(&u, &v.curves).unwrap();
            assert_eq!(adj.pants.len(), s.pants_count());
        }
    }
}

#[test]
fn elementary_moves_meet_minimally() {
    let s = SurfaceId::new(0, 5);
    let u = Universe::new(s, 5).unwrap();
    let seed = standard_seed(&u).unwrap();
    for &a in &seed.0 {
        let moves = elementary_moves(&u, &seed, a).unwrap();
        assert_eq!(moves.kind, ChartKind::FourHoledSphere);
        assert!(!moves.moves.is_empty());
        for (b, p) in &moves.moves {
            assert_eq!(u.intersection(a, *b), 2);
            assert_eq!(p, &seed.swap(a, *b));
            assert!(is_pants_decomposition(&u, &p.0).unwrap());
        }
    }
    let other = u.ids().find(|c| !seed.contains(*c)).unwrap();
    assert!(matches!(elementary_moves(&u, &seed, other), Err(Error::CurveNotInDecomposition)));
}

#[test]
fn twice_punctured_torus_seed_moves_in_torus_charts() {
    let u = Universe::new(SurfaceId::new(1, 2), 6).unwrap();
    let seed = standard_seed(&u).unwrap();
    for &a in &seed.0 {
        let adj = pants_adjacency(&u, &seed).unwrap();
        let kind = adj.classify_complement(a).unwrap();
        let moves = elementary_moves(&u, &seed, a).unwrap();
        assert_eq!(moves.kind, kind);
        for (b, _) in &moves.moves {
            assert_eq!(u.intersection(a, *b), kind.minimal_intersection() as u64);
        }
    }
}

#[test]
fn ball_edges_are_symmetric_and_labelled() {
    let u = Universe::new(SurfaceId::new(0, 5), 5).unwrap();
    let ball = build_ball(&u, &standard_seed(&u).unwrap(), 2).unwrap();
    for e in &ball.edges {
        assert!(ball.has_edge(e.source, e.target) && ball.has_edge(e.target, e.source));
        let (p, q) = (ball.curves(e.source), ball.curves(e.target));
        assert_eq!(p.difference(q), Some((e.removed, e.added)));
        assert!(ball.depth(e.source).abs_diff(ball.depth(e.target)) <= 1);
    }
    for (v, bv) in ball.vertices.iter().enumerate() {
        assert_eq!(bv.frontier, bv.depth == ball.radius);
        assert_eq!(ball.vertex_id(&bv.curves), Some(v));
    }
}

#[test]
fn ball_output_is_deterministic() {
    let build = || {
        let u = Universe::new(SurfaceId::new(1, 2), 5).unwrap();
        let ball = build_ball(&u, &standard_seed(&u).unwrap(), 2).unwrap();
        (serde_json::to_string(&ball.to_json(&u)).unwrap(), ball.to_dot())
    };
    assert_eq!(build(), build());
}

/// Brute-force ball from the definitions: decompositions are maximal sets
/// of pairwise disjoint curves; a move swaps one curve for one meeting it
/// minimally in the complement of the others (1 in a one-holed torus, 2 in
/// a four-holed sphere, told apart by whether a fixed curve separates off
/// a genus-one piece).
fn oracle_ball_profile(u: &Universe, seed: &PantsDecomposition, radius: u32) -> Vec<usize> {
    let tri = u.tri;
    let sep: Vec<bool> = u.ids().map(|c| separation_data(tri, u.curve(c)).unwrap().separating).collect();
    let m = |fixed: &[CurveId]| -> u64 {
        let torus_piece = u.surface.genus == 1 && fixed.iter().all(|&f| sep[f as usize]);
        if torus_piece {
            1
        } else {
            2
        }
    };
    let mut depth = BTreeMap::from([(seed.clone(), 0u32)]);
    let mut queue = VecDeque::from([seed.clone()]);
    while let Some(p) = queue.pop_front() {
        let d = depth[&p];
        if d == radius {
            continue;
        }
        for &a in &p.0 {
            let fixed = p.without(a);
            for b in u.ids() {
                if b == a || fixed.contains(&b) || !fixed.iter().all(|&f| u.disjoint_pair(f, b)) {
                    continue;
                }
                if u.intersection(a, b) != m(&fixed) {
                    continue;
                }
                let q = p.swap(a, b);
                if !depth.contains_key(&q) {
                    depth.insert(q.clone(), d + 1);
                    queue.push_back(q);
                }
            }
        }
    }
    let mut profile = vec![0; radius as usize + 1];
    for d in depth.values() {
        profile[*d as usize] += 1;
    }
    profile
}

#[test]
fn balls_match_brute_force_oracle() {
    for ((g, r), w, radius) in [((0, 5), 4, 2), ((1, 2), 4, 2), ((0, 5), 5, 3), ((1, 2), 5, 2)] {
        let u = Universe::new(SurfaceId::new(g, r), w).unwrap();
        let seed = standard_seed(&u).unwrap();
        let ball = build_ball(&u, &seed, radius).unwrap();
        assert_eq!(profile(&ball), oracle_ball_profile(&u, &seed, radius), "S{g},{r} W{w} R{radius}");
    }
}

#[test]
fn ball_sizes_frozen() {
    // Frozen from `oracle_ball_profile`.
    let cases = [((0, 5), 4, 2, vec![1, 16, 102]), ((1, 2), 4, 2, vec![1, 14, 70])];
    for ((g, r), w, radius, expected) in cases {
        let u = Universe::new(SurfaceId::new(g, r), w).unwrap();
        let ball = build_ball(&u, &standard_seed(&u).unwrap(), radius).unwrap();
        assert_eq!(profile(&ball), expected, "S{g},{r} W{w} R{radius}");
    }
}

#[test]
fn induced_subgraph_keeps_edges() {
    let u = Universe::new(SurfaceId::new(0, 5), 4).unwrap();
    let ball = build_ball(&u, &standard_seed(&u).unwrap(), 2).unwrap();
    let some: Vec<PantsDecomposition> = ball.vertices.iter().take(12).map(|v| v.curves.clone()).collect();
    let sub = induced_subgraph(&u, &some).unwrap();
    assert_eq!(sub.len(), some.len());
    for e in &sub.edges {
        let (a, b) = (ball.vertex_id(sub.curves(e.source)).unwrap(), ball.vertex_id(sub.curves(e.target)).unwrap());
        assert!(ball.has_edge(a, b));
    }
    let inner: BTreeSet<usize> = (0..sub.len()).filter(|&v| !sub.is_frontier(v)).collect();
    assert_eq!(inner.len(), sub.len());
}

#[test]
fn unsupported_surfaces_are_rejected() {
    assert!(matches!(Universe::new(SurfaceId::new(2, 0), 3), Err(Error::Unsupported(_))));
}
