use planar_emulator::graph::from_coordinates;
use planar_emulator::paths::{distances, path_tree, shortest_path};
use planar_emulator::rational::{fmt_q, parse_q, q, q2};
use planar_emulator::PlanarGraph;
use proptest::prelude::*;

/// `r` by `c` grid with the given edge weights, row-major vertices.
fn grid(r: usize, c: usize, w: &[i64]) -> PlanarGraph {
    let coords: Vec<(i64, i64)> = (0..r * c).map(|v| ((v % c) as i64, (v / c) as i64)).collect();
    let mut edges = Vec::new();
    for v in 0..r * c {
        if v % c + 1 < c {
            edges.push((v, v + 1));
        }
        if v / c + 1 < r {
            edges.push((v, v + c));
        }
    }
    let edges: Vec<_> = edges.into_iter().enumerate().map(|(i, (a, b))| (a, b, q(w[i % w.len()]))).collect();
    from_coordinates(&coords, &edges)
}

#[test]
fn rational_text_forms() {
    assert_eq!(parse_q("3/4"), Some(q2(3, 4)));
    assert_eq!(parse_q("2.5"), Some(q2(5, 2)));
    assert_eq!(parse_q("-7"), Some(q(-7)));
    assert_eq!(parse_q("1/0"), None);
    assert_eq!(parse_q("abc"), None);
    assert_eq!(fmt_q(&q2(6, 4)), "3/2");
    assert_eq!(fmt_q(&q(5)), "5");
}

proptest! {
    #[test]
    fn rational_round_trip(n in -10_000i64..10_000, d in 1i64..500) {
        let x = q2(n, d);
        prop_assert_eq!(parse_q(&fmt_q(&x)), Some(x));
    }

    #[test]
    fn grids_satisfy_euler(r in 2usize..7, c in 2usize..7, w in prop::collection::vec(1i64..9, 1..20)) {
        let g = grid(r, c, &w);
        let faces = g.check_euler().unwrap();
        prop_assert_eq!(faces.count(), (r - 1) * (c - 1) + 1);
        // Every dart lies on exactly one face walk.
        let total: usize = faces.walks.iter().map(|w| w.len()).sum();
        prop_assert_eq!(total, 2 * g.m());
    }

    #[test]
    fn mirroring_twice_is_identity(r in 2usize..6, c in 2usize..6) {
        let g = grid(r, c, &[1]);
        let mut h = g.clone();
        h.mirror();
        h.check_euler().unwrap();
        h.mirror();
        prop_assert_eq!(&h.rotation, &g.rotation);
        prop_assert_eq!(h.outer, g.outer);
    }

    #[test]
    fn tie_broken_tree_agrees_with_dijkstra(r in 2usize..6, c in 2usize..6, w in prop::collection::vec(1i64..4, 1..20), s in 0usize..36) {
        let g = grid(r, c, &w);
        let s = s % g.n();
        let d = distances(&g, s);
        let t = path_tree(&g, s);
        for v in 0..g.n() {
            let p = t.path_to(&g, v).unwrap();
            prop_assert_eq!(Some(p.length.clone()), d[v].clone());
            prop_assert_eq!(g.total_weight(&p.edges), p.length);
        }
    }

    #[test]
    fn tie_broken_paths_are_consistent(r in 2usize..5, c in 2usize..5, s in 0usize..16, t in 0usize..16) {
        // Unit weights give many ties; the chosen path must not depend on direction.
        let g = grid(r, c, &[1]);
        let (s, t) = (s % g.n(), t % g.n());
        let mut a = shortest_path(&g, s, t).unwrap().edges;
        let mut b = shortest_path(&g, t, s).unwrap().edges;
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }
}
