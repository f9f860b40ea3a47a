use planar_emulator::graph::from_coordinates;
use planar_emulator::paths::{distances, shortest_path};
use planar_emulator::rational::q;
use planar_emulator::verify::quadrangle_violation;
use planar_emulator::weights::{check_solution, default_cap, solve, verify_certificate, Designated, WeightProblem};
use planar_emulator::Error;
use proptest::prelude::*;
use std::collections::BTreeMap;

#[test]
fn quadrangle_violation_has_a_valid_certificate() {
    let p = quadrangle_violation();
    let cert = match solve(&p, default_cap(&p)) {
        Err(Error::Infeasible(c)) => c,
        other => panic!("expected infeasible, got {:?}", other.map(|s| s.weights)),
    };
    assert!(verify_certificate(&cert, &p));
    assert!(cert.cost_canonical < cert.cost_paths);
}

#[test]
fn tampered_certificates_fail() {
    let p = quadrangle_violation();
    let Err(Error::Infeasible(cert)) = solve(&p, default_cap(&p)) else { panic!("expected infeasible") };

    let mut no_paths = (*cert).clone();
    for fp in &mut no_paths.paths {
        fp.flow = q(0);
    }
    assert!(!verify_certificate(&no_paths, &p));

    let mut negative = (*cert).clone();
    negative.canonical[0].flow = q(-1);
    assert!(!verify_certificate(&negative, &p));

    let mut off_design = (*cert).clone();
    // Spokes 0 and 1 form a path between terminals 0 and 1, not a designated one.
    off_design.canonical[0].s = 0;
    off_design.canonical[0].t = 1;
    off_design.canonical[0].edges = vec![0, 1];
    assert!(!verify_certificate(&off_design, &p));
}

/// 3x3 grid with corner terminals, designated paths and targets taken from a
/// hidden weighting, so the problem is feasible.
fn hidden_problem(w: &[i64]) -> WeightProblem {
    let coords: Vec<(i64, i64)> = (0..9).map(|v| ((v % 3) as i64, (v / 3) as i64)).collect();
    let mut edges = Vec::new();
    for v in 0..9usize {
        if v % 3 < 2 {
            edges.push((v, v + 1, q(w[edges.len()])));
        }
        if v / 3 < 2 {
            edges.push((v, v + 3, q(w[edges.len()])));
        }
    }
    let g = from_coordinates(&coords, &edges);
    let terminals = vec![0, 2, 8, 6];
    let mut targets = BTreeMap::new();
    let mut designated = Vec::new();
    for s in 0..4 {
        let d = distances(&g, terminals[s]);
        for t in s + 1..4 {
            targets.insert((s, t), d[terminals[t]].clone().unwrap());
            if (t - s) % 2 == 1 {
                let p = shortest_path(&g, terminals[s], terminals[t]).unwrap();
                designated.push(Designated { s, t, edges: p.edges });
            }
        }
    }
    WeightProblem { graph: g, terminals, designated, targets, reference: None }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn feasible_problems_are_solved_exactly(w in prop::collection::vec(1i64..7, 12)) {
        let p = hidden_problem(&w);
        let sol = solve(&p, default_cap(&p)).unwrap();
        check_solution(&p, &sol.weights).unwrap();
        prop_assert!(sol.weights.iter().all(|x| *x >= q(0)));
    }

    #[test]
    fn reference_weights_that_fit_are_kept(w in prop::collection::vec(1i64..7, 12)) {
        let mut p = hidden_problem(&w);
        p.reference = Some(p.graph.edges.iter().map(|e| e.w.clone()).collect());
        let sol = solve(&p, default_cap(&p)).unwrap();
        check_solution(&p, &sol.weights).unwrap();
        // The hidden weighting is itself feasible, at distance zero, so on
        // every designated edge it survives.
        for d in &p.designated {
            for &e in &d.edges {
                prop_assert_eq!(&sol.weights[e], &p.graph.edges[e].w);
            }
        }
    }
}
