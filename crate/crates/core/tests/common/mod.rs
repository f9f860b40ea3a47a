#![allow(dead_code)]

use planar_emulator::assemble::Emulator;
use planar_emulator::graph::PlanarGraph;
use planar_emulator::instance::{TerminalFace, TerminalInstance};
use planar_emulator::paths::{distances, shortest_path};
use planar_emulator::rational::q;
use std::collections::BTreeSet;

/// Instance with all `terminals` on the first face that holds them, in walk order.
pub fn one_face(g: PlanarGraph, terminals: &[usize]) -> TerminalInstance {
    let faces = g.faces().unwrap();
    let walk = faces
        .walks
        .iter()
        .find(|w| terminals.iter().all(|&t| w.iter().any(|&d| g.tail(d) == t)))
        .expect("a face holds every terminal")
        .clone();
    let mut ts = terminals.to_vec();
    ts.sort_by_key(|&t| walk.iter().position(|&d| g.tail(d) == t));
    let n = g.n();
    let inst = TerminalInstance { graph: g, labels: (0..n as i64).collect(), faces: vec![TerminalFace { walk, terminals: ts }] };
    inst.validate().unwrap();
    inst
}

/// Centre 0 with leaves 1, 2, 3 of weights 1, 2, 3.
pub fn star3() -> TerminalInstance {
    let mut g = PlanarGraph::new(4);
    let e: Vec<usize> = (1..4).map(|v| g.push_edge(0, v, q(v as i64))).collect();
    g.rotation = vec![e.clone(), vec![e[0]], vec![e[1]], vec![e[2]]];
    one_face(g, &[1, 2, 3])
}

/// Path 0 - 1 - 2 - 3 with weights 1, 2, 3 and terminals at the ends.
pub fn path2() -> TerminalInstance {
    let mut g = PlanarGraph::new(4);
    let e: Vec<usize> = (0..3).map(|i| g.push_edge(i, i + 1, q(i as i64 + 1))).collect();
    g.rotation = vec![vec![e[0]], vec![e[0], e[1]], vec![e[1], e[2]], vec![e[2]]];
    one_face(g, &[0, 3])
}

pub fn unique_terminals(inst: &TerminalInstance) -> Vec<usize> {
    let mut seen = BTreeSet::new();
    inst.terminals().into_iter().filter(|t| seen.insert(*t)).collect()
}

/// Number of terminal pairs whose distances differ, by plain Dijkstra on both
/// graphs with terminals matched by id.
pub fn mismatched_pairs(inst: &TerminalInstance, h: &Emulator) -> usize {
    let tg = unique_terminals(inst);
    let th: Vec<usize> = tg
        .iter()
        .map(|&t| *h.terminals.iter().find(|&&x| h.labels[x] == inst.labels[t]).expect("terminal present"))
        .collect();
    let mut bad = 0;
    for i in 0..tg.len() {
        let (dg, dh) = (distances(&inst.graph, tg[i]), distances(&h.graph, th[i]));
        for j in i + 1..tg.len() {
            if dg[tg[j]] != dh[th[j]] {
                bad += 1;
            }
        }
    }
    bad
}

/// An edge on the emulator's shortest path between its first two terminals.
pub fn edge_on_terminal_path(h: &Emulator) -> usize {
    shortest_path(&h.graph, h.terminals[0], h.terminals[1]).unwrap().edges[0]
}
