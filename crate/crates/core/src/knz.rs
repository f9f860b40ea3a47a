//! Baseline minor: the union of all terminal shortest paths with every
//! unbranched run between special vertices contracted to one edge.

use crate::assemble::{Emulator, Provenance};
use crate::error::{ensure, Result};
use crate::graph::PlanarGraph;
use crate::instance::TerminalInstance;
use crate::paths::path_tree;
use crate::rational::Q;
use std::collections::BTreeSet;

#[derive(Clone, Debug)]
pub struct Knz {
    pub emulator: Emulator,
    /// Endpoints of the common part of two terminal paths.
    pub special: BTreeSet<usize>,
    /// Shortest paths in the union, one per terminal pair.
    pub paths: usize,
}

/// Vertices where the shared stretch of two paths begins or ends.
fn intersection_ends(a: &[usize], b: &[usize], out: &mut BTreeSet<usize>) {
    let in_b: BTreeSet<usize> = b.iter().copied().collect();
    for (i, &v) in a.iter().enumerate() {
        if !in_b.contains(&v) {
            continue;
        }
        let prev = i > 0 && in_b.contains(&a[i - 1]);
        let next = i + 1 < a.len() && in_b.contains(&a[i + 1]);
        if !prev || !next {
            out.insert(v);
        }
    }
}

pub fn build_knz_minor(inst: &TerminalInstance) -> Result<Knz> {
    let g = &inst.graph;
    let mut seen = BTreeSet::new();
    let terminals: Vec<usize> = inst.terminals().into_iter().filter(|t| seen.insert(*t)).collect();
    let mut vpaths = Vec::new();
    let mut used = vec![false; g.m()];
    for (i, &s) in terminals.iter().enumerate() {
        let tree = path_tree(g, s);
        for &t in &terminals[i + 1..] {
            let p = tree.path_to(g, t)?;
            for &e in &p.edges {
                used[e] = true;
            }
            vpaths.push(p.vertices);
        }
    }
    let mut special = BTreeSet::new();
    for i in 0..vpaths.len() {
        for j in i + 1..vpaths.len() {
            intersection_ends(&vpaths[i], &vpaths[j], &mut special);
        }
    }

    let deg: Vec<usize> = (0..g.n()).map(|v| g.rotation[v].iter().filter(|&&e| used[e]).count()).collect();
    let term_set: BTreeSet<usize> = terminals.iter().copied().collect();
    let kept: Vec<usize> =
        (0..g.n()).filter(|&v| term_set.contains(&v) || (deg[v] > 0 && (special.contains(&v) || deg[v] != 2))).collect();
    let mut index = vec![usize::MAX; g.n()];
    for (i, &v) in kept.iter().enumerate() {
        index[v] = i;
    }

    // Walk each run from its first edge; `chain_of[e]` is the new edge.
    let mut h = PlanarGraph::new(kept.len());
    let mut chain_of = vec![usize::MAX; g.m()];
    for &u in &kept {
        for &e0 in &g.rotation[u] {
            if !used[e0] || chain_of[e0] != usize::MAX {
                continue;
            }
            let mut run = vec![e0];
            let mut w: Q = g.edges[e0].w.clone();
            let mut x = g.other(e0, u);
            let mut last = e0;
            while index[x] == usize::MAX {
                let &e = g.rotation[x].iter().find(|&&e| used[e] && e != last).expect("run vertex has degree two");
                w += &g.edges[e].w;
                run.push(e);
                last = e;
                x = g.other(e, x);
            }
            ensure!(x != u, "shortest-path union closes a loop at {u}");
            let ne = h.push_edge(index[u], index[x], w);
            for &e in &run {
                chain_of[e] = ne;
            }
        }
    }
    for (i, &v) in kept.iter().enumerate() {
        h.rotation[i] = g.rotation[v].iter().filter(|&&e| used[e]).map(|&e| chain_of[e]).collect();
    }
    h.check_euler()?;
    let m = h.m();
    let emulator = Emulator {
        graph: h,
        terminals: terminals.iter().map(|&t| index[t]).collect(),
        labels: kept.iter().map(|&v| inst.labels[v]).collect(),
        provenance: vec![Provenance::Baseline; m],
    };
    Ok(Knz { emulator, special, paths: vpaths.len() })
}

/// The bound `2 * C(C(k, 2), 2)` on special vertices.
pub fn special_bound(k: usize) -> usize {
    let p = k * k.saturating_sub(1) / 2;
    p * p.saturating_sub(1)
}
