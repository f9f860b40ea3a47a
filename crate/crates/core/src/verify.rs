//! Independent checks of an emulator against its input graph. Only plain
//! Dijkstra and the embedding checks of the graph module are used.

use crate::assemble::Emulator;
use crate::error::{Error, Result};
use crate::graph::PlanarGraph;
use crate::instance::TerminalInstance;
use crate::paths::distances;
use crate::rational::{fmt_q, q, Q};
use crate::weights::{Designated, WeightProblem};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, Serialize)]
pub struct PairRow {
    pub a: i64,
    pub b: i64,
    pub dist_g: Option<String>,
    pub dist_h: Option<String>,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub pairs: Vec<PairRow>,
    pub planar: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub planarity_error: Option<String>,
    pub n_g: usize,
    pub n_h: usize,
    pub exact: bool,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.exact && self.planar
    }

    pub fn mismatches(&self) -> Vec<(i64, i64)> {
        self.pairs.iter().filter(|r| !r.equal).map(|r| (r.a, r.b)).collect()
    }
}

fn unique(ts: Vec<usize>) -> Vec<usize> {
    let mut seen = BTreeSet::new();
    ts.into_iter().filter(|t| seen.insert(*t)).collect()
}

/// Compares terminal distances of `g` and `h`, matching terminals by id.
pub fn verify_emulator(g: &TerminalInstance, h: &Emulator) -> Result<Report> {
    let tg = unique(g.terminals());
    let by_label: BTreeMap<i64, usize> = h.terminals.iter().map(|&t| (h.labels[t], t)).collect();
    let th = tg
        .iter()
        .map(|&t| {
            by_label.get(&g.labels[t]).copied().ok_or_else(|| Error::Input(format!("terminal {} missing from emulator", g.labels[t])))
        })
        .collect::<Result<Vec<_>>>()?;
    let planarity = h.graph.check_euler();
    let show = |d: &Option<Q>| d.as_ref().map(fmt_q);
    let mut pairs = Vec::new();
    for i in 0..tg.len() {
        let dg = distances(&g.graph, tg[i]);
        let dh = distances(&h.graph, th[i]);
        for j in i + 1..tg.len() {
            let (x, y) = (&dg[tg[j]], &dh[th[j]]);
            pairs.push(PairRow { a: g.labels[tg[i]], b: g.labels[tg[j]], dist_g: show(x), dist_h: show(y), equal: x == y });
        }
    }
    let exact = pairs.iter().all(|r| r.equal);
    Ok(Report {
        pairs,
        planar: planarity.is_ok(),
        planarity_error: planarity.err().map(|e| e.to_string()),
        n_g: g.graph.n(),
        n_h: h.graph.n(),
        exact,
    })
}

/// The input graph viewed as its own emulator.
pub fn identity_emulator(g: &TerminalInstance) -> Emulator {
    Emulator {
        graph: g.graph.clone(),
        terminals: unique(g.terminals()),
        labels: g.labels.clone(),
        provenance: vec![crate::assemble::Provenance::Baseline; g.graph.m()],
    }
}

/// Adds one to the weight of edge `e`.
pub fn corrupt(h: &Emulator, e: usize) -> Emulator {
    let mut out = h.clone();
    out.graph.edges[e].w += q(1);
    out
}

/// A star on four terminals whose designated paths cross at the centre and
/// whose targets break the four-point condition: the two crossing pairs are
/// short, the two pairs around them long.
pub fn quadrangle_violation() -> WeightProblem {
    let mut g = PlanarGraph::new(5);
    let spokes: Vec<usize> = (0..4).map(|t| g.push_edge(4, t, q(1))).collect();
    g.rotation = vec![vec![spokes[0]], vec![spokes[1]], vec![spokes[2]], vec![spokes[3]], spokes.clone()];
    let targets = BTreeMap::from([
        ((0, 2), q(2)),
        ((1, 3), q(2)),
        ((0, 1), q(3)),
        ((1, 2), q(3)),
        ((2, 3), q(3)),
        ((0, 3), q(3)),
    ]);
    WeightProblem {
        graph: g,
        terminals: vec![0, 1, 2, 3],
        designated: vec![
            Designated { s: 0, t: 2, edges: vec![spokes[0], spokes[2]] },
            Designated { s: 1, t: 3, edges: vec![spokes[1], spokes[3]] },
        ],
        targets,
        reference: None,
    }
}
