//! Edge weights for a skeleton by constraint generation.
//!
//! Designated paths get upper rows `len <= target`. Lower rows `len >= target`
//! are added for whatever path is currently too short, found by Dijkstra. The
//! LP stays as close as it can to a reference weighting. An infeasible round
//! yields a pair of path flows witnessing that no weights exist.

use crate::error::{Error, Result};
use crate::graph::PlanarGraph;
use crate::paths::path_tree;
use crate::rational::{fmt_q, q, Q};
use crate::simplex::{DualSimplex, Outcome};
use log::debug;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// A designated path between terminals `s` and `t` (indices into the
/// problem's terminal list).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Designated {
    pub s: usize,
    pub t: usize,
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct WeightProblem {
    /// Topology only; weights are ignored.
    pub graph: PlanarGraph,
    /// Vertex of every terminal.
    pub terminals: Vec<usize>,
    pub designated: Vec<Designated>,
    /// Target distance for every unordered terminal pair `(i, j)`, `i < j`.
    pub targets: BTreeMap<(usize, usize), Q>,
    /// Weights the solution should stay close to.
    pub reference: Option<Vec<Q>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlowPath {
    pub s: usize,
    pub t: usize,
    pub edges: Vec<usize>,
    #[serde(with = "crate::rational::serde_q")]
    pub flow: Q,
}

/// Flows `F` on designated paths and `F'` on other paths such that `F`
/// covers `F'` on every edge yet costs strictly less.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FarkasCertificate {
    pub canonical: Vec<FlowPath>,
    pub paths: Vec<FlowPath>,
    #[serde(with = "crate::rational::serde_q_vec")]
    pub edge_canonical: Vec<Q>,
    #[serde(with = "crate::rational::serde_q_vec")]
    pub edge_paths: Vec<Q>,
    #[serde(with = "crate::rational::serde_q")]
    pub cost_canonical: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub cost_paths: Q,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub weights: Vec<Q>,
    /// Separation rounds.
    pub rounds: usize,
    pub pivots: usize,
    pub cuts: usize,
}

fn pair(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl WeightProblem {
    fn target(&self, s: usize, t: usize) -> Result<&Q> {
        self.targets.get(&pair(s, t)).ok_or_else(|| Error::Input(format!("no target for terminals {s}, {t}")))
    }

    /// Pairs whose designated path must be exact.
    pub fn equality_pairs(&self) -> BTreeSet<(usize, usize)> {
        self.designated.iter().map(|d| pair(d.s, d.t)).collect()
    }

    fn with_weights(&self, w: &[Q]) -> PlanarGraph {
        let mut g = self.graph.clone();
        for (e, x) in g.edges.iter_mut().zip(w) {
            e.w = x.clone();
        }
        g
    }

    /// Pairs whose distance under `w` falls short of the target, with a
    /// shortest path for each.
    fn violations(&self, w: &[Q]) -> Result<Vec<(usize, usize, Vec<usize>, Q)>> {
        let g = self.with_weights(w);
        let mut out = Vec::new();
        for s in 0..self.terminals.len() {
            let tree = path_tree(&g, self.terminals[s]);
            for t in s + 1..self.terminals.len() {
                let p = tree.path_to(&g, self.terminals[t])?;
                if &p.length < self.target(s, t)? {
                    out.push((s, t, p.edges, p.length));
                }
            }
        }
        Ok(out)
    }
}

/// Row kinds kept to translate multipliers back into flows.
enum RowKind {
    Upper(usize),
    Lower(usize, usize, Vec<usize>),
    /// `w_e >= 0`, needed only where the reference is positive.
    Bound,
}

pub fn default_cap(p: &WeightProblem) -> usize {
    10 * p.targets.len().max(1) * p.graph.m().max(1)
}

/// Minimizes the L1 distance to the reference weights `w0` (zero when the
/// problem has none), writing `w = w0 + up - down`. Both parts have unit cost,
/// so the dual simplex starts from the slack basis. Edges on no designated
/// path are fixed at the largest target, where they cannot shorten any
/// terminal pair.
pub fn solve(p: &WeightProblem, cap: usize) -> Result<Solution> {
    let m = p.graph.m();
    let w0 = p.reference.clone().unwrap_or_else(|| vec![Q::zero(); m]);
    if w0.len() != m || w0.iter().any(|x| x.is_negative()) {
        return Err(Error::Input("reference weights must be one nonnegative value per edge".into()));
    }
    let top = p.targets.values().max().cloned().unwrap_or_else(Q::zero);
    let mut free = vec![false; m];
    for d in &p.designated {
        for &e in &d.edges {
            free[e] = true;
        }
    }
    // Columns: `up[e]` for every free edge, `down[e]` where `w0[e] > 0`.
    let mut up = vec![usize::MAX; m];
    let mut down = vec![usize::MAX; m];
    let mut n = 0;
    for e in (0..m).filter(|&e| free[e]) {
        up[e] = n;
        n += 1;
        if w0[e].is_positive() {
            down[e] = n;
            n += 1;
        }
    }
    let mut lp = DualSimplex::new(n);
    let mut kinds = Vec::new();
    // `sign * len(P) <= rhs`, shifted by the reference.
    let add = |lp: &mut DualSimplex, edges: &[usize], sign: i64, rhs: Q| -> Result<()> {
        let mut b = rhs;
        let mut coeffs = Vec::new();
        for &e in edges {
            if !free[e] {
                return Err(Error::Internal(format!("edge {e} is on no designated path")));
            }
            b -= &w0[e] * q(sign);
            coeffs.push((up[e], q(sign)));
            if down[e] != usize::MAX {
                coeffs.push((down[e], q(-sign)));
            }
        }
        lp.add_row(&coeffs, b);
        Ok(())
    };
    for (i, d) in p.designated.iter().enumerate() {
        let t = p.target(d.s, d.t)?.clone();
        add(&mut lp, &d.edges, 1, t.clone())?;
        kinds.push(RowKind::Upper(i));
        add(&mut lp, &d.edges, -1, -t)?;
        kinds.push(RowKind::Lower(d.s, d.t, d.edges.clone()));
    }
    for e in 0..m {
        if down[e] != usize::MAX {
            lp.add_row(&[(down[e], q(1))], w0[e].clone());
            kinds.push(RowKind::Bound);
        }
    }
    let weights = |lp: &DualSimplex| -> Vec<Q> {
        let x = lp.primal();
        (0..m)
            .map(|e| {
                if !free[e] {
                    return top.clone();
                }
                let mut w = &w0[e] + &x[up[e]];
                if down[e] != usize::MAX {
                    w -= &x[down[e]];
                }
                w
            })
            .collect()
    };
    let mut rounds = 0;
    let mut cuts = 0;
    loop {
        rounds += 1;
        if rounds > cap {
            return Err(Error::IterationCap(cap));
        }
        match lp.solve(usize::MAX) {
            Some(Outcome::Optimal) => {}
            Some(Outcome::Infeasible(y)) => return Err(Error::Infeasible(Box::new(certificate(p, &kinds, &y)?))),
            None => return Err(Error::Internal("pivot budget exhausted".into())),
        }
        let w = weights(&lp);
        let viol = p.violations(&w)?;
        debug!(
            "weights round {rounds}: distance {}, {} violated pairs, {} rows, {} pivots",
            fmt_q(&lp.objective()),
            viol.len(),
            lp.rows(),
            lp.pivots
        );
        if viol.is_empty() {
            return Ok(Solution { weights: w, rounds, pivots: lp.pivots, cuts });
        }
        for (s, t, edges, len) in viol {
            let target = p.target(s, t)?.clone();
            let lhs: Q = edges.iter().map(|&e| &w[e]).sum();
            if lhs != len || lhs >= target {
                return Err(Error::Internal("separation produced a non-violated cut".into()));
            }
            add(&mut lp, &edges, -1, -target)?;
            kinds.push(RowKind::Lower(s, t, edges));
            cuts += 1;
        }
    }
}

/// Multipliers of the path rows alone already form the certificate: the
/// bound rows only ever weaken the combination.
fn certificate(p: &WeightProblem, kinds: &[RowKind], y: &[Q]) -> Result<FarkasCertificate> {
    let m = p.graph.m();
    let mut cert = FarkasCertificate {
        canonical: Vec::new(),
        paths: Vec::new(),
        edge_canonical: vec![Q::zero(); m],
        edge_paths: vec![Q::zero(); m],
        cost_canonical: Q::zero(),
        cost_paths: Q::zero(),
    };
    for (kind, yi) in kinds.iter().zip(y) {
        if yi.is_zero() {
            continue;
        }
        match kind {
            RowKind::Upper(i) => {
                let d = &p.designated[*i];
                cert.canonical.push(FlowPath { s: d.s, t: d.t, edges: d.edges.clone(), flow: yi.clone() });
            }
            RowKind::Lower(s, t, edges) => {
                cert.paths.push(FlowPath { s: *s, t: *t, edges: edges.clone(), flow: yi.clone() });
            }
            RowKind::Bound => {}
        }
    }
    tally(p, &mut cert)?;
    Ok(cert)
}

fn tally(p: &WeightProblem, cert: &mut FarkasCertificate) -> Result<()> {
    let m = p.graph.m();
    cert.edge_canonical = vec![Q::zero(); m];
    cert.edge_paths = vec![Q::zero(); m];
    cert.cost_canonical = Q::zero();
    cert.cost_paths = Q::zero();
    for fp in &cert.canonical {
        for &e in &fp.edges {
            cert.edge_canonical[e] += &fp.flow;
        }
        cert.cost_canonical += &fp.flow * p.target(fp.s, fp.t)?;
    }
    for fp in &cert.paths {
        for &e in &fp.edges {
            cert.edge_paths[e] += &fp.flow;
        }
        cert.cost_paths += &fp.flow * p.target(fp.s, fp.t)?;
    }
    Ok(())
}

fn is_path(g: &PlanarGraph, from: usize, to: usize, edges: &[usize]) -> bool {
    edges.iter().all(|&e| e < g.m()) && g.darts_of_edges(from, edges).map_or(false, |d| {
        d.last().map_or(from == to, |&x| g.head(x) == to)
    })
}

/// Checks a certificate from scratch: flows are nonnegative and follow real
/// paths, designated flows use designated paths, `F` covers `F'` on every
/// edge and costs strictly less.
pub fn verify_certificate(cert: &FarkasCertificate, p: &WeightProblem) -> bool {
    let designated: BTreeSet<(usize, usize, &[usize])> =
        p.designated.iter().map(|d| (d.s, d.t, d.edges.as_slice())).collect();
    let flows_ok = |list: &[FlowPath]| {
        list.iter().all(|fp| {
            !fp.flow.is_negative()
                && fp.s < p.terminals.len()
                && fp.t < p.terminals.len()
                && is_path(&p.graph, p.terminals[fp.s], p.terminals[fp.t], &fp.edges)
        })
    };
    if !flows_ok(&cert.canonical) || !flows_ok(&cert.paths) {
        return false;
    }
    if !cert.canonical.iter().all(|fp| designated.contains(&(fp.s, fp.t, fp.edges.as_slice()))) {
        return false;
    }
    let mut fresh = cert.clone();
    if tally(p, &mut fresh).is_err() {
        return false;
    }
    (0..p.graph.m()).all(|e| fresh.edge_canonical[e] >= fresh.edge_paths[e])
        && fresh.cost_canonical < fresh.cost_paths
}

/// Independent check of a weight solution: every designated path is within
/// its target, every pair is at least its target, designated pairs exactly.
pub fn check_solution(p: &WeightProblem, w: &[Q]) -> Result<()> {
    let g = p.with_weights(w);
    for d in &p.designated {
        let len: Q = d.edges.iter().map(|&e| &w[e]).sum();
        if &len > p.target(d.s, d.t)? {
            return Err(Error::Internal(format!("designated path {}-{} too long", d.s, d.t)));
        }
    }
    let eq = p.equality_pairs();
    for s in 0..p.terminals.len() {
        let dist = crate::paths::distances(&g, p.terminals[s]);
        for t in s + 1..p.terminals.len() {
            let got = dist[p.terminals[t]].clone().ok_or(Error::Unreachable(s, t))?;
            let want = p.target(s, t)?;
            if &got < want || (eq.contains(&(s, t)) && &got != want) {
                return Err(Error::Internal(format!(
                    "pair {s}-{t}: distance {} against target {}",
                    fmt_q(&got),
                    fmt_q(want)
                )));
            }
        }
    }
    Ok(())
}
