//! Quarter-grid emulators for the terminals of a single face.
//!
//! Terminal `i` (1-based) sits at `(i, -i)`. Grid vertex `p(i, j)`, `i < j`,
//! sits at `(j, -i)`: row `i` runs from terminal `i` right to column `m`, and
//! column `j` runs from row 1 down to terminal `j`. The designated path of a
//! pair follows its row and then its column.

use crate::assemble::{Emulator, Provenance};
use crate::error::{Error, Result};
use crate::graph::{from_coordinates, PlanarGraph};
use crate::rational::{q, serde_q, Q};
use crate::weights::{check_solution, default_cap, solve, Designated, WeightProblem};
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

#[derive(Clone, Debug)]
pub struct QuarterGrid {
    pub graph: PlanarGraph,
    /// Vertex of each terminal, in face order.
    pub terminals: Vec<usize>,
    /// Designated path per pair `(i, j)`, `i < j`, as edges from `i` to `j`.
    pub paths: BTreeMap<(usize, usize), Vec<usize>>,
}

pub fn build_quarter_grid(m: usize) -> QuarterGrid {
    let mut coords = Vec::new();
    let mut id = HashMap::new();
    for i in 1..=m {
        id.insert((i, i), coords.len());
        coords.push((i as i64, -(i as i64)));
    }
    for i in 1..=m {
        for j in i + 1..=m {
            id.insert((i, j), coords.len());
            coords.push((j as i64, -(i as i64)));
        }
    }
    let mut edges = Vec::new();
    let mut edge_id = HashMap::new();
    let mut add = |a: (usize, usize), b: (usize, usize), edges: &mut Vec<(usize, usize, Q)>| {
        edge_id.insert((a, b), edges.len());
        edges.push((id[&a], id[&b], q(1)));
    };
    for i in 1..=m {
        for j in i + 1..=m {
            // Row step into p(i, j), from the terminal or the previous column.
            add(if j == i + 1 { (i, i) } else { (i, j - 1) }, (i, j), &mut edges);
        }
    }
    for j in 2..=m {
        for i in 1..j {
            // Column step out of p(i, j) downwards.
            add((i, j), if i + 1 == j { (j, j) } else { (i + 1, j) }, &mut edges);
        }
    }
    let graph = from_coordinates(&coords, &edges);
    let mut paths = BTreeMap::new();
    for i in 1..=m {
        for j in i + 1..=m {
            let mut p = Vec::new();
            for c in i + 1..=j {
                p.push(edge_id[&(if c == i + 1 { (i, i) } else { (i, c - 1) }, (i, c))]);
            }
            for r in i..j {
                p.push(edge_id[&((r, j), if r + 1 == j { (j, j) } else { (r + 1, j) })]);
            }
            paths.insert((i - 1, j - 1), p);
        }
    }
    QuarterGrid { graph, terminals: (0..m).collect(), paths }
}

/// A quarter grid weighted so that every terminal pair is at its target.
pub fn oneface_emulator(targets: &BTreeMap<(usize, usize), Q>, m: usize) -> Result<(QuarterGrid, usize)> {
    let mut grid = build_quarter_grid(m);
    if m < 2 {
        return Ok((grid, 0));
    }
    let designated = grid.paths.iter().map(|(&(s, t), p)| Designated { s, t, edges: p.clone() }).collect();
    let problem = WeightProblem {
        graph: grid.graph.clone(),
        terminals: grid.terminals.clone(),
        designated,
        targets: targets.clone(),
        reference: None,
    };
    let sol = solve(&problem, default_cap(&problem))?;
    check_solution(&problem, &sol.weights)?;
    for (e, w) in grid.graph.edges.iter_mut().zip(sol.weights) {
        e.w = w;
    }
    Ok((grid, sol.rounds))
}

/// Target distances for one face, keyed by terminal id.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TargetsJson {
    /// Terminal ids in face order.
    pub terminals: Vec<i64>,
    pub distances: Vec<TargetJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TargetJson {
    pub a: i64,
    pub b: i64,
    #[serde(with = "serde_q")]
    pub d: Q,
}

/// Quarter-grid emulator for a standalone target file. Grid vertices get ids
/// above the largest terminal id.
pub fn emulator_from_targets(t: &TargetsJson) -> Result<Emulator> {
    let m = t.terminals.len();
    let pos: HashMap<i64, usize> = t.terminals.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    if pos.len() != m {
        return Err(Error::Input("duplicate terminal id".into()));
    }
    let mut targets = BTreeMap::new();
    for d in &t.distances {
        let (a, b) = match (pos.get(&d.a), pos.get(&d.b)) {
            (Some(&a), Some(&b)) if a != b => (a.min(b), a.max(b)),
            _ => return Err(Error::Input(format!("bad target pair {}-{}", d.a, d.b))),
        };
        if !d.d.is_positive() {
            return Err(Error::Input(format!("target {}-{} is not positive", d.a, d.b)));
        }
        targets.insert((a, b), d.d.clone());
    }
    if targets.len() != m * m.saturating_sub(1) / 2 {
        return Err(Error::Input("every terminal pair needs exactly one target".into()));
    }
    let (grid, _) = oneface_emulator(&targets, m)?;
    let mut next = t.terminals.iter().copied().max().unwrap_or(-1) + 1;
    let mut labels = vec![0; grid.graph.n()];
    for v in 0..grid.graph.n() {
        labels[v] = match grid.terminals.iter().position(|&x| x == v) {
            Some(i) => t.terminals[i],
            None => {
                next += 1;
                next - 1
            }
        };
    }
    let n_e = grid.graph.m();
    Ok(Emulator { graph: grid.graph, terminals: grid.terminals, labels, provenance: vec![Provenance::Oneface(0); n_e] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::distances;

    #[test]
    fn sizes() {
        for m in 1..=6 {
            let g = build_quarter_grid(m);
            assert_eq!(g.graph.n(), m + m * (m - 1) / 2);
            g.graph.check_euler().unwrap();
        }
    }

    #[test]
    fn paths_connect_their_terminals() {
        let g = build_quarter_grid(5);
        for (&(i, j), p) in &g.paths {
            let darts = g.graph.darts_of_edges(i, p).unwrap();
            assert_eq!(g.graph.head(*darts.last().unwrap()), j);
        }
    }

    #[test]
    fn two_terminals() {
        let targets = BTreeMap::from([((0, 1), q(7))]);
        let (g, _) = oneface_emulator(&targets, 2).unwrap();
        assert_eq!(distances(&g.graph, 0)[1], Some(q(7)));
    }

    #[test]
    fn triangle_metric() {
        let targets = BTreeMap::from([((0, 1), q(3)), ((1, 2), q(4)), ((0, 2), q(5))]);
        let (g, _) = oneface_emulator(&targets, 3).unwrap();
        for (&(a, b), d) in &targets {
            assert_eq!(distances(&g.graph, a)[b].as_ref(), Some(d));
        }
    }
}
