//! Seeded instance generators: grids with rectangular holes, optionally
//! triangulated and thinned.

use crate::error::{Error, Result};
use crate::graph::{dart, from_coordinates, PlanarGraph};
use crate::instance::{TerminalFace, TerminalInstance};
use crate::rational::{q2, Q};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    GridRing,
    RandomPlanar,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct InstanceSpec {
    pub kind: Kind,
    pub f: usize,
    pub k: usize,
    #[serde(default)]
    pub rows: Option<usize>,
    #[serde(default)]
    pub cols: Option<usize>,
    #[serde(default)]
    pub terminals_per_face: Option<Vec<usize>>,
    #[serde(default = "default_wmax")]
    pub max_weight: u32,
    #[serde(default = "default_denom")]
    pub max_denominator: u32,
    pub seed: u64,
}

fn default_wmax() -> u32 {
    9
}

fn default_denom() -> u32 {
    2
}

impl InstanceSpec {
    pub fn new(kind: Kind, f: usize, k: usize, seed: u64) -> Self {
        InstanceSpec {
            kind,
            f,
            k,
            rows: None,
            cols: None,
            terminals_per_face: None,
            max_weight: default_wmax(),
            max_denominator: default_denom(),
            seed,
        }
    }

    fn dims(&self) -> (usize, usize) {
        let holes = self.f.saturating_sub(1);
        let rows = self.rows.unwrap_or(8);
        let cols = self.cols.unwrap_or((4 + 5 * holes).max(8));
        (rows, cols)
    }

    pub fn counts(&self) -> Result<Vec<usize>> {
        if self.f == 0 {
            return Err(Error::SpecInfeasible("f must be at least 1".into()));
        }
        let counts = match &self.terminals_per_face {
            Some(c) => c.clone(),
            None => (0..self.f).map(|r| self.k / self.f + usize::from(r < self.k % self.f)).collect(),
        };
        if counts.len() != self.f || counts.iter().sum::<usize>() != self.k {
            return Err(Error::SpecInfeasible("terminals_per_face must have f entries summing to k".into()));
        }
        if counts.iter().any(|&c| c == 0) {
            return Err(Error::SpecInfeasible("every face needs a terminal".into()));
        }
        Ok(counts)
    }
}

/// The two-face instance used throughout the tests.
pub fn two_ring() -> TerminalInstance {
    generate(&InstanceSpec::new(Kind::GridRing, 2, 8, 1)).expect("fixed spec is feasible")
}

struct Hole {
    r0: usize,
    r1: usize,
    c0: usize,
    c1: usize,
}

pub fn generate(spec: &InstanceSpec) -> Result<TerminalInstance> {
    let counts = spec.counts()?;
    let (rows, cols) = spec.dims();
    let holes_n = spec.f - 1;
    if rows < 2 || cols < 2 {
        return Err(Error::SpecInfeasible("grid must be at least 2x2".into()));
    }
    if holes_n > 0 && (rows < 5 || cols < 5 * holes_n) {
        return Err(Error::SpecInfeasible(format!("{rows}x{cols} grid cannot host {holes_n} holes")));
    }
    if rows * cols > 400 {
        return Err(Error::SpecInfeasible("grid exceeds 400 vertices".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    // Holes sit in vertical bands separated by at least two kept columns.
    let band = if holes_n > 0 { (cols - 2) / holes_n } else { 0 };
    let mut holes = Vec::new();
    for h in 0..holes_n {
        let lo = 2 + h * band;
        let hi = (lo + band).min(cols - 2) - 3;
        let c0 = rng.gen_range(lo..=lo + (hi.saturating_sub(lo)) / 2);
        let c1 = rng.gen_range(c0..=hi.max(c0));
        let r0 = rng.gen_range(2..=(rows - 3).max(2).min(3));
        let r1 = rng.gen_range(r0..=(rows - 3).max(r0));
        holes.push(Hole { r0, r1, c0, c1 });
    }
    let removed = |i: usize, j: usize| holes.iter().any(|h| (h.r0..=h.r1).contains(&i) && (h.c0..=h.c1).contains(&j));

    let mut index = HashMap::new();
    let mut coords = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            if !removed(i, j) {
                index.insert((i, j), coords.len());
                coords.push((j as i64, -(i as i64)));
            }
        }
    }
    let weight = |rng: &mut ChaCha8Rng| -> Q {
        let n = rng.gen_range(1..=spec.max_weight.max(1)) as i64;
        let d = rng.gen_range(1..=spec.max_denominator.max(1)) as i64;
        q2(n, d)
    };
    // Edges that bound a designated face are never thinned.
    let protected = |a: (usize, usize), b: (usize, usize)| {
        let on_outer = |p: (usize, usize)| p.0 == 0 || p.1 == 0 || p.0 == rows - 1 || p.1 == cols - 1;
        let near_hole = |p: (usize, usize)| {
            holes.iter().any(|h| {
                p.0 + 1 >= h.r0 && p.0 <= h.r1 + 1 && p.1 + 1 >= h.c0 && p.1 <= h.c1 + 1
            })
        };
        (on_outer(a) && on_outer(b)) || (near_hole(a) && near_hole(b))
    };
    let mut edges: Vec<(usize, usize, Q)> = Vec::new();
    let mut thinnable = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            let Some(&a) = index.get(&(i, j)) else { continue };
            for (di, dj) in [(0usize, 1usize), (1, 0)] {
                if let Some(&b) = index.get(&(i + di, j + dj)) {
                    if !protected((i, j), (i + di, j + dj)) {
                        thinnable.push(edges.len());
                    }
                    edges.push((a, b, weight(&mut rng)));
                }
            }
            if spec.kind == Kind::RandomPlanar {
                let cell = [(i, j), (i, j + 1), (i + 1, j), (i + 1, j + 1)];
                if cell.iter().all(|p| index.contains_key(p)) {
                    let (p, q) = if rng.gen_bool(0.5) { (cell[0], cell[3]) } else { (cell[1], cell[2]) };
                    thinnable.push(edges.len());
                    edges.push((index[&p], index[&q], weight(&mut rng)));
                }
            }
        }
    }
    if spec.kind == Kind::RandomPlanar {
        // Drop a random quarter of the interior edges while staying connected.
        thinnable.shuffle(&mut rng);
        let mut keep = vec![true; edges.len()];
        for &e in thinnable.iter().take(thinnable.len() / 4) {
            keep[e] = false;
            if !connected(coords.len(), &edges, &keep) {
                keep[e] = true;
            }
        }
        edges = edges.into_iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| e).collect();
    }
    let g = from_coordinates(&coords, &edges);
    let faces = g.check_euler()?;

    let find_dart = |g: &PlanarGraph, from: usize, to: usize| -> usize {
        for (e, ed) in g.edges.iter().enumerate() {
            if ed.u == from && ed.v == to {
                return dart(e, 0);
            }
            if ed.v == from && ed.u == to {
                return dart(e, 1);
            }
        }
        unreachable!("boundary edge exists")
    };
    let mut face_walks = Vec::new();
    // Heading west along the top row keeps the outer face on the right.
    let d = find_dart(&g, index[&(0, 1)], index[&(0, 0)]);
    face_walks.push(faces.walks[faces.face_of[d]].clone());
    for h in &holes {
        let d = find_dart(&g, index[&(h.r0 - 1, h.c0 - 1)], index[&(h.r0 - 1, h.c0)]);
        face_walks.push(faces.walks[faces.face_of[d]].clone());
    }

    let mut tfaces = Vec::new();
    for (walk, &cnt) in face_walks.into_iter().zip(&counts) {
        let mut seen = Vec::new();
        for &d in &walk {
            let v = g.tail(d);
            if !seen.contains(&v) {
                seen.push(v);
            }
        }
        if cnt > seen.len() {
            return Err(Error::SpecInfeasible(format!(
                "{cnt} terminals requested on a face with {} boundary vertices",
                seen.len()
            )));
        }
        let mut picks: Vec<usize> = (0..seen.len()).collect();
        picks.shuffle(&mut rng);
        picks.truncate(cnt);
        picks.sort();
        let terminals = picks.into_iter().map(|p| seen[p]).collect();
        tfaces.push(TerminalFace { walk, terminals });
    }
    let mut graph = g;
    graph.outer = Some(tfaces[0].walk[0]);
    let labels = (0..graph.n() as i64).collect();
    let inst = TerminalInstance { graph, labels, faces: tfaces };
    inst.validate()?;
    Ok(inst)
}

fn connected(n: usize, edges: &[(usize, usize, Q)], keep: &[bool]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for (i, (u, v, _)) in edges.iter().enumerate() {
        if keep[i] {
            adj[*u].push(*v);
            adj[*v].push(*u);
        }
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_ring_is_valid_and_deterministic() {
        let a = two_ring();
        let b = two_ring();
        assert_eq!(a.f(), 2);
        assert_eq!(a.k(), 8);
        assert_eq!(a.graph.edges, b.graph.edges);
        assert_eq!(a.faces[1].terminals, b.faces[1].terminals);
    }

    #[test]
    fn one_face_small_grid() {
        let mut s = InstanceSpec::new(Kind::GridRing, 1, 4, 3);
        s.rows = Some(4);
        s.cols = Some(4);
        let inst = generate(&s).unwrap();
        assert_eq!(inst.graph.n(), 16);
        assert_eq!(inst.k(), 4);
    }

    #[test]
    fn too_many_terminals_is_infeasible() {
        let mut s = InstanceSpec::new(Kind::GridRing, 1, 20, 3);
        s.rows = Some(3);
        s.cols = Some(3);
        assert!(matches!(generate(&s), Err(Error::SpecInfeasible(_))));
    }

    #[test]
    fn all_kinds_generate() {
        for kind in [Kind::GridRing, Kind::RandomPlanar] {
            for f in 1..=3 {
                for seed in 0..5 {
                    let inst = generate(&InstanceSpec::new(kind, f, 3 * f + 1, seed)).unwrap();
                    assert_eq!(inst.f(), f);
                    assert!(inst.graph.n() <= 400);
                }
            }
        }
    }
}

/// The seeded benchmark suite: `n` specs cycling through both generators,
/// one to three faces and four to twelve terminals.
pub fn suite(n: usize) -> Vec<InstanceSpec> {
    (0..n)
        .map(|i| {
            let kind = if i % 2 == 0 { Kind::GridRing } else { Kind::RandomPlanar };
            let f = 1 + (i / 2) % 3;
            let k = [4, 6, 8, 10, 12][(i / 6) % 5];
            InstanceSpec::new(kind, f, k, i as u64)
        })
        .collect()
}
