//! Shortest paths with a graph-wide consistent tie-break.
//!
//! Paths are compared by `(length, hops, perturbation)` where the
//! perturbation of a path is `sum 2^e` over its edge ids. The key is additive,
//! symmetric under reversal, and distinct simple paths get distinct keys, so
//! optimal paths are unique and every subpath of an optimal path is optimal.

use crate::error::{Error, Result};
use crate::graph::PlanarGraph;
use crate::rational::Q;
use num_bigint::BigUint;
use num_traits::Zero;
use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PathKey {
    pub len: Q,
    pub hops: u32,
    pub pert: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TerminalPath {
    pub s: usize,
    pub t: usize,
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub length: Q,
}

/// Tie-broken shortest path tree from `s`: `(key, parent edge)` per vertex.
pub struct PathTree {
    pub source: usize,
    pub key: Vec<Option<PathKey>>,
    pub parent: Vec<Option<usize>>,
}

pub fn path_tree(g: &PlanarGraph, s: usize) -> PathTree {
    let n = g.n();
    let mut key: Vec<Option<PathKey>> = vec![None; n];
    let mut parent = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    key[s] = Some(PathKey { len: Q::zero(), hops: 0, pert: BigUint::zero() });
    heap.push(Reverse((key[s].clone().unwrap(), s)));
    while let Some(Reverse((k, x))) = heap.pop() {
        if done[x] {
            continue;
        }
        done[x] = true;
        for &e in &g.rotation[x] {
            let y = g.other(e, x);
            if done[y] {
                continue;
            }
            let mut pert = k.pert.clone();
            pert.set_bit(e as u64, true);
            let cand = PathKey { len: &k.len + &g.edges[e].w, hops: k.hops + 1, pert };
            let better = match &key[y] {
                None => true,
                Some(old) => cand.cmp(old) == Ordering::Less,
            };
            if better {
                key[y] = Some(cand.clone());
                parent[y] = Some(e);
                heap.push(Reverse((cand, y)));
            }
        }
    }
    PathTree { source: s, key, parent }
}

impl PathTree {
    pub fn path_to(&self, g: &PlanarGraph, t: usize) -> Result<TerminalPath> {
        let key = self.key[t].as_ref().ok_or(Error::Unreachable(self.source, t))?;
        let mut vertices = vec![t];
        let mut edges = Vec::new();
        let mut x = t;
        while x != self.source {
            let e = self.parent[x].expect("reached vertex has a parent");
            edges.push(e);
            x = g.other(e, x);
            vertices.push(x);
        }
        vertices.reverse();
        edges.reverse();
        Ok(TerminalPath { s: self.source, t, vertices, edges, length: key.len.clone() })
    }
}

pub fn shortest_path(g: &PlanarGraph, s: usize, t: usize) -> Result<TerminalPath> {
    path_tree(g, s).path_to(g, t)
}

/// Plain exact Dijkstra distances.
pub fn distances(g: &PlanarGraph, s: usize) -> Vec<Option<Q>> {
    let n = g.n();
    let mut dist: Vec<Option<Q>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[s] = Some(Q::zero());
    heap.push(Reverse((Q::zero(), s)));
    while let Some(Reverse((d, x))) = heap.pop() {
        if done[x] {
            continue;
        }
        done[x] = true;
        for &e in &g.rotation[x] {
            let y = g.other(e, x);
            let nd = &d + &g.edges[e].w;
            if dist[y].as_ref().map_or(true, |old| nd < *old) {
                dist[y] = Some(nd.clone());
                heap.push(Reverse((nd, y)));
            }
        }
    }
    dist
}

/// Dijkstra that also returns one shortest path per target (fewest hops on ties).
pub fn distances_with_paths(g: &PlanarGraph, s: usize) -> (Vec<Option<Q>>, Vec<Option<usize>>) {
    let n = g.n();
    let mut dist: Vec<Option<(Q, u32)>> = vec![None; n];
    let mut parent = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[s] = Some((Q::zero(), 0));
    heap.push(Reverse((Q::zero(), 0u32, s)));
    while let Some(Reverse((d, h, x))) = heap.pop() {
        if done[x] {
            continue;
        }
        done[x] = true;
        for &e in &g.rotation[x] {
            let y = g.other(e, x);
            if done[y] {
                continue;
            }
            let cand = (&d + &g.edges[e].w, h + 1);
            if dist[y].as_ref().map_or(true, |old| cand < *old) {
                dist[y] = Some(cand.clone());
                parent[y] = Some(e);
                heap.push(Reverse((cand.0, cand.1, y)));
            }
        }
    }
    (dist.into_iter().map(|o| o.map(|p| p.0)).collect(), parent)
}

pub fn trace_parents(g: &PlanarGraph, parent: &[Option<usize>], s: usize, t: usize) -> Vec<usize> {
    let mut edges = Vec::new();
    let mut x = t;
    while x != s {
        let e = parent[x].expect("reachable");
        edges.push(e);
        x = g.other(e, x);
    }
    edges.reverse();
    edges
}

/// Pairwise distances among `terminals` (graph vertex ids), keyed by the
/// terminal vertex ids with the smaller first.
pub fn terminal_distances(g: &PlanarGraph, terminals: &[usize]) -> Result<BTreeMap<(usize, usize), Q>> {
    let mut out = BTreeMap::new();
    for (i, &s) in terminals.iter().enumerate() {
        let d = distances(g, s);
        for &t in &terminals[i + 1..] {
            let x = d[t].clone().ok_or(Error::Unreachable(s, t))?;
            out.insert((s.min(t), s.max(t)), x);
        }
    }
    Ok(out)
}

pub fn lookup(d: &BTreeMap<(usize, usize), Q>, a: usize, b: usize) -> Option<&Q> {
    if a == b {
        return None;
    }
    d.get(&(a.min(b), a.max(b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::from_coordinates;
    use crate::rational::q;

    #[test]
    fn path_graph() {
        let g = from_coordinates(&[(0, 0), (1, 0), (2, 0)], &[(0, 1, q(1)), (1, 2, q(1))]);
        let p = shortest_path(&g, 0, 2).unwrap();
        assert_eq!(p.vertices, vec![0, 1, 2]);
        assert_eq!(p.length, q(2));
    }

    #[test]
    fn four_cycle_strict_dominance() {
        let g = from_coordinates(
            &[(0, 0), (1, 0), (1, 1), (0, 1)],
            &[(0, 1, q(1)), (1, 2, q(1)), (2, 3, q(1)), (3, 0, q(10))],
        );
        let p = shortest_path(&g, 0, 2).unwrap();
        assert_eq!(p.vertices, vec![0, 1, 2]);
        let p = shortest_path(&g, 0, 3).unwrap();
        assert_eq!(p.length, q(3));
    }

    #[test]
    fn unreachable_is_reported() {
        let g = from_coordinates(&[(0, 0), (1, 0), (5, 5)], &[(0, 1, q(1))]);
        assert!(matches!(shortest_path(&g, 0, 2), Err(Error::Unreachable(0, 2))));
    }

    #[test]
    fn reversed_query_gives_same_path() {
        let mut coords = Vec::new();
        let mut edges = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                coords.push((j, -i));
                let v = (i * 4 + j) as usize;
                if j < 3 {
                    edges.push((v, v + 1, q(1)));
                }
                if i < 3 {
                    edges.push((v, v + 4, q(1)));
                }
            }
        }
        let g = from_coordinates(&coords, &edges);
        let a = shortest_path(&g, 0, 15).unwrap();
        let mut b = shortest_path(&g, 15, 0).unwrap();
        b.vertices.reverse();
        assert_eq!(a.vertices, b.vertices);
        assert_eq!(a.length, q(6));
    }
}
