//! Embedded graphs: rotation systems, face tracing and region tests.
//!
//! A dart is `2 * edge + dir`; `dir == 0` runs `u -> v`. Faces are traced
//! with the face on the right of every dart: after arriving at `v` along `e`,
//! the walk leaves along the counterclockwise successor of `e` in `rot(v)`.

use crate::error::{ensure, Error, Result};
use crate::rational::Q;
use num_traits::{Signed, Zero};
use std::collections::{HashMap, VecDeque};

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: Q,
}

#[derive(Clone, Debug)]
pub struct PlanarGraph {
    pub edges: Vec<Edge>,
    /// Counterclockwise incident edge ids per vertex.
    pub rotation: Vec<Vec<usize>>,
    /// A dart whose face is the designated outer face.
    pub outer: Option<usize>,
}

#[inline]
pub fn dart(e: usize, dir: usize) -> usize {
    2 * e + dir
}

#[inline]
pub fn edge_of(d: usize) -> usize {
    d / 2
}

#[inline]
pub fn twin(d: usize) -> usize {
    d ^ 1
}

#[derive(Clone, Debug)]
pub struct Faces {
    pub face_of: Vec<usize>,
    pub walks: Vec<Vec<usize>>,
}

impl Faces {
    pub fn count(&self) -> usize {
        self.walks.len()
    }
}

impl PlanarGraph {
    pub fn new(n: usize) -> Self {
        PlanarGraph { edges: Vec::new(), rotation: vec![Vec::new(); n], outer: None }
    }

    pub fn n(&self) -> usize {
        self.rotation.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.rotation.push(Vec::new());
        self.rotation.len() - 1
    }

    /// Adds an edge without touching the rotation.
    pub fn push_edge(&mut self, u: usize, v: usize, w: Q) -> usize {
        self.edges.push(Edge { u, v, w });
        self.edges.len() - 1
    }

    pub fn tail(&self, d: usize) -> usize {
        let e = &self.edges[edge_of(d)];
        if d & 1 == 0 { e.u } else { e.v }
    }

    pub fn head(&self, d: usize) -> usize {
        let e = &self.edges[edge_of(d)];
        if d & 1 == 0 { e.v } else { e.u }
    }

    pub fn other(&self, e: usize, x: usize) -> usize {
        let ed = &self.edges[e];
        if ed.u == x { ed.v } else { ed.u }
    }

    /// The dart along `e` leaving `x`.
    pub fn dart_from(&self, e: usize, x: usize) -> usize {
        if self.edges[e].u == x { dart(e, 0) } else { dart(e, 1) }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    /// Position of every edge in the rotation of each endpoint.
    pub fn positions(&self) -> Result<Vec<[usize; 2]>> {
        let mut pos = vec![[usize::MAX; 2]; self.m()];
        for (v, rot) in self.rotation.iter().enumerate() {
            for (i, &e) in rot.iter().enumerate() {
                let ed = self.edges.get(e).ok_or_else(|| {
                    Error::InconsistentRotation(format!("unknown edge {e} at vertex {v}"))
                })?;
                if ed.u == ed.v {
                    return Err(Error::InconsistentRotation(format!("loop edge {e}")));
                }
                let side = if ed.u == v {
                    0
                } else if ed.v == v {
                    1
                } else {
                    return Err(Error::InconsistentRotation(format!(
                        "edge {e} listed at non-endpoint {v}"
                    )));
                };
                if pos[e][side] != usize::MAX {
                    return Err(Error::InconsistentRotation(format!(
                        "edge {e} repeated at vertex {v}"
                    )));
                }
                pos[e][side] = i;
            }
        }
        for (e, p) in pos.iter().enumerate() {
            if p[0] == usize::MAX || p[1] == usize::MAX {
                return Err(Error::InconsistentRotation(format!(
                    "edge {e} missing from an endpoint rotation"
                )));
            }
        }
        Ok(pos)
    }

    /// Next dart of the face to the right of `d`.
    fn next_with(&self, d: usize, pos: &[[usize; 2]]) -> usize {
        let v = self.head(d);
        let e = edge_of(d);
        let side = if d & 1 == 0 { 1 } else { 0 };
        let rot = &self.rotation[v];
        let e2 = rot[(pos[e][side] + 1) % rot.len()];
        self.dart_from(e2, v)
    }

    pub fn faces(&self) -> Result<Faces> {
        let pos = self.positions()?;
        let nd = 2 * self.m();
        let mut face_of = vec![usize::MAX; nd];
        let mut walks = Vec::new();
        for start in 0..nd {
            if face_of[start] != usize::MAX {
                continue;
            }
            let id = walks.len();
            let mut walk = Vec::new();
            let mut d = start;
            loop {
                face_of[d] = id;
                walk.push(d);
                d = self.next_with(d, &pos);
                if d == start {
                    break;
                }
                if face_of[d] != usize::MAX {
                    return Err(Error::InconsistentRotation("face walk does not close".into()));
                }
            }
            walks.push(walk);
        }
        Ok(Faces { face_of, walks })
    }

    /// Connected components (by edges) as a vertex labelling.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut c = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = c;
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &e in &self.rotation[x] {
                    let y = self.other(e, x);
                    if comp[y] == usize::MAX {
                        comp[y] = c;
                        stack.push(y);
                    }
                }
            }
            c += 1;
        }
        (c, comp)
    }

    /// Checks `V - E + F = 2` on every component that has an edge.
    pub fn check_euler(&self) -> Result<Faces> {
        let faces = self.faces()?;
        let (c, comp) = self.components();
        let mut vcount = vec![0i64; c];
        let mut ecount = vec![0i64; c];
        let mut fcount = vec![0i64; c];
        for v in 0..self.n() {
            vcount[comp[v]] += 1;
        }
        for e in &self.edges {
            ecount[comp[e.u]] += 1;
        }
        for w in &faces.walks {
            fcount[comp[self.tail(w[0])]] += 1;
        }
        for i in 0..c {
            if ecount[i] > 0 && vcount[i] - ecount[i] + fcount[i] != 2 {
                return Err(Error::NonPlanarRotation(format!(
                    "component {i}: V={} E={} F={}",
                    vcount[i], ecount[i], fcount[i]
                )));
            }
        }
        Ok(faces)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, e) in self.edges.iter().enumerate() {
            if e.u >= self.n() || e.v >= self.n() {
                return Err(Error::Input(format!("edge {i} has an unknown endpoint")));
            }
            if e.w.is_negative() {
                return Err(Error::Input(format!("edge {i} has negative weight")));
            }
        }
        self.check_euler().map(|_| ())
    }

    pub fn all_weights_positive(&self) -> bool {
        self.edges.iter().all(|e| e.w.is_positive())
    }

    pub fn total_weight(&self, edges: &[usize]) -> Q {
        let mut s = Q::zero();
        for &e in edges {
            s += &self.edges[e].w;
        }
        s
    }

    /// Darts of a vertex walk; `None` if two consecutive vertices are not adjacent.
    pub fn darts_of_edges(&self, start: usize, edges: &[usize]) -> Option<Vec<usize>> {
        let mut x = start;
        let mut out = Vec::with_capacity(edges.len());
        for &e in edges {
            let ed = &self.edges[e];
            if ed.u != x && ed.v != x {
                return None;
            }
            let d = self.dart_from(e, x);
            x = self.head(d);
            out.push(d);
        }
        Some(out)
    }

    /// Reverses every rotation (mirror image embedding).
    pub fn mirror(&mut self) {
        for r in &mut self.rotation {
            r.reverse();
        }
        if let Some(d) = self.outer {
            // The mirror image has the same faces with reversed walks.
            self.outer = Some(twin(d));
        }
    }
}

/// Faces not dual-reachable from the outer face when the edges of `cycle`
/// are blocked. `cycle` is a closed dart walk.
pub fn enclosed_faces(g: &PlanarGraph, faces: &Faces, outer_face: usize, cycle: &[usize]) -> Result<Vec<bool>> {
    if let (Some(&a), Some(&b)) = (cycle.first(), cycle.last()) {
        if g.tail(a) != g.head(b) {
            return Err(Error::NotClosed);
        }
        for w in cycle.windows(2) {
            if g.head(w[0]) != g.tail(w[1]) {
                return Err(Error::NotClosed);
            }
        }
    }
    let mut blocked = vec![false; g.m()];
    for &d in cycle {
        blocked[edge_of(d)] = true;
    }
    let mut seen = vec![false; faces.count()];
    seen[outer_face] = true;
    let mut queue = VecDeque::from([outer_face]);
    while let Some(f) = queue.pop_front() {
        for &d in &faces.walks[f] {
            if blocked[edge_of(d)] {
                continue;
            }
            let h = faces.face_of[twin(d)];
            if !seen[h] {
                seen[h] = true;
                queue.push_back(h);
            }
        }
    }
    Ok(seen.into_iter().map(|s| !s).collect())
}

fn check_closed(g: &PlanarGraph, cycle: &[usize]) -> Result<()> {
    if let (Some(&a), Some(&b)) = (cycle.first(), cycle.last()) {
        if g.tail(a) != g.head(b) || cycle.windows(2).any(|w| g.head(w[0]) != g.tail(w[1])) {
            return Err(Error::NotClosed);
        }
    }
    Ok(())
}

/// Faces on the right (or left) of a simple closed walk.
pub fn side_region(g: &PlanarGraph, faces: &Faces, cycle: &[usize], right: bool) -> Result<Vec<bool>> {
    check_closed(g, cycle)?;
    let mut blocked = vec![false; g.m()];
    for &d in cycle {
        blocked[edge_of(d)] = true;
    }
    let mut seen = vec![false; faces.count()];
    let mut queue = VecDeque::new();
    for &d in cycle {
        let f = faces.face_of[if right { d } else { twin(d) }];
        if !seen[f] {
            seen[f] = true;
            queue.push_back(f);
        }
    }
    while let Some(f) = queue.pop_front() {
        for &d in &faces.walks[f] {
            if blocked[edge_of(d)] {
                continue;
            }
            let h = faces.face_of[twin(d)];
            if !seen[h] {
                seen[h] = true;
                queue.push_back(h);
            }
        }
    }
    Ok(seen)
}

/// Whether edge `e` leaves `x` on the left of a path that enters `x` by
/// `e_in` and leaves by `e_out`.
pub fn leaves_left(g: &PlanarGraph, pos: &[[usize; 2]], x: usize, e_in: usize, e_out: usize, e: usize) -> bool {
    let deg = g.rotation[x].len();
    let at = |f: usize| pos[f][if g.edges[f].u == x { 0 } else { 1 }];
    let (o, i, p) = (at(e_out), at(e_in), at(e));
    let rel = |y: usize| (y + deg - o) % deg;
    rel(p) > 0 && rel(p) < rel(i)
}

/// Number of crossings between two simple paths given as dart lists.
/// Shared stretches count once when the second path enters and leaves them
/// on opposite sides of the first. Paths must not share end vertices with
/// the interior of the other.
pub fn path_crossings(g: &PlanarGraph, a: &[usize], b: &[usize]) -> Result<usize> {
    let pos = g.positions()?;
    let mut at_a = HashMap::new();
    for (i, &d) in a.iter().enumerate() {
        at_a.insert(g.tail(d), i);
    }
    if let Some(&d) = a.last() {
        at_a.insert(g.head(d), a.len());
    }
    let a_in = |i: usize| edge_of(a[i - 1]);
    let a_out = |i: usize| edge_of(a[i]);
    let bv: Vec<usize> = b.iter().map(|&d| g.tail(d)).chain(b.last().map(|&d| g.head(d))).collect();
    let mut count = 0;
    let mut j = 0;
    while j < bv.len() {
        let Some(&i0) = at_a.get(&bv[j]) else {
            j += 1;
            continue;
        };
        ensure!(
            j > 0 && j + 1 < bv.len() && i0 > 0 && i0 < a.len(),
            "paths meet at an end vertex {}",
            bv[j]
        );
        let js = j;
        let mut i = i0;
        let mut step = 0i8;
        while j + 1 < bv.len() {
            let e = edge_of(b[j]);
            if step >= 0 && i < a.len() && a_out(i) == e {
                step = 1;
                i += 1;
            } else if step <= 0 && i > 0 && a_in(i) == e {
                step = -1;
                i -= 1;
            } else {
                break;
            }
            j += 1;
        }
        ensure!(j + 1 < bv.len() && i > 0 && i < a.len(), "paths meet at an end vertex {}", bv[j]);
        let enter = leaves_left(g, &pos, bv[js], a_in(i0), a_out(i0), edge_of(b[js - 1]));
        let leave = leaves_left(g, &pos, bv[j], a_in(i), a_out(i), edge_of(b[j]));
        if enter != leave {
            count += 1;
        }
        j += 1;
    }
    Ok(count)
}

/// Exact comparison of integer direction vectors by angle from the +x axis.
pub fn angle_cmp(a: (i64, i64), b: (i64, i64)) -> std::cmp::Ordering {
    let half = |p: (i64, i64)| if p.1 > 0 || (p.1 == 0 && p.0 > 0) { 0 } else { 1 };
    half(a).cmp(&half(b)).then_with(|| {
        let cr = (a.0 as i128) * (b.1 as i128) - (a.1 as i128) * (b.0 as i128);
        0.cmp(&cr)
    })
}

/// Builds a straight-line embedding from integer coordinates.
pub fn from_coordinates(coords: &[(i64, i64)], edges: &[(usize, usize, Q)]) -> PlanarGraph {
    let mut g = PlanarGraph::new(coords.len());
    for (u, v, w) in edges {
        let e = g.push_edge(*u, *v, w.clone());
        g.rotation[*u].push(e);
        g.rotation[*v].push(e);
    }
    for v in 0..coords.len() {
        let c = coords[v];
        let mut rot = std::mem::take(&mut g.rotation[v]);
        rot.sort_by(|&e1, &e2| {
            let o1 = coords[g.other(e1, v)];
            let o2 = coords[g.other(e2, v)];
            angle_cmp((o1.0 - c.0, o1.1 - c.1), (o2.0 - c.0, o2.1 - c.1))
        });
        g.rotation[v] = rot;
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn grid(r: usize, c: usize) -> PlanarGraph {
        let mut coords = Vec::new();
        for i in 0..r {
            for j in 0..c {
                coords.push((j as i64, -(i as i64)));
            }
        }
        let mut edges = Vec::new();
        for i in 0..r {
            for j in 0..c {
                let v = i * c + j;
                if j + 1 < c {
                    edges.push((v, v + 1, q(1)));
                }
                if i + 1 < r {
                    edges.push((v, v + c, q(1)));
                }
            }
        }
        from_coordinates(&coords, &edges)
    }

    #[test]
    fn triangle_has_two_faces() {
        let g = from_coordinates(
            &[(0, 0), (2, 0), (1, 2)],
            &[(0, 1, q(1)), (1, 2, q(1)), (2, 0, q(1))],
        );
        assert_eq!(g.check_euler().unwrap().count(), 2);
    }

    #[test]
    fn k4_has_four_faces() {
        let g = from_coordinates(
            &[(0, 0), (4, 0), (2, 4), (2, 1)],
            &[(0, 1, q(1)), (1, 2, q(1)), (2, 0, q(1)), (0, 3, q(1)), (1, 3, q(1)), (2, 3, q(1))],
        );
        let f = g.check_euler().unwrap();
        assert_eq!(f.count(), 4);
        assert!(f.walks.iter().all(|w| w.len() == 3));
    }

    #[test]
    fn grid_3x3_has_five_faces() {
        let g = grid(3, 3);
        let f = g.check_euler().unwrap();
        assert_eq!(f.count(), 5);
        let mut lens: Vec<_> = f.walks.iter().map(|w| w.len()).collect();
        lens.sort();
        assert_eq!(lens, vec![4, 4, 4, 4, 8]);
    }

    #[test]
    fn missing_rotation_entry_is_rejected() {
        let mut g = grid(2, 2);
        g.rotation[0].pop();
        assert!(matches!(g.faces(), Err(Error::InconsistentRotation(_))));
    }

    #[test]
    fn broken_rotation_fails_euler() {
        let mut g = grid(3, 3);
        g.rotation[4].swap(0, 1);
        assert!(matches!(g.check_euler(), Err(Error::NonPlanarRotation(_))));
    }

    fn outer_face(f: &Faces) -> usize {
        f.walks.iter().enumerate().max_by_key(|(_, w)| w.len()).unwrap().0
    }

    #[test]
    fn enclosed_single_cell_and_whole_interior() {
        let g = grid(3, 3);
        let f = g.faces().unwrap();
        let outer = outer_face(&f);
        let cell = (0..f.count()).find(|&i| i != outer).unwrap();
        let inside = enclosed_faces(&g, &f, outer, &f.walks[cell]).unwrap();
        assert_eq!(inside.iter().filter(|&&b| b).count(), 1);
        assert!(inside[cell]);
        let inside = enclosed_faces(&g, &f, outer, &f.walks[outer]).unwrap();
        assert_eq!(inside.iter().filter(|&&b| b).count(), 4);
        assert!(!inside[outer]);
    }

    #[test]
    fn open_walk_is_rejected() {
        let g = grid(2, 2);
        let f = g.faces().unwrap();
        let w = &f.walks[0];
        assert!(matches!(enclosed_faces(&g, &f, 0, &w[..w.len() - 1]), Err(Error::NotClosed)));
    }

    #[test]
    fn mirror_keeps_face_count() {
        let mut g = grid(3, 4);
        let n = g.faces().unwrap().count();
        g.mirror();
        assert_eq!(g.check_euler().unwrap().count(), n);
    }
}
