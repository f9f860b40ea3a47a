//! Curve arrangements between terminals.
//!
//! A strand is a curve between two terminals carrying the ordered list of its
//! crossings. A crossing joins exactly two strands; `sign == 1` means the
//! second strand passes the first from its right to its left. Each terminal
//! keeps its strand ends in counterclockwise order, starting right after the
//! corner that faces its terminal face.

use crate::error::{ensure, Error, Result};
use crate::graph::{dart, enclosed_faces, Faces, PlanarGraph};
use crate::rational::{q, Q};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strand {
    pub a: usize,
    pub b: usize,
    pub crossings: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub s: [usize; 2],
    pub sign: i8,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Arrangement {
    /// Terminal indices per face, in face order.
    pub faces: Vec<Vec<usize>>,
    pub strands: Vec<Strand>,
    pub crossings: Vec<Crossing>,
    pub ends: Vec<Vec<usize>>,
}

/// A planar graph drawn from an arrangement, with the maps back to it.
pub struct Drawing {
    pub graph: PlanarGraph,
    pub faces: Faces,
    /// Segment edges per strand, from `a` to `b`.
    pub seg: Vec<Vec<usize>>,
    pub crossing_vertex: Vec<usize>,
    /// Frame edges per face; edge `i` runs from terminal `i` to terminal `i + 1`.
    pub frames: Vec<Vec<usize>>,
    /// Per face, the graph face standing for the terminal face.
    pub face_rep: Vec<Option<usize>>,
    pub outer_face: Option<usize>,
}

impl Arrangement {
    pub fn k(&self) -> usize {
        self.ends.len()
    }

    pub fn face_of_terminal(&self) -> Vec<usize> {
        let mut out = vec![usize::MAX; self.k()];
        for (r, ts) in self.faces.iter().enumerate() {
            for &t in ts {
                out[t] = r;
            }
        }
        out
    }

    pub fn strand_index(&self) -> HashMap<(usize, usize), usize> {
        let mut m = HashMap::new();
        for (i, s) in self.strands.iter().enumerate() {
            m.insert((s.a.min(s.b), s.a.max(s.b)), i);
        }
        m
    }

    /// Position of every crossing along each of its two strands.
    pub fn positions(&self) -> Vec<[usize; 2]> {
        let mut pos = vec![[usize::MAX; 2]; self.crossings.len()];
        for (si, s) in self.strands.iter().enumerate() {
            for (i, &c) in s.crossings.iter().enumerate() {
                let side = if self.crossings[c].s[0] == si { 0 } else { 1 };
                pos[c][side] = i;
            }
        }
        pos
    }

    /// Structural checks: every crossing appears once on each of its strands,
    /// no pair crosses twice, strands sharing a terminal never cross, and every
    /// strand end is listed at its terminal.
    pub fn check(&self) -> Result<()> {
        let mut seen = vec![[0usize; 2]; self.crossings.len()];
        for (si, s) in self.strands.iter().enumerate() {
            for &c in &s.crossings {
                let cr = self.crossings.get(c).ok_or_else(|| Error::Internal(format!("unknown crossing {c}")))?;
                let side = cr.s.iter().position(|&x| x == si);
                let side = side.ok_or_else(|| Error::Internal(format!("crossing {c} listed on foreign strand {si}")))?;
                seen[c][side] += 1;
            }
        }
        let mut pairs = BTreeSet::new();
        for (c, cr) in self.crossings.iter().enumerate() {
            ensure!(seen[c] == [1, 1], "crossing {c} appears {:?} times", seen[c]);
            ensure!(cr.s[0] != cr.s[1], "crossing {c} joins a strand to itself");
            ensure!(cr.sign == 1 || cr.sign == -1, "crossing {c} has sign {}", cr.sign);
            let key = (cr.s[0].min(cr.s[1]), cr.s[0].max(cr.s[1]));
            ensure!(pairs.insert(key), "strands {key:?} cross twice");
            let (x, y) = (&self.strands[cr.s[0]], &self.strands[cr.s[1]]);
            ensure!(
                x.a != y.a && x.a != y.b && x.b != y.a && x.b != y.b,
                "strands {key:?} share a terminal and cross"
            );
        }
        let mut count = vec![0usize; self.strands.len()];
        for (t, list) in self.ends.iter().enumerate() {
            for &s in list {
                let st = &self.strands[s];
                ensure!(st.a == t || st.b == t, "terminal {t} lists foreign strand {s}");
                count[s] += 1;
            }
        }
        ensure!(count.iter().all(|&c| c == 2), "strand ends are not listed exactly once");
        Ok(())
    }

    /// Crossing set as unordered strand pairs.
    pub fn crossing_pairs(&self) -> BTreeSet<(usize, usize)> {
        self.crossings.iter().map(|c| (c.s[0].min(c.s[1]), c.s[0].max(c.s[1]))).collect()
    }

    pub fn to_graph(&self, with_frames: bool, weights: Option<&[Vec<Q>]>) -> Result<Drawing> {
        let k = self.k();
        let mut g = PlanarGraph::new(k + self.crossings.len());
        let crossing_vertex: Vec<usize> = (0..self.crossings.len()).map(|c| k + c).collect();
        let mut seg = Vec::with_capacity(self.strands.len());
        for (si, s) in self.strands.iter().enumerate() {
            let mut nodes = vec![s.a];
            nodes.extend(s.crossings.iter().map(|&c| crossing_vertex[c]));
            nodes.push(s.b);
            let mut list = Vec::with_capacity(nodes.len() - 1);
            for j in 0..nodes.len() - 1 {
                let w = weights.map_or_else(|| q(1), |w| w[si][j].clone());
                list.push(g.push_edge(nodes[j], nodes[j + 1], w));
            }
            seg.push(list);
        }
        let pos = self.positions();
        for (c, cr) in self.crossings.iter().enumerate() {
            let [i0, i1] = pos[c];
            let (a, b) = (cr.s[0], cr.s[1]);
            let (ap, am) = (seg[a][i0 + 1], seg[a][i0]);
            let (bp, bm) = (seg[b][i1 + 1], seg[b][i1]);
            g.rotation[crossing_vertex[c]] =
                if cr.sign > 0 { vec![ap, bp, am, bm] } else { vec![ap, bm, am, bp] };
        }
        let mut frames = vec![Vec::new(); self.faces.len()];
        if with_frames {
            for (r, ts) in self.faces.iter().enumerate() {
                let m = ts.len();
                if m >= 2 {
                    for i in 0..m {
                        frames[r].push(g.push_edge(ts[i], ts[(i + 1) % m], q(1)));
                    }
                }
            }
        }
        let face_of = self.face_of_terminal();
        for t in 0..k {
            let mut rot = Vec::new();
            let r = face_of[t];
            let i = self.faces[r].iter().position(|&x| x == t).unwrap();
            let m = self.faces[r].len();
            if with_frames && m >= 2 {
                rot.push(frames[r][i]);
            }
            for &s in &self.ends[t] {
                let st = &self.strands[s];
                rot.push(if st.a == t { seg[s][0] } else { *seg[s].last().unwrap() });
            }
            if with_frames && m >= 2 {
                rot.push(frames[r][(i + m - 1) % m]);
            }
            g.rotation[t] = rot;
        }
        let faces = g.check_euler()?;
        let mut face_rep = Vec::new();
        for ts in &self.faces {
            let t = ts[0];
            face_rep.push(g.rotation[t].last().map(|&e| {
                let d = g.dart_from(e, g.other(e, t));
                faces.face_of[d]
            }));
        }
        let outer_face = face_rep.first().copied().flatten();
        g.outer = outer_face.map(|f| faces.walks[f][0]);
        Ok(Drawing { graph: g, faces, seg, crossing_vertex, frames, face_rep, outer_face })
    }
}

impl Drawing {
    /// Darts of strand `s` leaving terminal `from`, optionally stopping at a crossing.
    pub fn strand_darts(&self, arr: &Arrangement, s: usize, from: usize, until: Option<usize>) -> Vec<usize> {
        let st = &arr.strands[s];
        let n = self.seg[s].len();
        let forward = st.a == from;
        let stop = until.map(|c| st.crossings.iter().position(|&x| x == c).expect("crossing on strand"));
        let mut out = Vec::new();
        if forward {
            let end = stop.map_or(n, |p| p + 1);
            for j in 0..end {
                out.push(dart(self.seg[s][j], 0));
            }
        } else {
            let end = stop.map_or(0, |p| p + 1);
            for j in (end..n).rev() {
                out.push(dart(self.seg[s][j], 1));
            }
        }
        out
    }

    /// Darts of strand `s` from crossing `c` to its end at terminal `to`.
    pub fn strand_darts_from_crossing(&self, arr: &Arrangement, s: usize, c: usize, to: usize) -> Vec<usize> {
        let st = &arr.strands[s];
        let p = st.crossings.iter().position(|&x| x == c).expect("crossing on strand");
        let n = self.seg[s].len();
        if st.b == to {
            (p + 1..n).map(|j| dart(self.seg[s][j], 0)).collect()
        } else {
            (0..=p).rev().map(|j| dart(self.seg[s][j], 1)).collect()
        }
    }

    /// Frame darts walking face `r` from position `i` forward to position `j`.
    pub fn frame_arc(&self, r: usize, i: usize, j: usize) -> Vec<usize> {
        let m = self.frames[r].len();
        let mut out = Vec::new();
        if m == 0 {
            return out;
        }
        let mut x = i;
        while x != j {
            out.push(dart(self.frames[r][x], 0));
            x = (x + 1) % m;
        }
        out
    }

    /// Which terminal faces lie strictly inside the closed walk.
    pub fn enclosed_terminal_faces(&self, cycle: &[usize]) -> Result<Vec<usize>> {
        let Some(outer) = self.outer_face else { return Ok(Vec::new()) };
        let inside = enclosed_faces(&self.graph, &self.faces, outer, cycle)?;
        Ok(self
            .face_rep
            .iter()
            .enumerate()
            .filter(|(_, f)| f.map_or(false, |f| inside[f]))
            .map(|(r, _)| r)
            .collect())
    }
}
