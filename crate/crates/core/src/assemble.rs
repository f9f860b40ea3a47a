//! Emulators and the gluing of one-face parts into the skeleton.

use crate::error::{ensure, Error, Result};
use crate::graph::{edge_of, Faces, PlanarGraph};
use crate::instance::{decode_graph, graph_to_json, set_outer, GraphJson};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Hstar,
    Oneface(usize),
    Baseline,
}

#[derive(Clone, Debug)]
pub struct Emulator {
    pub graph: PlanarGraph,
    /// Vertex of every terminal, in the instance's terminal order.
    pub terminals: Vec<usize>,
    /// External id of every vertex; terminals keep their input ids.
    pub labels: Vec<i64>,
    pub provenance: Vec<Provenance>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EmulatorJson {
    #[serde(flatten)]
    pub graph: GraphJson,
    /// Terminal ids (shared by the input graph and the emulator).
    pub terminals: Vec<i64>,
    #[serde(default)]
    pub provenance: Vec<Provenance>,
}

impl Emulator {
    pub fn to_json(&self) -> EmulatorJson {
        EmulatorJson {
            graph: graph_to_json(&self.graph, &self.labels),
            terminals: self.terminals.iter().map(|&t| self.labels[t]).collect(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn from_json(j: &EmulatorJson) -> Result<Emulator> {
        let mut dec = decode_graph(&j.graph, true)?;
        if j.graph.outer_face_walk.is_some() {
            let faces = dec.graph.faces()?;
            set_outer(&mut dec.graph, &faces, &dec.emap, &j.graph)?;
        }
        let terminals = j
            .terminals
            .iter()
            .map(|t| dec.vmap.get(t).copied().ok_or_else(|| Error::Input(format!("unknown terminal {t}"))))
            .collect::<Result<Vec<_>>>()?;
        let mut sorted = terminals.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != terminals.len() {
            return Err(Error::Input("terminal map is not injective".into()));
        }
        let provenance = if j.provenance.len() == dec.graph.m() { j.provenance.clone() } else { vec![Provenance::Baseline; dec.graph.m()] };
        Ok(Emulator { graph: dec.graph, terminals, labels: dec.labels, provenance })
    }
}

/// An emulator for the terminals of one face.
#[derive(Clone, Debug)]
pub struct Part {
    pub graph: PlanarGraph,
    /// Vertex of each of the face's terminals, in face order.
    pub terminals: Vec<usize>,
}

/// Dart arriving at `t` through the last edge of its rotation, i.e. the
/// corner between the last and first edges.
fn corner_dart(g: &PlanarGraph, t: usize) -> Option<usize> {
    let e = *g.rotation[t].last()?;
    Some(g.dart_from(e, g.other(e, t)))
}

/// Terminals in the order the walk of `face` reaches their corner.
fn order_on_face(faces: &Faces, face: usize, corners: &HashMap<usize, usize>) -> Vec<usize> {
    faces.walks[face].iter().filter_map(|d| corners.get(d).copied()).collect()
}

fn same_cycle(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && (a.is_empty() || (0..a.len()).any(|s| (0..a.len()).all(|i| a[(s + i) % a.len()] == b[i])))
}

/// Outer face of a part: the face whose walk visits every terminal.
fn part_outer(p: &Part, faces: &Faces) -> Result<usize> {
    (0..faces.count())
        .find(|&f| p.terminals.iter().all(|&t| faces.walks[f].iter().any(|&d| p.graph.head(d) == t)))
        .ok_or_else(|| Error::OrderMismatch("part has no face holding all terminals".into()))
}

/// Corner darts of the part's outer face, one per terminal.
fn part_corners(p: &Part, faces: &Faces, outer: usize) -> HashMap<usize, usize> {
    let mut out = HashMap::new();
    for &d in &faces.walks[outer] {
        let h = p.graph.head(d);
        if let Some(i) = p.terminals.iter().position(|&t| t == h) {
            out.entry(d).or_insert(i);
        }
    }
    out
}

/// Glues each part into the face of `host` where its terminals' corners lie.
/// `terminals[i]` is the host vertex of terminal `i`; `faces[r]` lists the
/// terminal indices of face `r` in order, matching `parts[r].terminals`.
pub fn glue(host: &Emulator, faces: &[Vec<usize>], parts: &[Part]) -> Result<Emulator> {
    let mut out = host.clone();
    let hf = host.graph.check_euler()?;
    let mut next_label = host.labels.iter().copied().max().unwrap_or(-1) + 1;
    for (r, ts) in faces.iter().enumerate() {
        let part = &parts[r];
        ensure!(part.terminals.len() == ts.len(), "part {r} has the wrong number of terminals");
        if ts.len() < 2 {
            continue;
        }
        // Face of the host holding the terminals' corners.
        let mut corners = HashMap::new();
        let mut face = None;
        for &t in ts {
            let v = host.terminals[t];
            let d = corner_dart(&host.graph, v).ok_or_else(|| Error::OrderMismatch(format!("terminal {t} is isolated")))?;
            corners.insert(d, t);
            let f = hf.face_of[d];
            if *face.get_or_insert(f) != f {
                return Err(Error::OrderMismatch(format!("terminals of face {r} do not share a face")));
            }
        }
        let host_order = order_on_face(&hf, face.unwrap(), &corners);
        let mut p = part.clone();
        let mut pf = p.graph.check_euler()?;
        let mut outer = part_outer(&p, &pf)?;
        let order = |p: &Part, pf: &Faces, outer: usize| -> Vec<usize> {
            let pc = part_corners(p, pf, outer);
            let mut o: Vec<usize> = pf.walks[outer].iter().filter_map(|d| pc.get(d).map(|&i| ts[i])).collect();
            o.dedup();
            o
        };
        let mut rev = host_order.clone();
        rev.reverse();
        if !same_cycle(&order(&p, &pf, outer), &rev) {
            p.graph.mirror();
            pf = p.graph.check_euler()?;
            outer = part_outer(&p, &pf)?;
            if !same_cycle(&order(&p, &pf, outer), &rev) {
                return Err(Error::OrderMismatch(format!("face {r}: part and host orders disagree")));
            }
        }
        // Copy the part.
        let pc = part_corners(&p, &pf, outer);
        let mut vmap = vec![usize::MAX; p.graph.n()];
        for (i, &pt) in p.terminals.iter().enumerate() {
            vmap[pt] = host.terminals[ts[i]];
        }
        for v in 0..p.graph.n() {
            if vmap[v] == usize::MAX {
                vmap[v] = out.graph.add_vertex();
                out.labels.push(next_label);
                next_label += 1;
            }
        }
        let base = out.graph.m();
        for e in &p.graph.edges {
            out.graph.push_edge(vmap[e.u], vmap[e.v], e.w.clone());
            out.provenance.push(Provenance::Oneface(r));
        }
        for v in 0..p.graph.n() {
            let rot: Vec<usize> = p.graph.rotation[v].iter().map(|&e| base + e).collect();
            if !p.terminals.contains(&v) {
                out.graph.rotation[vmap[v]] = rot;
                continue;
            }
            // Start the part's edges right after its outer corner.
            let d_in = pc.iter().find(|(_, &i)| p.terminals[i] == v).map(|(&d, _)| d).expect("terminal on outer face");
            let at = p.graph.rotation[v].iter().position(|&e| e == edge_of(d_in)).unwrap();
            let len = rot.len();
            let host_rot = &mut out.graph.rotation[vmap[v]];
            host_rot.extend((1..=len).map(|k| rot[(at + k) % len]));
        }
    }
    out.graph.check_euler()?;
    Ok(out)
}
