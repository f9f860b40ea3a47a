//! Terminal instances and the JSON graph format.

use crate::error::{Error, Result};
use crate::graph::{edge_of, Faces, PlanarGraph};
use crate::rational::{fmt_q, parse_q, Q};
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::{BTreeMap, HashMap};

/// A designated face with its terminals in face-walk order.
#[derive(Clone, Debug)]
pub struct TerminalFace {
    /// Dart walk of the face (face on the right).
    pub walk: Vec<usize>,
    pub terminals: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct TerminalInstance {
    pub graph: PlanarGraph,
    /// External id of every internal vertex.
    pub labels: Vec<i64>,
    pub faces: Vec<TerminalFace>,
}

impl TerminalInstance {
    pub fn f(&self) -> usize {
        self.faces.len()
    }

    pub fn k(&self) -> usize {
        self.faces.iter().map(|f| f.terminals.len()).sum()
    }

    /// All terminals, face by face.
    pub fn terminals(&self) -> Vec<usize> {
        self.faces.iter().flat_map(|f| f.terminals.iter().copied()).collect()
    }

    /// Dart of face `r` that arrives at terminal `t` (first occurrence).
    pub fn corner(&self, r: usize, t: usize) -> Option<usize> {
        let w = &self.faces[r].walk;
        w.iter().position(|&d| self.graph.tail(d) == t).map(|i| w[(i + w.len() - 1) % w.len()])
    }

    pub fn validate(&self) -> Result<()> {
        self.graph.validate()?;
        if !self.graph.all_weights_positive() {
            return Err(Error::Input("weights must be strictly positive".into()));
        }
        let (c, _) = self.graph.components();
        if c != 1 {
            return Err(Error::Input(format!("graph has {c} components")));
        }
        for (r, face) in self.faces.iter().enumerate() {
            check_order(&self.graph, &face.walk, &face.terminals)
                .map_err(|m| Error::Input(format!("face {}: {m}", r + 1)))?;
        }
        Ok(())
    }
}

/// Terminals must be distinct, lie on the walk and appear in walk order.
pub fn check_order(g: &PlanarGraph, walk: &[usize], terminals: &[usize]) -> std::result::Result<(), String> {
    let mut pos = Vec::new();
    for &t in terminals {
        match walk.iter().position(|&d| g.tail(d) == t) {
            Some(p) => pos.push(p),
            None => return Err(format!("terminal {t} not on the face")),
        }
    }
    let mut sorted = pos.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != pos.len() {
        return Err("repeated terminal".into());
    }
    if pos.len() >= 2 {
        let descents = (0..pos.len()).filter(|&i| pos[(i + 1) % pos.len()] < pos[i]).count();
        if descents != 1 {
            return Err("terminals are not in face-walk order".into());
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct EdgeJson {
    pub id: i64,
    pub u: i64,
    pub v: i64,
    pub w: Value,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct FaceJson {
    pub face_walk: Vec<i64>,
    pub terminals: Vec<i64>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct GraphJson {
    pub vertices: Vec<i64>,
    pub edges: Vec<EdgeJson>,
    pub rotation: BTreeMap<String, Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer_face_walk: Option<Vec<i64>>,
    #[serde(default)]
    pub faces: Vec<FaceJson>,
}

fn weight_of(v: &Value) -> Option<Q> {
    match v {
        Value::String(s) => parse_q(s),
        Value::Number(n) => parse_q(&n.to_string()),
        _ => None,
    }
}

/// Decoded graph plus the id maps needed to resolve face walks.
pub struct Decoded {
    pub graph: PlanarGraph,
    pub labels: Vec<i64>,
    pub vmap: HashMap<i64, usize>,
    pub emap: HashMap<i64, usize>,
}

pub fn decode_graph(j: &GraphJson, allow_zero: bool) -> Result<Decoded> {
    let mut vmap = HashMap::new();
    for (i, &v) in j.vertices.iter().enumerate() {
        if vmap.insert(v, i).is_some() {
            return Err(Error::Input(format!("duplicate vertex {v}")));
        }
    }
    let mut g = PlanarGraph::new(j.vertices.len());
    let mut emap = HashMap::new();
    for e in &j.edges {
        let u = *vmap.get(&e.u).ok_or_else(|| Error::Input(format!("edge {} endpoint {}", e.id, e.u)))?;
        let v = *vmap.get(&e.v).ok_or_else(|| Error::Input(format!("edge {} endpoint {}", e.id, e.v)))?;
        let w = weight_of(&e.w).ok_or_else(|| Error::Input(format!("edge {} has unparsable weight", e.id)))?;
        if w.is_negative() || (!allow_zero && !w.is_positive()) {
            return Err(Error::Input(format!("edge {} has non-positive weight {}", e.id, fmt_q(&w))));
        }
        if u == v {
            return Err(Error::Input(format!("edge {} is a loop", e.id)));
        }
        let id = g.push_edge(u, v, w);
        if emap.insert(e.id, id).is_some() {
            return Err(Error::Input(format!("duplicate edge id {}", e.id)));
        }
    }
    for (key, list) in &j.rotation {
        let v: i64 = key.parse().map_err(|_| Error::Input(format!("rotation key {key}")))?;
        let vi = *vmap.get(&v).ok_or_else(|| Error::Input(format!("rotation of unknown vertex {v}")))?;
        let mut rot = Vec::with_capacity(list.len());
        for e in list {
            rot.push(*emap.get(e).ok_or_else(|| Error::Input(format!("rotation lists unknown edge {e}")))?);
        }
        g.rotation[vi] = rot;
    }
    g.positions()?;
    Ok(Decoded { graph: g, labels: j.vertices.clone(), vmap, emap })
}

/// Finds the traced face whose edge cycle equals `edges`, forward or reversed.
fn match_face(g: &PlanarGraph, walks: &[Vec<usize>], edges: &[usize]) -> Option<(usize, bool)> {
    let cyc_eq = |a: &[usize], b: &[usize]| {
        a.len() == b.len() && (0..a.len()).any(|s| (0..a.len()).all(|i| a[(s + i) % a.len()] == b[i]))
    };
    let rev: Vec<usize> = edges.iter().rev().copied().collect();
    for (i, w) in walks.iter().enumerate() {
        let we: Vec<usize> = w.iter().map(|&d| edge_of(d)).collect();
        if cyc_eq(&we, edges) {
            return Some((i, false));
        }
    }
    for (i, w) in walks.iter().enumerate() {
        let we: Vec<usize> = w.iter().map(|&d| edge_of(d)).collect();
        if cyc_eq(&we, &rev) {
            return Some((i, true));
        }
    }
    let _ = g;
    None
}

/// Sets `g.outer` from the optional `outer_face_walk`.
pub fn set_outer(g: &mut PlanarGraph, faces: &Faces, emap: &HashMap<i64, usize>, j: &GraphJson) -> Result<()> {
    if let Some(ow) = &j.outer_face_walk {
        let edges = ow
            .iter()
            .map(|e| emap.get(e).copied().ok_or_else(|| Error::Input(format!("outer_face_walk lists unknown edge {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let (fi, _) = match_face(g, &faces.walks, &edges).ok_or_else(|| Error::Input("outer_face_walk is not a face".into()))?;
        g.outer = Some(faces.walks[fi][0]);
    }
    Ok(())
}

pub fn parse_instance(text: &str) -> Result<TerminalInstance> {
    let j: GraphJson = serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed JSON: {e}")))?;
    instance_from_json(&j)
}

pub fn instance_from_json(j: &GraphJson) -> Result<TerminalInstance> {
    let dec = decode_graph(j, false)?;
    let mut g = dec.graph;
    let faces = g.check_euler().map_err(|e| Error::Input(e.to_string()))?;
    let resolve = |walk: &[i64]| -> Result<Vec<usize>> {
        walk.iter()
            .map(|e| dec.emap.get(e).copied().ok_or_else(|| Error::Input(format!("face walk lists unknown edge {e}"))))
            .collect()
    };
    set_outer(&mut g, &faces, &dec.emap, j)?;
    let mut tfaces = Vec::new();
    for (r, fj) in j.faces.iter().enumerate() {
        let edges = resolve(&fj.face_walk)?;
        let (fi, reversed) = match_face(&g, &faces.walks, &edges)
            .ok_or_else(|| Error::Input(format!("face {} walk is not a face", r + 1)))?;
        let mut terminals = Vec::new();
        for t in &fj.terminals {
            terminals.push(*dec.vmap.get(t).ok_or_else(|| Error::Input(format!("unknown terminal {t}")))?);
        }
        if reversed && terminals.len() > 1 {
            terminals[1..].reverse();
        }
        tfaces.push(TerminalFace { walk: faces.walks[fi].clone(), terminals });
    }
    if tfaces.is_empty() {
        return Err(Error::Input("no terminal faces".into()));
    }
    let inst = TerminalInstance { graph: g, labels: dec.labels, faces: tfaces };
    inst.validate()?;
    Ok(inst)
}

pub fn graph_to_json(g: &PlanarGraph, labels: &[i64]) -> GraphJson {
    let edges = g
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| EdgeJson { id: i as i64, u: labels[e.u], v: labels[e.v], w: Value::String(fmt_q(&e.w)) })
        .collect();
    let rotation = (0..g.n())
        .map(|v| (labels[v].to_string(), g.rotation[v].iter().map(|&e| e as i64).collect()))
        .collect();
    let outer_face_walk = g.outer.and_then(|d| {
        let faces = g.faces().ok()?;
        let f = faces.face_of[d];
        Some(faces.walks[f].iter().map(|&d| edge_of(d) as i64).collect())
    });
    GraphJson { vertices: labels.to_vec(), edges, rotation, outer_face_walk, faces: Vec::new() }
}

pub fn instance_to_json(inst: &TerminalInstance) -> GraphJson {
    let mut j = graph_to_json(&inst.graph, &inst.labels);
    j.faces = inst
        .faces
        .iter()
        .map(|f| FaceJson {
            face_walk: f.walk.iter().map(|&d| edge_of(d) as i64).collect(),
            terminals: f.terminals.iter().map(|&t| inst.labels[t]).collect(),
        })
        .collect();
    j
}
