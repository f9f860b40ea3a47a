//! Turning an instance into a simplified one: terminal faces become disjoint
//! terminal cycles, and the terminal shortest paths are redrawn as curves
//! that pairwise cross at most once.
//!
//! Every vertex becomes a disc and every edge a strip. A strip holds its
//! curves in left-to-right order as seen from `u` to `v`. The ports of a disc
//! are listed counterclockwise; at a terminal the terminal itself is the first
//! port, sitting in the corner that faces its terminal face. Two curves cross
//! inside a disc exactly when their chords interleave.

use crate::arrangement::{Arrangement, Crossing, Strand};
use crate::error::{ensure, Error, Result};
use crate::graph::{dart, edge_of, PlanarGraph};
use crate::instance::{TerminalFace, TerminalInstance};
use crate::paths::{distances, path_tree, terminal_distances};
use crate::rational::Q;
use log::debug;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

/// Assigns terminals shared by several faces to the lowest-index face and
/// drops faces left without terminals.
pub fn enforce_face_disjointness(inst: &TerminalInstance) -> TerminalInstance {
    let mut out = inst.clone();
    let mut taken = vec![false; inst.graph.n()];
    out.faces.clear();
    for face in &inst.faces {
        let terminals: Vec<usize> = face.terminals.iter().copied().filter(|&t| !taken[t]).collect();
        for &t in &terminals {
            taken[t] = true;
        }
        if !terminals.is_empty() {
            out.faces.push(TerminalFace { walk: face.walk.clone(), terminals });
        }
    }
    out
}

/// Adds, inside every terminal face with at least two terminals, an edge
/// between consecutive terminals weighted by their distance. The returned
/// face walks are the new terminal cycles.
pub fn enforce_face_cycles(inst: &TerminalInstance) -> Result<TerminalInstance> {
    let mut g = inst.graph.clone();
    let mut new_faces = Vec::new();
    let mut anchors = Vec::new();
    for (r, face) in inst.faces.iter().enumerate() {
        let ts = &face.terminals;
        let m = ts.len();
        if m < 2 {
            let d = inst.corner(r, ts[0]).ok_or_else(|| Error::Input("terminal not on its face".into()))?;
            anchors.push(d);
            continue;
        }
        let corners: Vec<usize> = ts
            .iter()
            .map(|&t| inst.corner(r, t).ok_or_else(|| Error::Input("terminal not on its face".into())))
            .collect::<Result<_>>()?;
        let dist: Vec<Q> = (0..m)
            .map(|i| {
                distances(&inst.graph, ts[i])[ts[(i + 1) % m]].clone().ok_or(Error::Unreachable(ts[i], ts[(i + 1) % m]))
            })
            .collect::<Result<_>>()?;
        let frame: Vec<usize> = (0..m).map(|i| g.push_edge(ts[i], ts[(i + 1) % m], dist[i].clone())).collect();
        for i in 0..m {
            let t = ts[i];
            let e_in = edge_of(corners[i]);
            let p = g.rotation[t].iter().position(|&e| e == e_in).expect("corner edge at terminal");
            let back = frame[(i + m - 1) % m];
            g.rotation[t].splice(p + 1..p + 1, [back, frame[i]]);
        }
        anchors.push(dart(frame[0], 0));
    }
    let faces = g.check_euler()?;
    for (r, face) in inst.faces.iter().enumerate() {
        let f = faces.face_of[anchors[r]];
        new_faces.push(TerminalFace { walk: faces.walks[f].clone(), terminals: face.terminals.clone() });
    }
    let outer = g.outer;
    let mut out = TerminalInstance { graph: g, labels: inst.labels.clone(), faces: new_faces };
    out.graph.outer = outer;
    Ok(out)
}

/// Result of preprocessing.
#[derive(Clone, Debug)]
pub struct SimplifiedInstance {
    /// Instance with frame edges and terminal cycles as face walks.
    pub framed: TerminalInstance,
    /// Terminal index to vertex of `framed.graph`.
    pub terminals: Vec<usize>,
    /// All terminal-pair strands; strand `(a, b)` has `a < b`.
    pub arrangement: Arrangement,
    /// Segment weights per strand.
    pub weights: Vec<Vec<Q>>,
    /// Route of every strand as edges of `framed.graph`.
    pub routes: Vec<Vec<usize>>,
    /// Disc (vertex of `framed.graph`) holding every crossing.
    pub crossing_disc: Vec<usize>,
    pub uncross_steps: usize,
}

impl SimplifiedInstance {
    pub fn strand_of(&self, a: usize, b: usize) -> usize {
        let (a, b) = (a.min(b), a.max(b));
        let k = self.terminals.len();
        // Strands are created in lexicographic pair order.
        a * k - a * (a + 1) / 2 + (b - a - 1)
    }

    /// The simplified graph: terminals, crossings and strand segments.
    pub fn graph(&self) -> Result<PlanarGraph> {
        Ok(self.arrangement.to_graph(false, Some(&self.weights))?.graph)
    }
}

struct Route {
    verts: Vec<usize>,
    edges: Vec<usize>,
    index: HashMap<usize, usize>,
}

struct Redraw<'a> {
    g: &'a PlanarGraph,
    /// For terminal vertices, the first edge after the terminal-face corner.
    gap_first: Vec<Option<usize>>,
    routes: Vec<Route>,
    strips: Vec<Vec<usize>>,
    pos: Vec<[usize; 2]>,
}

enum Exit {
    Edge(usize),
    End,
}

impl<'a> Redraw<'a> {
    fn next_edge(&self, s: usize, e: usize, toward: usize) -> Exit {
        let r = &self.routes[s];
        let i = r.index[&e];
        if r.verts[i + 1] == toward {
            if i + 1 < r.edges.len() { Exit::Edge(r.edges[i + 1]) } else { Exit::End }
        } else if i > 0 {
            Exit::Edge(r.edges[i - 1])
        } else {
            Exit::End
        }
    }

    /// Doubled counterclockwise offset of an exit from the incoming edge.
    fn offset(&self, x: usize, e_in: usize, exit: &Exit) -> usize {
        let deg = self.g.rotation[x].len();
        let side = |e: usize| if self.g.edges[e].u == x { 0 } else { 1 };
        let pin = self.pos[e_in][side(e_in)];
        match exit {
            Exit::Edge(e) => 2 * ((self.pos[*e][side(*e)] + deg - pin) % deg),
            Exit::End => {
                let gf = self.gap_first[x].expect("curve ends at a terminal");
                let pg = self.pos[gf][side(gf)];
                2 * ((pg + 2 * deg - pin - 1) % deg) + 1
            }
        }
    }

    /// Follows two curves sharing strip `e` toward `toward` until they part.
    /// `Less` means `a` is left of `b` as seen travelling toward `toward`.
    fn part(&self, a: usize, b: usize, e: usize, toward: usize) -> Option<Ordering> {
        let (mut e, mut x) = (e, toward);
        loop {
            let na = self.next_edge(a, e, x);
            let nb = self.next_edge(b, e, x);
            match (&na, &nb) {
                (Exit::End, Exit::End) => return None,
                (Exit::Edge(p), Exit::Edge(q)) if p == q => {
                    e = *p;
                    x = self.g.other(*p, x);
                }
                _ => {
                    let (oa, ob) = (self.offset(x, e, &na), self.offset(x, e, &nb));
                    return Some(ob.cmp(&oa));
                }
            }
        }
    }

    fn strip_cmp(&self, e: usize, a: usize, b: usize) -> Ordering {
        let ed = &self.g.edges[e];
        if let Some(o) = self.part(a, b, e, ed.v) {
            return o;
        }
        self.part(a, b, e, ed.u).map(Ordering::reverse).expect("distinct strands share a whole route")
    }

    /// Ports of disc `x` in counterclockwise order: `(edge, strand)`, with
    /// `usize::MAX` as the edge of the terminal port.
    fn ports(&self, x: usize) -> HashMap<(usize, usize), usize> {
        let rot = &self.g.rotation[x];
        let start = match self.gap_first[x] {
            Some(gf) => rot.iter().position(|&e| e == gf).unwrap(),
            None => 0,
        };
        let mut out = HashMap::new();
        let mut n = 1;
        for i in 0..rot.len() {
            let e = rot[(start + i) % rot.len()];
            let list = &self.strips[e];
            let iter: Box<dyn Iterator<Item = &usize>> =
                if self.g.edges[e].u == x { Box::new(list.iter().rev()) } else { Box::new(list.iter()) };
            for &s in iter {
                out.insert((e, s), n);
                n += 1;
            }
        }
        out
    }

    /// Chords through disc `x`, oriented along their strands.
    fn chords(&self, x: usize, through: &[usize]) -> Vec<(usize, usize, usize)> {
        let ports = self.ports(x);
        let mut out = Vec::new();
        for &s in through {
            let r = &self.routes[s];
            let j = r.verts.iter().position(|&v| v == x).unwrap();
            let pin = if j == 0 { 0 } else { ports[&(r.edges[j - 1], s)] };
            let pout = if j == r.edges.len() { 0 } else { ports[&(r.edges[j], s)] };
            out.push((s, pin, pout));
        }
        out
    }
}

fn interleave(p: (usize, usize), q: (usize, usize)) -> bool {
    if p.0 == q.0 || p.0 == q.1 || p.1 == q.0 || p.1 == q.1 {
        return false;
    }
    let (lo, hi) = (p.0.min(p.1), p.0.max(p.1));
    let inside = |x: usize| lo < x && x < hi;
    inside(q.0) != inside(q.1)
}

fn disc_pairs(chords: &[(usize, usize, usize)]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..chords.len() {
        for j in i + 1..chords.len() {
            let (a, b) = (chords[i], chords[j]);
            if interleave((a.1, a.2), (b.1, b.2)) {
                out.push((a.0.min(b.0), a.0.max(b.0)));
            }
        }
    }
    out
}

pub fn uncross_shortest_paths(inst: &TerminalInstance, seed: u64) -> Result<SimplifiedInstance> {
    let g = &inst.graph;
    let terminals = inst.terminals();
    let k = terminals.len();
    let mut gap_first = vec![None; g.n()];
    for (r, face) in inst.faces.iter().enumerate() {
        for &t in &face.terminals {
            let d_in = inst.corner(r, t).ok_or_else(|| Error::Internal("terminal off its face".into()))?;
            let rot = &g.rotation[t];
            let p = rot.iter().position(|&e| e == edge_of(d_in)).unwrap();
            gap_first[t] = Some(rot[(p + 1) % rot.len()]);
        }
    }

    // Unique shortest paths for all terminal pairs, in lexicographic order.
    let mut routes = Vec::new();
    let mut pairs = Vec::new();
    for i in 0..k {
        let tree = path_tree(g, terminals[i]);
        for j in i + 1..k {
            let p = tree.path_to(g, terminals[j])?;
            let index = p.edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
            routes.push(Route { verts: p.vertices, edges: p.edges, index });
            pairs.push((i, j));
        }
    }
    let mut strips = vec![Vec::new(); g.m()];
    for (s, r) in routes.iter().enumerate() {
        for &e in &r.edges {
            strips[e].push(s);
        }
    }
    let mut rd = Redraw { g, gap_first, routes, strips, pos: g.positions()? };
    for e in 0..g.m() {
        let mut list = std::mem::take(&mut rd.strips[e]);
        list.sort_by(|&a, &b| rd.strip_cmp(e, a, b));
        rd.strips[e] = list;
    }

    // Curves through each disc.
    let mut through = vec![Vec::new(); g.n()];
    for (s, r) in rd.routes.iter().enumerate() {
        for &v in &r.verts {
            through[v].push(s);
        }
    }
    let mut at_disc: Vec<Vec<(usize, usize)>> = vec![Vec::new(); g.n()];
    let mut cross: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    let mut total = 0usize;
    for x in 0..g.n() {
        at_disc[x] = disc_pairs(&rd.chords(x, &through[x]));
        for &p in &at_disc[x] {
            cross.entry(p).or_default().push(x);
            total += 1;
        }
    }
    let cap = total + 1;
    let mut steps = 0;
    let share = |a: usize, b: usize| {
        let (p, q) = (pairs[a], pairs[b]);
        [p.0, p.1].into_iter().find(|t| *t == q.0 || *t == q.1)
    };
    loop {
        let pick = cross.iter().find(|(&(a, b), discs)| discs.len() >= 2 || share(a, b).is_some());
        let Some((&(a, b), discs)) = pick else { break };
        steps += 1;
        if steps > cap {
            return Err(Error::NonTermination(format!("{steps} uncross steps, initial crossings {total}")));
        }
        let ra = &rd.routes[a];
        let mut idx: Vec<usize> = discs.iter().map(|x| ra.verts.iter().position(|v| v == x).unwrap()).collect();
        idx.sort();
        let (from, to) = if discs.len() >= 2 {
            (idx[0], idx[1])
        } else {
            let t = terminals[share(a, b).unwrap()];
            let tpos = if ra.verts[0] == t { 0 } else { ra.verts.len() - 1 };
            (tpos.min(idx[0]), tpos.max(idx[0]))
        };
        let seg: Vec<usize> = ra.edges[from..to].to_vec();
        let touched: Vec<usize> = ra.verts[from..=to].to_vec();
        for &e in &seg {
            let list = &mut rd.strips[e];
            let pa = list.iter().position(|&s| s == a);
            let pb = list.iter().position(|&s| s == b);
            match (pa, pb) {
                (Some(pa), Some(pb)) => list.swap(pa, pb),
                _ => return Err(Error::Internal(format!("strands {a},{b} do not share strip {e}"))),
            }
        }
        let before = total;
        for &x in &touched {
            for p in std::mem::take(&mut at_disc[x]) {
                let v = cross.get_mut(&p).unwrap();
                v.retain(|&d| d != x);
                if v.is_empty() {
                    cross.remove(&p);
                }
                total -= 1;
            }
            at_disc[x] = disc_pairs(&rd.chords(x, &through[x]));
            for &p in &at_disc[x] {
                cross.entry(p).or_default().push(x);
                total += 1;
            }
        }
        ensure!(total < before, "uncross step did not reduce crossings ({before} -> {total})");
    }
    debug!("uncrossing finished after {steps} steps, {total} crossings remain");

    build_simplified(inst, &terminals, &rd, &through, &pairs, seed, steps)
}

/// Places ports on the parabola `y = x^2` and orders crossings along chords.
fn build_simplified(
    inst: &TerminalInstance,
    terminals: &[usize],
    rd: &Redraw,
    through: &[Vec<usize>],
    pairs: &[(usize, usize)],
    seed: u64,
    steps: usize,
) -> Result<SimplifiedInstance> {
    let g = &inst.graph;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut crossings: Vec<Crossing> = Vec::new();
    let mut crossing_disc = Vec::new();
    // Per strand, per route vertex index: crossing ids in chord order.
    let mut along: Vec<Vec<Vec<usize>>> = rd.routes.iter().map(|r| vec![Vec::new(); r.verts.len()]).collect();
    for x in 0..g.n() {
        let chords = rd.chords(x, &through[x]);
        if chords.len() < 2 {
            continue;
        }
        let nports = 1 + chords.iter().map(|c| c.1.max(c.2)).max().unwrap();
        let mut attempt = 0;
        let placed = loop {
            attempt += 1;
            let mut xs = Vec::with_capacity(nports);
            let mut acc = 0i64;
            for _ in 0..nports {
                acc += rng.gen_range(1..=1000);
                xs.push(BigInt::from(acc));
            }
            if let Some(p) = order_in_disc(&chords, &xs) {
                break p;
            }
            ensure!(attempt < 100, "could not place ports in disc {x} generically");
        };
        let mut ids = HashMap::new();
        for &(a, b, sign) in &placed.pairs {
            ids.insert((a, b), crossings.len());
            crossings.push(Crossing { s: [a, b], sign });
            crossing_disc.push(x);
        }
        for (ci, order) in placed.order.iter().enumerate() {
            let s = chords[ci].0;
            let j = rd.routes[s].verts.iter().position(|&v| v == x).unwrap();
            along[s][j] = order.iter().map(|&o| ids[&(s.min(o), s.max(o))]).collect();
        }
    }
    let mut strands = Vec::new();
    let mut weights = Vec::new();
    for (s, r) in rd.routes.iter().enumerate() {
        let mut list = Vec::new();
        let mut w = Vec::new();
        let mut acc = Q::zero();
        for j in 0..r.verts.len() {
            for &c in &along[s][j] {
                list.push(c);
                w.push(std::mem::replace(&mut acc, Q::zero()));
            }
            if j < r.edges.len() {
                acc += &g.edges[r.edges[j]].w;
            }
        }
        w.push(acc);
        strands.push(Strand { a: pairs[s].0, b: pairs[s].1, crossings: list });
        weights.push(w);
    }
    let k = terminals.len();
    let mut ends = vec![Vec::new(); k];
    for (t, &v) in terminals.iter().enumerate() {
        let ports = rd.ports(v);
        let mut list: Vec<(usize, usize)> = Vec::new();
        for (s, r) in rd.routes.iter().enumerate() {
            if pairs[s].0 == t {
                list.push((ports[&(r.edges[0], s)], s));
            } else if pairs[s].1 == t {
                list.push((ports[&(*r.edges.last().unwrap(), s)], s));
            }
        }
        list.sort();
        ends[t] = list.into_iter().map(|(_, s)| s).collect();
    }
    let mut faces = Vec::new();
    let mut next = 0;
    for face in &inst.faces {
        faces.push((next..next + face.terminals.len()).collect());
        next += face.terminals.len();
    }
    let arrangement = Arrangement { faces, strands, crossings, ends };
    arrangement.check()?;
    let si = SimplifiedInstance {
        framed: inst.clone(),
        terminals: terminals.to_vec(),
        arrangement,
        weights,
        routes: rd.routes.iter().map(|r| r.edges.clone()).collect(),
        crossing_disc,
        uncross_steps: steps,
    };
    Ok(si)
}

struct Placed {
    /// (strand, strand, sign) with the smaller strand first.
    pairs: Vec<(usize, usize, i8)>,
    /// Per chord, the other strands in the order they are met.
    order: Vec<Vec<usize>>,
}

fn order_in_disc(chords: &[(usize, usize, usize)], xs: &[BigInt]) -> Option<Placed> {
    use num_rational::BigRational;
    let mut meets: Vec<Vec<(BigRational, usize)>> = vec![Vec::new(); chords.len()];
    let mut pairs = Vec::new();
    for i in 0..chords.len() {
        for j in i + 1..chords.len() {
            let (a, b) = (chords[i], chords[j]);
            if !interleave((a.1, a.2), (b.1, b.2)) {
                continue;
            }
            let (a1, a2, b1, b2) = (&xs[a.1], &xs[a.2], &xs[b.1], &xs[b.2]);
            let num = a1 * a2 - b1 * b2;
            let den = (a1 + a2) - (b1 + b2);
            if den.is_zero() {
                return None;
            }
            let xm = BigRational::new(num, den);
            meets[i].push((xm.clone(), j));
            meets[j].push((xm, i));
            let sa: BigInt = (a2 - a1).signum();
            let sb: BigInt = (b2 - b1).signum();
            let cr = sa * sb * ((b1 + b2) - (a1 + a2));
            // Positive when chord j turns left of chord i.
            let sign_ij: i8 = if cr.is_positive() { 1 } else { -1 };
            if a.0 < b.0 {
                pairs.push((a.0, b.0, sign_ij));
            } else {
                pairs.push((b.0, a.0, -sign_ij));
            }
        }
    }
    let mut order = Vec::with_capacity(chords.len());
    for (i, m) in meets.iter_mut().enumerate() {
        m.sort_by(|p, q| p.0.cmp(&q.0));
        if m.windows(2).any(|w| w[0].0 == w[1].0) {
            return None;
        }
        if xs[chords[i].1] > xs[chords[i].2] {
            m.reverse();
        }
        order.push(m.iter().map(|&(_, j)| chords[j].0).collect());
    }
    Some(Placed { pairs, order })
}

/// Full preprocessing pipeline.
pub fn simplify(inst: &TerminalInstance, seed: u64) -> Result<SimplifiedInstance> {
    let disjoint = enforce_face_disjointness(inst);
    let framed = enforce_face_cycles(&disjoint)?;
    uncross_shortest_paths(&framed, seed)
}

/// Checks that terminal distances in the simplified graph equal the input's.
pub fn check_distances(inst: &TerminalInstance, si: &SimplifiedInstance) -> Result<()> {
    let before = terminal_distances(&inst.graph, &si.terminals)?;
    let g = si.graph()?;
    let idx: Vec<usize> = (0..si.terminals.len()).collect();
    let after = terminal_distances(&g, &idx)?;
    for ((a, b), d) in &after {
        let (va, vb) = (si.terminals[*a], si.terminals[*b]);
        let want = &before[&(va.min(vb), va.max(vb))];
        ensure!(want == d, "distance between terminals {a},{b} changed");
    }
    Ok(())
}
