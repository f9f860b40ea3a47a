//! The full construction: preprocess, critical paths, skeleton, weights,
//! one-face parts and gluing. Each stage can also run on its own from a
//! serialized [`Artifact`].

use crate::arrangement::{Arrangement, Drawing};
use crate::assemble::{glue, Emulator, EmulatorJson, Part, Provenance};
use crate::critical::{critical_paths, CriticalPathSet};
use crate::error::{ensure, Error, Result};
use crate::graph::{edge_of, PlanarGraph};
use crate::instance::{graph_to_json, instance_from_json, instance_to_json, GraphJson, TerminalInstance};
use crate::oneface::oneface_emulator;
use crate::paths::terminal_distances;
use crate::preprocess::simplify;
use crate::rational::Q;
use crate::skeleton::{eliminate_all, property4_violations, ElimConfig, Skeleton};
use crate::weights::{check_solution, default_cap, solve, Designated, Solution, WeightProblem};
use log::info;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};

#[derive(Clone, Debug)]
pub struct BuildConfig {
    pub seed: u64,
    pub audit_every: usize,
    /// Separation rounds for the skeleton LP; `None` picks the default.
    pub lp_cap: Option<usize>,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig { seed: 0, audit_every: 1, lp_cap: None }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct BuildStats {
    pub f: usize,
    pub k: usize,
    pub per_face: Vec<usize>,
    pub n_g: usize,
    pub n_h: usize,
    pub n_hstar: usize,
    pub hstar_crossings: usize,
    pub critical_per_terminal: Vec<usize>,
    pub lp_rounds: usize,
    pub lp_pivots: usize,
    pub elim_iterations: usize,
    pub bad_history: Vec<usize>,
    pub property4_violations: usize,
    pub oneface_rounds: usize,
}

/// Output of preprocessing needed downstream.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Preprocessed {
    /// Vertex of every terminal index in the input graph.
    pub terminals: Vec<usize>,
    pub arrangement: Arrangement,
    /// Segment weights per strand.
    #[serde(with = "q_table")]
    pub weights: Vec<Vec<Q>>,
    pub uncross_steps: usize,
}

mod q_table {
    use crate::rational::{fmt_q, parse_q, Q};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(x.iter().map(|r| r.iter().map(fmt_q).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Q>>, D::Error> {
        let raw: Vec<Vec<String>> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|r| r.into_iter().map(|s| parse_q(&s).ok_or_else(|| D::Error::custom(format!("bad rational {s}")))).collect())
            .collect()
    }
}

/// A one-face part as stored between stages.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartJson {
    #[serde(flatten)]
    pub graph: GraphJson,
    pub terminals: Vec<i64>,
}

/// Everything the stages have produced so far.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Artifact {
    pub instance: GraphJson,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preprocessed: Option<Preprocessed>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub critical: Option<CriticalPathSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skeleton: Option<Skeleton>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hstar: Option<EmulatorJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parts: Option<Vec<PartJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emulator: Option<EmulatorJson>,
    #[serde(default)]
    pub stats: BuildStats,
}

fn need<'a, T>(x: &'a Option<T>, what: &str) -> Result<&'a T> {
    x.as_ref().ok_or_else(|| Error::Input(format!("artifact has no {what}; run that stage first")))
}

impl Artifact {
    pub fn new(inst: &TerminalInstance, seed: u64) -> Artifact {
        Artifact {
            instance: instance_to_json(inst),
            seed,
            preprocessed: None,
            critical: None,
            skeleton: None,
            hstar: None,
            parts: None,
            emulator: None,
            stats: BuildStats::default(),
        }
    }

    pub fn input(&self) -> Result<TerminalInstance> {
        instance_from_json(&self.instance)
    }

    pub fn preprocess(&mut self) -> Result<()> {
        let inst = self.input()?;
        let pre = preprocess(&inst, self.seed)?;
        self.stats.f = pre.arrangement.faces.len();
        self.stats.k = pre.terminals.len();
        self.stats.per_face = pre.arrangement.faces.iter().map(|f| f.len()).collect();
        self.stats.n_g = inst.graph.n();
        self.preprocessed = Some(pre);
        Ok(())
    }

    pub fn critical(&mut self) -> Result<()> {
        let pre = need(&self.preprocessed, "preprocessing")?;
        if pre.arrangement.faces.len() < 2 {
            return Ok(());
        }
        let cps = critical(&pre.arrangement)?;
        self.stats.critical_per_terminal = (0..pre.terminals.len()).map(|t| cps.critical_from(t).len()).collect();
        self.critical = Some(cps);
        Ok(())
    }

    pub fn skeleton(&mut self, audit_every: usize) -> Result<()> {
        let pre = need(&self.preprocessed, "preprocessing")?;
        if pre.arrangement.faces.len() < 2 {
            return Ok(());
        }
        let cps = need(&self.critical, "critical paths")?;
        let sk = skeleton(&pre.arrangement, cps, audit_every)?;
        self.stats.elim_iterations = sk.stats.iterations;
        self.stats.bad_history = sk.stats.bad_history.clone();
        self.stats.hstar_crossings = sk.arr.crossings.len();
        self.skeleton = Some(sk);
        Ok(())
    }

    pub fn weights(&mut self, cap: Option<usize>) -> Result<()> {
        let inst = self.input()?;
        let pre = need(&self.preprocessed, "preprocessing")?;
        let targets = target_distances(&inst, &pre.terminals)?;
        let host = match &self.skeleton {
            Some(sk) => {
                let (host, sol) = weigh(sk, pre, &targets, &inst, cap)?;
                self.stats.lp_rounds = sol.rounds;
                self.stats.lp_pivots = sol.pivots;
                host
            }
            None if pre.arrangement.faces.len() < 2 => bare_terminals(&inst, &pre.terminals),
            None => return Err(Error::Input("artifact has no skeleton; run that stage first".into())),
        };
        self.stats.n_hstar = host.graph.n();
        self.hstar = Some(host.to_json());
        Ok(())
    }

    pub fn oneface(&mut self) -> Result<()> {
        let inst = self.input()?;
        let pre = need(&self.preprocessed, "preprocessing")?;
        let targets = target_distances(&inst, &pre.terminals)?;
        let (parts, rounds) = oneface_parts(&pre.arrangement.faces, &targets)?;
        self.stats.oneface_rounds = rounds;
        self.parts = Some(
            parts
                .iter()
                .map(|p| {
                    let labels: Vec<i64> = (0..p.graph.n() as i64).collect();
                    PartJson { graph: graph_to_json(&p.graph, &labels), terminals: p.terminals.iter().map(|&t| t as i64).collect() }
                })
                .collect(),
        );
        Ok(())
    }

    pub fn glue(&mut self) -> Result<()> {
        let inst = self.input()?;
        let pre = need(&self.preprocessed, "preprocessing")?;
        let host = Emulator::from_json(need(&self.hstar, "skeleton weights")?)?;
        let parts = need(&self.parts, "one-face parts")?
            .iter()
            .map(|p| {
                let dec = crate::instance::decode_graph(&p.graph, true)?;
                let terminals = p
                    .terminals
                    .iter()
                    .map(|t| dec.vmap.get(t).copied().ok_or_else(|| Error::Input(format!("unknown part terminal {t}"))))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Part { graph: dec.graph, terminals })
            })
            .collect::<Result<Vec<_>>>()?;
        let host = align_host(host, &inst, &pre.terminals)?;
        let emulator = assemble(&inst, &pre.terminals, &pre.arrangement.faces, host, parts)?;
        self.stats.n_h = emulator.graph.n();
        self.emulator = Some(emulator.to_json());
        Ok(())
    }
}

/// Exact distances between all terminal pairs of the input, by terminal index.
pub fn target_distances(inst: &TerminalInstance, terminals: &[usize]) -> Result<BTreeMap<(usize, usize), Q>> {
    let by_vertex = terminal_distances(&inst.graph, terminals)?;
    let mut out = BTreeMap::new();
    for i in 0..terminals.len() {
        for j in i + 1..terminals.len() {
            let (a, b) = (terminals[i], terminals[j]);
            out.insert((i, j), by_vertex[&(a.min(b), a.max(b))].clone());
        }
    }
    Ok(out)
}

pub fn preprocess(inst: &TerminalInstance, seed: u64) -> Result<Preprocessed> {
    inst.validate()?;
    let si = simplify(inst, seed)?;
    Ok(Preprocessed {
        terminals: si.terminals,
        arrangement: si.arrangement,
        weights: si.weights,
        uncross_steps: si.uncross_steps,
    })
}

pub fn critical(arr: &Arrangement) -> Result<CriticalPathSet> {
    let drawing = arr.to_graph(true, None)?;
    critical_paths(arr, &drawing)
}

/// Eliminates bad pairs and checks the canonical crossings against the
/// shortest-path crossings.
pub fn skeleton(arr: &Arrangement, cps: &CriticalPathSet, audit_every: usize) -> Result<Skeleton> {
    let sk = eliminate_all(arr, cps, ElimConfig { audit_every })?;
    let viol = property4_violations(&sk.arr, &sk.canonical, arr)?;
    ensure!(viol.is_empty(), "canonical crossings differ from shortest-path crossings: {viol:?}");
    Ok(sk)
}

/// Reference weight of every skeleton edge: how far apart its two ends lie
/// along the same strand of the preprocessed instance, or zero where
/// rerouting reversed them.
pub fn reference_weights(sk: &Skeleton, full: &Arrangement, weights: &[Vec<Q>], d: &Drawing) -> Result<Vec<Q>> {
    let idx = full.strand_index();
    let mut at = BTreeMap::new();
    for (c, cr) in full.crossings.iter().enumerate() {
        at.insert((cr.s[0].min(cr.s[1]), cr.s[0].max(cr.s[1])), c);
    }
    let mut w0 = vec![Q::zero(); d.graph.m()];
    for (s, st) in sk.arr.strands.iter().enumerate() {
        let old = *idx.get(&(st.a, st.b)).ok_or_else(|| Error::Internal("skeleton strand not in the instance".into()))?;
        let ow = &weights[old];
        let mut prefix = Vec::with_capacity(ow.len());
        let mut acc = Q::zero();
        for w in ow {
            acc += w;
            prefix.push(acc.clone());
        }
        let opos: HashMap<usize, usize> = full.strands[old].crossings.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut marks = vec![Q::zero()];
        for &c in &st.crossings {
            let [x, y] = sk.arr.crossings[c].s;
            let o = &sk.arr.strands[if x == s { y } else { x }];
            let oo = idx[&(o.a, o.b)];
            let oc = *at.get(&(old.min(oo), old.max(oo))).ok_or_else(|| Error::Internal("skeleton crossing not in the instance".into()))?;
            marks.push(prefix[opos[&oc]].clone());
        }
        marks.push(acc);
        for (j, &e) in d.seg[s].iter().enumerate() {
            let gap = &marks[j + 1] - &marks[j];
            w0[e] = if gap.is_negative() { Q::zero() } else { gap };
        }
    }
    Ok(w0)
}

/// The weight problem of a skeleton: canonical paths are designated.
pub fn skeleton_problem(
    sk: &Skeleton,
    full: &Arrangement,
    weights: &[Vec<Q>],
    targets: &BTreeMap<(usize, usize), Q>,
) -> Result<WeightProblem> {
    let d = sk.arr.to_graph(false, None)?;
    let reference = reference_weights(sk, full, weights, &d)?;
    let designated = sk
        .canonical
        .iter()
        .map(|cp| Designated { s: cp.t, t: cp.t2, edges: cp.darts(&sk.arr, &d).into_iter().map(edge_of).collect() })
        .collect();
    Ok(WeightProblem {
        graph: d.graph,
        terminals: (0..sk.arr.k()).collect(),
        designated,
        targets: targets.clone(),
        reference: Some(reference),
    })
}

/// Weighted skeleton as an emulator whose terminals carry input ids.
fn weigh(
    sk: &Skeleton,
    pre: &Preprocessed,
    targets: &BTreeMap<(usize, usize), Q>,
    inst: &TerminalInstance,
    cap: Option<usize>,
) -> Result<(Emulator, Solution)> {
    let problem = skeleton_problem(sk, &pre.arrangement, &pre.weights, targets)?;
    let sol = solve(&problem, cap.unwrap_or_else(|| default_cap(&problem)))?;
    check_solution(&problem, &sol.weights)?;
    let mut g = problem.graph;
    for (e, w) in g.edges.iter_mut().zip(&sol.weights) {
        e.w = w.clone();
    }
    let k = pre.terminals.len();
    let mut labels: Vec<i64> = pre.terminals.iter().map(|&v| inst.labels[v]).collect();
    let top = inst.labels.iter().copied().max().unwrap_or(0);
    labels.extend((k..g.n()).map(|i| top + 1 + (i - k) as i64));
    let m = g.m();
    Ok((Emulator { graph: g, terminals: (0..k).collect(), labels, provenance: vec![Provenance::Hstar; m] }, sol))
}

fn bare_terminals(inst: &TerminalInstance, terminals: &[usize]) -> Emulator {
    Emulator {
        graph: PlanarGraph::new(terminals.len()),
        terminals: (0..terminals.len()).collect(),
        labels: terminals.iter().map(|&v| inst.labels[v]).collect(),
        provenance: Vec::new(),
    }
}

/// Puts the host's terminal list back in terminal-index order.
fn align_host(mut host: Emulator, inst: &TerminalInstance, terminals: &[usize]) -> Result<Emulator> {
    let by_label: HashMap<i64, usize> = host.terminals.iter().map(|&t| (host.labels[t], t)).collect();
    host.terminals = terminals
        .iter()
        .map(|&v| by_label.get(&inst.labels[v]).copied().ok_or_else(|| Error::Input(format!("host lacks terminal {}", inst.labels[v]))))
        .collect::<Result<Vec<_>>>()?;
    Ok(host)
}

pub fn oneface_parts(faces: &[Vec<usize>], targets: &BTreeMap<(usize, usize), Q>) -> Result<(Vec<Part>, usize)> {
    let mut parts = Vec::new();
    let mut rounds = 0;
    for ts in faces {
        let m = ts.len();
        let local: BTreeMap<(usize, usize), Q> = (0..m)
            .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
            .map(|(i, j)| {
                let (a, b) = (ts[i], ts[j]);
                ((i, j), targets[&(a.min(b), a.max(b))].clone())
            })
            .collect();
        let (grid, r) = oneface_emulator(&local, m)?;
        rounds += r;
        parts.push(Part { graph: grid.graph, terminals: grid.terminals });
    }
    Ok((parts, rounds))
}

/// Glues the parts into the host and orders terminals as in the input.
fn assemble(
    inst: &TerminalInstance,
    terminals: &[usize],
    faces: &[Vec<usize>],
    host: Emulator,
    mut parts: Vec<Part>,
) -> Result<Emulator> {
    let mut emulator = if faces.len() == 1 {
        single_face(&host, &faces[0], parts.pop().ok_or_else(|| Error::Input("no one-face part".into()))?)
    } else {
        glue(&host, faces, &parts)?
    };
    let pos: HashMap<usize, usize> = terminals.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut seen = BTreeSet::new();
    emulator.terminals = inst
        .terminals()
        .into_iter()
        .filter(|v| seen.insert(*v))
        .map(|v| pos.get(&v).map(|&i| emulator.terminals[i]).ok_or_else(|| Error::Internal("terminal lost".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok(emulator)
}

/// With one face the emulator is the part itself.
fn single_face(host: &Emulator, face: &[usize], part: Part) -> Emulator {
    let mut labels = vec![i64::MIN; part.graph.n()];
    let mut terminals = vec![0; host.terminals.len()];
    for (i, &t) in face.iter().enumerate() {
        labels[part.terminals[i]] = host.labels[host.terminals[t]];
        terminals[t] = part.terminals[i];
    }
    let mut next = host.labels.iter().copied().max().unwrap_or(-1) + 1;
    for l in labels.iter_mut().filter(|l| **l == i64::MIN) {
        *l = next;
        next += 1;
    }
    let m = part.graph.m();
    Emulator { graph: part.graph, terminals, labels, provenance: vec![Provenance::Oneface(0); m] }
}

pub struct Built {
    pub emulator: Emulator,
    pub stats: BuildStats,
    pub preprocessed: Preprocessed,
    pub critical: Option<CriticalPathSet>,
    pub skeleton: Option<Skeleton>,
}

pub fn build(inst: &TerminalInstance, cfg: &BuildConfig) -> Result<Built> {
    let pre = preprocess(inst, cfg.seed)?;
    let arr = &pre.arrangement;
    let k = pre.terminals.len();
    let targets = target_distances(inst, &pre.terminals)?;
    let mut stats = BuildStats {
        f: arr.faces.len(),
        k,
        per_face: arr.faces.iter().map(|f| f.len()).collect(),
        n_g: inst.graph.n(),
        ..Default::default()
    };
    let (host, cps, sk) = if arr.faces.len() >= 2 {
        let cps = critical(arr)?;
        stats.critical_per_terminal = (0..k).map(|t| cps.critical_from(t).len()).collect();
        let sk = skeleton(arr, &cps, cfg.audit_every)?;
        stats.elim_iterations = sk.stats.iterations;
        stats.bad_history = sk.stats.bad_history.clone();
        stats.hstar_crossings = sk.arr.crossings.len();
        let (host, sol) = weigh(&sk, &pre, &targets, inst, cfg.lp_cap)?;
        stats.lp_rounds = sol.rounds;
        stats.lp_pivots = sol.pivots;
        (host, Some(cps), Some(sk))
    } else {
        (bare_terminals(inst, &pre.terminals), None, None)
    };
    stats.n_hstar = host.graph.n();
    info!("skeleton ready: {} vertices", host.graph.n());
    let (parts, rounds) = oneface_parts(&arr.faces, &targets)?;
    stats.oneface_rounds = rounds;
    let emulator = assemble(inst, &pre.terminals, &arr.faces, host, parts)?;
    stats.n_h = emulator.graph.n();
    Ok(Built { emulator, stats, preprocessed: pre, critical: cps, skeleton: sk })
}
