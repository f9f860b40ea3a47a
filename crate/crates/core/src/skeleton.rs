//! The skeleton arrangement built from critical paths, and the elimination of
//! bad pairs by rerouting critical strands around empty triangles.
//!
//! Everything here is combinatorial: a reroute only edits crossing orders.
//! Strand ids, crossing ids and crossing signs never change after the initial
//! build, so names computed once stay valid throughout.

use crate::arrangement::{Arrangement, Crossing, Drawing, Strand};
use crate::critical::{key, Bend, CanonicalPath, CriticalPathSet, PairKey};
use crate::error::{ensure, Error, Result};
use crate::graph::{path_crossings, side_region, twin};
use log::debug;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// A 1-bend path: strand `s1` from terminal `a` (lower face) and strand `s2`
/// from terminal `b`, joined at their crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OneBend {
    pub a: usize,
    pub s1: usize,
    pub b: usize,
    pub s2: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadPair {
    /// The critical strand.
    pub p: usize,
    pub q: OneBend,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ElimStats {
    pub iterations: usize,
    pub minimalize_steps: usize,
    /// Total bad-pair count before the first and after every reroute.
    pub bad_history: Vec<usize>,
    pub audits: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Skeleton {
    pub arr: Arrangement,
    pub critical: CriticalPathSet,
    /// Whether the far part of a canonical path leaves its first primary on
    /// the left in this drawing convention.
    pub left: bool,
    pub safe: BTreeSet<OneBend>,
    pub canonical: Vec<CanonicalPath>,
    pub stats: ElimStats,
}

/// Restricts an arrangement to the critical strands.
pub fn build_initial(full: &Arrangement, cps: &CriticalPathSet) -> Result<Arrangement> {
    let idx = full.strand_index();
    let keys = cps.critical_pairs();
    let mut map = HashMap::new();
    let mut strands = Vec::new();
    for k in &keys {
        let old = *idx.get(k).ok_or_else(|| Error::Internal(format!("critical pair {k:?} has no strand")))?;
        map.insert(old, strands.len());
        let s = &full.strands[old];
        strands.push(Strand { a: s.a, b: s.b, crossings: s.crossings.clone() });
    }
    let mut cmap = HashMap::new();
    let mut crossings = Vec::new();
    for (c, cr) in full.crossings.iter().enumerate() {
        if let (Some(&x), Some(&y)) = (map.get(&cr.s[0]), map.get(&cr.s[1])) {
            cmap.insert(c, crossings.len());
            crossings.push(Crossing { s: [x, y], sign: cr.sign });
        }
    }
    for s in &mut strands {
        s.crossings = s.crossings.iter().filter_map(|c| cmap.get(c).copied()).collect();
    }
    let ends = full.ends.iter().map(|l| l.iter().filter_map(|s| map.get(s).copied()).collect()).collect();
    let arr = Arrangement { faces: full.faces.clone(), strands, crossings, ends };
    arr.check()?;
    Ok(arr)
}

/// Whether strand `s2`, heading to `toward`, leaves strand `s1` (walked from
/// `from`) on its left at crossing `c`.
pub fn exits_left(arr: &Arrangement, c: usize, s1: usize, from: usize, s2: usize, toward: usize) -> bool {
    let cr = &arr.crossings[c];
    let first = if cr.s[0] == s1 { 1 } else { -1 };
    let d1 = if arr.strands[s1].a == from { 1 } else { -1 };
    let d2 = if arr.strands[s2].b == toward { 1 } else { -1 };
    i32::from(cr.sign) * first * d1 * d2 > 0
}

struct Ctx {
    pair: HashMap<PairKey, usize>,
    face_of: Vec<usize>,
    primaries: BTreeSet<(usize, usize)>,
}

impl Ctx {
    fn new(arr: &Arrangement, cps: &CriticalPathSet) -> Self {
        let mut pair = HashMap::new();
        for (c, cr) in arr.crossings.iter().enumerate() {
            pair.insert(key(cr.s[0], cr.s[1]), c);
        }
        Ctx { pair, face_of: arr.face_of_terminal(), primaries: cps.primaries() }
    }

    fn crossing(&self, s: usize, t: usize) -> Option<usize> {
        self.pair.get(&key(s, t)).copied()
    }
}

fn other_end(arr: &Arrangement, s: usize, t: usize) -> usize {
    let st = &arr.strands[s];
    if st.a == t {
        st.b
    } else {
        st.a
    }
}

fn pos_on(arr: &Arrangement, s: usize, c: usize) -> usize {
    arr.strands[s].crossings.iter().position(|&x| x == c).expect("crossing on strand")
}

/// Whether crossing `x` lies strictly between the end `from` of strand `s`
/// and crossing `c` on it.
fn before(arr: &Arrangement, s: usize, from: usize, x: usize, c: usize) -> bool {
    let (px, pc) = (pos_on(arr, s, x), pos_on(arr, s, c));
    if arr.strands[s].a == from {
        px < pc
    } else {
        px > pc
    }
}

/// Whether crossing `x` lies strictly between crossings `c1` and `c2` of `s`.
fn between(arr: &Arrangement, s: usize, x: usize, c1: usize, c2: usize) -> bool {
    let (p, p1, p2) = (pos_on(arr, s, x), pos_on(arr, s, c1), pos_on(arr, s, c2));
    p1.min(p2) < p && p < p1.max(p2)
}

fn bend_of(ctx: &Ctx, q: &OneBend) -> usize {
    ctx.crossing(q.s1, q.s2).expect("1-bend strands cross")
}

/// Crossings of strand `p` with the two parts of `q`, if `(p, q)` is a bad pair.
fn bad_crossings(arr: &Arrangement, ctx: &Ctx, p: usize, q: &OneBend) -> Option<(usize, usize)> {
    let sp = &arr.strands[p];
    let (fa, fb) = (ctx.face_of[q.a], ctx.face_of[q.b]);
    let (pa, pb) = (ctx.face_of[sp.a], ctx.face_of[sp.b]);
    if !((pa == fa && pb == fb) || (pa == fb && pb == fa)) {
        return None;
    }
    let x1 = ctx.crossing(p, q.s1)?;
    let x2 = ctx.crossing(p, q.s2)?;
    let d = bend_of(ctx, q);
    let ends = [sp.a, sp.b, q.a, q.b];
    if ends.iter().collect::<BTreeSet<_>>().len() < 4 {
        return None;
    }
    (before(arr, q.s1, q.a, x1, d) && before(arr, q.s2, q.b, x2, d)).then_some((x1, x2))
}

fn is_safe(arr: &Arrangement, d: &Drawing, ctx: &Ctx, q: &OneBend, left: bool) -> Result<bool> {
    let c = bend_of(ctx, q);
    let face_rep = &d.face_rep;
    let contains_face = |walk: &[usize], right: bool| -> Result<bool> {
        let region = side_region(&d.graph, &d.faces, walk, right)?;
        Ok(face_rep.iter().flatten().any(|&f| region[f]))
    };
    // Near wing at `a` and far wing at `b`; the turn at the bend goes
    // opposite ways for the two.
    let near = wing_walk(arr, d, q.s1, q.a, c, q.s2, left);
    let far = wing_walk(arr, d, q.s2, q.b, c, q.s1, !left);
    Ok(!contains_face(&near, left)? && !contains_face(&far, !left)?)
}

/// Closed walk `from -> c` along `s1`, `c -> end` along `s2` (the end on the
/// face of `from`), then the frame arc back to `from` keeping the terminal
/// face on the `face_left` side.
fn wing_walk(arr: &Arrangement, d: &Drawing, s1: usize, from: usize, c: usize, s2: usize, face_left: bool) -> Vec<usize> {
    let face_of = arr.face_of_terminal();
    let st = &arr.strands[s2];
    let to = if face_of[st.a] == face_of[from] { st.a } else { st.b };
    let mut walk = d.strand_darts(arr, s1, from, Some(c));
    walk.extend(d.strand_darts_from_crossing(arr, s2, c, to));
    let r = face_of[from];
    let ts = &arr.faces[r];
    let pf = ts.iter().position(|&x| x == from).unwrap();
    let pt = ts.iter().position(|&x| x == to).unwrap();
    // Forward frame darts keep the terminal face on their right.
    if face_left {
        walk.extend(d.frame_arc(r, pf, pt).iter().rev().map(|&x| twin(x)));
    } else {
        walk.extend(d.frame_arc(r, pt, pf));
    }
    walk
}

/// Handedness shared by every canonical path with a crossing bend.
pub fn handedness(arr: &Arrangement, canonical: &[CanonicalPath]) -> Result<bool> {
    let idx = arr.strand_index();
    let mut seen = BTreeSet::new();
    for cp in canonical {
        if let Bend::Crossing(c) = cp.bend {
            seen.insert(exits_left(arr, c, idx[&cp.p1], cp.t, idx[&cp.p2], cp.t2));
        }
    }
    ensure!(seen.len() <= 1, "canonical paths bend both ways");
    Ok(seen.into_iter().next().unwrap_or(true))
}

/// All safe 1-bend paths of the current arrangement.
pub fn safe_one_bends(arr: &Arrangement, cps: &CriticalPathSet, left: bool) -> Result<BTreeSet<OneBend>> {
    let ctx = Ctx::new(arr, cps);
    let idx = arr.strand_index();
    let d = arr.to_graph(true, None)?;
    let mut by_face: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for &(t, x) in &ctx.primaries {
        by_face.entry((ctx.face_of[t], ctx.face_of[x])).or_default().push((t, idx[&key(t, x)]));
    }
    let mut out = BTreeSet::new();
    for (&(fa, fb), list) in &by_face {
        if fa >= fb {
            continue;
        }
        let Some(back) = by_face.get(&(fb, fa)) else { continue };
        for &(a, s1) in list {
            for &(b, s2) in back {
                let Some(c) = ctx.crossing(s1, s2) else { continue };
                if exits_left(arr, c, s1, a, s2, b) != left {
                    continue;
                }
                let q = OneBend { a, s1, b, s2 };
                if is_safe(arr, &d, &ctx, &q, left)? {
                    out.insert(q);
                }
            }
        }
    }
    Ok(out)
}

/// The canonical path as a 1-bend path, if it bends at a crossing.
pub fn as_one_bend(arr: &Arrangement, cp: &CanonicalPath) -> Option<OneBend> {
    let idx = arr.strand_index();
    matches!(cp.bend, Bend::Crossing(_)).then(|| OneBend { a: cp.t, s1: idx[&cp.p1], b: cp.t2, s2: idx[&cp.p2] })
}

pub fn count_bad_pairs(arr: &Arrangement, cps: &CriticalPathSet, safe: &BTreeSet<OneBend>) -> usize {
    let ctx = Ctx::new(arr, cps);
    safe.iter()
        .map(|q| (0..arr.strands.len()).filter(|&p| bad_crossings(arr, &ctx, p, q).is_some()).count())
        .sum()
}

/// First canonical bad pair in (canonical pair, strand id) order.
pub fn find_canonical_bad_pair(arr: &Arrangement, cps: &CriticalPathSet, canonical: &[CanonicalPath]) -> Option<BadPair> {
    let ctx = Ctx::new(arr, cps);
    for cp in canonical {
        let Some(q) = as_one_bend(arr, cp) else { continue };
        for p in 0..arr.strands.len() {
            if bad_crossings(arr, &ctx, p, &q).is_some() {
                return Some(BadPair { p, q });
            }
        }
    }
    None
}

/// Triangle corners of a bad pair: `(a, h, i, s_h, s_i, d)` where `a` is the
/// end of `p` on the face of `q.a`, `h` the crossing nearer `a`.
fn triangle(arr: &Arrangement, ctx: &Ctx, bp: &BadPair) -> Result<(usize, usize, usize, usize, usize, usize)> {
    let (x1, x2) = bad_crossings(arr, ctx, bp.p, &bp.q).ok_or_else(|| Error::Internal("not a bad pair".into()))?;
    let sp = &arr.strands[bp.p];
    let a = if ctx.face_of[sp.a] == ctx.face_of[bp.q.a] { sp.a } else { sp.b };
    let d = bend_of(ctx, &bp.q);
    let (h, i, sh, si) =
        if before(arr, bp.p, a, x1, x2) { (x1, x2, bp.q.s1, bp.q.s2) } else { (x2, x1, bp.q.s2, bp.q.s1) };
    Ok((a, h, i, sh, si, d))
}

/// Shrinks a bad pair until no interloper remains inside its triangle.
pub fn minimalize(arr: &Arrangement, cps: &CriticalPathSet, safe: &BTreeSet<OneBend>, bp: BadPair) -> Result<(BadPair, usize)> {
    let ctx = Ctx::new(arr, cps);
    let n = arr.strands.len();
    let cap = n * n;
    let mut cur = bp;
    for step in 0..=cap {
        let (a, h, i, sh, si, d) = triangle(arr, &ctx, &cur)?;
        let faces = (ctx.face_of[cur.q.a], ctx.face_of[cur.q.b]);
        let spans = |r: usize| {
            let sr = &arr.strands[r];
            let fr = (ctx.face_of[sr.a], ctx.face_of[sr.b]);
            fr == faces || (fr.1, fr.0) == faces
        };
        // Case 1: a critical strand between the same faces cuts both sides.
        let case1 = (0..n).find(|&r| {
            r != cur.p
                && spans(r)
                && matches!((ctx.crossing(r, sh), ctx.crossing(r, si)), (Some(x), Some(y))
                    if between(arr, sh, x, h, d) && between(arr, si, y, d, i))
        });
        if let Some(r) = case1 {
            debug!("minimalize: strand {r} replaces {}", cur.p);
            cur = BadPair { p: r, q: cur.q };
            ensure!(bad_crossings(arr, &ctx, cur.p, &cur.q).is_some(), "case 1 left a non-bad pair");
            continue;
        }
        // Case 2: a primary from the far face crosses the base and forms a
        // safe 1-bend path with the base.
        let b = other_end(arr, cur.p, a);
        if sh == cur.q.s1 && ctx.primaries.contains(&(a, b)) {
            let case2 = safe.iter().find(|o| {
                o.a == a && o.s1 == cur.p && matches!(ctx.crossing(o.s2, cur.p), Some(x) if between(arr, cur.p, x, h, i))
            });
            if let Some(o) = case2 {
                let q = OneBend { a: cur.q.a, s1: cur.q.s1, b: o.b, s2: o.s2 };
                debug!("minimalize: 1-bend {q:?} replaces {:?}", cur.q);
                ensure!(ctx.crossing(q.s1, q.s2).is_some(), "case 2 strands do not cross");
                ensure!(safe.contains(&q), "case 2 produced an unsafe 1-bend path {q:?}");
                cur = BadPair { p: cur.p, q };
                ensure!(bad_crossings(arr, &ctx, cur.p, &cur.q).is_some(), "case 2 left a non-bad pair");
                continue;
            }
        }
        return Ok((cur, step));
    }
    Err(Error::ConvergenceCapExceeded(format!("minimalize exceeded {cap} steps")))
}

/// Moves crossing `x` on strand `s` to sit right next to `anchor`, on the
/// side away from `away` (another crossing of `s`).
fn move_next_to(arr: &mut Arrangement, s: usize, x: usize, anchor: usize, away: usize) {
    let list = &mut arr.strands[s].crossings;
    let away_before = list.iter().position(|&c| c == away) < list.iter().position(|&c| c == anchor);
    list.retain(|&c| c != x);
    let p = list.iter().position(|&c| c == anchor).expect("anchor on strand");
    list.insert(if away_before { p + 1 } else { p }, x);
}

/// Reroutes the critical strand of a minimal bad pair over the top corner of
/// its triangle.
pub fn reroute(arr: &mut Arrangement, cps: &CriticalPathSet, bp: &BadPair) -> Result<()> {
    let ctx = Ctx::new(arr, cps);
    let (a, h, i, sh, si, d) = triangle(arr, &ctx, bp)?;
    let p = bp.p;
    let other = |c: usize| {
        let cr = &arr.crossings[c];
        if cr.s[0] == p {
            cr.s[1]
        } else {
            cr.s[0]
        }
    };
    // Crossings of `p` strictly inside the base, and the strands behind them.
    let mut path: Vec<usize> = arr.strands[p].crossings.clone();
    let forward = arr.strands[p].a == a;
    if !forward {
        path.reverse();
    }
    let (ph, pi) = (path.iter().position(|&c| c == h).unwrap(), path.iter().position(|&c| c == i).unwrap());
    ensure!(ph < pi, "base crossings out of order");
    let inner: BTreeSet<usize> = path[ph + 1..pi].iter().copied().collect();
    let side_hits = |s: usize, c1: usize, c2: usize| -> Vec<usize> {
        // Third-party crossings on `s` strictly between c1 and c2, ordered from c1.
        let list = &arr.strands[s].crossings;
        let (p1, p2) = (pos_on(arr, s, c1), pos_on(arr, s, c2));
        let mut v: Vec<usize> = if p1 < p2 { list[p1 + 1..p2].to_vec() } else { list[p2 + 1..p1].iter().rev().copied().collect() };
        v.retain(|&c| arr.crossings[c].s[0] != p && arr.crossings[c].s[1] != p);
        v
    };
    let y = side_hits(sh, h, d);
    let z = side_hits(si, d, i);
    let strand_of_hit = |s: usize, c: usize| {
        let cr = &arr.crossings[c];
        if cr.s[0] == s {
            cr.s[1]
        } else {
            cr.s[0]
        }
    };
    let ys: Vec<usize> = y.iter().map(|&c| strand_of_hit(sh, c)).collect();
    let zs: Vec<usize> = z.iter().map(|&c| strand_of_hit(si, c)).collect();
    for r in &ys {
        ensure!(!zs.contains(r), "strand {r} crosses both sides of the triangle");
    }
    let inner_strands: BTreeSet<usize> = inner.iter().map(|&c| other(c)).collect();
    let side_strands: BTreeSet<usize> = ys.iter().chain(&zs).copied().collect();
    ensure!(inner_strands == side_strands, "base and side crossings of the triangle disagree");
    let via = |r: usize| ctx.crossing(p, r).expect("side strand crosses the base");
    let mut new_path: Vec<usize> = path[..ph].to_vec();
    new_path.extend(ys.iter().map(|&r| via(r)));
    new_path.push(i);
    new_path.push(h);
    new_path.extend(zs.iter().map(|&r| via(r)));
    new_path.extend_from_slice(&path[pi + 1..]);
    if !forward {
        new_path.reverse();
    }
    // Third-party strands meet the detour just outside their side crossing.
    for (&r, &c) in ys.iter().zip(&y) {
        let x = via(r);
        move_next_to(arr, r, x, c, x);
    }
    for (&r, &c) in zs.iter().zip(&z) {
        let x = via(r);
        move_next_to(arr, r, x, c, x);
    }
    // The base crossings move past the corner.
    move_next_to(arr, sh, h, d, h);
    move_next_to(arr, si, i, d, i);
    arr.strands[p].crossings = new_path;
    Ok(())
}

/// Audit: every canonical path crosses each critical strand with the same
/// parity as the corresponding shortest path does in the simplified drawing.
pub fn audit_region_parity(arr: &Arrangement, canonical: &[CanonicalPath], full: &Arrangement) -> Result<()> {
    let d = arr.to_graph(false, None)?;
    let fidx = full.strand_index();
    let fpairs = full.crossing_pairs();
    for cp in canonical {
        let walk = cp.darts(arr, &d);
        let sp = fidx[&key(cp.t, cp.t2)];
        for (s, st) in arr.strands.iter().enumerate() {
            if [cp.t, cp.t2].contains(&st.a) || [cp.t, cp.t2].contains(&st.b) {
                continue;
            }
            let darts = d.strand_darts(arr, s, st.a, None);
            let here = path_crossings(&d.graph, &walk, &darts)? % 2;
            let fs = fidx[&key(st.a, st.b)];
            let there = usize::from(fpairs.contains(&key(sp, fs)));
            ensure!(here == there, "canonical path {:?} and strand {s} disagree in parity", (cp.t, cp.t2));
        }
    }
    Ok(())
}

/// Pairs of canonical paths on four distinct terminals whose crossing count
/// in `arr` differs from the crossing of the shortest paths in `full`.
pub fn property4_violations(arr: &Arrangement, canonical: &[CanonicalPath], full: &Arrangement) -> Result<Vec<((usize, usize), (usize, usize))>> {
    let d = arr.to_graph(false, None)?;
    let fidx = full.strand_index();
    let fpairs = full.crossing_pairs();
    let walks: Vec<Vec<usize>> = canonical.iter().map(|cp| cp.darts(arr, &d)).collect();
    let mut bad = Vec::new();
    for x in 0..canonical.len() {
        for y in x + 1..canonical.len() {
            let (p, q) = (&canonical[x], &canonical[y]);
            let ends: BTreeSet<usize> = [p.t, p.t2, q.t, q.t2].into_iter().collect();
            if ends.len() < 4 {
                continue;
            }
            let here = path_crossings(&d.graph, &walks[x], &walks[y])?;
            let there = usize::from(fpairs.contains(&key(fidx[&key(p.t, p.t2)], fidx[&key(q.t, q.t2)])));
            if here != there {
                bad.push(((p.t, p.t2), (q.t, q.t2)));
            }
        }
    }
    Ok(bad)
}

#[derive(Clone, Copy, Debug)]
pub struct ElimConfig {
    /// Recompute the safe set and recheck invariants every this many rounds
    /// (0 disables).
    pub audit_every: usize,
}

impl Default for ElimConfig {
    fn default() -> Self {
        ElimConfig { audit_every: 1 }
    }
}

/// Builds the skeleton and removes all canonical bad pairs.
pub fn eliminate_all(full: &Arrangement, cps: &CriticalPathSet, cfg: ElimConfig) -> Result<Skeleton> {
    let mut arr = build_initial(full, cps)?;
    let canonical = cps.canonical_paths(&arr)?;
    let left = handedness(&arr, &canonical)?;
    let safe = safe_one_bends(&arr, cps, left)?;
    for cp in &canonical {
        if let Some(q) = as_one_bend(&arr, cp) {
            ensure!(safe.contains(&q), "canonical path {:?} is not a safe 1-bend path", (cp.t, cp.t2));
        }
    }
    let pairs = arr.crossing_pairs();
    let mut stats = ElimStats::default();
    let mut count = count_bad_pairs(&arr, cps, &safe);
    stats.bad_history.push(count);
    let cap = count + 1;
    while let Some(bp) = find_canonical_bad_pair(&arr, cps, &canonical) {
        stats.iterations += 1;
        if stats.iterations > cap {
            return Err(Error::NonTermination(format!("bad-pair elimination exceeded {cap} rounds")));
        }
        let (mp, steps) = minimalize(&arr, cps, &safe, bp)?;
        stats.minimalize_steps += steps;
        debug!("reroute strand {} around {:?}", mp.p, mp.q);
        reroute(&mut arr, cps, &mp)?;
        arr.check()?;
        ensure!(arr.crossing_pairs() == pairs, "reroute changed the crossing set");
        arr.to_graph(true, None)?;
        let next = count_bad_pairs(&arr, cps, &safe);
        ensure!(next < count, "bad-pair count went from {count} to {next}");
        count = next;
        stats.bad_history.push(count);
        if cfg.audit_every > 0 && stats.iterations % cfg.audit_every == 0 {
            stats.audits += 1;
            ensure!(safe_one_bends(&arr, cps, left)? == safe, "safe 1-bend set changed under a reroute");
        }
    }
    Ok(Skeleton { arr, critical: cps.clone(), left, safe, canonical, stats })
}
