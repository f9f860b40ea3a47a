//! Critical paths, their pairing, primary tags and canonical paths.
//!
//! Paths are named by their terminal pair, so the same description applies to
//! the simplified arrangement and to the skeleton built from it.

use crate::arrangement::{Arrangement, Drawing};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};

pub type PairKey = (usize, usize);

pub fn key(a: usize, b: usize) -> PairKey {
    (a.min(b), a.max(b))
}

/// One equivalence segment `start..=end` (cyclic positions on the face).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    /// Terminal reached by the primary path.
    pub primary_to: usize,
    /// Terminal reached by the secondary path (equal for self-paired segments).
    pub secondary_to: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FaceSegments {
    pub face: usize,
    /// `equivalent[j]`: the paths to positions `j` and `j + 1` are equivalent.
    pub equivalent: Vec<bool>,
    pub segments: Vec<Segment>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriticalPathSet {
    pub faces: Vec<Vec<usize>>,
    /// Per terminal, one entry per foreign face.
    pub per_terminal: Vec<Vec<FaceSegments>>,
}

impl Segment {
    pub fn contains(&self, p: usize, m: usize) -> bool {
        let len = (self.end + m - self.start) % m;
        (p + m - self.start) % m <= len
    }
}

/// Whether the paths from `t` to positions `j`, `j + 1` of face `r` are
/// equivalent: the region they bound with the face arc holds no terminal face.
pub fn equivalent(arr: &Arrangement, d: &Drawing, idx: &HashMap<PairKey, usize>, t: usize, r: usize, j: usize) -> Result<bool> {
    let ts = &arr.faces[r];
    let m = ts.len();
    let (x, y) = (ts[j], ts[(j + 1) % m]);
    let mut walk = d.strand_darts(arr, idx[&key(t, x)], t, None);
    walk.extend(d.frame_arc(r, j, (j + 1) % m));
    walk.extend(d.strand_darts(arr, idx[&key(t, y)], y, None));
    Ok(d.enclosed_terminal_faces(&walk)?.is_empty())
}

pub fn critical_paths(arr: &Arrangement, d: &Drawing) -> Result<CriticalPathSet> {
    let idx = arr.strand_index();
    let face_of = arr.face_of_terminal();
    let mut per_terminal = Vec::new();
    for t in 0..arr.k() {
        let mut list = Vec::new();
        for (r, ts) in arr.faces.iter().enumerate() {
            if r == face_of[t] {
                continue;
            }
            let m = ts.len();
            let equivalent_v: Vec<bool> = if m == 1 {
                vec![false]
            } else {
                (0..m).map(|j| equivalent(arr, d, &idx, t, r, j)).collect::<Result<_>>()?
            };
            let Some(brk) = equivalent_v.iter().position(|&e| !e) else {
                return Err(Error::Internal(format!("terminal {t}: every position on face {r} is equivalent")));
            };
            let mut segments = Vec::new();
            let mut p = (brk + 1) % m;
            loop {
                let start = p;
                while equivalent_v[p] {
                    p = (p + 1) % m;
                }
                let (a, b) = (ts[start], ts[p]);
                let (primary_to, secondary_to) = classify_primary(face_of[t], r, a, b);
                segments.push(Segment { start, end: p, primary_to, secondary_to });
                p = (p + 1) % m;
                if p == (brk + 1) % m {
                    break;
                }
            }
            list.push(FaceSegments { face: r, equivalent: equivalent_v, segments });
        }
        per_terminal.push(list);
    }
    Ok(CriticalPathSet { faces: arr.faces.clone(), per_terminal })
}

/// The primary tag rule for a pair governing the clockwise segment `a..b`.
pub fn classify_primary(source_face: usize, target_face: usize, a: usize, b: usize) -> (usize, usize) {
    if source_face < target_face { (a, b) } else { (b, a) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Bend {
    /// The two primaries cross at this crossing (of the arrangement in use).
    Crossing(usize),
    /// The first primary already ends at the far terminal.
    First,
    /// The second primary already ends at the near terminal.
    Second,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalPath {
    /// Terminal on the lower-index face.
    pub t: usize,
    pub t2: usize,
    /// Primary of `t` toward the face of `t2`.
    pub p1: PairKey,
    /// Primary of `t2` toward the face of `t`.
    pub p2: PairKey,
    pub bend: Bend,
}

impl CriticalPathSet {
    pub fn k(&self) -> usize {
        self.per_terminal.len()
    }

    pub fn face_of_terminal(&self) -> Vec<usize> {
        let mut out = vec![0; self.k()];
        for (r, ts) in self.faces.iter().enumerate() {
            for &t in ts {
                out[t] = r;
            }
        }
        out
    }

    pub fn segments_toward(&self, t: usize, r: usize) -> &FaceSegments {
        self.per_terminal[t].iter().find(|fs| fs.face == r).expect("foreign face")
    }

    /// Segment of `t` toward the face of `target` containing `target`.
    pub fn governing(&self, t: usize, target: usize) -> &Segment {
        let face_of = self.face_of_terminal();
        let r = face_of[target];
        let fs = self.segments_toward(t, r);
        let m = self.faces[r].len();
        let p = self.faces[r].iter().position(|&x| x == target).unwrap();
        fs.segments.iter().find(|s| s.contains(p, m)).expect("segments cover the face")
    }

    /// Distinct critical paths from `t`.
    pub fn critical_from(&self, t: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for fs in &self.per_terminal[t] {
            for s in &fs.segments {
                out.insert(s.primary_to);
                out.insert(s.secondary_to);
            }
        }
        out
    }

    /// All critical paths as terminal pairs.
    pub fn critical_pairs(&self) -> BTreeSet<PairKey> {
        let mut out = BTreeSet::new();
        for t in 0..self.k() {
            for x in self.critical_from(t) {
                out.insert(key(t, x));
            }
        }
        out
    }

    /// Primary paths as (source terminal, target terminal).
    pub fn primaries(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for t in 0..self.k() {
            for fs in &self.per_terminal[t] {
                for s in &fs.segments {
                    out.insert((t, s.primary_to));
                }
            }
        }
        out
    }

    /// Pairs of terminals on distinct faces, lower face first.
    pub fn inter_face_pairs(&self) -> Vec<(usize, usize)> {
        let face_of = self.face_of_terminal();
        let mut out = Vec::new();
        for t in 0..self.k() {
            for u in 0..self.k() {
                if face_of[t] < face_of[u] {
                    out.push((t, u));
                }
            }
        }
        out.sort();
        out
    }

    pub fn canonical_path(&self, arr: &Arrangement, t: usize, t2: usize) -> Result<CanonicalPath> {
        let face_of = self.face_of_terminal();
        let (t, t2) = if face_of[t] < face_of[t2] { (t, t2) } else { (t2, t) };
        if face_of[t] == face_of[t2] {
            return Err(Error::Internal("canonical paths join distinct faces".into()));
        }
        let a = self.governing(t, t2).primary_to;
        let b = self.governing(t2, t).primary_to;
        let (p1, p2) = (key(t, a), key(t2, b));
        let bend = if a == t2 {
            Bend::First
        } else if b == t {
            Bend::Second
        } else {
            let idx = arr.strand_index();
            let (s1, s2) = match (idx.get(&p1), idx.get(&p2)) {
                (Some(&x), Some(&y)) => (x, y),
                _ => return Err(Error::Internal("primary path missing from arrangement".into())),
            };
            let c = arr.strands[s1].crossings.iter().copied().find(|&c| arr.crossings[c].s.contains(&s2));
            Bend::Crossing(c.ok_or(Error::NoBend(t, t2))?)
        };
        Ok(CanonicalPath { t, t2, p1, p2, bend })
    }

    pub fn canonical_paths(&self, arr: &Arrangement) -> Result<Vec<CanonicalPath>> {
        self.inter_face_pairs().into_iter().map(|(t, u)| self.canonical_path(arr, t, u)).collect()
    }
}

impl CanonicalPath {
    /// Darts from `t` to `t2` in a drawing of `arr`.
    pub fn darts(&self, arr: &Arrangement, d: &Drawing) -> Vec<usize> {
        let idx = arr.strand_index();
        match self.bend {
            Bend::First => d.strand_darts(arr, idx[&self.p1], self.t, None),
            Bend::Second => {
                let mut v = d.strand_darts(arr, idx[&self.p2], self.t2, None);
                v.reverse();
                v.iter().map(|&x| x ^ 1).collect()
            }
            Bend::Crossing(c) => {
                let mut v = d.strand_darts(arr, idx[&self.p1], self.t, Some(c));
                let s2 = idx[&self.p2];
                let tail = d.strand_darts(arr, s2, self.t2, Some(c));
                v.extend(tail.iter().rev().map(|&x| x ^ 1));
                v
            }
        }
    }
}
