//! Exact dual simplex for `min 1.x` subject to rows `a.x <= b`, `x >= 0`.
//!
//! With unit costs the all-slack basis is dual feasible, so rows can be
//! appended at any time and solving resumes from the current basis. The
//! leaving row is the most negative one; after a run of degenerate pivots
//! the choice falls back to the smallest basic index, which cannot cycle.

use crate::rational::{q, Q};
use num_traits::{Signed, Zero};

/// Degenerate pivots tolerated before switching to the smallest-index rule.
const STALL_LIMIT: usize = 50;

#[derive(Clone, Debug)]
pub struct DualSimplex {
    n: usize,
    /// Tableau rows over `n` structural and one slack column per row.
    rows: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    basis: Vec<usize>,
    /// Reduced costs.
    obj: Vec<Q>,
    pub pivots: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Optimal,
    /// Nonnegative row multipliers `y` with `y.A >= 0` and `y.b < 0`.
    Infeasible(Vec<Q>),
}

impl DualSimplex {
    pub fn new(n: usize) -> Self {
        DualSimplex { n, rows: Vec::new(), rhs: Vec::new(), basis: Vec::new(), obj: vec![q(1); n], pivots: 0 }
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    /// Appends `sum coeffs <= rhs`.
    pub fn add_row(&mut self, coeffs: &[(usize, Q)], rhs: Q) {
        let m = self.rows.len();
        for r in &mut self.rows {
            r.push(Q::zero());
        }
        self.obj.push(Q::zero());
        let mut row = vec![Q::zero(); self.n + m + 1];
        for (j, c) in coeffs {
            row[*j] += c;
        }
        row[self.n + m] = q(1);
        let mut b = rhs;
        // Express the row in the current basis.
        for i in 0..m {
            let col = self.basis[i];
            if row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&self.rows[i]) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            b -= &f * &self.rhs[i];
        }
        self.rows.push(row);
        self.rhs.push(b);
        self.basis.push(self.n + m);
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.rows[r][j].clone();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x /= &p;
            }
        }
        self.rhs[r] /= &p;
        let nz: Vec<usize> = (0..self.rows[r].len()).filter(|&c| !self.rows[r][c].is_zero()).collect();
        let (pr, pb) = (self.rows[r].clone(), self.rhs[r].clone());
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][j].is_zero() {
                continue;
            }
            let f = self.rows[i][j].clone();
            for &c in &nz {
                let d = &f * &pr[c];
                self.rows[i][c] -= d;
            }
            self.rhs[i] -= &f * &pb;
        }
        if !self.obj[j].is_zero() {
            let f = self.obj[j].clone();
            for &c in &nz {
                let d = &f * &pr[c];
                self.obj[c] -= d;
            }
        }
        self.basis[r] = j;
        self.pivots += 1;
    }

    /// Runs dual simplex pivots until optimal or infeasible.
    pub fn solve(&mut self, max_pivots: usize) -> Option<Outcome> {
        let mut stalled = 0;
        let mut last = self.dual_objective();
        loop {
            // Leaving: the most negative basic value, or the smallest basic
            // index once pivots stop improving the dual objective.
            let neg = (0..self.rows.len()).filter(|&i| self.rhs[i].is_negative());
            let r = if stalled < STALL_LIMIT {
                neg.min_by(|&a, &b| self.rhs[a].cmp(&self.rhs[b]).then(self.basis[a].cmp(&self.basis[b])))
            } else {
                neg.min_by_key(|&i| self.basis[i])
            };
            let Some(r) = r else { return Some(Outcome::Optimal) };
            let mut best: Option<(usize, Q)> = None;
            for j in 0..self.rows[r].len() {
                let a = &self.rows[r][j];
                if !a.is_negative() {
                    continue;
                }
                let ratio = &self.obj[j] / -a;
                if best.as_ref().map_or(true, |(_, b)| ratio < *b) {
                    best = Some((j, ratio));
                }
            }
            match best {
                None => return Some(Outcome::Infeasible(self.rows[r][self.n..].to_vec())),
                Some((j, _)) => {
                    if self.pivots >= max_pivots {
                        return None;
                    }
                    self.pivot(r, j);
                    let now = self.dual_objective();
                    stalled = if now > last { 0 } else { stalled + 1 };
                    last = now;
                }
            }
        }
    }

    /// Objective value of the current basic solution; dual simplex pivots
    /// never decrease it.
    fn dual_objective(&self) -> Q {
        self.primal().iter().sum()
    }

    /// Values of the structural variables at the current basis.
    pub fn primal(&self) -> Vec<Q> {
        let mut x = vec![Q::zero(); self.n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                x[b] = self.rhs[i].clone();
            }
        }
        x
    }

    pub fn objective(&self) -> Q {
        self.primal().iter().sum()
    }
}
