//! Star/triangle flow equivalence, checked by exact max-flow on both sides.

use crate::error::{Error, Result};
use crate::rational::{fmt_q, q2, to_f64, Q};
#[cfg(test)]
use crate::rational::q;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::VecDeque;

/// Undirected capacitated graph for max-flow.
#[derive(Clone, Debug, Default)]
pub struct FlowNet {
    n: usize,
    /// `(u, v, capacity)`; each undirected edge is two arcs.
    edges: Vec<(usize, usize, Q)>,
}

impl FlowNet {
    pub fn new(n: usize) -> Self {
        FlowNet { n, edges: Vec::new() }
    }

    pub fn add(&mut self, u: usize, v: usize, c: Q) {
        self.edges.push((u, v, c));
    }

    /// Edmonds-Karp from `s` to `t`; `directed` arcs carry flow one way.
    fn max_flow(&self, arcs: &[(usize, usize, Q, bool)], s: usize, t: usize) -> Q {
        let n = self.n + 2;
        let mut to = Vec::new();
        let mut cap: Vec<Q> = Vec::new();
        let mut adj = vec![Vec::new(); n];
        for (u, v, c, directed) in arcs {
            adj[*u].push(to.len());
            to.push(*v);
            cap.push(c.clone());
            adj[*v].push(to.len());
            to.push(*u);
            cap.push(if *directed { Q::zero() } else { c.clone() });
        }
        let mut total = Q::zero();
        loop {
            let mut prev = vec![usize::MAX; n];
            let mut seen = vec![false; n];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &a in &adj[x] {
                    if cap[a].is_positive() && !seen[to[a]] {
                        seen[to[a]] = true;
                        prev[to[a]] = a;
                        queue.push_back(to[a]);
                    }
                }
            }
            if !seen[t] {
                return total;
            }
            let mut push = None::<Q>;
            let mut x = t;
            while x != s {
                let a = prev[x];
                push = Some(push.map_or(cap[a].clone(), |p| p.min(cap[a].clone())));
                x = to[a ^ 1];
            }
            let push = push.expect("augmenting path has an arc");
            let mut x = t;
            while x != s {
                let a = prev[x];
                cap[a] -= &push;
                cap[a ^ 1] += &push;
                x = to[a ^ 1];
            }
            total += push;
        }
    }

    /// Whether net demand `b` (positive = supply) on the first `b.len()`
    /// vertices can be routed within capacity.
    pub fn routable(&self, b: &[Q]) -> bool {
        let (s, t) = (self.n, self.n + 1);
        let mut arcs: Vec<(usize, usize, Q, bool)> = self.edges.iter().map(|(u, v, c)| (*u, *v, c.clone(), false)).collect();
        let mut need = Q::zero();
        for (v, x) in b.iter().enumerate() {
            if x.is_positive() {
                arcs.push((s, v, x.clone(), true));
                need += x;
            } else if x.is_negative() {
                arcs.push((v, t, -x.clone(), true));
            }
        }
        self.max_flow(&arcs, s, t) == need
    }
}

/// Triangle capacities `(uv, uw, vw)` replacing a star with spoke
/// capacities `(c_u, c_v, c_w)`.
pub fn wye_to_delta(c: [&Q; 3]) -> Result<[Q; 3]> {
    let [cu, cv, cw] = c;
    let half = q2(1, 2);
    let out = [(cu + cv - cw) * &half, (cu + cw - cv) * &half, (cv + cw - cu) * &half];
    if let Some(x) = out.iter().find(|x| x.is_negative()) {
        return Err(Error::NegativeTriangleCapacity(fmt_q(x)));
    }
    Ok(out)
}

/// Spoke capacities of the star equivalent to a triangle `(uv, uw, vw)`.
pub fn delta_to_wye(t: [&Q; 3]) -> [Q; 3] {
    let [uv, uw, vw] = t;
    [uv + uw, uv + vw, uw + vw]
}

pub fn star(c: &[Q; 3]) -> FlowNet {
    let mut g = FlowNet::new(4);
    for (i, x) in c.iter().enumerate() {
        g.add(3, i, x.clone());
    }
    g
}

pub fn triangle(t: &[Q; 3]) -> FlowNet {
    let mut g = FlowNet::new(3);
    g.add(0, 1, t[0].clone());
    g.add(0, 2, t[1].clone());
    g.add(1, 2, t[2].clone());
    g
}

/// Demand on `u, v, w` with entries on the quarter lattice summing to zero.
pub fn lattice_demand(rng: &mut impl Rng, reach: i64) -> [Q; 3] {
    let a = rng.gen_range(-4 * reach..=4 * reach);
    let b = rng.gen_range(-4 * reach..=4 * reach);
    [q2(a, 4), q2(b, 4), q2(-a - b, 4)]
}

/// Checks star and triangle agree on routability for `samples` demands.
/// Returns the number of routable demands.
pub fn wye_delta_equiv_test(c: &[Q; 3], seed: u64, samples: usize) -> Result<(bool, usize)> {
    let t = wye_to_delta([&c[0], &c[1], &c[2]])?;
    let (y, d) = (star(c), triangle(&t));
    let reach = c.iter().map(|x| to_f64(x).ceil() as i64).max().unwrap_or(1).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut routable = 0;
    for _ in 0..samples {
        let b = lattice_demand(&mut rng, reach);
        let (ry, rd) = (y.routable(&b), d.routable(&b));
        if ry != rd {
            return Ok((false, routable));
        }
        routable += usize::from(ry);
    }
    Ok((true, routable))
}

/// Random spoke capacities on the half lattice in `(0, 8]`, drawn until the
/// triangle capacities are nonnegative.
pub fn random_capacities(rng: &mut impl Rng) -> [Q; 3] {
    loop {
        let c = [0; 3].map(|_| q2(rng.gen_range(1..=16), 2));
        if wye_to_delta([&c[0], &c[1], &c[2]]).is_ok() {
            return c;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_star() {
        let t = wye_to_delta([&q(1), &q(1), &q(1)]).unwrap();
        assert_eq!(t, [q2(1, 2), q2(1, 2), q2(1, 2)]);
        // Cutting u off costs c(x,u) in the star and uv + uw in the triangle.
        assert_eq!(&t[0] + &t[1], q(1));
    }

    #[test]
    fn lopsided_star() {
        let t = wye_to_delta([&q(2), &q(1), &q(1)]).unwrap();
        assert_eq!(&t[0] + &t[1], q(2));
        assert_eq!(t[2], q(0));
    }

    #[test]
    fn negative_capacity_rejected() {
        assert!(matches!(wye_to_delta([&q(5), &q(1), &q(1)]), Err(Error::NegativeTriangleCapacity(_))));
    }

    #[test]
    fn round_trip() {
        let c = [q(3), q(4), q(5)];
        let t = wye_to_delta([&c[0], &c[1], &c[2]]).unwrap();
        assert_eq!(delta_to_wye([&t[0], &t[1], &t[2]]), c);
    }

    #[test]
    fn routability_limits() {
        let s = star(&[q(1), q(2), q(3)]);
        assert!(s.routable(&[q(1), q(0), q(-1)]));
        assert!(!s.routable(&[q2(3, 2), q(0), q2(-3, 2)]));
    }
}
