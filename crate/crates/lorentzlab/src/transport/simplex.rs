//! Primal network simplex for the uncapacitated transportation problem.
//!
//! The spanning-tree basis uses an artificial root connected to every node.
//! Supply nodes hang below the root through zero-cost arcs and demand nodes
//! through arcs of a big-M cost, so the initial tree is feasible and any
//! remaining artificial flow at the optimum proves infeasibility. Pivots
//! follow a strongly feasible tree rule (leaving arc: last blocking arc on the
//! cycle, counted from the join along the entering direction), which together
//! with deterministic pricing rules out cycling.

use crate::error::{Error, Result};

/// Entering-arc selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Pricing {
    /// Lowest-index arc with negative reduced cost.
    #[default]
    Bland,
    /// Most negative reduced cost within a rotating block of arcs.
    BlockSearch,
}

/// Transportation problem: move `supply[i]` out of each source and
/// `demand[j]` into each sink along the listed arcs at minimum total cost.
#[derive(Clone, Debug, Default)]
pub struct TransportProblem {
    pub supply: Vec<f64>,
    pub demand: Vec<f64>,
    /// `(source, sink, cost)`.
    pub arcs: Vec<(usize, usize, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
}

#[derive(Clone, Debug)]
pub struct TransportSolution {
    pub status: SolveStatus,
    /// Flow on each arc of the problem, in input order.
    pub flow: Vec<f64>,
    pub cost: f64,
    /// Node potentials; reduced cost of arc `(i, j)` is `c + pi_src[i] − pi_sink[j]`.
    pub pi_source: Vec<f64>,
    pub pi_sink: Vec<f64>,
    /// Largest dual infeasibility `max(0, −reduced cost)` over all arcs.
    pub dual_residual: f64,
    /// `Σ flow · |reduced cost|`.
    pub slackness_residual: f64,
    pub pivots: usize,
}

const UP: i8 = -1; // tree arc points from the node to its parent
const DOWN: i8 = 1; // tree arc points from the parent to the node

struct Network {
    src: Vec<usize>,
    dst: Vec<usize>,
    cost: Vec<f64>,
    flow: Vec<f64>,
    in_tree: Vec<bool>,
    parent: Vec<usize>,
    pred: Vec<usize>,
    dir: Vec<i8>,
    depth: Vec<usize>,
    children: Vec<Vec<usize>>,
    pi: Vec<f64>,
    root: usize,
    n_real: usize,
}

impl Network {
    fn reduced(&self, e: usize) -> f64 {
        self.cost[e] + self.pi[self.src[e]] - self.pi[self.dst[e]]
    }

    fn join(&self, mut a: usize, mut b: usize) -> usize {
        while a != b {
            if self.depth[a] >= self.depth[b] {
                a = self.parent[a];
            } else {
                b = self.parent[b];
            }
        }
        a
    }

    /// Performs one pivot with entering arc `e`; returns the pushed amount.
    fn pivot(&mut self, e: usize) -> f64 {
        let (first, second) = (self.src[e], self.dst[e]);
        let join = self.join(first, second);
        let mut delta = f64::INFINITY;
        let mut out: Option<(usize, u8)> = None;
        let mut u = first;
        while u != join {
            if self.dir[u] == UP {
                let d = self.flow[self.pred[u]];
                if d < delta {
                    delta = d;
                    out = Some((u, 1));
                }
            }
            u = self.parent[u];
        }
        let mut u = second;
        while u != join {
            if self.dir[u] == DOWN {
                let d = self.flow[self.pred[u]];
                if d <= delta {
                    delta = d;
                    out = Some((u, 2));
                }
            }
            u = self.parent[u];
        }
        let (u_out, side) = out.expect("a bounded problem always has a blocking arc");

        if delta > 0.0 {
            self.flow[e] += delta;
            let mut u = first;
            while u != join {
                let a = self.pred[u];
                self.flow[a] += f64::from(self.dir[u]) * delta;
                u = self.parent[u];
            }
            let mut u = second;
            while u != join {
                let a = self.pred[u];
                self.flow[a] -= f64::from(self.dir[u]) * delta;
                u = self.parent[u];
            }
            // clamp the leaving arc to an exact zero
        }
        self.flow[self.pred[u_out]] = 0.0;

        // the subtree below u_out is re-hung from the entering arc
        let (u_in, v_in) = if side == 1 { (first, second) } else { (second, first) };
        self.in_tree[self.pred[u_out]] = false;
        self.in_tree[e] = true;
        let p_out = self.parent[u_out];
        self.children[p_out].retain(|&c| c != u_out);

        // reverse the path u_in → u_out
        let mut path = vec![u_in];
        let mut w = u_in;
        while w != u_out {
            w = self.parent[w];
            path.push(w);
        }
        for k in (1..path.len()).rev() {
            let (child, par) = (path[k - 1], path[k]);
            self.children[par].retain(|&c| c != child);
            self.children[child].push(par);
            self.parent[par] = child;
            self.pred[par] = self.pred[child];
            self.dir[par] = -self.dir[child];
        }
        self.parent[u_in] = v_in;
        self.pred[u_in] = e;
        self.dir[u_in] = if self.src[e] == u_in { UP } else { DOWN };
        self.children[v_in].push(u_in);

        // refresh potentials and depths on the moved subtree
        let mut stack = vec![u_in];
        while let Some(w) = stack.pop() {
            let p = self.parent[w];
            let a = self.pred[w];
            self.pi[w] = if self.dir[w] == UP { self.pi[p] - self.cost[a] } else { self.pi[p] + self.cost[a] };
            self.depth[w] = self.depth[p] + 1;
            stack.extend(self.children[w].iter().copied());
        }
        delta
    }
}

impl TransportProblem {
    pub fn solve(&self, pricing: Pricing) -> Result<TransportSolution> {
        let (m, n) = (self.supply.len(), self.demand.len());
        if let Some(&(i, j, c)) = self.arcs.iter().find(|&&(i, j, c)| i >= m || j >= n || !c.is_finite()) {
            return Err(Error::Parameter(format!("arc ({i}, {j}) with cost {c} is out of range or not finite")));
        }
        if self.supply.iter().chain(&self.demand).any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::Parameter("supplies and demands must be finite and nonnegative".into()));
        }
        let total_s: f64 = self.supply.iter().sum();
        let total_d: f64 = self.demand.iter().sum();
        if (total_s - total_d).abs() > 1e-9 * total_s.max(1.0) {
            return Err(Error::Precondition(format!("unbalanced problem: supply {total_s} vs demand {total_d}")));
        }

        let nodes = m + n;
        let root = nodes;
        let n_real = self.arcs.len();
        let max_c = self.arcs.iter().fold(0.0f64, |a, &(_, _, c)| a.max(c.abs()));
        let art = (max_c + 1.0) * (nodes + 1) as f64;

        let mut net = Network {
            src: Vec::with_capacity(n_real + nodes),
            dst: Vec::with_capacity(n_real + nodes),
            cost: Vec::with_capacity(n_real + nodes),
            flow: vec![0.0; n_real + nodes],
            in_tree: vec![false; n_real + nodes],
            parent: vec![root; nodes + 1],
            pred: vec![0; nodes + 1],
            dir: vec![UP; nodes + 1],
            depth: vec![1; nodes + 1],
            children: vec![Vec::new(); nodes + 1],
            pi: vec![0.0; nodes + 1],
            root,
            n_real,
        };
        for &(i, j, c) in &self.arcs {
            net.src.push(i);
            net.dst.push(m + j);
            net.cost.push(c);
        }
        for u in 0..nodes {
            let e = n_real + u;
            if u < m {
                net.src.push(u);
                net.dst.push(root);
                net.cost.push(0.0);
                net.flow[e] = self.supply[u];
                net.dir[u] = UP;
                net.pi[u] = 0.0;
            } else {
                net.src.push(root);
                net.dst.push(u);
                net.cost.push(art);
                net.flow[e] = self.demand[u - m];
                net.dir[u] = DOWN;
                net.pi[u] = art;
            }
            net.in_tree[e] = true;
            net.pred[u] = e;
            net.children[root].push(u);
        }
        net.depth[root] = 0;

        let eps = 1e-12 * art.max(1.0);
        let block = ((n_real as f64).sqrt().ceil() as usize).max(10);
        let mut next = 0usize;
        let mut pivots = 0usize;
        let max_pivots = 50 * (n_real + nodes) * (nodes + 1) + 1000;
        loop {
            let entering = match pricing {
                Pricing::Bland => (0..n_real).find(|&e| !net.in_tree[e] && net.reduced(e) < -eps),
                Pricing::BlockSearch => {
                    let mut best: Option<(usize, f64)> = None;
                    let mut scanned = 0;
                    let mut cnt = 0;
                    while scanned < n_real {
                        let e = next;
                        next = (next + 1) % n_real.max(1);
                        scanned += 1;
                        cnt += 1;
                        if !net.in_tree[e] {
                            let r = net.reduced(e);
                            if r < -eps && best.is_none_or(|(_, b)| r < b) {
                                best = Some((e, r));
                            }
                        }
                        if cnt >= block && best.is_some() {
                            break;
                        }
                        if cnt >= block {
                            cnt = 0;
                        }
                    }
                    best.map(|b| b.0)
                }
            };
            let Some(e) = entering else { break };
            net.pivot(e);
            pivots += 1;
            if pivots > max_pivots {
                return Err(Error::Numerical(format!("network simplex exceeded {max_pivots} pivots")));
            }
        }

        let art_flow: f64 = net.flow[n_real..].iter().sum();
        let status = if art_flow > 1e-10 * total_s.max(1.0) { SolveStatus::Infeasible } else { SolveStatus::Optimal };
        let flow: Vec<f64> = net.flow[..n_real].iter().map(|&f| if f < 0.0 { 0.0 } else { f }).collect();
        let cost = flow.iter().zip(&net.cost).map(|(f, c)| f * c).sum();
        let (mut dual_residual, mut slackness_residual) = (0.0f64, 0.0f64);
        for e in 0..n_real {
            let r = net.reduced(e);
            dual_residual = dual_residual.max(-r);
            slackness_residual += flow[e] * r.abs();
        }
        let _ = (net.root, net.n_real);
        Ok(TransportSolution {
            status,
            flow,
            cost,
            pi_source: net.pi[..m].to_vec(),
            pi_sink: net.pi[m..nodes].to_vec(),
            dual_residual,
            slackness_residual,
            pivots,
        })
    }
}
