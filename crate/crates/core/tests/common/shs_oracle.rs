//! Brute-force stationarity oracle.
//!
//! Builds the transition list from scratch, discovers every node-set
//! functional `X_{N(S)}` reachable from the requested ones under the reset
//! maps, and solves the resulting dense linear system. Shares no code with
//! the affine recursions in `agl::analytic`.

use std::collections::{HashMap, VecDeque};

use nalgebra::{DMatrix, DVector};

pub const SOURCE: usize = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    /// Source delivery: receiver's age drops to 0.
    Fresh,
    /// Truthful stamp, receiver keeps the larger.
    Max,
    /// Stamp rewritten to the current time: receiver inherits the sender's age.
    Forced,
}

#[derive(Debug, Clone, Copy)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub rate: f64,
    pub mv: Move,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    FcnCapture,
    Mitm,
    UrnCapture,
}

/// Effective-rate edges. Nodes are `1..=n`; the MITM adversary is node `n + 1`.
pub fn edges(topology: Topology, honest: bool, n: usize, lambda: f64, p: f64, q: f64) -> Vec<Edge> {
    let mut out = Vec::new();
    let src = lambda / n as f64;
    let mut push = |from, to, rate: f64, mv| {
        if rate > 0.0 {
            out.push(Edge { from, to, rate, mv });
        }
    };
    match topology {
        Topology::FcnCapture => {
            for j in 1..=n {
                push(SOURCE, j, src, Move::Fresh);
            }
            let g = lambda / (n - 1) as f64;
            for i in 1..=n {
                for j in 1..=n {
                    if i == j {
                        continue;
                    }
                    if honest || (i != n && j != n) {
                        push(i, j, g, Move::Max);
                    } else if i == n {
                        push(i, j, p * g, Move::Forced);
                    } else {
                        push(i, j, (1.0 - q) * g, Move::Forced);
                    }
                }
            }
        }
        Topology::Mitm => {
            let a = n + 1;
            for j in 1..n {
                push(SOURCE, j, src, Move::Fresh);
            }
            push(SOURCE, a, src, Move::Fresh);
            push(a, n, lambda, Move::Forced);
            let g = lambda / (n - 1) as f64;
            for i in 1..=n {
                for j in 1..=n {
                    if i != j {
                        push(i, j, g, Move::Max);
                    }
                }
            }
        }
        Topology::UrnCapture => {
            for j in 1..=n {
                push(SOURCE, j, src, Move::Fresh);
            }
            for i in 1..=n {
                let j = i % n + 1;
                if honest || (i != n && j != n) {
                    push(i, j, lambda, Move::Max);
                } else if i == n {
                    push(i, j, p * lambda, Move::Forced);
                } else {
                    push(i, j, (1.0 - q) * lambda, Move::Forced);
                }
            }
        }
    }
    out
}

pub fn set(nodes: &[usize]) -> u64 {
    nodes.iter().fold(0, |m, &i| m | (1 << i))
}

fn contains(mask: u64, i: usize) -> bool {
    mask & (1 << i) != 0
}

pub struct ShsSolution {
    index: HashMap<u64, usize>,
    values: DVector<f64>,
}

impl ShsSolution {
    pub fn get(&self, mask: u64) -> f64 {
        self.values[*self.index.get(&mask).expect("functional was not requested or reached")]
    }

    pub fn node(&self, i: usize) -> f64 {
        self.get(set(&[i]))
    }

    pub fn unknowns(&self) -> usize {
        self.values.len()
    }
}

/// Successor of functional `mask` under `edge`; `None` if unchanged, `Some(0)` for zero age.
fn reset(mask: u64, e: &Edge) -> Option<u64> {
    if !contains(mask, e.to) {
        return None;
    }
    match e.mv {
        Move::Fresh => Some(0),
        Move::Max if contains(mask, e.from) => None,
        Move::Max => Some(mask | (1 << e.from)),
        Move::Forced => Some(1 << e.from),
    }
}

pub fn solve(edges: &[Edge], targets: &[u64]) -> ShsSolution {
    let mut index = HashMap::new();
    let mut order = Vec::new();
    let mut queue: VecDeque<u64> = targets.iter().copied().collect();
    while let Some(m) = queue.pop_front() {
        if m == 0 || index.contains_key(&m) {
            continue;
        }
        index.insert(m, order.len());
        order.push(m);
        for e in edges {
            if let Some(next) = reset(m, e) {
                queue.push_back(next);
            }
        }
    }

    let size = order.len();
    let mut a = DMatrix::<f64>::zeros(size, size);
    let b = DVector::<f64>::from_element(size, 1.0);
    for (row, &m) in order.iter().enumerate() {
        for e in edges {
            if let Some(next) = reset(m, e) {
                a[(row, row)] += e.rate;
                if next != 0 {
                    a[(row, index[&next])] -= e.rate;
                }
            }
        }
    }
    let values = a.lu().solve(&b).expect("stationarity system is singular");
    ShsSolution { index, values }
}

/// Honest fully connected network reduced by symmetry to set sizes `k = 1..=n`.
pub fn honest_fcn_dense(n: usize, lambda: f64) -> Vec<f64> {
    let mut a = DMatrix::<f64>::zeros(n, n);
    let b = DVector::<f64>::from_element(n, 1.0);
    let nf = n as f64;
    for k in 1..=n {
        let kf = k as f64;
        let spread = kf * (nf - kf) * lambda / (nf - 1.0);
        a[(k - 1, k - 1)] = kf * lambda / nf + spread;
        if k < n {
            a[(k - 1, k)] = -spread;
        }
    }
    a.lu().solve(&b).unwrap().iter().copied().collect()
}

/// Honest ring reduced by rotation symmetry to arc lengths `m = 1..=n`.
pub fn honest_urn_dense(n: usize, lambda: f64) -> Vec<f64> {
    let mut a = DMatrix::<f64>::zeros(n, n);
    let b = DVector::<f64>::from_element(n, 1.0);
    for m in 1..=n {
        let inflow = if m < n { lambda } else { 0.0 };
        a[(m - 1, m - 1)] = m as f64 * lambda / n as f64 + inflow;
        if m < n {
            a[(m - 1, m)] = -inflow;
        }
    }
    a.lu().solve(&b).unwrap().iter().copied().collect()
}
