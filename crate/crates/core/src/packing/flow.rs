//! Menger path packing through max-flow on the collapsed capacity graph.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::model::{Edge, Multigraph, TerminalSet};

use super::{Tree, TreePacking};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinCut {
    pub value: u64,
    /// Terminals on the source side of a minimum cut.
    pub source_side: Vec<usize>,
}

struct Flow {
    m: usize,
    /// net flow from u to v (antisymmetric), 0-based
    net: Vec<Vec<i64>>,
    value: u64,
    reachable: Vec<bool>,
}

fn capacity(g: &Multigraph, u: usize, v: usize) -> i64 {
    g.multiplicity(u + 1, v + 1) as i64
}

fn max_flow(g: &Multigraph, s: usize, t: usize) -> Result<Flow> {
    if s == t || s == 0 || t == 0 || s > g.m() || t > g.m() {
        return Err(Error::InvalidTerminalSet(format!(
            "flow endpoints ({s},{t}) must be distinct terminals of 1..={}",
            g.m()
        )));
    }
    let m = g.m();
    let (s, t) = (s - 1, t - 1);
    let mut net = vec![vec![0i64; m]; m];
    let mut value = 0u64;
    loop {
        // BFS for a shortest augmenting path in the residual graph
        let mut prev = vec![usize::MAX; m];
        prev[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for v in 0..m {
                if prev[v] == usize::MAX && capacity(g, u, v) - net[u][v] > 0 {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[t] == usize::MAX {
            let reachable = prev.iter().map(|&p| p != usize::MAX).collect();
            return Ok(Flow {
                m,
                net,
                value,
                reachable,
            });
        }
        let mut bottleneck = i64::MAX;
        let mut v = t;
        while v != s {
            let u = prev[v];
            bottleneck = bottleneck.min(capacity(g, u, v) - net[u][v]);
            v = u;
        }
        let mut v = t;
        while v != s {
            let u = prev[v];
            net[u][v] += bottleneck;
            net[v][u] -= bottleneck;
            v = u;
        }
        value += bottleneck as u64;
    }
}

/// Minimum number of parallel edges separating `s` from `t`.
pub fn min_cut(g: &Multigraph, s: usize, t: usize) -> Result<MinCut> {
    let flow = max_flow(g, s, t)?;
    Ok(MinCut {
        value: flow.value,
        source_side: (0..flow.m)
            .filter(|&v| flow.reachable[v])
            .map(|v| v + 1)
            .collect(),
    })
}

/// A maximum set of edge-disjoint `s`-`t` paths.
pub fn max_disjoint_paths(g: &Multigraph, s: usize, t: usize) -> Result<TreePacking> {
    let target = TerminalSet::new(g.m(), [s, t])?;
    let Flow {
        m, mut net, value, ..
    } = max_flow(g, s, t)?;
    let (s0, t0) = (s - 1, t - 1);
    let mut next_copy = vec![vec![0u64; m]; m];
    let mut trees = Vec::with_capacity(value as usize);
    for _ in 0..value {
        // BFS over positive net flow yields a simple path; leftover flow
        // cycles never block it
        let mut prev = vec![usize::MAX; m];
        prev[s0] = s0;
        let mut queue = VecDeque::from([s0]);
        while let Some(u) = queue.pop_front() {
            for v in 0..m {
                if prev[v] == usize::MAX && net[u][v] > 0 {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[t0] == usize::MAX {
            return Err(Error::Internal("flow decomposition lost a path".into()));
        }
        let mut edges = Vec::new();
        let mut v = t0;
        while v != s0 {
            let u = prev[v];
            net[u][v] -= 1;
            net[v][u] += 1;
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            let copy = next_copy[a][b];
            next_copy[a][b] += 1;
            edges.push(Edge::new(a + 1, b + 1, copy));
            v = u;
        }
        trees.push(Tree::new(edges));
    }
    Ok(TreePacking::new(target, trees))
}
