//! Spanning-tree packing by matroid-union augmentation.
//!
//! `k` forests are grown at once. A new edge either fits into some forest
//! directly, or it displaces an edge on the cycle it would close, which in
//! turn moves to another forest, and so on along a shortest exchange path.
//! `k` is the partition-formula optimum, so every forest ends up spanning.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::model::{Edge, Multigraph, TerminalSet};
use crate::partition::nash_williams_count;

use super::{Tree, TreePacking};

struct Forests<'a> {
    edges: &'a [Edge],
    /// adjacency per forest: adj[f][v] = (neighbour, edge index), 1-based v
    adj: Vec<Vec<Vec<(usize, usize)>>>,
    assigned: Vec<Option<usize>>,
    sizes: Vec<usize>,
}

impl<'a> Forests<'a> {
    fn new(edges: &'a [Edge], k: usize, m: usize) -> Self {
        Self {
            edges,
            adj: vec![vec![Vec::new(); m + 1]; k],
            assigned: vec![None; edges.len()],
            sizes: vec![0; k],
        }
    }

    /// Edge indices on the forest path between `u` and `v`, or `None`
    /// when they lie in different components.
    fn path(&self, f: usize, u: usize, v: usize) -> Option<Vec<usize>> {
        let adj = &self.adj[f];
        let mut via: Vec<Option<(usize, usize)>> = vec![None; adj.len()];
        let mut seen = vec![false; adj.len()];
        seen[u] = true;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if x == v {
                break;
            }
            for &(y, e) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    via[y] = Some((x, e));
                    queue.push_back(y);
                }
            }
        }
        if !seen[v] {
            return None;
        }
        let mut out = Vec::new();
        let mut x = v;
        while x != u {
            let (p, e) = via[x].expect("reached vertices have a predecessor");
            out.push(e);
            x = p;
        }
        Some(out)
    }

    fn insert(&mut self, f: usize, e: usize) {
        let Edge { i, j, .. } = self.edges[e];
        self.adj[f][i].push((j, e));
        self.adj[f][j].push((i, e));
        self.assigned[e] = Some(f);
        self.sizes[f] += 1;
    }

    fn remove(&mut self, e: usize) {
        let Some(f) = self.assigned[e].take() else {
            return;
        };
        let Edge { i, j, .. } = self.edges[e];
        self.adj[f][i].retain(|&(_, x)| x != e);
        self.adj[f][j].retain(|&(_, x)| x != e);
        self.sizes[f] -= 1;
    }

    /// Tries to add edge `e0` to the union, rearranging along a shortest
    /// exchange path.
    fn augment(&mut self, e0: usize) -> bool {
        let k = self.adj.len();
        let mut parent: HashMap<usize, (usize, usize)> = HashMap::new();
        let mut queue = VecDeque::from([e0]);
        let mut visited = vec![false; self.edges.len()];
        visited[e0] = true;
        while let Some(x) = queue.pop_front() {
            let Edge { i, j, .. } = self.edges[x];
            for f in 0..k {
                if self.assigned[x] == Some(f) {
                    continue;
                }
                match self.path(f, i, j) {
                    None => {
                        self.apply(e0, x, f, &parent);
                        return true;
                    }
                    Some(cycle) => {
                        for y in cycle {
                            if !visited[y] {
                                visited[y] = true;
                                parent.insert(y, (x, f));
                                queue.push_back(y);
                            }
                        }
                    }
                }
            }
        }
        false
    }

    fn apply(
        &mut self,
        e0: usize,
        last: usize,
        free: usize,
        parent: &HashMap<usize, (usize, usize)>,
    ) {
        let mut cur = last;
        let mut dest = free;
        loop {
            self.remove(cur);
            self.insert(dest, cur);
            if cur == e0 {
                break;
            }
            let (prev, forest) = parent[&cur];
            cur = prev;
            dest = forest;
        }
    }
}

/// A maximum packing of edge-disjoint spanning trees.
pub fn spanning_packing(g: &Multigraph) -> Result<TreePacking> {
    let m = g.m();
    let target = TerminalSet::full(m)?;
    let k = nash_williams_count(g)?.count as usize;
    if k == 0 {
        return Ok(TreePacking::new(target, Vec::new()));
    }
    let edges = g.edges();
    let mut forests = Forests::new(&edges, k, m);
    let goal = k * (m - 1);
    let mut placed = 0;
    for e in 0..edges.len() {
        if placed == goal {
            break;
        }
        if forests.augment(e) {
            placed += 1;
        }
    }
    if forests.sizes.iter().any(|&s| s != m - 1) {
        return Err(Error::Internal(format!(
            "matroid union placed {placed} of {goal} edges into {k} forests"
        )));
    }
    let mut trees: Vec<Vec<Edge>> = vec![Vec::new(); k];
    for (e, f) in forests.assigned.iter().enumerate() {
        if let Some(f) = f {
            trees[*f].push(edges[e]);
        }
    }
    let mut trees: Vec<Tree> = trees.into_iter().map(Tree::new).collect();
    trees.sort_by(|a, b| a.edges().cmp(b.edges()));
    Ok(TreePacking::new(target, trees))
}
