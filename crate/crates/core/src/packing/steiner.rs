//! Steiner-tree packing for an arbitrary target set.
//!
//! Two-terminal targets reduce to path packing and full targets to spanning
//! trees. Otherwise the exact search works on the simple support graph: it
//! enumerates every minimal Steiner tree (all leaves in the target) as a set
//! of vertex pairs, then searches multisets of these trees whose pair usage
//! fits the multiplicities. Branches are cut with the partition bound
//! `floor(crossing capacity / (|P| - 1))` over partitions whose atoms all
//! meet the target.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::model::{pair_index, pairs, Edge, Multigraph, PinModel, Rational, TerminalSet};
use crate::partition::enumerate_partitions;

use super::{max_disjoint_paths, spanning_packing, Tree, TreePacking};

/// Largest edge count accepted by the exact search.
pub const DEFAULT_EXACT_EDGE_CAP: u64 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteinerMode {
    Exact,
    Greedy,
}

impl std::str::FromStr for SteinerMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Self::Exact),
            "greedy" => Ok(Self::Greedy),
            other => Err(Error::UnsupportedMode(format!(
                "unknown packing mode {other:?}, expected exact or greedy"
            ))),
        }
    }
}

pub fn steiner_packing(g: &Multigraph, a: &TerminalSet, mode: SteinerMode) -> Result<TreePacking> {
    steiner_packing_capped(g, a, mode, DEFAULT_EXACT_EDGE_CAP)
}

pub fn steiner_packing_capped(
    g: &Multigraph,
    a: &TerminalSet,
    mode: SteinerMode,
    exact_cap: u64,
) -> Result<TreePacking> {
    if a.members().iter().any(|&t| t > g.m()) {
        return Err(Error::InvalidTerminalSet(format!(
            "{a} is not a subset of 1..={}",
            g.m()
        )));
    }
    if a.len() == 2 {
        return max_disjoint_paths(g, a.members()[0], a.members()[1]);
    }
    if a.is_full(g.m()) {
        return spanning_packing(g);
    }
    match mode {
        SteinerMode::Greedy => Ok(greedy(g, a)),
        SteinerMode::Exact => {
            let edges = g.edge_count();
            if edges > exact_cap {
                return Err(Error::SizeLimit {
                    what: "edge count for exact Steiner packing",
                    limit: exact_cap as usize,
                    actual: edges as usize,
                });
            }
            exact(g, a)
        }
    }
}

/// `mu(A, G^(n)) / n` for the packing chosen by `mode`.
pub fn steiner_rate_lower_bound(
    model: &PinModel,
    a: &TerminalSet,
    n: u64,
    mode: SteinerMode,
) -> Result<Rational> {
    steiner_rate_lower_bound_capped(model, a, n, mode, DEFAULT_EXACT_EDGE_CAP)
}

pub fn steiner_rate_lower_bound_capped(
    model: &PinModel,
    a: &TerminalSet,
    n: u64,
    mode: SteinerMode,
    exact_cap: u64,
) -> Result<Rational> {
    let g = model.realize_multigraph(n)?;
    let p = steiner_packing_capped(&g, a, mode, exact_cap)?;
    Ok(Rational::new(BigInt::from(p.len()), BigInt::from(n)))
}

/// Turns pair-level trees into concrete edges, taking the lowest unused copy
/// of every pair.
fn materialize(g: &Multigraph, a: &TerminalSet, pair_trees: &[Vec<(usize, usize)>]) -> TreePacking {
    let mut next = vec![0u64; g.multiplicities().len()];
    let trees = pair_trees
        .iter()
        .map(|pt| {
            Tree::new(
                pt.iter()
                    .map(|&(i, j)| {
                        let k = pair_index(g.m(), i, j);
                        let e = Edge::new(i, j, next[k]);
                        next[k] += 1;
                        e
                    })
                    .collect(),
            )
        })
        .collect();
    TreePacking::new(a.clone(), trees)
}

/// One Steiner tree in the pairs with positive remaining capacity, built by
/// repeatedly attaching the nearest unreached terminal along a shortest path
/// and then pruning leaves outside the target.
fn greedy_tree(m: usize, remaining: &[u64], a: &TerminalSet) -> Option<Vec<(usize, usize)>> {
    let available = |u: usize, v: usize| {
        let (i, j) = if u < v { (u, v) } else { (v, u) };
        remaining[pair_index(m, i, j)] > 0
    };
    let mut in_tree = vec![false; m + 1];
    in_tree[a.members()[0]] = true;
    let mut tree: Vec<(usize, usize)> = Vec::new();
    loop {
        let unreached: Vec<usize> = a
            .members()
            .iter()
            .copied()
            .filter(|&t| !in_tree[t])
            .collect();
        if unreached.is_empty() {
            break;
        }
        let mut prev = vec![0usize; m + 1];
        let mut seen = in_tree.clone();
        let mut queue: VecDeque<usize> = (1..=m).filter(|&v| in_tree[v]).collect();
        let mut hit = None;
        'bfs: while let Some(u) = queue.pop_front() {
            for v in 1..=m {
                if v != u && !seen[v] && available(u, v) {
                    seen[v] = true;
                    prev[v] = u;
                    if a.contains(v) {
                        hit = Some(v);
                        break 'bfs;
                    }
                    queue.push_back(v);
                }
            }
        }
        let mut v = hit?;
        while !in_tree[v] {
            let u = prev[v];
            tree.push(if u < v { (u, v) } else { (v, u) });
            in_tree[v] = true;
            v = u;
        }
    }
    prune_leaves(&mut tree, a);
    tree.sort_unstable();
    Some(tree)
}

fn prune_leaves(tree: &mut Vec<(usize, usize)>, a: &TerminalSet) {
    loop {
        let mut degree = std::collections::HashMap::new();
        for &(i, j) in tree.iter() {
            *degree.entry(i).or_insert(0) += 1;
            *degree.entry(j).or_insert(0) += 1;
        }
        let before = tree.len();
        tree.retain(|&(i, j)| {
            let leaf_out = |v: usize| degree[&v] == 1 && !a.contains(v);
            !(leaf_out(i) || leaf_out(j))
        });
        if tree.len() == before {
            return;
        }
    }
}

fn greedy_pairs(g: &Multigraph, a: &TerminalSet) -> Vec<Vec<(usize, usize)>> {
    let m = g.m();
    let mut remaining = g.multiplicities().to_vec();
    let mut out = Vec::new();
    while let Some(t) = greedy_tree(m, &remaining, a) {
        for &(i, j) in &t {
            remaining[pair_index(m, i, j)] -= 1;
        }
        out.push(t);
    }
    out
}

fn greedy(g: &Multigraph, a: &TerminalSet) -> TreePacking {
    materialize(g, a, &greedy_pairs(g, a))
}

/// Every minimal Steiner tree of the support graph, as bitmasks over the
/// support pairs.
fn minimal_steiner_trees(support: &[(usize, usize)], a: &TerminalSet) -> Vec<u64> {
    let target = a.mask();
    let root = a.members()[0];
    let mut found = Vec::new();
    let mut seen: HashSet<u64> = HashSet::new();
    // (edge mask, vertex mask)
    let mut stack: Vec<(u64, u64)> = vec![(0, 1 << (root - 1))];
    seen.insert(0);
    while let Some((edges, verts)) = stack.pop() {
        if verts & target == target {
            if is_minimal(edges, support, target) {
                found.push(edges);
            }
            // any extension would add a leaf outside the target
            continue;
        }
        for (k, &(i, j)) in support.iter().enumerate() {
            let (bi, bj) = (verts >> (i - 1) & 1, verts >> (j - 1) & 1);
            if bi ^ bj == 1 {
                let next = edges | 1 << k;
                if seen.insert(next) {
                    stack.push((next, verts | 1 << (i - 1) | 1 << (j - 1)));
                }
            }
        }
    }
    found.sort_unstable_by_key(|&t| (t.count_ones(), t));
    found
}

fn is_minimal(edges: u64, support: &[(usize, usize)], target: u64) -> bool {
    let mut degree = [0u32; 64];
    for (k, &(i, j)) in support.iter().enumerate() {
        if edges >> k & 1 == 1 {
            degree[i - 1] += 1;
            degree[j - 1] += 1;
        }
    }
    (0..64).all(|v| degree[v] != 1 || target >> v & 1 == 1)
}

struct Search<'a> {
    trees: &'a [u64],
    /// per tree: support pair indices used
    usage: Vec<Vec<usize>>,
    /// per bounding partition: (support pairs crossing it, |P| - 1)
    cuts: Vec<(Vec<usize>, u64)>,
    best: Vec<usize>,
    chosen: Vec<usize>,
}

impl Search<'_> {
    fn bound(&self, cap: &[u64]) -> u64 {
        self.cuts
            .iter()
            .map(|(pairs, d)| pairs.iter().map(|&k| cap[k]).sum::<u64>() / d)
            .min()
            .unwrap_or(u64::MAX)
    }

    fn run(&mut self, start: usize, cap: &mut [u64]) {
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        if self.chosen.len() as u64 + self.bound(cap) <= self.best.len() as u64 {
            return;
        }
        for t in start..self.trees.len() {
            if self.usage[t].iter().all(|&k| cap[k] > 0) {
                for &k in &self.usage[t] {
                    cap[k] -= 1;
                }
                self.chosen.push(t);
                self.run(t, cap);
                self.chosen.pop();
                for &k in &self.usage[t] {
                    cap[k] += 1;
                }
                if self.chosen.len() as u64 + self.bound(cap) <= self.best.len() as u64 {
                    return;
                }
            }
        }
    }
}

fn exact(g: &Multigraph, a: &TerminalSet) -> Result<TreePacking> {
    let m = g.m();
    let support: Vec<(usize, usize)> = pairs(m)
        .zip(g.multiplicities())
        .filter(|(_, &e)| e > 0)
        .map(|(p, _)| p)
        .collect();
    if support.len() > 64 {
        return Err(Error::SizeLimit {
            what: "support pairs for exact Steiner packing",
            limit: 64,
            actual: support.len(),
        });
    }
    let trees = minimal_steiner_trees(&support, a);
    let usage: Vec<Vec<usize>> = trees
        .iter()
        .map(|&t| (0..support.len()).filter(|&k| t >> k & 1 == 1).collect())
        .collect();
    let cuts = enumerate_partitions(m, a)?
        .map(|p| {
            let crossing = support
                .iter()
                .enumerate()
                .filter(|(_, &(i, j))| p.crosses(i, j))
                .map(|(k, _)| k)
                .collect();
            (crossing, p.atom_count() as u64 - 1)
        })
        .collect();
    let mut cap: Vec<u64> = support.iter().map(|&(i, j)| g.multiplicity(i, j)).collect();

    // seed the incumbent with the greedy packing, mapped to tree indices
    let index_of = |pt: &[(usize, usize)]| -> Option<usize> {
        let mask = pt.iter().fold(0u64, |acc, p| {
            acc | 1
                << support
                    .iter()
                    .position(|s| s == p)
                    .expect("greedy uses support pairs")
        });
        trees.iter().position(|&t| t == mask)
    };
    let seed: Vec<usize> = greedy_pairs(g, a)
        .iter()
        .map(|pt| index_of(pt))
        .collect::<Option<Vec<_>>>()
        .unwrap_or_default();

    let mut search = Search {
        trees: &trees,
        usage,
        cuts,
        best: seed,
        chosen: Vec::new(),
    };
    search.run(0, &mut cap);
    let mut best = search.best;
    best.sort_unstable();
    let pair_trees: Vec<Vec<(usize, usize)>> = best
        .iter()
        .map(|&t| search.usage[t].iter().map(|&k| support[k]).collect())
        .collect();
    Ok(materialize(g, a, &pair_trees))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Multigraph {
        Multigraph::new(4, pairs(4).map(|(i, j)| (i, j, 1))).unwrap()
    }

    #[test]
    fn delegation() {
        let g = k4();
        let two = TerminalSet::new(4, [1, 3]).unwrap();
        let p = steiner_packing(&g, &two, SteinerMode::Exact).unwrap();
        assert_eq!(p.len(), max_disjoint_paths(&g, 1, 3).unwrap().len());
        let full = TerminalSet::full(4).unwrap();
        let p = steiner_packing(&g, &full, SteinerMode::Greedy).unwrap();
        assert_eq!(p.len(), spanning_packing(&g).unwrap().len());
    }

    /// Largest k such that some labeling of the edges with {0..k} (k = unused)
    /// makes every class 0..k-1 a connected subgraph spanning the target.
    fn labeling_oracle(g: &Multigraph, a: &TerminalSet) -> u64 {
        let edges = g.edges();
        let spans = |class: &[Edge]| {
            let mut reach = 1u64 << (a.members()[0] - 1);
            loop {
                let before = reach;
                for e in class {
                    if reach >> (e.i - 1) & 1 == 1 || reach >> (e.j - 1) & 1 == 1 {
                        reach |= 1 << (e.i - 1) | 1 << (e.j - 1);
                    }
                }
                if reach == before {
                    return reach & a.mask() == a.mask();
                }
            }
        };
        let mut best = 0;
        for k in 1..=edges.len() as u64 {
            let total = (k + 1).pow(edges.len() as u32);
            let found = (0..total).any(|mut code| {
                let mut classes = vec![Vec::new(); k as usize];
                for e in &edges {
                    let l = code % (k + 1);
                    code /= k + 1;
                    if l < k {
                        classes[l as usize].push(*e);
                    }
                }
                classes.iter().all(|c| spans(c))
            });
            if !found {
                break;
            }
            best = k;
        }
        best
    }

    #[test]
    fn k4_three_terminals() {
        let g = k4();
        let a = TerminalSet::new(4, [1, 2, 3]).unwrap();
        let exact = steiner_packing(&g, &a, SteinerMode::Exact).unwrap();
        exact.validate(&g).unwrap();
        // star at 4 plus a path on the triangle
        assert_eq!(exact.len(), 2);
        assert_eq!(exact.len() as u64, labeling_oracle(&g, &a));
        let greedy = steiner_packing(&g, &a, SteinerMode::Greedy).unwrap();
        greedy.validate(&g).unwrap();
        assert!(!greedy.is_empty());
        assert!(greedy.len() <= exact.len());
    }

    #[test]
    fn minimal_trees_have_target_leaves() {
        let a = TerminalSet::new(4, [1, 2, 3]).unwrap();
        let support: Vec<_> = pairs(4).collect();
        let trees = minimal_steiner_trees(&support, &a);
        // 3 paths on the triangle, the star at 4, and 6 Hamiltonian paths
        // with 4 in the interior
        for &t in &trees {
            assert!(is_minimal(t, &support, a.mask()));
        }
        assert_eq!(trees.len(), 3 + 1 + 6);
    }

    #[test]
    fn exact_cap() {
        let g = Multigraph::new(4, pairs(4).map(|(i, j)| (i, j, 5))).unwrap();
        let a = TerminalSet::new(4, [1, 2, 3]).unwrap();
        assert!(matches!(
            steiner_packing(&g, &a, SteinerMode::Exact),
            Err(Error::SizeLimit {
                limit: 24,
                actual: 30,
                ..
            })
        ));
        assert!(steiner_packing_capped(&g, &a, SteinerMode::Exact, 30).is_ok());
        assert!(steiner_packing(&g, &a, SteinerMode::Greedy).is_ok());
    }

    #[test]
    fn greedy_stops_when_target_disconnected() {
        let g = Multigraph::new(4, [(1, 2, 2), (2, 3, 1)]).unwrap();
        let a = TerminalSet::new(4, [1, 2, 3]).unwrap();
        let p = steiner_packing(&g, &a, SteinerMode::Greedy).unwrap();
        assert_eq!(p.len(), 1);
        let e = steiner_packing(&g, &a, SteinerMode::Exact).unwrap();
        assert_eq!(e.len(), 1);
    }

    #[test]
    fn rate_examples() {
        let q = |p: i64| Rational::from_integer(p.into());
        let tri = PinModel::exact(3, [(1, 2, q(1)), (1, 3, q(1)), (2, 3, q(1))]).unwrap();
        let full = TerminalSet::full(3).unwrap();
        assert_eq!(
            steiner_rate_lower_bound(&tri, &full, 2, SteinerMode::Exact).unwrap(),
            Rational::new(3.into(), 2.into())
        );
        let path = PinModel::exact(3, [(1, 2, q(2)), (2, 3, q(1))]).unwrap();
        let ends = TerminalSet::new(3, [1, 3]).unwrap();
        assert_eq!(
            steiner_rate_lower_bound(&path, &ends, 1, SteinerMode::Exact).unwrap(),
            q(1)
        );
    }
}
