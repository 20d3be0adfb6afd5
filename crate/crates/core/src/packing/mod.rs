//! Edge-disjoint tree packings in a multigraph.
//!
//! Parallel edges are addressed as `(i, j, copy)` with `copy` in
//! `0..e_ij`. A packing for a target set `A` is a list of pairwise
//! edge-disjoint trees, each spanning a vertex set that contains `A`.

mod flow;
mod spanning;
mod steiner;

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Edge, Multigraph, TerminalSet};

pub use flow::{max_disjoint_paths, min_cut, MinCut};
pub use spanning::spanning_packing;
pub use steiner::{
    steiner_packing, steiner_packing_capped, steiner_rate_lower_bound, SteinerMode,
    DEFAULT_EXACT_EDGE_CAP,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Tree {
    edges: Vec<Edge>,
}

impl Tree {
    /// Builds a tree from its edges; they are stored in canonical order.
    pub fn new(mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        Self { edges }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn vertices(&self) -> BTreeSet<usize> {
        self.edges.iter().flat_map(|e| [e.i, e.j]).collect()
    }

    /// Checks that the edges exist in `g`, form a tree, and cover `a`.
    pub fn validate(&self, g: &Multigraph, a: &TerminalSet) -> Result<()> {
        if self.edges.is_empty() {
            return Err(Error::InvalidTree("tree has no edges".into()));
        }
        let mut seen = HashSet::new();
        for e in &self.edges {
            if !g.contains_edge(e) {
                return Err(Error::InvalidTree(format!(
                    "edge {e} is not in the multigraph"
                )));
            }
            if !seen.insert(*e) {
                return Err(Error::InvalidTree(format!("edge {e} appears twice")));
            }
        }
        let vertices = self.vertices();
        if vertices.len() != self.edges.len() + 1 {
            return Err(Error::InvalidTree(format!(
                "{} edges on {} vertices cannot form a tree",
                self.edges.len(),
                vertices.len()
            )));
        }
        // with |V| = |E| + 1, connected is equivalent to acyclic
        let mut parent: Vec<usize> = (0..=g.m()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            let (ri, rj) = (find(&mut parent, e.i), find(&mut parent, e.j));
            if ri == rj {
                return Err(Error::InvalidTree(format!("edge {e} closes a cycle")));
            }
            parent[ri] = rj;
        }
        if let Some(t) = a.members().iter().find(|t| !vertices.contains(t)) {
            return Err(Error::InvalidTree(format!(
                "tree does not reach terminal {t}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePacking {
    target: TerminalSet,
    trees: Vec<Tree>,
}

impl TreePacking {
    pub fn new(target: TerminalSet, trees: Vec<Tree>) -> Self {
        Self { target, trees }
    }

    pub fn target(&self) -> &TerminalSet {
        &self.target
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.trees.iter().map(Tree::len).sum()
    }

    /// Checks every tree and pairwise edge-disjointness.
    pub fn validate(&self, g: &Multigraph) -> Result<()> {
        if self.target.members().iter().any(|&t| t > g.m()) {
            return Err(Error::InvalidPacking(format!(
                "target {} has terminals outside the multigraph",
                self.target
            )));
        }
        let mut used = HashSet::new();
        for (k, t) in self.trees.iter().enumerate() {
            t.validate(g, &self.target)
                .map_err(|e| Error::InvalidPacking(format!("tree {k}: {e}")))?;
            for e in t.edges() {
                if !used.insert(*e) {
                    return Err(Error::InvalidPacking(format!(
                        "edge {e} is shared by tree {k} and an earlier tree"
                    )));
                }
            }
        }
        Ok(())
    }
}
