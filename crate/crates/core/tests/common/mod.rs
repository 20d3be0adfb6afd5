//! Random instances and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use pinkey::model::pairs;
use pinkey::packing::TreePacking;
use pinkey::{Edge, Multigraph, PinModel, Rational, TerminalSet};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn q(p: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact model on `m` terminals with weights `p/q`, `p <= max_p`, `q <= max_q`.
pub fn random_model<R: Rng>(rng: &mut R, m: usize, max_p: i64, max_q: i64) -> PinModel {
    let weights: Vec<_> = pairs(m)
        .map(|(i, j)| (i, j, q(rng.gen_range(0..=max_p), rng.gen_range(1..=max_q))))
        .collect();
    PinModel::exact(m, weights).unwrap()
}

pub fn random_multigraph<R: Rng>(rng: &mut R, m: usize, max_e: u64) -> Multigraph {
    let triples: Vec<_> = pairs(m)
        .map(|(i, j)| (i, j, rng.gen_range(0..=max_e)))
        .collect();
    Multigraph::new(m, triples).unwrap()
}

pub fn random_subset<R: Rng>(rng: &mut R, m: usize, size: usize) -> TerminalSet {
    let mut all: Vec<usize> = (1..=m).collect();
    all.shuffle(rng);
    TerminalSet::new(m, all[..size].iter().copied()).unwrap()
}

/// Fewest edges crossing any vertex cut separating `s` from `t`.
pub fn exhaustive_min_cut(g: &Multigraph, s: usize, t: usize) -> u64 {
    let m = g.m();
    (0u64..1 << m)
        .filter(|mask| mask >> (s - 1) & 1 == 1 && mask >> (t - 1) & 1 == 0)
        .map(|mask| {
            pairs(m)
                .filter(|&(i, j)| (mask >> (i - 1) & 1) != (mask >> (j - 1) & 1))
                .map(|(i, j)| g.multiplicity(i, j))
                .sum()
        })
        .min()
        .unwrap()
}

/// Same as [`exhaustive_min_cut`] on exact weights.
pub fn exhaustive_min_cut_weight(model: &PinModel, s: usize, t: usize) -> Rational {
    let m = model.m();
    (0u64..1 << m)
        .filter(|mask| mask >> (s - 1) & 1 == 1 && mask >> (t - 1) & 1 == 0)
        .map(|mask| {
            pairs(m)
                .filter(|&(i, j)| (mask >> (i - 1) & 1) != (mask >> (j - 1) & 1))
                .map(|(i, j)| model.weight(i, j).unwrap().clone())
                .sum::<Rational>()
        })
        .min()
        .unwrap()
}

fn spans(class: &[Edge], a: &TerminalSet) -> bool {
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
}

/// Largest number of edge-disjoint connected subgraphs containing `a`,
/// found by trying every labeling of the edges. Only for a handful of edges.
pub fn labeling_oracle(g: &Multigraph, a: &TerminalSet) -> u64 {
    let edges = g.edges();
    assert!(
        edges.len() <= 10,
        "labeling oracle on {} edges",
        edges.len()
    );
    let mut best = 0;
    for k in 1..=edges.len() as u64 {
        // trees need at least |A| - 1 edges each
        if k * (a.len() as u64 - 1) > edges.len() as u64 {
            break;
        }
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
            classes.iter().all(|c| spans(c, a))
        });
        if !found {
            break;
        }
        best = k;
    }
    best
}

/// Independent edge-disjointness and per-tree checks.
pub fn check_packing(g: &Multigraph, p: &TreePacking) {
    let mut seen = std::collections::HashSet::new();
    for t in p.trees() {
        for e in t.edges() {
            assert!(g.contains_edge(e), "{e} not in graph");
            assert!(seen.insert(*e), "{e} used twice");
        }
        let vertices = t.vertices();
        assert_eq!(vertices.len(), t.len() + 1, "not a tree");
        assert!(spans(t.edges(), p.target()), "tree misses the target");
        for v in p.target().members() {
            assert!(vertices.contains(v));
        }
    }
}
