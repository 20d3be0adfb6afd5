//! Partition bounds.
//!
//! Partitions of `{1..m}` are enumerated as restricted-growth strings: the
//! atom of terminal `t` is at most one more than the largest atom used by
//! terminals before `t`. An atom that cannot still pick up a member of the
//! target set is pruned as soon as the remaining terminals run out.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::capacity::DEFAULT_TERMINAL_CAP;
use crate::error::{Error, Result};
use crate::model::{pairs, Multigraph, PinModel, Rational, TerminalSet};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    /// `atom_of[t - 1]` is the atom of terminal `t`; atoms are numbered in
    /// order of first appearance.
    atom_of: Vec<usize>,
    atoms: usize,
}

impl Partition {
    pub fn from_atoms(atom_of: Vec<usize>) -> Result<Self> {
        let mut next = 0;
        for &a in &atom_of {
            if a > next {
                return Err(Error::InvalidModel(format!(
                    "atom labels {atom_of:?} are not in canonical order"
                )));
            }
            if a == next {
                next += 1;
            }
        }
        Ok(Self {
            atom_of,
            atoms: next,
        })
    }

    pub fn atom_count(&self) -> usize {
        self.atoms
    }

    pub fn atom_of(&self, t: usize) -> usize {
        self.atom_of[t - 1]
    }

    /// Atoms as sorted terminal lists, in atom order.
    pub fn atoms(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.atoms];
        for (k, &a) in self.atom_of.iter().enumerate() {
            out[a].push(k + 1);
        }
        out
    }

    pub fn crosses(&self, i: usize, j: usize) -> bool {
        self.atom_of(i) != self.atom_of(j)
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let atoms: Vec<String> = self
            .atoms()
            .iter()
            .map(|a| a.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(""))
            .collect();
        write!(f, "{}", atoms.join("|"))
    }
}

/// Streams every partition with at least two atoms, each meeting the target.
pub struct Partitions {
    m: usize,
    in_target: Vec<bool>,
    /// number of target members strictly after each position
    target_after: Vec<usize>,
    rgs: Vec<Option<usize>>,
    pos: usize,
    done: bool,
}

impl Partitions {
    fn new(m: usize, target: &[bool]) -> Self {
        let mut target_after = vec![0; m];
        for k in (0..m.saturating_sub(1)).rev() {
            target_after[k] = target_after[k + 1] + target[k + 1] as usize;
        }
        let mut rgs = vec![None; m];
        rgs[0] = Some(0);
        Self {
            m,
            in_target: target.to_vec(),
            target_after,
            rgs,
            pos: 1,
            done: m < 2,
        }
    }

    fn prefix_max(&self, upto: usize) -> usize {
        self.rgs[..upto]
            .iter()
            .map(|a| a.unwrap())
            .max()
            .unwrap_or(0)
    }

    fn prefix_feasible(&self, last: usize) -> bool {
        let atoms = self.prefix_max(last + 1) + 1;
        let mut met = vec![false; atoms];
        for k in 0..=last {
            if self.in_target[k] {
                met[self.rgs[k].unwrap()] = true;
            }
        }
        let unmet = met.iter().filter(|&&b| !b).count();
        unmet <= self.target_after[last]
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        loop {
            if self.pos == self.m {
                let atom_of: Vec<usize> = self.rgs.iter().map(|a| a.unwrap()).collect();
                let atoms = atom_of.iter().max().unwrap() + 1;
                self.pos = self.m - 1;
                if atoms >= 2 && self.prefix_feasible(self.m - 1) {
                    return Some(Partition { atom_of, atoms });
                }
                continue;
            }
            let candidate = match self.rgs[self.pos] {
                None => 0,
                Some(v) => v + 1,
            };
            if candidate > self.prefix_max(self.pos) + 1 {
                self.rgs[self.pos] = None;
                if self.pos == 1 {
                    self.done = true;
                    return None;
                }
                self.pos -= 1;
                continue;
            }
            self.rgs[self.pos] = Some(candidate);
            if self.prefix_feasible(self.pos) {
                self.pos += 1;
            }
        }
    }
}

pub fn enumerate_partitions(m: usize, a: &TerminalSet) -> Result<Partitions> {
    enumerate_partitions_capped(m, a, DEFAULT_TERMINAL_CAP)
}

pub fn enumerate_partitions_capped(m: usize, a: &TerminalSet, cap: usize) -> Result<Partitions> {
    if m > cap {
        return Err(Error::SizeLimit {
            what: "terminal count for partition enumeration",
            limit: cap,
            actual: m,
        });
    }
    if a.members().iter().any(|&t| t > m) {
        return Err(Error::InvalidTerminalSet(format!(
            "{a} is not a subset of 1..={m}"
        )));
    }
    let target: Vec<bool> = (1..=m).map(|t| a.contains(t)).collect();
    Ok(Partitions::new(m, &target))
}

/// Every partition with at least two atoms.
pub fn all_partitions(m: usize) -> Result<Partitions> {
    enumerate_partitions(m, &TerminalSet::full(m)?)
}

pub fn crossing_weight(model: &PinModel, p: &Partition) -> Result<Rational> {
    let w = model.exact_weights()?;
    Ok(pairs(model.m())
        .zip(w)
        .filter(|((i, j), w)| p.crosses(*i, *j) && !w.is_zero())
        .map(|(_, w)| w.clone())
        .sum())
}

pub fn crossing_edges(g: &Multigraph, p: &Partition) -> u64 {
    pairs(g.m())
        .zip(g.multiplicities())
        .filter(|((i, j), _)| p.crosses(*i, *j))
        .map(|(_, &e)| e)
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bound {
    pub value: Rational,
    pub partition: Partition,
}

/// `min over partitions of crossing weight / (|P| - 1)`.
pub fn upper_bound(model: &PinModel, a: &TerminalSet) -> Result<Bound> {
    upper_bound_capped(model, a, DEFAULT_TERMINAL_CAP)
}

pub fn upper_bound_capped(model: &PinModel, a: &TerminalSet, cap: usize) -> Result<Bound> {
    model.exact_weights()?;
    let mut best: Option<Bound> = None;
    for p in enumerate_partitions_capped(model.m(), a, cap)? {
        let v =
            crossing_weight(model, &p)? / Rational::from_integer(BigInt::from(p.atom_count() - 1));
        if best.as_ref().is_none_or(|b| v < b.value) {
            best = Some(Bound {
                value: v,
                partition: p,
            });
        }
    }
    best.ok_or_else(|| Error::Internal("no partition meets every terminal of the set".into()))
}

/// The bound with the target set equal to all terminals.
pub fn spanning_rate(model: &PinModel) -> Result<Bound> {
    upper_bound(model, &TerminalSet::full(model.m())?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeCount {
    pub count: u64,
    pub partition: Partition,
}

/// Maximum number of edge-disjoint spanning trees, as
/// `min over partitions of floor(crossing edges / (|P| - 1))`.
pub fn nash_williams_count(g: &Multigraph) -> Result<TreeCount> {
    nash_williams_count_capped(g, DEFAULT_TERMINAL_CAP)
}

pub fn nash_williams_count_capped(g: &Multigraph, cap: usize) -> Result<TreeCount> {
    let full = TerminalSet::full(g.m())?;
    let mut best: Option<TreeCount> = None;
    for p in enumerate_partitions_capped(g.m(), &full, cap)? {
        let c = crossing_edges(g, &p) / (p.atom_count() as u64 - 1);
        if best.as_ref().is_none_or(|b| c < b.count) {
            best = Some(TreeCount {
                count: c,
                partition: p,
            });
        }
    }
    best.ok_or_else(|| Error::Internal("no partition with two atoms".into()))
}
