//! Secret-key capacity as a minimization over fractional subset weights.
//!
//! For a terminal set `A`, the family `B(A)` holds every nonempty subset of
//! terminals that does not contain all of `A`. A weight assignment puts
//! `lambda_B` in `[0, 1]` on each member so that the weights of the subsets
//! containing any fixed terminal sum to one. The capacity is the minimum over
//! such assignments of `sum_{i<j} c_ij(lambda) I_ij`, where `c_ij` sums the
//! weights of subsets containing `i` but not `j`.

use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{pairs, PinModel, Rational, TerminalSet};
use crate::simplex::{minimize_from_basis, LpOutcome, StandardLp};

/// Default cap on `m` for routines that enumerate `2^m` subsets.
pub const DEFAULT_TERMINAL_CAP: usize = 12;

/// Tolerance for float-mode comparisons of the two objective forms.
pub const OBJECTIVE_FORM_TOLERANCE: f64 = 1e-9;

fn contains(mask: u64, t: usize) -> bool {
    (mask >> (t - 1)) & 1 == 1
}

fn check_set(m: usize, a: &TerminalSet) -> Result<()> {
    match a.members().last() {
        Some(&t) if t <= m => Ok(()),
        _ => Err(Error::InvalidTerminalSet(format!(
            "{a} is not a subset of 1..={m}"
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetFamily {
    m: usize,
    target: u64,
    subsets: Vec<u64>,
    by_terminal: Vec<Vec<usize>>,
}

impl SubsetFamily {
    pub fn m(&self) -> usize {
        self.m
    }

    /// Members as bitmasks (bit `t - 1` for terminal `t`), ascending.
    pub fn subsets(&self) -> &[u64] {
        &self.subsets
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    /// Indices of the members containing terminal `t`.
    pub fn containing(&self, t: usize) -> &[usize] {
        &self.by_terminal[t - 1]
    }

    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.subsets.binary_search(&mask).ok()
    }

    /// Terminals of member `k`, ascending.
    pub fn members_of(&self, k: usize) -> Vec<usize> {
        let mask = self.subsets[k];
        (1..=self.m).filter(|&t| contains(mask, t)).collect()
    }
}

pub fn enumerate_family(m: usize, a: &TerminalSet) -> Result<SubsetFamily> {
    enumerate_family_capped(m, a, DEFAULT_TERMINAL_CAP)
}

pub fn enumerate_family_capped(m: usize, a: &TerminalSet, cap: usize) -> Result<SubsetFamily> {
    if m > cap {
        return Err(Error::SizeLimit {
            what: "terminal count for subset enumeration",
            limit: cap,
            actual: m,
        });
    }
    check_set(m, a)?;
    let target = a.mask();
    let full = (1u64 << m) - 1;
    let subsets: Vec<u64> = (1..full).filter(|&b| b & target != target).collect();
    let mut by_terminal = vec![Vec::new(); m];
    for (k, &b) in subsets.iter().enumerate() {
        for t in 1..=m {
            if contains(b, t) {
                by_terminal[t - 1].push(k);
            }
        }
    }
    Ok(SubsetFamily {
        m,
        target,
        subsets,
        by_terminal,
    })
}

/// Fractional weights on a subset family satisfying the per-terminal
/// sum-to-one constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightAssignment {
    family: SubsetFamily,
    weights: Vec<Rational>,
}

impl WeightAssignment {
    pub fn new(family: SubsetFamily, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != family.len() {
            return Err(Error::InvalidAssignment(format!(
                "{} weights for a family of {}",
                weights.len(),
                family.len()
            )));
        }
        if let Some((k, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| w.is_negative() || **w > Rational::one())
        {
            return Err(Error::InvalidAssignment(format!(
                "weight {w} of subset {:?} outside [0, 1]",
                family.members_of(k)
            )));
        }
        for t in 1..=family.m {
            let s: Rational = family.containing(t).iter().map(|&k| &weights[k]).sum();
            if !s.is_one() {
                return Err(Error::InvalidAssignment(format!(
                    "weights of subsets containing terminal {t} sum to {s}"
                )));
            }
        }
        Ok(Self { family, weights })
    }

    /// Weight one on every singleton, zero elsewhere.
    pub fn singletons(family: SubsetFamily) -> Self {
        let mut weights = vec![Rational::zero(); family.len()];
        for t in 1..=family.m {
            let k = family
                .index_of(1 << (t - 1))
                .expect("singletons always belong to the family");
            weights[k] = Rational::one();
        }
        Self { family, weights }
    }

    pub fn family(&self) -> &SubsetFamily {
        &self.family
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// `(terminals of B, lambda_B)` for every `B` with positive weight.
    pub fn support(&self) -> Vec<(Vec<usize>, Rational)> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(k, w)| (self.family.members_of(k), w.clone()))
            .collect()
    }

    /// `c_ij = sum of lambda_B over B with i in B, j not in B`, for `i < j`.
    pub fn pair_coefficients(&self) -> Vec<((usize, usize), Rational)> {
        pairs(self.family.m)
            .map(|(i, j)| (self.coefficient(i, j), (i, j)))
            .map(|(c, p)| (p, c))
            .collect()
    }

    /// Sum of weights of subsets containing `i` but not `j`.
    pub fn coefficient(&self, i: usize, j: usize) -> Rational {
        self.family
            .containing(i)
            .iter()
            .filter(|&&k| !contains(self.family.subsets[k], j))
            .map(|&k| &self.weights[k])
            .sum()
    }

    fn check_for(&self, m: usize, a: &TerminalSet) -> Result<()> {
        if self.family.m != m || self.family.target != a.mask() {
            return Err(Error::InvalidAssignment(format!(
                "assignment was built for a different family than m={m}, A={a}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityResult {
    pub value: Rational,
    pub lambda: WeightAssignment,
    pub coefficients: Vec<((usize, usize), Rational)>,
}

/// The capacity objective at `lambda`, exactly.
pub fn objective_mi(
    model: &PinModel,
    a: &TerminalSet,
    lambda: &WeightAssignment,
) -> Result<Rational> {
    lambda.check_for(model.m(), a)?;
    let w = model.exact_weights()?;
    Ok(pairs(model.m())
        .zip(w)
        .filter(|(_, w)| !w.is_zero())
        .map(|((i, j), w)| lambda.coefficient(i, j) * w)
        .sum())
}

/// The capacity objective at `lambda` using float weights.
pub fn objective_mi_float(
    model: &PinModel,
    a: &TerminalSet,
    lambda: &WeightAssignment,
) -> Result<f64> {
    lambda.check_for(model.m(), a)?;
    Ok(pairs(model.m())
        .zip(model.float_weights())
        .map(|((i, j), w)| crate::model::rational_to_f64(&lambda.coefficient(i, j)) * w)
        .sum())
}

fn subset_cost(mask: u64, m: usize, weights: &[Rational]) -> Rational {
    pairs(m)
        .zip(weights)
        .filter(|((i, j), w)| contains(mask, *i) && !contains(mask, *j) && !w.is_zero())
        .map(|(_, w)| w.clone())
        .sum()
}

fn family_lp(family: &SubsetFamily, costs: Vec<Rational>) -> StandardLp {
    let a = (1..=family.m)
        .map(|t| {
            family
                .subsets
                .iter()
                .map(|&b| {
                    if contains(b, t) {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    StandardLp {
        a,
        b: vec![Rational::one(); family.m],
        c: costs,
    }
}

fn solve_family(family: &SubsetFamily, costs: Vec<Rational>) -> Result<WeightAssignment> {
    let basis: Vec<usize> = (1..=family.m)
        .map(|t| family.index_of(1 << (t - 1)).expect("singleton present"))
        .collect();
    let lp = family_lp(family, costs);
    match minimize_from_basis(&lp, &basis)? {
        LpOutcome::Optimal { x, .. } => WeightAssignment::new(family.clone(), x)
            .map_err(|e| Error::Internal(format!("simplex returned an infeasible point: {e}"))),
        LpOutcome::Infeasible => Err(Error::Internal(
            "simplex reported an infeasible weight polytope".into(),
        )),
        LpOutcome::Unbounded => Err(Error::Internal(
            "simplex reported an unbounded weight polytope".into(),
        )),
    }
}

pub fn solve_capacity(model: &PinModel, a: &TerminalSet) -> Result<CapacityResult> {
    solve_capacity_capped(model, a, DEFAULT_TERMINAL_CAP)
}

pub fn solve_capacity_capped(
    model: &PinModel,
    a: &TerminalSet,
    cap: usize,
) -> Result<CapacityResult> {
    let w = model.exact_weights()?;
    let family = enumerate_family_capped(model.m(), a, cap)?;
    let costs = family
        .subsets
        .iter()
        .map(|&b| subset_cost(b, model.m(), w))
        .collect();
    let lambda = solve_family(&family, costs)?;
    let value = objective_mi(model, a, &lambda)?;
    let coefficients = lambda.pair_coefficients();
    Ok(CapacityResult {
        value,
        lambda,
        coefficients,
    })
}

/// A vertex of the weight polytope, found by minimizing a random rational
/// objective. Every returned assignment is exactly feasible.
pub fn random_vertex<R: Rng + ?Sized>(
    family: &SubsetFamily,
    rng: &mut R,
) -> Result<WeightAssignment> {
    let costs = (0..family.len())
        .map(|_| {
            Rational::new(
                rng.gen_range(-1000i64..=1000).into(),
                rng.gen_range(1i64..=16).into(),
            )
        })
        .collect();
    solve_family(family, costs)
}

/// `H(X_1..X_m) - sum_B lambda_B H(X_B | X_B^c)` from the pair pmfs.
pub fn objective_entropy(
    model: &PinModel,
    a: &TerminalSet,
    lambda: &WeightAssignment,
) -> Result<f64> {
    lambda.check_for(model.m(), a)?;
    if !model.has_all_pmfs() {
        return Err(Error::UnsupportedMode(
            "the entropy form of the objective needs a pmf for every pair".into(),
        ));
    }
    let m = model.m();
    let pmf = |i, j| model.pmf(i, j).expect("checked above");
    let total: f64 = pairs(m).map(|(i, j)| pmf(i, j).joint_entropy()).sum();
    let mut weighted = 0.0;
    for (k, w) in lambda.weights.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        let b = lambda.family.subsets[k];
        let mut h = 0.0;
        for (i, j) in pairs(m) {
            let p = pmf(i, j);
            match (contains(b, i), contains(b, j)) {
                (true, true) => h += p.joint_entropy(),
                // i in B sees X_ij, B^c holds X_ji
                (true, false) => h += p.row_given_col(),
                (false, true) => h += p.col_given_row(),
                (false, false) => {}
            }
        }
        weighted += crate::model::rational_to_f64(w) * h;
    }
    Ok(total - weighted)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveFormReport {
    pub trials: usize,
    pub max_discrepancy: f64,
    pub tolerance: f64,
}

impl ObjectiveFormReport {
    pub fn passed(&self) -> bool {
        self.max_discrepancy <= self.tolerance
    }
}

/// Compares the mutual-information and entropy forms of the objective on
/// `trials` random vertices.
pub fn check_objective_forms<R: Rng + ?Sized>(
    model: &PinModel,
    a: &TerminalSet,
    trials: usize,
    rng: &mut R,
) -> Result<ObjectiveFormReport> {
    let family = enumerate_family(model.m(), a)?;
    let mut max_discrepancy: f64 = 0.0;
    for _ in 0..trials {
        let lambda = random_vertex(&family, rng)?;
        let lhs = objective_entropy(model, a, &lambda)?;
        let rhs = objective_mi_float(model, a, &lambda)?;
        max_discrepancy = max_discrepancy.max((lhs - rhs).abs());
    }
    Ok(ObjectiveFormReport {
        trials,
        max_discrepancy,
        tolerance: OBJECTIVE_FORM_TOLERANCE,
    })
}
