//! Dense tableau simplex over exact rationals with Bland's rule.
//!
//! Solves `min c·x` subject to `A x = b`, `x >= 0`. When no starting basis is
//! supplied a phase-one problem with artificial columns is solved first.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::model::Rational;

#[derive(Debug, Clone)]
pub struct StandardLp {
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal {
        x: Vec<Rational>,
        value: Rational,
        basis: Vec<usize>,
    },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    pivots: usize,
}

enum Step {
    Optimal,
    Unbounded,
    Pivoted,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        debug_assert!(!p.is_zero());
        if !p.is_one() {
            let inv = p.recip();
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
            self.rhs[r] *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for k in 0..self.rows.len() {
            if k == r {
                continue;
            }
            let f = self.rows[k][col].clone();
            if f.is_zero() {
                continue;
            }
            for (v, pv) in self.rows[k].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.rhs[k] -= &f * &pivot_rhs;
        }
        self.basis[r] = col;
        self.pivots += 1;
    }

    /// Reduced costs `c_j - c_B B^-1 A_j` for the allowed columns.
    fn reduced_costs(&self, c: &[Rational], allowed: usize) -> Vec<Rational> {
        let mut d: Vec<Rational> = c[..allowed].to_vec();
        for (row, &bv) in self.rows.iter().zip(&self.basis) {
            let cb = &c[bv];
            if cb.is_zero() {
                continue;
            }
            for (dj, a) in d.iter_mut().zip(row) {
                if !a.is_zero() {
                    *dj -= cb * a;
                }
            }
        }
        d
    }

    fn step(&mut self, c: &[Rational], allowed: usize) -> Step {
        let d = self.reduced_costs(c, allowed);
        // Bland: lowest-index improving column
        let Some(col) = (0..allowed).find(|&j| d[j].is_negative()) else {
            return Step::Optimal;
        };
        let mut best: Option<(usize, Rational)> = None;
        for r in 0..self.rows.len() {
            let a = &self.rows[r][col];
            if !a.is_positive() {
                continue;
            }
            let ratio = &self.rhs[r] / a;
            let better = match &best {
                None => true,
                Some((br, bratio)) => {
                    ratio < *bratio || (ratio == *bratio && self.basis[r] < self.basis[*br])
                }
            };
            if better {
                best = Some((r, ratio));
            }
        }
        match best {
            None => Step::Unbounded,
            Some((r, _)) => {
                self.pivot(r, col);
                Step::Pivoted
            }
        }
    }

    fn run(&mut self, c: &[Rational], allowed: usize) -> Result<bool> {
        // Bland's rule terminates; the cap only guards against a logic error.
        let limit = 1_000_000;
        loop {
            match self.step(c, allowed) {
                Step::Optimal => return Ok(true),
                Step::Unbounded => return Ok(false),
                Step::Pivoted => {
                    if self.pivots > limit {
                        return Err(Error::Internal("simplex pivot limit reached".into()));
                    }
                }
            }
        }
    }

    fn solution(&self, n: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); n];
        for (r, &bv) in self.basis.iter().enumerate() {
            if bv < n {
                x[bv] = self.rhs[r].clone();
            }
        }
        x
    }
}

fn validate(lp: &StandardLp) -> Result<(usize, usize)> {
    let m = lp.b.len();
    let n = lp.c.len();
    if lp.a.len() != m || lp.a.iter().any(|row| row.len() != n) {
        return Err(Error::Internal("LP dimensions are inconsistent".into()));
    }
    Ok((m, n))
}

/// Minimizes `c·x` starting from a known feasible basis.
///
/// `basis[r]` names the column that is basic in row `r`; the basic solution
/// must be nonnegative.
pub fn minimize_from_basis(lp: &StandardLp, basis: &[usize]) -> Result<LpOutcome> {
    let (m, n) = validate(lp)?;
    if basis.len() != m || basis.iter().any(|&j| j >= n) {
        return Err(Error::Internal("starting basis has wrong shape".into()));
    }
    let mut t = Tableau {
        rows: lp.a.clone(),
        rhs: lp.b.clone(),
        basis: vec![usize::MAX; m],
        pivots: 0,
    };
    for (r, &col) in basis.iter().enumerate() {
        if t.rows[r][col].is_zero() {
            return Err(Error::Internal("starting basis is singular".into()));
        }
        t.pivot(r, col);
    }
    if t.rhs.iter().any(Signed::is_negative) {
        return Err(Error::Internal("starting basis is infeasible".into()));
    }
    finish(t, &lp.c, n)
}

fn finish(mut t: Tableau, c: &[Rational], n: usize) -> Result<LpOutcome> {
    if !t.run(c, n)? {
        return Ok(LpOutcome::Unbounded);
    }
    let x = t.solution(n);
    let value = x
        .iter()
        .zip(c)
        .filter(|(v, _)| !v.is_zero())
        .fold(Rational::zero(), |acc, (v, cj)| acc + v * cj);
    Ok(LpOutcome::Optimal {
        x,
        value,
        basis: t.basis,
    })
}

/// Two-phase simplex.
pub fn minimize(lp: &StandardLp) -> Result<LpOutcome> {
    let (m, n) = validate(lp)?;
    let mut rows = lp.a.clone();
    let mut rhs = lp.b.clone();
    for (row, b) in rows.iter_mut().zip(rhs.iter_mut()) {
        if b.is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            *b = -b.clone();
        }
    }
    for (r, row) in rows.iter_mut().enumerate() {
        row.extend((0..m).map(|k| {
            if k == r {
                Rational::one()
            } else {
                Rational::zero()
            }
        }));
    }
    let mut t = Tableau {
        rows,
        rhs,
        basis: (n..n + m).collect(),
        pivots: 0,
    };
    let mut phase1 = vec![Rational::zero(); n + m];
    for v in &mut phase1[n..] {
        *v = Rational::one();
    }
    t.run(&phase1, n + m)?;
    let infeas: Rational = t
        .basis
        .iter()
        .zip(&t.rhs)
        .filter(|(&bv, _)| bv >= n)
        .map(|(_, v)| v.clone())
        .sum();
    if infeas.is_positive() {
        return Ok(LpOutcome::Infeasible);
    }
    // drive remaining artificials out; rows with no original support are redundant
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= n {
            match (0..n).find(|&j| !t.rows[r][j].is_zero()) {
                Some(col) => t.pivot(r, col),
                None => {
                    t.rows.remove(r);
                    t.rhs.remove(r);
                    t.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }
    for row in t.rows.iter_mut() {
        row.truncate(n);
    }
    finish(t, &lp.c, n)
}
