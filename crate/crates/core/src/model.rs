//! The pairwise independent network model and its scaled multigraphs.
//!
//! Terminals are labelled `1..=m`. Every unordered pair `(i, j)` with
//! `i < j` carries a nonnegative weight, the mutual information between the
//! reciprocal observations `X_ij` (held by `i`) and `X_ji` (held by `j`).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Largest terminal count accepted by any bitmask-based routine.
pub const MAX_TERMINALS: usize = 63;

/// Tolerance used when checking that a pmf sums to one.
pub const PMF_SUM_TOLERANCE: f64 = 1e-12;

/// Tolerance between a user-supplied rational weight and the mutual
/// information of the pmf supplied for the same pair.
pub const WEIGHT_MATCH_TOLERANCE: f64 = 1e-9;

/// Number of unordered pairs on `m` terminals.
pub fn pair_count(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

/// Position of the pair `(i, j)`, `1 <= i < j <= m`, in lexicographic order.
pub fn pair_index(m: usize, i: usize, j: usize) -> usize {
    debug_assert!(1 <= i && i < j && j <= m);
    let i0 = i - 1;
    // pairs before row i0: sum_{r < i0} (m - 1 - r)
    i0 * (2 * m - i0 - 1) / 2 + (j - i - 1)
}

/// All pairs `(i, j)` with `1 <= i < j <= m`, in lexicographic order.
pub fn pairs(m: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=m).flat_map(move |i| (i + 1..=m).map(move |j| (i, j)))
}

fn ordered(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

/// Renders a rational as `p/q`, or as a bare integer when `q = 1`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Parses `"p/q"` or an integer literal.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p
                .trim()
                .parse()
                .map_err(|_| Error::InvalidModel(format!("bad numerator in {s:?}")))?;
            let q: BigInt = q
                .trim()
                .parse()
                .map_err(|_| Error::InvalidModel(format!("bad denominator in {s:?}")))?;
            if q.is_zero() {
                return Err(Error::InvalidModel(format!("zero denominator in {s:?}")));
            }
            Rational::new(p, q)
        }
        None => Rational::from_integer(
            s.parse()
                .map_err(|_| Error::InvalidModel(format!("not a rational: {s:?}")))?,
        ),
    };
    Ok(parsed)
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// A sorted set of terminals with at least two members.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TerminalSet {
    members: Vec<usize>,
}

impl TerminalSet {
    pub fn new(m: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidTerminalSet(format!(
                "terminal {} listed twice",
                w[0]
            )));
        }
        if let Some(&t) = members.iter().find(|&&t| t == 0 || t > m) {
            return Err(Error::InvalidTerminalSet(format!(
                "terminal {t} outside 1..={m}"
            )));
        }
        if members.len() < 2 {
            return Err(Error::InvalidTerminalSet(format!(
                "need at least two terminals, got {}",
                members.len()
            )));
        }
        Ok(Self { members })
    }

    /// The full terminal set `{1, ..., m}`.
    pub fn full(m: usize) -> Result<Self> {
        Self::new(m, 1..=m)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, t: usize) -> bool {
        self.members.binary_search(&t).is_ok()
    }

    /// Bit `t - 1` set for every member `t`.
    pub fn mask(&self) -> u64 {
        self.members.iter().fold(0, |acc, &t| acc | 1 << (t - 1))
    }

    pub fn is_full(&self, m: usize) -> bool {
        self.members.len() == m
    }
}

impl fmt::Display for TerminalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members.iter().map(|t| t.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Joint pmf of a reciprocal pair. Rows index the lower terminal's
/// observation, columns the higher terminal's.
#[derive(Debug, Clone, PartialEq)]
pub struct PairPmf {
    rows: usize,
    cols: usize,
    probs: Vec<f64>,
}

fn entropy_of(ps: impl IntoIterator<Item = f64>) -> f64 {
    ps.into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

impl PairPmf {
    pub fn new(rows: usize, cols: usize, probs: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidModel("pmf alphabets must be nonempty".into()));
        }
        if probs.len() != rows * cols {
            return Err(Error::InvalidModel(format!(
                "pmf has {} entries, expected {rows}x{cols}",
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidModel(format!("pmf entry {p} is negative")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PMF_SUM_TOLERANCE {
            return Err(Error::InvalidModel(format!("pmf sums to {total}, not 1")));
        }
        Ok(Self { rows, cols, probs })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.probs[r * self.cols + c]
    }

    pub fn row_marginal(&self) -> Vec<f64> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c)).sum())
            .collect()
    }

    pub fn col_marginal(&self) -> Vec<f64> {
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self.get(r, c)).sum())
            .collect()
    }

    /// `H(X_ij, X_ji)`.
    pub fn joint_entropy(&self) -> f64 {
        entropy_of(self.probs.iter().copied())
    }

    /// `H(X_ij)`, the lower terminal's component.
    pub fn row_entropy(&self) -> f64 {
        entropy_of(self.row_marginal())
    }

    /// `H(X_ji)`, the higher terminal's component.
    pub fn col_entropy(&self) -> f64 {
        entropy_of(self.col_marginal())
    }

    /// `H(X_ij | X_ji)`.
    pub fn row_given_col(&self) -> f64 {
        self.joint_entropy() - self.col_entropy()
    }

    /// `H(X_ji | X_ij)`.
    pub fn col_given_row(&self) -> f64 {
        self.joint_entropy() - self.row_entropy()
    }
}

/// Mutual information in bits, with `0 log 0 = 0`.
pub fn mutual_information(p: &PairPmf) -> f64 {
    let pr = p.row_marginal();
    let pc = p.col_marginal();
    let mut mi = 0.0;
    for (r, px) in pr.iter().enumerate() {
        for (c, py) in pc.iter().enumerate() {
            let pxy = p.get(r, c);
            if pxy > 0.0 {
                mi += pxy * (pxy / (px * py)).log2();
            }
        }
    }
    mi.max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Rational weights; all capacity and packing results are exact.
    Exact,
    /// Weights derived from pmfs; results carry a float tolerance.
    Float,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PinModel {
    m: usize,
    exact: Option<Vec<Rational>>,
    approx: Vec<f64>,
    pmfs: Vec<Option<PairPmf>>,
}

fn check_pair(m: usize, i: usize, j: usize) -> Result<(usize, usize)> {
    if i == j {
        return Err(Error::InvalidModel(format!("self-pair ({i},{i})")));
    }
    let (i, j) = ordered(i, j);
    if i == 0 || j > m {
        return Err(Error::InvalidModel(format!(
            "pair ({i},{j}) outside terminals 1..={m}"
        )));
    }
    Ok((i, j))
}

impl PinModel {
    /// Builds a model from explicit weights and optional pmfs.
    ///
    /// Pairs without a weight default to zero. If a pmf is given for a pair
    /// that also has a weight, the two must agree within
    /// [`WEIGHT_MATCH_TOLERANCE`]. If any pmf has no accompanying weight the
    /// model is in float mode and every weight comes from the pmfs.
    pub fn new(
        m: usize,
        weights: impl IntoIterator<Item = (usize, usize, Rational)>,
        pmfs: impl IntoIterator<Item = (usize, usize, PairPmf)>,
    ) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidModel(format!(
                "need m >= 2 terminals, got {m}"
            )));
        }
        if m > MAX_TERMINALS {
            return Err(Error::SizeLimit {
                what: "terminal count",
                limit: MAX_TERMINALS,
                actual: m,
            });
        }
        let np = pair_count(m);
        let mut given: Vec<Option<Rational>> = vec![None; np];
        for (i, j, w) in weights {
            let (i, j) = check_pair(m, i, j)?;
            if w.is_negative() {
                return Err(Error::InvalidModel(format!(
                    "weight of ({i},{j}) is negative: {w}"
                )));
            }
            let slot = &mut given[pair_index(m, i, j)];
            if slot.is_some() {
                return Err(Error::InvalidModel(format!("pair ({i},{j}) given twice")));
            }
            *slot = Some(w);
        }
        let mut pmf_slots: Vec<Option<PairPmf>> = vec![None; np];
        for (i, j, p) in pmfs {
            if i == j {
                return Err(Error::InvalidModel(format!("self-pair ({i},{i})")));
            }
            // a pmf listed as (j, i) is stored transposed so rows stay with
            // the lower terminal
            let p = if i > j { p.transposed() } else { p };
            let (i, j) = check_pair(m, i, j)?;
            let slot = &mut pmf_slots[pair_index(m, i, j)];
            if slot.is_some() {
                return Err(Error::InvalidModel(format!(
                    "pmf for ({i},{j}) given twice"
                )));
            }
            *slot = Some(p);
        }

        let mut float_mode = false;
        for ((i, j), (w, p)) in pairs(m).zip(given.iter().zip(&pmf_slots)) {
            match (w, p) {
                (Some(w), Some(p)) => {
                    let mi = mutual_information(p);
                    let wf = rational_to_f64(w);
                    if (mi - wf).abs() > WEIGHT_MATCH_TOLERANCE {
                        return Err(Error::InvalidModel(format!(
                            "weight {w} of ({i},{j}) disagrees with pmf mutual information {mi}"
                        )));
                    }
                }
                (None, Some(_)) => float_mode = true,
                _ => {}
            }
        }

        let approx: Vec<f64> = given
            .iter()
            .zip(&pmf_slots)
            .map(|(w, p)| match (w, p) {
                (_, Some(p)) if float_mode => mutual_information(p),
                (Some(w), _) => rational_to_f64(w),
                (None, Some(p)) => mutual_information(p),
                (None, None) => 0.0,
            })
            .collect();
        let exact = if float_mode {
            None
        } else {
            Some(
                given
                    .into_iter()
                    .map(|w| w.unwrap_or_else(Rational::zero))
                    .collect(),
            )
        };
        Ok(Self {
            m,
            exact,
            approx,
            pmfs: pmf_slots,
        })
    }

    /// Exact-mode model from `(i, j, weight)` triples.
    pub fn exact(
        m: usize,
        weights: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Result<Self> {
        Self::new(m, weights, std::iter::empty())
    }

    /// Float-mode model whose weights are the mutual informations of `pmfs`.
    pub fn from_pmfs(
        m: usize,
        pmfs: impl IntoIterator<Item = (usize, usize, PairPmf)>,
    ) -> Result<Self> {
        Self::new(m, std::iter::empty(), pmfs)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn mode(&self) -> Mode {
        if self.exact.is_some() {
            Mode::Exact
        } else {
            Mode::Float
        }
    }

    /// Per-pair exact weights in lexicographic pair order.
    pub fn exact_weights(&self) -> Result<&[Rational]> {
        self.exact.as_deref().ok_or_else(|| {
            Error::UnsupportedMode("operation requires exact rational weights".into())
        })
    }

    pub fn weight(&self, i: usize, j: usize) -> Option<&Rational> {
        let (i, j) = ordered(i, j);
        self.exact.as_ref().map(|w| &w[pair_index(self.m, i, j)])
    }

    /// Per-pair weights as floats in lexicographic pair order.
    pub fn float_weights(&self) -> &[f64] {
        &self.approx
    }

    pub fn weight_f64(&self, i: usize, j: usize) -> f64 {
        let (i, j) = ordered(i, j);
        self.approx[pair_index(self.m, i, j)]
    }

    pub fn pmf(&self, i: usize, j: usize) -> Option<&PairPmf> {
        let (i, j) = ordered(i, j);
        self.pmfs[pair_index(self.m, i, j)].as_ref()
    }

    /// An exact-mode copy whose weights are the float weights converted
    /// without rounding (every finite `f64` is a dyadic rational). Exact
    /// models are returned unchanged.
    pub fn to_exact(&self) -> Self {
        if self.exact.is_some() {
            return self.clone();
        }
        let exact = self
            .approx
            .iter()
            .map(|&w| Rational::from_float(w).expect("weights are finite"))
            .collect();
        PinModel {
            m: self.m,
            exact: Some(exact),
            approx: self.approx.clone(),
            pmfs: self.pmfs.clone(),
        }
    }

    pub fn has_all_pmfs(&self) -> bool {
        self.pmfs.iter().all(Option::is_some)
    }

    /// The same model with every exact weight multiplied by `t > 0`.
    pub fn scaled(&self, t: &Rational) -> Result<Self> {
        let w = self.exact_weights()?;
        if !t.is_positive() {
            return Err(Error::InvalidModel(format!(
                "scale factor {t} must be positive"
            )));
        }
        let weights = pairs(self.m)
            .zip(w)
            .map(|((i, j), w)| (i, j, w * t))
            .collect::<Vec<_>>();
        Self::exact(self.m, weights)
    }

    /// Least `n0` with `n0 * I_ij` integral for every pair.
    pub fn base_scale(&self) -> Result<u64> {
        let w = self.exact_weights()?;
        let l = w.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        l.to_u64().ok_or(Error::SizeLimit {
            what: "base scale",
            limit: u64::MAX as usize,
            actual: usize::MAX,
        })
    }

    /// The multigraph `G^(n)` with `e_ij = n * I_ij`.
    pub fn realize_multigraph(&self, n: u64) -> Result<Multigraph> {
        let base = self.base_scale()?;
        if n == 0 || !n.is_multiple_of(base) {
            return Err(Error::InvalidScale { n, base });
        }
        let scale = Rational::from_integer(BigInt::from(n));
        let mut mult = Vec::with_capacity(pair_count(self.m));
        for w in self.exact_weights()? {
            let e = w * &scale;
            debug_assert!(e.is_integer());
            let e = e.to_integer().to_u64().ok_or_else(|| {
                Error::InvalidModel(format!("multiplicity {e} does not fit in 64 bits"))
            })?;
            mult.push(e);
        }
        Ok(Multigraph { m: self.m, mult })
    }
}

impl PairPmf {
    pub fn transposed(&self) -> Self {
        let mut probs = Vec::with_capacity(self.probs.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                probs.push(self.get(r, c));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            probs,
        }
    }
}

/// One parallel edge: the pair `i < j` and its copy index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub copy: u64,
}

impl Edge {
    pub fn new(i: usize, j: usize, copy: u64) -> Self {
        let (i, j) = ordered(i, j);
        Self { i, j, copy }
    }

    pub fn touches(&self, v: usize) -> bool {
        self.i == v || self.j == v
    }

    /// The endpoint opposite `v`.
    pub fn other(&self, v: usize) -> usize {
        if self.i == v {
            self.j
        } else {
            self.i
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.i, self.j, self.copy)
    }
}

/// Undirected multigraph on terminals `1..=m` without self-loops.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multigraph {
    m: usize,
    mult: Vec<u64>,
}

impl Multigraph {
    pub fn new(
        m: usize,
        multiplicities: impl IntoIterator<Item = (usize, usize, u64)>,
    ) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidModel(format!(
                "need m >= 2 vertices, got {m}"
            )));
        }
        if m > MAX_TERMINALS {
            return Err(Error::SizeLimit {
                what: "vertex count",
                limit: MAX_TERMINALS,
                actual: m,
            });
        }
        let mut mult = vec![0; pair_count(m)];
        for (i, j, e) in multiplicities {
            let (i, j) = check_pair(m, i, j)?;
            mult[pair_index(m, i, j)] += e;
        }
        Ok(Self { m, mult })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn multiplicity(&self, i: usize, j: usize) -> u64 {
        if i == j {
            return 0;
        }
        let (i, j) = ordered(i, j);
        self.mult[pair_index(self.m, i, j)]
    }

    /// Multiplicities in lexicographic pair order.
    pub fn multiplicities(&self) -> &[u64] {
        &self.mult
    }

    pub fn edge_count(&self) -> u64 {
        self.mult.iter().sum()
    }

    /// Every parallel edge in canonical order: sorted pair, then copy index.
    pub fn edges(&self) -> Vec<Edge> {
        pairs(self.m)
            .zip(&self.mult)
            .flat_map(|((i, j), &e)| (0..e).map(move |c| Edge { i, j, copy: c }))
            .collect()
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        e.i >= 1 && e.i < e.j && e.j <= self.m && e.copy < self.multiplicity(e.i, e.j)
    }

    /// Number of parallel edges with exactly one endpoint in `mask`.
    pub fn cut_size(&self, mask: u64) -> u64 {
        pairs(self.m)
            .zip(&self.mult)
            .filter(|((i, j), _)| ((mask >> (i - 1)) & 1) != ((mask >> (j - 1)) & 1))
            .map(|(_, &e)| e)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    #[test]
    fn pair_index_is_lexicographic() {
        for m in 2..8 {
            for (k, (i, j)) in pairs(m).enumerate() {
                assert_eq!(pair_index(m, i, j), k);
            }
            assert_eq!(pairs(m).count(), pair_count(m));
        }
    }

    #[test]
    fn mutual_information_examples() {
        let corr = PairPmf::new(2, 2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!((mutual_information(&corr) - 1.0).abs() < 1e-15);
        let indep = PairPmf::new(2, 2, vec![0.25; 4]).unwrap();
        assert!(mutual_information(&indep).abs() < 1e-15);
        // 1 - h(1/4), h(1/4) = 2 - (3/4) log2 3
        let bsc = PairPmf::new(2, 2, vec![3.0 / 8.0, 1.0 / 8.0, 1.0 / 8.0, 3.0 / 8.0]).unwrap();
        let h = -(0.25f64 * 0.25f64.log2() + 0.75 * 0.75f64.log2());
        assert!((h - 0.811_278_1).abs() < 1e-7);
        assert!((mutual_information(&bsc) - (1.0 - h)).abs() < 1e-12);
        assert!((mutual_information(&bsc) - 0.188_721_9).abs() < 1e-7);
    }

    #[test]
    fn pmf_validation() {
        assert!(PairPmf::new(2, 2, vec![0.5, 0.5, 0.0]).is_err());
        assert!(PairPmf::new(1, 2, vec![0.6, 0.6]).is_err());
        assert!(PairPmf::new(1, 2, vec![1.5, -0.5]).is_err());
        assert!(PairPmf::new(0, 2, vec![]).is_err());
    }

    #[test]
    fn base_scale_examples() {
        let ints = PinModel::exact(3, [(1, 2, r(2, 1)), (2, 3, r(5, 1))]).unwrap();
        assert_eq!(ints.base_scale().unwrap(), 1);
        let half = PinModel::exact(2, [(1, 2, r(3, 2))]).unwrap();
        assert_eq!(half.base_scale().unwrap(), 2);
        let mixed = PinModel::exact(3, [(1, 2, r(1, 2)), (1, 3, r(1, 3))]).unwrap();
        assert_eq!(mixed.base_scale().unwrap(), 6);
    }

    #[test]
    fn realize_examples() {
        let tri = PinModel::exact(3, [(1, 2, r(1, 1)), (1, 3, r(1, 1)), (2, 3, r(1, 1))]).unwrap();
        let g = tri.realize_multigraph(2).unwrap();
        assert_eq!(g.multiplicities(), &[2, 2, 2]);

        let half = PinModel::exact(2, [(1, 2, r(3, 2))]).unwrap();
        assert_eq!(half.realize_multigraph(2).unwrap().multiplicity(1, 2), 3);
        assert_eq!(
            half.realize_multigraph(3),
            Err(Error::InvalidScale { n: 3, base: 2 })
        );

        let mixed = PinModel::exact(3, [(1, 2, r(1, 2)), (1, 3, r(1, 3))]).unwrap();
        let g = mixed.realize_multigraph(6).unwrap();
        assert_eq!(g.multiplicity(1, 2), 3);
        assert_eq!(g.multiplicity(1, 3), 2);
        assert_eq!(g.multiplicity(2, 3), 0);
    }

    #[test]
    fn float_mode_has_no_base_scale() {
        let corr = PairPmf::new(2, 2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        let model = PinModel::from_pmfs(2, [(1, 2, corr)]).unwrap();
        assert_eq!(model.mode(), Mode::Float);
        assert!(matches!(model.base_scale(), Err(Error::UnsupportedMode(_))));
        assert!((model.weight_f64(1, 2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn user_weight_must_match_pmf() {
        let corr = PairPmf::new(2, 2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        let ok = PinModel::new(2, [(1, 2, r(1, 1))], [(1, 2, corr.clone())]).unwrap();
        assert_eq!(ok.mode(), Mode::Exact);
        assert!(ok.pmf(1, 2).is_some());
        let bad = PinModel::new(2, [(1, 2, r(1, 2))], [(1, 2, corr)]);
        assert!(matches!(bad, Err(Error::InvalidModel(_))));
    }

    #[test]
    fn model_rejects_bad_pairs() {
        assert!(PinModel::exact(3, [(1, 1, r(1, 1))]).is_err());
        assert!(PinModel::exact(3, [(1, 4, r(1, 1))]).is_err());
        assert!(PinModel::exact(3, [(1, 2, r(-1, 1))]).is_err());
        assert!(PinModel::exact(3, [(1, 2, r(1, 1)), (2, 1, r(1, 1))]).is_err());
        assert!(PinModel::exact(1, []).is_err());
    }

    #[test]
    fn weights_are_symmetric() {
        let model = PinModel::exact(3, [(3, 1, r(2, 3))]).unwrap();
        assert_eq!(model.weight(1, 3), Some(&r(2, 3)));
        assert_eq!(model.weight(3, 1), Some(&r(2, 3)));
        assert_eq!(model.weight(1, 2), Some(&r(0, 1)));
    }

    #[test]
    fn terminal_set_validation() {
        assert!(TerminalSet::new(3, [1]).is_err());
        assert!(TerminalSet::new(3, [1, 1]).is_err());
        assert!(TerminalSet::new(3, [0, 1]).is_err());
        assert!(TerminalSet::new(3, [1, 4]).is_err());
        let a = TerminalSet::new(3, [3, 1]).unwrap();
        assert_eq!(a.members(), &[1, 3]);
        assert_eq!(a.mask(), 0b101);
        assert_eq!(a.to_string(), "{1,3}");
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/2").unwrap(), r(3, 2));
        assert_eq!(parse_rational(" 6/4 ").unwrap(), r(3, 2));
        assert_eq!(parse_rational("7").unwrap(), r(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&r(3, 2)), "3/2");
        assert_eq!(format_rational(&r(4, 2)), "2");
    }

    #[test]
    fn canonical_edges() {
        let g = Multigraph::new(3, [(2, 3, 1), (1, 2, 2)]).unwrap();
        let e = g.edges();
        assert_eq!(
            e,
            vec![Edge::new(1, 2, 0), Edge::new(1, 2, 1), Edge::new(2, 3, 0)]
        );
        assert_eq!(g.cut_size(0b001), 2);
        assert_eq!(g.cut_size(0b100), 1);
    }
}
