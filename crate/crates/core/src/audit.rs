//! Exact secrecy and recoverability checks for protocol runs.

use std::collections::HashMap;
use std::thread;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Rational;
use crate::protocol::{Origin, ProtocolRun};

/// Largest edge count accepted by [`security_index_bruteforce`].
pub const BRUTEFORCE_EDGE_LIMIT: usize = 20;
/// Largest edge count for which [`audit`] also runs the enumeration.
pub const AUDIT_BRUTEFORCE_EDGES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Bruteforce,
    Rank,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecurityReport {
    pub method: Method,
    pub key_bits: usize,
    /// `H(K | F)` in bits.
    pub h_k_given_f: Rational,
    /// `|K| - H(K)` in bits.
    pub uniformity_deficit: Rational,
    /// `|K| - H(K | F)` in bits.
    pub s: Rational,
}

impl SecurityReport {
    fn new(method: Method, key_bits: usize, h_k: Rational, h_k_given_f: Rational) -> Self {
        let n = Rational::from_integer(BigInt::from(key_bits));
        SecurityReport {
            method,
            key_bits,
            uniformity_deficit: &n - h_k,
            s: n - &h_k_given_f,
            h_k_given_f,
        }
    }

    /// Same quantities, ignoring how they were obtained.
    pub fn agrees_with(&self, other: &SecurityReport) -> bool {
        self.key_bits == other.key_bits
            && self.h_k_given_f == other.h_k_given_f
            && self.uniformity_deficit == other.uniformity_deficit
            && self.s == other.s
    }
}

pub fn security_index_rank(run: &ProtocolRun) -> SecurityReport {
    let ak = run.key_map();
    let af = run.transcript_map();
    let joint = ak.vstack(af).rank();
    let h_k = Rational::from_integer(BigInt::from(ak.rank()));
    let h_k_given_f = Rational::from_integer(BigInt::from(joint - af.rank()));
    SecurityReport::new(Method::Rank, run.key().len(), h_k, h_k_given_f)
}

fn pack(bits: &[bool]) -> Vec<u64> {
    let mut out = vec![0u64; bits.len().div_ceil(64)];
    for (k, &b) in bits.iter().enumerate() {
        if b {
            out[k / 64] |= 1 << (k % 64);
        }
    }
    out
}

type Counts = HashMap<(Vec<u64>, Vec<u64>), u64>;

fn count_range(run: &ProtocolRun, lo: u64, hi: u64) -> Result<Counts> {
    let e = run.edge_count();
    let mut counts = Counts::new();
    let mut bits = vec![false; e];
    for x in lo..hi {
        for (k, b) in bits.iter_mut().enumerate() {
            *b = x >> k & 1 == 1;
        }
        let (key, f) = run.evaluate(&bits)?;
        *counts.entry((pack(&key), pack(&f))).or_insert(0) += 1;
    }
    Ok(counts)
}

/// Exact entropy of a distribution given by counts summing to `2^n`.
/// Every count must be a power of two.
fn dyadic_entropy(counts: impl Iterator<Item = u64>, n: usize) -> Result<Rational> {
    let mut weighted = BigInt::zero();
    for c in counts {
        if !c.is_power_of_two() {
            return Err(Error::NonDyadic(format!("outcome count {c} out of 2^{n}")));
        }
        weighted += BigInt::from(c) * BigInt::from(c.trailing_zeros());
    }
    let total = BigInt::one() << n;
    Ok(Rational::from_integer(BigInt::from(n)) - Rational::new(weighted, total))
}

/// Enumerates every edge-bit assignment and builds the exact joint
/// distribution of `(K, F)`.
pub fn security_index_bruteforce(run: &ProtocolRun) -> Result<SecurityReport> {
    let e = run.edge_count();
    if e > BRUTEFORCE_EDGE_LIMIT {
        return Err(Error::SizeLimit {
            what: "edge count for brute-force secrecy audit",
            limit: BRUTEFORCE_EDGE_LIMIT,
            actual: e,
        });
    }
    let total = 1u64 << e;
    let workers = thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(8) as u64;
    let workers = if total < 1024 { 1 } else { workers };
    let chunk = total.div_ceil(workers);
    let parts: Vec<Result<Counts>> = if workers == 1 {
        vec![count_range(run, 0, total)]
    } else {
        thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let (lo, hi) = (w * chunk, ((w + 1) * chunk).min(total));
                    scope.spawn(move || count_range(run, lo, hi))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        })
    };
    let mut joint = Counts::new();
    for part in parts {
        for (k, c) in part? {
            *joint.entry(k).or_insert(0) += c;
        }
    }
    let mut key_marg: HashMap<&[u64], u64> = HashMap::new();
    let mut f_marg: HashMap<&[u64], u64> = HashMap::new();
    for ((k, f), &c) in &joint {
        *key_marg.entry(k).or_insert(0) += c;
        *f_marg.entry(f).or_insert(0) += c;
    }
    let h_joint = dyadic_entropy(joint.values().copied(), e)?;
    let h_k = dyadic_entropy(key_marg.values().copied(), e)?;
    let h_f = dyadic_entropy(f_marg.values().copied(), e)?;
    Ok(SecurityReport::new(
        Method::Bruteforce,
        run.key().len(),
        h_k,
        h_joint - h_f,
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuditFailure {
    RecoveryMismatch { terminal: usize },
    Leakage { s: Rational },
    MethodDisagreement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub security: SecurityReport,
    pub bruteforce: Option<SecurityReport>,
    /// `(terminal, recovered K)` for every terminal of the target set.
    pub recoverability: Vec<(usize, bool)>,
    pub failures: Vec<AuditFailure>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn method(&self) -> Method {
        if self.bruteforce.is_some() {
            Method::Bruteforce
        } else {
            Method::Rank
        }
    }
}

pub fn audit(run: &ProtocolRun) -> Result<AuditReport> {
    audit_with_limit(run, AUDIT_BRUTEFORCE_EDGES)
}

/// [`audit`] with the enumeration cross-check run only when the run has at
/// most `bruteforce_edges` edges; 0 keeps to the rank method.
pub fn audit_with_limit(run: &ProtocolRun, bruteforce_edges: usize) -> Result<AuditReport> {
    let mut failures = Vec::new();
    let mut recoverability = Vec::new();
    for &i in run.packing().target().members() {
        let ok = match run.origin() {
            Origin::Propagation => run.recover_key(i)? == run.key(),
            Origin::Linear => run.key().is_empty(),
        };
        if !ok {
            failures.push(AuditFailure::RecoveryMismatch { terminal: i });
        }
        recoverability.push((i, ok));
    }
    let security = security_index_rank(run);
    let e = run.edge_count();
    let bruteforce = if bruteforce_edges > 0 && e <= bruteforce_edges.min(BRUTEFORCE_EDGE_LIMIT) {
        Some(security_index_bruteforce(run)?)
    } else {
        None
    };
    if let Some(b) = &bruteforce {
        if !b.agrees_with(&security) {
            failures.push(AuditFailure::MethodDisagreement);
        }
    }
    if !security.s.is_zero() {
        failures.push(AuditFailure::Leakage {
            s: security.s.clone(),
        });
    }
    Ok(AuditReport {
        security,
        bruteforce,
        recoverability,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::Gf2Matrix;
    use crate::model::{Edge, Multigraph, TerminalSet};
    use crate::packing::{spanning_packing, Tree, TreePacking};
    use crate::protocol::{draw_edge_keys, run_protocol};

    fn int(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn linear(key: &[&[usize]], f: &[&[usize]]) -> ProtocolRun {
        let g = Multigraph::new(3, [(1, 2, 1), (2, 3, 1)]).unwrap();
        let keys = draw_edge_keys(&g, 0);
        ProtocolRun::from_linear_maps(
            &g,
            TerminalSet::new(3, [1, 3]).unwrap(),
            &keys,
            Gf2Matrix::from_supports(2, key.iter().copied()),
            Gf2Matrix::from_supports(2, f.iter().copied()),
        )
        .unwrap()
    }

    fn path_run() -> ProtocolRun {
        let g = Multigraph::new(3, [(1, 2, 1), (2, 3, 1)]).unwrap();
        let t = Tree::new(vec![Edge::new(1, 2, 0), Edge::new(2, 3, 0)]);
        let packing = TreePacking::new(TerminalSet::new(3, [1, 3]).unwrap(), vec![t]);
        run_protocol(&g, &packing, &draw_edge_keys(&g, 11)).unwrap()
    }

    #[test]
    fn rank_examples() {
        let r = security_index_rank(&linear(&[&[0]], &[&[0, 1]]));
        assert_eq!(r.h_k_given_f, int(1));
        assert_eq!(r.s, int(0));
        let r = security_index_rank(&linear(&[&[0]], &[&[0]]));
        assert_eq!(r.h_k_given_f, int(0));
        assert_eq!(r.s, int(1));
    }

    #[test]
    fn bruteforce_examples() {
        let r = security_index_bruteforce(&path_run()).unwrap();
        assert_eq!(r.s, int(0));
        assert_eq!(r.uniformity_deficit, int(0));
        let r = security_index_bruteforce(&linear(&[&[0]], &[&[0]])).unwrap();
        assert_eq!(r.s, int(1));
    }

    #[test]
    fn doubled_triangle_agrees() {
        let g = Multigraph::new(3, [(1, 2, 2), (1, 3, 2), (2, 3, 2)]).unwrap();
        let run = run_protocol(&g, &spanning_packing(&g).unwrap(), &draw_edge_keys(&g, 1)).unwrap();
        let rank = security_index_rank(&run);
        let brute = security_index_bruteforce(&run).unwrap();
        assert_eq!(rank.s, int(0));
        assert!(rank.agrees_with(&brute));
        assert_eq!(run.key_map().vstack(run.transcript_map()).rank(), 6);
    }

    #[test]
    fn bruteforce_limit() {
        let g = Multigraph::new(2, [(1, 2, 21)]).unwrap();
        let packing = TreePacking::new(TerminalSet::full(2).unwrap(), vec![]);
        let run = run_protocol(&g, &packing, &draw_edge_keys(&g, 0)).unwrap();
        assert!(matches!(
            security_index_bruteforce(&run),
            Err(Error::SizeLimit {
                limit: 20,
                actual: 21,
                ..
            })
        ));
        // the rank route still applies
        assert!(audit(&run).unwrap().passed());
    }

    #[test]
    fn dyadic_check() {
        assert_eq!(dyadic_entropy([2u64, 2].into_iter(), 2).unwrap(), int(1));
        assert!(matches!(
            dyadic_entropy([3u64, 1].into_iter(), 2),
            Err(Error::NonDyadic(_))
        ));
    }

    #[test]
    fn audit_valid_and_faulted() {
        let run = path_run();
        let report = audit(&run).unwrap();
        assert!(report.passed());
        assert_eq!(report.method(), Method::Bruteforce);
        assert_eq!(report.recoverability, vec![(1, true), (3, true)]);

        let flipped = audit(&run.with_flipped_broadcast(0)).unwrap();
        assert!(flipped
            .failures
            .contains(&AuditFailure::RecoveryMismatch { terminal: 3 }));
        assert_eq!(flipped.security.s, int(0));

        let leaked = audit(&run.with_key_from_broadcast(0, 0)).unwrap();
        assert!(leaked
            .failures
            .contains(&AuditFailure::Leakage { s: int(1) }));
        assert!(leaked.bruteforce.unwrap().agrees_with(&leaked.security));
    }
}
