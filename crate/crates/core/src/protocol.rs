//! XOR propagation of one shared bit per packed tree.
//!
//! Every multigraph edge carries an ideal pairwise key bit. In each tree the
//! lexicographically least edge is the reference; its bit `b` becomes the
//! tree's key bit. Walking the tree breadth-first from the reference edge,
//! the endpoint that already knows `b` broadcasts `b xor k_e` for each
//! further edge `e`, which lets the other endpoint of `e` learn `b`.

use std::collections::{BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::model::{Edge, Multigraph, TerminalSet};
use crate::packing::{Tree, TreePacking};

/// One uniform bit per edge of the multigraph, in canonical edge order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeKeyBits {
    seed: u64,
    edges: Vec<Edge>,
    bits: Vec<bool>,
}

impl EdgeKeyBits {
    /// Explicit bits for the canonical edge list of `g`.
    pub fn from_bits(g: &Multigraph, bits: Vec<bool>) -> Result<Self> {
        let edges = g.edges();
        if edges.len() != bits.len() {
            return Err(Error::InvalidModel(format!(
                "{} key bits for {} edges",
                bits.len(),
                edges.len()
            )));
        }
        Ok(Self {
            seed: 0,
            edges,
            bits,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn index_of(&self, e: &Edge) -> Option<usize> {
        self.edges.binary_search(e).ok()
    }

    pub fn bit(&self, e: &Edge) -> Option<bool> {
        self.index_of(e).map(|k| self.bits[k])
    }
}

pub fn draw_edge_keys(g: &Multigraph, seed: u64) -> EdgeKeyBits {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = g.edges();
    let bits = edges.iter().map(|_| rng.gen::<bool>()).collect();
    EdgeKeyBits { seed, edges, bits }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Broadcast {
    pub tree: usize,
    pub terminal: usize,
    /// The edge whose far endpoint learns the key bit from this message.
    pub edge: Edge,
    pub bit: bool,
    /// Edge-bit indices summed into the message.
    pub support: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Propagation {
    pub key: bool,
    pub reference: Edge,
    pub broadcasts: Vec<Broadcast>,
}

fn check_tree_shape(tree: &Tree) -> Result<()> {
    if tree.is_empty() {
        return Err(Error::InvalidTree("tree has no edges".into()));
    }
    let vertices = tree.vertices();
    if vertices.len() != tree.len() + 1 {
        return Err(Error::InvalidTree(format!(
            "{} edges on {} vertices",
            tree.len(),
            vertices.len()
        )));
    }
    if tree.edges().windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidTree("repeated edge".into()));
    }
    Ok(())
}

/// Runs the propagation inside one tree. `tree_index` only labels the
/// resulting broadcasts.
pub fn propagate_tree(tree_index: usize, tree: &Tree, keys: &EdgeKeyBits) -> Result<Propagation> {
    check_tree_shape(tree)?;
    let index = |e: &Edge| {
        keys.index_of(e)
            .ok_or_else(|| Error::InvalidTree(format!("edge {e} has no key bit")))
    };
    let reference = tree.edges()[0];
    let ref_idx = index(&reference)?;
    let key = keys.bits[ref_idx];

    let mut informed: BTreeSet<usize> = [reference.i, reference.j].into();
    let mut used = vec![false; tree.len()];
    used[0] = true;
    let mut queue = VecDeque::from([reference.i, reference.j]);
    let mut broadcasts = Vec::with_capacity(tree.len() - 1);
    while let Some(u) = queue.pop_front() {
        // edges are stored sorted, so children come in lexicographic order
        for (k, e) in tree.edges().iter().enumerate() {
            if used[k] || !e.touches(u) {
                continue;
            }
            let v = e.other(u);
            if informed.contains(&v) {
                return Err(Error::InvalidTree(format!("edge {e} closes a cycle")));
            }
            used[k] = true;
            let e_idx = index(e)?;
            broadcasts.push(Broadcast {
                tree: tree_index,
                terminal: u,
                edge: *e,
                bit: key ^ keys.bits[e_idx],
                support: [ref_idx, e_idx],
            });
            informed.insert(v);
            queue.push_back(v);
        }
    }
    if used.iter().any(|u| !u) {
        return Err(Error::InvalidTree("tree is not connected".into()));
    }
    Ok(Propagation {
        key,
        reference,
        broadcasts,
    })
}

/// Deliberate corruption applied after propagation, used to show that the
/// audit can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    FlipBroadcast(usize),
    KeyFromBroadcast { key: usize, broadcast: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    /// Produced by tree propagation; values can be recomputed from edge bits.
    Propagation,
    /// Supplied directly as linear maps.
    Linear,
}

/// A complete protocol execution with its GF(2) description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolRun {
    origin: Origin,
    faults: Vec<Fault>,
    linear_transcript: Vec<bool>,
    graph: Multigraph,
    packing: TreePacking,
    keys: EdgeKeyBits,
    key: Vec<bool>,
    references: Vec<Edge>,
    transcript: Vec<Broadcast>,
    residual: Vec<usize>,
    key_map: Gf2Matrix,
    transcript_map: Gf2Matrix,
}

pub fn run_protocol(
    g: &Multigraph,
    packing: &TreePacking,
    keys: &EdgeKeyBits,
) -> Result<ProtocolRun> {
    packing.validate(g)?;
    if keys.edges != g.edges() {
        return Err(Error::InvalidPacking(
            "key bits were drawn for a different multigraph".into(),
        ));
    }
    let mut key = Vec::with_capacity(packing.len());
    let mut references = Vec::with_capacity(packing.len());
    let mut transcript = Vec::new();
    let mut used = vec![false; keys.len()];
    for (t, tree) in packing.trees().iter().enumerate() {
        let p = propagate_tree(t, tree, keys)?;
        key.push(p.key);
        references.push(p.reference);
        transcript.extend(p.broadcasts);
        for e in tree.edges() {
            used[keys.index_of(e).expect("validated")] = true;
        }
    }
    let residual: Vec<usize> = (0..keys.len()).filter(|&k| !used[k]).collect();
    let ref_rows: Vec<[usize; 1]> = references
        .iter()
        .map(|e| [keys.index_of(e).expect("validated")])
        .collect();
    let key_map = Gf2Matrix::from_supports(keys.len(), ref_rows.iter().map(|r| &r[..]));
    let transcript_map =
        Gf2Matrix::from_supports(keys.len(), transcript.iter().map(|b| &b.support[..]));
    Ok(ProtocolRun {
        origin: Origin::Propagation,
        faults: Vec::new(),
        linear_transcript: Vec::new(),
        graph: g.clone(),
        packing: packing.clone(),
        keys: keys.clone(),
        key,
        references,
        transcript,
        residual,
        key_map,
        transcript_map,
    })
}

impl ProtocolRun {
    /// A run given only by its key and transcript maps over the edge bits of
    /// `g`. It has no trees, so nothing is recoverable from it.
    pub fn from_linear_maps(
        g: &Multigraph,
        target: TerminalSet,
        keys: &EdgeKeyBits,
        key_map: Gf2Matrix,
        transcript_map: Gf2Matrix,
    ) -> Result<Self> {
        if keys.edges != g.edges()
            || key_map.cols() != keys.len()
            || transcript_map.cols() != keys.len()
        {
            return Err(Error::InvalidModel(
                "linear maps do not match the edge bits".into(),
            ));
        }
        let key = key_map.apply(&keys.bits);
        let linear_transcript = transcript_map.apply(&keys.bits);
        Ok(ProtocolRun {
            origin: Origin::Linear,
            faults: Vec::new(),
            linear_transcript,
            graph: g.clone(),
            packing: TreePacking::new(target, vec![]),
            keys: keys.clone(),
            references: Vec::new(),
            transcript: Vec::new(),
            residual: Vec::new(),
            key,
            key_map,
            transcript_map,
        })
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn faults(&self) -> &[Fault] {
        &self.faults
    }

    /// Transcript values as a bit string, in broadcast order.
    pub fn transcript_bits(&self) -> Vec<bool> {
        match self.origin {
            Origin::Propagation => self.transcript.iter().map(|b| b.bit).collect(),
            Origin::Linear => self.linear_transcript.clone(),
        }
    }

    /// Recomputes `(K, F)` for other edge bits by repeating the propagation
    /// (or applying the maps of a linear run) and then the recorded faults.
    pub fn evaluate(&self, bits: &[bool]) -> Result<(Vec<bool>, Vec<bool>)> {
        let (mut key, mut f) = match self.origin {
            Origin::Linear => (self.key_map.apply(bits), self.transcript_map.apply(bits)),
            Origin::Propagation => {
                let keys = EdgeKeyBits {
                    seed: self.keys.seed,
                    edges: self.keys.edges.clone(),
                    bits: bits.to_vec(),
                };
                let mut key = Vec::with_capacity(self.packing.len());
                let mut f = Vec::with_capacity(self.transcript.len());
                for (t, tree) in self.packing.trees().iter().enumerate() {
                    let p = propagate_tree(t, tree, &keys)?;
                    key.push(p.key);
                    f.extend(p.broadcasts.iter().map(|b| b.bit));
                }
                (key, f)
            }
        };
        for fault in &self.faults {
            match *fault {
                Fault::FlipBroadcast(k) => f[k] ^= true,
                Fault::KeyFromBroadcast {
                    key: t,
                    broadcast: k,
                } => key[t] = f[k],
            }
        }
        Ok((key, f))
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn packing(&self) -> &TreePacking {
        &self.packing
    }

    pub fn keys(&self) -> &EdgeKeyBits {
        &self.keys
    }

    /// Group key, one bit per tree in packing order.
    pub fn key(&self) -> &[bool] {
        &self.key
    }

    pub fn references(&self) -> &[Edge] {
        &self.references
    }

    pub fn transcript(&self) -> &[Broadcast] {
        &self.transcript
    }

    /// Indices (canonical edge order) of edges used by no tree.
    pub fn residual(&self) -> &[usize] {
        &self.residual
    }

    pub fn residual_bits(&self) -> Vec<bool> {
        self.residual.iter().map(|&k| self.keys.bits[k]).collect()
    }

    /// Rows map edge bits to key bits.
    pub fn key_map(&self) -> &Gf2Matrix {
        &self.key_map
    }

    /// Rows map edge bits to broadcast bits.
    pub fn transcript_map(&self) -> &Gf2Matrix {
        &self.transcript_map
    }

    pub fn edge_count(&self) -> usize {
        self.keys.len()
    }

    /// `|E| = |K| + |F| + |K_R|`.
    pub fn accounting_holds(&self) -> bool {
        self.edge_count() == self.key.len() + self.transcript.len() + self.residual.len()
    }

    /// The square map from edge bits to `(K, F, K_R)`.
    pub fn full_map(&self) -> Gf2Matrix {
        let residual_rows: Vec<[usize; 1]> = self.residual.iter().map(|&k| [k]).collect();
        let residual =
            Gf2Matrix::from_supports(self.edge_count(), residual_rows.iter().map(|r| &r[..]));
        self.key_map.vstack(&self.transcript_map).vstack(&residual)
    }

    /// Reconstructs the key from terminal `i`'s incident edge bits and the
    /// public transcript.
    pub fn recover_key(&self, i: usize) -> Result<Vec<bool>> {
        if !self.packing.target().contains(i) {
            return Err(Error::NotInSet { terminal: i });
        }
        let own = |e: &Edge| -> Result<bool> {
            if !e.touches(i) {
                return Err(Error::Internal(format!(
                    "terminal {i} read foreign edge {e}"
                )));
            }
            Ok(self.keys.bit(e).expect("tree edges have key bits"))
        };
        let mut out = Vec::with_capacity(self.packing.len());
        for (t, tree) in self.packing.trees().iter().enumerate() {
            let reference = self.references[t];
            let bit = if reference.touches(i) {
                own(&reference)?
            } else {
                let b = self
                    .transcript
                    .iter()
                    .find(|b| b.tree == t && b.edge.touches(i))
                    .ok_or_else(|| {
                        Error::Internal(format!(
                            "terminal {i} is not on tree {t} ({} edges)",
                            tree.len()
                        ))
                    })?;
                b.bit ^ own(&b.edge)?
            };
            out.push(bit);
        }
        Ok(out)
    }

    /// Fault injection: flips the transmitted bit of broadcast `k`.
    pub fn with_flipped_broadcast(&self, k: usize) -> Self {
        let mut run = self.clone();
        match run.origin {
            Origin::Propagation => run.transcript[k].bit ^= true,
            Origin::Linear => run.linear_transcript[k] ^= true,
        }
        run.faults.push(Fault::FlipBroadcast(k));
        run
    }

    /// Fault injection: replaces key bit `t` by broadcast `k`, both in value
    /// and in its linear description.
    pub fn with_key_from_broadcast(&self, t: usize, k: usize) -> Self {
        let mut run = self.clone();
        run.key[t] = self.transcript_bits()[k];
        run.key_map.copy_row_from(t, &self.transcript_map, k);
        run.faults.push(Fault::KeyFromBroadcast {
            key: t,
            broadcast: k,
        });
        run
    }

    /// Per-line transcript export: `tree terminal bit support0,support1`.
    pub fn transcript_lines(&self) -> Vec<String> {
        self.transcript
            .iter()
            .map(|b| {
                format!(
                    "{} {} {} {},{}",
                    b.tree, b.terminal, b.bit as u8, b.support[0], b.support[1]
                )
            })
            .collect()
    }
}

/// Hex encoding of a bit string, most significant bit first, zero-padded on
/// the right to a whole number of nibbles.
pub fn bits_to_hex(bits: &[bool]) -> String {
    bits.chunks(4)
        .map(|chunk| {
            let v = chunk
                .iter()
                .chain(std::iter::repeat(&false))
                .take(4)
                .fold(0u32, |acc, &b| acc << 1 | b as u32);
            char::from_digit(v, 16).expect("nibble")
        })
        .collect()
}
