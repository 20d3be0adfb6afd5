//! JSON model files.
//!
//! ```json
//! {
//!   "terminals": 3,
//!   "weights": [ { "i": 1, "j": 2, "value": "3/2" }, { "i": 2, "j": 3, "value": 1 } ],
//!   "pmfs": [ { "i": 1, "j": 2, "rows": 2, "cols": 2, "probs": [0.5, 0, 0, 0.5] } ]
//! }
//! ```
//!
//! `weights` may omit pairs (they are zero). `pmfs` is optional; `probs` is
//! row-major with rows indexing the observation of terminal `i`. Unknown
//! fields are rejected.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{format_rational, pairs, parse_rational, PairPmf, PinModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightValue {
    Integer(u64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightRecord {
    pub i: usize,
    pub j: usize,
    pub value: WeightValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PmfRecord {
    pub i: usize,
    pub j: usize,
    pub rows: usize,
    pub cols: usize,
    pub probs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub terminals: usize,
    #[serde(default)]
    pub weights: Vec<WeightRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pmfs: Vec<PmfRecord>,
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidModel(e.to_string()))
    }

    pub fn into_model(self) -> Result<PinModel> {
        let mut weights = Vec::with_capacity(self.weights.len());
        for (k, w) in self.weights.into_iter().enumerate() {
            let value = match &w.value {
                WeightValue::Integer(n) => parse_rational(&n.to_string()),
                WeightValue::Text(s) => parse_rational(s),
            }
            .map_err(|e| Error::InvalidModel(format!("weights[{k}].value: {e}")))?;
            weights.push((w.i, w.j, value));
        }
        let mut pmfs = Vec::with_capacity(self.pmfs.len());
        for (k, p) in self.pmfs.into_iter().enumerate() {
            let pmf = PairPmf::new(p.rows, p.cols, p.probs)
                .map_err(|e| Error::InvalidModel(format!("pmfs[{k}]: {e}")))?;
            pmfs.push((p.i, p.j, pmf));
        }
        PinModel::new(self.terminals, weights, pmfs)
    }

    /// Serializes an exact-mode model, listing every pair explicitly.
    pub fn from_model(model: &PinModel) -> Result<Self> {
        let w = model.exact_weights()?;
        let m = model.m();
        let weights = pairs(m)
            .zip(w)
            .map(|((i, j), w)| WeightRecord {
                i,
                j,
                value: WeightValue::Text(format_rational(w)),
            })
            .collect();
        let pmfs = pairs(m)
            .filter_map(|(i, j)| {
                model.pmf(i, j).map(|p| PmfRecord {
                    i,
                    j,
                    rows: p.rows(),
                    cols: p.cols(),
                    probs: p.probs().to_vec(),
                })
            })
            .collect();
        Ok(Self {
            terminals: m,
            weights,
            pmfs,
        })
    }
}

pub fn parse_model(text: &str) -> Result<PinModel> {
    ModelFile::parse(text)?.into_model()
}
