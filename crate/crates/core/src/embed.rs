//! Sorted-distribution embeddings, head truncation and distances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::qsim::{self, CircuitParams};

/// Default head length for truncated comparisons.
pub const DEFAULT_HEAD: usize = 100;

/// A probability vector in non-increasing order. `head_len == 0` marks an
/// untruncated embedding.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SortedDistribution {
    pub values: Vec<f64>,
    pub head_len: usize,
    pub source_n: usize,
}

impl SortedDistribution {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mass(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Zero-pad an untruncated embedding to `len` entries, e.g. to compare
    /// graphs of different order.
    pub fn padded(&self, len: usize) -> SortedDistribution {
        let mut values = self.values.clone();
        if values.len() < len {
            values.resize(len, 0.0);
        }
        SortedDistribution { values, ..*self }
    }

    /// `cumulative[i]` is the mass of the first `i + 1` entries.
    pub fn cumulative(&self) -> Vec<f64> {
        self.values
            .iter()
            .scan(0.0, |acc, &v| {
                *acc += v;
                Some(*acc)
            })
            .collect()
    }
}

fn qubits_spanned(len: usize) -> usize {
    len.next_power_of_two().trailing_zeros() as usize
}

/// Non-increasing rearrangement of `p`. Ties keep their input order.
pub fn sort_distribution(p: &[f64]) -> Result<SortedDistribution> {
    if let Some((index, &value)) = p.iter().enumerate().find(|(_, &x)| x.is_nan() || x < 0.0) {
        return Err(Error::NegativeEntry { index, value });
    }
    let mut values = p.to_vec();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(SortedDistribution {
        values,
        head_len: 0,
        source_n: qubits_spanned(p.len()),
    })
}

/// First `k` entries, zero-padded to exactly `k`. `k == 0` leaves the
/// distribution untruncated.
pub fn truncate_head(d: &SortedDistribution, k: usize) -> SortedDistribution {
    if k == 0 {
        return d.clone();
    }
    let mut values: Vec<f64> = d.values.iter().copied().take(k).collect();
    values.resize(k, 0.0);
    SortedDistribution {
        values,
        head_len: k,
        source_n: d.source_n,
    }
}

fn l1(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum())
}

/// `Σ |a_i − b_i|` between two sorted embeddings of equal length.
pub fn l1_distance(a: &SortedDistribution, b: &SortedDistribution) -> Result<f64> {
    l1(&a.values, &b.values)
}

pub fn tv_distance(a: &SortedDistribution, b: &SortedDistribution) -> Result<f64> {
    Ok(l1_distance(a, b)? / 2.0)
}

/// L1 between two label-aligned (unsorted) distributions over the same
/// outcomes. Only meaningful when both come from the same vertex labeling.
pub fn aligned_l1(p: &[f64], q: &[f64]) -> Result<f64> {
    l1(p, q)
}

/// Smallest probability estimated to 5% relative Poisson uncertainty at `shots`
/// shots: `p ≥ 1 / (0.05² · N)`.
pub fn poisson_floor(shots: u64) -> f64 {
    poisson_floor_at(shots, 0.05)
}

pub fn poisson_floor_at(shots: u64, relative: f64) -> f64 {
    1.0 / (relative * relative * shots as f64)
}

/// Exact untruncated embedding of `g`.
pub fn embed_exact(g: &Graph, params: &CircuitParams) -> Result<SortedDistribution> {
    let sv = qsim::run_circuit(g, params)?;
    sort_distribution(&qsim::output_distribution(&sv))
}

/// Serializable embedding with enough metadata to reproduce it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingRecord {
    pub graph: String,
    pub n: usize,
    pub params: CircuitParams,
    pub head_len: usize,
    pub shots: Option<u64>,
    pub values: Vec<f64>,
}

impl EmbeddingRecord {
    pub fn new(g: &Graph, params: CircuitParams, shots: Option<u64>, d: &SortedDistribution) -> Self {
        EmbeddingRecord {
            graph: g.digest(),
            n: g.n(),
            params,
            head_len: d.head_len,
            shots,
            values: d.values.clone(),
        }
    }
}
