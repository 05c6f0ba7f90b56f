//! Finite-shot measurement and without-replacement subsampling.
//!
//! Draws are deterministic given a seed; concurrent callers must pass
//! distinct seeds (see [`crate::rng::child_seed`]).

use std::collections::BTreeMap;

use rand::seq::index;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::embed::{sort_distribution, SortedDistribution};
use crate::error::{invalid, Error, Result};
use crate::graph::{bits_from_str, bits_to_string};
use crate::qsim::{gather_bits, sorted_keep};
use crate::rng;
use crate::tolerance;

/// Outcome counts on `n` qubits. Outcome `x` has qubit `i` at bit `i`.
///
/// Serializes as `{bitstring: count}` with qubit 0 as the rightmost
/// character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "BTreeMap<String, u64>", try_from = "BTreeMap<String, u64>")]
pub struct CountsHistogram {
    n: usize,
    counts: BTreeMap<u64, u64>,
    shots: u64,
}

impl CountsHistogram {
    pub fn new(n: usize) -> Self {
        CountsHistogram {
            n,
            counts: BTreeMap::new(),
            shots: 0,
        }
    }

    /// Build from `(outcome, count)` pairs; zero counts are dropped and
    /// repeated outcomes accumulate.
    pub fn from_counts(n: usize, pairs: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let mut h = CountsHistogram::new(n);
        for (x, c) in pairs {
            if n < 64 && x >> n != 0 {
                return Err(invalid("outcome", format!("{x} does not fit in {n} qubits")));
            }
            h.add(x, c);
        }
        Ok(h)
    }

    fn add(&mut self, x: u64, c: u64) {
        if c > 0 {
            *self.counts.entry(x).or_default() += c;
            self.shots += c;
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn get(&self, x: u64) -> u64 {
        self.counts.get(&x).copied().unwrap_or(0)
    }

    /// Number of distinct observed outcomes.
    pub fn support(&self) -> usize {
        self.counts.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&x, &c)| (x, c))
    }

    /// Dense empirical frequency vector of length `2^n`.
    pub fn frequencies(&self) -> Vec<f64> {
        let mut f = vec![0.0; 1 << self.n];
        if self.shots > 0 {
            for (x, c) in self.iter() {
                f[x as usize] = c as f64 / self.shots as f64;
            }
        }
        f
    }

    /// Sorted empirical frequencies of the observed outcomes only; unobserved
    /// outcomes are implicit zeros, restored by padding or truncation.
    pub fn sorted(&self) -> SortedDistribution {
        let total = self.shots.max(1) as f64;
        let freq: Vec<f64> = self.counts.values().map(|&c| c as f64 / total).collect();
        let mut d = sort_distribution(&freq).expect("frequencies are non-negative");
        d.source_n = self.n;
        d
    }

    /// Counts over the qubits in `keep`, packed in ascending qubit order.
    pub fn marginal(&self, keep: &[usize]) -> Result<CountsHistogram> {
        let keep = sorted_keep(keep, self.n)?;
        let mut h = CountsHistogram::new(keep.len());
        for (x, c) in self.iter() {
            h.add(gather_bits(x, &keep), c);
        }
        Ok(h)
    }

    /// Merge another histogram on the same qubits into this one.
    pub fn absorb(&mut self, other: &CountsHistogram) -> Result<()> {
        if other.n != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        for (x, c) in other.iter() {
            self.add(x, c);
        }
        Ok(())
    }
}

impl From<CountsHistogram> for BTreeMap<String, u64> {
    fn from(h: CountsHistogram) -> Self {
        h.iter().map(|(x, c)| (bits_to_string(x, h.n), c)).collect()
    }
}

impl TryFrom<BTreeMap<String, u64>> for CountsHistogram {
    type Error = Error;

    fn try_from(map: BTreeMap<String, u64>) -> Result<Self> {
        let n = map.keys().next().map_or(0, |k| k.len());
        let mut h = CountsHistogram::new(n);
        for (k, c) in map {
            if k.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: k.len(),
                });
            }
            let bits = bits_from_str(&k)?;
            let x = bits.iter().enumerate().fold(0u64, |acc, (i, &b)| acc | (b as u64) << i);
            h.add(x, c);
        }
        Ok(h)
    }
}

fn check_probabilities(p: &[f64]) -> Result<usize> {
    if p.is_empty() || !p.len().is_power_of_two() {
        return Err(invalid("p", format!("length {} is not a power of two", p.len())));
    }
    if let Some((index, &value)) = p.iter().enumerate().find(|(_, &x)| x.is_nan() || x < 0.0) {
        return Err(Error::NegativeEntry { index, value });
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > tolerance::PROBABILITY_MASS {
        return Err(invalid("p", format!("mass {total} is not 1")));
    }
    Ok(p.len().trailing_zeros() as usize)
}

/// Multinomial draw of `shots` outcomes from `p` (inverse CDF per shot).
pub fn sample_counts(p: &[f64], shots: u64, seed: u64) -> Result<CountsHistogram> {
    let n = check_probabilities(p)?;
    let cdf: Vec<f64> = p
        .iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect();
    let total = cdf[cdf.len() - 1];
    let last = p.iter().rposition(|&x| x > 0.0).unwrap_or(0);
    let mut rng = rng::seeded(seed);
    let mut draws: Vec<u64> = (0..shots)
        .map(|_| {
            let u = rng.random::<f64>() * total;
            // first index whose cumulative mass exceeds u
            cdf.partition_point(|&c| c <= u).min(last) as u64
        })
        .collect();
    draws.sort_unstable();
    Ok(tally(n, &draws))
}

fn tally(n: usize, sorted: &[u64]) -> CountsHistogram {
    let mut h = CountsHistogram::new(n);
    for run in sorted.chunk_by(|a, b| a == b) {
        h.add(run[0], run.len() as u64);
    }
    h
}

/// `m` shots drawn without replacement from `h` (multivariate
/// hypergeometric).
pub fn subsample(h: &CountsHistogram, m: u64, seed: u64) -> Result<CountsHistogram> {
    if m > h.shots {
        return Err(Error::InsufficientShots {
            needed: m,
            available: h.shots,
        });
    }
    if m == h.shots {
        return Ok(h.clone());
    }
    let mut rng = rng::seeded(seed);
    let picked = index::sample(&mut rng, h.shots as usize, m as usize);
    let mut positions: Vec<u64> = picked.into_iter().map(|i| i as u64).collect();
    positions.sort_unstable();
    // Walk outcomes by descending count, so the drawn count profile does not
    // depend on outcome labels.
    let mut order: Vec<(u64, u64)> = h.iter().collect();
    order.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut outcomes = Vec::with_capacity(positions.len());
    let mut it = order.into_iter();
    let (mut x, mut end) = it.next().unwrap_or((0, 0));
    for pos in positions {
        while pos >= end {
            let (nx, c) = it.next().expect("position below total shots");
            x = nx;
            end += c;
        }
        outcomes.push(x);
    }
    outcomes.sort_unstable();
    Ok(tally(h.n, &outcomes))
}
