//! Parameterized noise: depolarizing errors after every logical gate plus
//! independent readout flips, simulated by Pauli trajectories.
//!
//! After each gate an error occurs with probability `p1` (rotations) or `p2`
//! (`R_ZZ`); an error is a uniformly random non-identity Pauli on the touched
//! qubits (3 choices for one qubit, 15 for two). Shots with identical error
//! patterns share one statevector simulation. Readout flips act exactly on
//! the output distribution before sampling.

use std::collections::BTreeMap;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::Graph;
use crate::qsim::{self, apply_pauli, circuit_gates, CircuitParams, Gate, Pauli, Statevector};
use crate::rng::{self, child_seed};
use crate::sampling::{sample_counts, CountsHistogram};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub p1: f64,
    pub p2: f64,
    pub p_ro: f64,
}

impl NoiseSpec {
    pub const NONE: NoiseSpec = NoiseSpec {
        p1: 0.0,
        p2: 0.0,
        p_ro: 0.0,
    };

    pub fn validate(&self) -> Result<()> {
        for (field, v) in [("p1", self.p1), ("p2", self.p2), ("p_ro", self.p_ro)] {
            if !(0.0..1.0).contains(&v) {
                return Err(invalid(field, format!("{v} is not in [0, 1)")));
            }
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0 && self.p_ro == 0.0
    }

    fn gate_error(&self, gate: &Gate) -> f64 {
        match gate {
            Gate::Rx { .. } => self.p1,
            Gate::Rzz { .. } => self.p2,
        }
    }
}

/// Errors of one trajectory: `(gate index, Pauli code)` in gate order. For a
/// one-qubit gate the code is 1..=3 (X, Y, Z); for `R_ZZ(a, b)` it is
/// `4·P_a + P_b` in 1..=15 with I = 0.
type Pattern = Vec<(u32, u8)>;

fn pauli(code: u8) -> Option<Pauli> {
    match code {
        1 => Some(Pauli::X),
        2 => Some(Pauli::Y),
        3 => Some(Pauli::Z),
        _ => None,
    }
}

fn random_code(gate: &Gate, rng: &mut rng::Rng) -> u8 {
    match gate {
        Gate::Rx { .. } => rng.random_range(1..=3),
        Gate::Rzz { .. } => rng.random_range(1..=15),
    }
}

fn apply_error(sv: &mut Statevector, gate: &Gate, code: u8) {
    match *gate {
        Gate::Rx { qubit, .. } => apply_pauli(sv, qubit, pauli(code).expect("one-qubit code")),
        Gate::Rzz { a, b, .. } => {
            if let Some(p) = pauli(code >> 2) {
                apply_pauli(sv, a, p);
            }
            if let Some(p) = pauli(code & 3) {
                apply_pauli(sv, b, p);
            }
        }
    }
}

fn simulate(n: usize, gates: &[Gate], pattern: &Pattern) -> Statevector {
    let mut sv = Statevector::zero(n);
    let mut errs = pattern.iter().peekable();
    for (j, gate) in gates.iter().enumerate() {
        gate.apply(&mut sv);
        while let Some(&&(at, code)) = errs.peek() {
            if at as usize != j {
                break;
            }
            apply_error(&mut sv, gate, code);
            errs.next();
        }
    }
    sv
}

/// Independent bit flips with probability `q` on every qubit, applied to a
/// probability vector in place.
pub fn apply_readout(p: &mut [f64], q: f64) {
    if q == 0.0 {
        return;
    }
    let n = p.len().trailing_zeros() as usize;
    for i in 0..n {
        let bit = 1usize << i;
        for block in p.chunks_mut(2 * bit) {
            let (lo, hi) = block.split_at_mut(bit);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = (1.0 - q) * x + q * y;
                *b = q * x + (1.0 - q) * y;
            }
        }
    }
}

/// Noisy finite-shot measurement. With [`NoiseSpec::NONE`] the result is
/// identical to sampling the exact distribution with the same seed.
pub fn run_noisy(
    g: &Graph,
    params: &CircuitParams,
    noise: &NoiseSpec,
    shots: u64,
    seed: u64,
) -> Result<CountsHistogram> {
    noise.validate()?;
    let ideal = qsim::run_circuit(g, params)?;
    if noise.is_noiseless() {
        return sample_counts(&qsim::output_distribution(&ideal), shots, seed);
    }
    let gates = circuit_gates(g, params);
    let probs: Vec<f64> = gates.iter().map(|gt| noise.gate_error(gt)).collect();
    let mut rng = rng::seeded(seed);
    let mut patterns: BTreeMap<Pattern, u64> = BTreeMap::new();
    for _ in 0..shots {
        let mut pat = Pattern::new();
        for (j, (gate, &p)) in gates.iter().zip(&probs).enumerate() {
            if p > 0.0 && rng.random_bool(p) {
                pat.push((j as u32, random_code(gate, &mut rng)));
            }
        }
        *patterns.entry(pat).or_default() += 1;
    }
    let parts = patterns
        .into_iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .enumerate()
        .map(|(idx, (pat, count))| {
            let mut p = if pat.is_empty() {
                qsim::output_distribution(&ideal)
            } else {
                qsim::output_distribution(&simulate(g.n(), &gates, &pat))
            };
            apply_readout(&mut p, noise.p_ro);
            sample_counts(&p, count, child_seed(seed, idx as u64 + 1))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = CountsHistogram::new(g.n());
    for part in &parts {
        out.absorb(part)?;
    }
    Ok(out)
}

/// Estimate of the noisy output distribution (before finite-shot sampling).
///
/// The error-free branch, weight `w0 = Π(1 − p_j)`, is exact. The remainder is
/// the mean over `trajectories` patterns conditioned on at least one error,
/// drawn by sampling the first error location from its exact distribution.
/// Readout is applied exactly.
pub fn expected_distribution(
    g: &Graph,
    params: &CircuitParams,
    noise: &NoiseSpec,
    trajectories: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    noise.validate()?;
    let mut p = qsim::output_distribution(&qsim::run_circuit(g, params)?);
    let gates = circuit_gates(g, params);
    let probs: Vec<f64> = gates.iter().map(|gt| noise.gate_error(gt)).collect();
    // first[j] = P(first error at gate j); w0 = P(no error)
    let mut survive = 1.0;
    let mut first = Vec::with_capacity(probs.len());
    for &pj in &probs {
        first.push(survive * pj);
        survive *= 1.0 - pj;
    }
    let w0 = survive;
    if w0 < 1.0 && trajectories > 0 {
        let cdf: Vec<f64> = first
            .iter()
            .scan(0.0, |acc, &f| {
                *acc += f;
                Some(*acc)
            })
            .collect();
        let err_mass = cdf[cdf.len() - 1];
        let sum = (0..trajectories as u64)
            .into_par_iter()
            .map(|t| {
                let mut rng = rng::stream(seed, t);
                let u = rng.random::<f64>() * err_mass;
                let j0 = cdf.partition_point(|&c| c <= u).min(gates.len() - 1);
                let j0 = (j0..gates.len()).find(|&j| probs[j] > 0.0).unwrap_or(j0);
                let mut pat: Pattern = vec![(j0 as u32, random_code(&gates[j0], &mut rng))];
                for j in j0 + 1..gates.len() {
                    if probs[j] > 0.0 && rng.random_bool(probs[j]) {
                        pat.push((j as u32, random_code(&gates[j], &mut rng)));
                    }
                }
                qsim::output_distribution(&simulate(g.n(), &gates, &pat))
            })
            .reduce(
                || vec![0.0; p.len()],
                |mut a, b| {
                    a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                    a
                },
            );
        let scale = (1.0 - w0) / trajectories as f64;
        for (x, s) in p.iter_mut().zip(&sum) {
            *x = w0 * *x + scale * s;
        }
    }
    apply_readout(&mut p, noise.p_ro);
    Ok(p)
}
