//! Plot data: sorted head profile and z against shot count.

use serde::{Deserialize, Serialize};

use super::SamplingConfig;
use crate::embed::{poisson_floor, sort_distribution};
use crate::error::{invalid, Result};
use crate::graph::Graph;
use crate::qsim::{self, CircuitParams};
use crate::rng::child_seed;
use crate::sampling::sample_counts;
use crate::stats::separation_test;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeadRow {
    pub rank: usize,
    pub probability: f64,
    pub cumulative: f64,
    /// Whether the entry is resolved to 5% Poisson uncertainty at the given
    /// shot count.
    pub resolved: bool,
}

/// First `k` sorted probabilities of `g` with running mass.
pub fn run_head_profile(g: &Graph, params: &CircuitParams, k: usize, shots: u64) -> Result<Vec<HeadRow>> {
    let d = sort_distribution(&qsim::output_distribution(&qsim::run_circuit(g, params)?))?;
    let floor = poisson_floor(shots);
    Ok(d.cumulative()
        .into_iter()
        .zip(&d.values)
        .take(if k == 0 { d.len() } else { k })
        .enumerate()
        .map(|(i, (cumulative, &probability))| HeadRow {
            rank: i + 1,
            probability,
            cumulative,
            resolved: probability >= floor,
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShotRow {
    pub shots: u64,
    pub null_mean: f64,
    pub null_sd: f64,
    pub signal_mean: f64,
    pub signal_sd: f64,
    pub z: f64,
}

fn sd(x: &[f64], mean: f64) -> f64 {
    (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (x.len() as f64 - 1.0)).sqrt()
}

/// Null and signal statistics at each subsample size in `shots_grid`, all
/// drawn from one pair of histograms with `sampling.shots` shots.
pub fn run_shot_scaling(
    a: &Graph,
    b: &Graph,
    params: &CircuitParams,
    shots_grid: &[u64],
    sampling: &SamplingConfig,
    seed: u64,
) -> Result<Vec<ShotRow>> {
    let largest = shots_grid
        .iter()
        .copied()
        .max()
        .ok_or_else(|| invalid("shots", "empty grid"))?;
    if largest > sampling.shots {
        return Err(invalid(
            "shots",
            format!("{largest} exceeds the histogram size {}", sampling.shots),
        ));
    }
    let p = |g: &Graph| qsim::run_circuit(g, params).map(|sv| qsim::output_distribution(&sv));
    let ha = sample_counts(&p(a)?, sampling.shots, child_seed(seed, 0))?;
    let hb = sample_counts(&p(b)?, sampling.shots, child_seed(seed, 1))?;
    shots_grid
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let cfg = SamplingConfig {
                subsample: m,
                ..*sampling
            }
            .separation(child_seed(seed, 2 + i as u64));
            let r = separation_test(&ha, &hb, &cfg)?;
            Ok(ShotRow {
                shots: m,
                null_mean: r.mu_null,
                null_sd: sd(&r.null_l1, r.mu_null),
                signal_mean: r.mu_signal,
                signal_sd: sd(&r.signal_l1, r.mu_signal),
                z: r.z,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, FamilySpec};

    #[test]
    fn head_profile_accumulates() {
        let g = generate(&FamilySpec::Er { n: 8, p: 0.4, seed: 2 }).unwrap();
        let rows = run_head_profile(&g, &CircuitParams::CANONICAL, 10, 4096).unwrap();
        assert_eq!(rows.len(), 10);
        assert!(rows
            .windows(2)
            .all(|w| w[0].probability >= w[1].probability && w[0].cumulative <= w[1].cumulative));
        let all = run_head_profile(&g, &CircuitParams::CANONICAL, 0, 4096).unwrap();
        assert!((all.last().unwrap().cumulative - 1.0).abs() < 1e-12);
    }

    #[test]
    fn null_mean_shrinks_with_shots() {
        let a = generate(&FamilySpec::Path { n: 6 }).unwrap();
        let b = generate(&FamilySpec::Star { n: 6 }).unwrap();
        let rows = run_shot_scaling(
            &a,
            &b,
            &CircuitParams::CANONICAL,
            &[256, 4096],
            &SamplingConfig::default(),
            3,
        )
        .unwrap();
        assert!(rows[0].null_mean > rows[1].null_mean);
        assert!(rows[1].z > rows[0].z);
    }
}
