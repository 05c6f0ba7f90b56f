//! Separation against noise strength: each noise parameter is scaled in turn
//! and the separation between the expected noisy distributions of a pair is
//! compared with the unscaled baseline on matched seeds.

use serde::{Deserialize, Serialize};

use super::padded_l1;
use crate::embed::sort_distribution;
use crate::error::{invalid, Result};
use crate::graph::Graph;
use crate::noise::{expected_distribution, NoiseSpec};
use crate::qsim::CircuitParams;
use crate::rng::child_seed;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseScan {
    pub base: NoiseSpec,
    pub factor: f64,
    /// Trajectories per expected-distribution estimate.
    pub trajectories: usize,
    /// Independent seed repetitions.
    pub repetitions: usize,
}

impl Default for NoiseScan {
    fn default() -> Self {
        NoiseScan {
            base: NoiseSpec {
                p1: 1e-4,
                p2: 5e-3,
                p_ro: 1e-2,
            },
            factor: 4.0,
            trajectories: 2000,
            repetitions: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseScanRow {
    pub repetition: usize,
    pub parameter: String,
    pub base_separation: f64,
    pub scaled_separation: f64,
    pub violated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseScanReport {
    pub noiseless_separation: f64,
    pub rows: Vec<NoiseScanRow>,
    pub violation_rate: f64,
}

/// Sorted L1 between the expected noisy distributions of `a` and `b`.
pub fn noisy_separation(
    a: &Graph,
    b: &Graph,
    params: &CircuitParams,
    noise: &NoiseSpec,
    trajectories: usize,
    seed: u64,
) -> Result<f64> {
    // both graphs share the seed, so their error patterns coincide gate for gate
    let pa = expected_distribution(a, params, noise, trajectories, seed)?;
    let pb = expected_distribution(b, params, noise, trajectories, seed)?;
    padded_l1(&sort_distribution(&pa)?, &sort_distribution(&pb)?)
}

pub fn run_noise_scan(
    a: &Graph,
    b: &Graph,
    params: &CircuitParams,
    scan: &NoiseScan,
    seed: u64,
) -> Result<NoiseScanReport> {
    scan.base.validate()?;
    if scan.factor.is_nan() || scan.factor < 1.0 || scan.repetitions == 0 {
        return Err(invalid("factor", "scan needs factor >= 1 and at least one repetition"));
    }
    let scaled = |which: &str| -> Result<NoiseSpec> {
        let mut s = scan.base;
        match which {
            "p1" => s.p1 *= scan.factor,
            "p2" => s.p2 *= scan.factor,
            _ => s.p_ro *= scan.factor,
        }
        s.validate()?;
        Ok(s)
    };
    let noiseless = noisy_separation(a, b, params, &NoiseSpec::NONE, 0, seed)?;
    let mut rows = Vec::new();
    for rep in 0..scan.repetitions {
        let s = child_seed(seed, rep as u64);
        let base = noisy_separation(a, b, params, &scan.base, scan.trajectories, s)?;
        for which in ["p1", "p2", "p_ro"] {
            let scaled_sep = noisy_separation(a, b, params, &scaled(which)?, scan.trajectories, s)?;
            rows.push(NoiseScanRow {
                repetition: rep,
                parameter: which.to_string(),
                base_separation: base,
                scaled_separation: scaled_sep,
                violated: scaled_sep > base,
            });
        }
    }
    let violation_rate = rows.iter().filter(|r| r.violated).count() as f64 / rows.len() as f64;
    Ok(NoiseScanReport {
        noiseless_separation: noiseless,
        rows,
        violation_rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::l1_distance;
    use crate::graph::{generate, FamilySpec};

    #[test]
    fn noiseless_separation_is_the_exact_sorted_distance() {
        let a = generate(&FamilySpec::Path { n: 4 }).unwrap();
        let b = generate(&FamilySpec::Star { n: 4 }).unwrap();
        let params = CircuitParams::CANONICAL;
        let got = noisy_separation(&a, &b, &params, &NoiseSpec::NONE, 10, 3).unwrap();
        let (_, sa) = super::super::exact_sorted(&a, &params).unwrap();
        let (_, sb) = super::super::exact_sorted(&b, &params).unwrap();
        assert!((got - l1_distance(&sa, &sb).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn scan_shape_and_validation() {
        let a = generate(&FamilySpec::Path { n: 3 }).unwrap();
        let b = generate(&FamilySpec::Complete { n: 3 }).unwrap();
        let scan = NoiseScan {
            trajectories: 20,
            repetitions: 2,
            ..NoiseScan::default()
        };
        let r = run_noise_scan(&a, &b, &CircuitParams::CANONICAL, &scan, 0).unwrap();
        assert_eq!(r.rows.len(), 6);
        assert!((0.0..=1.0).contains(&r.violation_rate));
        let bad = NoiseScan { factor: 0.5, ..scan };
        assert!(run_noise_scan(&a, &b, &CircuitParams::CANONICAL, &bad, 0).is_err());
    }
}
