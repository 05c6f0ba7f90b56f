//! Experiment harness: validation suites, sweeps, the broom study, SRG and
//! CFI campaigns, and plot-data emission.
//!
//! Every runner is deterministic given its inputs and seed, and returns a
//! serializable report. [`write_artifact`] bundles the report with the
//! [`ExperimentConfig`] that produced it.

mod broom;
mod campaigns;
mod noise_scan;
mod profile;
mod sweep;
mod validate;

pub use broom::{run_broom_study, BroomReport, BroomRow, BroomStudy, Crossing};
pub use campaigns::{run_cfi_campaign, run_srg_suite, srg_pairs, CfiCampaign, CfiEntry, CfiOutcome, CfiRun};
pub use noise_scan::{noisy_separation, run_noise_scan, NoiseScan, NoiseScanReport, NoiseScanRow};
pub use profile::{run_head_profile, run_shot_scaling, HeadRow, ShotRow};
pub use sweep::{parse_grid, reps_instance_set, run_sweep, SweepAxis, SweepInstances, SweepRow};
pub use validate::{
    default_family_pairs, run_validate_exhaustive, run_validate_families, ExhaustiveOptions, ExhaustivePair,
    ExhaustiveReport, FamiliesReport, SizeSummary,
};

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::embed::{l1_distance, sort_distribution, truncate_head, SortedDistribution, DEFAULT_HEAD};
use crate::error::Result;
use crate::graph::{FamilySpec, Graph};
use crate::noise::{run_noisy, NoiseSpec};
use crate::qsim::{self, CircuitParams};
use crate::rng::child_seed;
use crate::sampling::sample_counts;
use crate::stats::{separation_test, Comparison, SeparationConfig, SeparationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Embed,
    Compare,
    ValidateExhaustive,
    ValidateFamilies,
    SrgSuite,
    Cfi,
    Broom,
    Sweep,
    ShotScaling,
    HeadProfile,
    NoiseScan,
}

/// Shot budget and comparison settings shared by the finite-shot studies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingConfig {
    /// Shots in each full histogram.
    pub shots: u64,
    /// Shots per subsample (`m`).
    pub subsample: u64,
    /// Null and signal repeats (`R`).
    pub repeats: usize,
    /// Head length `k` (0 = untruncated).
    pub head: usize,
    pub threshold: f64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            shots: 1 << 15,
            subsample: 1 << 12,
            repeats: 64,
            head: DEFAULT_HEAD,
            threshold: 3.0,
        }
    }
}

impl SamplingConfig {
    pub fn separation(&self, seed: u64) -> SeparationConfig {
        SeparationConfig {
            subsample: self.subsample,
            repeats: self.repeats,
            head: self.head,
            threshold: self.threshold,
            seed,
            comparison: Comparison::Sorted,
        }
    }
}

/// Everything needed to re-run an experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub params: CircuitParams,
    pub sampling: SamplingConfig,
    #[serde(default)]
    pub families: Vec<FamilySpec>,
    #[serde(default)]
    pub noise: Option<NoiseSpec>,
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Runner-specific options, echoed verbatim.
    #[serde(default)]
    pub extra: serde_json::Value,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind, seed: u64) -> Self {
        ExperimentConfig {
            experiment,
            params: CircuitParams::CANONICAL,
            sampling: SamplingConfig::default(),
            families: Vec::new(),
            noise: None,
            seed,
            output: None,
            extra: serde_json::Value::Null,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Artifact<T> {
    pub config: ExperimentConfig,
    pub results: T,
}

/// Write `{config, results}` as pretty JSON, creating parent directories.
pub fn write_artifact<T: Serialize>(path: &Path, config: &ExperimentConfig, results: &T) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let artifact = Artifact {
        config: config.clone(),
        results,
    };
    fs::write(path, serde_json::to_string_pretty(&artifact)?)?;
    Ok(())
}

/// Write rows as CSV with a header taken from the row type's field names.
pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Exact distances and an optional finite-shot separation for one pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairComparison {
    pub id: String,
    pub qubits: (usize, usize),
    pub reps: usize,
    /// Untruncated sorted L1 (shorter side zero-padded).
    pub exact_l1: f64,
    /// Sorted L1 of the head-`k` embeddings.
    pub head_l1: f64,
    pub separation: Option<SeparationReport>,
    #[serde(default)]
    pub noise: Option<NoiseSpec>,
}

pub(crate) fn exact_sorted(g: &Graph, params: &CircuitParams) -> Result<(Vec<f64>, SortedDistribution)> {
    let p = qsim::output_distribution(&qsim::run_circuit(g, params)?);
    let sorted = sort_distribution(&p)?;
    Ok((p, sorted))
}

pub(crate) fn padded_l1(a: &SortedDistribution, b: &SortedDistribution) -> Result<f64> {
    let len = a.len().max(b.len());
    l1_distance(&a.padded(len), &b.padded(len))
}

/// Compare `a` and `b`: exact sorted distances, plus the null/signal test on
/// `sampling.shots`-shot histograms when `with_shots` is set (noisy if
/// `noise` is given).
#[allow(clippy::too_many_arguments)]
pub fn compare_pair(
    id: impl Into<String>,
    a: &Graph,
    b: &Graph,
    params: &CircuitParams,
    sampling: &SamplingConfig,
    noise: Option<&NoiseSpec>,
    with_shots: bool,
    seed: u64,
) -> Result<PairComparison> {
    let (pa, sa) = exact_sorted(a, params)?;
    let (pb, sb) = exact_sorted(b, params)?;
    let head = if sampling.head == 0 {
        sa.len().max(sb.len())
    } else {
        sampling.head
    };
    let separation = if with_shots {
        let (ha, hb) = match noise {
            Some(spec) => (
                run_noisy(a, params, spec, sampling.shots, child_seed(seed, 0))?,
                run_noisy(b, params, spec, sampling.shots, child_seed(seed, 1))?,
            ),
            None => (
                sample_counts(&pa, sampling.shots, child_seed(seed, 0))?,
                sample_counts(&pb, sampling.shots, child_seed(seed, 1))?,
            ),
        };
        Some(separation_test(&ha, &hb, &sampling.separation(child_seed(seed, 2)))?)
    } else {
        None
    };
    Ok(PairComparison {
        id: id.into(),
        qubits: (a.n(), b.n()),
        reps: params.reps,
        exact_l1: padded_l1(&sa, &sb)?,
        head_l1: l1_distance(&truncate_head(&sa, head), &truncate_head(&sb, head))?,
        separation,
        noise: noise.copied(),
    })
}
