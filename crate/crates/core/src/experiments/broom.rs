//! Global-encoding study on brooms: how far along the handle does a local
//! change at the head stay visible?
//!
//! Two brooms differ only by an edge between two leaves at the centroid. For
//! each cutoff `h`, the qubits of the centroid, its leaves and the first `h`
//! handle vertices are kept and the rest are traced out. Distances here are
//! label-aligned: both graphs share one labeling, and the question is whether
//! the retained marginal changes at all.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embed::{aligned_l1, sort_distribution};
use crate::error::{invalid, Result};
use crate::graph::{generate, FamilySpec};
use crate::qsim::{self, marginalize, CircuitParams};
use crate::rng::child_seed;
use crate::sampling::sample_counts;
use crate::stats::{null_percentile_threshold, Comparison, SeparationConfig};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BroomStudy {
    pub n: usize,
    pub pendants: usize,
    pub reps: Vec<usize>,
    /// Shots in the reference histogram the null draws are taken from.
    pub reference_shots: u64,
    /// Shots per null draw.
    pub subsample: u64,
    pub repeats: usize,
    pub percentile: f64,
}

impl Default for BroomStudy {
    fn default() -> Self {
        BroomStudy {
            n: 17,
            pendants: 2,
            reps: vec![1, 2, 3],
            reference_shots: 1 << 20,
            subsample: 1 << 12,
            repeats: 256,
            percentile: 95.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BroomRow {
    pub reps: usize,
    pub cutoff: usize,
    pub retained: usize,
    /// Label-aligned L1 between the two exact marginals.
    pub exact_l1: f64,
    /// Sorted L1 between the same marginals, for reference.
    pub sorted_l1: f64,
    pub null_95: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub reps: usize,
    /// Fewest retained qubits at which the null percentile exceeds the exact
    /// signal; `None` if it never does.
    pub retained: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BroomReport {
    pub rows: Vec<BroomRow>,
    pub crossings: Vec<Crossing>,
}

impl BroomReport {
    pub fn rows_for(&self, reps: usize) -> impl Iterator<Item = &BroomRow> {
        self.rows.iter().filter(move |r| r.reps == reps)
    }
}

pub fn run_broom_study(study: &BroomStudy, params: &CircuitParams, seed: u64) -> Result<BroomReport> {
    if study.reps.is_empty() {
        return Err(invalid("reps", "at least one repetition count required"));
    }
    let base = generate(&FamilySpec::Broom {
        n: study.n,
        pendants: study.pendants,
        pendant_edge: false,
    })?;
    let variant = generate(&FamilySpec::Broom {
        n: study.n,
        pendants: study.pendants,
        pendant_edge: true,
    })?;
    let head = study.pendants + 1;
    let cutoffs = 0..=study.n - head;
    let mut rows = Vec::new();
    let mut crossings = Vec::new();
    for (ri, &reps) in study.reps.iter().enumerate() {
        let p = params.with_reps(reps);
        let pa = qsim::output_distribution(&qsim::run_circuit(&base, &p)?);
        let pb = qsim::output_distribution(&qsim::run_circuit(&variant, &p)?);
        let reference = sample_counts(&pa, study.reference_shots, child_seed(seed, ri as u64))?;
        let cfg = SeparationConfig {
            subsample: study.subsample,
            repeats: study.repeats,
            head: 0,
            threshold: 3.0,
            seed: child_seed(seed, 1000 + ri as u64),
            comparison: Comparison::Aligned,
        };
        let mut these = cutoffs
            .clone()
            .into_par_iter()
            .map(|h| {
                let keep: Vec<usize> = (0..head + h).collect();
                let ma = marginalize(&pa, &keep)?;
                let mb = marginalize(&pb, &keep)?;
                let sorted_l1 = crate::embed::l1_distance(&sort_distribution(&ma)?, &sort_distribution(&mb)?)?;
                let null = reference.marginal(&keep)?;
                Ok(BroomRow {
                    reps,
                    cutoff: h,
                    retained: keep.len(),
                    exact_l1: aligned_l1(&ma, &mb)?,
                    sorted_l1,
                    null_95: null_percentile_threshold(
                        &null,
                        study.percentile,
                        &SeparationConfig {
                            seed: child_seed(cfg.seed, h as u64),
                            ..cfg
                        },
                    )?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        these.sort_by_key(|r| r.cutoff);
        crossings.push(Crossing {
            reps,
            retained: these.iter().find(|r| r.null_95 > r.exact_l1).map(|r| r.retained),
        });
        rows.extend(these);
    }
    Ok(BroomReport { rows, crossings })
}
