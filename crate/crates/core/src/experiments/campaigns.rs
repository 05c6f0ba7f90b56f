//! Strongly regular / regular hard pairs and CFI campaigns.

use serde::{Deserialize, Serialize};

use super::{compare_pair, PairComparison, SamplingConfig};
use crate::cfi::{build_cfi, cfi_size};
use crate::error::Result;
use crate::graph::{generate, is_isomorphic, wl_equivalent, FamilySpec, Graph, NamedGraph};
use crate::noise::NoiseSpec;
use crate::qsim::{CircuitParams, DEFAULT_MAX_QUBITS};
use crate::rng::child_seed;

/// The four co-spectral-style regular pairs: Shrikhande vs 4x4 rook (16),
/// Petersen vs pentagonal prism (10), cube vs C8(1,4) (8), L(K_{2,4}) vs
/// C8(1,2) (8).
pub fn srg_pairs() -> Vec<(String, Graph, Graph)> {
    use NamedGraph::*;
    [
        (Shrikhande, Rook4x4),
        (Petersen, Prism5),
        (Cube, Circulant8_1_4),
        (LineK24, Circulant8_1_2),
    ]
    .into_iter()
    .map(|(a, b)| {
        let g = |name| generate(&FamilySpec::Named { name }).expect("named graphs build");
        (format!("{}|{}", a.as_str(), b.as_str()), g(a), g(b))
    })
    .collect()
}

/// Every pair noiseless, and again under `noise` when given.
pub fn run_srg_suite(
    params: &CircuitParams,
    sampling: &SamplingConfig,
    noise: Option<&NoiseSpec>,
    seed: u64,
) -> Result<Vec<PairComparison>> {
    let mut out = Vec::new();
    for (i, (id, a, b)) in srg_pairs().into_iter().enumerate() {
        let s = child_seed(seed, i as u64);
        out.push(compare_pair(id.clone(), &a, &b, params, sampling, None, true, s)?);
        if let Some(spec) = noise {
            out.push(compare_pair(id, &a, &b, params, sampling, Some(spec), true, s)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CfiRun {
    pub reps: usize,
    pub comparison: PairComparison,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CfiOutcome {
    Skipped {
        ceiling: usize,
    },
    Ran {
        /// Oracle verdict, when the pair is small enough to certify.
        non_isomorphic: Option<bool>,
        refinement_equivalent: bool,
        runs: Vec<CfiRun>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CfiEntry {
    pub base: String,
    pub qubits: usize,
    pub twist_edge: Option<(usize, usize)>,
    pub outcome: CfiOutcome,
}

/// Campaign settings beyond the circuit and sampling configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CfiCampaign {
    pub bases: Vec<FamilySpec>,
    pub reps: Vec<usize>,
    pub max_qubits: usize,
    /// Run the isomorphism oracle on pairs up to this many vertices.
    pub certify_up_to: usize,
    pub noise: Option<NoiseSpec>,
}

impl Default for CfiCampaign {
    fn default() -> Self {
        CfiCampaign {
            bases: Vec::new(),
            reps: vec![1, 2],
            max_qubits: DEFAULT_MAX_QUBITS,
            certify_up_to: 24,
            noise: None,
        }
    }
}

/// Untwisted vs twisted for each base at every repetition count. Bases
/// whose CFI graphs exceed `max_qubits` are reported as skipped.
pub fn run_cfi_campaign(
    campaign: &CfiCampaign,
    params: &CircuitParams,
    sampling: &SamplingConfig,
    seed: u64,
) -> Result<Vec<CfiEntry>> {
    let mut out = Vec::new();
    for (bi, spec) in campaign.bases.iter().enumerate() {
        let base = generate(spec)?;
        let qubits = cfi_size(&base)?;
        if qubits > campaign.max_qubits {
            out.push(CfiEntry {
                base: spec.to_string(),
                qubits,
                twist_edge: None,
                outcome: CfiOutcome::Skipped {
                    ceiling: campaign.max_qubits,
                },
            });
            continue;
        }
        let pair = build_cfi(&base, None)?;
        let non_isomorphic = (qubits <= campaign.certify_up_to).then(|| !is_isomorphic(&pair.untwisted, &pair.twisted));
        let runs = campaign
            .reps
            .iter()
            .map(|&reps| {
                let comparison = compare_pair(
                    format!("cfi({spec})"),
                    &pair.untwisted,
                    &pair.twisted,
                    &params.with_reps(reps),
                    sampling,
                    campaign.noise.as_ref(),
                    true,
                    child_seed(seed, ((bi as u64) << 8) | reps as u64),
                )?;
                Ok(CfiRun { reps, comparison })
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(CfiEntry {
            base: spec.to_string(),
            qubits,
            twist_edge: Some(pair.twist_edge),
            outcome: CfiOutcome::Ran {
                non_isomorphic,
                refinement_equivalent: wl_equivalent(&pair.untwisted, &pair.twisted),
                runs,
            },
        });
    }
    Ok(out)
}
