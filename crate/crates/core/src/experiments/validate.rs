//! Exhaustive small-graph validation and family rewiring pairs.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{compare_pair, padded_l1, PairComparison, SamplingConfig};
use crate::embed::{sort_distribution, SortedDistribution};
use crate::error::{invalid, Result};
use crate::graph::{all_graphs, generate, rewire_degree_preserving, FamilySpec, Graph};
use crate::noise::NoiseSpec;
use crate::qsim::{self, CircuitParams};
use crate::rng::{self, child_seed};
use crate::sampling::sample_counts;
use crate::stats::separation_test;
use crate::tolerance;

/// Largest order the exhaustive suite accepts.
pub const MAX_EXHAUSTIVE_N: usize = 7;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExhaustiveOptions {
    /// Also run the finite-shot z-test on every pair.
    pub with_shots: bool,
    /// Keep every pair in the report, not just failures and closest pairs.
    pub keep_pairs: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExhaustivePair {
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub exact_l1: f64,
    pub z: Option<f64>,
    pub pass: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeSummary {
    pub n: usize,
    pub graphs: usize,
    pub pairs: usize,
    pub separated: usize,
    pub min_l1: Option<f64>,
    pub closest: Option<ExhaustivePair>,
    /// Largest l1 between a graph and a random relabeling of itself.
    pub max_control_l1: f64,
    pub shot_passes: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExhaustiveReport {
    pub max_n: usize,
    pub reps: usize,
    pub sizes: Vec<SizeSummary>,
    /// Non-isomorphic pairs with l1 at or below the separation tolerance.
    pub false_merges: usize,
    /// Isomorphic controls with l1 above the exact tolerance.
    pub false_splits: usize,
    pub separated_fraction: f64,
    pub shot_pass_fraction: Option<f64>,
    pub pairs: Vec<ExhaustivePair>,
}

fn relabeled(g: &Graph, seed: u64) -> Graph {
    let mut perm: Vec<usize> = (0..g.n()).collect();
    perm.shuffle(&mut rng::seeded(seed));
    g.permute(&perm).expect("shuffled identity is a permutation")
}

fn sorted_exact(g: &Graph, params: &CircuitParams) -> Result<SortedDistribution> {
    sort_distribution(&qsim::output_distribution(&qsim::run_circuit(g, params)?))
}

/// Every isomorphism class on `1..=max_n` vertices; every non-isomorphic pair
/// of equal order is compared on exact sorted distributions (and optionally
/// the z-test), and every graph is compared with a random relabeling of
/// itself as a control.
pub fn run_validate_exhaustive(
    max_n: usize,
    params: &CircuitParams,
    sampling: &SamplingConfig,
    opts: &ExhaustiveOptions,
    seed: u64,
) -> Result<ExhaustiveReport> {
    if max_n == 0 || max_n > MAX_EXHAUSTIVE_N {
        return Err(invalid("max_n", format!("must be in 1..={MAX_EXHAUSTIVE_N}")));
    }
    params.validate()?;
    let mut sizes = Vec::new();
    let mut kept = Vec::new();
    let (mut false_merges, mut false_splits, mut total_pairs, mut separated) = (0, 0, 0usize, 0usize);
    let mut shot_passes_total = 0usize;
    for n in 1..=max_n {
        let graphs = all_graphs(n);
        let embeds = graphs
            .par_iter()
            .map(|g| sorted_exact(g, params))
            .collect::<Result<Vec<_>>>()?;
        let controls = graphs
            .par_iter()
            .enumerate()
            .map(|(i, g)| {
                let h = relabeled(g, child_seed(seed, (n * 100_000 + i) as u64));
                padded_l1(&embeds[i], &sorted_exact(&h, params)?)
            })
            .collect::<Result<Vec<f64>>>()?;
        false_splits += controls.iter().filter(|&&l| l > tolerance::EXACT).count();
        let index_pairs: Vec<(usize, usize)> = (0..graphs.len())
            .flat_map(|a| (a + 1..graphs.len()).map(move |b| (a, b)))
            .collect();
        let results = index_pairs
            .par_iter()
            .map(|&(a, b)| {
                let exact_l1 = padded_l1(&embeds[a], &embeds[b])?;
                let (z, pass) = if opts.with_shots {
                    let pair_seed = child_seed(seed, ((n as u64) << 40) | ((a as u64) << 20) | b as u64);
                    let p = |g: &Graph| qsim::run_circuit(g, params).map(|sv| qsim::output_distribution(&sv));
                    let ha = sample_counts(&p(&graphs[a])?, sampling.shots, child_seed(pair_seed, 0))?;
                    let hb = sample_counts(&p(&graphs[b])?, sampling.shots, child_seed(pair_seed, 1))?;
                    let r = separation_test(&ha, &hb, &sampling.separation(child_seed(pair_seed, 2)))?;
                    (Some(r.z), Some(r.pass))
                } else {
                    (None, None)
                };
                Ok(ExhaustivePair {
                    n,
                    a,
                    b,
                    exact_l1,
                    z,
                    pass,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let merges: Vec<&ExhaustivePair> = results.iter().filter(|p| p.exact_l1 <= tolerance::CROSS_PATH).collect();
        false_merges += merges.len();
        let sep = results.len() - merges.len();
        let shot_passes = opts
            .with_shots
            .then(|| results.iter().filter(|p| p.pass == Some(true)).count());
        shot_passes_total += shot_passes.unwrap_or(0);
        let closest = results.iter().min_by(|x, y| x.exact_l1.total_cmp(&y.exact_l1)).cloned();
        sizes.push(SizeSummary {
            n,
            graphs: graphs.len(),
            pairs: results.len(),
            separated: sep,
            min_l1: closest.as_ref().map(|p| p.exact_l1),
            closest,
            max_control_l1: controls.iter().copied().fold(0.0, f64::max),
            shot_passes,
        });
        total_pairs += results.len();
        separated += sep;
        if opts.keep_pairs {
            kept.extend(results);
        } else {
            kept.extend(merges.into_iter().cloned());
            kept.extend(results.into_iter().filter(|p| p.pass == Some(false)));
        }
    }
    let frac = |k: usize| {
        if total_pairs == 0 {
            1.0
        } else {
            k as f64 / total_pairs as f64
        }
    };
    Ok(ExhaustiveReport {
        max_n,
        reps: params.reps,
        sizes,
        false_merges,
        false_splits,
        separated_fraction: frac(separated),
        shot_pass_fraction: opts.with_shots.then(|| frac(shot_passes_total)),
        pairs: kept,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamiliesReport {
    pub pairs: Vec<PairComparison>,
    pub exact_separated: usize,
    pub shot_passes: usize,
}

/// Rewired ER/BA pairs plus the structured hard families.
pub fn default_family_pairs(seed: u64) -> Result<Vec<(String, Graph, Graph)>> {
    let mut out = Vec::new();
    for n in [8usize, 10, 12] {
        for i in 0..2u64 {
            let s = child_seed(seed, (n as u64) * 16 + i);
            for spec in [
                FamilySpec::Er { n, p: 0.35, seed: s },
                FamilySpec::Ba { n, m: 2, seed: s },
            ] {
                let g = generate(&spec)?;
                let h = rewire_degree_preserving(&g, 200, child_seed(s, 1))?;
                out.push((format!("{spec}~rewired"), g, h));
            }
        }
    }
    let chorded = |k| FamilySpec::ChordedCycle { n: 10, k };
    let inscribed = |k| FamilySpec::InscribedTriangleCycle { n: 10, k };
    let structured = [
        (chorded(2), chorded(3)),
        (chorded(3), chorded(5)),
        (chorded(4), chorded(5)),
        (inscribed(3), inscribed(4)),
        (inscribed(4), inscribed(5)),
        (
            FamilySpec::TwistedLadder { n: 12, twisted: false },
            FamilySpec::TwistedLadder { n: 12, twisted: true },
        ),
        (
            FamilySpec::Broom {
                n: 12,
                pendants: 2,
                pendant_edge: false,
            },
            FamilySpec::Broom {
                n: 12,
                pendants: 2,
                pendant_edge: true,
            },
        ),
    ];
    for (a, b) in structured {
        out.push((format!("{a}|{b}"), generate(&a)?, generate(&b)?));
    }
    Ok(out)
}

pub fn run_validate_families(
    pairs: &[(String, Graph, Graph)],
    params: &CircuitParams,
    sampling: &SamplingConfig,
    noise: Option<&NoiseSpec>,
    seed: u64,
) -> Result<FamiliesReport> {
    let results = pairs
        .iter()
        .enumerate()
        .map(|(i, (id, a, b))| {
            compare_pair(
                id.clone(),
                a,
                b,
                params,
                sampling,
                noise,
                true,
                child_seed(seed, i as u64),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FamiliesReport {
        exact_separated: results.iter().filter(|r| r.exact_l1 > tolerance::CROSS_PATH).count(),
        shot_passes: results
            .iter()
            .filter(|r| r.separation.as_ref().is_some_and(|s| s.pass))
            .count(),
        pairs: results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_vertices_has_eleven_graphs_and_55_pairs() {
        let r = run_validate_exhaustive(
            4,
            &CircuitParams::CANONICAL.with_reps(1),
            &SamplingConfig::default(),
            &ExhaustiveOptions::default(),
            1,
        )
        .unwrap();
        let four = &r.sizes[3];
        assert_eq!((four.graphs, four.pairs), (11, 55));
        assert_eq!(four.separated, 55);
        assert_eq!((r.false_merges, r.false_splits), (0, 0));
        assert!(four.min_l1.unwrap() > 1e-9);
    }

    #[test]
    fn rejects_oversized_enumeration() {
        let p = CircuitParams::CANONICAL;
        assert!(run_validate_exhaustive(8, &p, &SamplingConfig::default(), &ExhaustiveOptions::default(), 0).is_err());
    }

    #[test]
    fn family_pairs_are_non_isomorphic_with_matching_degrees() {
        for (id, a, b) in default_family_pairs(3).unwrap() {
            assert!(!crate::graph::is_isomorphic(&a, &b), "{id}");
            if id.contains("rewired") {
                assert_eq!(a.degree_sequence(), b.degree_sequence(), "{id}");
            }
        }
    }
}
