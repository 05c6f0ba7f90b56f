//! One-axis parameter sweeps, ranked by mean z (angle axes) or by mean
//! pairwise total-variation distance (repetition axis).

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{compare_pair, padded_l1, SamplingConfig};
use crate::embed::{sort_distribution, SortedDistribution};
use crate::error::{invalid, Error, Result};
use crate::graph::{generate, is_isomorphic, FamilySpec, Graph};
use crate::qsim::{self, CircuitParams};
use crate::rng::child_seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    Enc,
    Ent,
    Mix,
    Reps,
}

impl SweepAxis {
    pub fn apply(self, base: &CircuitParams, value: f64) -> Result<CircuitParams> {
        let mut p = *base;
        match self {
            SweepAxis::Enc => p.theta_enc = value,
            SweepAxis::Ent => p.theta_ent = value,
            SweepAxis::Mix => p.theta_mix = value,
            SweepAxis::Reps => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(invalid(
                        "grid",
                        format!("repetition count {value} is not a positive integer"),
                    ));
                }
                p.reps = value as usize;
            }
        }
        p.validate()?;
        Ok(p)
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepAxis::Enc => "enc",
            SweepAxis::Ent => "ent",
            SweepAxis::Mix => "mix",
            SweepAxis::Reps => "reps",
        })
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "enc" => Ok(SweepAxis::Enc),
            "ent" => Ok(SweepAxis::Ent),
            "mix" => Ok(SweepAxis::Mix),
            "reps" => Ok(SweepAxis::Reps),
            other => Err(invalid("axis", format!("unknown axis {other:?}"))),
        }
    }
}

/// Parse `start:stop:step` (inclusive of `stop` up to rounding) or a comma
/// list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{t:?}: {e}")));
    let grid: Vec<f64> = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, step] = parts[..] else {
            return Err(Error::Parse(format!("range {s:?} must be start:stop:step")));
        };
        let (a, b, step) = (num(a)?, num(b)?, num(step)?);
        if step.is_nan() || step <= 0.0 || b < a {
            return Err(invalid("grid", "range needs step > 0 and stop >= start"));
        }
        let count = ((b - a) / step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| a + i as f64 * step).collect()
    } else {
        s.split(',').map(num).collect::<Result<_>>()?
    };
    if grid.is_empty() || grid.iter().any(|v| !v.is_finite()) {
        return Err(invalid("grid", "grid must be non-empty and finite"));
    }
    Ok(grid)
}

/// What a sweep scores.
#[derive(Clone, Debug)]
pub enum SweepInstances {
    /// Non-isomorphic pairs, scored by the z-test.
    Pairs(Vec<(String, Graph, Graph)>),
    /// Named graph sets, scored by mean pairwise TV distance between exact
    /// sorted distributions over non-isomorphic pairs within each set.
    Sets(Vec<(String, Vec<Graph>)>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis: SweepAxis,
    pub value: f64,
    pub family: String,
    pub instances: usize,
    pub mean_z: Option<f64>,
    pub worst_z: Option<f64>,
    pub passes: Option<usize>,
    pub mean_tv: Option<f64>,
    /// 1 = best within the family.
    pub rank: usize,
}

/// ER(n, 0.4) and BA(n, 2) for n in {8, 10, 12, 16}, four seeds each.
pub fn reps_instance_set(seed: u64) -> Result<Vec<(String, Vec<Graph>)>> {
    let sizes = [8usize, 10, 12, 16];
    let build = |f: &dyn Fn(usize, u64) -> FamilySpec| -> Result<Vec<Graph>> {
        sizes
            .iter()
            .flat_map(|&n| (0..4u64).map(move |k| (n, k)))
            .map(|(n, k)| generate(&f(n, child_seed(seed, n as u64 * 8 + k))))
            .collect()
    };
    Ok(vec![
        ("er".to_string(), build(&|n, seed| FamilySpec::Er { n, p: 0.4, seed })?),
        ("ba".to_string(), build(&|n, seed| FamilySpec::Ba { n, m: 2, seed })?),
    ])
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn mean_pairwise_tv(graphs: &[Graph], params: &CircuitParams) -> Result<(f64, usize)> {
    let embeds = graphs
        .par_iter()
        .map(|g| sort_distribution(&qsim::output_distribution(&qsim::run_circuit(g, params)?)))
        .collect::<Result<Vec<SortedDistribution>>>()?;
    let mut tvs = Vec::new();
    for i in 0..graphs.len() {
        for j in i + 1..graphs.len() {
            if graphs[i].n() == graphs[j].n() && is_isomorphic(&graphs[i], &graphs[j]) {
                continue;
            }
            tvs.push(padded_l1(&embeds[i], &embeds[j])? / 2.0);
        }
    }
    Ok((mean(&tvs), tvs.len()))
}

pub fn run_sweep(
    axis: SweepAxis,
    grid: &[f64],
    instances: &SweepInstances,
    base: &CircuitParams,
    sampling: &SamplingConfig,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    if grid.is_empty() {
        return Err(invalid("grid", "grid must be non-empty"));
    }
    let mut rows = Vec::new();
    for &value in grid {
        let params = axis.apply(base, value)?;
        match instances {
            SweepInstances::Pairs(pairs) => {
                let zs = pairs
                    .iter()
                    .enumerate()
                    .map(|(pi, (id, a, b))| {
                        // same seeds at every grid point
                        let c = compare_pair(
                            id.clone(),
                            a,
                            b,
                            &params,
                            sampling,
                            None,
                            true,
                            child_seed(seed, pi as u64),
                        )?;
                        Ok(c.separation.expect("shots requested"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let z: Vec<f64> = zs.iter().map(|r| r.z).collect();
                rows.push(SweepRow {
                    axis,
                    value,
                    family: "pairs".into(),
                    instances: pairs.len(),
                    mean_z: Some(mean(&z)),
                    worst_z: z.iter().copied().reduce(f64::min),
                    passes: Some(zs.iter().filter(|r| r.pass).count()),
                    mean_tv: None,
                    rank: 0,
                });
            }
            SweepInstances::Sets(sets) => {
                for (name, graphs) in sets {
                    let (tv, count) = mean_pairwise_tv(graphs, &params)?;
                    rows.push(SweepRow {
                        axis,
                        value,
                        family: name.clone(),
                        instances: count,
                        mean_z: None,
                        worst_z: None,
                        passes: None,
                        mean_tv: Some(tv),
                        rank: 0,
                    });
                }
            }
        }
    }
    rank_rows(&mut rows);
    Ok(rows)
}

fn rank_rows(rows: &mut [SweepRow]) {
    let score = |r: &SweepRow| r.mean_z.or(r.mean_tv).unwrap_or(f64::NEG_INFINITY);
    let families: Vec<String> = rows.iter().map(|r| r.family.clone()).collect();
    for fam in families {
        let mut idx: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].family == fam).collect();
        idx.sort_by(|&a, &b| score(&rows[b]).total_cmp(&score(&rows[a])));
        for (rank, i) in idx.into_iter().enumerate() {
            rows[i].rank = rank + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("2.0:2.5:0.125").unwrap(), vec![2.0, 2.125, 2.25, 2.375, 2.5]);
        assert_eq!(parse_grid("2.0:3.5:0.125").unwrap().len(), 13);
        assert_eq!(parse_grid("1,2,4").unwrap(), vec![1.0, 2.0, 4.0]);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("").is_err());
        assert!(parse_grid("1:2").is_err());
    }

    #[test]
    fn axis_application() {
        let p = CircuitParams::CANONICAL;
        assert_eq!(SweepAxis::Mix.apply(&p, 0.3).unwrap().theta_mix, 0.3);
        assert_eq!(SweepAxis::Reps.apply(&p, 3.0).unwrap().reps, 3);
        assert!(SweepAxis::Reps.apply(&p, 1.5).is_err());
        assert_eq!("enc".parse::<SweepAxis>().unwrap(), SweepAxis::Enc);
    }

    #[test]
    fn single_point_grid_gives_one_row() {
        let a = generate(&FamilySpec::Path { n: 5 }).unwrap();
        let b = generate(&FamilySpec::Star { n: 5 }).unwrap();
        let inst = SweepInstances::Pairs(vec![("p5-s5".into(), a, b)]);
        let rows = run_sweep(
            SweepAxis::Enc,
            &[2.875],
            &inst,
            &CircuitParams::CANONICAL,
            &SamplingConfig::default(),
            1,
        )
        .unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].rank, 1);
    }

    #[test]
    fn tv_sets_rank_per_family() {
        let sets = SweepInstances::Sets(vec![(
            "small".into(),
            vec![
                generate(&FamilySpec::Path { n: 5 }).unwrap(),
                generate(&FamilySpec::Star { n: 5 }).unwrap(),
                generate(&FamilySpec::Cycle { n: 5 }).unwrap(),
            ],
        )]);
        let rows = run_sweep(
            SweepAxis::Reps,
            &[1.0, 2.0],
            &sets,
            &CircuitParams::CANONICAL,
            &SamplingConfig::default(),
            0,
        )
        .unwrap();
        assert_eq!(rows.len(), 2);
        let mut ranks: Vec<usize> = rows.iter().map(|r| r.rank).collect();
        ranks.sort();
        assert_eq!(ranks, vec![1, 2]);
        assert!(rows.iter().all(|r| r.instances == 3));
    }
}
