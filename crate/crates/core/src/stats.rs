//! Null/signal separation: L1 distances between subsampled embeddings of the
//! same circuit (null) and of two circuits (signal), summarised as
//! `z = (μ_signal − μ_null) / σ_pooled`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embed::{l1_distance, truncate_head, DEFAULT_HEAD};
use crate::error::{invalid, Error, Result};
use crate::rng::child_seed;
use crate::sampling::{subsample, CountsHistogram};

/// How two histograms are compared.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// Sorted frequencies, truncated to the head length (0 = untruncated).
    #[default]
    Sorted,
    /// Outcome-by-outcome frequencies, no sorting. Both histograms must share
    /// a vertex labeling.
    Aligned,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationConfig {
    /// Shots per subsample (`m`).
    pub subsample: u64,
    /// Null and signal samples drawn (`R`).
    pub repeats: usize,
    /// Head length `k`; 0 compares untruncated distributions.
    pub head: usize,
    pub threshold: f64,
    pub seed: u64,
    #[serde(default)]
    pub comparison: Comparison,
}

impl Default for SeparationConfig {
    fn default() -> Self {
        SeparationConfig {
            subsample: 1 << 12,
            repeats: 64,
            head: DEFAULT_HEAD,
            threshold: 3.0,
            seed: 0,
            comparison: Comparison::Sorted,
        }
    }
}

impl SeparationConfig {
    pub fn with_seed(self, seed: u64) -> Self {
        SeparationConfig { seed, ..self }
    }

    fn validate(&self) -> Result<()> {
        if self.repeats < 2 {
            return Err(invalid("repeats", "need at least two samples for a variance"));
        }
        if !self.threshold.is_finite() {
            return Err(invalid("threshold", "must be finite"));
        }
        Ok(())
    }
}

/// Distance between two histograms under `cfg`.
pub fn histogram_distance(a: &CountsHistogram, b: &CountsHistogram, cfg: &SeparationConfig) -> Result<f64> {
    match cfg.comparison {
        Comparison::Sorted => {
            let (da, db) = (a.sorted(), b.sorted());
            if cfg.head > 0 {
                l1_distance(&truncate_head(&da, cfg.head), &truncate_head(&db, cfg.head))
            } else {
                let len = da.len().max(db.len());
                l1_distance(&da.padded(len), &db.padded(len))
            }
        }
        Comparison::Aligned => {
            if a.n() != b.n() {
                return Err(Error::LengthMismatch {
                    expected: a.n(),
                    got: b.n(),
                });
            }
            Ok(aligned_sparse_l1(a, b))
        }
    }
}

fn aligned_sparse_l1(a: &CountsHistogram, b: &CountsHistogram) -> f64 {
    let (na, nb) = (a.shots().max(1) as f64, b.shots().max(1) as f64);
    let mut ia = a.iter().peekable();
    let mut ib = b.iter().peekable();
    let mut total = 0.0;
    loop {
        let (fa, fb) = match (ia.peek().copied(), ib.peek().copied()) {
            (None, None) => break,
            (Some((xa, ca)), Some((xb, cb))) if xa == xb => {
                ia.next();
                ib.next();
                (ca, cb)
            }
            (Some((xa, ca)), Some((xb, _))) if xa < xb => {
                ia.next();
                (ca, 0)
            }
            (Some((_, ca)), None) => {
                ia.next();
                (ca, 0)
            }
            (_, Some((_, cb))) => {
                ib.next();
                (0, cb)
            }
        };
        total += (fa as f64 / na - fb as f64 / nb).abs();
    }
    total
}

/// Means, pooled deviation and z-score of a null and a signal sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZSummary {
    pub mu_null: f64,
    pub mu_signal: f64,
    pub sigma_pooled: f64,
    pub z: f64,
    /// Both samples have zero variance; `z` is then ±∞ or 0 by the sign of
    /// the mean difference.
    pub degenerate: bool,
}

fn mean_var(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = if x.len() > 1 {
        x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var)
}

/// `σ_pooled = sqrt((s²_null + s²_signal) / 2)` with unbiased variances.
pub fn z_score(null: &[f64], signal: &[f64]) -> ZSummary {
    let (mu_null, var_null) = mean_var(null);
    let (mu_signal, var_signal) = mean_var(signal);
    let sigma_pooled = ((var_null + var_signal) / 2.0).sqrt();
    let diff = mu_signal - mu_null;
    let degenerate = sigma_pooled == 0.0;
    let z = if !degenerate {
        diff / sigma_pooled
    } else if diff > 0.0 {
        f64::INFINITY
    } else if diff < 0.0 {
        f64::NEG_INFINITY
    } else {
        0.0
    };
    ZSummary {
        mu_null,
        mu_signal,
        sigma_pooled,
        z,
        degenerate,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub config: SeparationConfig,
    pub qubits: (usize, usize),
    pub shots: (u64, u64),
    pub null_l1: Vec<f64>,
    pub signal_l1: Vec<f64>,
    pub mu_null: f64,
    pub mu_signal: f64,
    pub sigma_pooled: f64,
    #[serde(with = "finite_or_string")]
    pub z: f64,
    pub threshold: f64,
    pub pass: bool,
    pub degenerate: bool,
}

impl SeparationReport {
    /// One-line summary: id, qubits, z, verdict.
    pub fn summary_line(&self, id: &str) -> String {
        format!(
            "{id}\tqubits={}\tz={:.3}\t{}",
            self.qubits.0,
            self.z,
            if self.pass { "pass" } else { "fail" }
        )
    }
}

fn check_shots(h: &CountsHistogram, m: u64) -> Result<()> {
    if h.shots() < m {
        return Err(Error::InsufficientShots {
            needed: m,
            available: h.shots(),
        });
    }
    Ok(())
}

/// Null pair `i` draws both subsamples from `a` when `i` is even and from `b`
/// when odd; signal pair `i` draws one from each. Every draw uses a fresh
/// seed derived from `cfg.seed`.
pub fn separation_test(a: &CountsHistogram, b: &CountsHistogram, cfg: &SeparationConfig) -> Result<SeparationReport> {
    cfg.validate()?;
    check_shots(a, cfg.subsample)?;
    check_shots(b, cfg.subsample)?;
    let m = cfg.subsample;
    let pairs = (0..cfg.repeats as u64)
        .into_par_iter()
        .map(|i| {
            let s = |j: u64| child_seed(cfg.seed, 4 * i + j);
            let src = if i % 2 == 0 { a } else { b };
            let null = histogram_distance(&subsample(src, m, s(0))?, &subsample(src, m, s(1))?, cfg)?;
            let signal = histogram_distance(&subsample(a, m, s(2))?, &subsample(b, m, s(3))?, cfg)?;
            Ok((null, signal))
        })
        .collect::<Result<Vec<_>>>()?;
    let (null_l1, signal_l1): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let zs = z_score(&null_l1, &signal_l1);
    Ok(SeparationReport {
        config: *cfg,
        qubits: (a.n(), b.n()),
        shots: (a.shots(), b.shots()),
        null_l1,
        signal_l1,
        mu_null: zs.mu_null,
        mu_signal: zs.mu_signal,
        sigma_pooled: zs.sigma_pooled,
        z: zs.z,
        threshold: cfg.threshold,
        pass: zs.z > cfg.threshold,
        degenerate: zs.degenerate,
    })
}

/// `cfg.repeats` null distances between independent `cfg.subsample`-shot
/// draws from `counts`.
pub fn null_sample(counts: &CountsHistogram, cfg: &SeparationConfig) -> Result<Vec<f64>> {
    check_shots(counts, cfg.subsample)?;
    (0..cfg.repeats as u64)
        .into_par_iter()
        .map(|i| {
            let x = subsample(counts, cfg.subsample, child_seed(cfg.seed, 2 * i))?;
            let y = subsample(counts, cfg.subsample, child_seed(cfg.seed, 2 * i + 1))?;
            histogram_distance(&x, &y, cfg)
        })
        .collect()
}

/// Empirical `percentile` (0–100, exclusive) of the null distance sample.
pub fn null_percentile_threshold(counts: &CountsHistogram, percentile: f64, cfg: &SeparationConfig) -> Result<f64> {
    if !(percentile > 0.0 && percentile < 100.0) {
        return Err(invalid("percentile", "must lie strictly between 0 and 100"));
    }
    Ok(percentile_of(&null_sample(counts, cfg)?, percentile))
}

/// Linear-interpolation percentile of `values` (the common "type 7"
/// definition). NaN-free input assumed.
pub fn percentile_of(values: &[f64], percentile: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    if v.is_empty() {
        return f64::NAN;
    }
    let pos = percentile / 100.0 * (v.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
}

/// Serialize non-finite floats as strings ("inf", "-inf", "nan"), since JSON
/// has no representation for them.
pub mod finite_or_string {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) => match s.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("not a number: {other}"))),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::sample_counts;

    fn hist(p: &[f64], seed: u64) -> CountsHistogram {
        sample_counts(p, 1 << 15, seed).unwrap()
    }

    #[test]
    fn same_histogram_gives_small_z() {
        let h = hist(&[0.4, 0.3, 0.2, 0.1], 1);
        for seed in 0..5 {
            let r = separation_test(&h, &h, &SeparationConfig::default().with_seed(seed)).unwrap();
            assert!(r.z.abs() < 1.0, "seed {seed}: z = {}", r.z);
            assert_eq!(r.null_l1.len(), 64);
        }
    }

    #[test]
    fn different_shapes_separate() {
        let a = hist(&[0.7, 0.1, 0.1, 0.1], 1);
        let b = hist(&[0.4, 0.3, 0.2, 0.1], 2);
        let r = separation_test(&a, &b, &SeparationConfig::default()).unwrap();
        assert!(r.pass && r.z > 3.0);
        assert_eq!(r.z, (r.mu_signal - r.mu_null) / r.sigma_pooled);
    }

    #[test]
    fn relabeling_outcomes_leaves_z_unchanged() {
        let a = hist(&[0.5, 0.2, 0.2, 0.1], 3);
        let b = hist(&[0.4, 0.3, 0.2, 0.1], 4);
        // swap outcome labels 0 <-> 3 in b
        let b2 = CountsHistogram::from_counts(2, b.iter().map(|(x, c)| (3 - x, c))).unwrap();
        let cfg = SeparationConfig::default();
        let r1 = separation_test(&a, &b, &cfg).unwrap();
        let r2 = separation_test(&a, &b2, &cfg).unwrap();
        assert_eq!(r1.z, r2.z);
    }

    #[test]
    fn z_monotone_in_signal() {
        let null = [0.10, 0.12, 0.11, 0.09, 0.13];
        let base = [0.20, 0.22, 0.19, 0.21, 0.18];
        let mut last = f64::NEG_INFINITY;
        for shift in [0.0, 0.05, 0.1, 0.2] {
            let s: Vec<f64> = base.iter().map(|v| v + shift).collect();
            let z = z_score(&null, &s).z;
            assert!(z > last);
            last = z;
        }
    }

    #[test]
    fn degenerate_variance() {
        let zs = z_score(&[0.1; 4], &[0.2; 4]);
        assert!(zs.degenerate && zs.z == f64::INFINITY);
        let zs = z_score(&[0.1; 4], &[0.1; 4]);
        assert!(zs.degenerate && zs.z == 0.0);
        let zs = z_score(&[0.2; 4], &[0.1; 4]);
        assert_eq!(zs.z, f64::NEG_INFINITY);
        assert!(z_score(&[0.1, 0.1], &[0.1, 0.2]).sigma_pooled > 0.0);
    }

    #[test]
    fn point_mass_null_is_zero() {
        let h = CountsHistogram::from_counts(3, [(5, 1 << 15)]).unwrap();
        let t = null_percentile_threshold(&h, 95.0, &SeparationConfig::default()).unwrap();
        assert_eq!(t, 0.0);
        assert!(null_percentile_threshold(&h, 100.0, &SeparationConfig::default()).is_err());
    }

    #[test]
    fn insufficient_shots() {
        let h = sample_counts(&[0.5, 0.5], 100, 0).unwrap();
        assert!(matches!(
            separation_test(&h, &h, &SeparationConfig::default()),
            Err(Error::InsufficientShots { .. })
        ));
    }

    #[test]
    fn aligned_matches_dense() {
        let a = hist(&[0.1, 0.2, 0.3, 0.4], 5);
        let b = hist(&[0.4, 0.3, 0.2, 0.1], 6);
        let cfg = SeparationConfig {
            comparison: Comparison::Aligned,
            ..Default::default()
        };
        let dense: f64 = a
            .frequencies()
            .iter()
            .zip(b.frequencies())
            .map(|(x, y)| (x - y).abs())
            .sum();
        assert!((histogram_distance(&a, &b, &cfg).unwrap() - dense).abs() < 1e-12);
        assert!(histogram_distance(&a, &a.marginal(&[0]).unwrap(), &cfg).is_err());
    }

    #[test]
    fn percentile_interpolates() {
        assert_eq!(percentile_of(&[1.0, 2.0, 3.0, 4.0, 5.0], 50.0), 3.0);
        assert!((percentile_of(&[0.0, 10.0], 95.0) - 9.5).abs() < 1e-12);
    }

    #[test]
    fn infinite_z_round_trips_json() {
        let mut r = separation_test(
            &hist(&[0.5, 0.5], 1),
            &hist(&[0.5, 0.5], 2),
            &SeparationConfig::default(),
        )
        .unwrap();
        r.z = f64::INFINITY;
        let js = serde_json::to_string(&r).unwrap();
        assert!(js.contains(r#""z":"inf""#));
        let back: SeparationReport = serde_json::from_str(&js).unwrap();
        assert_eq!(back.z, f64::INFINITY);
    }
}
