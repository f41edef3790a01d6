//! Replicate runners and the statistics used to compare simulators with the
//! chain.

use crate::chain::{simulate_final, ModelSpec};
use crate::dist::Pmf;
use crate::error::{Error, Result};
use crate::pressure::{clt_variance, lln_mean};
use crate::rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};
use std::collections::BTreeMap;

/// Default cap on `n * reps` for a single CLT run.
pub const DEFAULT_BUDGET: u64 = 2_000_000_000;

/// Runs `f` on replicate streams `0..reps` of `seed` in parallel; the output
/// is in replicate order.
pub fn replicate<T, F>(reps: u64, seed: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> Result<T> + Sync,
{
    (0..reps)
        .into_par_iter()
        .map(|r| f(&mut rng::stream(seed, r)))
        .collect()
}

/// Mean, unbiased variance and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
}

pub fn summarize(values: &[f64]) -> Summary {
    let count = values.len();
    let m = count as f64;
    let mean = values.iter().sum::<f64>() / m;
    let variance = if count > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0)
    } else {
        0.0
    };
    Summary {
        count,
        mean,
        variance,
        std_error: (variance / m).sqrt(),
    }
}

/// Relative frequency of each observed value.
pub fn empirical_pmf(samples: &[u64]) -> BTreeMap<u64, f64> {
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for &s in samples {
        *counts.entry(s).or_default() += 1;
    }
    let m = samples.len() as f64;
    counts.into_iter().map(|(k, c)| (k, c as f64 / m)).collect()
}

/// `(1/2) Σ_k |q(k) - P(Z_n = k)|`.
pub fn total_variation(empirical: &BTreeMap<u64, f64>, pmf: &Pmf) -> f64 {
    let mut sum = 0.0;
    for (k, p) in pmf.iter() {
        sum += (empirical.get(&k).copied().unwrap_or(0.0) - p.exp()).abs();
    }
    let (lo, hi) = (pmf.k0(), pmf.k0() + pmf.log_probs().len() as u64 - 1);
    for (&k, &q) in empirical {
        if k < lo || k > hi {
            sum += q;
        }
    }
    0.5 * sum
}

/// Kolmogorov–Smirnov distance between `samples` and `N(0, variance)`.
pub fn ks_distance_normal(samples: &[f64], variance: f64) -> Result<f64> {
    let normal = Normal::new(0.0, variance.sqrt())
        .map_err(|e| Error::Domain(format!("normal reference: {e}")))?;
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = normal.cdf(x);
        d = d.max(f - i as f64 / m).max((i + 1) as f64 / m - f);
    }
    Ok(d)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatReport {
    pub model: String,
    pub n: u64,
    pub replicates: u64,
    pub seed: u64,
    /// Mean of `Z_n / n`.
    pub empirical_mean: f64,
    pub mean_std_error: f64,
    pub lln_mean: f64,
    /// Unbiased variance of `Z_n / √n`.
    pub empirical_var: f64,
    pub clt_variance: f64,
    /// `(Z_n - mean) / √n` per replicate, centred at the empirical mean.
    #[serde(skip)]
    pub clt_stat_sample: Vec<f64>,
    pub ks_distance: f64,
}

/// Simulates `reps` independent copies of `Z_n` and compares them with the
/// LLN and CLT constants of the model's `α`.
pub fn verify_clt(
    model: &ModelSpec,
    n: u64,
    reps: u64,
    seed: u64,
    budget: u64,
) -> Result<StatReport> {
    if n == 0 || reps < 2 {
        return Err(Error::Domain(
            "verify_clt needs n >= 1 and reps >= 2".into(),
        ));
    }
    if n.saturating_mul(reps) > budget {
        return Err(Error::Budget(format!(
            "n * reps = {} exceeds the budget {budget}",
            n as u128 * reps as u128
        )));
    }
    let slopes = model.slopes().values(n - 1);
    let finals: Vec<u64> = (0..reps)
        .into_par_iter()
        .map(|r| simulate_final(model, &slopes, n, seed, r))
        .collect::<Result<_>>()?;
    StatReport::from_finals(model.to_string(), model.alpha().to_f64(), n, seed, &finals)
}

impl StatReport {
    /// Summarizes replicate values of `Z_n` against the constants of `alpha`.
    pub fn from_finals(
        model: String,
        alpha: f64,
        n: u64,
        seed: u64,
        finals: &[u64],
    ) -> Result<Self> {
        if n == 0 || finals.len() < 2 {
            return Err(Error::Domain(
                "a report needs n >= 1 and two replicates".into(),
            ));
        }
        let nf = n as f64;
        let scaled: Vec<f64> = finals.iter().map(|&z| z as f64 / nf).collect();
        let s = summarize(&scaled);
        let centre = s.mean * nf;
        let clt_stat_sample: Vec<f64> = finals
            .iter()
            .map(|&z| (z as f64 - centre) / nf.sqrt())
            .collect();
        let sigma2 = clt_variance(alpha);
        Ok(StatReport {
            model,
            n,
            replicates: finals.len() as u64,
            seed,
            empirical_mean: s.mean,
            mean_std_error: s.std_error,
            lln_mean: lln_mean(alpha),
            empirical_var: s.variance * nf,
            clt_variance: sigma2,
            ks_distance: ks_distance_normal(&clt_stat_sample, sigma2)?,
            clt_stat_sample,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_of_known_values() {
        let s = summarize(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.variance - 5.0 / 3.0).abs() < 1e-15);
        assert!((s.std_error - (5.0 / 12.0f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn total_variation_against_exact_pmf() {
        let pmf = Pmf::at(&ModelSpec::plane_oriented(), 3).unwrap();
        let q = empirical_pmf(&[1, 2, 2]);
        assert!(total_variation(&q, &pmf) < 1e-15);
        let q = empirical_pmf(&[2, 3]);
        // |0 - 1/3| + |1/2 - 2/3| + 1/2 over two = 1/2
        assert!((total_variation(&q, &pmf) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ks_distance_bounds() {
        let d = ks_distance_normal(&[0.0; 10], 1.0).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
        let grid: Vec<f64> = (1..1000)
            .map(|i| {
                let n = Normal::new(0.0, 2.0).unwrap();
                n.inverse_cdf(i as f64 / 1000.0)
            })
            .collect();
        assert!(ks_distance_normal(&grid, 4.0).unwrap() < 2e-3);
    }

    #[test]
    fn clt_on_a_single_step_is_degenerate() {
        let r = verify_clt(&ModelSpec::plane_oriented(), 1, 10, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.empirical_var, 0.0);
        assert!((0.0..=1.0).contains(&r.ks_distance));
    }

    #[test]
    fn budget_is_enforced() {
        let e = verify_clt(&ModelSpec::yule(), 1000, 1000, 1, 10_000);
        assert!(matches!(e, Err(Error::Budget(_))));
    }

    #[test]
    fn replicates_are_reproducible() {
        let m = ModelSpec::uniform_recursive();
        let a = verify_clt(&m, 500, 50, 11, DEFAULT_BUDGET).unwrap();
        let b = verify_clt(&m, 500, 50, 11, DEFAULT_BUDGET).unwrap();
        assert_eq!(a, b);
    }
}
