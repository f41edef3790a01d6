use super::Scalar;
use crate::error::{Error, Result};
use crate::rng;
use std::fmt;
use std::sync::RwLock;

/// Finite law of the number of parallel edges γ added per step.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaPmf {
    atoms: Vec<(u64, Scalar)>,
    cumulative: Vec<f64>,
}

impl GammaPmf {
    pub fn new(mut atoms: Vec<(u64, Scalar)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidModel("empty gamma pmf".into()));
        }
        atoms.sort_by_key(|a| a.0);
        if atoms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidModel("repeated gamma atom".into()));
        }
        if atoms.iter().any(|a| a.0 == 0) {
            return Err(Error::InvalidModel(
                "gamma must be supported on positive integers".into(),
            ));
        }
        if atoms.iter().any(|a| a.1.to_f64() < 0.0) {
            return Err(Error::InvalidModel("negative gamma probability".into()));
        }
        let total = atoms.iter().fold(Scalar::int(0), |acc, a| acc + a.1);
        let normalized = match total {
            Scalar::Exact(r) => r == 1.into(),
            Scalar::Float(x) => (x - 1.0).abs() < 1e-12,
        };
        if !normalized {
            return Err(Error::InvalidModel(format!(
                "gamma probabilities sum to {total}, not 1"
            )));
        }
        let mut acc = 0.0;
        let cumulative = atoms
            .iter()
            .map(|a| {
                acc += a.1.to_f64();
                acc
            })
            .collect();
        Ok(GammaPmf { atoms, cumulative })
    }

    /// Uniform law on `lo..=hi`.
    pub fn uniform(lo: u64, hi: u64) -> Result<Self> {
        let k = (hi - lo + 1) as i64;
        GammaPmf::new((lo..=hi).map(|v| (v, Scalar::ratio(1, k))).collect())
    }

    pub fn atoms(&self) -> &[(u64, Scalar)] {
        &self.atoms
    }

    pub fn mean(&self) -> Scalar {
        self.atoms.iter().fold(Scalar::int(0), |acc, &(v, p)| {
            acc + p * Scalar::int(v as i64)
        })
    }

    /// Inverse-cdf draw from a uniform `u` in [0, 1).
    pub fn quantile(&self, u: f64) -> u64 {
        let idx = self.cumulative.partition_point(|&c| c <= u);
        self.atoms[idx.min(self.atoms.len() - 1)].0
    }

    /// Parses `v:p;v:p;...`, e.g. `1:0.5;2:1/2`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Preset {
            input: s.to_string(),
            reason: why.to_string(),
        };
        let atoms = s
            .split(';')
            .map(|part| {
                let (v, p) = part
                    .split_once(':')
                    .ok_or_else(|| bad("expected value:prob"))?;
                let v: u64 = v.trim().parse().map_err(|_| bad("bad gamma value"))?;
                let p = Scalar::parse(p).ok_or_else(|| bad("bad gamma probability"))?;
                Ok((v, p))
            })
            .collect::<Result<Vec<_>>>()?;
        GammaPmf::new(atoms)
    }
}

impl fmt::Display for GammaPmf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.atoms.iter().map(|(v, p)| format!("{v}:{p}")).collect();
        write!(f, "{}", parts.join(";"))
    }
}

/// The quenched environment γ_1, γ_2, ...: γ_i is a pure function of
/// `(seed, i)`, so every consumer sees the same realization. Prefix sums are
/// cached as they are requested.
#[derive(Debug)]
pub struct GammaSequence {
    pmf: GammaPmf,
    seed: u64,
    prefix: RwLock<Vec<u64>>,
}

impl GammaSequence {
    pub fn new(pmf: GammaPmf, seed: u64) -> Self {
        GammaSequence {
            pmf,
            seed,
            prefix: RwLock::new(vec![0]),
        }
    }

    pub fn pmf(&self) -> &GammaPmf {
        &self.pmf
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// γ_i for i ≥ 1.
    pub fn gamma(&self, i: u64) -> u64 {
        let mut r = rng::at(self.seed, rng::GAMMA_STREAM, i);
        self.pmf.quantile(rng::unit(&mut r))
    }

    /// Σ_{i=1}^{m} γ_i.
    pub fn prefix_sum(&self, m: u64) -> u64 {
        {
            let cache = self.prefix.read().expect("gamma cache poisoned");
            if let Some(&v) = cache.get(m as usize) {
                return v;
            }
        }
        let mut cache = self.prefix.write().expect("gamma cache poisoned");
        while cache.len() <= m as usize {
            let i = cache.len() as u64;
            let next = cache[cache.len() - 1] + self.gamma(i);
            cache.push(next);
        }
        cache[m as usize]
    }
}

impl Clone for GammaSequence {
    fn clone(&self) -> Self {
        GammaSequence::new(self.pmf.clone(), self.seed)
    }
}
