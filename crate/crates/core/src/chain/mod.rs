//! Slope sequences and the leaf-counting Markov chain
//!
//! `Z_1 = k0` and, given `Z_n`, the chain moves up by one with probability
//! `1 - Z_n / s_n` and stays put otherwise (with `0/0 = 0`). Every model in
//! the crate (recursive trees, preferential attachment, Yule cherries, buds
//! with random edge multiplicities) is one choice of `(s_n, k0)`.

mod gamma;
mod preset;
mod scalar;
mod trajectory;

pub use gamma::{GammaPmf, GammaSequence};
pub use scalar::Scalar;
pub use trajectory::{interpolate, simulate, simulate_final, step, Trajectory};

use crate::error::{Error, Result};
use num_rational::Rational64;
use serde::Serialize;
use std::fmt;
use std::sync::Arc;

/// Which family a slope sequence belongs to.
#[derive(Debug, Clone)]
pub enum SlopeKind {
    /// `s_n = alpha * n`.
    Linear { alpha: Scalar },
    /// Leaves of a preferential attachment graph with weights `d + beta`
    /// grown from a seed graph of total degree `seed_degree`.
    PrefAttach {
        beta: Scalar,
        seed_degree: u64,
        seed_vertices: u64,
    },
    /// Cherries of the Yule tree, `s_n = n/2`.
    Yule,
    /// Leaves of the uniform recursive tree, `s_n = n`.
    UniformRecursive,
    /// Leaves of the plane-oriented recursive tree, `s_n = 2n - 1`.
    PlaneOriented,
    /// Buds of preferential attachment with `γ_i` parallel edges per step.
    RandomizedPa {
        beta: Scalar,
        seed_degree: u64,
        seed_vertices: u64,
        gamma: Arc<GammaSequence>,
    },
}

#[derive(Debug, Clone)]
pub struct SlopeSequence {
    kind: SlopeKind,
}

fn pa_slope(beta: Scalar, seed_degree: u64, seed_vertices: u64, edges: u64, n: u64) -> Scalar {
    // [dG1 + 2*edges + (n - 1 + vG1) * beta] / (1 + beta)
    let base = Scalar::int((seed_degree + 2 * edges) as i64);
    let weight = Scalar::int((n - 1 + seed_vertices) as i64) * beta;
    (base + weight) / (Scalar::int(1) + beta)
}

impl SlopeSequence {
    pub fn new(kind: SlopeKind) -> Self {
        SlopeSequence { kind }
    }

    pub fn kind(&self) -> &SlopeKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            SlopeKind::Linear { .. } => "linear",
            SlopeKind::PrefAttach { .. } => "pref_attach",
            SlopeKind::Yule => "yule",
            SlopeKind::UniformRecursive => "uniform_recursive",
            SlopeKind::PlaneOriented => "plane_oriented",
            SlopeKind::RandomizedPa { .. } => "randomized_pa",
        }
    }

    /// `s_n` for `n >= 1`, exact whenever the parameters are.
    pub fn value_scalar(&self, n: u64) -> Scalar {
        assert!(n >= 1, "slope index starts at 1");
        match &self.kind {
            SlopeKind::Linear { alpha } => *alpha * Scalar::int(n as i64),
            SlopeKind::Yule => Scalar::ratio(n as i64, 2),
            SlopeKind::UniformRecursive => Scalar::int(n as i64),
            SlopeKind::PlaneOriented => Scalar::int(2 * n as i64 - 1),
            SlopeKind::PrefAttach {
                beta,
                seed_degree,
                seed_vertices,
            } => pa_slope(*beta, *seed_degree, *seed_vertices, n - 1, n),
            SlopeKind::RandomizedPa {
                beta,
                seed_degree,
                seed_vertices,
                gamma,
            } => pa_slope(
                *beta,
                *seed_degree,
                *seed_vertices,
                gamma.prefix_sum(n - 1),
                n,
            ),
        }
    }

    pub fn value(&self, n: u64) -> f64 {
        self.value_scalar(n).to_f64()
    }

    pub fn exact(&self, n: u64) -> Option<Rational64> {
        self.value_scalar(n).exact()
    }

    /// `[s_1, ..., s_n]`.
    pub fn values(&self, n: u64) -> Vec<f64> {
        (1..=n).map(|j| self.value(j)).collect()
    }

    /// The limit of `s_n / n`.
    pub fn alpha(&self) -> Scalar {
        let one = Scalar::int(1);
        match &self.kind {
            SlopeKind::Linear { alpha } => *alpha,
            SlopeKind::Yule => Scalar::ratio(1, 2),
            SlopeKind::UniformRecursive => one,
            SlopeKind::PlaneOriented => Scalar::int(2),
            SlopeKind::PrefAttach { beta, .. } => (Scalar::int(2) + *beta) / (one + *beta),
            SlopeKind::RandomizedPa { beta, gamma, .. } => {
                (Scalar::int(2) * gamma.pmf().mean() + *beta) / (one + *beta)
            }
        }
    }
}

/// A chain model: slope sequence plus initial state `Z_1 = k0`.
#[derive(Debug, Clone)]
pub struct ModelSpec {
    slopes: SlopeSequence,
    k0: u64,
}

// Horizon over which the support bound Z_n <= s_n is checked at construction.
const VALIDATION_HORIZON: u64 = 2000;

impl ModelSpec {
    pub fn new(slopes: SlopeSequence, k0: u64) -> Result<Self> {
        let bad = |why: String| Err(Error::InvalidModel(why));
        match slopes.kind() {
            SlopeKind::Linear { alpha } if alpha.to_f64() <= 0.0 => {
                return bad(format!("linear slope must be positive, got {alpha}"));
            }
            SlopeKind::PrefAttach { beta, .. } | SlopeKind::RandomizedPa { beta, .. }
                if beta.to_f64() <= -1.0 =>
            {
                return bad(format!("beta must exceed -1, got {beta}"));
            }
            _ => {}
        }
        let s1 = slopes.value(1);
        if !(s1 > 0.0) {
            return bad(format!("s_1 = {s1} is not positive"));
        }
        if (k0 as f64) > s1 {
            return bad(format!("k0 = {k0} exceeds s_1 = {s1}"));
        }
        if let SlopeKind::Linear { alpha } = slopes.kind() {
            let a = alpha.to_f64();
            if a > 1.0 && a < k0 as f64 {
                return bad(format!(
                    "linear alpha = {alpha} > 1 needs s_n >= k0 + n - 1, i.e. alpha >= k0 = {k0}"
                ));
            }
        }
        // Largest reachable state must never exceed the slope, and s_n must
        // stay above max(k0, 1).
        let floor = k0.max(1) as f64;
        let mut top = k0 as f64;
        for n in 1..=VALIDATION_HORIZON {
            let s = slopes.value(n);
            if n >= 2 && s < floor {
                return bad(format!("s_{n} = {s} is below max(k0, 1) = {floor}"));
            }
            if top > s * (1.0 + 1e-12) {
                return bad(format!(
                    "reachable state {top} exceeds s_{n} = {s}; transition probabilities would be negative"
                ));
            }
            if top < s || top == 0.0 {
                top += 1.0;
            }
        }
        Ok(ModelSpec { slopes, k0 })
    }

    /// Uniform recursive tree leaves: `k0 = 1`, `s_n = n`.
    pub fn uniform_recursive() -> Self {
        ModelSpec::new(SlopeSequence::new(SlopeKind::UniformRecursive), 1).expect("valid preset")
    }

    /// Plane-oriented recursive tree leaves: `k0 = 1`, `s_n = 2n - 1`.
    pub fn plane_oriented() -> Self {
        ModelSpec::new(SlopeSequence::new(SlopeKind::PlaneOriented), 1).expect("valid preset")
    }

    /// Yule tree cherries: `k0 = 0`, `s_n = n/2`.
    pub fn yule() -> Self {
        ModelSpec::new(SlopeSequence::new(SlopeKind::Yule), 0).expect("valid preset")
    }

    pub fn linear(alpha: Scalar, k0: u64) -> Result<Self> {
        ModelSpec::new(SlopeSequence::new(SlopeKind::Linear { alpha }), k0)
    }

    /// Preferential attachment leaves grown from a single edge
    /// (`dG1 = 2`, `|G1| = 2`, two initial leaves).
    pub fn pref_attach(beta: Scalar) -> Result<Self> {
        ModelSpec::pref_attach_seeded(beta, 2, 2, 2)
    }

    pub fn pref_attach_seeded(
        beta: Scalar,
        seed_degree: u64,
        seed_vertices: u64,
        k0: u64,
    ) -> Result<Self> {
        ModelSpec::new(
            SlopeSequence::new(SlopeKind::PrefAttach {
                beta,
                seed_degree,
                seed_vertices,
            }),
            k0,
        )
    }

    /// Bud counts with `γ_i` parallel edges per step, grown from a single edge.
    pub fn randomized_pa(beta: Scalar, gamma: GammaPmf, seed: u64) -> Result<Self> {
        ModelSpec::new(
            SlopeSequence::new(SlopeKind::RandomizedPa {
                beta,
                seed_degree: 2,
                seed_vertices: 2,
                gamma: Arc::new(GammaSequence::new(gamma, seed)),
            }),
            2,
        )
    }

    pub fn slopes(&self) -> &SlopeSequence {
        &self.slopes
    }

    pub fn k0(&self) -> u64 {
        self.k0
    }

    pub fn slope(&self, n: u64) -> f64 {
        self.slopes.value(n)
    }

    pub fn alpha(&self) -> Scalar {
        self.slopes.alpha()
    }

    /// Support bound `Z_n <= k0 + n - 1`.
    pub fn max_state(&self, n: u64) -> u64 {
        self.k0 + n - 1
    }

    pub fn info(&self) -> ModelInfo {
        ModelInfo {
            model: self.to_string(),
            kind: self.slopes.kind_name(),
            alpha: self.alpha(),
            alpha_value: self.alpha().to_f64(),
            k0: self.k0,
        }
    }
}

/// Self-describing summary embedded in every output file.
#[derive(Debug, Clone, Serialize)]
pub struct ModelInfo {
    pub model: String,
    pub kind: &'static str,
    pub alpha: Scalar,
    pub alpha_value: f64,
    pub k0: u64,
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.slopes.kind() {
            SlopeKind::UniformRecursive if self.k0 == 1 => write!(f, "uniform"),
            SlopeKind::PlaneOriented if self.k0 == 1 => write!(f, "plane_oriented"),
            SlopeKind::Yule if self.k0 == 0 => write!(f, "yule"),
            SlopeKind::UniformRecursive => write!(f, "linear:alpha=1,k0={}", self.k0),
            SlopeKind::Yule => write!(f, "linear:alpha=1/2,k0={}", self.k0),
            SlopeKind::PlaneOriented => write!(f, "plane_oriented:k0={}", self.k0),
            SlopeKind::Linear { alpha } => write!(f, "linear:alpha={alpha},k0={}", self.k0),
            SlopeKind::PrefAttach {
                beta,
                seed_degree,
                seed_vertices,
            } => write!(
                f,
                "pa:beta={beta},dg1={seed_degree},vg1={seed_vertices},k0={}",
                self.k0
            ),
            SlopeKind::RandomizedPa {
                beta,
                seed_degree,
                seed_vertices,
                gamma,
            } => write!(
                f,
                "rpa:beta={beta},gamma={},seed={},dg1={seed_degree},vg1={seed_vertices},k0={}",
                gamma.pmf(),
                gamma.seed(),
                self.k0
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_slopes() {
        assert_eq!(ModelSpec::plane_oriented().slope(3), 5.0);
        assert_eq!(ModelSpec::yule().slope(4), 2.0);
        assert_eq!(ModelSpec::uniform_recursive().slope(7), 7.0);
        let pa = ModelSpec::pref_attach(Scalar::int(0)).unwrap();
        assert_eq!(pa.slope(2), 4.0);
        assert_eq!(pa.k0(), 2);
    }

    #[test]
    fn alphas() {
        assert_eq!(ModelSpec::plane_oriented().alpha(), Scalar::int(2));
        assert_eq!(ModelSpec::yule().alpha(), Scalar::ratio(1, 2));
        assert_eq!(ModelSpec::uniform_recursive().alpha(), Scalar::int(1));
        let pa = ModelSpec::pref_attach(Scalar::ratio(1, 2)).unwrap();
        assert_eq!(pa.alpha(), Scalar::ratio(5, 3));
        let rpa =
            ModelSpec::randomized_pa(Scalar::int(0), GammaPmf::uniform(1, 2).unwrap(), 1).unwrap();
        assert_eq!(rpa.alpha(), Scalar::int(3));
        let rpa =
            ModelSpec::randomized_pa(Scalar::int(1), GammaPmf::uniform(1, 2).unwrap(), 1).unwrap();
        assert_eq!(rpa.alpha(), Scalar::int(2));
    }

    #[test]
    fn pa_slopes_are_exact_rationals() {
        let pa = ModelSpec::pref_attach(Scalar::ratio(1, 2)).unwrap();
        // (2 + 2*2 + (3 - 1 + 2)/2) / (3/2) = 16/3
        assert_eq!(pa.slopes().exact(3), Some(Rational64::new(16, 3)));
    }

    #[test]
    fn randomized_slopes_follow_the_quenched_gammas() {
        let rpa =
            ModelSpec::randomized_pa(Scalar::int(0), GammaPmf::uniform(1, 2).unwrap(), 9).unwrap();
        let SlopeKind::RandomizedPa { gamma, .. } = rpa.slopes().kind() else {
            unreachable!()
        };
        assert_eq!(rpa.slope(1), 2.0);
        for n in 2..50u64 {
            let expected = 2.0 + 2.0 * (1..n).map(|i| gamma.gamma(i) as f64).sum::<f64>();
            assert_eq!(rpa.slope(n), expected);
        }
        let again =
            ModelSpec::randomized_pa(Scalar::int(0), GammaPmf::uniform(1, 2).unwrap(), 9).unwrap();
        assert_eq!(again.slopes().values(300), rpa.slopes().values(300));
    }

    #[test]
    fn invalid_models() {
        assert!(ModelSpec::linear(Scalar::int(3), 4).is_err()); // k0 > s_1
        assert!(ModelSpec::linear(Scalar::ratio(7, 10), 0).is_err()); // Z_n overtakes s_n
        assert!(ModelSpec::linear(Scalar::int(0), 0).is_err());
        assert!(ModelSpec::pref_attach(Scalar::int(-1)).is_err());
        assert!(ModelSpec::linear(Scalar::int(3), 1).is_ok());
        assert!(ModelSpec::linear(Scalar::int(3), 3).is_ok());
    }
}
