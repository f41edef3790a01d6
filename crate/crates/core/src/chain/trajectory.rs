use super::ModelSpec;
use crate::error::{Error, Result};
use crate::rng;
use rand::RngCore;

/// A realized path `Z_1, ..., Z_n`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub model: ModelSpec,
    pub values: Vec<u64>,
    pub seed: u64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn last(&self) -> u64 {
        *self.values.last().expect("trajectory has Z_1")
    }
}

/// Probability of moving up from `state` when the slope is `slope`
/// (`0/0 = 0`, so an empty state always moves up).
#[inline]
pub(crate) fn up_probability(n: u64, state: u64, slope: f64) -> Result<f64> {
    if state == 0 {
        return Ok(1.0);
    }
    let z = state as f64;
    if z > slope {
        return Err(Error::StateAboveSlope { n, state, slope });
    }
    Ok(1.0 - z / slope)
}

/// One transition `Z_n -> Z_{n+1}`.
pub fn step(n: u64, state: u64, model: &ModelSpec, rng: &mut impl RngCore) -> Result<u64> {
    let p = up_probability(n, state, model.slope(n))?;
    Ok(state + u64::from(rng::unit(rng) < p))
}

/// Runs `Z_1..Z_n` on replicate stream `replicate` of `seed`, calling
/// `visit(j, Z_j)` on every state. `slopes` must hold at least `n - 1` values.
fn run(
    model: &ModelSpec,
    slopes: &[f64],
    n: u64,
    seed: u64,
    replicate: u64,
    mut visit: impl FnMut(u64, u64),
) -> Result<u64> {
    let mut r = rng::stream(seed, replicate);
    let mut z = model.k0();
    visit(1, z);
    for j in 1..n {
        let p = up_probability(j, z, slopes[(j - 1) as usize])?;
        if rng::unit(&mut r) < p {
            z += 1;
        }
        visit(j + 1, z);
    }
    Ok(z)
}

/// Full path of length `n`, deterministic in `seed`.
pub fn simulate(model: &ModelSpec, n: u64, seed: u64) -> Result<Trajectory> {
    if n == 0 {
        return Err(Error::Domain("simulate needs n >= 1".into()));
    }
    let slopes = model.slopes().values(n.saturating_sub(1));
    let mut values = Vec::with_capacity(n as usize);
    run(model, &slopes, n, seed, 0, |_, z| values.push(z))?;
    Ok(Trajectory {
        model: model.clone(),
        values,
        seed,
    })
}

/// `Z_n` alone for replicate `replicate` of `seed`; `slopes` holds `s_1..`
/// (at least `n - 1` entries) so that replicates share one precomputation.
pub fn simulate_final(
    model: &ModelSpec,
    slopes: &[f64],
    n: u64,
    seed: u64,
    replicate: u64,
) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("simulate needs n >= 1".into()));
    }
    if (slopes.len() as u64) < n - 1 {
        return Err(Error::Domain(format!(
            "{} slopes supplied, {} needed",
            slopes.len(),
            n - 1
        )));
    }
    run(model, slopes, n, seed, replicate, |_, _| {})
}

/// The polygonal interpolation `X_n(t)` of a trajectory with `n` values:
/// `X_n(t) = t` for `t <= k0/n`, otherwise `Z_{⌊nt⌋-k0+1}/n` plus the
/// fractional part of the next increment. Indices past the stored path hold
/// the last value.
pub fn interpolate(traj: &Trajectory, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t = {t} outside [0, 1]")));
    }
    let n = traj.len() as f64;
    let k0 = traj.model.k0() as f64;
    if t <= k0 / n {
        return Ok(t);
    }
    let nt = n * t;
    let floor = nt.floor();
    let frac = nt - floor;
    let at = |idx: f64| -> f64 {
        // 1-based index into the path
        let i = (idx as usize).clamp(1, traj.len());
        traj.values[i - 1] as f64
    };
    let base = floor - k0 + 1.0;
    let lower = at(base);
    let upper = if frac > 0.0 { at(base + 1.0) } else { lower };
    Ok(lower / n + frac / n * (upper - lower))
}
