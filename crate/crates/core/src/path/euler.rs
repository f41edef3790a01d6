//! Shooting solver for the Euler equation
//! `φ''/(φ'(1-φ')) = α/(αt - φ) - 1/φ`, `φ(0) = 0`, `φ(1) = x`.
//!
//! The equation is invariant under `t -> κt, φ -> κφ`, so it is integrated in
//! `s = log t` with `ψ = φ/t` and `z = logit φ'`:
//!
//! ```text
//! dψ/ds = σ(z) - ψ,    dz/ds = α/(α - ψ) - 1/ψ,    dC/ds = e^s L(α, ψ, σ(z)).
//! ```
//!
//! The LLN line `ψ = α/(α+1)` is a saddle point of this system, and every
//! optimal path leaves it. Shooting starts at `t = ε` on the ray `φ = cε`.

use super::{cost, path_rate, PathFunction};
use crate::error::{Error, Result};
use crate::numeric::ode::{integrate, Control, OdeOptions};
use serde::Serialize;
use std::cell::RefCell;

pub const EULER_EPSILON: f64 = 1e-6;
pub const DEFAULT_SAMPLES: usize = 1001;
/// Paths whose `ψ` falls below this are treated as having flattened out.
const PSI_FLOOR: f64 = 1e-200;

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

#[derive(Debug, Clone, Serialize)]
pub struct EulerSolution {
    pub alpha: f64,
    pub x_target: f64,
    /// Samples on a uniform `t` grid.
    #[serde(skip)]
    pub path: PathFunction,
    /// `φ'` at the same grid points.
    #[serde(skip)]
    pub slopes: Vec<f64>,
    /// `∫ L dt` accumulated along the ODE solution.
    pub cost: f64,
    /// `I(φ)` of the sampled piecewise-linear path; an independent check on
    /// `cost`.
    pub sampled_cost: f64,
    /// Initial slope `c` of the chosen solution.
    pub shoot_param: f64,
    /// Every `c` found to hit the target.
    pub roots: Vec<f64>,
    pub terminal_error: f64,
    /// Whether the terminal value was monotone in `c` at every probe.
    pub monotone: bool,
}

struct Shooter {
    alpha: f64,
    opts: OdeOptions,
}

struct Shot {
    terminal: f64,
    cost: f64,
}

impl Shooter {
    fn rhs(&self) -> impl Fn(f64, &[f64; 3]) -> Option<[f64; 3]> + '_ {
        let a = self.alpha;
        move |s, y| {
            let (psi, z) = (y[0], y[1]);
            if !(psi > 0.0 && psi < a.min(1.0) + 1e-12) {
                return None;
            }
            let yd = sigmoid(z);
            Some([
                yd - psi,
                a / (a - psi) - 1.0 / psi,
                s.exp() * cost(a, psi, yd),
            ])
        }
    }

    fn start(&self, c: f64) -> [f64; 3] {
        [c, logit(c), EULER_EPSILON * cost(self.alpha, c, c)]
    }

    /// Terminal `φ(1)` and cost for the initial slope `c`.
    fn shoot(&self, c: f64) -> Result<Shot> {
        let out = integrate(
            self.rhs(),
            EULER_EPSILON.ln(),
            self.start(c),
            0.0,
            self.opts,
            |_, y| {
                if y[0] < PSI_FLOOR {
                    Control::Stop
                } else {
                    Control::Continue
                }
            },
        )?;
        if out.stopped {
            // φ(1) <= φ(t_stop) + 0, which is below any target of interest.
            return Ok(Shot {
                terminal: out.t.exp() * out.y[0],
                cost: f64::INFINITY,
            });
        }
        Ok(Shot {
            terminal: out.y[0],
            cost: out.y[2],
        })
    }

    /// Samples `(t, φ, φ')` on `n` uniform points of `[0, 1]`.
    fn sample(&self, c: f64, n: usize) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        let mut knots = vec![0.0];
        let mut values = vec![0.0];
        let mut slopes = vec![c];
        let mut state = self.start(c);
        let mut s = EULER_EPSILON.ln();
        let mut opts = self.opts;
        for i in 1..n {
            let t = i as f64 / (n - 1) as f64;
            if t <= EULER_EPSILON {
                knots.push(t);
                values.push(c * t);
                slopes.push(c);
                continue;
            }
            let target = t.ln().min(0.0);
            let out = integrate(self.rhs(), s, state, target, opts, |_, _| Control::Continue)?;
            state = out.y;
            s = target;
            opts.initial_step = out.last_step.max(opts.min_step * 10.0);
            knots.push(t);
            values.push(t * state[0]);
            slopes.push(sigmoid(state[1]));
        }
        Ok((knots, values, slopes))
    }
}

/// Solves the fixed-endpoint Euler problem by bisection on the initial slope.
/// `tol` bounds `|φ(1) - x|`.
pub fn euler_solve(alpha: f64, x_target: f64, tol: f64) -> Result<EulerSolution> {
    euler_solve_sampled(alpha, x_target, tol, DEFAULT_SAMPLES)
}

/// [`euler_solve`] with a chosen number of output samples.
pub fn euler_solve_sampled(
    alpha: f64,
    x_target: f64,
    tol: f64,
    samples: usize,
) -> Result<EulerSolution> {
    if !(alpha > 1.0) {
        return Err(Error::Domain(format!(
            "euler_solve needs alpha > 1, got {alpha}"
        )));
    }
    if !(x_target > 0.0 && x_target < 1.0) {
        return Err(Error::Domain(format!("x = {x_target} outside (0, 1)")));
    }
    if !(tol > 0.0) || samples < 2 {
        return Err(Error::Domain(
            "tolerance must be positive, samples >= 2".into(),
        ));
    }
    let shooter = Shooter {
        alpha,
        opts: OdeOptions {
            rtol: 1e-11,
            atol: 1e-13,
            initial_step: 1e-2,
            min_step: 1e-13,
            max_steps: 200_000,
        },
    };
    let probes: RefCell<Vec<(f64, f64)>> = RefCell::new(Vec::new());
    let mut f = |c: f64| -> Result<f64> {
        let v = shooter.shoot(c)?.terminal - x_target;
        probes.borrow_mut().push((c, v));
        Ok(v)
    };

    let mut roots = bisect(&mut f, 1e-9, 1.0 - 1e-9, tol)?;
    let monotone = is_monotone(&probes.borrow());
    if !monotone {
        roots = grid_search(&mut f, alpha, tol)?;
    }
    if roots.is_empty() {
        return Err(Error::Bracket(format!(
            "no initial slope reaches phi(1) = {x_target}"
        )));
    }

    let mut best: Option<(f64, Shot)> = None;
    for &c in &roots {
        let shot = shooter.shoot(c)?;
        if best.as_ref().is_none_or(|(_, b)| shot.cost < b.cost) {
            best = Some((c, shot));
        }
    }
    let (c, shot) = best.expect("at least one root");
    let (knots, values, slopes) = shooter.sample(c, samples)?;
    let path = PathFunction::new(knots, values)?;
    let sampled_cost = path_rate(&path, alpha)?;
    Ok(EulerSolution {
        alpha,
        x_target,
        path,
        slopes,
        cost: shot.cost,
        sampled_cost,
        shoot_param: c,
        roots,
        terminal_error: shot.terminal - x_target,
        monotone,
    })
}

fn is_monotone(probes: &[(f64, f64)]) -> bool {
    let mut sorted = probes.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    sorted.windows(2).all(|w| w[1].1 >= w[0].1)
}

/// Bisection on `[lo, hi]`; empty when the ends do not straddle zero.
fn bisect<F: FnMut(f64) -> Result<f64>>(f: &mut F, lo: f64, hi: f64, tol: f64) -> Result<Vec<f64>> {
    let (mut lo, mut hi) = (lo, hi);
    let (flo, fhi) = (f(lo)?, f(hi)?);
    if flo.abs() <= tol {
        return Ok(vec![lo]);
    }
    if fhi.abs() <= tol {
        return Ok(vec![hi]);
    }
    if flo.signum() == fhi.signum() {
        return Ok(Vec::new());
    }
    let rising = flo < 0.0;
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Err(Error::Bracket(format!(
                "initial slope bracket collapsed at c = {mid} before reaching tol = {tol}"
            )));
        }
        let fm = f(mid)?;
        if fm.abs() <= tol {
            return Ok(vec![mid]);
        }
        if (fm < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Scans initial slopes clustered around the LLN slope and refines every
/// sign change.
fn grid_search<F: FnMut(f64) -> Result<f64>>(f: &mut F, alpha: f64, tol: f64) -> Result<Vec<f64>> {
    let mu = alpha / (alpha + 1.0);
    let mut grid: Vec<f64> = Vec::new();
    for k in 0..=150 {
        let off = 10f64.powf(-12.0 + 0.08 * k as f64);
        grid.push(mu - off);
        grid.push(mu + off);
    }
    grid.push(mu);
    grid.retain(|&c| c > 0.0 && c < 1.0);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let values: Vec<f64> = grid.iter().map(|&c| f(c)).collect::<Result<_>>()?;
    let mut roots = Vec::new();
    for i in 0..grid.len() - 1 {
        if values[i] == 0.0 {
            roots.push(grid[i]);
        } else if values[i].signum() != values[i + 1].signum() {
            roots.extend(bisect(f, grid[i], grid[i + 1], tol)?);
        }
    }
    Ok(roots)
}
