//! Dormand–Prince 5(4) explicit Runge–Kutta with adaptive step control.
//!
//! The right-hand side may refuse a state (return `None`), in which case the
//! step is rejected and halved. Used for the Euler boundary value problem,
//! whose vector field is only defined strictly inside the admissible region.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Difference between the 5th- and 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub initial_step: f64,
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-10,
            atol: 1e-12,
            initial_step: 1e-3,
            min_step: 1e-14,
            max_steps: 200_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Copy)]
pub struct OdeOutcome<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    pub steps: usize,
    pub rejected: usize,
    /// True when `guard` asked to stop before reaching the end point.
    pub stopped: bool,
    /// Step size to reuse when continuing the integration.
    pub last_step: f64,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, ks: &[[f64; N]], coeffs: &[f64]) -> [f64; N] {
    let mut out = *y;
    for (k, &c) in ks.iter().zip(coeffs) {
        if c != 0.0 {
            for i in 0..N {
                out[i] += h * c * k[i];
            }
        }
    }
    out
}

/// Integrates `y' = rhs(t, y)` from `t0` to `t1` (`t1 > t0`). `guard` is
/// called after each accepted step and may end the integration early.
pub fn integrate<const N: usize, F, G>(
    rhs: F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    opts: OdeOptions,
    mut guard: G,
) -> Result<OdeOutcome<N>>
where
    F: Fn(f64, &[f64; N]) -> Option<[f64; N]>,
    G: FnMut(f64, &[f64; N]) -> Control,
{
    let mut t = t0;
    let mut y = y0;
    let mut h = opts.initial_step.min(t1 - t0);
    let mut k1 = rhs(t, &y).ok_or_else(|| {
        Error::Integration(format!("initial state outside the domain at t = {t0}"))
    })?;
    let mut steps = 0;
    let mut rejected = 0;
    while t < t1 {
        if steps + rejected > opts.max_steps {
            return Err(Error::Integration(format!(
                "step budget {} exhausted at t = {t}",
                opts.max_steps
            )));
        }
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }
        let mut ks = [[0.0; N]; 7];
        ks[0] = k1;
        let mut ok = true;
        for s in 1..7 {
            let ys = axpy(&y, h, &ks[..s], &A[s][..s]);
            match rhs(t + C[s] * h, &ys) {
                Some(k) if k.iter().all(|v| v.is_finite()) => ks[s] = k,
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        let mut err = f64::INFINITY;
        let mut y_new = y;
        if ok {
            y_new = axpy(&y, h, &ks[..6], &A[6][..6]);
            let mut acc = 0.0;
            for i in 0..N {
                let mut e = 0.0;
                for s in 0..7 {
                    e += E[s] * ks[s][i];
                }
                let scale = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
                acc += (h * e / scale).powi(2);
            }
            err = (acc / N as f64).sqrt();
            ok = err.is_finite() && y_new.iter().all(|v| v.is_finite());
        }
        if ok && err <= 1.0 {
            t = if last { t1 } else { t + h };
            y = y_new;
            k1 = ks[6];
            steps += 1;
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= factor;
            if guard(t, &y) == Control::Stop {
                return Ok(OdeOutcome {
                    t,
                    y,
                    steps,
                    rejected,
                    stopped: t < t1,
                    last_step: h,
                });
            }
        } else {
            rejected += 1;
            h *= if ok {
                (0.9 * err.powf(-0.2)).clamp(0.1, 0.5)
            } else {
                0.5
            };
            if h < opts.min_step {
                return Err(Error::Integration(format!(
                    "step-size collapse at t = {t} (h = {h:e})"
                )));
            }
        }
    }
    Ok(OdeOutcome {
        t,
        y,
        steps,
        rejected,
        stopped: false,
        last_step: h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let out = integrate(
            |_, y: &[f64; 1]| Some([y[0]]),
            0.0,
            [1.0],
            2.0,
            OdeOptions::default(),
            |_, _| Control::Continue,
        )
        .unwrap();
        assert!((out.y[0] - 2f64.exp()).abs() < 1e-8);
        assert_eq!(out.t, 2.0);
    }

    #[test]
    fn harmonic_oscillator_conserves_energy() {
        let out = integrate(
            |_, y: &[f64; 2]| Some([y[1], -y[0]]),
            0.0,
            [1.0, 0.0],
            10.0,
            OdeOptions::default(),
            |_, _| Control::Continue,
        )
        .unwrap();
        assert!((out.y[0] - 10f64.cos()).abs() < 1e-8);
        assert!((out.y[1] + 10f64.sin()).abs() < 1e-8);
    }

    #[test]
    fn refused_states_shrink_the_step() {
        // y' = 1 but states above 0.5 are refused: the integrator must stall.
        let r = integrate(
            |_, y: &[f64; 1]| if y[0] < 0.5 { Some([1.0]) } else { None },
            0.0,
            [0.0],
            1.0,
            OdeOptions::default(),
            |_, _| Control::Continue,
        );
        assert!(matches!(r, Err(Error::Integration(_))));
    }

    #[test]
    fn guard_stops_early() {
        let out = integrate(
            |_, _y: &[f64; 1]| Some([1.0]),
            0.0,
            [0.0],
            1.0,
            OdeOptions::default(),
            |_, y| {
                if y[0] > 0.3 {
                    Control::Stop
                } else {
                    Control::Continue
                }
            },
        )
        .unwrap();
        assert!(out.stopped);
        assert!(out.y[0] > 0.3 && out.t < 1.0);
    }
}
