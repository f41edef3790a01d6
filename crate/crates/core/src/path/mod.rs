//! The path rate functional `I(φ) = ∫_0^1 L(αt, φ(t), φ'(t)) dt` and its
//! minimizers.

mod euler;

pub use euler::{euler_solve, euler_solve_sampled, EulerSolution, DEFAULT_SAMPLES, EULER_EPSILON};

use crate::error::{Error, Result};
use crate::numeric::quad::{integrate, QuadOptions};

/// `true` when `α > 1`, the range where the path LDP is proven.
pub fn in_proven_scope(alpha: f64) -> bool {
    alpha > 1.0
}

/// `L(a, x, y) = y log(a y / (a - x)) + (1 - y) log(a (1 - y) / x)` with
/// `0 log 0 = 0`. This is the relative entropy of `Bernoulli(y)` against
/// `Bernoulli(1 - x/a)`.
pub(crate) fn cost(a: f64, x: f64, y: f64) -> f64 {
    let up = if y == 0.0 {
        0.0
    } else if x >= a {
        f64::INFINITY
    } else {
        y * (a * y / (a - x)).ln()
    };
    let stay = if y == 1.0 {
        0.0
    } else if x <= 0.0 {
        f64::INFINITY
    } else {
        (1.0 - y) * (a * (1.0 - y) / x).ln()
    };
    up + stay
}

/// `L(αt, x, y)`; `+inf` when `x = 0, y < 1` or `x = αt, y > 0`.
pub fn local_cost(t: f64, x: f64, y: f64, alpha: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) || !(alpha > 0.0) {
        return Err(Error::Domain(format!("t = {t}, alpha = {alpha}")));
    }
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::Domain(format!("slope y = {y} outside [0, 1]")));
    }
    let a = alpha * t;
    if !(x >= 0.0 && x <= a) {
        return Err(Error::Domain(format!("x = {x} outside [0, {a}]")));
    }
    Ok(cost(a, x, y))
}

/// Piecewise-linear path through `(knots[i], values[i])`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathFunction {
    knots: Vec<f64>,
    values: Vec<f64>,
}

const SLACK: f64 = 1e-9;

impl PathFunction {
    /// Checks `φ(0) = 0`, increasing knots ending at 1, slopes in `[0, 1]`
    /// and `φ(t) <= t`, each up to `1e-9`.
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let bad = |why: String| Err(Error::Domain(format!("path: {why}")));
        if knots.len() < 2 || knots.len() != values.len() {
            return bad("need at least two knots and one value per knot".into());
        }
        if knots[0] != 0.0 || values[0] != 0.0 {
            return bad("must start at (0, 0)".into());
        }
        if (knots[knots.len() - 1] - 1.0).abs() > SLACK {
            return bad("last knot must be t = 1".into());
        }
        for i in 1..knots.len() {
            let dt = knots[i] - knots[i - 1];
            if !(dt > 0.0) {
                return bad(format!("knots not increasing at index {i}"));
            }
            let slope = (values[i] - values[i - 1]) / dt;
            if !(-SLACK..=1.0 + SLACK).contains(&slope) {
                return bad(format!("slope {slope} outside [0, 1] on piece {i}"));
            }
            if values[i] > knots[i] + SLACK {
                return bad(format!("phi({}) = {} exceeds t", knots[i], values[i]));
            }
        }
        Ok(PathFunction { knots, values })
    }

    /// `φ(t) = slope · t`.
    pub fn linear(slope: f64) -> Result<Self> {
        Self::new(vec![0.0, 1.0], vec![0.0, slope])
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn end(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        let i = self
            .knots
            .partition_point(|&k| k <= t)
            .clamp(1, self.knots.len() - 1);
        let (t0, t1) = (self.knots[i - 1], self.knots[i]);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }

    /// Slope on each piece, clamped to `[0, 1]`.
    pub fn slopes(&self) -> Vec<f64> {
        self.knots
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(k, v)| ((v[1] - v[0]) / (k[1] - k[0])).clamp(0.0, 1.0))
            .collect()
    }

    /// Same path with a knot added at every piece midpoint.
    pub fn refine(&self) -> Self {
        let mut knots = Vec::with_capacity(2 * self.knots.len());
        let mut values = Vec::with_capacity(2 * self.knots.len());
        for i in 0..self.knots.len() - 1 {
            knots.push(self.knots[i]);
            values.push(self.values[i]);
            knots.push(0.5 * (self.knots[i] + self.knots[i + 1]));
            values.push(0.5 * (self.values[i] + self.values[i + 1]));
        }
        knots.push(self.knots[self.knots.len() - 1]);
        values.push(self.end());
        PathFunction { knots, values }
    }

    /// `max_t |φ(t) - φ(1) t|` over the knots.
    pub fn max_chord_deviation(&self) -> f64 {
        let end = self.end();
        self.knots
            .iter()
            .zip(&self.values)
            .map(|(t, v)| (v - end * t).abs())
            .fold(0.0, f64::max)
    }
}

/// `I(φ)` for a piecewise-linear path, integrating each piece adaptively.
/// Returns `+inf` when a piece runs along `φ = 0` with slope below 1 or
/// along `φ = αt` with positive slope.
pub fn path_rate(path: &PathFunction, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("alpha = {alpha} must be positive")));
    }
    let opts = QuadOptions {
        abs_tol: 1e-15,
        rel_tol: 1e-13,
        max_intervals: 4000,
    };
    let slopes = path.slopes();
    let mut total = 0.0;
    for (i, &y) in slopes.iter().enumerate() {
        let (t0, t1) = (path.knots[i], path.knots[i + 1]);
        let v0 = path.values[i].clamp(0.0, t0);
        let at = |t: f64| (v0 + y * (t - t0)).clamp(0.0, alpha * t);
        let mid = 0.5 * (t0 + t1);
        if !cost(alpha * mid, at(mid), y).is_finite() {
            return Ok(f64::INFINITY);
        }
        let r = integrate(|t| cost(alpha * t, at(t), y), t0, t1, &[], opts)?;
        if !r.value.is_finite() {
            return Ok(f64::INFINITY);
        }
        total += r.value;
    }
    Ok(total)
}
