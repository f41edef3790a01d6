//! The pressure `Λ(λ) = lim (1/n) log E[e^{λ Z_n}]` and its Legendre
//! transform, the rate function `I(x) = sup_λ {λx - Λ(λ)}`.

pub(crate) mod closed;
mod integral;

use crate::error::{Error, Result};
use crate::numeric::roots::{bisect_increasing, expand_bracket};
use serde::Serialize;
use std::fmt;

/// Below this `|λ|` the pressure comes from its quadratic Taylor polynomial.
pub const LAMBDA_SWITCH: f64 = 1e-4;
/// Rate inversion gives up when `λ*` would exceed this in absolute value.
pub const LAMBDA_CAP: f64 = 50.0;
pub const DEFAULT_QUAD_TOL: f64 = 1e-13;

/// Closed-form derivatives switch to the power series in `e^λ - 1` below
/// this `|λ|`, where the closed forms cancel.
const SERIES_SWITCH: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedFormHalf,
    ClosedFormOne,
    ClosedFormTwo,
    Quadrature,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedFormHalf => "closed_form_half",
            Method::ClosedFormOne => "closed_form_one",
            Method::ClosedFormTwo => "closed_form_two",
            Method::Quadrature => "quadrature",
        })
    }
}

/// Whether the integral formula is backed by the theory for this `α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    Proven,
    /// `α ∈ (0, 1)` other than `1/2`.
    Extrapolated,
}

/// `α / (α + 1)`, the law-of-large-numbers limit of `Z_n / n`.
pub fn lln_mean(alpha: f64) -> f64 {
    alpha / (alpha + 1.0)
}

/// `α² / ((1 + α)² (2 + α))`, the CLT variance of `Z_n / √n`.
pub fn clt_variance(alpha: f64) -> f64 {
    alpha * alpha / ((1.0 + alpha).powi(2) * (2.0 + alpha))
}

/// `(x, λ*(x), I(x))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatePoint {
    pub x: f64,
    /// `+inf` when the supremum is only approached as `λ → ∞`.
    pub lambda_star: f64,
    pub rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PressureEval {
    alpha: f64,
    method: Method,
    quad_tol: f64,
}

impl PressureEval {
    pub fn new(alpha: f64, method: Method) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Domain(format!("alpha = {alpha} must be positive")));
        }
        let needed = match method {
            Method::ClosedFormHalf => Some(0.5),
            Method::ClosedFormOne => Some(1.0),
            Method::ClosedFormTwo => Some(2.0),
            Method::Quadrature => None,
        };
        if let Some(a) = needed {
            if alpha != a {
                return Err(Error::Domain(format!(
                    "{method} needs alpha = {a}, got {alpha}"
                )));
            }
        }
        Ok(PressureEval {
            alpha,
            method,
            quad_tol: DEFAULT_QUAD_TOL,
        })
    }

    /// Closed form when one exists, quadrature otherwise.
    pub fn auto(alpha: f64) -> Result<Self> {
        let method = if alpha == 0.5 {
            Method::ClosedFormHalf
        } else if alpha == 1.0 {
            Method::ClosedFormOne
        } else if alpha == 2.0 {
            Method::ClosedFormTwo
        } else {
            Method::Quadrature
        };
        Self::new(alpha, method)
    }

    pub fn quadrature(alpha: f64) -> Result<Self> {
        Self::new(alpha, Method::Quadrature)
    }

    pub fn with_quad_tol(mut self, tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol < 1e-2) {
            return Err(Error::Domain(format!("quad_tol = {tol} outside (0, 1e-2)")));
        }
        self.quad_tol = tol;
        Ok(self)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn quad_tol(&self) -> f64 {
        self.quad_tol
    }

    pub fn scope(&self) -> Scope {
        if self.alpha < 1.0 && self.alpha != 0.5 {
            Scope::Extrapolated
        } else {
            Scope::Proven
        }
    }

    fn taylor(&self, lambda: f64) -> f64 {
        lln_mean(self.alpha) * lambda + 0.5 * clt_variance(self.alpha) * lambda * lambda
    }

    /// `Λ(λ)`.
    pub fn pressure(&self, lambda: f64) -> Result<f64> {
        check_lambda(lambda)?;
        if lambda.abs() < LAMBDA_SWITCH {
            return Ok(self.taylor(lambda));
        }
        Ok(match self.method {
            Method::ClosedFormHalf => closed::pressure_half(lambda),
            Method::ClosedFormOne => closed::pressure_one(lambda),
            Method::ClosedFormTwo => closed::pressure_two(lambda),
            Method::Quadrature => -integral::j_value(self.alpha, lambda, self.quad_tol)?
                .value
                .ln(),
        })
    }

    /// `(Λ'(λ), Λ''(λ))`.
    pub fn derivatives(&self, lambda: f64) -> Result<(f64, f64)> {
        check_lambda(lambda)?;
        if lambda == 0.0 {
            return Ok((lln_mean(self.alpha), clt_variance(self.alpha)));
        }
        let closed_near_zero = lambda.abs() < SERIES_SWITCH;
        Ok(match self.method {
            _ if closed_near_zero && self.method != Method::Quadrature => {
                let (_, d1, d2) = closed::series_all(self.alpha, lambda);
                (d1, d2)
            }
            Method::ClosedFormHalf => closed::derivatives_half(lambda),
            Method::ClosedFormOne => closed::derivatives_one(lambda),
            Method::ClosedFormTwo => closed::derivatives_two(lambda),
            Method::Quadrature => {
                let r = integral::j_with_derivatives(self.alpha, lambda, self.quad_tol)?;
                let j = r.j.value;
                let d1 = -r.dj / j;
                (d1, -r.ddj / j + d1 * d1)
            }
        })
    }

    /// `(Λ', Λ'')` by fourth-order central differences of [`pressure`];
    /// an independent check on [`derivatives`].
    ///
    /// [`pressure`]: PressureEval::pressure
    /// [`derivatives`]: PressureEval::derivatives
    pub fn finite_difference(&self, lambda: f64) -> Result<(f64, f64)> {
        check_lambda(lambda)?;
        let digits = match self.method {
            Method::Quadrature => self.quad_tol.max(f64::EPSILON),
            _ => 4.0 * f64::EPSILON,
        };
        let h = digits.powf(1.0 / 6.0) * lambda.abs().max(1.0);
        // Keep the stencil on one side of the Taylor switch.
        let h = if lambda.abs() > LAMBDA_SWITCH && lambda.abs() < 2.0 * h + LAMBDA_SWITCH {
            (lambda.abs() - LAMBDA_SWITCH) / 2.0
        } else {
            h
        };
        let f = |t: f64| self.pressure(t);
        let (fm2, fm1, f0, fp1, fp2) = (
            f(lambda - 2.0 * h)?,
            f(lambda - h)?,
            f(lambda)?,
            f(lambda + h)?,
            f(lambda + 2.0 * h)?,
        );
        let d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
        let d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
        let scale = [fm2, fm1, f0, fp1, fp2]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let noise = digits * scale * 64.0 / (12.0 * h * h);
        // Fails once the relative error of d2 exceeds the square root of
        // the evaluation precision, i.e. half the digits are gone.
        if noise > digits.sqrt() * d2.abs() {
            return Err(Error::StepSize { lambda, step: h });
        }
        Ok((d1, d2))
    }

    /// `e^Λ - (1 - e^λ) Λ' / α - e^λ`, zero for the true pressure.
    pub fn ode_residual(&self, lambda: f64) -> Result<f64> {
        if lambda == 0.0 {
            return Err(Error::Domain("ode residual needs lambda != 0".into()));
        }
        let l = self.pressure(lambda)?;
        let (d1, _) = self.derivatives(lambda)?;
        let ex = lambda.exp();
        Ok(l.exp() + lambda.exp_m1() * d1 / self.alpha - ex)
    }

    /// Supremum of `Λ'`; `I` is infinite beyond it.
    pub fn max_slope(&self) -> f64 {
        self.alpha.min(1.0)
    }

    /// `lim_{λ→∞} (λ x_max - Λ(λ))` at `x_max =` [`max_slope`]:
    /// `log(α/(α-1))` for `α > 1`, `log(απ / sin(απ))` for `α < 1`, and
    /// `+inf` at `α = 1`.
    ///
    /// [`max_slope`]: PressureEval::max_slope
    pub fn boundary_rate(&self) -> f64 {
        let a = self.alpha;
        if a > 1.0 {
            (a / (a - 1.0)).ln()
        } else if a < 1.0 {
            let pa = std::f64::consts::PI * a;
            (pa / pa.sin()).ln()
        } else {
            f64::INFINITY
        }
    }

    /// Solves `Λ'(λ) = x` and returns `I(x) = λ* x - Λ(λ*)`.
    pub fn rate(&self, x: f64) -> Result<RatePoint> {
        if !(x > 0.0 && x <= 1.0) {
            return Err(Error::Domain(format!("x = {x} outside (0, 1]")));
        }
        let top = self.max_slope();
        if x > top {
            return Ok(RatePoint {
                x,
                lambda_star: f64::INFINITY,
                rate: f64::INFINITY,
            });
        }
        if x == top {
            return Ok(RatePoint {
                x,
                lambda_star: f64::INFINITY,
                rate: self.boundary_rate(),
            });
        }
        if x == lln_mean(self.alpha) {
            return Ok(RatePoint {
                x,
                lambda_star: 0.0,
                rate: 0.0,
            });
        }
        let g = |l: f64| self.derivatives(l).map(|(d1, _)| d1 - x);
        let (lo, hi) = expand_bracket(g, 0.0, LAMBDA_CAP)?;
        let lambda_star = bisect_increasing(g, lo, hi, 1e-14)?;
        let rate = lambda_star * x - self.pressure(lambda_star)?;
        Ok(RatePoint {
            x,
            lambda_star,
            rate: rate.max(0.0),
        })
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("lambda = {lambda} is not finite")))
    }
}
