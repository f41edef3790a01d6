//! The pressure integral for general `α`.
//!
//! With `c = e^λ - 1`, `v = (e^s - 1)/c` and `w = v^α` the defining integral
//! becomes `J(λ) = ∫_0^1 dw / (1 + c w^{1/α})` and `Λ = -log J`. The
//! integrand is bounded on `[0, 1]`; its only hard feature is a sharp drop
//! near `w = c^{-α}` for large `λ`, or a spike near `w = 1` for very negative
//! `λ`, and both get breakpoints.

use crate::error::Result;
use crate::numeric::quad::{integrate, QuadOptions, QuadResult};

pub(crate) struct Integrals {
    pub j: QuadResult,
    /// `dJ/dλ`
    pub dj: f64,
    /// `d²J/dλ²`
    pub ddj: f64,
}

/// Integration variable and breakpoints. For `c < 0` the integral runs over
/// `t = 1 - w`, which resolves the spike at `w = 1` (width `~ α e^λ`) even
/// when it is narrower than the float spacing near 1.
fn breakpoints(alpha: f64, c: f64, lambda: f64) -> Vec<f64> {
    let centre = if c > 1.0 {
        (-alpha * c.ln()).exp()
    } else if c < 0.0 && lambda < -2.0 {
        alpha * lambda.exp()
    } else {
        return Vec::new();
    };
    let mut out: Vec<f64> = (-4..=4)
        .map(|k| centre * 10f64.powi(k))
        .filter(|&x| x > 0.0 && x < 1.0)
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// `(g, 1 + c g)` with `g = w^{1/α}` at the integration variable `x`: `x = w`
/// for `c >= 0`, else `x = 1 - w` and `1 + c g = (1 - g) + e^λ g`.
fn denominator(x: f64, p: f64, c: f64, ex: f64) -> (f64, f64) {
    if c >= 0.0 {
        let g = x.powf(p);
        (g, 1.0 + c * g)
    } else {
        let lw = (-x).ln_1p();
        let g = (p * lw).exp();
        (g, -(p * lw).exp_m1() + ex * g)
    }
}

fn options(tol: f64) -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-300,
        rel_tol: tol,
        ..QuadOptions::default()
    }
}

/// `J(λ)` alone.
pub(crate) fn j_value(alpha: f64, lambda: f64, tol: f64) -> Result<QuadResult> {
    let c = lambda.exp_m1();
    let ex = lambda.exp();
    let p = 1.0 / alpha;
    let br = breakpoints(alpha, c, lambda);
    integrate(
        |w| 1.0 / denominator(w, p, c, ex).1,
        0.0,
        1.0,
        &br,
        options(tol),
    )
}

/// `J` and its first two `λ`-derivatives from differentiated integrands.
pub(crate) fn j_with_derivatives(alpha: f64, lambda: f64, tol: f64) -> Result<Integrals> {
    let c = lambda.exp_m1();
    let ex = lambda.exp();
    let p = 1.0 / alpha;
    let br = breakpoints(alpha, c, lambda);
    let opts = options(tol);
    let j = integrate(|w| 1.0 / denominator(w, p, c, ex).1, 0.0, 1.0, &br, opts)?;
    let i1 = integrate(
        |w| {
            let (g, d) = denominator(w, p, c, ex);
            g / (d * d)
        },
        0.0,
        1.0,
        &br,
        opts,
    )?;
    let i2 = integrate(
        |w| {
            let (g, d) = denominator(w, p, c, ex);
            g * g / (d * d * d)
        },
        0.0,
        1.0,
        &br,
        opts,
    )?;
    Ok(Integrals {
        j,
        dj: -ex * i1.value,
        ddj: -ex * i1.value + 2.0 * ex * ex * i2.value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pressure::closed;

    #[test]
    fn matches_closed_forms_including_extremes() {
        for lambda in [-40.0, -5.0, -0.3, 0.7, 5.0, 40.0] {
            let l1 = -j_value(1.0, lambda, 1e-13).unwrap().value.ln();
            assert!(
                (l1 - closed::pressure_one(lambda)).abs() < 1e-10,
                "λ={lambda}"
            );
            let l2 = -j_value(2.0, lambda, 1e-13).unwrap().value.ln();
            assert!(
                (l2 - closed::pressure_two(lambda)).abs() < 1e-10,
                "λ={lambda}"
            );
            let lh = -j_value(0.5, lambda, 1e-13).unwrap().value.ln();
            assert!(
                (lh - closed::pressure_half(lambda)).abs() < 1e-10,
                "λ={lambda}"
            );
        }
    }

    #[test]
    fn derivatives_match_closed_forms() {
        for lambda in [-8.0, -1.0, 0.4, 3.0, 12.0] {
            let r = j_with_derivatives(2.0, lambda, 1e-13).unwrap();
            let j = r.j.value;
            let d1 = -r.dj / j;
            let d2 = -r.ddj / j + (r.dj / j).powi(2);
            let (c1, c2) = closed::derivatives_two(lambda);
            assert!((d1 - c1).abs() < 1e-10, "λ={lambda}: {d1} {c1}");
            assert!((d2 - c2).abs() < 1e-9, "λ={lambda}: {d2} {c2}");
        }
    }
}
