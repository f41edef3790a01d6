//! Closed forms of the pressure for `α = 1/2, 1, 2` and the power series
//! in `c = e^λ - 1` valid for any `α`.
//!
//! Every formula is written through `E = e^λ / c = 1 / (1 - e^{-λ})` and
//! `1 / c`, which stay finite for large `|λ|`.

/// `e^λ - 1 - λ` without cancellation near zero.
pub(crate) fn expm1_minus_x(x: f64) -> f64 {
    if x.abs() < 0.5 {
        let mut term = x * x / 2.0;
        let mut sum = 0.0f64;
        let mut k = 2.0;
        while term.abs() > 1e-17 * sum.abs().max(f64::MIN_POSITIVE) {
            sum += term;
            k += 1.0;
            term *= x / k;
        }
        sum
    } else {
        x.exp_m1() - x
    }
}

/// `log(e^λ - 1)` for `λ > 0`.
fn ln_expm1(lambda: f64) -> f64 {
    if lambda > 30.0 {
        lambda + (-(-lambda).exp()).ln_1p()
    } else {
        lambda.exp_m1().ln()
    }
}

fn e_over_c(lambda: f64) -> f64 {
    1.0 / -(-lambda).exp_m1()
}

fn inv_c(lambda: f64) -> f64 {
    1.0 / lambda.exp_m1()
}

pub(crate) fn pressure_one(lambda: f64) -> f64 {
    if lambda > 0.0 {
        ln_expm1(lambda) - lambda.ln()
    } else {
        (lambda.exp_m1() / lambda).ln()
    }
}

pub(crate) fn derivatives_one(lambda: f64) -> (f64, f64) {
    let e = e_over_c(lambda);
    (
        e - 1.0 / lambda,
        -e * inv_c(lambda) + 1.0 / (lambda * lambda),
    )
}

/// `log(e^λ - 1 - λ)` for `λ > 0`.
fn ln_expm1_minus_x(lambda: f64) -> f64 {
    if lambda > 30.0 {
        lambda + (-(1.0 + lambda) * (-lambda).exp()).ln_1p()
    } else {
        expm1_minus_x(lambda).ln()
    }
}

pub(crate) fn pressure_two(lambda: f64) -> f64 {
    if lambda > 0.0 {
        2.0 * ln_expm1(lambda) - std::f64::consts::LN_2 - ln_expm1_minus_x(lambda)
    } else {
        let c = lambda.exp_m1();
        (c * c / (2.0 * expm1_minus_x(lambda))).ln()
    }
}

pub(crate) fn derivatives_two(lambda: f64) -> (f64, f64) {
    let e = e_over_c(lambda);
    // 1 - λ/c, the ratio (c - λ)/c
    let one_minus_r = expm1_minus_x(lambda) * inv_c(lambda);
    let d1 = 2.0 * e - 1.0 / one_minus_r;
    let d2 = -2.0 * e * inv_c(lambda) - (e * one_minus_r - 1.0) / (one_minus_r * one_minus_r);
    (d1, d2)
}

pub(crate) fn pressure_half(lambda: f64) -> f64 {
    if lambda > 0.0 {
        let r = lambda.exp_m1().sqrt();
        0.5 * ln_expm1(lambda) - r.atan().ln()
    } else {
        let q = (-lambda.exp_m1()).sqrt();
        q.ln() - atanh_root(q, lambda).ln()
    }
}

/// `atanh(q)` for `q = sqrt(1 - e^λ)`, using `(1+q)/(1-q) = (1+q)^2 e^{-λ}`.
fn atanh_root(q: f64, lambda: f64) -> f64 {
    q.ln_1p() - 0.5 * lambda
}

pub(crate) fn derivatives_half(lambda: f64) -> (f64, f64) {
    let e = e_over_c(lambda);
    let ic = inv_c(lambda);
    if lambda > 0.0 {
        let r = lambda.exp_m1().sqrt();
        let a = r.atan();
        let d1 = 0.5 * e - 0.5 / (r * a);
        let d2 = -0.5 * e * ic + e / (4.0 * r * a) + ic / (4.0 * a * a);
        (d1, d2)
    } else {
        let q = (-lambda.exp_m1()).sqrt();
        let b = atanh_root(q, lambda);
        let d1 = 0.5 * e + 0.5 / (q * b);
        let d2 = -0.5 * e * ic - e / (4.0 * q * b) - ic / (4.0 * b * b);
        (d1, d2)
    }
}

/// `(J, dJ/dc, d²J/dc²)` for `J(c) = Σ_k (-c)^k α/(α+k)`, `|c| < 1`.
fn series(alpha: f64, c: f64) -> (f64, f64, f64) {
    let (mut j, mut j1, mut j2) = (0.0, 0.0, 0.0);
    let mut pow = 1.0; // (-c)^k
    let mut k = 0.0f64;
    loop {
        let w = alpha / (alpha + k);
        let t0 = pow * w;
        j += t0;
        if k >= 1.0 {
            // d/dc (-c)^k = -k (-c)^{k-1}
            j1 -= k * pow / -c * w;
        }
        if k >= 2.0 {
            j2 += k * (k - 1.0) * pow / (c * c) * w;
        }
        if k > 3.0 && (k * k * pow).abs() < 1e-18 {
            break;
        }
        pow *= -c;
        k += 1.0;
    }
    (j, j1, j2)
}

/// `(Λ, Λ', Λ'')` from the power series; accurate for `|e^λ - 1| <= 1/4`.
pub(crate) fn series_all(alpha: f64, lambda: f64) -> (f64, f64, f64) {
    let c = lambda.exp_m1();
    if c == 0.0 {
        let mu = alpha / (alpha + 1.0);
        return (
            0.0,
            mu,
            alpha * alpha / ((1.0 + alpha).powi(2) * (2.0 + alpha)),
        );
    }
    let (j, jc, jcc) = series(alpha, c);
    let ex = lambda.exp();
    let dj = jc * ex;
    let ddj = jcc * ex * ex + jc * ex;
    (-j.ln(), -dj / j, -ddj / j + (dj / j).powi(2))
}
