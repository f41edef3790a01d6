//! Root finding for monotone scalar functions.

use crate::error::{Error, Result};

/// Bisection for a nondecreasing `f` with `f(lo) <= 0 <= f(hi)`; runs until
/// the bracket stops shrinking or is narrower than `tol`.
pub fn bisect_increasing<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<f64> {
    let flo = f(lo)?;
    let fhi = f(hi)?;
    if flo > 0.0 || fhi < 0.0 {
        return Err(Error::Bracket(format!(
            "f({lo}) = {flo}, f({hi}) = {fhi} do not straddle zero"
        )));
    }
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= tol {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Grows `[lo, hi]` geometrically around `start` until the nondecreasing `f`
/// changes sign, stopping at `cap` in absolute value.
pub fn expand_bracket<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    start: f64,
    cap: f64,
) -> Result<(f64, f64)> {
    let f0 = f(start)?;
    if f0 == 0.0 {
        return Ok((start, start));
    }
    let dir = if f0 < 0.0 { 1.0 } else { -1.0 };
    let mut step = 0.5;
    let mut inner = start;
    loop {
        let outer = (start + dir * step).clamp(-cap, cap);
        let fo = f(outer)?;
        if (dir > 0.0 && fo >= 0.0) || (dir < 0.0 && fo <= 0.0) {
            return Ok(if dir > 0.0 {
                (inner, outer)
            } else {
                (outer, inner)
            });
        }
        if outer.abs() >= cap {
            return Err(Error::Bracket(format!("root lies beyond |lambda| = {cap}")));
        }
        inner = outer;
        step *= 2.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_root() {
        let r = bisect_increasing(|x| Ok(x * x * x - 2.0), 0.0, 2.0, 0.0).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-15);
    }

    #[test]
    fn bracket_expansion_and_cap() {
        let (lo, hi) = expand_bracket(|x| Ok(x - 7.3), 0.0, 50.0).unwrap();
        assert!(lo <= 7.3 && hi >= 7.3);
        let (lo, hi) = expand_bracket(|x| Ok(x + 3.0), 0.0, 50.0).unwrap();
        assert!(lo <= -3.0 && hi >= -3.0);
        assert!(expand_bracket(|x| Ok(x - 80.0), 0.0, 50.0).is_err());
    }

    #[test]
    fn bad_bracket() {
        assert!(bisect_increasing(Ok, 1.0, 2.0, 0.0).is_err());
    }
}
