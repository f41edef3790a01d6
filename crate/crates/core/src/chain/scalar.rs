use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Div, Mul};

/// A model parameter: exact when it was given as a decimal or fraction,
/// floating point otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scalar {
    Exact(Rational64),
    Float(f64),
}

impl Scalar {
    pub fn int(v: i64) -> Self {
        Scalar::Exact(Rational64::from_integer(v))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(Rational64::new(num, den))
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(x) => x,
        }
    }

    pub fn exact(self) -> Option<Rational64> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn is_zero(self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => x == 0.0,
        }
    }

    /// Parses `3`, `-0.25`, `3/2` exactly; anything else `f64` accepts
    /// (e.g. `1e-3`) becomes a float.
    pub fn parse(s: &str) -> Option<Scalar> {
        let s = s.trim();
        if s.is_empty() {
            return None;
        }
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            return Some(Scalar::Exact(Rational64::new(n, d)));
        }
        if let Some(r) = parse_decimal(s) {
            return Some(Scalar::Exact(r));
        }
        s.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(Scalar::Float)
    }

    fn combine(
        self,
        other: Scalar,
        exact: impl Fn(Rational64, Rational64) -> Option<Rational64>,
        float: impl Fn(f64, f64) -> f64,
    ) -> Scalar {
        if let (Scalar::Exact(a), Scalar::Exact(b)) = (self, other) {
            if let Some(r) = exact(a, b) {
                return Scalar::Exact(r);
            }
        }
        Scalar::Float(float(self.to_f64(), other.to_f64()))
    }
}

impl Add for Scalar {
    type Output = Scalar;

    fn add(self, other: Scalar) -> Scalar {
        self.combine(other, checked_add, |a, b| a + b)
    }
}

impl Mul for Scalar {
    type Output = Scalar;

    fn mul(self, other: Scalar) -> Scalar {
        self.combine(other, checked_mul, |a, b| a * b)
    }
}

impl Div for Scalar {
    type Output = Scalar;

    fn div(self, other: Scalar) -> Scalar {
        self.combine(other, checked_div, |a, b| a / b)
    }
}

fn reduce(num: i128, den: i128) -> Option<Rational64> {
    if den == 0 {
        return None;
    }
    let g = num.gcd(&den);
    let (mut n, mut d) = (num / g, den / g);
    if d < 0 {
        n = -n;
        d = -d;
    }
    Some(Rational64::new_raw(
        i64::try_from(n).ok()?,
        i64::try_from(d).ok()?,
    ))
}

fn parts(r: Rational64) -> (i128, i128) {
    (*r.numer() as i128, *r.denom() as i128)
}

// Rational64 operators panic on overflow; these return None instead.
fn checked_add(a: Rational64, b: Rational64) -> Option<Rational64> {
    let ((an, ad), (bn, bd)) = (parts(a), parts(b));
    reduce(
        an.checked_mul(bd)?.checked_add(bn.checked_mul(ad)?)?,
        ad.checked_mul(bd)?,
    )
}

fn checked_mul(a: Rational64, b: Rational64) -> Option<Rational64> {
    let ((an, ad), (bn, bd)) = (parts(a), parts(b));
    reduce(an.checked_mul(bn)?, ad.checked_mul(bd)?)
}

fn checked_div(a: Rational64, b: Rational64) -> Option<Rational64> {
    let ((an, ad), (bn, bd)) = (parts(a), parts(b));
    reduce(an.checked_mul(bd)?, ad.checked_mul(bn)?)
}

fn parse_decimal(s: &str) -> Option<Rational64> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 15 {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num: i64 = digits.parse().ok()?;
    let den = 10i64.checked_pow(frac.len() as u32)?;
    let r = Rational64::new(num, den);
    Some(if neg { -r } else { r })
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Scalar::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_exact_and_float() {
        assert_eq!(Scalar::parse("1.5"), Some(Scalar::ratio(3, 2)));
        assert_eq!(Scalar::parse("-0.25"), Some(Scalar::ratio(-1, 4)));
        assert_eq!(Scalar::parse("3/6"), Some(Scalar::ratio(1, 2)));
        assert_eq!(Scalar::parse("2"), Some(Scalar::int(2)));
        assert_eq!(Scalar::parse("1e-3"), Some(Scalar::Float(1e-3)));
        assert_eq!(Scalar::parse("x"), None);
        assert_eq!(Scalar::parse("1/0"), None);
        assert_eq!(Scalar::parse("."), None);
    }

    #[test]
    fn arithmetic_stays_exact() {
        let a = Scalar::ratio(1, 3) + Scalar::ratio(1, 6);
        assert_eq!(a, Scalar::ratio(1, 2));
        assert_eq!(Scalar::int(2) / Scalar::int(4), Scalar::ratio(1, 2));
        let f = Scalar::Float(0.5) * Scalar::int(2);
        assert_eq!(f, Scalar::Float(1.0));
    }

    #[test]
    fn overflow_degrades_to_float() {
        let big = Scalar::int(i64::MAX / 2);
        let r = big * Scalar::int(8);
        assert!(matches!(r, Scalar::Float(_)));
    }
}
