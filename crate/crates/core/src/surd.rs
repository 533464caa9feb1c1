//! Exact arithmetic in a real quadratic field `Q(sqrt(r))`.
//!
//! A [`Surd`] is `rat + irr * sqrt(rad)` with rational coefficients and an
//! integer radicand that has no small square factors. Rationals are surds
//! with `irr == 0` (and `rad == 1`). Every per-matrix quantity of a rational
//! 2x2 matrix lives in the field generated by its own discriminant, so the
//! exact path never needs more than one radicand per expression.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::Error;
use crate::scalar::{Scalar, Tolerance};

pub type Rational = BigRational;

#[derive(Clone, Debug)]
pub struct Surd {
    rat: Rational,
    irr: Rational,
    rad: BigInt,
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &s * &s == *n {
        Some(s)
    } else {
        None
    }
}

fn exact_rational_sqrt(r: &Rational) -> Option<Rational> {
    let n = exact_isqrt(r.numer())?;
    let d = exact_isqrt(r.denom())?;
    Some(Rational::new(n, d))
}

/// Splits `m > 0` into `k^2 * rest`, removing square factors up to a trial bound.
fn extract_square(m: &BigInt) -> (BigInt, BigInt) {
    let mut rest = m.clone();
    let mut k = BigInt::one();
    let mut p: u32 = 2;
    while p <= 2000 {
        let pp = BigInt::from(p * p);
        if pp > rest {
            break;
        }
        while (&rest % &pp).is_zero() {
            rest /= &pp;
            k *= BigInt::from(p);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if let Some(s) = exact_isqrt(&rest) {
        k *= s;
        rest = BigInt::one();
    }
    (k, rest)
}

impl Surd {
    pub fn rational(r: Rational) -> Self {
        Surd {
            rat: r,
            irr: Rational::zero(),
            rad: BigInt::one(),
        }
    }

    pub fn from_ints(num: i64, den: i64) -> Self {
        Surd::rational(Rational::new(num.into(), den.into()))
    }

    /// Exact binary value of a finite float.
    pub fn from_f64(x: f64) -> Option<Self> {
        Rational::from_float(x).map(Surd::rational)
    }

    /// Square root of a non-negative rational.
    pub fn sqrt_rational(r: &Rational) -> Option<Self> {
        if r.is_negative() {
            return None;
        }
        if let Some(s) = exact_rational_sqrt(r) {
            return Some(Surd::rational(s));
        }
        // sqrt(n/d) = sqrt(n*d) / d
        let m = r.numer() * r.denom();
        let (k, rest) = extract_square(&m);
        let coeff = Rational::new(k, r.denom().clone());
        Some(
            Surd {
                rat: Rational::zero(),
                irr: coeff,
                rad: rest,
            }
            .normalized(),
        )
    }

    fn normalized(mut self) -> Self {
        if self.irr.is_zero() || self.rad.is_one() {
            self.rat += &self.irr;
            self.irr = Rational::zero();
            self.rad = BigInt::one();
        }
        self
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.is_rational() {
            Some(&self.rat)
        } else {
            None
        }
    }

    pub fn radicand(&self) -> &BigInt {
        &self.rad
    }

    /// Brings two surds onto a common radicand: returns `(rad, self.irr, other.irr)`.
    fn unify(&self, other: &Surd) -> Option<(BigInt, Rational, Rational)> {
        if self.rad == other.rad {
            return Some((self.rad.clone(), self.irr.clone(), other.irr.clone()));
        }
        if self.is_rational() {
            return Some((other.rad.clone(), Rational::zero(), other.irr.clone()));
        }
        if other.is_rational() {
            return Some((self.rad.clone(), self.irr.clone(), Rational::zero()));
        }
        // sqrt(r1) = s * sqrt(r2) when r1 / r2 = s^2
        let ratio = Rational::new(self.rad.clone(), other.rad.clone());
        let s = exact_rational_sqrt(&ratio)?;
        Some((other.rad.clone(), &self.irr * s, other.irr.clone()))
    }

    fn unify_or_panic(&self, other: &Surd) -> (BigInt, Rational, Rational) {
        self.unify(other).unwrap_or_else(|| {
            panic!(
                "surd arithmetic across different quadratic fields: sqrt({}) and sqrt({})",
                self.rad, other.rad
            )
        })
    }

    fn exact_sign(&self) -> Ordering {
        let a = self.rat.signum();
        let b = self.irr.signum();
        if b.is_zero() {
            return sign_of(&a);
        }
        if a.is_zero() || a == b {
            return sign_of(&b);
        }
        // opposite signs: compare rat^2 with irr^2 * rad
        let lhs = &self.rat * &self.rat;
        let rhs = &self.irr * &self.irr * Rational::from_integer(self.rad.clone());
        match lhs.cmp(&rhs) {
            Ordering::Equal => Ordering::Equal,
            Ordering::Greater => sign_of(&a),
            Ordering::Less => sign_of(&b),
        }
    }

    /// Conjugate `rat - irr * sqrt(rad)`.
    pub fn conjugate(&self) -> Surd {
        Surd {
            rat: self.rat.clone(),
            irr: -self.irr.clone(),
            rad: self.rad.clone(),
        }
    }
}

fn sign_of(r: &Rational) -> Ordering {
    if r.is_zero() {
        Ordering::Equal
    } else if r.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // huge numerator/denominator: divide in the log domain
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

impl PartialEq for Surd {
    fn eq(&self, other: &Self) -> bool {
        if self.rat != other.rat {
            return false;
        }
        match self.unify(other) {
            Some((_, a, b)) => a == b,
            None => false,
        }
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, rhs: Surd) -> Surd {
        let (rad, a, b) = self.unify_or_panic(&rhs);
        Surd {
            rat: self.rat + rhs.rat,
            irr: a + b,
            rad,
        }
        .normalized()
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, rhs: Surd) -> Surd {
        self + (-rhs)
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd {
            rat: -self.rat,
            irr: -self.irr,
            rad: self.rad,
        }
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Surd) -> Surd {
        let (rad, a, b) = self.unify_or_panic(&rhs);
        let r = Rational::from_integer(rad.clone());
        let rat = &self.rat * &rhs.rat + &a * &b * r;
        let irr = &self.rat * &b + &a * &rhs.rat;
        Surd { rat, irr, rad }.normalized()
    }
}

impl Div for Surd {
    type Output = Surd;
    fn div(self, rhs: Surd) -> Surd {
        if rhs.is_rational() {
            let d = rhs.rat;
            assert!(!d.is_zero(), "division by zero");
            return Surd {
                rat: self.rat / &d,
                irr: self.irr / &d,
                rad: self.rad,
            }
            .normalized();
        }
        // multiply through by the conjugate; the denominator becomes rational
        let conj = rhs.conjugate();
        let den = (rhs * conj.clone()).rat;
        assert!(!den.is_zero(), "division by zero");
        let num = self * conj;
        Surd {
            rat: num.rat / &den,
            irr: num.irr / &den,
            rad: num.rad,
        }
        .normalized()
    }
}

impl Scalar for Surd {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Surd::rational(Rational::from_integer(v.into()))
    }

    fn from_f64(x: f64) -> Self {
        Surd::from_f64(x).expect("finite float")
    }

    fn to_f64(&self) -> f64 {
        let base = rational_to_f64(&self.rat);
        if self.is_rational() {
            return base;
        }
        let root = self.rad.to_f64().map(f64::sqrt).unwrap_or(f64::INFINITY);
        let value = base + rational_to_f64(&self.irr) * root;
        // cancellation guard: fall back to the conjugate form when the terms nearly cancel
        if base != 0.0 && value.abs() < 1e-6 * base.abs() {
            let conj = self.conjugate();
            let norm = (self.clone() * conj.clone()).rat;
            return rational_to_f64(&norm) / (base - rational_to_f64(&self.irr) * root);
        }
        value
    }

    fn sqrt(&self) -> Option<Self> {
        if !self.is_rational() {
            return None;
        }
        Surd::sqrt_rational(&self.rat)
    }

    fn sign(&self, _scale: f64, _tol: &Tolerance) -> Ordering {
        self.exact_sign()
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.rat);
        }
        if !self.rat.is_zero() {
            write!(f, "{}", self.rat)?;
            if self.irr.is_positive() {
                write!(f, "+")?;
            }
        }
        if self.irr == -Rational::one() {
            write!(f, "-")?;
        } else if !self.irr.is_one() {
            write!(f, "{}*", self.irr)?;
        }
        write!(f, "sqrt({})", self.rad)
    }
}

impl Serialize for Surd {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Parses an exact rational from `"p/q"`, `"p"` or a plain decimal such as
/// `"-0.125"` or `"1e-3"`.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let s = text.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: {text:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let n = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i64;
    if scale.unsigned_abs() > 4096 {
        return Err(bad());
    }
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        Rational::from_integer(n * num::pow(ten, scale as usize))
    } else {
        Rational::new(n, num::pow(ten, (-scale) as usize))
    };
    Ok(if sign < 0 { -r } else { r })
}

impl FromStr for Surd {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        parse_rational(s).map(Surd::rational)
    }
}

impl From<Rational> for Surd {
    fn from(r: Rational) -> Self {
        Surd::rational(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Surd {
        Surd::from_ints(n, d)
    }

    #[test]
    fn perfect_squares_stay_rational() {
        let s = Surd::sqrt_rational(&Rational::new(49.into(), 256.into())).unwrap();
        assert_eq!(s, q(7, 16));
        assert!(s.is_rational());
    }

    #[test]
    fn square_factors_are_extracted() {
        // sqrt(3/2) = sqrt(6)/2
        let s = Surd::sqrt_rational(&Rational::new(3.into(), 2.into())).unwrap();
        assert_eq!(s.radicand(), &BigInt::from(6));
        assert_eq!(s.clone() * s, q(3, 2));
        // sqrt(72) = 6 sqrt(2)
        let t = Surd::sqrt_rational(&Rational::from_integer(72.into())).unwrap();
        assert_eq!(t.radicand(), &BigInt::from(2));
        assert!((t.to_f64() - 72f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn field_operations() {
        let r6 = Surd::sqrt_rational(&Rational::from_integer(6.into())).unwrap();
        let x = q(1, 5) + r6.clone() / q(5, 1); // (1 + sqrt 6) / 5
        let y = q(1, 1) / x.clone();
        assert_eq!(x.clone() * y.clone(), q(1, 1));
        assert!((y.to_f64() - 5.0 / (1.0 + 6f64.sqrt())).abs() < 1e-14);
        assert_eq!((x.clone() - x).sign(0.0, &Tolerance::default()), Ordering::Equal);
    }

    #[test]
    fn exact_sign_with_cancellation() {
        let r2 = Surd::sqrt_rational(&Rational::from_integer(2.into())).unwrap();
        // 1.4142 - sqrt 2 < 0 < 1.4143 - sqrt 2
        let lo = q(14142, 10000) - r2.clone();
        let hi = q(14143, 10000) - r2;
        let tol = Tolerance::default();
        assert_eq!(lo.sign(0.0, &tol), Ordering::Less);
        assert_eq!(hi.sign(0.0, &tol), Ordering::Greater);
    }

    #[test]
    fn compatible_radicands_unify() {
        let a = Surd::sqrt_rational(&Rational::from_integer(8.into())).unwrap();
        let b = Surd::sqrt_rational(&Rational::from_integer(2.into())).unwrap();
        assert_eq!(a / b, q(2, 1));
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/112").unwrap(), Rational::new(3.into(), 112.into()));
        assert_eq!(parse_rational("-0.125").unwrap(), Rational::new((-1).into(), 8.into()));
        assert_eq!(parse_rational("1e-3").unwrap(), Rational::new(1.into(), 1000.into()));
        assert_eq!(parse_rational("2.5E2").unwrap(), Rational::from_integer(250.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(q(24, 77).to_string(), "24/77");
        let r6 = Surd::sqrt_rational(&Rational::from_integer(6.into())).unwrap();
        assert_eq!((q(1, 5) + r6.clone() / q(5, 1)).to_string(), "1/5+1/5*sqrt(6)");
        assert_eq!((-r6).to_string(), "-sqrt(6)");
    }
}
