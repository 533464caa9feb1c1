//! Numeric backends.
//!
//! Every closed-form quantity in the crate is written once against the
//! [`Scalar`] trait and evaluated either on `f64` or on the exact
//! [`Surd`](crate::surd::Surd) type (rationals extended by one square root).

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Comparison policy for the float path. The exact path ignores it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: 1e-9, abs: 1e-12 }
    }
}

impl Tolerance {
    pub const fn new(rel: f64, abs: f64) -> Self {
        Tolerance { rel, abs }
    }

    /// Smallest magnitude that counts as non-zero for quantities of size `scale`.
    pub fn threshold(&self, scale: f64) -> f64 {
        self.abs.max(self.rel * scale.abs())
    }

    pub fn approx_eq(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.threshold(a.abs().max(b.abs()))
    }
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// True for backends whose arithmetic is exact.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn zero() -> Self {
        Self::from_i64(0)
    }

    fn one() -> Self {
        Self::from_i64(1)
    }

    /// Nearest representable value; exact backends take the binary value of `x`.
    fn from_f64(x: f64) -> Self;

    fn to_f64(&self) -> f64;

    /// Non-negative square root, or `None` when it is not representable.
    fn sqrt(&self) -> Option<Self>;

    /// Sign of `self` where values within tolerance of zero (relative to
    /// `scale`) count as zero. Exact backends return the exact sign.
    fn sign(&self, scale: f64, tol: &Tolerance) -> Ordering;

    fn abs(&self) -> Self {
        if self.sign(0.0, &Tolerance::new(0.0, 0.0)) == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sqrt(&self) -> Option<Self> {
        if *self < 0.0 {
            None
        } else {
            Some(f64::sqrt(*self))
        }
    }

    fn sign(&self, scale: f64, tol: &Tolerance) -> Ordering {
        if f64::abs(*self) <= tol.threshold(scale) {
            Ordering::Equal
        } else if *self > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

/// `a < b` with a margin exceeding the tolerance on the float path.
pub fn strictly_less<T: Scalar>(a: &T, b: &T, tol: &Tolerance) -> bool {
    let scale = a.to_f64().abs().max(b.to_f64().abs());
    (b.clone() - a.clone()).sign(scale, tol) == Ordering::Greater
}

pub fn is_positive<T: Scalar>(x: &T, scale: f64, tol: &Tolerance) -> bool {
    x.sign(scale, tol) == Ordering::Greater
}

pub fn is_negative<T: Scalar>(x: &T, scale: f64, tol: &Tolerance) -> bool {
    x.sign(scale, tol) == Ordering::Less
}

/// Maximum of two scalars, using the exact ordering where available.
pub fn max_of<T: Scalar>(a: T, b: T) -> T {
    let exact = Tolerance::new(0.0, 0.0);
    if (a.clone() - b.clone()).sign(0.0, &exact) == Ordering::Less {
        b
    } else {
        a
    }
}

/// Minimum of two scalars, using the exact ordering where available.
pub fn min_of<T: Scalar>(a: T, b: T) -> T {
    let exact = Tolerance::new(0.0, 0.0);
    if (a.clone() - b.clone()).sign(0.0, &exact) == Ordering::Greater {
        b
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_sign_respects_tolerance() {
        let tol = Tolerance::default();
        assert_eq!(1e-13f64.sign(1.0, &tol), Ordering::Equal);
        assert_eq!(1e-8f64.sign(1.0, &tol), Ordering::Greater);
        assert_eq!((-1e-8f64).sign(1.0, &tol), Ordering::Less);
        // relative part dominates for large scales
        assert_eq!(1e-4f64.sign(1e6, &tol), Ordering::Equal);
    }

    #[test]
    fn strictly_less_needs_a_margin() {
        let tol = Tolerance::default();
        assert!(strictly_less(&1.0, &1.1, &tol));
        assert!(!strictly_less(&1.0, &(1.0 + 1e-12), &tol));
        assert!(!strictly_less(&1.1, &1.0, &tol));
    }
}
