//! 2x2 matrices, ordered pairs and per-matrix projective data.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Tolerance};
use crate::words::BinaryWord;

/// Row-major `(a, b; c, d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Serialize> Serialize for Matrix2<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [[&self.a, &self.b], [&self.c, &self.d]].serialize(s)
    }
}

impl<T: Scalar> Matrix2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Matrix2 { a, b, c, d }
    }

    pub fn from_ratios(entries: [(i64, i64); 4]) -> Self {
        let [a, b, c, d] = entries.map(|(n, m)| T::from_ratio(n, m));
        Matrix2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Matrix2::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn det(&self) -> T {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn trace(&self) -> T {
        self.a.clone() + self.d.clone()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        Matrix2 {
            a: a.clone() * o.a.clone() + b.clone() * o.c.clone(),
            b: a.clone() * o.b.clone() + b.clone() * o.d.clone(),
            c: c.clone() * o.a.clone() + d.clone() * o.c.clone(),
            d: c.clone() * o.b.clone() + d.clone() * o.d.clone(),
        }
    }

    pub fn scale(&self, t: &T) -> Self {
        self.map(|x| x.clone() * t.clone())
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Matrix2<U> {
        Matrix2 {
            a: f(&self.a),
            b: f(&self.b),
            c: f(&self.c),
            d: f(&self.d),
        }
    }

    pub fn to_f64(&self) -> Matrix2<f64> {
        self.map(Scalar::to_f64)
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if det.sign(self.max_abs(), &Tolerance::new(0.0, 0.0)) == Ordering::Equal {
            return Err(Error::SingularTransform);
        }
        Ok(Matrix2 {
            a: self.d.clone() / det.clone(),
            b: -self.b.clone() / det.clone(),
            c: -self.c.clone() / det.clone(),
            d: self.a.clone() / det,
        })
    }

    fn entries(&self) -> [&T; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    fn max_abs(&self) -> f64 {
        self.entries().iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
    }

    /// All entries strictly positive and determinant strictly positive.
    pub fn is_positive_det_positive(&self, tol: &Tolerance) -> bool {
        let scale = self.max_abs();
        self.entries().iter().all(|x| x.sign(scale, tol) == Ordering::Greater)
            && self.det().sign(scale * scale, tol) == Ordering::Greater
    }

    pub fn entries_positive(&self, tol: &Tolerance) -> bool {
        let scale = self.max_abs();
        self.entries().iter().all(|x| x.sign(scale, tol) == Ordering::Greater)
    }

    /// `alpha = a + c - b - d`.
    pub fn alpha(&self) -> T {
        self.a.clone() + self.c.clone() - self.b.clone() - self.d.clone()
    }
}

/// Ordered pair `(A0, A1)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatrixPair<T> {
    #[serde(rename = "A0")]
    pub a0: Matrix2<T>,
    #[serde(rename = "A1")]
    pub a1: Matrix2<T>,
}

impl<T: Scalar> MatrixPair<T> {
    pub fn new(a0: Matrix2<T>, a1: Matrix2<T>) -> Self {
        MatrixPair { a0, a1 }
    }

    pub fn get(&self, i: usize) -> &Matrix2<T> {
        if i == 0 {
            &self.a0
        } else {
            &self.a1
        }
    }

    pub fn to_f64(&self) -> MatrixPair<f64> {
        MatrixPair {
            a0: self.a0.to_f64(),
            a1: self.a1.to_f64(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectiveData<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub rho: T,
    pub sigma: T,
    pub delta: T,
    pub fixed_point: T,
    pub perron_value: T,
    pub perron_left: (T, T),
    pub perron_right: (T, T),
    pub minor_value: T,
}

impl<T: Scalar> ProjectiveData<T> {
    pub fn to_f64(&self) -> ProjectiveData<f64> {
        let f = |x: &T| x.to_f64();
        ProjectiveData {
            alpha: f(&self.alpha),
            beta: f(&self.beta),
            gamma: f(&self.gamma),
            rho: f(&self.rho),
            sigma: f(&self.sigma),
            delta: f(&self.delta),
            fixed_point: f(&self.fixed_point),
            perron_value: f(&self.perron_value),
            perron_left: (f(&self.perron_left.0), f(&self.perron_left.1)),
            perron_right: (f(&self.perron_right.0), f(&self.perron_right.1)),
            minor_value: f(&self.minor_value),
        }
    }
}

/// Derived scalars of a positive matrix with positive determinant.
pub fn projective_data<T: Scalar>(m: &Matrix2<T>) -> Result<ProjectiveData<T>> {
    projective_data_with(m, &Tolerance::default())
}

pub fn projective_data_with<T: Scalar>(m: &Matrix2<T>, tol: &Tolerance) -> Result<ProjectiveData<T>> {
    if !m.is_positive_det_positive(tol) {
        return Err(Error::NonPositiveMatrix);
    }
    let (a, b, c, d) = (m.a.clone(), m.b.clone(), m.c.clone(), m.d.clone());
    let two = T::from_i64(2);
    let alpha = m.alpha();
    if alpha.sign(m.max_abs(), tol) == Ordering::Equal {
        return Err(Error::AffineInducedMap);
    }
    let beta = a.clone() - d.clone() - two.clone() * b.clone();
    let amd = a.clone() - d.clone();
    let disc = amd.clone() * amd.clone() + T::from_i64(4) * b.clone() * c.clone();
    let gamma = disc.sqrt().ok_or(Error::InexactSqrt)?;
    let rho = two.clone() * b.clone() / (beta.clone() + gamma.clone());
    let sigma = (b.clone() - a.clone()) / alpha.clone();
    let delta = (b.clone() + d.clone()) / alpha.clone();
    // gamma - beta > 0 for every positive matrix, so this form also avoids cancellation
    let fixed_point = two.clone() * b.clone() / (gamma.clone() - beta.clone());
    let perron_value = (a.clone() + d.clone() + gamma.clone()) / two.clone();
    let minor_value = (a.clone() + d.clone() - gamma.clone()) / two.clone();
    let perron_left = (amd + gamma.clone(), two * b);
    let perron_right = (fixed_point.clone(), T::one() - fixed_point.clone());
    Ok(ProjectiveData {
        alpha,
        beta,
        gamma,
        rho,
        sigma,
        delta,
        fixed_point,
        perron_value,
        perron_left,
        perron_right,
        minor_value,
    })
}

/// Largest eigenvalue modulus of any real 2x2 matrix.
pub fn spectral_radius<T: Scalar>(m: &Matrix2<T>) -> Result<T> {
    let tr = m.trace();
    let det = m.det();
    let disc = tr.clone() * tr.clone() - T::from_i64(4) * det.clone();
    let exact = Tolerance::new(0.0, 0.0);
    if disc.sign(0.0, &exact) == Ordering::Less {
        return det.sqrt().ok_or(Error::InexactSqrt);
    }
    let root = disc.sqrt().ok_or(Error::InexactSqrt)?;
    Ok((tr.abs() + root) / T::from_i64(2))
}

/// Both eigenvalues when they are real, larger first.
pub fn real_eigenvalues<T: Scalar>(m: &Matrix2<T>) -> Option<(T, T)> {
    let tr = m.trace();
    let disc = tr.clone() * tr.clone() - T::from_i64(4) * m.det();
    let root = disc.sqrt()?;
    let two = T::from_i64(2);
    Some(((tr.clone() + root.clone()) / two.clone(), (tr - root) / two))
}

/// `q_A(z) = alpha z^2 + beta z - b`.
pub fn q_poly_eval<T: Scalar>(m: &Matrix2<T>, z: &T) -> Result<T> {
    if !m.entries_positive(&Tolerance::default()) {
        return Err(Error::NonPositiveMatrix);
    }
    let beta = m.a.clone() - m.d.clone() - T::from_i64(2) * m.b.clone();
    Ok(m.alpha() * z.clone() * z.clone() + beta * z.clone() - m.b.clone())
}

/// Product `A_{w_1} ... A_{w_n}` with `t A_1` in place of `A_1`.
///
/// Returns `(M, s)` with true product `e^s M`. Inexact backends divide by
/// the largest entry after every step.
pub fn word_product<T: Scalar>(pair: &MatrixPair<T>, t: &T, word: &BinaryWord) -> Result<(Matrix2<T>, f64)> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    if t.sign(0.0, &Tolerance::new(0.0, 0.0)) != Ordering::Greater {
        return Err(Error::NonPositiveScale);
    }
    let scaled = pair.a1.scale(t);
    let pick = |s: u8| if s == 0 { &pair.a0 } else { &scaled };
    let symbols = word.symbols();
    let mut acc = pick(symbols[0]).clone();
    let mut log_scale = 0.0;
    if !T::EXACT {
        log_scale += normalize(&mut acc);
    }
    for &s in &symbols[1..] {
        acc = acc.mul(pick(s));
        if !T::EXACT {
            log_scale += normalize(&mut acc);
        }
    }
    Ok((acc, log_scale))
}

fn normalize<T: Scalar>(m: &mut Matrix2<T>) -> f64 {
    let scale = m.max_abs();
    if scale > 0.0 && scale.is_finite() {
        let s = T::one() / T::from_f64(scale);
        *m = m.scale(&s);
        scale.ln()
    } else {
        0.0
    }
}

/// Natural log of the spectral radius of a word product, `(1/n)` not applied.
pub fn log_spectral_radius_of_word(pair: &MatrixPair<f64>, t: f64, word: &BinaryWord) -> Result<f64> {
    let (m, s) = word_product(pair, &t, word)?;
    Ok(s + spectral_radius(&m)?.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surd::Surd;
    use num::BigInt;
    use proptest::prelude::*;

    pub(crate) fn q(n: i64, d: i64) -> Surd {
        Surd::from_ints(n, d)
    }

    fn a0() -> Matrix2<Surd> {
        Matrix2::from_ratios([(5, 8), (3, 112), (7, 8), (15, 16)])
    }

    fn a1() -> Matrix2<Surd> {
        Matrix2::from_ratios([(15, 16), (1, 1), (1, 128), (7, 8)])
    }

    #[test]
    fn concave_member_data() {
        let p = projective_data(&a0()).unwrap();
        assert_eq!(p.perron_value, q(1, 1));
        assert_eq!(p.minor_value, q(9, 16));
        assert_eq!(p.rho, q(3, 4));
        assert_eq!(p.sigma, q(-67, 60));
        assert_eq!(p.fixed_point, q(1, 15));
        assert_eq!(p.gamma, q(7, 16));
        assert_eq!(p.alpha, q(15, 28));
        assert_eq!(p.delta, q(9, 5));
    }

    #[test]
    fn convex_member_data() {
        let p = projective_data(&a1()).unwrap();
        assert_eq!(p.perron_value, q(1, 1));
        assert_eq!(p.minor_value, q(13, 16));
        assert_eq!(p.rho, q(-8, 7));
        assert_eq!(p.sigma, q(-8, 119));
        assert_eq!(p.fixed_point, q(16, 17));
    }

    #[test]
    fn rejects_bad_matrices() {
        let zero_entry: Matrix2<Surd> = Matrix2::from_ratios([(1, 1), (0, 1), (1, 1), (1, 1)]);
        assert_eq!(projective_data(&zero_entry), Err(Error::NonPositiveMatrix));
        let singular: Matrix2<Surd> = Matrix2::from_ratios([(1, 1); 4]);
        assert_eq!(projective_data(&singular), Err(Error::NonPositiveMatrix));
        // a + c = b + d
        let affine: Matrix2<Surd> = Matrix2::from_ratios([(2, 1), (1, 1), (1, 1), (2, 1)]);
        assert_eq!(projective_data(&affine), Err(Error::AffineInducedMap));
    }

    #[test]
    fn spectral_radius_examples() {
        let ones: Matrix2<Surd> = Matrix2::from_ratios([(1, 1); 4]);
        assert_eq!(spectral_radius(&ones).unwrap(), q(2, 1));
        assert_eq!(spectral_radius(&a0()).unwrap(), q(1, 1));
        let m: Matrix2<Surd> = Matrix2::from_ratios([(2, 1), (1, 1), (1, 1), (1, 1)]);
        let r = spectral_radius(&m).unwrap();
        let five = Surd::sqrt_rational(&num::BigRational::from_integer(BigInt::from(5))).unwrap();
        assert_eq!(r, (q(3, 1) + five) / q(2, 1));
        // rotation: complex pair of modulus 1
        let rot: Matrix2<f64> = Matrix2::new(0.0, -1.0, 1.0, 0.0);
        assert!((spectral_radius(&rot).unwrap() - 1.0).abs() < 1e-15);
        let neg: Matrix2<f64> = Matrix2::new(-3.0, 0.0, 0.0, 1.0);
        assert_eq!(spectral_radius(&neg).unwrap(), 3.0);
    }

    #[test]
    fn q_polynomial() {
        assert_eq!(q_poly_eval(&a0(), &q(0, 1)).unwrap(), q(-3, 112));
        let rho0 = projective_data(&a0()).unwrap().rho;
        assert_eq!(q_poly_eval(&a0(), &rho0).unwrap(), q(0, 1));
        let v = q_poly_eval(&a1(), &q(3, 4)).unwrap();
        assert_eq!(v.sign(0.0, &Tolerance::default()), Ordering::Less);
    }

    #[test]
    fn word_product_examples() {
        let pair = MatrixPair::new(a0(), a1());
        let (m, s) = word_product(&pair, &q(1, 1), &"01".parse().unwrap()).unwrap();
        assert_eq!(s, 0.0);
        assert_eq!(m.trace(), q(32707, 14336));
        let (m0, s0) = word_product(&pair, &q(1, 1), &"0".parse().unwrap()).unwrap();
        assert_eq!((m0, s0), (a0(), 0.0));
        let pf = pair.to_f64();
        let (m2, s2) = word_product(&pf, &2.0, &"1".parse().unwrap()).unwrap();
        assert!((s2.exp() * spectral_radius(&m2).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(
            word_product(&pf, &0.0, &"1".parse().unwrap()),
            Err(Error::NonPositiveScale)
        );
        assert_eq!(word_product(&pf, &1.0, &BinaryWord::default()), Err(Error::EmptyWord));
    }

    #[test]
    fn long_products_do_not_overflow() {
        let big: MatrixPair<f64> =
            MatrixPair::new(Matrix2::new(30.0, 20.0, 10.0, 40.0), Matrix2::new(50.0, 1.0, 2.0, 60.0));
        let word = BinaryWord::new((0..400).map(|k| (k % 3 == 0) as u8));
        let v = log_spectral_radius_of_word(&big, 1.0, &word).unwrap();
        assert!(v.is_finite() && v > 400.0 * 3.0);
    }

    #[test]
    fn delta_of_powers_tends_to_rho() {
        let m = a0();
        let rho = projective_data(&m).unwrap().rho.to_f64();
        let mut pk = m.clone();
        for k in 1..200 {
            if (9f64 / 16.0).powi(k) < 1e-9 {
                let dk = projective_data(&pk).unwrap().delta.to_f64();
                assert!((dk - rho).abs() <= 1e-8, "k={k}: {dk} vs {rho}");
                return;
            }
            pk = pk.mul(&m);
        }
        panic!("power threshold never reached");
    }

    #[test]
    fn rho_moves_under_diagonal_conjugation() {
        // diag(2,1)^-1 (2,1;1,1) diag(2,1) = (2,1/2;2,1)
        let m: Matrix2<Surd> = Matrix2::from_ratios([(2, 1), (1, 1), (1, 1), (1, 1)]);
        let conj: Matrix2<Surd> = Matrix2::from_ratios([(2, 1), (1, 2), (2, 1), (1, 1)]);
        let r = projective_data(&m).unwrap().rho.to_f64();
        let rc = projective_data(&conj).unwrap().rho.to_f64();
        assert!((r - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-15);
        assert!((rc - 1.0 / 5f64.sqrt()).abs() < 1e-15);
    }

    pub(crate) fn positive_matrix() -> impl Strategy<Value = Matrix2<f64>> {
        [0.1f64..10.0, 0.1..10.0, 0.1..10.0, 0.1..10.0]
            .prop_map(|[a, b, c, d]| Matrix2::new(a, b, c, d))
            .prop_filter("det > 0 and alpha != 0", |m| m.det() > 1e-6 && m.alpha().abs() > 1e-6)
    }

    proptest! {
        #[test]
        fn projective_identities(m in positive_matrix()) {
            let p = projective_data(&m).unwrap();
            let lhs = p.gamma * p.gamma - p.beta * p.beta;
            let rhs = 4.0 * m.b * p.alpha;
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs()).max(1.0));
            let qr = q_poly_eval(&m, &p.rho).unwrap();
            prop_assert!(qr.abs() <= 1e-10 * (1.0 + p.rho.abs()).powi(2) * m.max_abs());
            let lam = p.perron_value;
            let (v0, v1) = p.perron_right;
            prop_assert!((m.a * v0 + m.b * v1 - lam * v0).abs() <= 1e-10 * lam);
            prop_assert!((m.c * v0 + m.d * v1 - lam * v1).abs() <= 1e-10 * lam);
            let (w0, w1) = p.perron_left;
            let wn = w0.abs() + w1.abs();
            prop_assert!((w0 * m.a + w1 * m.c - lam * w0).abs() <= 1e-10 * lam * wn);
            prop_assert!((w0 * m.b + w1 * m.d - lam * w1).abs() <= 1e-10 * lam * wn);
            prop_assert!((lam - (m.b / p.fixed_point + m.a - m.b)).abs() <= 1e-9 * lam);
            prop_assert!(p.fixed_point > 0.0 && p.fixed_point < 1.0);
        }

        #[test]
        fn rho_ignores_positive_scaling(m in positive_matrix(), s in 0.1f64..10.0) {
            let r0 = projective_data(&m).unwrap().rho;
            let r1 = projective_data(&m.scale(&s)).unwrap().rho;
            prop_assert!((r0 - r1).abs() <= 1e-9 * r0.abs().max(1.0));
        }

        #[test]
        fn products_are_cyclically_invariant(word in proptest::collection::vec(0u8..2, 1..12), t in 0.2f64..5.0) {
            let pair = MatrixPair::new(a0(), a1()).to_f64();
            let w = BinaryWord::new(word);
            let base = log_spectral_radius_of_word(&pair, t, &w).unwrap();
            for r in w.rotations() {
                let v = log_spectral_radius_of_word(&pair, t, &r).unwrap();
                prop_assert!((v - base).abs() <= 1e-10 * base.abs().max(1.0));
            }
        }
    }
}
