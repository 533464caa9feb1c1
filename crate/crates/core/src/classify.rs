//! Membership in the positive, concave-convex and Sturmian-family classes,
//! plus the equivalence transforms that act on pairs.

use std::cmp::Ordering;

use serde::Serialize;

use crate::dynamics::induced_map_eval;
use crate::error::{Error, Result};
use crate::matrix::{projective_data_with, Matrix2, MatrixPair, ProjectiveData};
use crate::scalar::{Scalar, Tolerance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Convexity {
    ProjectivelyConcave,
    ProjectivelyConvex,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatrixClassReport<T> {
    pub positive: bool,
    pub det_positive: bool,
    pub convexity: Convexity,
    /// `None` when the matrix has no projective data (not positive, or `alpha = 0`).
    pub witness: Option<ProjectiveData<T>>,
}

/// Signed margins, positive when the corresponding strict inequality holds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityMargins<T> {
    /// `b1/d1 - a0/c0`.
    pub ratio: Option<T>,
    /// `min(alpha_{A0}, -alpha_{A1})`.
    pub alpha_signs: Option<T>,
    /// `sigma_{A0} - rho_{A1}`.
    pub rho1_below_sigma0: Option<T>,
    /// `rho_{A0} - sigma_{A1}`.
    pub sigma1_below_rho0: Option<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairClassReport<T> {
    pub in_m2plus: bool,
    pub in_c: bool,
    pub in_d: bool,
    /// `(T_{A0}(1), T_{A1}(0))`: right end of `X_{A0}` and left end of `X_{A1}`.
    pub image_gap: Option<(T, T)>,
    pub inequality_margins: InequalityMargins<T>,
}

fn scale_of<T: Scalar>(xs: &[&T]) -> f64 {
    xs.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
}

fn positive<T: Scalar>(x: &T, scale: f64, tol: &Tolerance) -> bool {
    x.sign(scale, tol) == Ordering::Greater
}

pub fn classify_matrix<T: Scalar>(m: &Matrix2<T>) -> Result<MatrixClassReport<T>> {
    classify_matrix_with(m, &Tolerance::default())
}

pub fn classify_matrix_with<T: Scalar>(m: &Matrix2<T>, tol: &Tolerance) -> Result<MatrixClassReport<T>> {
    let pos = m.entries_positive(tol);
    let scale = scale_of(&[&m.a, &m.b, &m.c, &m.d]);
    let det_positive = positive(&m.det(), scale * scale, tol);
    let not_applicable = MatrixClassReport {
        positive: pos,
        det_positive,
        convexity: Convexity::NotApplicable,
        witness: None,
    };
    if !(pos && det_positive) {
        return Ok(not_applicable);
    }
    let data = match projective_data_with(m, tol) {
        Ok(d) => d,
        Err(Error::AffineInducedMap) => return Ok(not_applicable),
        Err(e) => return Err(e),
    };
    let by_alpha = data.alpha.sign(scale, tol);
    let rho_scale = data.rho.to_f64().abs().max(1.0);
    let by_rho = if positive(&data.rho, rho_scale, tol) {
        Ordering::Greater
    } else if positive(&(-(data.rho.clone() + T::one())), rho_scale, tol) {
        Ordering::Less
    } else {
        Ordering::Equal
    };
    let (w1, w2) = &data.perron_left;
    let by_eigenvector = (w1.clone() - w2.clone()).sign(scale_of(&[w1, w2]), tol);
    // chord test on the induced map: concave iff the midpoint lies above the chord
    let half = T::from_ratio(1, 2);
    let mid = induced_map_eval(m, &half)?;
    let ends = (induced_map_eval(m, &T::zero())? + induced_map_eval(m, &T::one())?) * half;
    let by_chord = (mid - ends).sign(1.0, tol);
    let verdicts = [by_alpha, by_rho, by_eigenvector, by_chord];
    if verdicts.iter().any(|v| *v != by_alpha) || by_alpha == Ordering::Equal {
        return Err(Error::InconsistentEquivalences);
    }
    let convexity = if by_alpha == Ordering::Greater {
        Convexity::ProjectivelyConcave
    } else {
        Convexity::ProjectivelyConvex
    };
    Ok(MatrixClassReport {
        positive: pos,
        det_positive,
        convexity,
        witness: Some(data),
    })
}

/// Full classification of a pair: positivity, the concave-convex class and the
/// Sturmian-family class, with margins.
pub fn classify_pair<T: Scalar>(pair: &MatrixPair<T>) -> PairClassReport<T> {
    classify_pair_with(pair, &Tolerance::default())
}

pub fn classify_pair_with<T: Scalar>(pair: &MatrixPair<T>, tol: &Tolerance) -> PairClassReport<T> {
    let (m0, m1) = (&pair.a0, &pair.a1);
    let in_m2plus = m0.is_positive_det_positive(tol) && m1.is_positive_det_positive(tol);
    let p0 = projective_data_with(m0, tol).ok();
    let p1 = projective_data_with(m1, tol).ok();
    let entries_ok = m0.entries_positive(tol) && m1.entries_positive(tol);

    let ratio = (entries_ok).then(|| m1.b.clone() / m1.d.clone() - m0.a.clone() / m0.c.clone());
    let alpha_signs = entries_ok.then(|| {
        let x = m0.alpha();
        let y = -m1.alpha();
        crate::scalar::min_of(x, y)
    });
    let image_gap = entries_ok.then(|| {
        (
            m0.a.clone() / (m0.a.clone() + m0.c.clone()),
            m1.b.clone() / (m1.b.clone() + m1.d.clone()),
        )
    });
    let (rho1_below_sigma0, sigma1_below_rho0) = match (&p0, &p1) {
        (Some(p0), Some(p1)) => (
            Some(p0.sigma.clone() - p1.rho.clone()),
            Some(p0.rho.clone() - p1.sigma.clone()),
        ),
        _ => (None, None),
    };
    let holds = |x: &Option<T>| {
        x.as_ref()
            .map(|v| positive(v, v.to_f64().abs().max(1.0), tol))
            .unwrap_or(false)
    };
    let in_c = in_m2plus && holds(&ratio) && holds(&alpha_signs);
    let in_d = in_c && holds(&rho1_below_sigma0) && holds(&sigma1_below_rho0);
    PairClassReport {
        in_m2plus,
        in_c,
        in_d,
        image_gap,
        inequality_margins: InequalityMargins {
            ratio,
            alpha_signs,
            rho1_below_sigma0,
            sigma1_below_rho0,
        },
    }
}

pub fn in_class_c<T: Scalar>(pair: &MatrixPair<T>) -> PairClassReport<T> {
    classify_pair(pair)
}

pub fn in_class_d<T: Scalar>(pair: &MatrixPair<T>) -> PairClassReport<T> {
    classify_pair(pair)
}

/// `((1, b; c, 1), (1, c; b, 1))`.
pub fn d2_pair<T: Scalar>(b: T, c: T) -> Result<MatrixPair<T>> {
    let exact = Tolerance::new(0.0, 0.0);
    if !positive(&b, 0.0, &exact) || !positive(&c, 0.0, &exact) {
        return Err(Error::NonPositiveScale);
    }
    Ok(MatrixPair::new(
        Matrix2::new(T::one(), b.clone(), c.clone(), T::one()),
        Matrix2::new(T::one(), c, b, T::one()),
    ))
}

/// `(A0, t A1)`.
pub fn scale_pair<T: Scalar>(pair: &MatrixPair<T>, t: &T) -> Result<MatrixPair<T>> {
    if !positive(t, 0.0, &Tolerance::new(0.0, 0.0)) {
        return Err(Error::NonPositiveScale);
    }
    Ok(MatrixPair::new(pair.a0.clone(), pair.a1.scale(t)))
}

/// `(u P^-1 A0 P, v P^-1 A1 P)`.
pub fn similarity_transform<T: Scalar>(pair: &MatrixPair<T>, p: &Matrix2<T>, u: &T, v: &T) -> Result<MatrixPair<T>> {
    let exact = Tolerance::new(0.0, 0.0);
    if !positive(u, 0.0, &exact) || !positive(v, 0.0, &exact) {
        return Err(Error::NonPositiveScale);
    }
    let pinv = p.inverse()?;
    let conj = |m: &Matrix2<T>| pinv.mul(m).mul(p);
    Ok(MatrixPair::new(conj(&pair.a0).scale(u), conj(&pair.a1).scale(v)))
}
