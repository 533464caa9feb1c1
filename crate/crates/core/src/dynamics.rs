//! Induced interval maps, the two-branch induced system and Sturmian intervals.

use std::cmp::Ordering;

use serde::Serialize;

use crate::classify::classify_pair;
use crate::error::{Error, Result};
use crate::matrix::{projective_data, Matrix2, MatrixPair, ProjectiveData};
use crate::scalar::{Scalar, Tolerance};
use crate::words::BinaryWord;

/// Slack used for membership of float points in closed intervals.
pub const MEMBERSHIP_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, hi: T) -> Self {
        Interval { lo, hi }
    }

    pub fn to_f64(&self) -> Interval<f64> {
        Interval {
            lo: self.lo.to_f64(),
            hi: self.hi.to_f64(),
        }
    }
}

impl Interval<f64> {
    pub fn contains(&self, x: f64, slack: f64) -> bool {
        self.lo - slack <= x && x <= self.hi + slack
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }
}

fn in_unit<T: Scalar>(x: &T) -> bool {
    let tol = Tolerance::new(0.0, MEMBERSHIP_SLACK);
    let exact = if T::EXACT { Tolerance::new(0.0, 0.0) } else { tol };
    x.sign(1.0, &exact) != Ordering::Less && (T::one() - x.clone()).sign(1.0, &exact) != Ordering::Less
}

/// `T_A(x) = ((a-b)x + b) / (alpha x + b + d)` on `[0, 1]`.
pub fn induced_map_eval<T: Scalar>(m: &Matrix2<T>, x: &T) -> Result<T> {
    if !in_unit(x) {
        return Err(Error::DomainError(x.to_f64()));
    }
    let num = (m.a.clone() - m.b.clone()) * x.clone() + m.b.clone();
    let den = m.alpha() * x.clone() + m.b.clone() + m.d.clone();
    Ok(num / den)
}

/// `X_A = [b/(b+d), a/(a+c)]`.
pub fn induced_image<T: Scalar>(m: &Matrix2<T>) -> Interval<T> {
    Interval::new(
        m.b.clone() / (m.b.clone() + m.d.clone()),
        m.a.clone() / (m.a.clone() + m.c.clone()),
    )
}

/// `S_A(x) = ((b+d)x - b) / (-alpha x + a - b)` on `X_A`.
pub fn induced_inverse_eval<T: Scalar>(m: &Matrix2<T>, x: &T) -> Result<T> {
    let img = induced_image(m);
    let tol = if T::EXACT {
        Tolerance::new(0.0, 0.0)
    } else {
        Tolerance::new(0.0, MEMBERSHIP_SLACK)
    };
    let below = (x.clone() - img.lo).sign(1.0, &tol) == Ordering::Less;
    let above = (img.hi - x.clone()).sign(1.0, &tol) == Ordering::Less;
    if below || above {
        return Err(Error::DomainError(x.to_f64()));
    }
    let num = (m.b.clone() + m.d.clone()) * x.clone() - m.b.clone();
    let den = -m.alpha() * x.clone() + m.a.clone() - m.b.clone();
    Ok(num / den)
}

/// Coefficients of a Möbius map `x -> (p x + q) / (r x + s)`.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Mobius {
    p: f64,
    q: f64,
    r: f64,
    s: f64,
}

impl Mobius {
    fn eval(&self, x: f64) -> f64 {
        (self.p * x + self.q) / (self.r * x + self.s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Itinerary {
    pub word: BinaryWord,
    pub escaped_at: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SturmianIntervalSpec {
    pub c: f64,
    /// `[T_{A0}(c), T_{A0}(1)]`, absent when it is a single point.
    pub piece0: Option<Interval<f64>>,
    /// `[T_{A1}(0), T_{A1}(c)]`, absent when it is a single point.
    pub piece1: Option<Interval<f64>>,
}

impl SturmianIntervalSpec {
    pub fn contains(&self, x: f64, slack: f64) -> bool {
        [&self.piece0, &self.piece1]
            .into_iter()
            .flatten()
            .any(|p| p.contains(x, slack))
    }
}

/// The two-branch expanding map on `X_{A0} ∪ X_{A1}` for the pair `(A0, t A1)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InducedSystem {
    pub pair: MatrixPair<f64>,
    pub t: f64,
    pub x0: Interval<f64>,
    pub x1: Interval<f64>,
    pub proj0: ProjectiveData<f64>,
    pub proj1: ProjectiveData<f64>,
    #[serde(skip)]
    det: [f64; 2],
    #[serde(skip)]
    forward: [Mobius; 2],
    #[serde(skip)]
    inverse: [Mobius; 2],
}

impl InducedSystem {
    /// Builds the induced system; derived data are computed on the input backend.
    pub fn new<T: Scalar>(pair: &MatrixPair<T>, t: f64) -> Result<Self> {
        if !classify_pair(pair).in_c {
            return Err(Error::NotInClassC);
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::NonPositiveScale);
        }
        let proj0 = projective_data(&pair.a0)?.to_f64();
        let proj1 = projective_data(&pair.a1)?.to_f64();
        let x0 = induced_image(&pair.a0).to_f64();
        let x1 = induced_image(&pair.a1).to_f64();
        let det = [pair.a0.det().to_f64(), pair.a1.det().to_f64()];
        let pf = pair.to_f64();
        let fwd = |m: &Matrix2<f64>| Mobius {
            p: m.a - m.b,
            q: m.b,
            r: m.alpha(),
            s: m.b + m.d,
        };
        let inv = |m: &Matrix2<f64>| Mobius {
            p: m.b + m.d,
            q: -m.b,
            r: -m.alpha(),
            s: m.a - m.b,
        };
        Ok(InducedSystem {
            forward: [fwd(&pf.a0), fwd(&pf.a1)],
            inverse: [inv(&pf.a0), inv(&pf.a1)],
            pair: pf,
            t,
            x0,
            x1,
            proj0,
            proj1,
            det,
        })
    }

    /// Same system with a different scaling of `A1`.
    pub fn with_t(&self, t: f64) -> Self {
        InducedSystem { t, ..self.clone() }
    }

    pub fn proj(&self, i: usize) -> &ProjectiveData<f64> {
        if i == 0 {
            &self.proj0
        } else {
            &self.proj1
        }
    }

    pub fn image(&self, i: usize) -> &Interval<f64> {
        if i == 0 {
            &self.x0
        } else {
            &self.x1
        }
    }

    /// `T_{A_i}(x)`.
    pub fn tmap(&self, i: usize, x: f64) -> f64 {
        self.forward[i].eval(x)
    }

    /// `S_{A_i}(x)`.
    pub fn smap(&self, i: usize, x: f64) -> f64 {
        self.inverse[i].eval(x)
    }

    /// `T_{A_i}'(x) = det / (alpha x + b + d)^2`.
    pub fn tmap_derivative(&self, i: usize, x: f64) -> f64 {
        let m = &self.forward[i];
        let den = m.r * x + m.s;
        self.det[i] / (den * den)
    }

    /// Largest derivative of either forward branch on `[0, 1]`.
    pub fn contraction_bound(&self) -> f64 {
        (0..2)
            .map(|i| self.tmap_derivative(i, 0.0).max(self.tmap_derivative(i, 1.0)))
            .fold(0.0, f64::max)
    }

    pub fn branch(&self, x: f64) -> Option<usize> {
        if self.x0.contains(x, MEMBERSHIP_SLACK) {
            Some(0)
        } else if self.x1.contains(x, MEMBERSHIP_SLACK) {
            Some(1)
        } else {
            None
        }
    }

    /// One step of the induced map, clamped to `[0, 1]`.
    pub fn step(&self, x: f64) -> Option<(usize, f64)> {
        let i = self.branch(x)?;
        Some((i, self.smap(i, x).clamp(0.0, 1.0)))
    }

    /// `f` on branch `i` including the `log t` shift on branch 1.
    pub fn f_branch(&self, i: usize, x: f64) -> f64 {
        let p = self.proj(i);
        let base = (self.det[i] / (-p.alpha * (x + p.sigma))).ln();
        if i == 1 {
            base + self.t.ln()
        } else {
            base
        }
    }

    pub fn f_eval(&self, x: f64) -> Result<f64> {
        match self.branch(x) {
            Some(i) => Ok(self.f_branch(i, x)),
            None => Err(Error::DomainError(x)),
        }
    }

    /// `f'(x) = -1 / (x + sigma_i)` on branch `i`.
    pub fn f_prime(&self, i: usize, x: f64) -> f64 {
        -1.0 / (x + self.proj(i).sigma)
    }

    /// `sup |f'|` over `X_i`; `x + sigma_i` keeps one sign there.
    pub fn sup_f_prime(&self, i: usize) -> f64 {
        let x = self.image(i);
        self.f_prime(i, x.lo).abs().max(self.f_prime(i, x.hi).abs())
    }

    pub fn itinerary(&self, x: f64, n: usize) -> Itinerary {
        let mut word = BinaryWord::default();
        let mut y = x;
        for j in 0..n {
            match self.step(y) {
                Some((i, next)) => {
                    word.push(i as u8);
                    y = next;
                }
                None => {
                    return Itinerary {
                        word,
                        escaped_at: Some(j),
                    }
                }
            }
        }
        Itinerary { word, escaped_at: None }
    }

    /// Fixed point of `T_{w_1} ∘ ... ∘ T_{w_n}` by iteration from `1/2`.
    pub fn periodic_point(&self, word: &BinaryWord) -> Result<f64> {
        if word.is_empty() {
            return Err(Error::EmptyWord);
        }
        let apply = |x: f64| word.symbols().iter().rev().fold(x, |y, &s| self.tmap(s as usize, y));
        let mut x = 0.5;
        for _ in 0..10_000 {
            let next = apply(x);
            if (next - x).abs() < 1e-14 {
                return Ok(next);
            }
            x = next;
        }
        Err(Error::NoConvergence(format!("periodic point of {word}")))
    }

    /// `T_{A1}(x)` left of `c`, `T_{A0}(x)` from `c` on.
    pub fn hybrid_contraction_eval(&self, c: f64, x: f64) -> f64 {
        if x < c {
            self.tmap(1, x)
        } else {
            self.tmap(0, x)
        }
    }

    pub fn sturmian_interval(&self, c: f64) -> SturmianIntervalSpec {
        let piece0 = (c < 1.0).then(|| Interval::new(self.tmap(0, c), self.x0.hi));
        let piece1 = (c > 0.0).then(|| Interval::new(self.x1.lo, self.tmap(1, c)));
        SturmianIntervalSpec { c, piece0, piece1 }
    }
}
