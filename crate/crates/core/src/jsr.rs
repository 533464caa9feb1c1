//! Joint spectral radius bounds by brute force and by Sturmian-restricted search.

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::classify_pair;
use crate::dynamics::InducedSystem;
use crate::error::{Error, Result};
use crate::matrix::{log_spectral_radius_of_word, word_product, Matrix2, MatrixPair};
use crate::scalar::Scalar;
use crate::words::{farey_sequence, is_balanced, lyndon_words, mechanical_word, BinaryWord, RationalParameter};

/// Values closer than this count as ties.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Logarithmic bounds on the joint spectral radius.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JsrEstimate {
    pub lower: f64,
    pub upper: Option<f64>,
    pub argmax_word: BinaryWord,
    pub argmax_parameter: Option<RationalParameter>,
    pub max_length: usize,
}

/// `(1/n) log r(A(w))` for the pair `(A0, t A1)`.
pub fn word_value(pair: &MatrixPair<f64>, t: f64, word: &BinaryWord) -> Result<f64> {
    Ok(log_spectral_radius_of_word(pair, t, word)? / word.len() as f64)
}

fn better(cand: &(f64, BinaryWord), best: &(f64, BinaryWord)) -> bool {
    if (cand.0 - best.0).abs() <= TIE_TOLERANCE {
        cand.1 < best.1
    } else {
        cand.0 > best.0
    }
}

/// Maximizes the normalized log spectral radius over primitive necklaces of
/// length at most `max_len`.
pub fn jsr_lower_bruteforce<T: Scalar>(pair: &MatrixPair<T>, t: f64, max_len: usize) -> Result<JsrEstimate> {
    if max_len == 0 {
        return Err(Error::InvalidParameter("max_len must be at least 1".into()));
    }
    if t.is_nan() || t <= 0.0 {
        return Err(Error::NonPositiveScale);
    }
    let pf = pair.to_f64();
    let words = lyndon_words(max_len);
    let values = words
        .par_iter()
        .map(|w| word_value(&pf, t, w))
        .collect::<Result<Vec<f64>>>()?;
    let mut best = (f64::NEG_INFINITY, BinaryWord::default());
    for (v, w) in values.into_iter().zip(words) {
        let cand = (v, w);
        if better(&cand, &best) {
            best = cand;
        }
    }
    let (lower, argmax_word) = best;
    let argmax_parameter = if is_balanced(&argmax_word) {
        argmax_word.parameter()
    } else {
        None
    };
    Ok(JsrEstimate {
        lower,
        upper: None,
        argmax_word,
        argmax_parameter,
        max_length: max_len,
    })
}

fn sum_norm(m: &Matrix2<f64>) -> f64 {
    m.a.abs() + m.b.abs() + m.c.abs() + m.d.abs()
}

/// `min_n (1/n) log max_{|w| = n} ||A(w)||` with the entrywise-sum norm.
pub fn jsr_upper_norm<T: Scalar>(pair: &MatrixPair<T>, t: f64, max_len: usize) -> Result<f64> {
    if max_len == 0 {
        return Err(Error::InvalidParameter("max_len must be at least 1".into()));
    }
    if t.is_nan() || t <= 0.0 {
        return Err(Error::NonPositiveScale);
    }
    let pf = pair.to_f64();
    let mats = [pf.a0.clone(), pf.a1.scale(&t)];
    // best[n] = max over words of length n+1 of log ||A(w)||
    let mut best = vec![f64::NEG_INFINITY; max_len];
    let mut stack: Vec<(Matrix2<f64>, f64, usize)> = mats.iter().map(|m| (m.clone(), 0.0, 1)).collect();
    while let Some((m, s, n)) = stack.pop() {
        let log_norm = s + sum_norm(&m).ln();
        best[n - 1] = best[n - 1].max(log_norm);
        if n < max_len {
            for next in &mats {
                let mut p = m.mul(next);
                let scale = p.a.max(p.b).max(p.c).max(p.d);
                p = p.scale(&(1.0 / scale));
                stack.push((p, s + scale.ln(), n + 1));
            }
        }
    }
    Ok(best
        .iter()
        .enumerate()
        .map(|(i, v)| v / (i + 1) as f64)
        .fold(f64::INFINITY, f64::min))
}

/// Brute-force lower bound together with the norm upper bound.
pub fn jsr_bounds<T: Scalar>(pair: &MatrixPair<T>, t: f64, max_len: usize) -> Result<JsrEstimate> {
    let mut est = jsr_lower_bruteforce(pair, t, max_len)?;
    est.upper = Some(jsr_upper_norm(pair, t, max_len)?);
    Ok(est)
}

/// `(1/q) log r` of the product along the mechanical word of `param`.
pub fn sturmian_value<T: Scalar>(pair: &MatrixPair<T>, t: f64, param: RationalParameter) -> Result<f64> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::NonPositiveScale);
    }
    word_value(&pair.to_f64(), t, &mechanical_word(param))
}

/// Average of `f` along the periodic orbit coded by `word`, using orbit points.
pub fn ergodic_average_f(sys: &InducedSystem, word: &BinaryWord) -> Result<f64> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut total = 0.0;
    for (j, rot) in word.rotations().enumerate() {
        let x = sys.periodic_point(&rot)?;
        total += sys.f_branch(word.symbols()[j] as usize, x);
    }
    Ok(total / word.len() as f64)
}

/// Values of every Sturmian parameter up to a denominator bound at `t = 1`.
///
/// Under `(A0, t A1)` the value of `p/q` is `V(p/q) + (p/q) log t`, so one
/// table answers every `t`.
#[derive(Clone, Debug)]
pub struct SturmianTable {
    entries: Vec<(RationalParameter, f64)>,
    max_den: u64,
}

impl SturmianTable {
    pub fn new<T: Scalar>(pair: &MatrixPair<T>, max_den: u64) -> Result<Self> {
        if max_den == 0 {
            return Err(Error::InvalidParameter("max_den must be at least 1".into()));
        }
        let pf = pair.to_f64();
        let params = farey_sequence(max_den);
        let values = params
            .par_iter()
            .map(|&p| sturmian_value(&pf, 1.0, p))
            .collect::<Result<Vec<f64>>>()?;
        Ok(SturmianTable {
            entries: params.into_iter().zip(values).collect(),
            max_den,
        })
    }

    pub fn max_den(&self) -> u64 {
        self.max_den
    }

    /// Value of a tabulated parameter at scaling `t`.
    pub fn value(&self, param: RationalParameter, t: f64) -> Option<f64> {
        self.entries
            .iter()
            .find(|(p, _)| *p == param)
            .map(|&(p, v)| v + p.to_f64() * t.ln())
    }

    /// Best parameter at scaling `t`; ties go to the smaller denominator, then smaller numerator.
    pub fn argmax(&self, t: f64) -> (RationalParameter, f64) {
        let lt = t.ln();
        let mut best: Option<(RationalParameter, f64)> = None;
        for &(p, v) in &self.entries {
            let value = v + p.to_f64() * lt;
            best = match best {
                None => Some((p, value)),
                Some((bp, bv)) => {
                    let tie = (value - bv).abs() <= TIE_TOLERANCE;
                    let wins = if tie {
                        (p.denom(), p.numer()) < (bp.denom(), bp.numer())
                    } else {
                        value > bv
                    };
                    if wins {
                        Some((p, value))
                    } else {
                        Some((bp, bv))
                    }
                }
            };
        }
        best.expect("table is never empty")
    }
}

/// Best Sturmian parameter with denominator at most `max_den` and its value.
pub fn sturmian_restricted_max<T: Scalar>(
    pair: &MatrixPair<T>,
    t: f64,
    max_den: u64,
) -> Result<(RationalParameter, f64)> {
    if !classify_pair(pair).in_d {
        return Err(Error::NotInClassD);
    }
    if t.is_nan() || t <= 0.0 {
        return Err(Error::NonPositiveScale);
    }
    Ok(SturmianTable::new(pair, max_den)?.argmax(t))
}

/// `(1/n) log r` computed through the matrix product, as an independent oracle.
pub fn product_value<T: Scalar>(pair: &MatrixPair<T>, t: &T, word: &BinaryWord) -> Result<f64> {
    let (m, s) = word_product(pair, t, word)?;
    let r = crate::matrix::spectral_radius(&m)?;
    Ok((s + r.to_f64().ln()) / word.len() as f64)
}
