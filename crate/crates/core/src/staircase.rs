//! The parameter map `t -> P(t)`, staircase scans, plateau bounds and the
//! search for scalings with irrational Sturmian parameter.

use rayon::prelude::*;
use serde::Serialize;

use crate::certify::{gamma_of_t, thresholds, Regime, ThresholdPair, TransferSeriesConfig};
use crate::classify::classify_pair;
use crate::dynamics::InducedSystem;
use crate::error::{Error, Result};
use crate::jsr::SturmianTable;
use crate::matrix::MatrixPair;
use crate::scalar::Scalar;
use crate::words::{mechanical_word, parameter_from_itinerary, BinaryWord, ParameterBracket, RationalParameter};

/// Bisection steps on `log t` before a search gives up.
const MAX_BISECTIONS: usize = 200;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StaircaseSample {
    pub t: f64,
    pub parameter: RationalParameter,
    pub value: f64,
    pub word: BinaryWord,
}

/// `t_hi` is infinite for the parameter `1/1` and serializes as `null`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PlateauEstimate {
    pub parameter: RationalParameter,
    pub t_lo: f64,
    pub t_hi: f64,
    pub resolution: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub target: f64,
    pub t: f64,
    pub bracket: ParameterBracket,
    /// Range of `t` whose parameter lies in `bracket`.
    pub t_bracket: (f64, f64),
    pub regime: Regime,
    /// No rational up to the denominator bound is maximizing near `t`.
    pub candidate: bool,
    pub max_den: u64,
}

/// Parameter map at a fixed denominator bound, reusable across many `t`.
#[derive(Clone, Debug)]
pub struct Staircase {
    thresholds: ThresholdPair<f64>,
    table: SturmianTable,
}

impl Staircase {
    pub fn new<T: Scalar>(pair: &MatrixPair<T>, max_den: u64) -> Result<Self> {
        if !classify_pair(pair).in_d {
            return Err(Error::NotInClassD);
        }
        let thresholds = thresholds(pair)?.to_f64();
        let table = SturmianTable::new(pair, max_den)?;
        Ok(Staircase { thresholds, table })
    }

    pub fn thresholds(&self) -> &ThresholdPair<f64> {
        &self.thresholds
    }

    pub fn max_den(&self) -> u64 {
        self.table.max_den()
    }

    pub fn parameter(&self, t: f64) -> Result<RationalParameter> {
        if t.is_nan() || t <= 0.0 {
            return Err(Error::NonPositiveScale);
        }
        Ok(match self.thresholds.regime(&t) {
            Regime::A0Dominates => RationalParameter::ZERO,
            Regime::A1Dominates => RationalParameter::ONE,
            Regime::Interior => self.table.argmax(t).0,
        })
    }

    pub fn sample(&self, t: f64) -> Result<StaircaseSample> {
        let parameter = self.parameter(t)?;
        let value = self.table.value(parameter, t).expect("parameter comes from the table");
        Ok(StaircaseSample {
            t,
            parameter,
            value,
            word: mechanical_word(parameter),
        })
    }

    /// Moves `outside` towards `inside` in `log t` until they are closer
    /// than `resolution` in `t`; returns the final `inside` point.
    fn edge(&self, param: RationalParameter, mut outside: f64, mut inside: f64, resolution: f64) -> Result<f64> {
        for _ in 0..MAX_BISECTIONS {
            if (inside - outside).abs() < resolution {
                return Ok(inside);
            }
            let mid = (0.5 * (inside.ln() + outside.ln())).exp();
            if mid == inside || mid == outside {
                return Ok(inside);
            }
            if self.parameter(mid)? == param {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        Ok(inside)
    }

    /// Some `t` in `(t0, t1)` with parameter `param`, by bisection on `log t`.
    fn locate(&self, param: RationalParameter) -> Result<Option<f64>> {
        let (mut lo, mut hi) = (self.thresholds.t0.ln(), self.thresholds.t1.ln());
        for _ in 0..MAX_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let p = self.parameter(mid.exp())?;
            match p.cmp(&param) {
                std::cmp::Ordering::Equal => return Ok(Some(mid.exp())),
                std::cmp::Ordering::Less => lo = mid,
                std::cmp::Ordering::Greater => hi = mid,
            }
        }
        Ok(None)
    }

    pub fn plateau(&self, param: RationalParameter, resolution: f64) -> Result<PlateauEstimate> {
        if resolution.is_nan() || resolution <= 0.0 {
            return Err(Error::InvalidParameter("resolution must be positive".into()));
        }
        let th = &self.thresholds;
        // the thresholds lie inside the extremal plateaus, which reach into (t0, t1)
        let (t_lo, t_hi) = if param == RationalParameter::ZERO {
            (0.0, self.edge(param, th.t1, th.t0, resolution)?)
        } else if param == RationalParameter::ONE {
            (self.edge(param, th.t0, th.t1, resolution)?, f64::INFINITY)
        } else {
            let not_found = || Error::PlateauNotFound(format!("{param} at max_den {}", self.max_den()));
            if param.denom() > self.max_den() {
                return Err(not_found());
            }
            let inner = self.locate(param)?.ok_or_else(not_found)?;
            (
                self.edge(param, th.t0, inner, resolution)?,
                self.edge(param, th.t1, inner, resolution)?,
            )
        };
        Ok(PlateauEstimate {
            parameter: param,
            t_lo,
            t_hi,
            resolution,
        })
    }

    pub fn counterexample(&self, target: f64, tol: f64) -> Result<CounterexampleReport> {
        if !(target > 0.0 && target < 1.0) {
            return Err(Error::InvalidParameter(format!("target {target} is not in (0, 1)")));
        }
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidParameter("tolerance must be positive".into()));
        }
        let (mut lo, mut hi) = (self.thresholds.t0, self.thresholds.t1);
        let mut hit = None;
        for _ in 0..MAX_BISECTIONS {
            if hi - lo < tol {
                break;
            }
            let mid = (0.5 * (lo.ln() + hi.ln())).exp();
            if mid <= lo || mid >= hi {
                break;
            }
            let p = self.parameter(mid)?;
            if p.to_f64() < target {
                lo = mid;
            } else if p.to_f64() > target {
                hi = mid;
            } else {
                hit = Some((mid, p));
                break;
            }
        }
        if hi - lo >= tol && hit.is_none() {
            return Err(Error::NoConvergence(format!("bisection towards parameter {target}")));
        }
        let (t, bracket, t_bracket) = match hit {
            Some((t, p)) => {
                let plateau = self.plateau(p, tol)?;
                (t, ParameterBracket::exact(p), (plateau.t_lo, plateau.t_hi))
            }
            None => {
                let (lower, upper) = (self.parameter(lo)?, self.parameter(hi)?);
                let bracket = if lower == upper {
                    ParameterBracket::exact(lower)
                } else {
                    ParameterBracket {
                        lower,
                        upper,
                        exact: None,
                    }
                };
                let left = self.edge(lower, self.thresholds.t0, lo, tol)?;
                let right = self.edge(upper, self.thresholds.t1, hi, tol)?;
                ((0.5 * (lo.ln() + hi.ln())).exp(), bracket, (left, right))
            }
        };
        Ok(CounterexampleReport {
            target,
            t,
            bracket,
            t_bracket,
            regime: self.thresholds.regime(&t),
            candidate: bracket.exact.is_none(),
            max_den: self.max_den(),
        })
    }
}

pub fn parameter_map<T: Scalar>(pair: &MatrixPair<T>, t: f64, max_den: u64) -> Result<StaircaseSample> {
    Staircase::new(pair, max_den)?.sample(t)
}

/// `samples` geometrically spaced scalings from `t_min` to `t_max`, sorted by `t`.
pub fn staircase_scan<T: Scalar>(
    pair: &MatrixPair<T>,
    t_min: f64,
    t_max: f64,
    samples: usize,
    max_den: u64,
) -> Result<Vec<StaircaseSample>> {
    if !(t_min > 0.0 && t_min < t_max) {
        return Err(Error::InvalidParameter("need 0 < t_min < t_max".into()));
    }
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least two samples".into()));
    }
    let stairs = Staircase::new(pair, max_den)?;
    let (a, b) = (t_min.ln(), t_max.ln());
    let last = (samples - 1) as f64;
    (0..samples)
        .into_par_iter()
        .map(|k| {
            let t = match k {
                0 => t_min,
                k if k == samples - 1 => t_max,
                k => (a + (b - a) * k as f64 / last).exp(),
            };
            stairs.sample(t)
        })
        .collect()
}

pub fn plateau_bounds<T: Scalar>(
    pair: &MatrixPair<T>,
    param: RationalParameter,
    resolution: f64,
    max_den: u64,
) -> Result<PlateauEstimate> {
    Staircase::new(pair, max_den)?.plateau(param, resolution)
}

pub fn counterexample_search<T: Scalar>(
    pair: &MatrixPair<T>,
    target: f64,
    tol: f64,
    max_den: u64,
) -> Result<CounterexampleReport> {
    Staircase::new(pair, max_den)?.counterexample(target, tol)
}

/// Value of the continued fraction `[0; a1, a2, ...]` given as `cf:a1,a2,...`,
/// or a plain decimal.
pub fn parse_target(spec: &str) -> Result<f64> {
    let bad = || Error::InvalidInput(format!("bad target {spec:?}"));
    match spec.strip_prefix("cf:") {
        Some(list) => {
            let terms = list
                .split(',')
                .map(|s| s.trim().parse::<u64>().ok().filter(|&a| a > 0))
                .collect::<Option<Vec<u64>>>()
                .ok_or_else(bad)?;
            if terms.is_empty() {
                return Err(bad());
            }
            Ok(terms.iter().rev().fold(0.0, |x, &a| 1.0 / (a as f64 + x)))
        }
        None => spec.trim().parse::<f64>().map_err(|_| bad()),
    }
}

/// Sturmian parameter read off the itinerary of `c*(t)`.
///
/// `[T_{A0}(c), T_{A1}(c)]` is the interval `[0w, 1w]` with `w` the itinerary
/// of `c`. An itinerary that leaves `X_{A0} ∪ X_{A1}` after a prefix `u` is
/// completed as both `u0 1^∞` and `u1 0^∞` and the brackets are joined.
pub fn itinerary_parameter(
    sys: &InducedSystem,
    cfg: &TransferSeriesConfig,
    letters: usize,
    depth: usize,
) -> Result<ParameterBracket> {
    let c = gamma_of_t(sys, cfg)?;
    // the interval contains a fixed point exactly when c is beyond it
    if c <= sys.proj0.fixed_point {
        return Ok(ParameterBracket::exact(RationalParameter::ZERO));
    }
    if c >= sys.proj1.fixed_point {
        return Ok(ParameterBracket::exact(RationalParameter::ONE));
    }
    let it = sys.itinerary(c, letters);
    match it.escaped_at {
        None => parameter_from_itinerary(&it.word, depth),
        Some(_) => {
            let complete = |a: u8, b: u8| {
                let mut w = it.word.clone();
                w.push(a);
                while w.len() < letters.max(it.word.len() + 1) {
                    w.push(b);
                }
                w
            };
            let left = parameter_from_itinerary(&complete(0, 1), depth)?;
            let right = parameter_from_itinerary(&complete(1, 0), depth)?;
            Ok(left.union(&right))
        }
    }
}

/// Largest jump of the parameter between consecutive samples.
pub fn max_parameter_jump(samples: &[StaircaseSample]) -> f64 {
    samples
        .windows(2)
        .map(|w| (w[1].parameter.to_f64() - w[0].parameter.to_f64()).abs())
        .fold(0.0, f64::max)
}
