//! Sturmian transfer functions, the thresholds `t0 < t1`, the interval
//! solver `c*(t)` and the numerical optimality certificate.

use std::cell::RefCell;
use std::cmp::Ordering;

use rayon::prelude::*;
use roots::{find_root_brent, SimpleConvergency};
use serde::Serialize;

use crate::classify::classify_pair;
use crate::dynamics::{InducedSystem, SturmianIntervalSpec, MEMBERSHIP_SLACK};
use crate::error::{Error, Result};
use crate::matrix::{projective_data, MatrixPair};
use crate::scalar::{Scalar, Tolerance};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TransferSeriesConfig {
    /// Bound on the neglected tail of the series.
    pub tail_tolerance: f64,
    pub max_depth: usize,
}

impl Default for TransferSeriesConfig {
    fn default() -> Self {
        TransferSeriesConfig {
            tail_tolerance: 1e-12,
            max_depth: 400,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CertificateTolerances {
    pub flat_tol: f64,
    pub margin_tol: f64,
}

impl Default for CertificateTolerances {
    fn default() -> Self {
        CertificateTolerances {
            flat_tol: 1e-6,
            margin_tol: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdPair<T> {
    pub t0: T,
    pub t1: T,
}

impl<T: Scalar> ThresholdPair<T> {
    pub fn to_f64(&self) -> ThresholdPair<f64> {
        ThresholdPair {
            t0: self.t0.to_f64(),
            t1: self.t1.to_f64(),
        }
    }

    /// Which regime the scaling `t` falls in; both boundaries count as dominated.
    pub fn regime(&self, t: &T) -> Regime {
        let tol = Tolerance::default();
        if (t.clone() - self.t0.clone()).sign(self.t0.to_f64(), &tol) != Ordering::Greater {
            Regime::A0Dominates
        } else if (t.clone() - self.t1.clone()).sign(self.t1.to_f64(), &tol) != Ordering::Less {
            Regime::A1Dominates
        } else {
            Regime::Interior
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    A0Dominates,
    A1Dominates,
    Interior,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Certified,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateReport {
    pub t: f64,
    pub regime: Regime,
    pub c: f64,
    pub interval: SturmianIntervalSpec,
    pub constant_value: f64,
    pub flatness: f64,
    pub exterior_margin: f64,
    /// `constant - g` at the end of the exterior image touching the interval
    /// (dominated regimes only); zero exactly at the thresholds.
    pub boundary_margin: Option<f64>,
    pub monotone_ok: bool,
    pub grid_size: usize,
    pub verdict: Verdict,
}

/// `log((x + rho_i) / rho_i)`.
pub fn phi_extremal(sys: &InducedSystem, i: usize, x: f64) -> f64 {
    (x / sys.proj(i).rho).ln_1p()
}

/// `log((u + sigma) / (v + sigma))`, the integral of `f'` over `[u, v]`.
fn f_increment(sigma: f64, u: f64, v: f64) -> f64 {
    ((u - v) / (v + sigma)).ln_1p()
}

/// Transfer function of the Sturmian interval with coordinate `c`, at `z`.
///
/// Sums the integrals of `f'` over the images `tau^n [0, z]`, tracked as
/// unions of intervals; each interval lies in one branch image, where the
/// integral is a difference of `f` values.
pub fn phi_series(sys: &InducedSystem, c: f64, z: f64, cfg: &TransferSeriesConfig) -> Result<f64> {
    if !(0.0..=1.0).contains(&c) || !(0.0..=1.0).contains(&z) {
        return Err(Error::DomainError(if (0.0..=1.0).contains(&c) { z } else { c }));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let sup_fp = sys.sup_f_prime(0).max(sys.sup_f_prime(1));
    let rate = sys.contraction_bound();
    let tail_factor = if rate < 1.0 { rate / (1.0 - rate) } else { 1.0 };
    let sigma = [sys.proj0.sigma, sys.proj1.sigma];
    let mut pieces: Vec<(f64, f64)> = vec![(0.0, z)];
    let mut next: Vec<(usize, f64, f64)> = Vec::new();
    let mut total = 0.0;
    for _ in 0..cfg.max_depth {
        next.clear();
        for &(u, v) in &pieces {
            if v <= c {
                next.push((1, sys.tmap(1, u), sys.tmap(1, v)));
            } else if u >= c {
                next.push((0, sys.tmap(0, u), sys.tmap(0, v)));
            } else {
                next.push((1, sys.tmap(1, u), sys.tmap(1, c)));
                next.push((0, sys.tmap(0, c), sys.tmap(0, v)));
            }
        }
        let mut length = 0.0;
        pieces.clear();
        for &(i, u, v) in &next {
            if v > u {
                total += f_increment(sigma[i], u, v);
                length += v - u;
                pieces.push((u, v));
            }
        }
        if length * sup_fp * tail_factor < cfg.tail_tolerance {
            return Ok(total);
        }
    }
    Err(Error::NoConvergence(format!(
        "transfer series at c = {c}, z = {z} after {} terms",
        cfg.max_depth
    )))
}

/// `e^{Delta(Gamma_i)} = (1 + rho)(b1/(b1+d1) + rho) / (rho (a0/(a0+c0) + rho))`.
pub fn delta_extremal_ratio<T: Scalar>(pair: &MatrixPair<T>, i: usize) -> Result<T> {
    let rho = projective_data(pair.get(i))?.rho;
    let (a0, a1) = (&pair.a0, &pair.a1);
    let right0 = a0.a.clone() / (a0.a.clone() + a0.c.clone());
    let left1 = a1.b.clone() / (a1.b.clone() + a1.d.clone());
    Ok((T::one() + rho.clone()) * (left1 + rho.clone()) / (rho.clone() * (right0 + rho)))
}

/// Closed form of `Delta` at the extremal interval `Gamma_i`.
pub fn delta_extremal(sys: &InducedSystem, i: usize) -> f64 {
    let rho = sys.proj(i).rho;
    let right0 = sys.x0.hi;
    let left1 = sys.x1.lo;
    // written with log1p for accuracy
    (1.0 / rho).ln_1p() + (left1 / rho).ln_1p() - (right0 / rho).ln_1p()
}

/// `Delta(Gamma_c) = phi(1) - (phi(T_{A0}(1)) - phi(T_{A1}(0)))` from the series.
pub fn delta_numeric(sys: &InducedSystem, c: f64, cfg: &TransferSeriesConfig) -> Result<f64> {
    let one = phi_series(sys, c, 1.0, cfg)?;
    let right0 = phi_series(sys, c, sys.x0.hi, cfg)?;
    let left1 = phi_series(sys, c, sys.x1.lo, cfg)?;
    Ok(one - (right0 - left1))
}

/// `t_i = rho_i (a0 + rho_i (a0 + c0)) / ((1 + rho_i)(b1 + rho_i (b1 + d1)))`,
/// cross-checked against `(a0 + c0)/(b1 + d1) e^{-Delta(Gamma_i)}`.
pub fn thresholds<T: Scalar>(pair: &MatrixPair<T>) -> Result<ThresholdPair<T>> {
    if !classify_pair(pair).in_c {
        return Err(Error::NotInClassC);
    }
    let (a0, a1) = (&pair.a0, &pair.a1);
    let col0 = a0.a.clone() + a0.c.clone();
    let col1 = a1.b.clone() + a1.d.clone();
    let mut out = Vec::with_capacity(2);
    for i in 0..2 {
        let rho = projective_data(pair.get(i))?.rho;
        let num = rho.clone() * (a0.a.clone() + rho.clone() * col0.clone());
        let den = (T::one() + rho.clone()) * (a1.b.clone() + rho * col1.clone());
        let direct = num / den;
        let via_delta = col0.clone() / col1.clone() / delta_extremal_ratio(pair, i)?;
        let tol = Tolerance::new(1e-12, 0.0);
        if (direct.clone() - via_delta.clone()).sign(direct.to_f64(), &tol) != Ordering::Equal {
            return Err(Error::ClosedFormMismatch(format!(
                "t{i}: {} vs {}",
                direct.to_f64(),
                via_delta.to_f64()
            )));
        }
        out.push(direct);
    }
    let t1 = out.pop().expect("two thresholds");
    let t0 = out.pop().expect("two thresholds");
    Ok(ThresholdPair { t0, t1 })
}

pub fn domination_check<T: Scalar>(pair: &MatrixPair<T>, t: &T) -> Result<Regime> {
    Ok(thresholds(pair)?.regime(t))
}

/// Exact edges of the plateaus of `0/1` and `1/1`.
///
/// With Perron data `(lambda_i, w_i, v_i)` the word `1 0^n` loses to `0` for
/// every large `n` iff `t <= lambda_0 (w_0.v_0) / (w_0.A1 v_0)`, and `0 1^n`
/// loses to `1` iff `t >= (w_1.A0 v_1) / (lambda_1 (w_1.v_1))`.
pub fn extremal_plateau_edges<T: Scalar>(pair: &MatrixPair<T>) -> Result<ThresholdPair<T>> {
    if !classify_pair(pair).in_c {
        return Err(Error::NotInClassC);
    }
    let dot = |w: &(T, T), v: &(T, T)| w.0.clone() * v.0.clone() + w.1.clone() * v.1.clone();
    let apply = |m: &crate::matrix::Matrix2<T>, v: &(T, T)| {
        (
            m.a.clone() * v.0.clone() + m.b.clone() * v.1.clone(),
            m.c.clone() * v.0.clone() + m.d.clone() * v.1.clone(),
        )
    };
    let p0 = projective_data(&pair.a0)?;
    let p1 = projective_data(&pair.a1)?;
    let (w0, v0) = (&p0.perron_left, &p0.perron_right);
    let (w1, v1) = (&p1.perron_left, &p1.perron_right);
    let t0 = p0.perron_value.clone() * dot(w0, v0) / dot(w0, &apply(&pair.a1, v0));
    let t1 = dot(w1, &apply(&pair.a0, v1)) / (p1.perron_value.clone() * dot(w1, v1));
    Ok(ThresholdPair { t0, t1 })
}

/// Scaling at which the Sturmian interval has coordinate `c`, from the series.
pub fn scaling_for_interval(sys: &InducedSystem, c: f64, cfg: &TransferSeriesConfig) -> Result<f64> {
    let (a0, a1) = (&sys.pair.a0, &sys.pair.a1);
    Ok((a0.a + a0.c) / (a1.b + a1.d) * (-delta_numeric(sys, c, cfg)?).exp())
}

/// `G(t) = log((a0 + c0) / (b1 + d1) / t)`.
pub fn target_g(sys: &InducedSystem) -> f64 {
    let (a0, a1) = (&sys.pair.a0, &sys.pair.a1);
    ((a0.a + a0.c) / (a1.b + a1.d)).ln() - sys.t.ln()
}

/// Coordinate `c*` of the Sturmian interval with `Delta(Gamma_{c*}) = G(t)`.
pub fn gamma_of_t(sys: &InducedSystem, cfg: &TransferSeriesConfig) -> Result<f64> {
    let th = thresholds(&sys.pair)?;
    let t = sys.t;
    if th.regime(&t) != Regime::Interior {
        return Err(Error::OutOfInteriorRange {
            t,
            t0: th.t0,
            t1: th.t1,
        });
    }
    let g = target_g(sys);
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let h = |c: f64| match delta_numeric(sys, c, cfg) {
        Ok(d) => d - g,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let mut conv = SimpleConvergency {
        eps: 1e-14,
        max_iter: 200,
    };
    let root = find_root_brent(0.0, 1.0, h, &mut conv);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let c = root.map_err(|e| Error::NoConvergence(format!("interval solver: {e:?}")))?;
    let residual = delta_numeric(sys, c, cfg)? - g;
    if residual.abs() > 1e-9 {
        return Err(Error::NoConvergence(format!("interval solver residual {residual:e}")));
    }
    Ok(c)
}

fn cell_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let h = (hi - lo) / n as f64;
    (0..n).map(move |k| lo + (k as f64 + 0.5) * h)
}

struct Sample {
    branch: usize,
    in_gamma: bool,
    /// `f + phi` at `x`.
    lifted: f64,
    /// `f + phi - phi o T` at `x`.
    g: f64,
}

pub fn certify<T: Scalar>(
    pair: &MatrixPair<T>,
    t: &T,
    grid_size: usize,
    cfg: &TransferSeriesConfig,
) -> Result<CertificateReport> {
    certify_with(pair, t, grid_size, cfg, &CertificateTolerances::default())
}

/// Checks on a grid that `g = f + phi - phi o T` is constant on the Sturmian
/// interval, strictly smaller off it, and that `f + phi` is increasing on
/// `X_{A0}` and decreasing on `X_{A1}`.
pub fn certify_with<T: Scalar>(
    pair: &MatrixPair<T>,
    t: &T,
    grid_size: usize,
    cfg: &TransferSeriesConfig,
    tols: &CertificateTolerances,
) -> Result<CertificateReport> {
    if !classify_pair(pair).in_d {
        return Err(Error::NotInClassD);
    }
    if grid_size < 64 {
        return Err(Error::InvalidParameter("grid size must be at least 64".into()));
    }
    let regime = domination_check(pair, t)?;
    let tf = t.to_f64();
    let sys = InducedSystem::new(pair, tf)?;
    let c = match regime {
        Regime::A0Dominates => 0.0,
        Regime::A1Dominates => 1.0,
        Regime::Interior => gamma_of_t(&sys, cfg)?,
    };
    let interval = sys.sturmian_interval(c);
    let phi = |x: f64| -> Result<f64> {
        match regime {
            Regime::A0Dominates => Ok(phi_extremal(&sys, 0, x)),
            Regime::A1Dominates => Ok(phi_extremal(&sys, 1, x)),
            Regime::Interior => phi_series(&sys, c, x, cfg),
        }
    };
    let sample = |branch: usize, x: f64| -> Result<Sample> {
        let image = sys.smap(branch, x).clamp(0.0, 1.0);
        let lifted = sys.f_branch(branch, x) + phi(x)?;
        let g = lifted - phi(image)?;
        let in_gamma = interval.contains(x, MEMBERSHIP_SLACK);
        Ok(Sample {
            branch,
            in_gamma,
            lifted,
            g,
        })
    };

    let mut points: Vec<(usize, f64)> = Vec::with_capacity(2 * grid_size + 4);
    for i in 0..2 {
        let img = sys.image(i);
        points.extend(cell_grid(img.lo, img.hi, grid_size).map(|x| (i, x)));
    }
    let mut ends: Vec<(usize, f64)> = Vec::new();
    if let Some(p) = &interval.piece0 {
        ends.extend([(0, p.lo), (0, p.hi)]);
    }
    if let Some(p) = &interval.piece1 {
        ends.extend([(1, p.lo), (1, p.hi)]);
    }
    let grid = points
        .par_iter()
        .map(|&(i, x)| sample(i, x))
        .collect::<Result<Vec<Sample>>>()?;
    let endpoint_values = ends
        .par_iter()
        .map(|&(i, x)| sample(i, x).map(|s| s.g))
        .collect::<Result<Vec<f64>>>()?;

    let on_gamma: Vec<f64> = grid
        .iter()
        .filter(|s| s.in_gamma)
        .map(|s| s.g)
        .chain(endpoint_values)
        .collect();
    let hi = on_gamma.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = on_gamma.iter().copied().fold(f64::INFINITY, f64::min);
    let flatness = hi - lo;
    let constant_value = 0.5 * (hi + lo);
    let exterior_margin = grid
        .iter()
        .filter(|s| !s.in_gamma)
        .map(|s| constant_value - s.g)
        .fold(f64::INFINITY, f64::min);

    let monotone_ok = (0..2).all(|i| {
        let lifted: Vec<f64> = grid.iter().filter(|s| s.branch == i).map(|s| s.lifted).collect();
        lifted
            .windows(2)
            .all(|w| if i == 0 { w[1] > w[0] } else { w[1] < w[0] })
    });

    let boundary_margin = match regime {
        Regime::A0Dominates => Some(constant_value - sample(1, sys.x1.lo)?.g),
        Regime::A1Dominates => Some(constant_value - sample(0, sys.x0.hi)?.g),
        Regime::Interior => None,
    };

    let certified = flatness <= tols.flat_tol
        && exterior_margin > tols.margin_tol
        && monotone_ok
        && boundary_margin.is_none_or(|b| b >= -tols.flat_tol);
    Ok(CertificateReport {
        t: tf,
        regime,
        c,
        interval,
        constant_value,
        flatness,
        exterior_margin,
        boundary_margin,
        monotone_ok,
        grid_size,
        verdict: if certified {
            Verdict::Certified
        } else {
            Verdict::Inconclusive
        },
    })
}
