//! Binary words, Sturmian parameters and the combinatorics of balanced words.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::integer::gcd;
use serde::{Serialize, Serializer};

use crate::dynamics::InducedSystem;
use crate::error::{Error, Result};

/// A finite word over `{0, 1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryWord(Vec<u8>);

impl BinaryWord {
    /// Builds a word from symbols; any non-zero symbol is read as `1`.
    pub fn new(symbols: impl IntoIterator<Item = u8>) -> Self {
        BinaryWord(symbols.into_iter().map(|s| (s != 0) as u8).collect())
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&s| s == 1).count()
    }

    pub fn push(&mut self, symbol: u8) {
        self.0.push((symbol != 0) as u8);
    }

    /// Rotation starting at index `k`.
    pub fn rotate(&self, k: usize) -> BinaryWord {
        let n = self.0.len();
        if n == 0 {
            return self.clone();
        }
        let mut v = self.0.clone();
        v.rotate_left(k % n);
        BinaryWord(v)
    }

    pub fn rotations(&self) -> impl Iterator<Item = BinaryWord> + '_ {
        (0..self.0.len()).map(move |k| self.rotate(k))
    }

    pub fn repeat(&self, times: usize) -> BinaryWord {
        BinaryWord(self.0.repeat(times))
    }

    /// True when the word is not a proper power of a shorter word.
    pub fn is_primitive(&self) -> bool {
        let n = self.0.len();
        (1..n)
            .filter(|d| n.is_multiple_of(*d))
            .all(|d| self.0[d..] != self.0[..n - d])
    }

    /// Frequency of the symbol `1`, reduced to lowest terms.
    pub fn parameter(&self) -> Option<RationalParameter> {
        if self.is_empty() {
            return None;
        }
        RationalParameter::new(self.count_ones() as u64, self.len() as u64).ok()
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            f.write_str(if s == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl FromStr for BinaryWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::InvalidInput(format!("not a binary word: {s:?}"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(BinaryWord)
    }
}

impl Serialize for BinaryWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A rational number `p/q` in lowest terms with `0 <= p <= q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RationalParameter {
    p: u64,
    q: u64,
}

impl RationalParameter {
    pub const ZERO: RationalParameter = RationalParameter { p: 0, q: 1 };
    pub const ONE: RationalParameter = RationalParameter { p: 1, q: 1 };

    /// Reduces `p/q` to lowest terms.
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if q == 0 || p > q {
            return Err(Error::InvalidParameter(format!("{p}/{q} is not in [0, 1]")));
        }
        let g = gcd(p, q);
        Ok(RationalParameter { p: p / g, q: q / g })
    }

    pub fn numer(&self) -> u64 {
        self.p
    }

    pub fn denom(&self) -> u64 {
        self.q
    }

    pub fn to_f64(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    /// Mediant `(p1+p2)/(q1+q2)`, or `None` on overflow.
    pub fn mediant(&self, other: &Self) -> Option<Self> {
        let p = self.p.checked_add(other.p)?;
        let q = self.q.checked_add(other.q)?;
        Some(RationalParameter { p, q })
    }
}

impl PartialOrd for RationalParameter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RationalParameter {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.p as u128 * other.q as u128).cmp(&(other.p as u128 * self.q as u128))
    }
}

impl fmt::Display for RationalParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for RationalParameter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("expected p/q, got {s:?}"));
        let (p, q) = s.trim().split_once('/').ok_or_else(bad)?;
        let p = p.trim().parse().map_err(|_| bad())?;
        let q = q.trim().parse().map_err(|_| bad())?;
        RationalParameter::new(p, q)
    }
}

impl Serialize for RationalParameter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ParameterBracket {
    pub lower: RationalParameter,
    pub upper: RationalParameter,
    pub exact: Option<RationalParameter>,
}

impl ParameterBracket {
    pub fn exact(p: RationalParameter) -> Self {
        ParameterBracket {
            lower: p,
            upper: p,
            exact: Some(p),
        }
    }

    pub fn contains(&self, p: &RationalParameter) -> bool {
        self.lower <= *p && *p <= self.upper
    }

    /// Smallest bracket containing both.
    pub fn union(&self, other: &Self) -> Self {
        let lower = self.lower.min(other.lower);
        let upper = self.upper.max(other.upper);
        let exact = if lower == upper { Some(lower) } else { None };
        ParameterBracket { lower, upper, exact }
    }
}

/// Letter `k` of the lower mechanical word of slope `p/q`, extended periodically.
fn lower_letter(p: u64, q: u64, k: u64) -> u8 {
    let (p, q, k) = (p as u128, q as u128, (k % q) as u128);
    (((k + 1) * p) / q - (k * p) / q) as u8
}

/// Letter `k` of the upper mechanical word of slope `p/q`, extended periodically.
fn upper_letter(p: u64, q: u64, k: u64) -> u8 {
    let (p, q, k) = (p as u128, q as u128, (k % q) as u128);
    (((k + 1) * p).div_ceil(q) - (k * p).div_ceil(q)) as u8
}

/// The length-`q` lower mechanical word `w_k = floor((k+1)p/q) - floor(kp/q)`.
pub fn mechanical_word(param: RationalParameter) -> BinaryWord {
    BinaryWord((0..param.q).map(|k| lower_letter(param.p, param.q, k)).collect())
}

/// Whether every pair of equal-length factors of the periodic extension
/// differs by at most one in its count of `1`s.
pub fn is_balanced(word: &BinaryWord) -> bool {
    let n = word.len();
    if n == 0 {
        return true;
    }
    let doubled: Vec<u32> = word.0.iter().chain(word.0.iter()).map(|&s| s as u32).collect();
    let mut prefix = vec![0u32; 2 * n + 1];
    for (i, &s) in doubled.iter().enumerate() {
        prefix[i + 1] = prefix[i] + s;
    }
    (1..n).all(|len| {
        let counts = (0..n).map(|start| prefix[start + len] - prefix[start]);
        let (lo, hi) = counts.fold((u32::MAX, 0), |(lo, hi), c| (lo.min(c), hi.max(c)));
        hi - lo <= 1
    })
}

/// Lexicographically least and greatest rotations of the mechanical word.
pub fn orbit_min_max(param: RationalParameter) -> (BinaryWord, BinaryWord) {
    let (p, q) = (param.p, param.q);
    let min = BinaryWord((0..q).map(|k| lower_letter(p, q, k)).collect());
    let max = BinaryWord((0..q).map(|k| upper_letter(p, q, k)).collect());
    (min, max)
}

/// Compares the periodic sequence `letter(0) letter(1) ...` (period `q`)
/// with `head` followed by `prefix`, on every letter that is known.
fn compare_with_shifted(letter: impl Fn(u64) -> u8, q: u64, head: u8, prefix: &[u8]) -> Result<Ordering> {
    let known = std::iter::once(head).chain(prefix.iter().copied());
    for (k, b) in known.enumerate() {
        match letter(k as u64).cmp(&b) {
            Ordering::Equal => continue,
            other => return Ok(other),
        }
    }
    // agreement on the whole window: accept only if it spans two periods
    if (prefix.len() as u64 + 1) >= 2 * q {
        Ok(Ordering::Equal)
    } else {
        Err(Error::PrefixTooShort)
    }
}

enum Fit {
    Inside,
    TooHigh,
    TooLow,
}

fn orbit_fit(param: RationalParameter, prefix: &[u8]) -> Result<Fit> {
    let (p, q) = (param.p, param.q);
    let max_vs_upper = compare_with_shifted(|k| upper_letter(p, q, k), q, 1, prefix)?;
    if max_vs_upper == Ordering::Greater {
        return Ok(Fit::TooHigh);
    }
    let min_vs_lower = compare_with_shifted(|k| lower_letter(p, q, k), q, 0, prefix)?;
    if min_vs_lower == Ordering::Less {
        return Ok(Fit::TooLow);
    }
    Ok(Fit::Inside)
}

pub const DEFAULT_DESCENT_DEPTH: usize = 64;

/// Parameter of the Sturmian interval `[0w, 1w]` from a prefix of `w`,
/// by Stern-Brocot descent.
pub fn parameter_from_itinerary(omega_prefix: &BinaryWord, depth: usize) -> Result<ParameterBracket> {
    if omega_prefix.is_empty() {
        return Err(Error::EmptyWord);
    }
    if depth == 0 {
        return Err(Error::InvalidParameter("descent depth must be at least 1".into()));
    }
    let prefix = omega_prefix.symbols();
    for end in [RationalParameter::ZERO, RationalParameter::ONE] {
        if let Fit::Inside = orbit_fit(end, prefix)? {
            return Ok(ParameterBracket::exact(end));
        }
    }
    let (mut lo, mut hi) = (RationalParameter::ZERO, RationalParameter::ONE);
    for _ in 0..depth {
        let Some(m) = lo.mediant(&hi) else { break };
        match orbit_fit(m, prefix)? {
            Fit::Inside => return Ok(ParameterBracket::exact(m)),
            Fit::TooHigh => hi = m,
            Fit::TooLow => lo = m,
        }
    }
    Ok(ParameterBracket {
        lower: lo,
        upper: hi,
        exact: None,
    })
}

/// Points of the periodic orbit coded by the mechanical word, ascending.
pub fn sturmian_orbit_points(sys: &InducedSystem, param: RationalParameter) -> Result<Vec<f64>> {
    let word = mechanical_word(param);
    let mut pts = word
        .rotations()
        .map(|w| sys.periodic_point(&w))
        .collect::<Result<Vec<f64>>>()?;
    pts.sort_by(f64::total_cmp);
    Ok(pts)
}

/// All Lyndon words of length at most `n` in lexicographic order.
pub fn lyndon_words(n: usize) -> Vec<BinaryWord> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![0];
    loop {
        out.push(BinaryWord(w.clone()));
        let m = w.len();
        while w.len() < n {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&1) {
            w.pop();
        }
        match w.last_mut() {
            Some(last) => *last = 1,
            None => break,
        }
    }
    out
}

/// Coprime `p/q` in `[0, 1]` with `q <= max_den`, ascending.
pub fn farey_sequence(max_den: u64) -> Vec<RationalParameter> {
    let mut out = vec![RationalParameter::ZERO];
    if max_den == 0 {
        return out;
    }
    let (mut a, mut b, mut c, mut d) = (0u64, 1u64, 1u64, max_den);
    while c <= max_den {
        let k = (max_den + b) / d;
        (a, b, c, d) = (c, d, k * c - a, k * d - b);
        out.push(RationalParameter { p: a, q: b });
    }
    out
}
