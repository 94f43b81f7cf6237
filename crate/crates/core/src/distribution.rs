//! Finite-support distributions over the nonnegative integers.
//!
//! A [`Pmf`] stores a dense probability vector starting at an integer
//! offset, together with its cumulative sums. [`Distribution`] adds the
//! distinguished `PlusInfinity` element (CDF identically zero), which is
//! the identity of the lattice meet but is rejected by convolution and
//! risk evaluation.

use std::sync::Arc;

use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Slack accepted on user-supplied probability vectors.
pub const VALIDATION_TOL: f64 = 1e-9;
/// Tolerance used for internal CDF comparisons.
pub const INTERNAL_TOL: f64 = 1e-12;

/// Support length below which convolution stays direct.
const FFT_THRESHOLD: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistributionError {
    #[error("negative probability {value} at support point {index}")]
    NegativeProbability { index: usize, value: f64 },
    #[error("probabilities sum to {sum}, deviation exceeds {VALIDATION_TOL}")]
    SumNotOne { sum: f64 },
    #[error("probability vector has no positive entry")]
    EmptySupport,
    #[error("operation requires a finite distribution")]
    InfiniteOperand,
}

/// Finite-support pmf over `offset, offset+1, ...`.
///
/// Invariants: first and last entries are strictly positive, every entry
/// is nonnegative, and the entries sum to 1 in working precision.
#[derive(Debug, Clone)]
pub struct Pmf {
    offset: u64,
    probs: Vec<f64>,
    cdf: Vec<f64>,
}

impl PartialEq for Pmf {
    fn eq(&self, other: &Self) -> bool {
        self.offset == other.offset && self.probs == other.probs
    }
}

impl Pmf {
    /// Builds a pmf from an offset and a probability vector, trimming
    /// zero-probability leading/trailing entries and renormalizing.
    pub fn from_pmf(offset: u64, probs: &[f64]) -> Result<Self, DistributionError> {
        for (i, &p) in probs.iter().enumerate() {
            if p < 0.0 {
                return Err(DistributionError::NegativeProbability { index: i, value: p });
            }
        }
        let first = probs
            .iter()
            .position(|&p| p > 0.0)
            .ok_or(DistributionError::EmptySupport)?;
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > VALIDATION_TOL {
            return Err(DistributionError::SumNotOne { sum });
        }
        let last = probs.iter().rposition(|&p| p > 0.0).unwrap();
        let mut trimmed: Vec<f64> = probs[first..=last].to_vec();
        for p in &mut trimmed {
            *p /= sum;
        }
        Ok(Self::from_trusted(offset + first as u64, trimmed))
    }

    /// Point mass at `value`.
    pub fn point(value: u64) -> Self {
        Self::from_trusted(value, vec![1.0])
    }

    /// Internal constructor: `probs` must already be trimmed and normalized.
    fn from_trusted(offset: u64, probs: Vec<f64>) -> Self {
        debug_assert!(!probs.is_empty());
        debug_assert!(probs[0] > 0.0 && *probs.last().unwrap() > 0.0);
        let mut cdf = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for &p in &probs {
            acc += p;
            cdf.push(acc);
        }
        // Guard against cumulative rounding drifting above 1.
        if let Some(last) = cdf.last_mut() {
            *last = 1.0;
        }
        Pmf { offset, probs, cdf }
    }

    pub fn offset(&self) -> u64 {
        self.offset
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min_support(&self) -> u64 {
        self.offset
    }

    pub fn max_support(&self) -> u64 {
        self.offset + self.probs.len() as u64 - 1
    }

    /// P(X = t).
    pub fn prob_at(&self, t: i64) -> f64 {
        if t < self.offset as i64 {
            return 0.0;
        }
        let idx = (t - self.offset as i64) as usize;
        self.probs.get(idx).copied().unwrap_or(0.0)
    }

    /// P(X <= t).
    pub fn cdf(&self, t: i64) -> f64 {
        if t < self.offset as i64 {
            return 0.0;
        }
        let idx = (t - self.offset as i64) as usize;
        if idx >= self.cdf.len() {
            1.0
        } else {
            self.cdf[idx]
        }
    }

    pub fn expectation(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, &p)| (self.offset + i as u64) as f64 * p)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.expectation();
        self.probs
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let d = (self.offset + i as u64) as f64 - mean;
                d * d * p
            })
            .sum()
    }

    /// True iff the distribution is the point mass at 0.
    pub fn is_deterministic_zero(&self) -> bool {
        self.offset == 0 && self.probs.len() == 1
    }

    /// Smallest `t` with `F_self(t) < F_other(t)`, if any.
    pub fn first_violation(&self, other: &Pmf) -> Option<i64> {
        let lo = self.offset.min(other.offset) as i64;
        let hi = self.max_support().max(other.max_support()) as i64;
        for t in lo..=hi {
            if self.cdf(t) < other.cdf(t) - INTERNAL_TOL {
                return Some(t);
            }
        }
        None
    }

    /// Usual stochastic order: `self <=st other` iff `F_self >= F_other`
    /// pointwise.
    pub fn leq_st(&self, other: &Pmf) -> bool {
        self.first_violation(other).is_none()
    }

    /// Greatest lower bound under `<=st`: pointwise max of CDFs.
    pub fn meet(&self, other: &Pmf) -> Pmf {
        let lo = self.offset.min(other.offset);
        let hi = self.max_support().max(other.max_support());
        let mut probs = Vec::with_capacity((hi - lo + 1) as usize);
        let mut prev = 0.0;
        for t in lo as i64..=hi as i64 {
            let c = self.cdf(t).max(other.cdf(t));
            probs.push((c - prev).max(0.0));
            prev = c;
        }
        trim_trusted(lo, probs)
    }

    /// Least upper bound under `<=st`: pointwise min of CDFs. Provided for
    /// lattice tests only.
    pub fn join(&self, other: &Pmf) -> Pmf {
        let lo = self.offset.min(other.offset);
        let hi = self.max_support().max(other.max_support());
        let mut probs = Vec::with_capacity((hi - lo + 1) as usize);
        let mut prev = 0.0;
        for t in lo as i64..=hi as i64 {
            let c = self.cdf(t).min(other.cdf(t));
            probs.push((c - prev).max(0.0));
            prev = c;
        }
        trim_trusted(lo, probs)
    }

    /// Distribution of the sum of independent copies. Direct summation for
    /// short supports, FFT above [`FFT_THRESHOLD`].
    pub fn convolve(&self, other: &Pmf) -> Pmf {
        let probs = if self.len().min(other.len()) < FFT_THRESHOLD {
            convolve_direct(&self.probs, &other.probs)
        } else {
            convolve_fft(&self.probs, &other.probs)
        };
        trim_trusted(self.offset + other.offset, probs)
    }

    /// Direct-summation convolution, kept public as the reference route for
    /// the FFT backend.
    pub fn convolve_direct(&self, other: &Pmf) -> Pmf {
        trim_trusted(
            self.offset + other.offset,
            convolve_direct(&self.probs, &other.probs),
        )
    }

    /// Smallest `t` in `Z+` with `F(t) >= beta` (0 when `beta <= 0`).
    pub fn quantile(&self, beta: f64) -> u64 {
        if beta <= INTERNAL_TOL {
            return 0;
        }
        for t in self.offset..=self.max_support() {
            if self.cdf(t as i64) >= beta - INTERNAL_TOL {
                return t;
            }
        }
        self.max_support()
    }

    /// Max absolute CDF difference against `other`.
    pub fn cdf_distance(&self, other: &Pmf) -> f64 {
        let lo = self.offset.min(other.offset) as i64;
        let hi = self.max_support().max(other.max_support()) as i64;
        let mut worst = 0.0f64;
        for t in lo..=hi {
            worst = worst.max((self.cdf(t) - other.cdf(t)).abs());
        }
        worst
    }
}

/// Normalizes, trims, and wraps a raw probability vector whose mass is
/// already approximately 1 (solver-internal results).
fn trim_trusted(offset: u64, mut probs: Vec<f64>) -> Pmf {
    for p in &mut probs {
        if *p < 0.0 {
            *p = 0.0;
        }
    }
    let first = probs
        .iter()
        .position(|&p| p > 0.0)
        .expect("internal pmf lost all mass");
    let last = probs.iter().rposition(|&p| p > 0.0).unwrap();
    let mut trimmed = probs[first..=last].to_vec();
    let sum: f64 = trimmed.iter().sum();
    for p in &mut trimmed {
        *p /= sum;
    }
    Pmf::from_trusted(offset + first as u64, trimmed)
}

fn convolve_direct(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn convolve_fft(a: &[f64], b: &[f64]) -> Vec<f64> {
    let out_len = a.len() + b.len() - 1;
    let n = out_len.next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(n);
    let ifft = planner.plan_fft_inverse(n);

    let mut fa: Vec<Complex<f64>> = a.iter().map(|&x| Complex::new(x, 0.0)).collect();
    fa.resize(n, Complex::new(0.0, 0.0));
    let mut fb: Vec<Complex<f64>> = b.iter().map(|&x| Complex::new(x, 0.0)).collect();
    fb.resize(n, Complex::new(0.0, 0.0));

    fft.process(&mut fa);
    fft.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    ifft.process(&mut fa);

    let scale = 1.0 / n as f64;
    fa.truncate(out_len);
    fa.iter()
        .map(|c| {
            let v = c.re * scale;
            // FFT rounding produces tiny negatives; exactness matters for
            // CDF comparisons downstream.
            if v < 0.0 {
                0.0
            } else {
                v
            }
        })
        .collect()
}

/// A finite pmf or the distinguished `PlusInfinity` (CDF identically 0).
#[derive(Debug, Clone, PartialEq)]
pub enum Distribution {
    Finite(Arc<Pmf>),
    PlusInfinity,
}

impl Distribution {
    pub fn finite(pmf: Pmf) -> Self {
        Distribution::Finite(Arc::new(pmf))
    }

    pub fn point(value: u64) -> Self {
        Self::finite(Pmf::point(value))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Distribution::Finite(_))
    }

    pub fn as_pmf(&self) -> Option<&Pmf> {
        match self {
            Distribution::Finite(p) => Some(p),
            Distribution::PlusInfinity => None,
        }
    }

    pub fn pmf(&self) -> Result<&Pmf, DistributionError> {
        self.as_pmf().ok_or(DistributionError::InfiniteOperand)
    }

    pub fn cdf(&self, t: i64) -> f64 {
        match self {
            Distribution::Finite(p) => p.cdf(t),
            Distribution::PlusInfinity => 0.0,
        }
    }

    pub fn first_violation(&self, other: &Distribution) -> Option<i64> {
        match (self, other) {
            (_, Distribution::PlusInfinity) => None,
            (Distribution::PlusInfinity, Distribution::Finite(y)) => Some(y.offset() as i64),
            (Distribution::Finite(x), Distribution::Finite(y)) => x.first_violation(y),
        }
    }

    pub fn leq_st(&self, other: &Distribution) -> bool {
        self.first_violation(other).is_none()
    }

    /// Meet with `PlusInfinity` as identity.
    pub fn meet(&self, other: &Distribution) -> Distribution {
        match (self, other) {
            (Distribution::PlusInfinity, _) => other.clone(),
            (_, Distribution::PlusInfinity) => self.clone(),
            (Distribution::Finite(x), Distribution::Finite(y)) => {
                Distribution::finite(x.meet(y))
            }
        }
    }

    pub fn convolve(&self, other: &Distribution) -> Result<Distribution, DistributionError> {
        match (self, other) {
            (Distribution::Finite(x), Distribution::Finite(y)) => {
                Ok(Distribution::finite(x.convolve(y)))
            }
            _ => Err(DistributionError::InfiniteOperand),
        }
    }

    pub fn expectation(&self) -> Result<f64, DistributionError> {
        Ok(self.pmf()?.expectation())
    }

    pub fn min_support(&self) -> Result<u64, DistributionError> {
        Ok(self.pmf()?.min_support())
    }

    pub fn max_support(&self) -> Result<u64, DistributionError> {
        Ok(self.pmf()?.max_support())
    }
}

#[derive(Serialize, Deserialize)]
struct PmfRepr {
    offset: u64,
    pmf: Vec<f64>,
}

impl Serialize for Pmf {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PmfRepr {
            offset: self.offset,
            pmf: self.probs.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Pmf {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = PmfRepr::deserialize(deserializer)?;
        Pmf::from_pmf(repr.offset, &repr.pmf).map_err(serde::de::Error::custom)
    }
}

/// Random pmf with support in `[0, max_offset + max_len)`, used by
/// consistency checks and property tests.
pub fn random_pmf<R: rand::Rng>(rng: &mut R, max_offset: u64, max_len: usize) -> Pmf {
    let offset = rng.gen_range(0..=max_offset);
    let len = rng.gen_range(1..=max_len.max(1));
    let mut probs: Vec<f64> = (0..len).map(|_| rng.gen_range(0.0..1.0)).collect();
    // Anchor the endpoints so trimming keeps the drawn support.
    probs[0] += 0.05;
    let last = probs.len() - 1;
    probs[last] += 0.05;
    let sum: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= sum;
    }
    Pmf::from_pmf(offset, &probs).expect("randomly drawn pmf is valid")
}
