//! Synthetic per-user request histories.
//!
//! Slot 1 follows a per-user Zipf law over a random content order with a
//! random skewness. Later slots add a sinusoidal drift and Gaussian noise to
//! every entry of slot 1, then round and clamp at zero.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::rng::{SeededRng, StreamPurpose};
use crate::{Error, RequestMatrix, Result, Topology};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewnessRange {
    gamma_min: f64,
    gamma_max: f64,
}

impl SkewnessRange {
    pub fn new(gamma_min: f64, gamma_max: f64) -> Result<Self> {
        if !(gamma_min.is_finite() && gamma_max.is_finite()) || gamma_min < 0.0 || gamma_min > gamma_max {
            return Err(Error::InvalidParameter(format!(
                "skewness range [{gamma_min}, {gamma_max}] must satisfy 0 <= min <= max"
            )));
        }
        Ok(Self { gamma_min, gamma_max })
    }

    pub fn min(&self) -> f64 {
        self.gamma_min
    }

    pub fn max(&self) -> f64 {
        self.gamma_max
    }

    /// Maps a unit variate onto the range.
    pub fn at(&self, u: f64) -> f64 {
        (self.gamma_max - self.gamma_min) * u + self.gamma_min
    }
}

impl Default for SkewnessRange {
    fn default() -> Self {
        Self {
            gamma_min: 0.5,
            gamma_max: 1.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RequestRange {
    min: u32,
    max: u32,
}

impl RequestRange {
    pub fn new(min: u32, max: u32) -> Result<Self> {
        if min == 0 || min > max {
            return Err(Error::InvalidParameter(format!(
                "request range [{min}, {max}] must satisfy 0 < min <= max"
            )));
        }
        Ok(Self { min, max })
    }

    pub fn min(&self) -> u32 {
        self.min
    }

    pub fn max(&self) -> u32 {
        self.max
    }
}

impl Default for RequestRange {
    fn default() -> Self {
        Self { min: 50, max: 200 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationParams {
    amplitudes: Vec<f64>,
    noise_mean: f64,
    noise_var: f64,
}

impl CorrelationParams {
    pub fn new(amplitudes: Vec<f64>, noise_mean: f64, noise_var: f64) -> Result<Self> {
        if amplitudes.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter("amplitudes must be finite".into()));
        }
        if !noise_mean.is_finite() || !noise_var.is_finite() || noise_var < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "noise mean {noise_mean} / variance {noise_var} invalid"
            )));
        }
        Ok(Self {
            amplitudes,
            noise_mean,
            noise_var,
        })
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn noise_mean(&self) -> f64 {
        self.noise_mean
    }

    pub fn noise_var(&self) -> f64 {
        self.noise_var
    }

    /// `sum_n A_n sin(n t)` for the 1-based slot number `t`.
    pub fn drift(&self, t: usize) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(n, a)| a * ((n + 1) as f64 * t as f64).sin())
            .sum()
    }
}

impl Default for CorrelationParams {
    fn default() -> Self {
        Self {
            amplitudes: vec![1.0, 1.0, 1.0],
            noise_mean: 0.0,
            noise_var: 1.0,
        }
    }
}

/// Zipf probability mass over ranks `1..=F`.
pub fn zipf_pmf(num_contents: usize, gamma: f64) -> Result<Vec<f64>> {
    if num_contents == 0 {
        return Err(Error::InvalidParameter("zipf pmf needs F >= 1".into()));
    }
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "skewness {gamma} must be finite and >= 0"
        )));
    }
    let weights: Vec<f64> = (1..=num_contents).map(|k| (k as f64).powf(-gamma)).collect();
    // Smallest terms first.
    let norm: f64 = weights.iter().rev().sum();
    Ok(weights.into_iter().map(|w| w / norm).collect())
}

pub fn sample_skewness(range: SkewnessRange, rng: &mut SeededRng) -> f64 {
    range.at(rng.uniform())
}

/// Counts `variates` into bins delimited by the cumulative pmf. The last
/// edge is pinned to 1 so no variate in `[0, 1)` falls off the end.
pub fn histogram_counts(variates: &[f64], pmf: &[f64]) -> Vec<u32> {
    let mut edges: Vec<f64> = pmf
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    if let Some(last) = edges.last_mut() {
        *last = 1.0;
    }
    let mut counts = vec![0u32; pmf.len()];
    for &u in variates {
        let bin = edges.partition_point(|&e| e <= u).min(pmf.len() - 1);
        counts[bin] += 1;
    }
    counts
}

/// Slot-1 request counts: one row per user, one stream per user.
pub fn generate_initial_matrix(topo: &Topology, skew: SkewnessRange, reqs: RequestRange, seed: u64) -> RequestMatrix {
    let f = topo.num_contents();
    let mut m = RequestMatrix::zeros(1, topo.num_users(), f);
    for user in 0..topo.num_users() {
        let mut rng = SeededRng::for_purpose(seed, StreamPurpose::InitialRequests, user as u64);
        let row = initial_row(f, skew, reqs, &mut rng);
        m.row_mut(0, user).copy_from_slice(&row);
    }
    m
}

fn initial_row(f: usize, skew: SkewnessRange, reqs: RequestRange, rng: &mut SeededRng) -> Vec<u32> {
    let mut order: Vec<usize> = (0..f).collect();
    order.shuffle(rng);
    let gamma = sample_skewness(skew, rng);
    let n_req = rng.random_range(reqs.min()..=reqs.max());
    let variates: Vec<f64> = (0..n_req).map(|_| rng.uniform()).collect();
    let pmf = zipf_pmf(f, gamma).expect("validated skewness");
    let ranked = histogram_counts(&variates, &pmf);
    let mut row = vec![0u32; f];
    for (rank, &count) in ranked.iter().enumerate() {
        row[order[rank]] = count;
    }
    row
}

/// Extends a one-slot matrix to `slots` slots with drift and noise. Noise is
/// drawn per (user, content, slot) from a per-user stream, slot-major.
pub fn extend_correlated(
    initial: &RequestMatrix,
    slots: usize,
    corr: &CorrelationParams,
    seed: u64,
) -> Result<RequestMatrix> {
    if slots == 0 {
        return Err(Error::InvalidParameter("need at least one slot".into()));
    }
    if initial.slots() != 1 {
        return Err(Error::Dimension(format!(
            "initial matrix must have one slot, has {}",
            initial.slots()
        )));
    }
    let (users, f) = (initial.users(), initial.contents());
    let mut out = RequestMatrix::zeros(slots, users, f);
    out.slot_mut(0).copy_from_slice(initial.slot(0));
    let std = corr.noise_var.sqrt();
    let normal = Normal::new(corr.noise_mean, std).map_err(|e| Error::InvalidParameter(format!("noise: {e}")))?;
    for user in 0..users {
        let mut rng = SeededRng::for_purpose(seed, StreamPurpose::CorrelatedNoise, user as u64);
        for t in 1..slots {
            let drift = corr.drift(t + 1);
            for k in 0..f {
                let eps = if std == 0.0 {
                    corr.noise_mean
                } else {
                    normal.sample(&mut rng)
                };
                let value = initial.get(0, user, k) as f64 + drift + eps;
                out.set(t, user, k, round_clamp(value));
            }
        }
    }
    Ok(out)
}

/// Round half away from zero, then clamp negatives to zero.
pub fn round_clamp(value: f64) -> u32 {
    let r = value.round();
    if r <= 0.0 || !r.is_finite() {
        0
    } else if r >= u32::MAX as f64 {
        u32::MAX
    } else {
        r as u32
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SynthConfig {
    pub skewness: SkewnessRange,
    pub requests: RequestRange,
    pub correlation: CorrelationParams,
}

/// Full pipeline: slot-1 generation followed by the correlated extension.
pub fn generate(topo: &Topology, cfg: &SynthConfig, slots: usize, seed: u64) -> Result<RequestMatrix> {
    let initial = generate_initial_matrix(topo, cfg.skewness, cfg.requests, seed);
    extend_correlated(&initial, slots, &cfg.correlation, seed)
}
