//! Non-learning forecasts used as comparison points.

use crate::synthgen::{round_clamp, zipf_pmf};
use crate::{Error, RequestMatrix, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    /// Repeat the last observed slot.
    LastValue,
    /// Repeat the rounded per-entry mean over the history.
    SlotMean,
    /// Spread each user's mean slot total over contents by a Zipf law fitted
    /// to the regional rank-frequency profile.
    StaticZipf,
}

impl std::str::FromStr for BaselineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "last-value" => Ok(Self::LastValue),
            "slot-mean" => Ok(Self::SlotMean),
            "static-zipf" => Ok(Self::StaticZipf),
            other => Err(Error::InvalidParameter(format!("unknown baseline `{other}`"))),
        }
    }
}

/// Forecast for every user over `horizon` slots following `history`.
pub fn baseline_forecast(kind: BaselineKind, history: &RequestMatrix, horizon: usize) -> Result<RequestMatrix> {
    if history.slots() == 0 {
        return Err(Error::InvalidParameter("baseline needs a non-empty history".into()));
    }
    let (users, f, slots) = (history.users(), history.contents(), history.slots());
    let block: Vec<u32> = match kind {
        BaselineKind::LastValue => history.slot(slots - 1).to_vec(),
        BaselineKind::SlotMean => {
            let mut sums = vec![0u64; users * f];
            for t in 0..slots {
                for (s, &c) in sums.iter_mut().zip(history.slot(t)) {
                    *s += c as u64;
                }
            }
            sums.into_iter().map(|s| round_clamp(s as f64 / slots as f64)).collect()
        }
        BaselineKind::StaticZipf => {
            let totals = history.content_totals();
            let mut ranked: Vec<usize> = (0..f).collect();
            ranked.sort_by(|&a, &b| totals[b].cmp(&totals[a]).then(a.cmp(&b)));
            let sorted: Vec<u64> = ranked.iter().map(|&k| totals[k]).collect();
            let pmf = zipf_pmf(f, fit_zipf_exponent(&sorted))?;
            let mut share = vec![0.0; f];
            for (rank, &k) in ranked.iter().enumerate() {
                share[k] = pmf[rank];
            }
            let mut block = Vec::with_capacity(users * f);
            for u in 0..users {
                let mean_total = (0..slots)
                    .map(|t| history.row(t, u).iter().map(|&c| c as u64).sum::<u64>())
                    .sum::<u64>() as f64
                    / slots as f64;
                block.extend(share.iter().map(|s| round_clamp(mean_total * s)));
            }
            block
        }
    };
    let mut out = RequestMatrix::zeros(horizon, users, f).with_start_slot(history.start_slot() + slots);
    for t in 0..horizon {
        out.slot_mut(t).copy_from_slice(&block);
    }
    Ok(out)
}

/// Maximum-likelihood Zipf exponent for rank-ordered counts (largest first),
/// searched on `[0, 10]` by golden section.
pub fn fit_zipf_exponent(sorted_counts: &[u64]) -> f64 {
    let n: f64 = sorted_counts.iter().map(|&c| c as f64).sum();
    if n == 0.0 || sorted_counts.len() < 2 {
        return 0.0;
    }
    let log_rank_mass: f64 = sorted_counts
        .iter()
        .enumerate()
        .map(|(r, &c)| c as f64 * ((r + 1) as f64).ln())
        .sum();
    let f = sorted_counts.len();
    let neg_ll = |g: f64| {
        let h: f64 = (1..=f).rev().map(|k| (k as f64).powf(-g)).sum();
        g * log_rank_mass + n * h.ln()
    };
    let (mut lo, mut hi) = (0.0f64, 10.0f64);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut f1, mut f2) = (neg_ll(x1), neg_ll(x2));
    for _ in 0..100 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = neg_ll(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = neg_ll(x2);
        }
    }
    let g = 0.5 * (lo + hi);
    // The likelihood is monotone at the boundary for flat profiles.
    if neg_ll(0.0) <= neg_ll(g) {
        0.0
    } else {
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn last_value_on_constant_history() {
        let h = RequestMatrix::from_nested(&[vec![vec![2, 5]], vec![vec![2, 5]]]).unwrap();
        let f = baseline_forecast(BaselineKind::LastValue, &h, 3).unwrap();
        assert_eq!(f.start_slot(), 2);
        for t in 0..3 {
            assert_eq!(f.row(t, 0), &[2, 5]);
        }
    }

    #[test]
    fn slot_mean_rounds() {
        let h = RequestMatrix::from_nested(&[vec![vec![0, 1]], vec![vec![2, 2]]]).unwrap();
        let f = baseline_forecast(BaselineKind::SlotMean, &h, 1).unwrap();
        // (0+2)/2 = 1; (1+2)/2 = 1.5 rounds half away from zero.
        assert_eq!(f.row(0, 0), &[1, 2]);
    }

    #[test]
    fn static_zipf_on_flat_profile_is_uniform() {
        // Flat regional profile: MLE exponent 0, each user gets mean_total / F.
        let h = RequestMatrix::from_nested(&[
            vec![vec![3, 3, 3, 3], vec![1, 1, 1, 1]],
            vec![vec![5, 5, 5, 5], vec![1, 1, 1, 1]],
        ])
        .unwrap();
        let f = baseline_forecast(BaselineKind::StaticZipf, &h, 2).unwrap();
        // user 0: mean total 16 -> 4 each; user 1: mean total 4 -> 1 each.
        for t in 0..2 {
            assert_eq!(f.row(t, 0), &[4, 4, 4, 4]);
            assert_eq!(f.row(t, 1), &[1, 1, 1, 1]);
        }
    }

    #[test]
    fn zipf_fit_recovers_exponent() {
        let pmf = zipf_pmf(50, 1.1).unwrap();
        let counts: Vec<u64> = pmf.iter().map(|p| (p * 1e7).round() as u64).collect();
        let g = fit_zipf_exponent(&counts);
        assert!((g - 1.1).abs() < 1e-3, "{g}");
    }

    #[test]
    fn empty_history_is_rejected() {
        let h = RequestMatrix::zeros(0, 1, 1);
        assert!(baseline_forecast(BaselineKind::LastValue, &h, 1).is_err());
    }
}
