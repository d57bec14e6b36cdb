//! Frequency-ratio preference objects derived from a request slot: activity
//! levels `r_i`, conditional preferences `q_{f|u}`, joint preferences
//! `q_{u,f} = r_i q_{f|u}` and the horizon average `rho` used to weight
//! caching cost.
//!
//! Users without requests in a slot get all-zero rows rather than a uniform
//! guess.

use crate::{Error, RequestMatrix, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceProfile {
    pub slot: usize,
    pub activity: Vec<f64>,
    pub conditional: Vec<Vec<f64>>,
    pub joint: Vec<Vec<f64>>,
}

impl PreferenceProfile {
    fn zeros(slot: usize, users: usize, contents: usize) -> Self {
        Self {
            slot,
            activity: vec![0.0; users],
            conditional: vec![vec![0.0; contents]; users],
            joint: vec![vec![0.0; contents]; users],
        }
    }

    pub fn users(&self) -> usize {
        self.activity.len()
    }

    pub fn contents(&self) -> usize {
        self.joint.first().map_or(0, |r| r.len())
    }

    /// True when the slot carried no requests at all.
    pub fn is_empty(&self) -> bool {
        self.activity.iter().all(|&r| r == 0.0)
    }
}

/// Profile of local slot `t`. The returned `slot` is the absolute index.
pub fn profile_from_slot(m: &RequestMatrix, t: usize) -> Result<PreferenceProfile> {
    let totals = m.slot_totals(t)?;
    let slot = m.start_slot() + t;
    let mut p = PreferenceProfile::zeros(slot, m.users(), m.contents());
    if totals.total == 0 {
        return Ok(p);
    }
    let q = totals.total as f64;
    for (i, &n_u) in totals.per_user.iter().enumerate() {
        if n_u == 0 {
            continue;
        }
        let r = n_u as f64 / q;
        p.activity[i] = r;
        for (k, &n) in m.row(t, i).iter().enumerate() {
            let cond = n as f64 / n_u as f64;
            p.conditional[i][k] = cond;
            p.joint[i][k] = r * cond;
        }
    }
    Ok(p)
}

/// Profiles for every slot of `m`, in order.
pub fn profiles(m: &RequestMatrix) -> Result<Vec<PreferenceProfile>> {
    (0..m.slots()).map(|t| profile_from_slot(m, t)).collect()
}

/// Regional popularity `p_f = sum_i r_i q_{f|u_i}`.
pub fn global_popularity(profile: &PreferenceProfile) -> Vec<f64> {
    let mut p = vec![0.0; profile.contents()];
    for row in &profile.joint {
        for (acc, &q) in p.iter_mut().zip(row) {
            *acc += q;
        }
    }
    p
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregatedPreference {
    /// Per-user rows normalised to sum to one (all-zero rows stay zero).
    pub rho: Vec<Vec<f64>>,
    /// Plain horizon average of the joint preferences, before normalisation.
    pub raw: Vec<Vec<f64>>,
    pub horizon: usize,
    pub start_slot: usize,
}

impl AggregatedPreference {
    /// Wraps explicit weights, normalising each row.
    pub fn from_weights(weights: Vec<Vec<f64>>) -> Result<Self> {
        if weights.iter().flatten().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidParameter(
                "preference weights must be finite and >= 0".into(),
            ));
        }
        let rho = weights.iter().map(|r| normalize_row(r)).collect();
        Ok(Self {
            rho,
            raw: weights,
            horizon: 1,
            start_slot: 0,
        })
    }

    pub fn users(&self) -> usize {
        self.rho.len()
    }

    pub fn contents(&self) -> usize {
        self.rho.first().map_or(0, |r| r.len())
    }
}

fn normalize_row(row: &[f64]) -> Vec<f64> {
    let s: f64 = row.iter().sum();
    if s > 0.0 {
        row.iter().map(|v| v / s).collect()
    } else {
        vec![0.0; row.len()]
    }
}

/// Averages joint preferences over the optimisation horizon and normalises
/// each user row. Per-entry sums run over sorted terms so the result does not
/// depend on slot order.
pub fn aggregate_preference(profiles: &[PreferenceProfile]) -> Result<AggregatedPreference> {
    let first = profiles
        .first()
        .ok_or_else(|| Error::InvalidParameter("cannot aggregate an empty horizon".into()))?;
    let (users, contents) = (first.users(), first.contents());
    if let Some(p) = profiles.iter().find(|p| p.users() != users || p.contents() != contents) {
        return Err(Error::Dimension(format!(
            "slot {} is {}x{}, expected {users}x{contents}",
            p.slot,
            p.users(),
            p.contents()
        )));
    }
    let horizon = profiles.len();
    let mut terms = Vec::with_capacity(horizon);
    let mut raw = vec![vec![0.0; contents]; users];
    for (i, row) in raw.iter_mut().enumerate() {
        for (k, cell) in row.iter_mut().enumerate() {
            terms.clear();
            terms.extend(profiles.iter().map(|p| p.joint[i][k]));
            terms.sort_by(f64::total_cmp);
            *cell = terms.iter().sum::<f64>() / horizon as f64;
        }
    }
    let rho = raw.iter().map(|r| normalize_row(r)).collect();
    Ok(AggregatedPreference {
        rho,
        raw,
        horizon,
        start_slot: profiles.iter().map(|p| p.slot).min().unwrap_or(0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slot(rows: Vec<Vec<u32>>) -> RequestMatrix {
        RequestMatrix::from_nested(&[rows]).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-15
    }

    #[test]
    fn two_by_two_profile() {
        let p = profile_from_slot(&slot(vec![vec![1, 2], vec![3, 4]]), 0).unwrap();
        assert!(close(p.activity[0], 0.3) && close(p.activity[1], 0.7));
        assert!(close(p.conditional[0][0], 1.0 / 3.0) && close(p.conditional[0][1], 2.0 / 3.0));
        assert!(close(p.conditional[1][0], 3.0 / 7.0) && close(p.conditional[1][1], 4.0 / 7.0));
        let expect = [[0.1, 0.2], [0.3, 0.4]];
        for i in 0..2 {
            for k in 0..2 {
                assert!(
                    close(p.joint[i][k], expect[i][k]),
                    "joint[{i}][{k}] = {}",
                    p.joint[i][k]
                );
            }
        }
        let g = global_popularity(&p);
        assert!(close(g[0], 0.4) && close(g[1], 0.6));
    }

    #[test]
    fn lone_requester_has_full_activity() {
        let p = profile_from_slot(&slot(vec![vec![0, 3, 1]]), 0).unwrap();
        assert_eq!(p.activity, vec![1.0]);
        assert_eq!(global_popularity(&p), p.conditional[0]);
    }

    #[test]
    fn idle_user_gets_zero_rows() {
        let p = profile_from_slot(&slot(vec![vec![2, 2], vec![0, 0]]), 0).unwrap();
        assert_eq!(p.activity[1], 0.0);
        assert_eq!(p.joint[1], vec![0.0, 0.0]);
        assert_eq!(p.conditional[1], vec![0.0, 0.0]);
    }

    #[test]
    fn empty_slot_is_all_zero() {
        let p = profile_from_slot(&RequestMatrix::zeros(1, 2, 3), 0).unwrap();
        assert!(p.is_empty());
        assert_eq!(global_popularity(&p), vec![0.0; 3]);
    }

    #[test]
    fn forecast_slot_activity() {
        // Predicted slot [[2,0],[1,1]].
        let p = profile_from_slot(&slot(vec![vec![2, 0], vec![1, 1]]), 0).unwrap();
        assert_eq!(p.activity, vec![0.5, 0.5]);
    }

    #[test]
    fn absolute_slot_index_is_kept() {
        let m = RequestMatrix::zeros(2, 1, 1).with_start_slot(250);
        assert_eq!(profile_from_slot(&m, 1).unwrap().slot, 251);
        assert!(profile_from_slot(&m, 2).is_err());
    }

    #[test]
    fn single_slot_horizon_is_normalised_joint() {
        let p = profile_from_slot(&slot(vec![vec![1, 2], vec![3, 4]]), 0).unwrap();
        let agg = aggregate_preference(std::slice::from_ref(&p)).unwrap();
        assert!(close(agg.rho[0][0], 1.0 / 3.0) && close(agg.rho[0][1], 2.0 / 3.0));
        assert!(close(agg.rho[1][0], 3.0 / 7.0) && close(agg.rho[1][1], 4.0 / 7.0));
        assert_eq!(agg.raw, p.joint);
        assert_eq!(agg.horizon, 1);
    }

    #[test]
    fn identical_slots_average_to_themselves() {
        let p = profile_from_slot(&slot(vec![vec![1, 2], vec![3, 4]]), 0).unwrap();
        let one = aggregate_preference(std::slice::from_ref(&p)).unwrap();
        let two = aggregate_preference(&[p.clone(), p]).unwrap();
        assert_eq!(one.rho, two.rho);
    }

    #[test]
    fn two_slot_mean_then_normalise() {
        let m = RequestMatrix::from_nested(&[vec![vec![1, 2], vec![3, 4]], vec![vec![5, 0], vec![1, 4]]]).unwrap();
        let ps = profiles(&m).unwrap();
        let agg = aggregate_preference(&ps).unwrap();
        // Oracle: J1 = [[.1,.2],[.3,.4]], J2 = [[.5,0],[.1,.4]].
        let mean = [[0.3, 0.1], [0.2, 0.4]];
        for i in 0..2 {
            let s: f64 = mean[i].iter().sum();
            for k in 0..2 {
                assert!((agg.raw[i][k] - mean[i][k]).abs() < 1e-15);
                assert!((agg.rho[i][k] - mean[i][k] / s).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn empty_horizon_is_rejected() {
        assert!(aggregate_preference(&[]).is_err());
    }

    #[test]
    fn mismatched_dimensions_are_rejected() {
        let a = profile_from_slot(&slot(vec![vec![1, 2]]), 0).unwrap();
        let b = profile_from_slot(&slot(vec![vec![1, 2, 3]]), 0).unwrap();
        assert!(matches!(aggregate_preference(&[a, b]), Err(Error::Dimension(_))));
    }
}
