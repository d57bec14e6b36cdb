//! Probabilistic caching cost model.
//!
//! A request from a tagged user is served, in lookup order, from its own
//! cache, a D2D neighbour in the same cell, the serving base station, another
//! base station of the cluster, or the cloud. With independent per-node
//! caching probabilities the five tiers partition the unit mass, and the
//! access cost is the tier-probability-weighted sum of tier costs.

use std::fmt;

use crate::preference::AggregatedPreference;
use crate::{Error, Result, Topology};

/// Slack allowed when checking `sum_k p <= C` on time-averaged indicators.
pub const CAPACITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct HetPlacement {
    pub user_probs: Vec<Vec<f64>>,
    pub bs_probs: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomPlacement {
    pub user_probs: Vec<f64>,
    pub bs_probs: Vec<f64>,
}

fn check_row(row: &[f64], capacity: usize, what: &str) -> Result<()> {
    if let Some(p) = row.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::Infeasible(format!("{what}: probability {p} outside [0, 1]")));
    }
    let total: f64 = row.iter().sum();
    if total > capacity as f64 + CAPACITY_TOLERANCE {
        return Err(Error::Infeasible(format!(
            "{what}: stores {total} contents in expectation, capacity {capacity}"
        )));
    }
    Ok(())
}

impl HetPlacement {
    pub fn new(user_probs: Vec<Vec<f64>>, bs_probs: Vec<Vec<f64>>, topo: &Topology) -> Result<Self> {
        let f = topo.num_contents();
        if user_probs.len() != topo.num_users() || bs_probs.len() != topo.num_bs() {
            return Err(Error::Dimension(format!(
                "placement covers {} users / {} BSs, topology has {} / {}",
                user_probs.len(),
                bs_probs.len(),
                topo.num_users(),
                topo.num_bs()
            )));
        }
        if user_probs.iter().chain(&bs_probs).any(|r| r.len() != f) {
            return Err(Error::Dimension(format!("placement rows must have {f} contents")));
        }
        for (i, row) in user_probs.iter().enumerate() {
            check_row(row, topo.user_capacity(), &format!("user {i}"))?;
        }
        for (j, row) in bs_probs.iter().enumerate() {
            check_row(row, topo.bs_capacity(), &format!("BS {j}"))?;
        }
        Ok(Self { user_probs, bs_probs })
    }

    pub fn empty(topo: &Topology) -> Self {
        Self {
            user_probs: vec![vec![0.0; topo.num_contents()]; topo.num_users()],
            bs_probs: vec![vec![0.0; topo.num_contents()]; topo.num_bs()],
        }
    }

    /// Every node of a tier gets the homogeneous probabilities.
    pub fn from_hom(p: &HomPlacement, topo: &Topology) -> Self {
        Self {
            user_probs: vec![p.user_probs.clone(); topo.num_users()],
            bs_probs: vec![p.bs_probs.clone(); topo.num_bs()],
        }
    }
}

impl HomPlacement {
    pub fn new(user_probs: Vec<f64>, bs_probs: Vec<f64>, topo: &Topology) -> Result<Self> {
        let f = topo.num_contents();
        if user_probs.len() != f || bs_probs.len() != f {
            return Err(Error::Dimension(format!("placement rows must have {f} contents")));
        }
        check_row(&user_probs, topo.user_capacity(), "users")?;
        check_row(&bs_probs, topo.bs_capacity(), "BSs")?;
        Ok(Self { user_probs, bs_probs })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccessProbabilities {
    pub p_own: f64,
    pub p_d2d: f64,
    pub p_serving_bs: f64,
    pub p_cluster_bs: f64,
    pub p_local: f64,
    pub p_cloud: f64,
}

impl AccessProbabilities {
    /// Sum of the five disjoint tiers; one for any valid placement.
    pub fn tier_sum(&self) -> f64 {
        self.p_own + self.p_d2d + self.p_serving_bs + self.p_cluster_bs + self.p_cloud
    }
}

pub fn het_access_probs(p: &HetPlacement, topo: &Topology, user: usize, content: usize) -> Result<AccessProbabilities> {
    if user >= topo.num_users() || content >= topo.num_contents() {
        return Err(Error::IndexOutOfRange(format!("user {user}, content {content}")));
    }
    let bs = topo.serving_bs(user);
    let a = |i: usize| p.user_probs[i][content];
    let eta = |j: usize| p.bs_probs[j][content];

    let others_miss: f64 = topo.cell_users(bs).filter(|&i| i != user).map(|i| 1.0 - a(i)).product();
    let cell_miss: f64 = topo.cell_users(bs).map(|i| 1.0 - a(i)).product();
    let other_bs_miss: f64 = (0..topo.num_bs()).filter(|&j| j != bs).map(|j| 1.0 - eta(j)).product();
    let all_bs_miss: f64 = (0..topo.num_bs()).map(|j| 1.0 - eta(j)).product();

    let p_cloud = cell_miss * all_bs_miss;
    Ok(AccessProbabilities {
        p_own: a(user),
        p_d2d: (1.0 - a(user)) * (1.0 - others_miss),
        p_serving_bs: eta(bs) * cell_miss,
        p_cluster_bs: (1.0 - eta(bs)) * cell_miss * (1.0 - other_bs_miss),
        p_local: 1.0 - p_cloud,
        p_cloud,
    })
}

pub fn hom_access_probs(
    p: &HomPlacement,
    users_per_cell: usize,
    num_bs: usize,
    content: usize,
) -> Result<AccessProbabilities> {
    if content >= p.user_probs.len() || content >= p.bs_probs.len() {
        return Err(Error::IndexOutOfRange(format!("content {content}")));
    }
    if users_per_cell == 0 || num_bs == 0 {
        return Err(Error::InvalidParameter(
            "need at least one user per cell and one BS".into(),
        ));
    }
    let a = p.user_probs[content];
    let eta = p.bs_probs[content];
    let cell_miss = (1.0 - a).powi(users_per_cell as i32);
    let p_cloud = cell_miss * (1.0 - eta).powi(num_bs as i32);
    Ok(AccessProbabilities {
        p_own: a,
        p_d2d: (1.0 - a) * (1.0 - (1.0 - a).powi(users_per_cell as i32 - 1)),
        p_serving_bs: cell_miss * eta,
        p_cluster_bs: cell_miss * (1.0 - eta) * (1.0 - (1.0 - eta).powi(num_bs as i32 - 1)),
        p_local: 1.0 - p_cloud,
        p_cloud,
    })
}

/// Communication costs per tier, before adding storage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommCosts {
    pub d2d: f64,
    pub serving_bs: f64,
    pub cluster_bs: f64,
    pub cloud: f64,
}

/// Inputs for `Lambda_d = S_f * delta_d * d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct D2dLink {
    pub content_size: f64,
    pub rate: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostParams {
    pub storage: f64,
    pub comm: CommCosts,
    pub d2d_link: Option<D2dLink>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CostViolation {
    Negative {
        tier: &'static str,
        value: f64,
    },
    Ordering {
        cheaper: &'static str,
        dearer: &'static str,
        cheaper_cost: f64,
        dearer_cost: f64,
    },
    Derivation {
        declared: f64,
        derived: f64,
    },
}

impl fmt::Display for CostViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostViolation::Negative { tier, value } => write!(f, "{tier} cost {value} is negative"),
            CostViolation::Ordering {
                cheaper,
                dearer,
                cheaper_cost,
                dearer_cost,
            } => write!(
                f,
                "{cheaper} not cheaper than {dearer} ({cheaper_cost} >= {dearer_cost})"
            ),
            CostViolation::Derivation { declared, derived } => write!(
                f,
                "d2d communication cost {declared} disagrees with size*rate*distance = {derived}"
            ),
        }
    }
}

impl std::error::Error for CostViolation {}

impl CostParams {
    pub fn new(storage: f64, comm: CommCosts) -> std::result::Result<Self, CostViolation> {
        let c = Self::unchecked(storage, comm);
        validate_cost_params(&c)?;
        Ok(c)
    }

    pub fn unchecked(storage: f64, comm: CommCosts) -> Self {
        Self {
            storage,
            comm,
            d2d_link: None,
        }
    }

    pub fn with_d2d_link(mut self, link: D2dLink) -> std::result::Result<Self, CostViolation> {
        self.d2d_link = Some(link);
        validate_cost_params(&self)?;
        Ok(self)
    }

    pub fn phi_d2d(&self) -> f64 {
        self.comm.d2d + self.storage
    }

    pub fn phi_serving_bs(&self) -> f64 {
        self.comm.serving_bs + self.storage
    }

    pub fn phi_cluster_bs(&self) -> f64 {
        self.comm.cluster_bs + self.storage
    }

    pub fn phi_cloud(&self) -> f64 {
        self.comm.cloud + self.storage
    }
}

impl Default for CostParams {
    /// Storage 2000, communication {100, 500, 1000, 5000}.
    fn default() -> Self {
        Self::unchecked(
            2000.0,
            CommCosts {
                d2d: 100.0,
                serving_bs: 500.0,
                cluster_bs: 1000.0,
                cloud: 5000.0,
            },
        )
    }
}

pub fn validate_cost_params(costs: &CostParams) -> std::result::Result<(), CostViolation> {
    let named = [
        ("storage", costs.storage),
        ("d2d", costs.comm.d2d),
        ("serving BS", costs.comm.serving_bs),
        ("cluster BS", costs.comm.cluster_bs),
        ("cloud", costs.comm.cloud),
    ];
    for (tier, value) in named {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(CostViolation::Negative { tier, value });
        }
    }
    let chain = [
        ("d2d", costs.phi_d2d()),
        ("serving BS", costs.phi_serving_bs()),
        ("cluster BS", costs.phi_cluster_bs()),
        ("cloud", costs.phi_cloud()),
    ];
    for pair in chain.windows(2) {
        let ((cheaper, lo), (dearer, hi)) = (pair[0], pair[1]);
        if lo >= hi {
            return Err(CostViolation::Ordering {
                cheaper,
                dearer,
                cheaper_cost: lo,
                dearer_cost: hi,
            });
        }
    }
    if let Some(link) = costs.d2d_link {
        let derived = link.content_size * link.rate * link.distance;
        if (derived - costs.comm.d2d).abs() > 1e-12 * derived.abs().max(1.0) {
            return Err(CostViolation::Derivation {
                declared: costs.comm.d2d,
                derived,
            });
        }
    }
    Ok(())
}

/// `Xi_c`: self hits pay storage only; every other tier pays `phi_*`.
pub fn content_cost(probs: &AccessProbabilities, costs: &CostParams) -> f64 {
    costs.storage * probs.p_own
        + costs.phi_d2d() * probs.p_d2d
        + costs.phi_serving_bs() * probs.p_serving_bs
        + costs.phi_cluster_bs() * probs.p_cluster_bs
        + costs.phi_cloud() * probs.p_cloud
}

fn check_rho(rho: &AggregatedPreference, topo: &Topology) -> Result<()> {
    if rho.users() != topo.num_users() || rho.contents() != topo.num_contents() {
        return Err(Error::Dimension(format!(
            "preference is {}x{}, topology is {}x{}",
            rho.users(),
            rho.contents(),
            topo.num_users(),
            topo.num_contents()
        )));
    }
    Ok(())
}

fn check_het(p: &HetPlacement, topo: &Topology) -> Result<()> {
    let f = topo.num_contents();
    if p.user_probs.len() != topo.num_users()
        || p.bs_probs.len() != topo.num_bs()
        || p.user_probs.iter().chain(&p.bs_probs).any(|r| r.len() != f)
    {
        return Err(Error::Dimension("placement does not match topology".into()));
    }
    Ok(())
}

/// Closed-form per-(user, content) cost with `A1` the probability that no
/// user of the cell holds the content and `A2` that no BS does.
#[inline]
fn expanded_cost(a: f64, eta: f64, cell_miss: f64, bs_miss: f64, c: &CostParams) -> f64 {
    c.storage * a + c.phi_d2d() * (1.0 - a)
        - cell_miss
            * (c.phi_d2d() - c.phi_serving_bs() * eta - c.phi_cluster_bs() * (1.0 - eta)
                + bs_miss * (c.phi_cluster_bs() - c.phi_cloud()))
}

/// `Xi_pi` for a heterogeneous placement, from the expanded closed form.
pub fn average_cost_het(
    p: &HetPlacement,
    rho: &AggregatedPreference,
    topo: &Topology,
    costs: &CostParams,
) -> Result<f64> {
    check_het(p, topo)?;
    check_rho(rho, topo)?;
    let mut total = 0.0;
    for bs in 0..topo.num_bs() {
        for user in topo.cell_users(bs) {
            let mut user_total = 0.0;
            for k in 0..topo.num_contents() {
                let w = rho.rho[user][k];
                if w == 0.0 {
                    continue;
                }
                let a = p.user_probs[user][k];
                let a1 = (1.0 - a)
                    * topo
                        .cell_users(bs)
                        .filter(|&i| i != user)
                        .map(|i| 1.0 - p.user_probs[i][k])
                        .product::<f64>();
                let eta = p.bs_probs[bs][k];
                let a2 = (1.0 - eta)
                    * (0..topo.num_bs())
                        .filter(|&j| j != bs)
                        .map(|j| 1.0 - p.bs_probs[j][k])
                        .product::<f64>();
                user_total += w * expanded_cost(a, eta, a1, a2, costs);
            }
            total += user_total;
        }
    }
    Ok(total / topo.num_users() as f64)
}

/// `Xi_pi` for a homogeneous placement, with `B1 = (1-a)^{U_c}` and
/// `B2 = (1-eta)^B`.
pub fn average_cost_hom(
    p: &HomPlacement,
    rho: &AggregatedPreference,
    topo: &Topology,
    costs: &CostParams,
) -> Result<f64> {
    let f = topo.num_contents();
    if p.user_probs.len() != f || p.bs_probs.len() != f {
        return Err(Error::Dimension("placement does not match topology".into()));
    }
    check_rho(rho, topo)?;
    let per_content: Vec<f64> = (0..f)
        .map(|k| {
            let (a, eta) = (p.user_probs[k], p.bs_probs[k]);
            let b1 = (1.0 - a).powi(topo.users_per_bs() as i32);
            let b2 = (1.0 - eta).powi(topo.num_bs() as i32);
            expanded_cost(a, eta, b1, b2, costs)
        })
        .collect();
    let mut total = 0.0;
    for row in &rho.rho {
        let mut user_total = 0.0;
        for (w, xi) in row.iter().zip(&per_content) {
            if *w != 0.0 {
                user_total += w * xi;
            }
        }
        total += user_total;
    }
    Ok(total / topo.num_users() as f64)
}

/// `Xi_pi` as the plain preference-weighted sum of tier costs.
pub fn direct_cost_het(
    p: &HetPlacement,
    rho: &AggregatedPreference,
    topo: &Topology,
    costs: &CostParams,
) -> Result<f64> {
    check_het(p, topo)?;
    check_rho(rho, topo)?;
    let mut total = 0.0;
    for user in 0..topo.num_users() {
        for k in 0..topo.num_contents() {
            let probs = het_access_probs(p, topo, user, k)?;
            total += rho.rho[user][k] * content_cost(&probs, costs);
        }
    }
    Ok(total / topo.num_users() as f64)
}

pub fn direct_cost_hom(
    p: &HomPlacement,
    rho: &AggregatedPreference,
    topo: &Topology,
    costs: &CostParams,
) -> Result<f64> {
    check_rho(rho, topo)?;
    let mut total = 0.0;
    for user in 0..topo.num_users() {
        for k in 0..topo.num_contents() {
            let probs = hom_access_probs(p, topo.users_per_bs(), topo.num_bs(), k)?;
            total += rho.rho[user][k] * content_cost(&probs, costs);
        }
    }
    Ok(total / topo.num_users() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{build_topology, TopologyConfig};

    fn topo(b: usize, per: usize, f: usize, cb: usize, cd: usize) -> Topology {
        build_topology(TopologyConfig {
            num_bs: b,
            users_per_bs: per,
            num_contents: f,
            bs_capacity: cb,
            user_capacity: cd,
        })
        .unwrap()
    }

    #[test]
    fn certain_self_hit() {
        let t = topo(2, 2, 1, 1, 1);
        let mut p = HetPlacement::empty(&t);
        p.user_probs[0][0] = 1.0;
        p.bs_probs[1][0] = 0.7;
        let a = het_access_probs(&p, &t, 0, 0).unwrap();
        assert_eq!(
            (a.p_own, a.p_d2d, a.p_serving_bs, a.p_cluster_bs, a.p_cloud),
            (1.0, 0.0, 0.0, 0.0, 0.0)
        );
        assert_eq!(a.p_local, 1.0);
    }

    #[test]
    fn empty_caches_go_to_cloud() {
        let t = topo(3, 2, 4, 1, 1);
        let a = het_access_probs(&HetPlacement::empty(&t), &t, 3, 2).unwrap();
        assert_eq!(a.p_cloud, 1.0);
        assert_eq!(a.tier_sum(), 1.0);
        assert_eq!(a.p_local, 0.0);
    }

    #[test]
    fn half_probabilities_by_hand() {
        let t = topo(2, 2, 1, 1, 1);
        let p = HetPlacement::new(vec![vec![0.5]; 4], vec![vec![0.5]; 2], &t).unwrap();
        let a = het_access_probs(&p, &t, 0, 0).unwrap();
        assert_eq!(a.p_own, 0.5);
        assert_eq!(a.p_d2d, 0.25);
        assert_eq!(a.p_serving_bs, 0.125);
        assert_eq!(a.p_cluster_bs, 0.0625);
        assert_eq!(a.p_cloud, 0.0625);
        assert_eq!(a.p_local, 0.9375);

        // Dot product against (storage, phi_d, phi_b0, phi_BS, phi_C).
        let c = CostParams::default();
        let oracle = 2000.0 * 0.5 + 2100.0 * 0.25 + 2500.0 * 0.125 + 3000.0 * 0.0625 + 7000.0 * 0.0625;
        assert_eq!(content_cost(&a, &c), oracle);
        assert_eq!(oracle, 2462.5);
    }

    #[test]
    fn hom_matches_het_for_equal_entries() {
        let t = topo(2, 2, 1, 1, 1);
        let hom = HomPlacement::new(vec![0.5], vec![0.5], &t).unwrap();
        let het = HetPlacement::from_hom(&hom, &t);
        let h = hom_access_probs(&hom, 2, 2, 0).unwrap();
        let g = het_access_probs(&het, &t, 0, 0).unwrap();
        assert_eq!(h, g);
    }

    #[test]
    fn hom_degenerate_hierarchy() {
        let t = topo(1, 1, 1, 1, 1);
        let p = HomPlacement::new(vec![0.3], vec![0.6], &t).unwrap();
        let a = hom_access_probs(&p, 1, 1, 0).unwrap();
        assert_eq!(a.p_own, 0.3);
        assert_eq!(a.p_d2d, 0.0);
        assert_eq!(a.p_serving_bs, 0.7 * 0.6);
        assert_eq!(a.p_cluster_bs, 0.0);
        assert_eq!(a.p_cloud, 0.7 * (1.0 - 0.6));
        let empty = HomPlacement::new(vec![0.0], vec![0.0], &t).unwrap();
        assert_eq!(hom_access_probs(&empty, 1, 1, 0).unwrap().p_cloud, 1.0);
    }

    #[test]
    fn out_of_range_indices() {
        let t = topo(1, 2, 3, 1, 1);
        let p = HetPlacement::empty(&t);
        assert!(het_access_probs(&p, &t, 2, 0).is_err());
        assert!(het_access_probs(&p, &t, 0, 3).is_err());
        let h = HomPlacement::new(vec![0.0; 3], vec![0.0; 3], &t).unwrap();
        assert!(hom_access_probs(&h, 2, 1, 3).is_err());
    }

    #[test]
    fn placement_capacity_is_enforced() {
        let t = topo(1, 1, 3, 1, 1);
        assert!(matches!(
            HetPlacement::new(vec![vec![0.6, 0.6, 0.0]], vec![vec![0.0; 3]], &t),
            Err(Error::Infeasible(_))
        ));
        assert!(HetPlacement::new(vec![vec![1.2, 0.0, 0.0]], vec![vec![0.0; 3]], &t).is_err());
        assert!(HomPlacement::new(vec![0.0; 3], vec![0.5, 0.5, 0.5], &t).is_err());
        assert!(HetPlacement::new(vec![vec![0.5, 0.5, 0.0]], vec![vec![1.0, 0.0, 0.0]], &t).is_ok());
    }

    #[test]
    fn self_and_cloud_costs() {
        let c = CostParams::default();
        let own = AccessProbabilities {
            p_own: 1.0,
            p_d2d: 0.0,
            p_serving_bs: 0.0,
            p_cluster_bs: 0.0,
            p_local: 1.0,
            p_cloud: 0.0,
        };
        assert_eq!(content_cost(&own, &c), 2000.0);
        let cloud = AccessProbabilities {
            p_own: 0.0,
            p_local: 0.0,
            p_cloud: 1.0,
            ..own
        };
        assert_eq!(content_cost(&cloud, &c), 7000.0);
    }

    #[test]
    fn default_costs_are_valid() {
        assert_eq!(validate_cost_params(&CostParams::default()), Ok(()));
        let c = CostParams::default();
        assert_eq!(
            (c.phi_d2d(), c.phi_serving_bs(), c.phi_cluster_bs(), c.phi_cloud()),
            (2100.0, 2500.0, 3000.0, 7000.0)
        );
    }

    #[test]
    fn equal_d2d_and_serving_bs_is_a_violation() {
        let comm = CommCosts {
            d2d: 500.0,
            serving_bs: 500.0,
            cluster_bs: 1000.0,
            cloud: 5000.0,
        };
        let err = CostParams::new(2000.0, comm).unwrap_err();
        assert_eq!(err.to_string(), "d2d not cheaper than serving BS (2500 >= 2500)");
    }

    #[test]
    fn negative_cost_is_a_violation() {
        let mut c = CostParams::default();
        c.comm.cloud = -1.0;
        assert!(matches!(
            validate_cost_params(&c),
            Err(CostViolation::Negative { tier: "cloud", .. })
        ));
    }

    #[test]
    fn d2d_link_derivation() {
        let comm = CommCosts {
            d2d: 16.0,
            serving_bs: 500.0,
            cluster_bs: 1000.0,
            cloud: 5000.0,
        };
        let link = D2dLink {
            content_size: 8.0,
            rate: 1.0,
            distance: 2.0,
        };
        assert!(CostParams::new(2000.0, comm).unwrap().with_d2d_link(link).is_ok());
        let bad = D2dLink { distance: 3.0, ..link };
        assert!(matches!(
            CostParams::new(2000.0, comm).unwrap().with_d2d_link(bad),
            Err(CostViolation::Derivation { .. })
        ));
    }

    fn dyadic_rho(users: usize, f: usize) -> AggregatedPreference {
        // Rows of powers of two summing exactly to one.
        let rows = (0..users)
            .map(|i| {
                let mut r = vec![0.0; f];
                let mut rem = 1.0;
                for k in 0..f - 1 {
                    rem /= 2.0;
                    r[(k + i) % f] = rem;
                }
                r[(f - 1 + i) % f] = rem;
                r
            })
            .collect();
        AggregatedPreference::from_weights(rows).unwrap()
    }

    #[test]
    fn empty_caches_cost_phi_cloud() {
        let t = topo(3, 2, 5, 2, 2);
        let rho = dyadic_rho(6, 5);
        let c = CostParams::default();
        assert_eq!(
            average_cost_het(&HetPlacement::empty(&t), &rho, &t, &c).unwrap(),
            7000.0
        );
        let hom = HomPlacement::new(vec![0.0; 5], vec![0.0; 5], &t).unwrap();
        assert_eq!(average_cost_hom(&hom, &rho, &t, &c).unwrap(), 7000.0);
    }

    #[test]
    fn full_caches_cost_storage() {
        let t = topo(2, 3, 4, 4, 4);
        let rho = dyadic_rho(6, 4);
        let c = CostParams::default();
        let hom = HomPlacement::new(vec![1.0; 4], vec![1.0; 4], &t).unwrap();
        assert_eq!(average_cost_hom(&hom, &rho, &t, &c).unwrap(), 2000.0);
        let het = HetPlacement::from_hom(&hom, &t);
        assert_eq!(average_cost_het(&het, &rho, &t, &c).unwrap(), 2000.0);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let t = topo(1, 2, 3, 1, 1);
        let rho = dyadic_rho(3, 3);
        assert!(average_cost_het(&HetPlacement::empty(&t), &rho, &t, &CostParams::default()).is_err());
    }
}
