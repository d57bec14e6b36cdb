//! Cluster layout: `B` base stations, each serving the same number of users,
//! and a catalog of `F` equally sized contents.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TopologyConfig {
    pub num_bs: usize,
    pub users_per_bs: usize,
    pub num_contents: usize,
    pub bs_capacity: usize,
    pub user_capacity: usize,
}

/// One cluster. Users are assigned contiguously: user `i` is served by base
/// station `i / users_per_bs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    num_bs: usize,
    users_per_bs: usize,
    num_contents: usize,
    bs_capacity: usize,
    user_capacity: usize,
    assignment: Vec<usize>,
}

pub fn build_topology(config: TopologyConfig) -> Result<Topology> {
    let TopologyConfig {
        num_bs,
        users_per_bs,
        num_contents,
        bs_capacity,
        user_capacity,
    } = config;
    if num_bs == 0 {
        return Err(Error::Topology("cluster needs at least one base station".into()));
    }
    if users_per_bs == 0 {
        return Err(Error::Topology("each base station needs at least one user".into()));
    }
    if num_contents == 0 {
        return Err(Error::Topology("catalog must hold at least one content".into()));
    }
    if bs_capacity > num_contents {
        return Err(Error::Topology(format!(
            "base station capacity {bs_capacity} exceeds catalog size {num_contents}"
        )));
    }
    if user_capacity > num_contents {
        return Err(Error::Topology(format!(
            "user capacity {user_capacity} exceeds catalog size {num_contents}"
        )));
    }
    let assignment = (0..num_bs * users_per_bs).map(|u| u / users_per_bs).collect();
    Ok(Topology {
        num_bs,
        users_per_bs,
        num_contents,
        bs_capacity,
        user_capacity,
        assignment,
    })
}

impl Topology {
    pub fn num_bs(&self) -> usize {
        self.num_bs
    }

    pub fn users_per_bs(&self) -> usize {
        self.users_per_bs
    }

    pub fn num_users(&self) -> usize {
        self.assignment.len()
    }

    pub fn num_contents(&self) -> usize {
        self.num_contents
    }

    pub fn bs_capacity(&self) -> usize {
        self.bs_capacity
    }

    pub fn user_capacity(&self) -> usize {
        self.user_capacity
    }

    pub fn serving_bs(&self, user: usize) -> usize {
        self.assignment[user]
    }

    /// Users served by base station `bs`, in ascending id order.
    pub fn cell_users(&self, bs: usize) -> std::ops::Range<usize> {
        bs * self.users_per_bs..(bs + 1) * self.users_per_bs
    }

    pub fn config(&self) -> TopologyConfig {
        TopologyConfig {
            num_bs: self.num_bs,
            users_per_bs: self.users_per_bs,
            num_contents: self.num_contents,
            bs_capacity: self.bs_capacity,
            user_capacity: self.user_capacity,
        }
    }

    /// Same layout with different cache sizes.
    pub fn with_capacities(&self, bs_capacity: usize, user_capacity: usize) -> Result<Topology> {
        build_topology(TopologyConfig {
            bs_capacity,
            user_capacity,
            ..self.config()
        })
    }
}
