#![allow(dead_code)]

use std::path::Path;

use edgecache_core::RequestMatrix;
use edgecache_harness::ExperimentConfig;

/// Every cell owns a block of `block` contents and all its users request
/// one favourite from the block, moving on by one content each slot; a
/// weaker second choice trails it. Cell 0 is slightly busier so historical
/// totals rank its block first.
pub fn rotating_preferences(
    num_bs: usize,
    users_per_bs: usize,
    block: usize,
    contents: usize,
    slots: usize,
) -> RequestMatrix {
    assert!(num_bs * block <= contents);
    let mut m = RequestMatrix::zeros(slots, num_bs * users_per_bs, contents);
    for t in 0..slots {
        for c in 0..num_bs {
            let fav = c * block + t % block;
            let second = c * block + (t + 1) % block;
            for u in c * users_per_bs..(c + 1) * users_per_bs {
                m.set(t, u, fav, if c == 0 { 22 } else { 20 });
                m.set(t, u, second, 5);
            }
        }
    }
    m
}

/// Every user requests content 0 only, at a constant rate.
pub fn single_content(users: usize, contents: usize, slots: usize) -> RequestMatrix {
    let mut m = RequestMatrix::zeros(slots, users, contents);
    for t in 0..slots {
        for u in 0..users {
            m.set(t, u, 0, 10);
        }
    }
    m
}

pub fn write_dataset(m: &RequestMatrix, path: &Path) {
    m.write_csv(std::fs::File::create(path).unwrap(), 0, &[]).unwrap();
}

/// Small cluster with a short history, fast enough for end-to-end tests.
pub fn small_config() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::default();
    for (k, v) in [
        ("num_bs", "2"),
        ("users_per_bs", "3"),
        ("num_contents", "20"),
        ("bs_capacity", "3"),
        ("user_capacity", "2"),
        ("req_min", "20"),
        ("req_max", "60"),
        ("hidden_dim", "6"),
        ("epochs", "15"),
        ("history_slots", "30"),
        ("horizon", "6"),
        ("sweep_min", "1"),
        ("sweep_max", "4"),
        ("num_seeds", "2"),
    ] {
        cfg.set(k, v).unwrap();
    }
    cfg
}

/// Config for the rotating dataset at `path`: B=3, U_c=3, F=30 with
/// C_d=1 and C_b swept over 1..=4.
pub fn rotating_config(path: &Path) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::default();
    for (k, v) in [
        ("num_bs", "3"),
        ("users_per_bs", "3"),
        ("num_contents", "30"),
        ("user_capacity", "1"),
        ("sweep", "cb"),
        ("sweep_min", "1"),
        ("sweep_max", "4"),
        ("hidden_dim", "16"),
        ("epochs", "150"),
        ("history_slots", "40"),
        ("horizon", "10"),
        ("schemes", "homogeneous,static-zipf"),
    ] {
        cfg.set(k, v).unwrap();
    }
    cfg.dataset = Some(path.to_path_buf());
    cfg
}
