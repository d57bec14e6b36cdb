//! Collaborative edge caching driven by per-user preference forecasts.
//!
//! The crate is organised bottom-up:
//!
//! * [`topology`], [`requests`], [`rng`]: the cluster layout, the per-slot
//!   user-content request tensor and deterministic random streams.
//! * [`synthgen`]: synthetic Zipf request histories with a sinusoidal
//!   correlated drift.
//! * [`preference`]: activity levels, conditional and joint preferences and
//!   the horizon-averaged preference used to weight costs.
//! * [`forecaster`]: a from-scratch LSTM trained with backpropagation through
//!   time, autoregressive rollout and simple baselines.
//! * [`cachemodel`]: tier access probabilities and content sharing cost for
//!   heterogeneous and homogeneous probabilistic placements.
//! * [`placement`]: greedy per-slot placement heuristics and their conversion
//!   into long-term caching probabilities.

pub mod cachemodel;
mod error;
pub mod forecaster;
pub mod placement;
pub mod preference;
pub mod requests;
pub mod rng;
pub mod synthgen;
pub mod topology;

pub use error::{Error, Result};
pub use requests::RequestMatrix;
pub use rng::SeededRng;
pub use topology::{build_topology, Topology, TopologyConfig};
