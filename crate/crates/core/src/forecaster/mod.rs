//! Per-user sequence forecasting.
//!
//! Each user gets its own LSTM over full request rows. After training on
//! slots `0..N` the model is rolled out autoregressively for `N_opt` slots;
//! the per-user rollouts are stacked into a forecast [`RequestMatrix`] whose
//! start slot is `N`.

mod baseline;
mod lstm;
mod persist;
mod train;

pub use baseline::{baseline_forecast, fit_zipf_exponent, BaselineKind};
pub use lstm::{gradient_check, lstm_forward, LstmModel, LstmState, Scaler};
pub use persist::{read_model, write_model};
pub use train::{
    one_step_mse, one_step_predictions, rollout, train, train_with_report, Split, TrainConfig, TrainReport,
};

use crate::{Error, RequestMatrix, Result};

/// Forecast counts for slots `N+1..N+N_opt`, same layout as observed data.
pub type ForecastMatrix = RequestMatrix;

/// Stacks per-user rollouts (`horizon x F` each) into one forecast.
pub fn assemble_forecast(per_user: &[Vec<Vec<u32>>], start_slot: usize) -> Result<ForecastMatrix> {
    let users = per_user.len();
    let horizon = per_user.first().map_or(0, |r| r.len());
    let f = per_user.first().and_then(|r| r.first()).map_or(0, |r| r.len());
    let mut out = RequestMatrix::zeros(horizon, users, f).with_start_slot(start_slot);
    for (u, rows) in per_user.iter().enumerate() {
        if rows.len() != horizon || rows.iter().any(|r| r.len() != f) {
            return Err(Error::Dimension(format!("user {u} forecast has inconsistent shape")));
        }
        for (t, row) in rows.iter().enumerate() {
            out.row_mut(t, u).copy_from_slice(row);
        }
    }
    Ok(out)
}
