use super::lstm::{LstmModel, Scaler};
use crate::synthgen::round_clamp;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub hidden_dim: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    /// Global gradient-norm clip.
    pub clip_norm: f64,
    pub train_frac: f64,
    pub val_frac: f64,
    pub test_frac: f64,
    pub patience: usize,
    pub seed: u64,
    /// Distinguishes models sharing a seed (one per user).
    pub stream: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            hidden_dim: 64,
            epochs: 200,
            learning_rate: 1e-2,
            clip_norm: 5.0,
            train_frac: 0.70,
            val_frac: 0.15,
            test_frac: 0.15,
            patience: 20,
            seed: 0,
            stream: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let fracs = [self.train_frac, self.val_frac, self.test_frac];
        if fracs.iter().any(|f| !(*f > 0.0)) || (fracs.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "split fractions {fracs:?} must be positive and sum to 1"
            )));
        }
        if !(self.learning_rate > 0.0) || !(self.clip_norm > 0.0) {
            return Err(Error::InvalidParameter(
                "learning rate and clip norm must be positive".into(),
            ));
        }
        if self.hidden_dim == 0 {
            return Err(Error::InvalidParameter("hidden size must be positive".into()));
        }
        Ok(())
    }
}

/// Chronological split of the `T - 1` one-step pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Split {
    pub train: usize,
    pub val: usize,
    pub test: usize,
}

impl Split {
    pub fn new(slots: usize, cfg: &TrainConfig) -> Result<Self> {
        if slots < 4 {
            return Err(Error::InvalidParameter(format!(
                "need at least 4 slots to train, got {slots}"
            )));
        }
        let pairs = slots - 1;
        let train = ((pairs as f64 * cfg.train_frac).floor() as usize).max(1);
        let val = ((pairs as f64 * cfg.val_frac).floor() as usize).max(1);
        if train + val > pairs {
            return Err(Error::InvalidParameter(format!(
                "{slots} slots too short for the split"
            )));
        }
        Ok(Self {
            train,
            val,
            test: pairs - train - val,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    pub split: Split,
    pub epochs_run: usize,
    /// Epoch whose parameters were kept; 0 means the initial model.
    pub best_epoch: usize,
    pub best_val_loss: f64,
    pub train_loss: Vec<f64>,
    pub val_loss: Vec<f64>,
}

struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Adam {
    const BETA1: f64 = 0.9;
    const BETA2: f64 = 0.999;
    const EPS: f64 = 1e-8;

    fn new(n: usize) -> Self {
        Self {
            m: vec![0.0; n],
            v: vec![0.0; n],
            t: 0,
        }
    }

    fn step(&mut self, params: &mut [f64], grad: &[f64], lr: f64) {
        self.t += 1;
        let c1 = 1.0 - Self::BETA1.powi(self.t);
        let c2 = 1.0 - Self::BETA2.powi(self.t);
        for ((p, g), (m, v)) in params
            .iter_mut()
            .zip(grad)
            .zip(self.m.iter_mut().zip(self.v.iter_mut()))
        {
            *m = Self::BETA1 * *m + (1.0 - Self::BETA1) * g;
            *v = Self::BETA2 * *v + (1.0 - Self::BETA2) * g * g;
            *p -= lr * (*m / c1) / ((*v / c2).sqrt() + Self::EPS);
        }
    }
}

fn clip(grad: &mut [f64], max_norm: f64) {
    let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
    if norm > max_norm {
        let s = max_norm / norm;
        grad.iter_mut().for_each(|g| *g *= s);
    }
}

pub fn train(series: &[Vec<f64>], cfg: &TrainConfig) -> Result<LstmModel> {
    train_with_report(series, cfg).map(|(m, _)| m)
}

/// Fits one model to a `T x F` history by full-sequence BPTT on one-step-ahead
/// MSE in standardised space, keeping the parameters with the best
/// validation loss.
pub fn train_with_report(series: &[Vec<f64>], cfg: &TrainConfig) -> Result<(LstmModel, TrainReport)> {
    cfg.validate()?;
    let split = Split::new(series.len(), cfg)?;
    let f = series[0].len();
    if f == 0 || series.iter().any(|r| r.len() != f) {
        return Err(Error::Dimension("history rows must share a positive width".into()));
    }

    let scaler = Scaler::fit(&series[..=split.train]);
    let scaled: Vec<Vec<f64>> = series.iter().map(|r| scaler.forward(r)).collect();
    let inputs = &scaled[..scaled.len() - 1];
    let targets = &scaled[1..];
    let train_in = &inputs[..split.train];
    let train_out = &targets[..split.train];
    let val_end = split.train + split.val;
    let val_range = split.train..val_end;

    let mut model = LstmModel::random(f, cfg.hidden_dim, cfg.seed, cfg.stream);
    model.scaler = scaler;
    let mut best = model.clone();
    let mut best_val = model.sequence_loss(&inputs[..val_end], &targets[..val_end], val_range.clone())?;
    let mut best_epoch = 0;
    let mut adam = Adam::new(model.param_count());
    let mut train_loss = Vec::new();
    let mut val_loss = Vec::new();
    let mut since_best = 0;

    for epoch in 1..=cfg.epochs {
        let (loss, mut grad) = model.loss_and_grad(train_in, train_out)?;
        clip(&mut grad, cfg.clip_norm);
        adam.step(model.params_mut(), &grad, cfg.learning_rate);
        let val = model.sequence_loss(&inputs[..val_end], &targets[..val_end], val_range.clone())?;
        train_loss.push(loss);
        val_loss.push(val);
        if !val.is_finite() {
            break;
        }
        if val < best_val {
            best_val = val;
            best = model.clone();
            best_epoch = epoch;
            since_best = 0;
        } else {
            since_best += 1;
            if since_best >= cfg.patience {
                break;
            }
        }
    }
    let report = TrainReport {
        split,
        epochs_run: train_loss.len(),
        best_epoch,
        best_val_loss: best_val,
        train_loss,
        val_loss,
    };
    Ok((best, report))
}

/// One-step-ahead predictions in raw units: entry `t` forecasts
/// `series[t + 1]` after warming up on `series[..=t]`.
pub fn one_step_predictions(model: &LstmModel, series: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let mut state = model.initial_state();
    series[..series.len().saturating_sub(1)]
        .iter()
        .map(|row| {
            let y = model.step(&mut state, &model.scaler.forward(row))?;
            Ok(model.scaler.inverse(&y))
        })
        .collect()
}

/// Raw-unit one-step MSE over target slots `from..series.len()`.
pub fn one_step_mse(model: &LstmModel, series: &[Vec<f64>], from: usize) -> Result<f64> {
    if from == 0 || from >= series.len() {
        return Err(Error::InvalidParameter(format!("target range starts at {from}")));
    }
    let preds = one_step_predictions(model, series)?;
    let mut sum = 0.0;
    let mut n = 0usize;
    for t in from..series.len() {
        for (p, y) in preds[t - 1].iter().zip(&series[t]) {
            sum += (p - y) * (p - y);
            n += 1;
        }
    }
    Ok(sum / n as f64)
}

/// Warms up on the whole history, then predicts `horizon` rows, each
/// rounded, clamped at zero and fed back as the next input.
pub fn rollout(model: &LstmModel, history: &[Vec<f64>], horizon: usize) -> Result<Vec<Vec<u32>>> {
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be at least 1".into()));
    }
    if history.is_empty() {
        return Err(Error::InvalidParameter("rollout needs a non-empty history".into()));
    }
    let mut state = model.initial_state();
    let mut y = Vec::new();
    for row in history {
        y = model.step(&mut state, &model.scaler.forward(row))?;
    }
    let mut out = Vec::with_capacity(horizon);
    for step in 0..horizon {
        let row: Vec<u32> = model.scaler.inverse(&y).into_iter().map(round_clamp).collect();
        if step + 1 < horizon {
            let fed: Vec<f64> = row.iter().map(|&c| c as f64).collect();
            y = model.step(&mut state, &model.scaler.forward(&fed))?;
        }
        out.push(row);
    }
    Ok(out)
}
