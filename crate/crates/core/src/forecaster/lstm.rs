//! Single-layer LSTM with a linear readout, trained by backpropagation
//! through time.
//!
//! All parameters live in one flat vector:
//!
//! | block  | shape    | meaning                                       |
//! |--------|----------|-----------------------------------------------|
//! | `w_x`  | 4H x F   | input weights, gate rows forget/input/cand/out |
//! | `w_h`  | 4H x H   | recurrent weights, same gate order             |
//! | `b`    | 4H       | gate biases                                    |
//! | `w_r`  | F x H    | readout weights                                |
//! | `b_r`  | F        | readout bias                                   |
//!
//! The recurrence works in whatever space its inputs are given in; input
//! standardisation is the trainer's job and is carried by [`Scaler`].

use std::ops::Range;

use rand::Rng;

use crate::rng::{SeededRng, StreamPurpose};
use crate::{Error, Result};

const FORGET: usize = 0;
const INPUT: usize = 1;
const CAND: usize = 2;
const OUTPUT: usize = 3;

/// Per-feature affine map between raw counts and model space.
#[derive(Debug, Clone, PartialEq)]
pub struct Scaler {
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
}

impl Scaler {
    pub fn identity(dim: usize) -> Self {
        Self {
            mean: vec![0.0; dim],
            scale: vec![1.0; dim],
        }
    }

    /// Mean and population standard deviation per feature; a zero spread
    /// maps to scale 1 so the scale stays strictly positive.
    pub fn fit(rows: &[Vec<f64>]) -> Self {
        let dim = rows.first().map_or(0, |r| r.len());
        let n = rows.len().max(1) as f64;
        let mut mean = vec![0.0; dim];
        for r in rows {
            for (m, v) in mean.iter_mut().zip(r) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0; dim];
        for r in rows {
            for ((s, v), m) in var.iter_mut().zip(r).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        let scale = var
            .into_iter()
            .map(|s| {
                let sd = (s / n).sqrt();
                if sd > 1e-12 {
                    sd
                } else {
                    1.0
                }
            })
            .collect();
        Self { mean, scale }
    }

    pub fn forward(&self, raw: &[f64]) -> Vec<f64> {
        raw.iter()
            .zip(self.mean.iter().zip(&self.scale))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }

    pub fn inverse(&self, scaled: &[f64]) -> Vec<f64> {
        scaled
            .iter()
            .zip(self.mean.iter().zip(&self.scale))
            .map(|(v, (m, s))| v * s + m)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LstmModel {
    input_dim: usize,
    hidden_dim: usize,
    params: Vec<f64>,
    pub scaler: Scaler,
}

/// Recurrent state carried between steps.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmState {
    pub hidden: Vec<f64>,
    pub cell: Vec<f64>,
}

#[inline]
fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// `out += m * x` for a row-major `rows x cols` block.
#[inline]
fn matvec_acc(out: &mut [f64], m: &[f64], x: &[f64]) {
    let cols = x.len();
    for (o, row) in out.iter_mut().zip(m.chunks_exact(cols)) {
        *o += row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
    }
}

/// `out += m^T * y` for a row-major `rows x cols` block, `y` of len rows.
#[inline]
fn matvec_t_acc(out: &mut [f64], m: &[f64], y: &[f64]) {
    let cols = out.len();
    for (row, &yi) in m.chunks_exact(cols).zip(y) {
        if yi != 0.0 {
            for (o, a) in out.iter_mut().zip(row) {
                *o += a * yi;
            }
        }
    }
}

/// `g += y x^T` into a row-major `len(y) x len(x)` block.
#[inline]
fn outer_acc(g: &mut [f64], y: &[f64], x: &[f64]) {
    let cols = x.len();
    for (row, &yi) in g.chunks_exact_mut(cols).zip(y) {
        if yi != 0.0 {
            for (gv, xv) in row.iter_mut().zip(x) {
                *gv += yi * xv;
            }
        }
    }
}

struct Layout {
    w_x: Range<usize>,
    w_h: Range<usize>,
    b: Range<usize>,
    w_r: Range<usize>,
    b_r: Range<usize>,
}

impl Layout {
    fn new(f: usize, h: usize) -> Self {
        let g = 4 * h;
        let w_x = 0..g * f;
        let w_h = w_x.end..w_x.end + g * h;
        let b = w_h.end..w_h.end + g;
        let w_r = b.end..b.end + f * h;
        let b_r = w_r.end..w_r.end + f;
        Self { w_x, w_h, b, w_r, b_r }
    }

    fn len(&self) -> usize {
        self.b_r.end
    }
}

/// Per-step activations kept for the backward pass.
struct Trace {
    /// Post-activation gates, 4H per step.
    gates: Vec<f64>,
    /// Cell states c_1..c_T, H per step.
    cells: Vec<f64>,
    /// Hidden states h_1..h_T, H per step.
    hiddens: Vec<f64>,
    outputs: Vec<Vec<f64>>,
}

impl LstmModel {
    pub fn zeros(input_dim: usize, hidden_dim: usize) -> Self {
        let len = Layout::new(input_dim, hidden_dim).len();
        Self {
            input_dim,
            hidden_dim,
            params: vec![0.0; len],
            scaler: Scaler::identity(input_dim),
        }
    }

    /// Uniform `(-1/sqrt(H), 1/sqrt(H))` weights, forget bias 1, zero readout
    /// bias.
    pub fn random(input_dim: usize, hidden_dim: usize, seed: u64, stream: u64) -> Self {
        let mut m = Self::zeros(input_dim, hidden_dim);
        let mut rng = SeededRng::for_purpose(seed, StreamPurpose::LstmInit, stream);
        let k = 1.0 / (hidden_dim.max(1) as f64).sqrt();
        let layout = m.layout();
        for r in [layout.w_x.clone(), layout.w_h.clone(), layout.w_r.clone()] {
            for p in &mut m.params[r] {
                *p = rng.random_range(-k..k);
            }
        }
        let forget = layout.b.start + FORGET * hidden_dim;
        m.params[forget..forget + hidden_dim].fill(1.0);
        m
    }

    pub(crate) fn from_parts(input_dim: usize, hidden_dim: usize, params: Vec<f64>, scaler: Scaler) -> Result<Self> {
        let expect = Layout::new(input_dim, hidden_dim).len();
        if params.len() != expect {
            return Err(Error::Dimension(format!(
                "LSTM {input_dim}x{hidden_dim} needs {expect} parameters, got {}",
                params.len()
            )));
        }
        if scaler.mean.len() != input_dim || scaler.scale.len() != input_dim {
            return Err(Error::Dimension("scaler length differs from input dimension".into()));
        }
        if params.iter().chain(&scaler.mean).any(|p| !p.is_finite())
            || scaler.scale.iter().any(|s| !(s.is_finite() && *s > 0.0))
        {
            return Err(Error::InvalidParameter(
                "non-finite parameter or non-positive scale".into(),
            ));
        }
        Ok(Self {
            input_dim,
            hidden_dim,
            params,
            scaler,
        })
    }

    fn layout(&self) -> Layout {
        Layout::new(self.input_dim, self.hidden_dim)
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn hidden_dim(&self) -> usize {
        self.hidden_dim
    }

    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn readout_bias(&self) -> &[f64] {
        &self.params[self.layout().b_r]
    }

    pub fn readout_bias_mut(&mut self) -> &mut [f64] {
        let r = self.layout().b_r;
        &mut self.params[r]
    }

    /// Index of the readout bias block inside [`params`](Self::params).
    pub fn readout_bias_range(&self) -> Range<usize> {
        self.layout().b_r
    }

    pub fn initial_state(&self) -> LstmState {
        LstmState {
            hidden: vec![0.0; self.hidden_dim],
            cell: vec![0.0; self.hidden_dim],
        }
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.input_dim {
            return Err(Error::Dimension(format!(
                "input has {} features, model expects {}",
                x.len(),
                self.input_dim
            )));
        }
        Ok(())
    }

    /// Gate pre-activations, then activations in place; returns `4H` values.
    fn gates(&self, x: &[f64], h_prev: &[f64]) -> Vec<f64> {
        let l = self.layout();
        let hd = self.hidden_dim;
        let mut z = self.params[l.b.clone()].to_vec();
        matvec_acc(&mut z, &self.params[l.w_x], x);
        matvec_acc(&mut z, &self.params[l.w_h], h_prev);
        for (g, chunk) in z.chunks_exact_mut(hd).enumerate() {
            if g == CAND {
                chunk.iter_mut().for_each(|v| *v = v.tanh());
            } else {
                chunk.iter_mut().for_each(|v| *v = sigmoid(*v));
            }
        }
        z
    }

    fn readout(&self, h: &[f64]) -> Vec<f64> {
        let l = self.layout();
        let mut y = self.params[l.b_r].to_vec();
        matvec_acc(&mut y, &self.params[l.w_r], h);
        y
    }

    /// Advances `state` by one input and returns the readout.
    pub fn step(&self, state: &mut LstmState, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        let hd = self.hidden_dim;
        let g = self.gates(x, &state.hidden);
        for j in 0..hd {
            let c = g[FORGET * hd + j] * state.cell[j] + g[INPUT * hd + j] * g[CAND * hd + j];
            state.cell[j] = c;
            state.hidden[j] = g[OUTPUT * hd + j] * c.tanh();
        }
        Ok(self.readout(&state.hidden))
    }

    fn trace(&self, inputs: &[Vec<f64>]) -> Result<Trace> {
        let hd = self.hidden_dim;
        let steps = inputs.len();
        let mut tr = Trace {
            gates: Vec::with_capacity(steps * 4 * hd),
            cells: Vec::with_capacity(steps * hd),
            hiddens: Vec::with_capacity(steps * hd),
            outputs: Vec::with_capacity(steps),
        };
        let mut state = self.initial_state();
        for x in inputs {
            self.check_input(x)?;
            let g = self.gates(x, &state.hidden);
            for j in 0..hd {
                state.cell[j] = g[FORGET * hd + j] * state.cell[j] + g[INPUT * hd + j] * g[CAND * hd + j];
                state.hidden[j] = g[OUTPUT * hd + j] * state.cell[j].tanh();
            }
            tr.gates.extend_from_slice(&g);
            tr.cells.extend_from_slice(&state.cell);
            tr.hiddens.extend_from_slice(&state.hidden);
            tr.outputs.push(self.readout(&state.hidden));
        }
        Ok(tr)
    }

    /// Mean squared error of `outputs[t]` against `targets[t]` over the
    /// steps in `scored`, averaged over steps and features.
    pub fn sequence_loss(&self, inputs: &[Vec<f64>], targets: &[Vec<f64>], scored: Range<usize>) -> Result<f64> {
        check_pairs(inputs, targets, &scored)?;
        let mut state = self.initial_state();
        let mut sum = 0.0;
        for (t, x) in inputs.iter().enumerate().take(scored.end) {
            let y = self.step(&mut state, x)?;
            if t >= scored.start {
                sum += sq_err(&y, &targets[t]);
            }
        }
        Ok(sum / (scored.len() * self.input_dim) as f64)
    }

    /// Loss over every step and its gradient with respect to
    /// [`params`](Self::params).
    pub fn loss_and_grad(&self, inputs: &[Vec<f64>], targets: &[Vec<f64>]) -> Result<(f64, Vec<f64>)> {
        check_pairs(inputs, targets, &(0..inputs.len()))?;
        let hd = self.hidden_dim;
        let f = self.input_dim;
        let l = self.layout();
        let tr = self.trace(inputs)?;
        let steps = inputs.len();
        let norm = (steps * f) as f64;

        let mut grad = vec![0.0; self.params.len()];
        let mut loss = 0.0;
        let mut dh_next = vec![0.0; hd];
        let mut dc_next = vec![0.0; hd];
        let mut dh = vec![0.0; hd];
        let mut dz = vec![0.0; 4 * hd];
        let zeros = vec![0.0; hd];
        let w_r = &self.params[l.w_r.clone()];
        let w_h = &self.params[l.w_h.clone()];

        for t in (0..steps).rev() {
            let y = &tr.outputs[t];
            loss += sq_err(y, &targets[t]);
            let dy: Vec<f64> = y.iter().zip(&targets[t]).map(|(p, q)| 2.0 * (p - q) / norm).collect();

            let h_t = &tr.hiddens[t * hd..(t + 1) * hd];
            let c_t = &tr.cells[t * hd..(t + 1) * hd];
            let (h_prev, c_prev) = if t == 0 {
                (&zeros[..], &zeros[..])
            } else {
                (&tr.hiddens[(t - 1) * hd..t * hd], &tr.cells[(t - 1) * hd..t * hd])
            };
            let g = &tr.gates[t * 4 * hd..(t + 1) * 4 * hd];

            outer_acc(&mut grad[l.w_r.clone()], &dy, h_t);
            for (gb, d) in grad[l.b_r.clone()].iter_mut().zip(&dy) {
                *gb += d;
            }

            dh.copy_from_slice(&dh_next);
            matvec_t_acc(&mut dh, w_r, &dy);

            for j in 0..hd {
                let (fg, ig, cg, og) = (
                    g[FORGET * hd + j],
                    g[INPUT * hd + j],
                    g[CAND * hd + j],
                    g[OUTPUT * hd + j],
                );
                let tc = c_t[j].tanh();
                let dc = dh[j] * og * (1.0 - tc * tc) + dc_next[j];
                dz[OUTPUT * hd + j] = dh[j] * tc * og * (1.0 - og);
                dz[FORGET * hd + j] = dc * c_prev[j] * fg * (1.0 - fg);
                dz[INPUT * hd + j] = dc * cg * ig * (1.0 - ig);
                dz[CAND * hd + j] = dc * ig * (1.0 - cg * cg);
                dc_next[j] = dc * fg;
            }

            outer_acc(&mut grad[l.w_x.clone()], &dz, &inputs[t]);
            outer_acc(&mut grad[l.w_h.clone()], &dz, h_prev);
            for (gb, d) in grad[l.b.clone()].iter_mut().zip(&dz) {
                *gb += d;
            }
            dh_next.fill(0.0);
            matvec_t_acc(&mut dh_next, w_h, &dz);
        }
        Ok((loss / norm, grad))
    }
}

fn sq_err(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum()
}

fn check_pairs(inputs: &[Vec<f64>], targets: &[Vec<f64>], scored: &Range<usize>) -> Result<()> {
    if inputs.is_empty() {
        return Err(Error::InvalidParameter("empty input sequence".into()));
    }
    if targets.len() != inputs.len() {
        return Err(Error::Dimension(format!(
            "{} inputs but {} targets",
            inputs.len(),
            targets.len()
        )));
    }
    if scored.is_empty() || scored.end > inputs.len() {
        return Err(Error::InvalidParameter(format!(
            "scored range {scored:?} invalid for {} steps",
            inputs.len()
        )));
    }
    Ok(())
}

/// Runs the recurrence from a zero state over `sequence`; returns the hidden
/// states and readouts for every step.
pub fn lstm_forward(model: &LstmModel, sequence: &[Vec<f64>]) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    if sequence.is_empty() {
        return Err(Error::InvalidParameter("empty input sequence".into()));
    }
    let mut state = model.initial_state();
    let mut hidden = Vec::with_capacity(sequence.len());
    let mut outputs = Vec::with_capacity(sequence.len());
    for x in sequence {
        outputs.push(model.step(&mut state, x)?);
        hidden.push(state.hidden.clone());
    }
    Ok((hidden, outputs))
}

/// Largest relative disagreement between the analytic gradient and central
/// finite differences. Relative error is `|a - n| / max(|a|, |n|, 1e-6)`, so
/// gradients below 1e-6 are compared on an absolute scale.
pub fn gradient_check(model: &LstmModel, inputs: &[Vec<f64>], targets: &[Vec<f64>], epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let (_, analytic) = model.loss_and_grad(inputs, targets)?;
    let all = 0..inputs.len();
    let mut probe = model.clone();
    let mut worst = 0.0f64;
    for (p, a) in analytic.iter().enumerate() {
        let orig = probe.params[p];
        probe.params[p] = orig + epsilon;
        let up = probe.sequence_loss(inputs, targets, all.clone())?;
        probe.params[p] = orig - epsilon;
        let down = probe.sequence_loss(inputs, targets, all.clone())?;
        probe.params[p] = orig;
        let numeric = (up - down) / (2.0 * epsilon);
        let denom = a.abs().max(numeric.abs()).max(1e-6);
        worst = worst.max((a - numeric).abs() / denom);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_seq(len: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = SeededRng::new(seed, 99);
        (0..len)
            .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect()
    }

    #[test]
    fn zero_parameters_emit_readout_bias() {
        let mut m = LstmModel::zeros(3, 2);
        m.readout_bias_mut().copy_from_slice(&[0.5, -1.0, 2.0]);
        let (_, out) = lstm_forward(&m, &random_seq(4, 3, 1)).unwrap();
        for y in out {
            assert_eq!(y, vec![0.5, -1.0, 2.0]);
        }
    }

    #[test]
    fn hand_unrolled_scalar_cell() {
        // H = F = 1. Parameter order: w_x[f,i,c,o], w_h[f,i,c,o], b[f,i,c,o], w_r, b_r.
        let params = vec![
            0.5, -0.3, 0.8, 0.2, 0.1, 0.4, -0.6, 0.7, 0.05, -0.1, 0.2, 0.3, 1.5, -0.25,
        ];
        let m = LstmModel::from_parts(1, 1, params, Scaler::identity(1)).unwrap();
        let xs = [0.9, -0.4];

        let sig = |v: f64| 1.0 / (1.0 + (-v).exp());
        let (mut h, mut c) = (0.0f64, 0.0f64);
        let mut expect = Vec::new();
        for x in xs {
            let f = sig(0.5 * x + 0.1 * h + 0.05);
            let i = sig(-0.3 * x + 0.4 * h - 0.1);
            let g = (0.8 * x - 0.6 * h + 0.2).tanh();
            let o = sig(0.2 * x + 0.7 * h + 0.3);
            c = f * c + i * g;
            h = o * c.tanh();
            expect.push(1.5 * h - 0.25);
        }
        let seq: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        let (hidden, out) = lstm_forward(&m, &seq).unwrap();
        assert!((hidden[1][0] - h).abs() < 1e-15);
        for (y, e) in out.iter().zip(&expect) {
            assert!((y[0] - e).abs() < 1e-15, "{} vs {e}", y[0]);
        }
    }

    #[test]
    fn forward_is_pure() {
        let m = LstmModel::random(4, 3, 1, 0);
        let seq = random_seq(5, 4, 2);
        assert_eq!(lstm_forward(&m, &seq).unwrap(), lstm_forward(&m, &seq).unwrap());
    }

    #[test]
    fn forward_rejects_wrong_width() {
        let m = LstmModel::zeros(3, 2);
        assert!(matches!(lstm_forward(&m, &[vec![1.0, 2.0]]), Err(Error::Dimension(_))));
        assert!(lstm_forward(&m, &[]).is_err());
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let m = LstmModel::random(5, 4, 3, 0);
        let xs = random_seq(6, 5, 4);
        let ys = random_seq(6, 5, 5);
        let err = gradient_check(&m, &xs, &ys, 1e-5).unwrap();
        assert!(err < 1e-4, "max relative error {err}");
    }

    #[test]
    fn readout_bias_gradient_closed_form() {
        let m = LstmModel::random(3, 2, 8, 0);
        let x = vec![vec![0.4, -0.2, 1.0]];
        let (_, out) = lstm_forward(&m, &x).unwrap();
        let (_, grad) = m.loss_and_grad(&x, &x).unwrap();
        for (k, g) in grad[m.readout_bias_range()].iter().enumerate() {
            let expect = 2.0 * (out[0][k] - x[0][k]) / 3.0;
            assert!((g - expect).abs() < 1e-8, "{g} vs {expect}");
        }
    }

    #[test]
    fn gradient_check_is_deterministic() {
        let m = LstmModel::random(2, 2, 9, 0);
        let xs = random_seq(3, 2, 1);
        let a = gradient_check(&m, &xs, &xs, 1e-5).unwrap();
        let b = gradient_check(&m, &xs, &xs, 1e-5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn scaler_round_trip_and_constant_feature() {
        let rows = vec![vec![1.0, 5.0], vec![3.0, 5.0]];
        let s = Scaler::fit(&rows);
        assert_eq!(s.mean, vec![2.0, 5.0]);
        assert_eq!(s.scale, vec![1.0, 1.0]);
        let z = s.forward(&[3.0, 5.0]);
        assert_eq!(z, vec![1.0, 0.0]);
        assert_eq!(s.inverse(&z), vec![3.0, 5.0]);
    }
}
