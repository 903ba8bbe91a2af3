//! The 2-2-1 XOR perceptron and its backpropagation baseline.
//!
//! Hidden neurons use the logistic sigmoid `1/(1 + e^-x)`, the output neuron
//! is linear, and every neuron subtracts its bias: `u = w0 x0 + w1 x1 - theta`.
//! A pattern is classified as 1 when the output is at least 0.5.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

pub const THRESHOLD: f64 = 0.5;

/// `(x0, x1, target)` for the four XOR patterns.
pub const XOR: [(f64, f64, f64); 4] = [
    (0.0, 0.0, 0.0),
    (0.0, 1.0, 1.0),
    (1.0, 0.0, 1.0),
    (1.0, 1.0, 0.0),
];

/// Nine synaptic weights in the order
/// `w00, w01, w02, w10, w11, w12, w20, w21, w22`; the third weight of each
/// neuron is its bias.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MlpWeights(pub [f64; 9]);

impl MlpWeights {
    pub const LEN: usize = 9;

    pub fn zeros() -> Self {
        Self([0.0; 9])
    }

    pub fn from_slice(w: &[f64]) -> Result<Self> {
        let arr: [f64; 9] = w
            .try_into()
            .map_err(|_| Error::Config(format!("expected 9 weights, got {}", w.len())))?;
        Ok(Self(arr))
    }
}

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Hidden activation `sigmoid(w0 x0 + w1 x1 - bias)`.
#[inline]
pub fn hidden(w0: f64, w1: f64, bias: f64, x0: f64, x1: f64) -> f64 {
    sigmoid(w0 * x0 + w1 * x1 - bias)
}

/// Linear output `w20 h1 + w21 h2 - w22`.
#[inline]
pub fn output(w20: f64, w21: f64, bias: f64, h1: f64, h2: f64) -> f64 {
    w20 * h1 + w21 * h2 - bias
}

/// Neuron outputs `(y1, y2, y3)`.
pub fn forward(weights: &MlpWeights, x0: f64, x1: f64) -> (f64, f64, f64) {
    let w = &weights.0;
    let y1 = hidden(w[0], w[1], w[2], x0, x1);
    let y2 = hidden(w[3], w[4], w[5], x0, x1);
    (y1, y2, output(w[6], w[7], w[8], y1, y2))
}

pub fn classify(weights: &MlpWeights, x0: f64, x1: f64) -> u8 {
    u8::from(forward(weights, x0, x1).2 >= THRESHOLD)
}

/// Number of misclassified XOR patterns.
pub fn classification_error(weights: &MlpWeights) -> usize {
    XOR.iter()
        .filter(|&&(x0, x1, t)| f64::from(classify(weights, x0, x1)) != t)
        .count()
}

pub fn mse(weights: &MlpWeights) -> f64 {
    XOR.iter()
        .map(|&(x0, x1, t)| {
            let e = forward(weights, x0, x1).2 - t;
            e * e
        })
        .sum::<f64>()
        / XOR.len() as f64
}

/// Analytic gradient of [`mse`].
pub fn mse_gradient(weights: &MlpWeights) -> [f64; 9] {
    let w = &weights.0;
    let mut g = [0.0; 9];
    let scale = 2.0 / XOR.len() as f64;
    for &(x0, x1, t) in &XOR {
        let (h1, h2, y) = forward(weights, x0, x1);
        let dy = scale * (y - t);
        g[6] += dy * h1;
        g[7] += dy * h2;
        g[8] -= dy;
        let d1 = dy * w[6] * h1 * (1.0 - h1);
        let d2 = dy * w[7] * h2 * (1.0 - h2);
        g[0] += d1 * x0;
        g[1] += d1 * x1;
        g[2] -= d1;
        g[3] += d2 * x0;
        g[4] += d2 * x1;
        g[5] -= d2;
    }
    g
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BackpropConfig {
    pub learning_rate: f64,
    pub max_epochs: u64,
    pub stagnation_window: u64,
    pub init_range: f64,
    pub seed: u64,
}

impl Default for BackpropConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.5,
            max_epochs: 150_000,
            stagnation_window: 1000,
            init_range: 0.5,
            seed: 0,
        }
    }
}

impl BackpropConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if self.max_epochs == 0 {
            return Err(Error::Config("max_epochs must be >= 1".into()));
        }
        if !(self.init_range >= 0.0 && self.init_range.is_finite()) {
            return Err(Error::Config("init_range must be finite and >= 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrainOutcome {
    Success,
    EpochLimit,
    Stagnation,
}

impl std::fmt::Display for TrainOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TrainOutcome::Success => "success",
            TrainOutcome::EpochLimit => "epoch_limit",
            TrainOutcome::Stagnation => "stagnation",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainResult {
    pub outcome: TrainOutcome,
    pub epochs_used: u64,
    pub final_weights: MlpWeights,
    pub final_mse: f64,
}

/// Full-batch gradient descent on the XOR MSE.
///
/// Each epoch applies one update and then checks, in order: zero
/// classification error (success), MSE stagnation over
/// `stagnation_window` epochs (no improvement larger than 1e-12 on the best
/// value seen), and the epoch limit.
pub fn backprop_train(config: &BackpropConfig) -> Result<TrainResult> {
    config.validate()?;
    let mut init = rng::substream(config.seed, rng::BACKPROP_INIT);
    let r = config.init_range;
    let mut weights = MlpWeights([0.0; 9]);
    for w in weights.0.iter_mut() {
        *w = if r > 0.0 { init.gen_range(-r..=r) } else { 0.0 };
    }

    let mut best = mse(&weights);
    let mut since_best = 0u64;
    for epoch in 1..=config.max_epochs {
        let g = mse_gradient(&weights);
        for (w, gi) in weights.0.iter_mut().zip(g) {
            *w -= config.learning_rate * gi;
        }
        let current = mse(&weights);
        if classification_error(&weights) == 0 {
            return Ok(TrainResult {
                outcome: TrainOutcome::Success,
                epochs_used: epoch,
                final_weights: weights,
                final_mse: current,
            });
        }
        if current < best - 1e-12 {
            best = current;
            since_best = 0;
        } else {
            since_best += 1;
            if since_best >= config.stagnation_window {
                return Ok(TrainResult {
                    outcome: TrainOutcome::Stagnation,
                    epochs_used: epoch,
                    final_weights: weights,
                    final_mse: current,
                });
            }
        }
    }
    Ok(TrainResult {
        outcome: TrainOutcome::EpochLimit,
        epochs_used: config.max_epochs,
        final_weights: weights,
        final_mse: mse(&weights),
    })
}
