//! LSTM action classifier over per-node feature sequences.

mod io;
mod lstm;
mod predict;
mod train;

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::STEP_FEATURES;
use crate::transpile::ActionLabel;

pub use io::{from_bytes, load, save, to_bytes, FORMAT_VERSION, MAGIC};
pub use lstm::{encode, forward, forward_inputs, loss_and_grads, loss_and_grads_inputs, softmax, Forward, Mode};
pub use predict::{predict, predict_steps, to_actions, Prediction};
pub use train::{accuracy, sample_from, train, train_validated, TrainSample};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("training diverged at epoch {epoch}: loss is not finite")]
    Divergence { epoch: usize },
    #[error("bad checkpoint: {0}")]
    Format(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid config: {0}")]
    Config(String),
    #[error("no training samples")]
    NoData,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub layers: usize,
    pub hidden: usize,
    pub dropout: f64,
    pub lr: f64,
    pub epochs: usize,
    pub batch: usize,
    pub input_dim: usize,
    pub classes: usize,
    pub seed: u64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            layers: 1,
            hidden: 32,
            dropout: 0.3,
            lr: 0.001,
            epochs: 50,
            batch: 64,
            input_dim: STEP_FEATURES,
            classes: ActionLabel::CLASS_COUNT,
            seed: 42,
        }
    }
}

impl ModelConfig {
    /// Three layers of 256 units.
    pub fn paper_scale() -> Self {
        Self { layers: 3, hidden: 256, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let sizes = [self.layers, self.hidden, self.epochs, self.batch, self.input_dim, self.classes];
        if sizes.contains(&0) {
            return Err(ModelError::Config("layers, hidden, epochs, batch, input_dim and classes must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return Err(ModelError::Config(format!("dropout {} outside [0, 1)", self.dropout)));
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return Err(ModelError::Config(format!("learning rate {} must be positive", self.lr)));
        }
        Ok(())
    }

    /// Tensor names and shapes in storage order.
    pub fn shapes(&self) -> Vec<(String, usize, usize)> {
        let mut out = Vec::new();
        for l in 0..self.layers {
            let input = if l == 0 { self.input_dim } else { self.hidden };
            for g in GATES {
                out.push((format!("l{l}.W_{g}"), self.hidden, self.hidden + input));
            }
            for g in GATES {
                out.push((format!("l{l}.b_{g}"), self.hidden, 1));
            }
        }
        out.push(("W_y".into(), self.classes, self.hidden));
        out.push(("b_y".into(), self.classes, 1));
        out
    }
}

/// Gate order within a layer: input, forget, output, candidate.
pub const GATES: [&str; 4] = ["i", "f", "o", "c"];
const FORGET: usize = 1;
pub(crate) const PER_LAYER: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tensor {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Tensor {
    pub fn zeros(name: &str, rows: usize, cols: usize) -> Self {
        Self { name: name.to_string(), rows, cols, data: vec![0.0; rows * cols] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub loss: f64,
    pub train_accuracy: f64,
    pub val_accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelCheckpoint {
    pub config: ModelConfig,
    /// Per layer `W_i W_f W_o W_c b_i b_f b_o b_c`, then `W_y b_y`.
    pub tensors: Vec<Tensor>,
    pub history: Vec<EpochRecord>,
}

impl ModelCheckpoint {
    /// Uniform(-0.08, 0.08) weights, forget-gate bias 1.0, other biases 0.
    pub fn init(config: &ModelConfig) -> Result<Self, ModelError> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut tensors = Vec::new();
        for (name, rows, cols) in config.shapes() {
            let mut t = Tensor::zeros(&name, rows, cols);
            if name.contains(".b_") {
                if name.ends_with(&format!("b_{}", GATES[FORGET])) {
                    t.data.fill(1.0);
                }
            } else if name != "b_y" {
                for v in &mut t.data {
                    *v = rng.gen_range(-0.08..0.08);
                }
            }
            tensors.push(t);
        }
        Ok(Self { config: config.clone(), tensors, history: Vec::new() })
    }

    /// Same shapes, every parameter zero.
    pub fn zeros(config: &ModelConfig) -> Result<Self, ModelError> {
        config.validate()?;
        let tensors = config.shapes().into_iter().map(|(n, r, c)| Tensor::zeros(&n, r, c)).collect();
        Ok(Self { config: config.clone(), tensors, history: Vec::new() })
    }

    pub fn parameter_count(&self) -> usize {
        self.tensors.iter().map(|t| t.data.len()).sum()
    }

    pub(crate) fn gate(&self, layer: usize, g: usize) -> &Tensor {
        &self.tensors[layer * PER_LAYER + g]
    }

    pub(crate) fn bias(&self, layer: usize, g: usize) -> &Tensor {
        &self.tensors[layer * PER_LAYER + 4 + g]
    }

    pub(crate) fn w_y(&self) -> &Tensor {
        &self.tensors[self.config.layers * PER_LAYER]
    }

    pub(crate) fn b_y(&self) -> &Tensor {
        &self.tensors[self.config.layers * PER_LAYER + 1]
    }

    pub fn check_shapes(&self) -> Result<(), ModelError> {
        let expected = self.config.shapes();
        if expected.len() != self.tensors.len() {
            return Err(ModelError::Shape(format!("{} tensors, config needs {}", self.tensors.len(), expected.len())));
        }
        for ((name, rows, cols), t) in expected.iter().zip(&self.tensors) {
            if &t.name != name || t.rows != *rows || t.cols != *cols || t.data.len() != rows * cols {
                return Err(ModelError::Shape(format!(
                    "tensor {} is {}x{}, expected {name} {rows}x{cols}",
                    t.name, t.rows, t.cols
                )));
            }
        }
        Ok(())
    }
}
