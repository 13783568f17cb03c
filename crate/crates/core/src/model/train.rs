use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::lstm::{encode, forward_inputs, loss_and_grads_inputs, Mode, Sequence};
use super::{EpochRecord, ModelCheckpoint, ModelConfig, ModelError};
use crate::analysis::{build_cfg, step_features, StepFeatures};
use crate::cobol::CobolAst;
use crate::transpile::{Action, ActionLabel};

#[derive(Debug, Clone, PartialEq)]
pub struct TrainSample {
    pub steps: StepFeatures,
    pub labels: Vec<ActionLabel>,
    /// 1.0 on statement nodes, 0.0 elsewhere.
    pub weight: Vec<f64>,
}

/// Builds a sample from per-statement labels. Statements without a label
/// keep weight 0. Returns None when nothing is labelled.
pub fn sample_from(ast: &CobolAst, labels: &[Action]) -> Option<TrainSample> {
    let steps = step_features(ast, &build_cfg(ast));
    let mut out_labels = vec![ActionLabel::PassThrough; steps.len()];
    let mut weight = vec![0.0; steps.len()];
    for a in labels {
        if steps.is_statement.get(a.stmt_ref) == Some(&true) {
            out_labels[a.stmt_ref] = a.action;
            weight[a.stmt_ref] = 1.0;
        }
    }
    weight.iter().any(|&w| w > 0.0).then_some(TrainSample { steps, labels: out_labels, weight })
}

struct Encoded {
    inputs: Vec<Vec<f64>>,
    targets: Vec<usize>,
    weights: Vec<f64>,
}

impl Encoded {
    fn of(s: &TrainSample) -> Self {
        Self { inputs: encode(&s.steps), targets: s.labels.iter().map(|l| l.class()).collect(), weights: s.weight.clone() }
    }

    fn seq(&self) -> Sequence<'_> {
        Sequence { inputs: &self.inputs, targets: &self.targets, weights: &self.weights }
    }
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = i;
        }
    }
    best
}

fn encoded_accuracy(data: &[Encoded], ckpt: &ModelCheckpoint) -> Result<f64, ModelError> {
    let (mut hit, mut total) = (0.0, 0.0);
    for s in data {
        let out = forward_inputs(&s.inputs, ckpt, Mode::Eval)?;
        for (t, z) in out.logits.iter().enumerate() {
            if s.weights[t] > 0.0 {
                total += s.weights[t];
                if argmax(z) == s.targets[t] {
                    hit += s.weights[t];
                }
            }
        }
    }
    Ok(if total == 0.0 { 0.0 } else { hit / total })
}

/// Weighted fraction of labelled steps whose argmax class matches.
pub fn accuracy(data: &[TrainSample], ckpt: &ModelCheckpoint) -> Result<f64, ModelError> {
    let enc: Vec<Encoded> = data.iter().map(Encoded::of).collect();
    encoded_accuracy(&enc, ckpt)
}

struct Adam {
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    t: i32,
}

const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;
const EPS: f64 = 1e-8;

impl Adam {
    fn new(ckpt: &ModelCheckpoint) -> Self {
        let zeros: Vec<Vec<f64>> = ckpt.tensors.iter().map(|t| vec![0.0; t.data.len()]).collect();
        Self { m: zeros.clone(), v: zeros, t: 0 }
    }

    fn step(&mut self, ckpt: &mut ModelCheckpoint, grads: &[Vec<f64>], lr: f64) {
        self.t += 1;
        let c1 = 1.0 - BETA1.powi(self.t);
        let c2 = 1.0 - BETA2.powi(self.t);
        for (ti, t) in ckpt.tensors.iter_mut().enumerate() {
            for j in 0..t.data.len() {
                let g = grads[ti][j];
                let m = &mut self.m[ti][j];
                let v = &mut self.v[ti][j];
                *m = BETA1 * *m + (1.0 - BETA1) * g;
                *v = BETA2 * *v + (1.0 - BETA2) * g * g;
                t.data[j] -= lr * (*m / c1) / ((*v / c2).sqrt() + EPS);
            }
        }
    }
}

pub fn train(dataset: &[TrainSample], config: &ModelConfig) -> Result<ModelCheckpoint, ModelError> {
    train_validated(dataset, &[], config)
}

/// Trains on `dataset`, recording accuracy on `validation` (when nonempty)
/// after every epoch. History entry 0 is the untrained model; entry `e` holds
/// the mean batch loss of epoch `e` and the accuracies after it.
pub fn train_validated(
    dataset: &[TrainSample],
    validation: &[TrainSample],
    config: &ModelConfig,
) -> Result<ModelCheckpoint, ModelError> {
    if dataset.is_empty() {
        return Err(ModelError::NoData);
    }
    let mut ckpt = ModelCheckpoint::init(config)?;
    let data: Vec<Encoded> = dataset.iter().map(Encoded::of).collect();
    let val: Vec<Encoded> = validation.iter().map(Encoded::of).collect();
    let mut adam = Adam::new(&ckpt);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5eed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let seqs: Vec<Sequence<'_>> = data.iter().map(Encoded::seq).collect();
    let initial = loss_and_grads_inputs(&seqs, &ckpt, Mode::Eval)?.0;
    ckpt.history.push(EpochRecord {
        epoch: 0,
        loss: initial,
        train_accuracy: encoded_accuracy(&data, &ckpt)?,
        val_accuracy: if val.is_empty() { None } else { Some(encoded_accuracy(&val, &ckpt)?) },
    });
    for epoch in 1..=config.epochs {
        order.shuffle(&mut rng);
        let (mut loss_sum, mut weight_sum) = (0.0, 0.0);
        for chunk in order.chunks(config.batch) {
            let batch: Vec<Sequence<'_>> = chunk.iter().map(|&i| data[i].seq()).collect();
            let w: f64 = chunk.iter().flat_map(|&i| data[i].weights.iter()).sum();
            let (loss, grads) = loss_and_grads_inputs(&batch, &ckpt, Mode::Train(&mut rng))?;
            if !loss.is_finite() || grads.iter().flatten().any(|g| !g.is_finite()) {
                return Err(ModelError::Divergence { epoch });
            }
            loss_sum += loss * w;
            weight_sum += w;
            adam.step(&mut ckpt, &grads, config.lr);
        }
        let train_accuracy = encoded_accuracy(&data, &ckpt)?;
        let val_accuracy = if val.is_empty() { None } else { Some(encoded_accuracy(&val, &ckpt)?) };
        ckpt.history.push(EpochRecord { epoch, loss: loss_sum / weight_sum, train_accuracy, val_accuracy });
    }
    Ok(ckpt)
}
