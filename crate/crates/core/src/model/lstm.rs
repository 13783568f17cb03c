use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{ModelCheckpoint, ModelError, TrainSample};
use crate::analysis::StepFeatures;

pub enum Mode<'a> {
    Train(&'a mut ChaCha8Rng),
    Eval,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Forward {
    pub logits: Vec<Vec<f64>>,
    /// Top-layer hidden state per step.
    pub hidden: Vec<Vec<f64>>,
}

/// Feature rows with a signed log1p, which keeps counts like subtree size in
/// a range the gates can use.
pub fn encode(steps: &StepFeatures) -> Vec<Vec<f64>> {
    steps.rows().into_iter().map(|r| r.into_iter().map(|v| v.signum() * v.abs().ln_1p()).collect()).collect()
}

pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|v| (v - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

struct LayerCache {
    /// `[h_{t-1}, x_t]` per step.
    z: Vec<Vec<f64>>,
    /// Activated gates `i f o c~` per step.
    gates: Vec<[Vec<f64>; 4]>,
    c: Vec<Vec<f64>>,
    tanh_c: Vec<Vec<f64>>,
    h: Vec<Vec<f64>>,
    /// Inverted-dropout mask applied to this layer's output, if any.
    mask: Option<Vec<Vec<f64>>>,
}

fn run(inputs: &[Vec<f64>], ckpt: &ModelCheckpoint, mut mode: Mode<'_>) -> Result<(Vec<Vec<f64>>, Vec<LayerCache>), ModelError> {
    let cfg = &ckpt.config;
    ckpt.check_shapes()?;
    if let Some((t, row)) = inputs.iter().enumerate().find(|(_, r)| r.len() != cfg.input_dim) {
        return Err(ModelError::Shape(format!("step {t} has {} features, model expects {}", row.len(), cfg.input_dim)));
    }
    let hsz = cfg.hidden;
    let mut layer_in: Vec<Vec<f64>> = inputs.to_vec();
    let mut caches = Vec::with_capacity(cfg.layers);
    for l in 0..cfg.layers {
        let mut cache = LayerCache { z: vec![], gates: vec![], c: vec![], tanh_c: vec![], h: vec![], mask: None };
        let mut h = vec![0.0; hsz];
        let mut c = vec![0.0; hsz];
        for x in &layer_in {
            let mut z = h.clone();
            z.extend_from_slice(x);
            let act = |g: usize| -> Vec<f64> {
                let w = ckpt.gate(l, g);
                let b = &ckpt.bias(l, g).data;
                (0..hsz)
                    .map(|r| {
                        let row = &w.data[r * w.cols..(r + 1) * w.cols];
                        let a = b[r] + row.iter().zip(&z).map(|(p, q)| p * q).sum::<f64>();
                        if g == 3 {
                            a.tanh()
                        } else {
                            sigmoid(a)
                        }
                    })
                    .collect()
            };
            let gates = [act(0), act(1), act(2), act(3)];
            for r in 0..hsz {
                c[r] = gates[1][r] * c[r] + gates[0][r] * gates[3][r];
            }
            let tanh_c: Vec<f64> = c.iter().map(|v| v.tanh()).collect();
            h = (0..hsz).map(|r| gates[2][r] * tanh_c[r]).collect();
            cache.z.push(z);
            cache.gates.push(gates);
            cache.c.push(c.clone());
            cache.tanh_c.push(tanh_c);
            cache.h.push(h.clone());
        }
        layer_in = cache.h.clone();
        if l + 1 < cfg.layers && cfg.dropout > 0.0 {
            if let Mode::Train(rng) = &mut mode {
                let keep = 1.0 - cfg.dropout;
                let mask: Vec<Vec<f64>> = (0..layer_in.len())
                    .map(|_| (0..hsz).map(|_| if rng.gen::<f64>() < keep { 1.0 / keep } else { 0.0 }).collect())
                    .collect();
                for (row, m) in layer_in.iter_mut().zip(&mask) {
                    for (v, k) in row.iter_mut().zip(m) {
                        *v *= k;
                    }
                }
                cache.mask = Some(mask);
            }
        }
        caches.push(cache);
    }
    let (wy, by) = (ckpt.w_y(), ckpt.b_y());
    let logits = layer_in
        .iter()
        .map(|h| {
            (0..wy.rows)
                .map(|k| by.data[k] + wy.data[k * wy.cols..(k + 1) * wy.cols].iter().zip(h).map(|(p, q)| p * q).sum::<f64>())
                .collect()
        })
        .collect();
    Ok((logits, caches))
}

pub fn forward_inputs(inputs: &[Vec<f64>], ckpt: &ModelCheckpoint, mode: Mode<'_>) -> Result<Forward, ModelError> {
    let (logits, mut caches) = run(inputs, ckpt, mode)?;
    let hidden = caches.pop().map(|c| c.h).unwrap_or_default();
    Ok(Forward { logits, hidden })
}

pub fn forward(steps: &StepFeatures, ckpt: &ModelCheckpoint, mode: Mode<'_>) -> Result<Forward, ModelError> {
    forward_inputs(&encode(steps), ckpt, mode)
}

fn backward(ckpt: &ModelCheckpoint, caches: &[LayerCache], dlogits: &[Vec<f64>], grads: &mut [Vec<f64>]) {
    let cfg = &ckpt.config;
    let hsz = cfg.hidden;
    let top = cfg.layers - 1;
    let wy = ckpt.w_y();
    let (iy, iby) = (cfg.layers * super::PER_LAYER, cfg.layers * super::PER_LAYER + 1);
    let steps = dlogits.len();
    let mut dh_out: Vec<Vec<f64>> = vec![vec![0.0; hsz]; steps];
    for t in 0..steps {
        let h = &caches[top].h[t];
        for k in 0..wy.rows {
            let d = dlogits[t][k];
            if d == 0.0 {
                continue;
            }
            grads[iby][k] += d;
            let row = &mut grads[iy][k * hsz..(k + 1) * hsz];
            for j in 0..hsz {
                row[j] += d * h[j];
                dh_out[t][j] += d * wy.data[k * hsz + j];
            }
        }
    }
    for l in (0..cfg.layers).rev() {
        let cache = &caches[l];
        let cols = ckpt.gate(l, 0).cols;
        let mut dx_all = vec![vec![0.0; cols - hsz]; steps];
        let mut dh_next = vec![0.0; hsz];
        let mut dc_next = vec![0.0; hsz];
        for t in (0..steps).rev() {
            let [gi, gf, go, gc] = &cache.gates[t];
            let mut da = [vec![0.0; hsz], vec![0.0; hsz], vec![0.0; hsz], vec![0.0; hsz]];
            for r in 0..hsz {
                let dh = dh_out[t][r] + dh_next[r];
                let tc = cache.tanh_c[t][r];
                let dc = dh * go[r] * (1.0 - tc * tc) + dc_next[r];
                let c_prev = if t == 0 { 0.0 } else { cache.c[t - 1][r] };
                da[0][r] = dc * gc[r] * gi[r] * (1.0 - gi[r]);
                da[1][r] = dc * c_prev * gf[r] * (1.0 - gf[r]);
                da[2][r] = dh * tc * go[r] * (1.0 - go[r]);
                da[3][r] = dc * gi[r] * (1.0 - gc[r] * gc[r]);
                dc_next[r] = dc * gf[r];
            }
            let z = &cache.z[t];
            let mut dz = vec![0.0; cols];
            for (g, dag) in da.iter().enumerate() {
                let wi = l * super::PER_LAYER + g;
                let w = &ckpt.gate(l, g).data;
                for r in 0..hsz {
                    let d = dag[r];
                    if d == 0.0 {
                        continue;
                    }
                    grads[wi + 4][r] += d;
                    let grow = &mut grads[wi][r * cols..(r + 1) * cols];
                    let wrow = &w[r * cols..(r + 1) * cols];
                    for j in 0..cols {
                        grow[j] += d * z[j];
                        dz[j] += d * wrow[j];
                    }
                }
            }
            dh_next.copy_from_slice(&dz[..hsz]);
            dx_all[t].copy_from_slice(&dz[hsz..]);
        }
        if l > 0 {
            if let Some(mask) = &caches[l - 1].mask {
                for (row, m) in dx_all.iter_mut().zip(mask) {
                    for (v, k) in row.iter_mut().zip(m) {
                        *v *= k;
                    }
                }
            }
            dh_out = dx_all;
        }
    }
}

/// One labelled sequence in encoded form.
pub struct Sequence<'a> {
    pub inputs: &'a [Vec<f64>],
    pub targets: &'a [usize],
    pub weights: &'a [f64],
}

/// Samples processed per parallel work unit; sums are combined in a fixed
/// order so results do not depend on the thread count.
const CHUNK: usize = 4;

pub fn loss_and_grads_inputs(
    batch: &[Sequence<'_>],
    ckpt: &ModelCheckpoint,
    mode: Mode<'_>,
) -> Result<(f64, Vec<Vec<f64>>), ModelError> {
    let total: f64 = batch.iter().flat_map(|s| s.weights.iter()).sum();
    if batch.is_empty() || total <= 0.0 {
        return Err(ModelError::NoData);
    }
    for s in batch {
        if s.targets.len() != s.inputs.len() || s.weights.len() != s.inputs.len() {
            return Err(ModelError::Shape("labels and weights must match the step count".into()));
        }
        if let Some(&t) = s.targets.iter().find(|&&t| t >= ckpt.config.classes) {
            return Err(ModelError::Shape(format!("label class {t} out of range")));
        }
    }
    let dropout = match mode {
        Mode::Train(rng) => Some(batch.iter().map(|_| rng.gen::<u64>()).collect::<Vec<_>>()),
        Mode::Eval => None,
    };
    let zero_grads = || ckpt.tensors.iter().map(|t| vec![0.0; t.data.len()]).collect::<Vec<_>>();
    let idx: Vec<usize> = (0..batch.len()).collect();
    let parts: Vec<Result<(f64, Vec<Vec<f64>>), ModelError>> = idx
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut grads = zero_grads();
            let mut loss = 0.0;
            for &i in chunk {
                let s = &batch[i];
                let mut rng;
                let mode = match &dropout {
                    Some(seeds) => {
                        rng = ChaCha8Rng::seed_from_u64(seeds[i]);
                        Mode::Train(&mut rng)
                    }
                    None => Mode::Eval,
                };
                let (logits, caches) = run(s.inputs, ckpt, mode)?;
                let dlogits: Vec<Vec<f64>> = logits
                    .iter()
                    .enumerate()
                    .map(|(t, z)| {
                        let w = s.weights[t];
                        if w == 0.0 {
                            return vec![0.0; z.len()];
                        }
                        let mut p = softmax(z);
                        loss -= w * p[s.targets[t]].ln();
                        for v in &mut p {
                            *v *= w / total;
                        }
                        p[s.targets[t]] -= w / total;
                        p
                    })
                    .collect();
                backward(ckpt, &caches, &dlogits, &mut grads);
            }
            Ok((loss, grads))
        })
        .collect();
    let mut grads = zero_grads();
    let mut loss = 0.0;
    for part in parts {
        let (l, g) = part?;
        loss += l;
        for (acc, add) in grads.iter_mut().zip(g) {
            for (a, b) in acc.iter_mut().zip(add) {
                *a += b;
            }
        }
    }
    Ok((loss / total, grads))
}

/// Weighted mean cross-entropy over every labelled step of the batch, and its
/// exact gradient for each tensor of `ckpt`.
pub fn loss_and_grads(batch: &[TrainSample], ckpt: &ModelCheckpoint, mode: Mode<'_>) -> Result<(f64, Vec<Vec<f64>>), ModelError> {
    let encoded: Vec<(Vec<Vec<f64>>, Vec<usize>)> =
        batch.iter().map(|s| (encode(&s.steps), s.labels.iter().map(|l| l.class()).collect())).collect();
    let seqs: Vec<Sequence<'_>> = encoded
        .iter()
        .zip(batch)
        .map(|((inputs, targets), s)| Sequence { inputs, targets, weights: &s.weight })
        .collect();
    loss_and_grads_inputs(&seqs, ckpt, mode)
}
