use serde::{Deserialize, Serialize};

use super::lstm::{forward, softmax, Mode};
use super::{ModelCheckpoint, ModelError};
use crate::analysis::{build_cfg, step_features, StepFeatures};
use crate::cobol::CobolAst;
use crate::transpile::{default_actions, Action, ActionLabel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub stmt_ref: usize,
    pub action: ActionLabel,
    /// Softmax probability of the argmax class.
    pub confidence: f64,
    /// Whether the model's label was kept (confidence reached the threshold).
    pub accepted: bool,
}

/// Per statement step: the argmax class, or `defaults` when its confidence is
/// below `tau`. A threshold of 1 or more suppresses every prediction.
pub fn predict_steps(
    steps: &StepFeatures,
    defaults: &[Action],
    ckpt: &ModelCheckpoint,
    tau: f64,
) -> Result<Vec<Prediction>, ModelError> {
    let out = forward(steps, ckpt, Mode::Eval)?;
    let mut preds = Vec::with_capacity(defaults.len());
    for d in defaults {
        let z = out
            .logits
            .get(d.stmt_ref)
            .ok_or_else(|| ModelError::Shape(format!("statement {} beyond {} steps", d.stmt_ref, out.logits.len())))?;
        let p = softmax(z);
        let (class, confidence) =
            p.iter().copied().enumerate().fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best });
        let accepted = tau < 1.0 && confidence >= tau;
        let action =
            if accepted { ActionLabel::from_class(class, d.stmt_ref).unwrap_or(d.action) } else { d.action };
        preds.push(Prediction { stmt_ref: d.stmt_ref, action, confidence, accepted });
    }
    Ok(preds)
}

pub fn predict(ast: &CobolAst, ckpt: &ModelCheckpoint, tau: f64) -> Result<Vec<Prediction>, ModelError> {
    let steps = step_features(ast, &build_cfg(ast));
    predict_steps(&steps, &default_actions(ast), ckpt, tau)
}

pub fn to_actions(preds: &[Prediction]) -> Vec<Action> {
    preds.iter().map(|p| Action::new(p.stmt_ref, p.action)).collect()
}
