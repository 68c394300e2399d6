//! Sequence-level objectives over per-token log-probabilities.
//!
//! The generator itself lives elsewhere; these kernels take the
//! log-probabilities it produced and return scalar losses:
//!
//! * `L_LM  = -Σ log p(S_i | S_<i, E(T, H))` over the reference tokens,
//! * `L_RL  = -R(S, S') Σ log p(S'_i | S'_<i, E(T, H))` over a sampled
//!   sequence, with `R` the smoothed sentence BLEU on [0, 1],
//! * `L_mix = L_LM + L_RL`.
//!
//! Losses are per-sequence sums. [`Reduction::Mean`] divides by the token
//! count instead.

use serde::{Deserialize, Serialize};

use crate::error::LossError;
use crate::metrics::sentence_bleu_smoothed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TokenLogProbs(Vec<f64>);

impl TokenLogProbs {
    pub fn new(values: Vec<f64>) -> Result<Self, LossError> {
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| v.is_nan() || **v > 0.0) {
            return Err(LossError::PositiveLogProb { index, value });
        }
        Ok(TokenLogProbs(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn neg_sum(&self) -> f64 {
        -self.0.iter().sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reduction {
    #[default]
    Sum,
    Mean,
}

impl Reduction {
    fn apply(self, total: f64, n: usize) -> f64 {
        match self {
            Reduction::Sum => total,
            Reduction::Mean if n == 0 => 0.0,
            Reduction::Mean => total / n as f64,
        }
    }
}

pub fn lm_loss(lp: &TokenLogProbs) -> f64 {
    lm_loss_with(lp, Reduction::Sum)
}

pub fn lm_loss_with(lp: &TokenLogProbs, reduction: Reduction) -> f64 {
    reduction.apply(lp.neg_sum(), lp.len())
}

pub fn rl_loss(lp_sampled: &TokenLogProbs, reward: f64) -> Result<f64, LossError> {
    rl_loss_with(lp_sampled, reward, Reduction::Sum)
}

pub fn rl_loss_with(lp_sampled: &TokenLogProbs, reward: f64, reduction: Reduction) -> Result<f64, LossError> {
    if !(0.0..=1.0).contains(&reward) {
        return Err(LossError::RewardOutOfRange(reward));
    }
    Ok(reduction.apply(reward * lp_sampled.neg_sum(), lp_sampled.len()))
}

/// `R(S, S')`: smoothed sentence BLEU of the sample against the reference.
pub fn reward(reference: &str, sample: &str) -> f64 {
    sentence_bleu_smoothed(sample, reference)
}

pub fn mix_loss(lm: f64, rl: f64) -> Result<f64, LossError> {
    for v in [lm, rl] {
        if v < 0.0 {
            return Err(LossError::NegativeLoss(v));
        }
    }
    Ok(lm + rl)
}

/// One row of batch input.
#[derive(Debug, Clone, Deserialize)]
pub struct LossRow {
    pub logprobs: Vec<f64>,
    pub sampled_logprobs: Vec<f64>,
    pub reference: String,
    pub sample: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LossOutput {
    pub lm: f64,
    pub rl: f64,
    pub mix: f64,
    pub reward: f64,
}

pub fn evaluate_row(row: &LossRow, reduction: Reduction) -> Result<LossOutput, LossError> {
    let lp = TokenLogProbs::new(row.logprobs.clone())?;
    let sampled = TokenLogProbs::new(row.sampled_logprobs.clone())?;
    let r = reward(&row.reference, &row.sample);
    let lm = lm_loss_with(&lp, reduction);
    let rl = rl_loss_with(&sampled, r, reduction)?;
    Ok(LossOutput {
        lm,
        rl,
        mix: mix_loss(lm, rl)?,
        reward: r,
    })
}
