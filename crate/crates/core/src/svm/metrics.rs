use serde::Serialize;

use crate::error::{Error, Result};
use crate::svm::dataset::LabeledDataset;
use crate::svm::model::{Label, SvmModel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Accuracy {
    pub accuracy: f64,
    /// Mean of the two per-class recalls. A class absent from the data
    /// contributes a recall of 0.
    pub balanced_accuracy: f64,
    pub true_pos: usize,
    pub false_neg: usize,
    pub true_neg: usize,
    pub false_pos: usize,
}

pub fn accuracy_scores(m: &SvmModel, data: &LabeledDataset) -> Result<Accuracy> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let predictions = data
        .rows()
        .iter()
        .map(|r| m.classify(r))
        .collect::<Result<Vec<_>>>()?;
    Ok(scores_from_predictions(&predictions, data.labels()))
}

pub fn balanced_accuracy(m: &SvmModel, data: &LabeledDataset) -> Result<f64> {
    Ok(accuracy_scores(m, data)?.balanced_accuracy)
}

pub(crate) fn scores_from_predictions(pred: &[Label], truth: &[Label]) -> Accuracy {
    let (mut tp, mut fneg, mut tn, mut fpos) = (0, 0, 0, 0);
    for (p, t) in pred.iter().zip(truth) {
        match (t, p) {
            (Label::Positive, Label::Positive) => tp += 1,
            (Label::Positive, Label::Negative) => fneg += 1,
            (Label::Negative, Label::Negative) => tn += 1,
            (Label::Negative, Label::Positive) => fpos += 1,
        }
    }
    let recall = |hit: usize, miss: usize, class: &str| {
        if hit + miss == 0 {
            log::warn!("no {class} samples; their recall term is taken as 0");
            0.0
        } else {
            hit as f64 / (hit + miss) as f64
        }
    };
    let pos_recall = recall(tp, fneg, "positive");
    let neg_recall = recall(tn, fpos, "negative");
    Accuracy {
        accuracy: (tp + tn) as f64 / truth.len() as f64,
        balanced_accuracy: 0.5 * (pos_recall + neg_recall),
        true_pos: tp,
        false_neg: fneg,
        true_neg: tn,
        false_pos: fpos,
    }
}
