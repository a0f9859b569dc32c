use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::svm::metrics::scores_from_predictions;
use crate::svm::{FeatureSchema, Label, LabeledDataset, SvmModel};

/// A unit of shuffling: one numeric column or a whole category.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureGroup {
    pub name: String,
    pub columns: Vec<usize>,
}

/// Numeric features in column order, each category at the position of its
/// first member.
pub fn feature_groups(schema: &FeatureSchema) -> Vec<FeatureGroup> {
    let mut out = Vec::new();
    for (i, f) in schema.features().iter().enumerate() {
        match schema.tier_of(i) {
            None => out.push(FeatureGroup {
                name: f.name.clone(),
                columns: vec![i],
            }),
            Some(c) if c.start == i => out.push(FeatureGroup {
                name: c.name.clone(),
                columns: c.columns().collect(),
            }),
            Some(_) => {}
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PfiReport {
    pub groups: Vec<FeatureGroup>,
    pub baseline_accuracy: f64,
    /// Mean accuracy drop per group.
    pub importances: Vec<f64>,
    pub n_repeat: usize,
    pub seed: u64,
}

fn accuracy(m: &SvmModel, rows: &[Vec<f64>], labels: &[Label]) -> f64 {
    let pred: Vec<Label> = rows
        .iter()
        .map(|r| Label::from_decision(m.decision_value_unchecked(r)))
        .collect();
    scores_from_predictions(&pred, labels).accuracy
}

/// Permutation feature importance. Every (group, repeat) pair draws its own
/// permutation from a ChaCha stream keyed by `seed`, so results do not depend
/// on scheduling.
pub fn pfi(m: &SvmModel, data: &LabeledDataset, n_repeat: usize, seed: u64) -> Result<PfiReport> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if n_repeat == 0 {
        return Err(Error::TooFewValues { needed: 1, got: 0 });
    }
    if data.rows()[0].len() != m.dimension() {
        return Err(Error::DimensionMismatch {
            expected: m.dimension(),
            actual: data.rows()[0].len(),
        });
    }
    let groups = feature_groups(m.schema());
    let baseline = accuracy(m, data.rows(), data.labels());
    let importances = groups
        .par_iter()
        .enumerate()
        .map(|(g, group)| {
            let drops: f64 = (0..n_repeat)
                .map(|r| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(((g as u64) << 32) | r as u64);
                    let mut perm: Vec<usize> = (0..data.len()).collect();
                    perm.shuffle(&mut rng);
                    let rows: Vec<Vec<f64>> = data
                        .rows()
                        .iter()
                        .enumerate()
                        .map(|(i, row)| {
                            let mut row = row.clone();
                            for &c in &group.columns {
                                row[c] = data.rows()[perm[i]][c];
                            }
                            row
                        })
                        .collect();
                    baseline - accuracy(m, &rows, data.labels())
                })
                .sum();
            drops / n_repeat as f64
        })
        .collect();
    Ok(PfiReport {
        groups,
        baseline_accuracy: baseline,
        importances,
        n_repeat,
        seed,
    })
}
