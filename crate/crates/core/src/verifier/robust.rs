use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::svm::{Label, LabeledDataset, SvmModel};
use crate::verifier::eval::{abstract_decision, OutputAbstraction};
use crate::verifier::region::{AbstractRegion, DomainTag, PerturbationSpec};

/// Nonempty set of labels an abstract output may take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LabelSet {
    Only(Label),
    Both,
}

impl LabelSet {
    pub fn contains(&self, l: Label) -> bool {
        match self {
            LabelSet::Only(x) => *x == l,
            LabelSet::Both => true,
        }
    }

    pub fn singleton(&self) -> Option<Label> {
        match self {
            LabelSet::Only(x) => Some(*x),
            LabelSet::Both => None,
        }
    }

    pub fn labels(&self) -> Vec<Label> {
        match self {
            LabelSet::Only(x) => vec![*x],
            LabelSet::Both => vec![Label::Negative, Label::Positive],
        }
    }
}

impl Serialize for LabelSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.labels().serialize(s)
    }
}

/// Labels admitted by the output range: a range touching 0 admits both.
pub fn abstract_classify(out: &OutputAbstraction) -> LabelSet {
    if out.range.strictly_negative() {
        LabelSet::Only(Label::Negative)
    } else if out.range.strictly_positive() {
        LabelSet::Only(Label::Positive)
    } else {
        LabelSet::Both
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationOutcome {
    pub labels: LabelSet,
    /// Label of the unperturbed sample.
    pub concrete: Label,
    pub proved_robust: bool,
    pub output: OutputAbstraction,
}

/// Verifies a prepared region around `x`.
pub fn verify_region(m: &SvmModel, x: &[f64], region: &AbstractRegion) -> Result<VerificationOutcome> {
    let concrete = m.classify(x)?;
    let output = abstract_decision(m, region)?;
    let labels = abstract_classify(&output);
    if !labels.contains(concrete) && region.contains(x, 1e-9) {
        return Err(Error::Invariant(format!(
            "abstract labels {:?} miss the concrete label {concrete} of the region's own sample",
            labels.labels()
        )));
    }
    Ok(VerificationOutcome {
        labels,
        concrete,
        proved_robust: labels == LabelSet::Only(concrete),
        output,
    })
}

pub fn verify_robust(
    m: &SvmModel,
    x: &[f64],
    spec: &PerturbationSpec,
    domain: DomainTag,
    oh_enabled: bool,
) -> Result<VerificationOutcome> {
    let region = AbstractRegion::build(x, spec, m.schema(), domain, oh_enabled)?;
    verify_region(m, x, &region)
}

/// Per-row outcomes in dataset order; rows run in parallel.
pub fn verify_dataset(
    m: &SvmModel,
    data: &LabeledDataset,
    spec: &PerturbationSpec,
    domain: DomainTag,
    oh_enabled: bool,
) -> Result<Vec<VerificationOutcome>> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    data.rows()
        .par_iter()
        .map(|x| verify_robust(m, x, spec, domain, oh_enabled))
        .collect()
}

/// Fraction of rows proved robust.
pub fn robustness_score(
    m: &SvmModel,
    data: &LabeledDataset,
    spec: &PerturbationSpec,
    domain: DomainTag,
    oh_enabled: bool,
) -> Result<f64> {
    let outcomes = verify_dataset(m, data, spec, domain, oh_enabled)?;
    Ok(proved_fraction(&outcomes))
}

pub(crate) fn proved_fraction(outcomes: &[VerificationOutcome]) -> f64 {
    outcomes.iter().filter(|o| o.proved_robust).count() as f64 / outcomes.len() as f64
}
