//! Individual fairness as robustness under a similarity-induced region.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::svm::{FeatureSchema, LabeledDataset, SvmModel};
use crate::verifier::{robust, DomainTag, PerturbationSpec, VerificationOutcome};

pub const DEFAULT_EPSILON: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimilarityKind {
    Noise,
    Cat,
    NoiseCat,
}

impl FromStr for SimilarityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "noise" => Ok(SimilarityKind::Noise),
            "cat" => Ok(SimilarityKind::Cat),
            "noise-cat" => Ok(SimilarityKind::NoiseCat),
            other => Err(Error::InvalidPerturbation(format!("unknown similarity `{other}`"))),
        }
    }
}

impl fmt::Display for SimilarityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimilarityKind::Noise => "noise",
            SimilarityKind::Cat => "cat",
            SimilarityKind::NoiseCat => "noise-cat",
        })
    }
}

/// A similarity relation `S`: which numeric features may move by up to
/// `epsilon`, and which categories count as sensitive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilaritySpec {
    pub kind: SimilarityKind,
    pub epsilon: f64,
    pub features: Vec<usize>,
    pub sensitive: Vec<String>,
}

impl SimilaritySpec {
    /// Noise on every numeric feature of the schema.
    pub fn noise(schema: &FeatureSchema, epsilon: f64) -> Self {
        SimilaritySpec {
            kind: SimilarityKind::Noise,
            epsilon,
            features: schema.numeric_indices(),
            sensitive: Vec::new(),
        }
    }

    pub fn cat(sensitive: Vec<String>) -> Self {
        SimilaritySpec {
            kind: SimilarityKind::Cat,
            epsilon: 0.0,
            features: Vec::new(),
            sensitive,
        }
    }

    pub fn noise_cat(schema: &FeatureSchema, epsilon: f64, sensitive: Vec<String>) -> Self {
        SimilaritySpec {
            kind: SimilarityKind::NoiseCat,
            epsilon,
            features: schema.numeric_indices(),
            sensitive,
        }
    }

    /// Builds the relation of the given kind over every numeric feature.
    pub fn of_kind(kind: SimilarityKind, schema: &FeatureSchema, epsilon: f64, sensitive: Vec<String>) -> Self {
        match kind {
            SimilarityKind::Noise => SimilaritySpec::noise(schema, epsilon),
            SimilarityKind::Cat => SimilaritySpec::cat(sensitive),
            SimilarityKind::NoiseCat => SimilaritySpec::noise_cat(schema, epsilon, sensitive),
        }
    }
}

/// `P_S(x)`: the region of points similar to `x`.
pub fn similarity_to_perturbation(s: &SimilaritySpec) -> PerturbationSpec {
    match s.kind {
        SimilarityKind::Noise => PerturbationSpec::LInfNoise {
            epsilon: s.epsilon,
            features: s.features.clone(),
        },
        SimilarityKind::Cat => PerturbationSpec::CatFree {
            categories: s.sensitive.clone(),
        },
        SimilarityKind::NoiseCat => PerturbationSpec::NoiseCat {
            epsilon: s.epsilon,
            features: s.features.clone(),
            categories: s.sensitive.clone(),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FairnessReport {
    pub lb: f64,
    pub outcomes: Vec<VerificationOutcome>,
}

/// Fraction of rows verified fair, with per-row outcomes in dataset order.
pub fn fairness_lower_bound(
    m: &SvmModel,
    data: &LabeledDataset,
    s: &SimilaritySpec,
    domain: DomainTag,
    oh_enabled: bool,
) -> Result<FairnessReport> {
    let spec = similarity_to_perturbation(s);
    let outcomes = robust::verify_dataset(m, data, &spec, domain, oh_enabled)?;
    Ok(FairnessReport {
        lb: robust::proved_fraction(&outcomes),
        outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn noise_on_first_feature() {
        let m = fixtures::toy_linear();
        let s = SimilaritySpec {
            kind: SimilarityKind::Noise,
            epsilon: 0.05,
            features: vec![0],
            sensitive: vec![],
        };
        let data = LabeledDataset::new(m.schema(), vec![vec![0.4, 0.9]], vec![crate::svm::Label::Negative]).unwrap();
        let r = fairness_lower_bound(&m, &data, &s, DomainTag::Raf, true).unwrap();
        assert_eq!(r.lb, 1.0);
        let range = r.outcomes[0].output.range;
        // 0.5·[0.35, 0.45] − 0.9
        assert!((range.lo() + 0.725).abs() < 1e-12);
        assert!((range.hi() + 0.675).abs() < 1e-12);
    }

    #[test]
    fn kinds_round_trip() {
        for k in [SimilarityKind::Noise, SimilarityKind::Cat, SimilarityKind::NoiseCat] {
            assert_eq!(k.to_string().parse::<SimilarityKind>().unwrap(), k);
        }
        assert!("gender".parse::<SimilarityKind>().is_err());
    }

    #[test]
    fn perturbation_shapes() {
        let schema = fixtures::toy_linear().schema().clone();
        assert!(matches!(
            similarity_to_perturbation(&SimilaritySpec::noise(&schema, 0.05)),
            PerturbationSpec::LInfNoise { epsilon, ref features } if epsilon == 0.05 && features == &[0, 1]
        ));
        assert!(matches!(
            similarity_to_perturbation(&SimilaritySpec::cat(vec!["sex".into()])),
            PerturbationSpec::CatFree { ref categories } if categories == &["sex"]
        ));
    }
}
