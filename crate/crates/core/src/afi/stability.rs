use crate::error::Result;
use crate::svm::{LabeledDataset, SvmModel};
use crate::verifier::{robustness_score, DomainTag, PerturbationSpec};

/// Per numeric feature, the fraction of rows that could not be verified when
/// only that feature moves by `epsilon`. Less stable features rank as more
/// important.
pub fn stability_importance(
    m: &SvmModel,
    data: &LabeledDataset,
    epsilon: f64,
    domain: DomainTag,
    oh_enabled: bool,
) -> Result<Vec<(usize, f64)>> {
    m.schema()
        .numeric_indices()
        .into_iter()
        .map(|i| {
            let spec = PerturbationSpec::LInfNoise {
                epsilon,
                features: vec![i],
            };
            Ok((i, 1.0 - robustness_score(m, data, &spec, domain, oh_enabled)?))
        })
        .collect()
}
