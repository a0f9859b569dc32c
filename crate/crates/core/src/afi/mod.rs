//! Abstract Feature Importance, its score/grade clustering, the permutation
//! importance baseline and rank comparison.

mod pfi;
mod rank;
mod scores;
mod stability;

use std::time::Instant;

use serde::Serialize;

pub use pfi::{feature_groups, pfi, FeatureGroup, PfiReport};
pub use rank::{descending_order, kendall, rank_compare, ranks_of, spearman, RankComparison};
pub use scores::{afi_scores, AfiScores};
pub use stability::stability_importance;

use crate::domains::Symbol;
use crate::error::{Error, Result};
use crate::svm::SvmModel;
use crate::verifier::{abstract_decision, AbstractRegion, DomainTag};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImportanceReport {
    /// One name per entry of `indices`.
    pub names: Vec<String>,
    pub indices: Vec<f64>,
    /// `(name, |aⱼ|)` for every freed tier member, read before condensation.
    pub tier_indices: Vec<(String, f64)>,
    pub mu: f64,
    pub sigma: f64,
    pub scores: Vec<i64>,
    pub grades: Vec<i64>,
    pub use_condensed: bool,
    /// Seconds.
    pub elapsed: f64,
}

/// Reads `|aᵢ|` off the abstract output over `region`.
///
/// Without condensation every moving input symbol gets an entry. With it,
/// each freed category contributes one entry in place of its members.
pub fn afi(m: &SvmModel, region: &AbstractRegion, use_condensed: bool) -> Result<ImportanceReport> {
    let start = Instant::now();
    if region.domain() != DomainTag::Raf {
        return Err(Error::RequiresRaf);
    }
    let out = abstract_decision(m, region)?;
    let names: Vec<&str> = m.schema().names().collect();
    let mut entries: Vec<(String, Symbol)> = Vec::new();
    for (i, name) in names.iter().enumerate() {
        if region.is_tier_column(i) {
            if use_condensed {
                if let Some(g) = region.tier_groups().iter().position(|g| g.columns.start == i) {
                    entries.push((region.tier_groups()[g].category.clone(), region.width() + g));
                }
            } else {
                entries.push((name.to_string(), i));
            }
        } else if !region.bounds()[i].is_point() {
            entries.push((name.to_string(), i));
        }
    }
    let source = if use_condensed { &out.condensed } else { &out.raf };
    let indices: Vec<f64> = entries.iter().map(|(_, s)| source.coeff(*s).abs()).collect();
    let tier_indices = region
        .tier_symbols()
        .map(|s| (names[s].to_string(), out.raf.coeff(s).abs()))
        .collect();
    let sc = afi_scores(&indices)?;
    Ok(ImportanceReport {
        names: entries.into_iter().map(|(n, _)| n).collect(),
        indices,
        tier_indices,
        mu: sc.mu,
        sigma: sc.sigma,
        scores: sc.scores,
        grades: sc.grades,
        use_condensed,
        elapsed: start.elapsed().as_secs_f64(),
    })
}

/// AFI over the whole input space described by the schema.
pub fn global_afi(m: &SvmModel, use_condensed: bool) -> Result<ImportanceReport> {
    let region = AbstractRegion::global(m.schema(), DomainTag::Raf, use_condensed)?;
    afi(m, &region, use_condensed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn toy_linear_global() {
        let r = global_afi(&fixtures::toy_linear(), false).unwrap();
        assert_eq!(r.indices, vec![0.5, 1.0]);
        assert_eq!(r.names, vec!["x1", "x2"]);
    }

    #[test]
    fn interval_region_is_rejected() {
        let m = fixtures::toy_linear();
        let r = AbstractRegion::global(m.schema(), DomainTag::IntervalOnly, false).unwrap();
        assert!(matches!(afi(&m, &r, false), Err(Error::RequiresRaf)));
    }
}
