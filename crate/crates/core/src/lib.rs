//! Abstract interpretation of support vector machines.
//!
//! Input regions are abstracted as intervals or reduced affine forms (with a
//! One-Hot treatment of categorical tiers) and pushed through the dual-form
//! decision function. The resulting output forms are used to certify
//! robustness and individual fairness, to rank feature importance, and to
//! guide a search for concrete counterexamples.

pub mod afi;
pub mod cex;
pub mod domains;
pub mod error;
pub mod fairness;
pub mod fixtures;
pub mod svm;
pub mod verifier;

pub use afi::{afi, afi_scores, global_afi, pfi, rank_compare, ImportanceReport, PfiReport, RankComparison};
pub use cex::{search, search_region, vertex_candidate, BoundsReport, Counterexample, SearchConfig, SearchOutcome};
pub use domains::{CpValue, ExpMode, Hyperrectangle, IntervalValue, MonotoneFn, OneHotValue, RafValue, Symbol};
pub use error::{Error, Result};
pub use fairness::{fairness_lower_bound, similarity_to_perturbation, SimilarityKind, SimilaritySpec};
pub use svm::{FeatureSchema, KernelSpec, Label, LabeledDataset, SvmModel};
pub use verifier::{
    abstract_classify, abstract_decision, verify_robust, AbstractRegion, DomainTag, LabelSet, OutputAbstraction,
    PerturbationSpec, VerificationOutcome,
};
