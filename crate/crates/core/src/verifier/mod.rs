//! The abstract classifier: regions, kernel lifting, tier condensation and
//! robustness decisions.

pub mod condense;
pub mod eval;
pub mod region;
pub mod robust;

pub use condense::condense_tiers;
pub use eval::{abstract_decision, abstract_decision_with, interval_decision, raf_decision, OutputAbstraction};
pub use region::{AbstractRegion, DomainTag, PerturbationSpec, TierGroup};
pub use robust::{
    abstract_classify, robustness_score, verify_dataset, verify_region, verify_robust, LabelSet,
    VerificationOutcome,
};
