//! Concrete SVM models, kernels, datasets and accuracy metrics.

pub mod dataset;
pub mod kernel;
pub mod metrics;
pub mod model;
pub mod schema;

pub use dataset::LabeledDataset;
pub use kernel::KernelSpec;
pub use metrics::{accuracy_scores, balanced_accuracy, Accuracy};
pub use model::{Label, SvmModel};
pub use schema::{Category, FeatureDescriptor, FeatureKind, FeatureSchema};
