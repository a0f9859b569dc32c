//! Small hand-built models used across tests, benchmarks and the CLI demo.

use crate::domains::IntervalValue;
use crate::svm::{FeatureSchema, KernelSpec, SvmModel};

/// Linear model over `[-1, 1]²` with support vectors `(-0.5, 1)` and
/// `(0.5, -1)`, weights `-0.5` and `+0.5`; primal form `0.5·x₁ − x₂`.
pub fn toy_linear() -> SvmModel {
    let schema = FeatureSchema::numeric(2, IntervalValue::new(-1.0, 1.0).expect("range"));
    SvmModel::new(
        KernelSpec::Linear,
        vec![vec![-0.5, 1.0], vec![0.5, -1.0]],
        vec![-0.5, 0.5],
        0.0,
        schema,
    )
    .expect("valid model")
}

/// Degree-2 polynomial model (`c = 1`) with support vectors `(0, -√2)`,
/// `(-1, 1)`, `(1, 1)` and weights `-1, 1, 1`. Its decision function is
/// `2x₁² + 2(2 + √2)x₂ + 1`, whose zero set is a parabola.
pub fn parabola() -> SvmModel {
    let schema = FeatureSchema::numeric(2, IntervalValue::new(-1.0, 1.0).expect("range"));
    SvmModel::new(
        KernelSpec::Polynomial { c: 1.0, degree: 2 },
        vec![vec![0.0, -(2f64.sqrt())], vec![-1.0, 1.0], vec![1.0, 1.0]],
        vec![-1.0, 1.0, 1.0],
        0.0,
        schema,
    )
    .expect("valid model")
}
