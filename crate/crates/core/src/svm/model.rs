//! Dual-form binary SVM models and their JSON encoding.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::svm::kernel::KernelSpec;
use crate::svm::schema::FeatureSchema;

/// Binary class label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    /// Sign rule: `0` maps to `Positive`.
    pub fn from_decision(v: f64) -> Label {
        if v < 0.0 {
            Label::Negative
        } else {
            Label::Positive
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Label::Negative => -1.0,
            Label::Positive => 1.0,
        }
    }

    pub fn opposite(self) -> Label {
        match self {
            Label::Negative => Label::Positive,
            Label::Positive => Label::Negative,
        }
    }
}

impl TryFrom<i64> for Label {
    type Error = String;
    fn try_from(v: i64) -> std::result::Result<Self, String> {
        match v {
            -1 => Ok(Label::Negative),
            1 => Ok(Label::Positive),
            other => Err(format!("label must be -1 or +1, got {other}")),
        }
    }
}

impl From<Label> for i64 {
    fn from(l: Label) -> i64 {
        match l {
            Label::Negative => -1,
            Label::Positive => 1,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Negative => "-1",
            Label::Positive => "+1",
        })
    }
}

/// `C(z) = sign(Σ αᵢ k(svᵢ, z) − b)` where each `αᵢ` already carries the
/// class sign of its support vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelRepr", into = "ModelRepr")]
pub struct SvmModel {
    kernel: KernelSpec,
    support_vectors: Vec<Vec<f64>>,
    alphas: Vec<f64>,
    bias: f64,
    schema: FeatureSchema,
}

#[derive(Serialize, Deserialize)]
struct ModelRepr {
    kernel: KernelSpec,
    bias: f64,
    alphas: Vec<f64>,
    support_vectors: Vec<Vec<f64>>,
    schema: FeatureSchema,
}

impl TryFrom<ModelRepr> for SvmModel {
    type Error = Error;
    fn try_from(r: ModelRepr) -> Result<Self> {
        SvmModel::new(r.kernel, r.support_vectors, r.alphas, r.bias, r.schema)
    }
}

impl From<SvmModel> for ModelRepr {
    fn from(m: SvmModel) -> Self {
        ModelRepr {
            kernel: m.kernel,
            bias: m.bias,
            alphas: m.alphas,
            support_vectors: m.support_vectors,
            schema: m.schema,
        }
    }
}

impl SvmModel {
    pub fn new(
        kernel: KernelSpec,
        support_vectors: Vec<Vec<f64>>,
        alphas: Vec<f64>,
        bias: f64,
        schema: FeatureSchema,
    ) -> Result<Self> {
        kernel.validate()?;
        if support_vectors.is_empty() {
            return Err(Error::InvalidModel("at least one support vector is required".into()));
        }
        if alphas.len() != support_vectors.len() {
            return Err(Error::InvalidModel(format!(
                "{} alphas for {} support vectors",
                alphas.len(),
                support_vectors.len()
            )));
        }
        let d = schema.width();
        if let Some((i, sv)) = support_vectors.iter().enumerate().find(|(_, sv)| sv.len() != d) {
            return Err(Error::InvalidModel(format!(
                "support vector {i} has dimension {}, schema has {d}",
                sv.len()
            )));
        }
        let finite = bias.is_finite()
            && alphas.iter().all(|a| a.is_finite())
            && support_vectors.iter().flatten().all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidModel("non-finite parameter".into()));
        }
        Ok(SvmModel {
            kernel,
            support_vectors,
            alphas,
            bias,
            schema,
        })
    }

    /// Parses the JSON model format, rejecting multi-class exports with a
    /// dedicated error.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)?;
        if let Some(n) = value.get("classes").and_then(Value::as_array).map(Vec::len) {
            if n != 2 {
                return Err(Error::MultiClass(n));
            }
        }
        if let Some(Value::Array(rows)) = value.get("alphas") {
            if let Some(Value::Array(_)) = rows.first() {
                let n = rows.len() + 1;
                return Err(Error::MultiClass(n));
            }
        }
        Ok(serde_json::from_value(value)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        SvmModel::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn support_vectors(&self) -> &[Vec<f64>] {
        &self.support_vectors
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn schema(&self) -> &FeatureSchema {
        &self.schema
    }

    pub fn dimension(&self) -> usize {
        self.schema.width()
    }

    fn check_dim(&self, z: &[f64]) -> Result<()> {
        if z.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                actual: z.len(),
            });
        }
        Ok(())
    }

    pub fn decision_value(&self, z: &[f64]) -> Result<f64> {
        self.check_dim(z)?;
        Ok(self.decision_value_unchecked(z))
    }

    pub(crate) fn decision_value_unchecked(&self, z: &[f64]) -> f64 {
        let s: f64 = self
            .support_vectors
            .iter()
            .zip(&self.alphas)
            .map(|(sv, a)| a * self.kernel.eval_unchecked(sv, z))
            .sum();
        s - self.bias
    }

    pub fn classify(&self, z: &[f64]) -> Result<Label> {
        Ok(Label::from_decision(self.decision_value(z)?))
    }

    /// Primal weights `w = Σ αᵢ svᵢ`; only meaningful for linear kernels.
    pub fn primal_weights(&self) -> Option<Vec<f64>> {
        if self.kernel != KernelSpec::Linear {
            return None;
        }
        let mut w = vec![0.0; self.dimension()];
        for (sv, a) in self.support_vectors.iter().zip(&self.alphas) {
            for (wi, v) in w.iter_mut().zip(sv) {
                *wi += a * v;
            }
        }
        Some(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::IntervalValue;
    use crate::fixtures;
    use proptest::prelude::*;

    #[test]
    fn toy_linear_decision() {
        let m = fixtures::toy_linear();
        assert_eq!(m.decision_value(&[1., 0.]).unwrap(), 0.5);
        assert_eq!(m.primal_weights().unwrap(), vec![0.5, -1.0]);
    }

    #[test]
    fn parabola_decisions() {
        let m = fixtures::parabola();
        assert!((m.decision_value(&[1., 0.]).unwrap() - 3.0).abs() < 1e-12);
        let v = m.decision_value(&[0.5, -0.5]).unwrap();
        assert!((v - (1.5 - (2.0 + 2f64.sqrt()))).abs() < 1e-12);
        assert!((v - -1.91).abs() < 0.01);
        assert_eq!(m.classify(&[1., 0.]).unwrap(), Label::Positive);
        assert_eq!(m.classify(&[0.5, -0.5]).unwrap(), Label::Negative);
    }

    #[test]
    fn sign_rule() {
        assert_eq!(Label::from_decision(3.0), Label::Positive);
        assert_eq!(Label::from_decision(-1.91), Label::Negative);
        assert_eq!(Label::from_decision(0.0), Label::Positive);
        assert_eq!(Label::from_decision(-0.0), Label::Positive);
    }

    #[test]
    fn dimension_checks() {
        let m = fixtures::toy_linear();
        assert!(matches!(
            m.decision_value(&[1.0]),
            Err(Error::DimensionMismatch { expected: 2, actual: 1 })
        ));
        let schema = FeatureSchema::numeric(2, IntervalValue::new(0., 1.).unwrap());
        assert!(SvmModel::new(KernelSpec::Linear, vec![vec![1.0]], vec![1.0], 0.0, schema.clone()).is_err());
        assert!(SvmModel::new(KernelSpec::Linear, vec![], vec![], 0.0, schema.clone()).is_err());
        assert!(SvmModel::new(KernelSpec::Linear, vec![vec![1.0, 2.0]], vec![1.0, 2.0], 0.0, schema).is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = fixtures::parabola();
        let text = m.to_json().unwrap();
        let back = SvmModel::from_json(&text).unwrap();
        assert_eq!(back, m);
        // full precision survives
        assert_eq!(back.support_vectors()[0][1], -(2f64.sqrt()));
    }

    #[test]
    fn multi_class_rejected() {
        let m = fixtures::toy_linear();
        let mut v: Value = serde_json::to_value(&m).unwrap();
        v["classes"] = serde_json::json!([0, 1, 2]);
        let err = SvmModel::from_json(&v.to_string()).unwrap_err();
        assert!(matches!(err, Error::MultiClass(3)));
        let mut v: Value = serde_json::to_value(&m).unwrap();
        v["alphas"] = serde_json::json!([[1.0, 2.0], [3.0, 4.0]]);
        assert!(matches!(SvmModel::from_json(&v.to_string()), Err(Error::MultiClass(3))));
    }

    proptest! {
        #[test]
        fn primal_dual_agree(
            svs in proptest::collection::vec(proptest::collection::vec(-2.0..2.0f64, 3), 1..6),
            seed_alphas in proptest::collection::vec(-1.0..1.0f64, 6),
            bias in -1.0..1.0f64,
            z in proptest::collection::vec(-2.0..2.0f64, 3),
        ) {
            let alphas = seed_alphas[..svs.len()].to_vec();
            let schema = FeatureSchema::numeric(3, IntervalValue::new(-2., 2.).unwrap());
            let m = SvmModel::new(KernelSpec::Linear, svs, alphas, bias, schema).unwrap();
            let w = m.primal_weights().unwrap();
            let primal: f64 = w.iter().zip(&z).map(|(a, b)| a * b).sum::<f64>() - bias;
            prop_assert!((m.decision_value(&z).unwrap() - primal).abs() <= 1e-9);
        }
    }
}
