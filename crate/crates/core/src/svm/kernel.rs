use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kernel function of the dual-form classifier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum KernelSpec {
    /// `x·z`
    Linear,
    /// `(x·z + c)^degree`
    Polynomial { c: f64, degree: u32 },
    /// `exp(-gamma·‖x - z‖²)`
    Rbf { gamma: f64 },
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Linear => Ok(()),
            KernelSpec::Polynomial { c, degree } => {
                if degree < 1 {
                    return Err(Error::InvalidKernel("polynomial degree must be ≥ 1".into()));
                }
                if !c.is_finite() {
                    return Err(Error::InvalidKernel("polynomial coefficient must be finite".into()));
                }
                Ok(())
            }
            KernelSpec::Rbf { gamma } => {
                if gamma > 0.0 && gamma.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidKernel(format!("rbf gamma must be > 0, got {gamma}")))
                }
            }
        }
    }

    pub fn eval(&self, x: &[f64], z: &[f64]) -> Result<f64> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                actual: z.len(),
            });
        }
        Ok(self.eval_unchecked(x, z))
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64], z: &[f64]) -> f64 {
        match *self {
            KernelSpec::Linear => dot(x, z),
            KernelSpec::Polynomial { c, degree } => {
                let base = dot(x, z) + c;
                // left fold, matching the abstract evaluation order
                (1..degree).fold(base, |acc, _| acc * base)
            }
            KernelSpec::Rbf { gamma } => {
                let d2: f64 = x.iter().zip(z).map(|(a, b)| (a - b) * (a - b)).sum();
                (-gamma * d2).exp()
            }
        }
    }
}

fn dot(x: &[f64], z: &[f64]) -> f64 {
    x.iter().zip(z).map(|(a, b)| a * b).sum()
}
