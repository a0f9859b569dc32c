//! Abstract evaluation of the dual-form decision function.

use serde::Serialize;

use crate::domains::{ExpMode, IntervalValue, MonotoneFn, RafValue, Symbol};
use crate::error::{Error, Result};
use crate::svm::{KernelSpec, SvmModel};
use crate::verifier::condense::condense_tiers;
use crate::verifier::region::{AbstractRegion, DomainTag};

/// Result of running the abstract classifier on a region.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputAbstraction {
    /// Output form before condensation.
    #[serde(skip)]
    pub raf: RafValue,
    /// Output form with each freed tier replaced by one fresh symbol.
    #[serde(skip)]
    pub condensed: RafValue,
    /// Range used for classification.
    pub range: IntervalValue,
}

/// Operations the kernel lifting needs from a numeric domain.
pub(crate) trait Arith {
    type V: Clone;
    fn constant(&self, c: f64) -> Self::V;
    fn affine(&self, v: &Self::V, alpha: f64, beta: f64) -> Self::V;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn square(&self, a: &Self::V) -> Self::V;
    fn exp_scaled(&self, a: &Self::V, scale: f64) -> Self::V;
}

pub(crate) struct IntervalArith;

impl Arith for IntervalArith {
    type V = IntervalValue;

    fn constant(&self, c: f64) -> IntervalValue {
        IntervalValue::point(c)
    }
    fn affine(&self, v: &IntervalValue, alpha: f64, beta: f64) -> IntervalValue {
        v.affine(alpha, beta)
    }
    fn add(&self, a: &IntervalValue, b: &IntervalValue) -> IntervalValue {
        a.add(b)
    }
    fn mul(&self, a: &IntervalValue, b: &IntervalValue) -> IntervalValue {
        a.mul(b)
    }
    fn square(&self, a: &IntervalValue) -> IntervalValue {
        a.square()
    }
    fn exp_scaled(&self, a: &IntervalValue, scale: f64) -> IntervalValue {
        a.affine(scale, 0.0).map(MonotoneFn::Exp)
    }
}

/// RAF arithmetic. With `keep` set, every symbol it rejects is folded into
/// `ε_r` after each operation.
pub(crate) struct RafArith<'a> {
    pub exp_mode: ExpMode,
    pub keep: Option<&'a dyn Fn(Symbol) -> bool>,
}

impl RafArith<'_> {
    fn post(&self, v: RafValue) -> RafValue {
        match self.keep {
            Some(keep) => v.collapse_except(keep),
            None => v,
        }
    }
}

impl Arith for RafArith<'_> {
    type V = RafValue;

    fn constant(&self, c: f64) -> RafValue {
        RafValue::constant(c)
    }
    fn affine(&self, v: &RafValue, alpha: f64, beta: f64) -> RafValue {
        self.post(v.affine(alpha, beta))
    }
    fn add(&self, a: &RafValue, b: &RafValue) -> RafValue {
        self.post(a.add(b))
    }
    fn mul(&self, a: &RafValue, b: &RafValue) -> RafValue {
        self.post(a.mul(b))
    }
    fn square(&self, a: &RafValue) -> RafValue {
        self.post(a.mul(a))
    }
    fn exp_scaled(&self, a: &RafValue, scale: f64) -> RafValue {
        self.post(a.exp_scaled_with(scale, self.exp_mode))
    }
}

fn lift_kernel<A: Arith>(ar: &A, kernel: &KernelSpec, sv: &[f64], z: &[A::V]) -> A::V {
    let dot = |ar: &A| {
        sv.iter()
            .zip(z)
            .fold(ar.constant(0.0), |acc, (s, v)| ar.add(&acc, &ar.affine(v, *s, 0.0)))
    };
    match *kernel {
        KernelSpec::Linear => dot(ar),
        KernelSpec::Polynomial { c, degree } => {
            let base = ar.affine(&dot(ar), 1.0, c);
            let mut acc = base.clone();
            for step in 1..degree {
                acc = if step == 1 { ar.square(&base) } else { ar.mul(&acc, &base) };
            }
            acc
        }
        KernelSpec::Rbf { gamma } => {
            let d2 = sv.iter().zip(z).fold(ar.constant(0.0), |acc, (s, v)| {
                let diff = ar.affine(v, -1.0, *s);
                ar.add(&acc, &ar.square(&diff))
            });
            ar.exp_scaled(&d2, -gamma)
        }
    }
}

/// `Σ αᵢ k♯(svᵢ, z) − b` over any arithmetic.
pub(crate) fn lift_decision<A: Arith>(ar: &A, m: &SvmModel, z: &[A::V]) -> A::V {
    let sum = m
        .support_vectors()
        .iter()
        .zip(m.alphas())
        .fold(ar.constant(0.0), |acc, (sv, a)| {
            let k = lift_kernel(ar, m.kernel(), sv, z);
            ar.add(&acc, &ar.affine(&k, *a, 0.0))
        });
    ar.affine(&sum, 1.0, -m.bias())
}

fn check_width(m: &SvmModel, r: &AbstractRegion) -> Result<()> {
    if r.width() != m.dimension() {
        return Err(Error::DimensionMismatch {
            expected: m.dimension(),
            actual: r.width(),
        });
    }
    Ok(())
}

/// Interval-domain output over the region's box.
pub fn interval_decision(m: &SvmModel, r: &AbstractRegion) -> Result<IntervalValue> {
    check_width(m, r)?;
    Ok(lift_decision(&IntervalArith, m, r.bounds()))
}

/// Raw RAF output over the region's symbolic inputs.
pub fn raf_decision(m: &SvmModel, r: &AbstractRegion, exp_mode: ExpMode) -> Result<RafValue> {
    check_width(m, r)?;
    let ar = RafArith { exp_mode, keep: None };
    Ok(lift_decision(&ar, m, r.vars()))
}

/// RAF output where only tier symbols survive each operation.
fn tier_only_decision(m: &SvmModel, r: &AbstractRegion, exp_mode: ExpMode) -> RafValue {
    let keep = |s: Symbol| s < r.width() && r.is_tier_column(s);
    let ar = RafArith {
        exp_mode,
        keep: Some(&keep),
    };
    lift_decision(&ar, m, r.vars())
}

fn meet(a: IntervalValue, b: IntervalValue) -> IntervalValue {
    a.intersect(&b).unwrap_or(a)
}

/// Runs the abstract classifier in the region's mode.
///
/// * interval: plain interval arithmetic;
/// * interval with One-Hot: RAF arithmetic that keeps only tier symbols,
///   then condensation;
/// * RAF: full RAF arithmetic;
/// * RAF with One-Hot: RAF arithmetic, then condensation.
///
/// Each mode's range is met with the ranges of the coarser modes, so a
/// finer mode never reports a wider range than a coarser one.
pub fn abstract_decision(m: &SvmModel, r: &AbstractRegion) -> Result<OutputAbstraction> {
    abstract_decision_with(m, r, ExpMode::default())
}

pub fn abstract_decision_with(
    m: &SvmModel,
    r: &AbstractRegion,
    exp_mode: ExpMode,
) -> Result<OutputAbstraction> {
    check_width(m, r)?;
    let interval = lift_decision(&IntervalArith, m, r.bounds());
    let groups = r.tier_groups();
    let base = r.fresh_symbol_base();
    let interval_oh = || {
        let raw = tier_only_decision(m, r, exp_mode);
        let condensed = condense_tiers(&raw, groups, base);
        let range = meet(condensed.range_or_unbounded(), interval);
        (raw, condensed, range)
    };
    let out = match (r.domain(), r.oh_enabled()) {
        (DomainTag::IntervalOnly, false) => {
            let raf = RafValue::from_interval(&interval);
            OutputAbstraction {
                condensed: raf.clone(),
                raf,
                range: interval,
            }
        }
        (DomainTag::IntervalOnly, true) => {
            let (raf, condensed, range) = interval_oh();
            OutputAbstraction { raf, condensed, range }
        }
        (DomainTag::Raf, oh) => {
            let raf = raf_decision(m, r, exp_mode)?;
            let (condensed, range) = if oh {
                let condensed = condense_tiers(&raf, groups, base);
                let (_, _, coarse) = interval_oh();
                let range = meet(meet(condensed.range_or_unbounded(), interval), coarse);
                (condensed, range)
            } else {
                (raf.clone(), meet(raf.range_or_unbounded(), interval))
            };
            OutputAbstraction { raf, condensed, range }
        }
    };
    if !out.range.lo().is_nan() && !out.range.hi().is_nan() {
        Ok(out)
    } else {
        Err(Error::Invariant("abstract output range is NaN".into()))
    }
}
