//! The hyperrectangle (interval) domain.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A closed real interval `[lo, hi]`.
///
/// Infinite endpoints are accepted on input (an unbounded feature range), but
/// none of the pipelines in this crate produce them from finite inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RangeRepr", into = "RangeRepr")]
pub struct IntervalValue {
    lo: f64,
    hi: f64,
}

/// JSON has no infinities, so unbounded endpoints are written as `null`.
#[derive(Serialize, Deserialize)]
struct RangeRepr(Option<f64>, Option<f64>);

impl TryFrom<RangeRepr> for IntervalValue {
    type Error = Error;

    fn try_from(r: RangeRepr) -> Result<Self> {
        IntervalValue::new(r.0.unwrap_or(f64::NEG_INFINITY), r.1.unwrap_or(f64::INFINITY))
    }
}

impl From<IntervalValue> for RangeRepr {
    fn from(v: IntervalValue) -> Self {
        let fin = |x: f64| x.is_finite().then_some(x);
        RangeRepr(fin(v.lo), fin(v.hi))
    }
}

impl IntervalValue {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(IntervalValue { lo, hi })
    }

    pub fn point(x: f64) -> Self {
        IntervalValue { lo: x, hi: x }
    }

    pub fn unbounded() -> Self {
        IntervalValue {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    /// Builds `[min, max]` of the given values. Used internally where the
    /// ordering is known to hold up to rounding.
    pub(crate) fn hull(a: f64, b: f64) -> Self {
        IntervalValue {
            lo: a.min(b),
            hi: a.max(b),
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn mid(&self) -> f64 {
        if self.lo == self.hi {
            self.lo
        } else {
            0.5 * (self.lo + self.hi)
        }
    }

    pub fn radius(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Containment with an absolute slack, for checks against floating-point
    /// results computed along a different path.
    pub fn contains_approx(&self, x: f64, tol: f64) -> bool {
        self.lo - tol <= x && x <= self.hi + tol
    }

    pub fn is_subset_of(&self, other: &IntervalValue) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersect(&self, other: &IntervalValue) -> Option<IntervalValue> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(IntervalValue { lo, hi })
    }

    pub fn strictly_negative(&self) -> bool {
        self.hi < 0.0
    }

    pub fn strictly_positive(&self) -> bool {
        self.lo > 0.0
    }

    pub fn add(&self, other: &IntervalValue) -> IntervalValue {
        IntervalValue {
            lo: self.lo + other.lo,
            hi: self.hi + other.hi,
        }
    }

    /// Product over the four corner products.
    pub fn mul(&self, other: &IntervalValue) -> IntervalValue {
        let corners = [
            mul0(self.lo, other.lo),
            mul0(self.lo, other.hi),
            mul0(self.hi, other.lo),
            mul0(self.hi, other.hi),
        ];
        let lo = corners.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = corners.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        IntervalValue { lo, hi }
    }

    /// Exact image of `x ↦ x²`.
    pub fn square(&self) -> IntervalValue {
        let a = self.lo * self.lo;
        let b = self.hi * self.hi;
        if self.lo <= 0.0 && 0.0 <= self.hi {
            IntervalValue { lo: 0.0, hi: a.max(b) }
        } else {
            IntervalValue::hull(a, b)
        }
    }

    /// `α·x + β`, exact on intervals.
    pub fn affine(&self, alpha: f64, beta: f64) -> IntervalValue {
        if alpha == 0.0 {
            return IntervalValue::point(beta);
        }
        IntervalValue::hull(alpha * self.lo + beta, alpha * self.hi + beta)
    }

    pub fn map(&self, f: MonotoneFn) -> IntervalValue {
        match f {
            MonotoneFn::Exp => IntervalValue {
                lo: self.lo.exp(),
                hi: self.hi.exp(),
            },
            MonotoneFn::Negate => IntervalValue {
                lo: -self.hi,
                hi: -self.lo,
            },
            MonotoneFn::Affine { scale, offset } => self.affine(scale, offset),
        }
    }
}

/// `0 · ∞` is taken as 0 so that point zero absorbs unbounded operands.
fn mul0(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

impl fmt::Display for IntervalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Whitelisted monotone maps for [`IntervalValue::map`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MonotoneFn {
    Exp,
    Negate,
    Affine { scale: f64, offset: f64 },
}

impl FromStr for MonotoneFn {
    type Err = Error;

    /// Accepts `exp`, `negate` and `affine(α,β)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "exp" => return Ok(MonotoneFn::Exp),
            "negate" => return Ok(MonotoneFn::Negate),
            _ => {}
        }
        let args = s
            .strip_prefix("affine(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::UnknownFunction(s.to_string()))?;
        let mut it = args.split(',').map(|p| p.trim().parse::<f64>());
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(scale)), Some(Ok(offset)), None) => Ok(MonotoneFn::Affine { scale, offset }),
            _ => Err(Error::UnknownFunction(s.to_string())),
        }
    }
}

/// An `n`-dimensional box of intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperrectangle {
    dims: Vec<IntervalValue>,
}

impl Hyperrectangle {
    pub fn new(dims: Vec<IntervalValue>) -> Self {
        Hyperrectangle { dims }
    }

    pub fn dims(&self) -> &[IntervalValue] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dims.len() && self.dims.iter().zip(x).all(|(d, v)| d.contains(*v))
    }
}
