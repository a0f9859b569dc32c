//! The One-Hot domain `OH_k = (CP × CP)^k`.
//!
//! Component `i` holds the values seen at position `i` of a tier when it was
//! off (0) and when it was on (1). A vector is represented through
//! activation `i` when its `i`-th entry matches the "on" value and every other
//! entry `j` matches the "off" value of `j`.

use std::cmp::Ordering;
use std::fmt;

use crate::domains::cp::CpValue;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OneHotValue {
    pairs: Vec<(CpValue, CpValue)>,
}

impl OneHotValue {
    /// `pairs[i] = (off, on)`. Tiers have at least two members.
    pub fn new(pairs: Vec<(CpValue, CpValue)>) -> Result<Self> {
        if pairs.len() < 2 {
            return Err(Error::MalformedTier(format!(
                "tier width must be at least 2, got {}",
                pairs.len()
            )));
        }
        Ok(OneHotValue { pairs })
    }

    pub fn bottom(k: usize) -> Result<Self> {
        OneHotValue::new(vec![(CpValue::Bottom, CpValue::Bottom); k])
    }

    pub fn width(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(CpValue, CpValue)] {
        &self.pairs
    }

    pub fn is_topless(&self) -> bool {
        self.pairs.iter().all(|(f, t)| !f.is_top() && !t.is_top())
    }

    /// The most precise abstraction of a set of one-hot tiers: position `i`
    /// gets the CP abstraction of the values it takes while off and while on.
    pub fn abstract_tiers(k: usize, tiers: &[Vec<f64>]) -> Result<Self> {
        for t in tiers {
            check_tier(k, t)?;
        }
        let pairs = (0..k)
            .map(|i| {
                let off = CpValue::abstract_set(tiers.iter().map(|t| t[i]).filter(|v| *v == 0.0));
                let on = CpValue::abstract_set(tiers.iter().map(|t| t[i]).filter(|v| *v == 1.0));
                (off, on)
            })
            .collect();
        OneHotValue::new(pairs)
    }

    /// Vectors represented through activation `i`, or `None` when that set is
    /// empty. Requires the referenced components to be non-top.
    fn activation(&self, i: usize) -> Result<Option<Vec<f64>>> {
        let mut v = Vec::with_capacity(self.pairs.len());
        for (j, (off, on)) in self.pairs.iter().enumerate() {
            let c = if i == j { on } else { off };
            match c {
                CpValue::Bottom => return Ok(None),
                CpValue::Top => return Err(Error::TopComponent),
                CpValue::Constant(z) => v.push(*z),
            }
        }
        Ok(Some(v))
    }

    /// Concretization: the union of every activation's vectors, sorted and
    /// deduplicated. Top-containing values are rejected.
    pub fn concretize(&self) -> Result<Vec<Vec<f64>>> {
        if !self.is_topless() {
            return Err(Error::TopComponent);
        }
        let mut out = Vec::new();
        for i in 0..self.pairs.len() {
            if let Some(v) = self.activation(i)? {
                out.push(v);
            }
        }
        sort_dedup(&mut out);
        Ok(out)
    }

    /// Membership test that also works for values with top components.
    pub fn admits(&self, x: &[f64]) -> bool {
        x.len() == self.pairs.len()
            && (0..self.pairs.len()).any(|i| {
                self.pairs.iter().enumerate().all(|(j, (off, on))| {
                    let c = if i == j { on } else { off };
                    c.admits(x[j])
                })
            })
    }

    /// Componentwise lifting of `f` through the CP domain.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> OneHotValue {
        OneHotValue {
            pairs: self
                .pairs
                .iter()
                .map(|(off, on)| (off.apply(&f), on.apply(&f)))
                .collect(),
        }
    }
}

fn check_tier(k: usize, t: &[f64]) -> Result<()> {
    if t.len() != k {
        return Err(Error::MalformedTier(format!(
            "expected {k} components, got {}",
            t.len()
        )));
    }
    let ones = t.iter().filter(|v| **v == 1.0).count();
    let zeros = t.iter().filter(|v| **v == 0.0).count();
    if ones != 1 || zeros != k - 1 {
        return Err(Error::MalformedTier(format!("{t:?} is not a one-hot vector")));
    }
    Ok(())
}

/// Sorts vectors lexicographically by total order and removes duplicates
/// (treating `-0.0` and `0.0` as equal).
pub fn sort_dedup(vs: &mut Vec<Vec<f64>>) {
    for v in vs.iter_mut() {
        for x in v.iter_mut() {
            if *x == 0.0 {
                *x = 0.0;
            }
        }
    }
    vs.sort_by(|a, b| cmp_vec(a, b));
    vs.dedup_by(|a, b| cmp_vec(a, b) == Ordering::Equal);
}

fn cmp_vec(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or_else(|| a.len().cmp(&b.len()))
}

impl fmt::Display for OneHotValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (off, on)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({off}, {on})")?;
        }
        write!(f, ")")
    }
}
