//! Perturbation specifications and their abstraction as regions.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::domains::{IntervalValue, RafValue, Symbol};
use crate::error::{Error, Result};
use crate::svm::FeatureSchema;

/// Which features of a sample may move, and how far.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PerturbationSpec {
    /// `|xᵢ − zᵢ| ≤ ε` on the listed numeric features, every other feature fixed.
    LInfNoise { epsilon: f64, features: Vec<usize> },
    /// The listed categories may take any of their values.
    CatFree { categories: Vec<String> },
    /// Both of the above at once.
    NoiseCat {
        epsilon: f64,
        features: Vec<usize>,
        categories: Vec<String>,
    },
}

impl PerturbationSpec {
    pub fn epsilon(&self) -> f64 {
        match self {
            PerturbationSpec::LInfNoise { epsilon, .. } | PerturbationSpec::NoiseCat { epsilon, .. } => {
                *epsilon
            }
            PerturbationSpec::CatFree { .. } => 0.0,
        }
    }

    pub fn noise_features(&self) -> &[usize] {
        match self {
            PerturbationSpec::LInfNoise { features, .. } | PerturbationSpec::NoiseCat { features, .. } => {
                features
            }
            PerturbationSpec::CatFree { .. } => &[],
        }
    }

    pub fn free_categories(&self) -> &[String] {
        match self {
            PerturbationSpec::CatFree { categories } | PerturbationSpec::NoiseCat { categories, .. } => {
                categories
            }
            PerturbationSpec::LInfNoise { .. } => &[],
        }
    }

    pub fn validate(&self, schema: &FeatureSchema) -> Result<()> {
        let eps = self.epsilon();
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::InvalidPerturbation(format!("epsilon must be ≥ 0, got {eps}")));
        }
        for &i in self.noise_features() {
            if !schema.is_numeric(i) {
                return Err(Error::InvalidPerturbation(format!(
                    "feature {i} is not a numeric feature of the schema"
                )));
            }
        }
        for c in self.free_categories() {
            if schema.category(c).is_none() {
                return Err(Error::InvalidPerturbation(format!("unknown category `{c}`")));
            }
        }
        Ok(())
    }

    /// Concrete membership test `z ∈ P(x) ∩ X`, with slack `tol` on the noise
    /// bound.
    pub fn admits(&self, schema: &FeatureSchema, x: &[f64], z: &[f64], tol: f64) -> bool {
        if schema.check_row(z).is_err() || x.len() != z.len() {
            return false;
        }
        let eps = self.epsilon();
        let free_cat = |i: usize| {
            schema
                .tier_of(i)
                .is_some_and(|c| self.free_categories().contains(&c.name))
        };
        (0..z.len()).all(|i| {
            if self.noise_features().contains(&i) {
                let range = schema.range(i).unwrap_or_else(IntervalValue::unbounded);
                (z[i] - x[i]).abs() <= eps + tol && range.contains_approx(z[i], tol)
            } else if free_cat(i) {
                true
            } else {
                z[i] == x[i]
            }
        })
    }
}

/// Abstract domain used for the kernel computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainTag {
    IntervalOnly,
    Raf,
}

/// Columns of a freed category. Member `j` is abstracted by the symbol with
/// the same index as its column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TierGroup {
    pub category: String,
    pub columns: Range<usize>,
}

impl TierGroup {
    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.columns.clone()
    }
}

/// A box over the input space plus the symbolic view of it.
///
/// Every moving numeric column `i` becomes `mid + rad·εᵢ`; every member of a
/// freed tier becomes `0.5 + 0.5·εᵢ`; fixed columns are constants.
#[derive(Debug, Clone, PartialEq)]
pub struct AbstractRegion {
    bounds: Vec<IntervalValue>,
    vars: Vec<RafValue>,
    tier_groups: Vec<TierGroup>,
    tier_column: Vec<bool>,
    domain: DomainTag,
    oh_enabled: bool,
}

impl AbstractRegion {
    /// Builds a region from explicit per-column bounds. Columns of the listed
    /// categories must be `[0, 1]`.
    pub fn from_box(
        bounds: Vec<IntervalValue>,
        tier_groups: Vec<TierGroup>,
        domain: DomainTag,
        oh_enabled: bool,
    ) -> Result<Self> {
        let mut tier_column = vec![false; bounds.len()];
        for g in &tier_groups {
            if g.columns.end > bounds.len() {
                return Err(Error::InvalidPerturbation(format!(
                    "tier `{}` exceeds the region width",
                    g.category
                )));
            }
            for i in g.columns.clone() {
                tier_column[i] = true;
            }
        }
        if let Some(b) = bounds.iter().find(|b| !b.is_bounded()) {
            return Err(Error::InvalidPerturbation(format!("unbounded region dimension {b}")));
        }
        let vars = bounds
            .iter()
            .enumerate()
            .map(|(i, b)| {
                if tier_column[i] {
                    RafValue::with_symbol(0.5, i, 0.5)
                } else if b.is_point() {
                    RafValue::constant(b.lo())
                } else {
                    RafValue::with_symbol(b.mid(), i, b.radius())
                }
            })
            .collect();
        Ok(AbstractRegion {
            bounds,
            vars,
            tier_groups,
            tier_column,
            domain,
            oh_enabled,
        })
    }

    /// Abstraction of `P(x)` for the given perturbation. Moving numeric
    /// columns are clipped to their schema range.
    pub fn build(
        x: &[f64],
        spec: &PerturbationSpec,
        schema: &FeatureSchema,
        domain: DomainTag,
        oh_enabled: bool,
    ) -> Result<Self> {
        schema
            .check_row(x)
            .map_err(|r| Error::InvalidPerturbation(format!("illegal sample: {r}")))?;
        spec.validate(schema)?;
        let eps = spec.epsilon();
        let mut bounds: Vec<IntervalValue> = x.iter().map(|v| IntervalValue::point(*v)).collect();
        for &i in spec.noise_features() {
            let range = schema.range(i).unwrap_or_else(IntervalValue::unbounded);
            let ball = IntervalValue::new(x[i] - eps, x[i] + eps)?;
            bounds[i] = ball.intersect(&range).ok_or_else(|| {
                Error::InvalidPerturbation(format!(
                    "noise ball around feature {i} misses its range {range}"
                ))
            })?;
        }
        let mut groups = Vec::new();
        for name in spec.free_categories() {
            let cat = schema.category(name).expect("validated");
            if groups.iter().any(|g: &TierGroup| &g.category == name) {
                continue;
            }
            for i in cat.columns() {
                bounds[i] = IntervalValue::new(0.0, 1.0)?;
            }
            groups.push(TierGroup {
                category: name.clone(),
                columns: cat.columns(),
            });
        }
        groups.sort_by_key(|g| g.columns.start);
        AbstractRegion::from_box(bounds, groups, domain, oh_enabled)
    }

    /// Region covering every numeric range of the schema and every tier.
    pub fn global(schema: &FeatureSchema, domain: DomainTag, oh_enabled: bool) -> Result<Self> {
        let mut bounds = Vec::with_capacity(schema.width());
        for i in 0..schema.width() {
            bounds.push(match schema.range(i) {
                Some(r) if r.is_bounded() => r,
                Some(_) => {
                    return Err(Error::InvalidPerturbation(format!(
                        "feature `{}` has an unbounded range",
                        schema.features()[i].name
                    )))
                }
                None => IntervalValue::new(0.0, 1.0)?,
            });
        }
        let groups = schema
            .categories()
            .iter()
            .map(|c| TierGroup {
                category: c.name.clone(),
                columns: c.columns(),
            })
            .collect();
        AbstractRegion::from_box(bounds, groups, domain, oh_enabled)
    }

    pub fn with_domain(&self, domain: DomainTag, oh_enabled: bool) -> Self {
        AbstractRegion {
            domain,
            oh_enabled,
            ..self.clone()
        }
    }

    pub fn width(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[IntervalValue] {
        &self.bounds
    }

    pub fn vars(&self) -> &[RafValue] {
        &self.vars
    }

    pub fn tier_groups(&self) -> &[TierGroup] {
        &self.tier_groups
    }

    pub fn domain(&self) -> DomainTag {
        self.domain
    }

    pub fn oh_enabled(&self) -> bool {
        self.oh_enabled
    }

    pub fn is_tier_column(&self, i: usize) -> bool {
        self.tier_column[i]
    }

    /// Numeric columns that actually move.
    pub fn moving_numeric(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.width()).filter(|i| !self.tier_column[*i] && !self.bounds[*i].is_point())
    }

    /// Symbols carried by freed tiers.
    pub fn tier_symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.tier_groups.iter().flat_map(|g| g.symbols())
    }

    /// First symbol index free for condensation.
    pub(crate) fn fresh_symbol_base(&self) -> Symbol {
        self.width()
    }

    pub fn center(&self) -> Vec<f64> {
        self.bounds.iter().map(IntervalValue::mid).collect()
    }

    /// Splits numeric column `i` at `at` into the lower and upper halves.
    pub fn split(&self, i: usize, at: f64) -> Result<(AbstractRegion, AbstractRegion)> {
        let b = self.bounds[i];
        if self.tier_column[i] || !(b.lo() <= at && at <= b.hi()) {
            return Err(Error::InvalidPerturbation(format!(
                "cannot split column {i} of {b} at {at}"
            )));
        }
        let mut lo = self.bounds.clone();
        let mut hi = self.bounds.clone();
        lo[i] = IntervalValue::new(b.lo(), at)?;
        hi[i] = IntervalValue::new(at, b.hi())?;
        Ok((
            AbstractRegion::from_box(lo, self.tier_groups.clone(), self.domain, self.oh_enabled)?,
            AbstractRegion::from_box(hi, self.tier_groups.clone(), self.domain, self.oh_enabled)?,
        ))
    }

    /// Whether `z` is a legal point of the region: inside the box, with each
    /// freed tier one-hot.
    pub fn contains(&self, z: &[f64], tol: f64) -> bool {
        if z.len() != self.width() {
            return false;
        }
        let in_box = self
            .bounds
            .iter()
            .zip(z)
            .enumerate()
            .all(|(i, (b, v))| {
                if self.tier_column[i] {
                    *v == 0.0 || *v == 1.0
                } else if b.is_point() {
                    *v == b.lo()
                } else {
                    b.contains_approx(*v, tol)
                }
            });
        in_box
            && self
                .tier_groups
                .iter()
                .all(|g| z[g.columns.clone()].iter().filter(|v| **v == 1.0).count() == 1)
    }
}
