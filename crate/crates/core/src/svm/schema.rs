//! Feature schemas: numeric features with ranges and one-hot tier members.

use serde::{Deserialize, Serialize};

use crate::domains::IntervalValue;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureDescriptor {
    pub name: String,
    #[serde(flatten)]
    pub kind: FeatureKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FeatureKind {
    Numeric {
        #[serde(default = "unit_range")]
        range: IntervalValue,
    },
    /// Member `position` (1-based) of a tier of `width` columns.
    Tier {
        category: String,
        position: usize,
        width: usize,
    },
}

fn unit_range() -> IntervalValue {
    IntervalValue::new(0.0, 1.0).expect("unit range")
}

/// A categorical feature: `width` contiguous columns starting at `start`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Category {
    pub name: String,
    pub start: usize,
    pub width: usize,
}

impl Category {
    pub fn columns(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.width
    }
}

/// Ordered feature list plus the derived feature → tier lookup table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SchemaRepr", into = "SchemaRepr")]
pub struct FeatureSchema {
    features: Vec<FeatureDescriptor>,
    categories: Vec<Category>,
    /// Column → index into `categories`.
    tier_of: Vec<Option<usize>>,
}

#[derive(Serialize, Deserialize)]
struct SchemaRepr {
    features: Vec<FeatureDescriptor>,
}

impl TryFrom<SchemaRepr> for FeatureSchema {
    type Error = Error;
    fn try_from(r: SchemaRepr) -> Result<Self> {
        FeatureSchema::new(r.features)
    }
}

impl From<FeatureSchema> for SchemaRepr {
    fn from(s: FeatureSchema) -> Self {
        SchemaRepr {
            features: s.features,
        }
    }
}

impl FeatureSchema {
    pub fn new(features: Vec<FeatureDescriptor>) -> Result<Self> {
        let mut categories: Vec<Category> = Vec::new();
        let mut tier_of = vec![None; features.len()];
        let mut names = std::collections::HashSet::new();
        let mut i = 0;
        while i < features.len() {
            if !names.insert(features[i].name.as_str()) {
                return Err(Error::InvalidSchema(format!(
                    "duplicate feature name `{}`",
                    features[i].name
                )));
            }
            match &features[i].kind {
                FeatureKind::Numeric { .. } => i += 1,
                FeatureKind::Tier {
                    category,
                    position,
                    width,
                } => {
                    if *position != 1 {
                        return Err(Error::InvalidSchema(format!(
                            "tier `{category}` must start at position 1 (feature `{}`)",
                            features[i].name
                        )));
                    }
                    if *width < 2 {
                        return Err(Error::InvalidSchema(format!(
                            "tier `{category}` has width {width}; at least 2 required"
                        )));
                    }
                    if categories.iter().any(|c| &c.name == category) {
                        return Err(Error::InvalidSchema(format!(
                            "tier `{category}` is not contiguous"
                        )));
                    }
                    for p in 1..=*width {
                        let j = i + p - 1;
                        let ok = matches!(
                            features.get(j).map(|f| &f.kind),
                            Some(FeatureKind::Tier { category: c, position: q, width: w })
                                if c == category && *q == p && w == width
                        );
                        if !ok {
                            return Err(Error::InvalidSchema(format!(
                                "tier `{category}` expects member {p} of {width} at column {j}"
                            )));
                        }
                        if j > i && !names.insert(features[j].name.as_str()) {
                            return Err(Error::InvalidSchema(format!(
                                "duplicate feature name `{}`",
                                features[j].name
                            )));
                        }
                        tier_of[j] = Some(categories.len());
                    }
                    categories.push(Category {
                        name: category.clone(),
                        start: i,
                        width: *width,
                    });
                    i += width;
                }
            }
        }
        Ok(FeatureSchema {
            features,
            categories,
            tier_of,
        })
    }

    /// Schema of `d` numeric features `x1..xd` with the given range.
    pub fn numeric(d: usize, range: IntervalValue) -> Self {
        let features = (1..=d)
            .map(|i| FeatureDescriptor {
                name: format!("x{i}"),
                kind: FeatureKind::Numeric { range },
            })
            .collect();
        FeatureSchema::new(features).expect("numeric schema is valid")
    }

    pub fn width(&self) -> usize {
        self.features.len()
    }

    pub fn features(&self) -> &[FeatureDescriptor] {
        &self.features
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.features.iter().map(|f| f.name.as_str())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.features.iter().position(|f| f.name == name)
    }

    pub fn categories(&self) -> &[Category] {
        &self.categories
    }

    pub fn category(&self, name: &str) -> Option<&Category> {
        self.categories.iter().find(|c| c.name == name)
    }

    /// Category owning column `i`, if any.
    pub fn tier_of(&self, i: usize) -> Option<&Category> {
        self.tier_of.get(i).copied().flatten().map(|c| &self.categories[c])
    }

    pub fn is_numeric(&self, i: usize) -> bool {
        matches!(
            self.features.get(i).map(|f| &f.kind),
            Some(FeatureKind::Numeric { .. })
        )
    }

    pub fn numeric_indices(&self) -> Vec<usize> {
        (0..self.width()).filter(|i| self.is_numeric(*i)).collect()
    }

    pub fn range(&self, i: usize) -> Option<IntervalValue> {
        match &self.features.get(i)?.kind {
            FeatureKind::Numeric { range } => Some(*range),
            FeatureKind::Tier { .. } => None,
        }
    }

    /// Checks row width and that every tier holds exactly one 1 and zeros.
    pub fn check_row(&self, x: &[f64]) -> std::result::Result<(), String> {
        if x.len() != self.width() {
            return Err(format!("expected {} values, got {}", self.width(), x.len()));
        }
        if let Some(i) = x.iter().position(|v| !v.is_finite()) {
            return Err(format!("non-finite value in column `{}`", self.features[i].name));
        }
        for c in &self.categories {
            let vals = &x[c.columns()];
            let ones = vals.iter().filter(|v| **v == 1.0).count();
            let zeros = vals.iter().filter(|v| **v == 0.0).count();
            if ones != 1 || zeros != c.width - 1 {
                return Err(format!("tier `{}` is not one-hot: {vals:?}", c.name));
            }
        }
        Ok(())
    }
}
