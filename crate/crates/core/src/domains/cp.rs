//! The flat constant-propagation domain `ℝ ∪ {⊥, ⊤}`.

use std::fmt;
use std::hash::{Hash, Hasher};

#[derive(Debug, Clone, Copy)]
pub enum CpValue {
    Bottom,
    Constant(f64),
    Top,
}

impl CpValue {
    /// A constant with `-0.0` canonicalized to `+0.0`.
    pub fn constant(z: f64) -> Self {
        CpValue::Constant(canonical(z))
    }

    /// Best abstraction of a finite set of reals: `⊥` for none, the constant
    /// for a singleton, `⊤` otherwise.
    pub fn abstract_set(values: impl IntoIterator<Item = f64>) -> Self {
        let mut acc = CpValue::Bottom;
        for v in values {
            acc = acc.join(CpValue::constant(v));
            if acc.is_top() {
                break;
            }
        }
        acc
    }

    pub fn join(self, other: CpValue) -> CpValue {
        match (self, other) {
            (CpValue::Bottom, x) | (x, CpValue::Bottom) => x,
            (CpValue::Top, _) | (_, CpValue::Top) => CpValue::Top,
            (a, b) if a == b => a,
            _ => CpValue::Top,
        }
    }

    pub fn is_top(&self) -> bool {
        matches!(self, CpValue::Top)
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, CpValue::Bottom)
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            CpValue::Constant(z) => Some(*z),
            _ => None,
        }
    }

    /// Membership in the concretization.
    pub fn admits(&self, x: f64) -> bool {
        match self {
            CpValue::Bottom => false,
            CpValue::Constant(z) => canonical(*z).to_bits() == canonical(x).to_bits(),
            CpValue::Top => true,
        }
    }

    /// Strict lifting of `f`: constants are mapped, `⊥` and `⊤` are fixed.
    pub fn apply(self, f: impl Fn(f64) -> f64) -> CpValue {
        match self {
            CpValue::Constant(z) => CpValue::constant(f(z)),
            other => other,
        }
    }

    /// Partial order `⊥ ⊑ z ⊑ ⊤`.
    pub fn leq(&self, other: &CpValue) -> bool {
        match (self, other) {
            (CpValue::Bottom, _) | (_, CpValue::Top) => true,
            (a, b) => a == b,
        }
    }
}

fn canonical(z: f64) -> f64 {
    if z == 0.0 {
        0.0
    } else {
        z
    }
}

impl PartialEq for CpValue {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (CpValue::Bottom, CpValue::Bottom) | (CpValue::Top, CpValue::Top) => true,
            (CpValue::Constant(a), CpValue::Constant(b)) => {
                canonical(*a).to_bits() == canonical(*b).to_bits()
            }
            _ => false,
        }
    }
}

impl Eq for CpValue {}

impl Hash for CpValue {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            CpValue::Bottom => 0u8.hash(state),
            CpValue::Top => 1u8.hash(state),
            CpValue::Constant(z) => {
                2u8.hash(state);
                canonical(*z).to_bits().hash(state);
            }
        }
    }
}

impl fmt::Display for CpValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CpValue::Bottom => write!(f, "⊥"),
            CpValue::Top => write!(f, "⊤"),
            CpValue::Constant(z) => write!(f, "{z}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(x: f64) -> f64 {
        x * x - 3.0 * x + 1.0
    }

    #[test]
    fn apply_examples() {
        assert_eq!(CpValue::constant(1.).apply(poly), CpValue::constant(-1.));
        assert_eq!(CpValue::Bottom.apply(poly), CpValue::Bottom);
        assert_eq!(CpValue::Top.apply(poly), CpValue::Top);
        assert_eq!(CpValue::constant(0.).apply(poly), CpValue::constant(1.));
    }

    #[test]
    fn negative_zero_is_canonical() {
        assert_eq!(CpValue::Constant(-0.0), CpValue::Constant(0.0));
        assert!(CpValue::constant(0.0).admits(-0.0));
    }

    #[test]
    fn abstraction_of_sets() {
        assert_eq!(CpValue::abstract_set([]), CpValue::Bottom);
        assert_eq!(CpValue::abstract_set([2.0, 2.0]), CpValue::constant(2.0));
        assert_eq!(CpValue::abstract_set([2.0, 3.0]), CpValue::Top);
    }

    #[test]
    fn order() {
        assert!(CpValue::Bottom.leq(&CpValue::constant(1.)));
        assert!(CpValue::constant(1.).leq(&CpValue::Top));
        assert!(!CpValue::constant(1.).leq(&CpValue::constant(2.)));
        assert!(!CpValue::Top.leq(&CpValue::constant(2.)));
    }
}
