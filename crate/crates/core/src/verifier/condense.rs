use crate::domains::{RafValue, Symbol};
use crate::verifier::region::TierGroup;

/// Replaces the terms of each freed tier by one fresh symbol.
///
/// A legal tier sets exactly one member to 1, so its symbols take `+1` at one
/// position and `-1` elsewhere. For member `i` the tier contributes
/// `δᵢ = aᵢ − Σ_{j≠i} aⱼ`; the terms are replaced by
/// `mid(δ) + rad(δ)·ε_new` with `ε_new = base + group index`.
pub fn condense_tiers(out: &RafValue, groups: &[TierGroup], base: Symbol) -> RafValue {
    if out.is_top() {
        return RafValue::top();
    }
    let mut acc = out.clone();
    for (g, group) in groups.iter().enumerate() {
        let symbols: Vec<Symbol> = group.symbols().collect();
        let coeffs: Vec<f64> = symbols.iter().map(|s| out.coeff(*s)).collect();
        let total: f64 = coeffs.iter().sum();
        let (lo, hi) = coeffs
            .iter()
            .map(|a| 2.0 * a - total)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), d| (l.min(d), h.max(d)));
        let replacement = RafValue::with_symbol(0.5 * (lo + hi), base + g, 0.5 * (hi - lo));
        acc = acc.replace_terms(&symbols, &replacement);
    }
    acc
}
