//! Reduced affine forms: `a₀ + Σ aᵢεᵢ + a_r ε_r` with every `ε ∈ [-1, 1]`.
//!
//! Linear coefficients are kept per noise symbol, so affine operations are
//! exact and shared symbols cancel. Everything a nonlinear operation cannot
//! express is folded into the single accumulated radius `a_r`.

use std::collections::BTreeMap;
use std::fmt;

use crate::domains::interval::IntervalValue;
use crate::error::{Error, Result};

/// Identifier of a noise symbol `εᵢ`.
pub type Symbol = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct RafValue {
    center: f64,
    linear: BTreeMap<Symbol, f64>,
    radius: f64,
    top: bool,
}

/// How [`RafValue::exp_scaled_with`] abstracts the exponential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExpMode {
    /// Minimax linearization; keeps per-symbol coefficients.
    #[default]
    Chebyshev,
    /// Evaluate on the range and drop every linear term (debug fallback).
    IntervalCollapse,
}

impl RafValue {
    pub fn constant(c: f64) -> Self {
        RafValue {
            center: c,
            linear: BTreeMap::new(),
            radius: 0.0,
            top: false,
        }
    }

    pub fn top() -> Self {
        RafValue {
            center: 0.0,
            linear: BTreeMap::new(),
            radius: 0.0,
            top: true,
        }
    }

    /// `center + coeff·ε_symbol`.
    pub fn with_symbol(center: f64, symbol: Symbol, coeff: f64) -> Self {
        RafValue::from_parts(center, [(symbol, coeff)], 0.0)
    }

    /// Builds a form from raw parts, dropping zero coefficients. A negative or
    /// non-finite part produces top.
    pub fn from_parts(
        center: f64,
        linear: impl IntoIterator<Item = (Symbol, f64)>,
        radius: f64,
    ) -> Self {
        let mut map = BTreeMap::new();
        for (s, c) in linear {
            *map.entry(s).or_insert(0.0) += c;
        }
        RafValue {
            center,
            linear: map,
            radius,
            top: false,
        }
        .normalized()
    }

    /// Center ± radius, carried entirely by `ε_r`.
    pub fn from_interval(iv: &IntervalValue) -> Self {
        if !iv.is_bounded() {
            return RafValue::top();
        }
        RafValue::from_parts(iv.mid(), [], iv.radius())
    }

    fn normalized(mut self) -> Self {
        self.linear.retain(|_, c| *c != 0.0);
        let finite = self.center.is_finite()
            && self.radius.is_finite()
            && self.radius >= 0.0
            && self.linear.values().all(|c| c.is_finite());
        if !finite {
            return RafValue::top();
        }
        self
    }

    pub fn is_top(&self) -> bool {
        self.top
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn nonlinear_radius(&self) -> f64 {
        self.radius
    }

    /// Coefficient of `ε_symbol` (0 when absent).
    pub fn coeff(&self, symbol: Symbol) -> f64 {
        self.linear.get(&symbol).copied().unwrap_or(0.0)
    }

    /// Nonzero linear terms in symbol order.
    pub fn terms(&self) -> impl Iterator<Item = (Symbol, f64)> + '_ {
        self.linear.iter().map(|(s, c)| (*s, *c))
    }

    pub fn is_constant(&self) -> bool {
        !self.top && self.linear.is_empty() && self.radius == 0.0
    }

    /// `Σ|aᵢ|` over the linear terms.
    pub fn linear_magnitude(&self) -> f64 {
        self.linear.values().map(|c| c.abs()).sum()
    }

    /// `Σ|aᵢ| + a_r`.
    pub fn total_radius(&self) -> f64 {
        self.linear_magnitude() + self.radius
    }

    /// Concretization as an interval. Top has no bounded range.
    pub fn range(&self) -> Result<IntervalValue> {
        if self.top {
            return Err(Error::Unbounded);
        }
        let r = self.total_radius();
        IntervalValue::new(self.center - r, self.center + r)
    }

    /// Like [`range`](Self::range) but maps top to `(-∞, ∞)`.
    pub fn range_or_unbounded(&self) -> IntervalValue {
        self.range().unwrap_or_else(|_| IntervalValue::unbounded())
    }

    /// Evaluates the form at a concrete assignment of the linear symbols and
    /// of `ε_r`. Missing symbols are taken as 0.
    pub fn evaluate(&self, eps: impl Fn(Symbol) -> f64, eps_r: f64) -> f64 {
        self.center + self.terms().map(|(s, c)| c * eps(s)).sum::<f64>() + self.radius * eps_r
    }

    /// `α·a + β`, coefficient-wise; exact.
    pub fn affine(&self, alpha: f64, beta: f64) -> RafValue {
        if self.top {
            return RafValue::top();
        }
        RafValue {
            center: alpha * self.center + beta,
            linear: self.linear.iter().map(|(s, c)| (*s, alpha * c)).collect(),
            radius: alpha.abs() * self.radius,
            top: false,
        }
        .normalized()
    }

    pub fn add(&self, other: &RafValue) -> RafValue {
        if self.top || other.top {
            return RafValue::top();
        }
        let mut linear = self.linear.clone();
        for (s, c) in &other.linear {
            *linear.entry(*s).or_insert(0.0) += c;
        }
        RafValue {
            center: self.center + other.center,
            linear,
            radius: self.radius + other.radius,
            top: false,
        }
        .normalized()
    }

    pub fn sub(&self, other: &RafValue) -> RafValue {
        self.add(&other.affine(-1.0, 0.0))
    }

    /// Product of two forms.
    ///
    /// Center `a₀b₀`, linear part `a₀bᵢ + b₀aᵢ`, and the remainder bounded by
    /// `|a₀|b_r + |b₀|a_r + R_a·R_b` with `R = Σ|aᵢ| + a_r`.
    pub fn mul(&self, other: &RafValue) -> RafValue {
        if self.top || other.top {
            return RafValue::top();
        }
        if self.is_constant() {
            return other.affine(self.center, 0.0);
        }
        if other.is_constant() {
            return self.affine(other.center, 0.0);
        }
        let (a0, b0) = (self.center, other.center);
        let mut linear: BTreeMap<Symbol, f64> =
            self.linear.iter().map(|(s, c)| (*s, b0 * c)).collect();
        for (s, c) in &other.linear {
            *linear.entry(*s).or_insert(0.0) += a0 * c;
        }
        let radius = a0.abs() * other.radius
            + b0.abs() * self.radius
            + self.total_radius() * other.total_radius();
        RafValue {
            center: a0 * b0,
            linear,
            radius,
            top: false,
        }
        .normalized()
    }

    /// Sound abstraction of `u ↦ e^{scale·u}` by minimax linearization.
    pub fn exp_scaled(&self, scale: f64) -> RafValue {
        self.exp_scaled_with(scale, ExpMode::Chebyshev)
    }

    pub fn exp_scaled_with(&self, scale: f64, mode: ExpMode) -> RafValue {
        if self.top {
            return RafValue::top();
        }
        let f = |u: f64| (scale * u).exp();
        let range = match self.range() {
            Ok(r) => r,
            Err(_) => return RafValue::top(),
        };
        let (lo, hi) = (range.lo(), range.hi());
        if scale == 0.0 {
            return RafValue::constant(1.0);
        }
        if lo == hi {
            return RafValue::constant(f(lo));
        }
        let (flo, fhi) = (f(lo), f(hi));
        if !flo.is_finite() || !fhi.is_finite() {
            return RafValue::top();
        }
        if mode == ExpMode::IntervalCollapse {
            return RafValue::from_interval(&IntervalValue::hull(flo, fhi));
        }
        let slope = (fhi - flo) / (hi - lo);
        // f is convex, so f(u) - slope·u is minimal where f'(u) = slope.
        let residual = |u: f64| f(u) - slope * u;
        let tangent = if slope / scale > 0.0 {
            ((slope / scale).ln() / scale).clamp(lo, hi)
        } else {
            lo
        };
        let upper = residual(lo).max(residual(hi));
        let lower = residual(tangent).min(residual(lo)).min(residual(hi));
        let intercept = 0.5 * (upper + lower);
        let delta = 0.5 * (upper - lower);
        let mut out = self.affine(slope, intercept);
        if out.top {
            return out;
        }
        out.radius += delta;
        out.normalized()
    }

    /// Moves every linear term whose symbol fails `keep` into `ε_r`.
    pub fn collapse_except(&self, keep: impl Fn(Symbol) -> bool) -> RafValue {
        if self.top {
            return RafValue::top();
        }
        let mut out = self.clone();
        let mut folded = 0.0;
        out.linear.retain(|s, c| {
            if keep(*s) {
                true
            } else {
                folded += c.abs();
                false
            }
        });
        out.radius += folded;
        out
    }

    /// Replaces the terms over `symbols` with `replacement`, which must be a
    /// form over symbols disjoint from the remaining ones.
    pub(crate) fn replace_terms(&self, symbols: &[Symbol], replacement: &RafValue) -> RafValue {
        if self.top {
            return RafValue::top();
        }
        let mut rest = self.clone();
        for s in symbols {
            rest.linear.remove(s);
        }
        rest.add(replacement)
    }
}

impl fmt::Display for RafValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.top {
            return write!(f, "⊤");
        }
        write!(f, "{}", self.center)?;
        for (s, c) in &self.linear {
            write!(f, " {} {}ε{}", if *c < 0.0 { '-' } else { '+' }, c.abs(), s)?;
        }
        if self.radius > 0.0 {
            write!(f, " + {}ε_r", self.radius)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn eps(center: f64, terms: &[(Symbol, f64)], r: f64) -> RafValue {
        RafValue::from_parts(center, terms.iter().copied(), r)
    }

    #[test]
    fn range_examples() {
        let a = eps(1., &[(1, 2.)], 0.5);
        assert_eq!(a.range().unwrap(), IntervalValue::new(-1.5, 3.5).unwrap());
        assert_eq!(RafValue::constant(0.).range().unwrap(), IntervalValue::point(0.));
        let b = eps(0., &[(1, 1.), (2, 1.)], 0.);
        assert_eq!(b.range().unwrap(), IntervalValue::new(-2., 2.).unwrap());
        assert!(matches!(RafValue::top().range(), Err(Error::Unbounded)));
    }

    #[test]
    fn affine_examples() {
        let a = eps(1., &[(1, 1.)], 0.5);
        assert_eq!(a.affine(1., 0.), a);
        assert_eq!(eps(0., &[(1, 1.)], 0.).affine(-0.5, 0.), eps(0., &[(1, -0.5)], 0.));
        assert_eq!(a.affine(-2., 3.), eps(1., &[(1, -2.)], 1.));
    }

    #[test]
    fn add_examples() {
        let x = eps(0., &[(1, 1.)], 0.);
        assert_eq!(x.add(&eps(0., &[(1, -1.)], 0.)), RafValue::constant(0.));
        assert_eq!(
            eps(1., &[(1, 2.)], 0.).add(&eps(2., &[(2, 3.)], 0.)),
            eps(3., &[(1, 2.), (2, 3.)], 0.)
        );
        // -0.5·(-0.5ε₁ + ε₂) + 0.5·(0.5ε₁ - ε₂)
        let v1 = eps(0., &[(1, -0.5), (2, 1.)], 0.);
        let v2 = eps(0., &[(1, 0.5), (2, -1.)], 0.);
        assert_eq!(
            v1.affine(-0.5, 0.).add(&v2.affine(0.5, 0.)),
            eps(0., &[(1, 0.5), (2, -1.)], 0.)
        );
    }

    #[test]
    fn dependency_problem_is_fixed() {
        let c = 3.0;
        let x = eps(0., &[(1, c)], 0.);
        let diff = x.sub(&x);
        assert!(diff.is_constant());
        assert_eq!(diff.center(), 0.);
    }

    #[test]
    fn top_propagates() {
        let x = eps(0., &[(1, 1.)], 0.);
        assert!(x.add(&RafValue::top()).is_top());
        assert!(RafValue::top().mul(&x).is_top());
        assert!(RafValue::top().affine(2., 1.).is_top());
        assert!(RafValue::top().exp_scaled(-1.).is_top());
    }

    #[test]
    fn mul_square_of_symbol() {
        let x = eps(0., &[(1, 1.)], 0.);
        let sq = x.mul(&x);
        assert_eq!(sq, eps(0., &[], 1.));
        let r = sq.range().unwrap();
        assert!(r.contains(0.) && r.contains(1.));
    }

    #[test]
    fn mul_by_constant_is_affine() {
        let b = eps(2., &[(1, 3.), (4, -1.)], 0.25);
        assert_eq!(RafValue::constant(-1.5).mul(&b), b.affine(-1.5, 0.));
        assert_eq!(b.mul(&RafValue::constant(-1.5)), b.affine(-1.5, 0.));
    }

    #[test]
    fn mul_polynomial_square_example() {
        let a = eps(47., &[(1, 8.), (2, 7.)], 0.);
        let sq = a.mul(&a);
        assert_eq!(sq.center(), 2209.0);
        assert_eq!(sq.coeff(1), 752.0);
        assert_eq!(sq.coeff(2), 658.0);
        assert!(sq.nonlinear_radius() <= 225.0);
        let range = sq.range().unwrap();
        // x² is monotone on [47-15, 47+15]
        assert!(range.contains(32.0 * 32.0) && range.contains(62.0 * 62.0));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let (e1, e2) = (rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
            let x = 47. + 8. * e1 + 7. * e2;
            assert!(range.contains(x * x));
        }
    }

    #[test]
    fn mul_soundness_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let random_form = |rng: &mut ChaCha8Rng| {
            let mut terms: Vec<(Symbol, f64)> = Vec::new();
            for s in 0..4 {
                if rng.gen_bool(0.7) {
                    terms.push((s, rng.gen_range(-3.0..3.0)));
                }
            }
            eps(rng.gen_range(-5.0..5.0), &terms, rng.gen_range(0.0..0.5))
        };
        for _ in 0..100_000 {
            let a = random_form(&mut rng);
            let b = random_form(&mut rng);
            let e: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let (ra, rb) = (rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
            let x = a.evaluate(|s| e[s], ra);
            let y = b.evaluate(|s| e[s], rb);
            let p = a.mul(&b);
            assert!(p.range().unwrap().contains_approx(x * y, 1e-9));
            let baseline = a.center().abs() * b.nonlinear_radius()
                + b.center().abs() * a.nonlinear_radius()
                + a.total_radius() * b.total_radius();
            assert!(p.nonlinear_radius() <= baseline + 1e-12);
        }
    }

    #[test]
    fn exp_constant_input() {
        let c = RafValue::constant(0.3);
        let e = c.exp_scaled(-2.0);
        assert!(e.is_constant());
        assert_abs_diff_eq!(e.center(), (-0.6f64).exp(), epsilon = 1e-15);
    }

    #[test]
    fn exp_unit_symbol() {
        let a = eps(0., &[(1, 1.)], 0.);
        let e = a.exp_scaled(-1.0);
        let slope = ((-1f64).exp() - 1f64.exp()) / 2.0;
        assert_abs_diff_eq!(e.coeff(1), slope, epsilon = 1e-12);
        let r = e.range().unwrap();
        assert!(r.contains((-1f64).exp()) && r.contains(1f64.exp()));
    }

    #[test]
    fn exp_collapse_mode_drops_symbols() {
        let a = eps(0.5, &[(1, 1.), (3, 0.25)], 0.1);
        let e = a.exp_scaled_with(-1.5, ExpMode::IntervalCollapse);
        assert_eq!(e.terms().count(), 0);
        let r = a.range().unwrap();
        let er = e.range().unwrap();
        assert!(er.contains_approx((-1.5 * r.lo()).exp(), 1e-12));
        assert!(er.contains_approx((-1.5 * r.hi()).exp(), 1e-12));
    }

    #[test]
    fn exp_soundness_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let terms: Vec<(Symbol, f64)> = (0..3).map(|s| (s, rng.gen_range(-2.0..2.0))).collect();
            let a = eps(rng.gen_range(-2.0..4.0), &terms, rng.gen_range(0.0..0.3));
            let scale = -rng.gen_range(0.01..3.0);
            let e = a.exp_scaled(scale);
            for _ in 0..1000 {
                let es: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                let er = rng.gen_range(-1.0..=1.0);
                let u = a.evaluate(|s| es[s], er);
                let fu = (scale * u).exp();
                // the linear coefficients are shared, so check the relational
                // form: f(u) = slope·u + intercept + δ·ε' for some ε' ∈ [-1,1]
                assert!(e.range().unwrap().contains_approx(fu, 1e-9));
                let lin = e.center() + e.terms().map(|(s, c)| c * es[s]).sum::<f64>();
                let slope = e.coeff(0) / a.coeff(0);
                let dev = fu - (lin + slope * a.nonlinear_radius() * er);
                assert!(dev.abs() <= e.nonlinear_radius() - a.nonlinear_radius() * slope.abs() + 1e-9);
            }
        }
    }

    fn affine_expr() -> impl Strategy<Value = (f64, Vec<(Symbol, f64)>)> {
        (
            -10.0..10.0f64,
            proptest::collection::vec((0usize..5, -4.0..4.0f64), 0..8),
        )
    }

    proptest! {
        #[test]
        fn linear_ops_are_complete((c0, terms) in affine_expr(), alpha in -3.0..3.0f64, beta in -3.0..3.0f64) {
            // abstract evaluation of α·(Σ tᵢ εᵢ + c0) + β built term by term
            let mut acc = RafValue::constant(c0);
            for (s, c) in &terms {
                acc = acc.add(&RafValue::with_symbol(0.0, *s, *c));
            }
            let v = acc.affine(alpha, beta);
            // exact range: sum per-symbol totals
            let mut per = [0.0f64; 5];
            for (s, c) in &terms { per[*s] += c; }
            let center = alpha * c0 + beta;
            let rad: f64 = per.iter().map(|c| (alpha * c).abs()).sum();
            let r = v.range().unwrap();
            prop_assert!((r.lo() - (center - rad)).abs() <= 1e-9);
            prop_assert!((r.hi() - (center + rad)).abs() <= 1e-9);
        }

        #[test]
        fn no_zero_coefficients_stored((c0, terms) in affine_expr()) {
            let v = RafValue::from_parts(c0, terms, 0.0);
            prop_assert!(v.terms().all(|(_, c)| c != 0.0));
        }
    }
}
