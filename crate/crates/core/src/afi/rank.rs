use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankComparison {
    /// Feature indices by descending importance in `a`.
    pub order_a: Vec<usize>,
    pub order_b: Vec<usize>,
    /// 1-based rank of each feature.
    pub ranks_a: Vec<usize>,
    pub ranks_b: Vec<usize>,
    pub spearman: f64,
    pub kendall: f64,
}

/// Descending order; ties keep the lower index first.
pub fn descending_order(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&i, &j| v[j].total_cmp(&v[i]).then(i.cmp(&j)));
    idx
}

pub fn ranks_of(order: &[usize]) -> Vec<usize> {
    let mut ranks = vec![0; order.len()];
    for (pos, &i) in order.iter().enumerate() {
        ranks[i] = pos + 1;
    }
    ranks
}

/// Spearman's ρ between two tie-free rank vectors.
pub fn spearman(ra: &[usize], rb: &[usize]) -> f64 {
    let n = ra.len() as f64;
    let d2: f64 = ra.iter().zip(rb).map(|(a, b)| (*a as f64 - *b as f64).powi(2)).sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}

/// Kendall's τ between two tie-free rank vectors.
pub fn kendall(ra: &[usize], rb: &[usize]) -> f64 {
    let n = ra.len();
    let mut s = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            let a = (ra[i] as i64 - ra[j] as i64).signum();
            let b = (rb[i] as i64 - rb[j] as i64).signum();
            s += a * b;
        }
    }
    s as f64 / (n * (n - 1) / 2) as f64
}

pub fn rank_compare(a: &[f64], b: &[f64]) -> Result<RankComparison> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if a.len() < 2 {
        return Err(Error::TooFewValues { needed: 2, got: a.len() });
    }
    let order_a = descending_order(a);
    let order_b = descending_order(b);
    let ranks_a = ranks_of(&order_a);
    let ranks_b = ranks_of(&order_b);
    Ok(RankComparison {
        spearman: spearman(&ranks_a, &ranks_b),
        kendall: kendall(&ranks_a, &ranks_b),
        order_a,
        order_b,
        ranks_a,
        ranks_b,
    })
}
