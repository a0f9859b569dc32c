use serde::Serialize;

use crate::error::{Error, Result};

/// Standardized clustering of importance indices into integer grades.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AfiScores {
    pub mu: f64,
    pub sigma: f64,
    pub scores: Vec<i64>,
    pub grades: Vec<i64>,
}

const MIN_GRADE: i64 = 3;
const MAX_GRADE: i64 = 10;

/// `scoreᵢ = ⌈(aᵢ − μ)/σ⌉` and `gradeᵢ = clamp(scoreᵢ + 6, 3, 10)`, with `σ`
/// the sample standard deviation. Equal indices all score 0.
pub fn afi_scores(indices: &[f64]) -> Result<AfiScores> {
    let n = indices.len();
    if n < 2 {
        return Err(Error::TooFewValues { needed: 2, got: n });
    }
    let mu = indices.iter().sum::<f64>() / n as f64;
    let var = indices.iter().map(|a| (a - mu).powi(2)).sum::<f64>() / (n - 1) as f64;
    let sigma = var.sqrt();
    let scores: Vec<i64> = indices
        .iter()
        .map(|a| {
            if sigma <= f64::EPSILON * mu.abs().max(1.0) {
                0
            } else {
                // the small shift keeps values that are integral up to rounding
                // from jumping to the next slice
                ((a - mu) / sigma - 1e-12).ceil() as i64
            }
        })
        .collect();
    let grades = scores.iter().map(|s| (s + 6).clamp(MIN_GRADE, MAX_GRADE)).collect();
    Ok(AfiScores {
        mu,
        sigma,
        scores,
        grades,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_distribution() {
        let s = afi_scores(&[1., 6., 2., 5., 6., 1., 6., 7., 8., 9.]).unwrap();
        assert_eq!(s.grades, vec![5, 7, 5, 6, 7, 5, 7, 7, 8, 8]);
        assert!((s.mu - 5.1).abs() < 1e-12);
        assert!((s.sigma - 2.85).abs() < 5e-3);
    }

    #[test]
    fn equal_indices() {
        let s = afi_scores(&[0.3; 4]).unwrap();
        assert_eq!(s.scores, vec![0; 4]);
        assert_eq!(s.grades, vec![6; 4]);
    }

    #[test]
    fn index_at_mean_scores_zero() {
        let s = afi_scores(&[1., 2., 3.]).unwrap();
        assert_eq!(s.scores[1], 0);
        assert_eq!(s.grades[1], 6);
    }

    #[test]
    fn grades_are_clamped() {
        let mut v = vec![0.0; 40];
        v.push(1000.0);
        let s = afi_scores(&v).unwrap();
        assert_eq!(*s.grades.last().unwrap(), 10);
        assert!(s.grades.iter().all(|g| (3..=10).contains(g)));
    }

    #[test]
    fn needs_two_values() {
        assert!(matches!(afi_scores(&[1.0]), Err(Error::TooFewValues { needed: 2, got: 1 })));
    }
}
