use std::fmt::Write as _;

use serde::Serialize;
use svmcert_core::afi::{PfiReport, RankComparison};
use svmcert_core::{ImportanceReport, IntervalValue, Label, SearchConfig};

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub model_digest: String,
    pub spec: SpecEcho,
    pub rows: Vec<Row>,
    pub aggregates: Aggregates,
    pub importance: Option<ImportanceBlock>,
    pub timing: Timing,
}

#[derive(Debug, Serialize, Default)]
pub struct SpecEcho {
    pub similarity: Option<String>,
    pub epsilon: Option<f64>,
    pub sensitive: Vec<String>,
    pub domain: Option<String>,
    pub oh: Option<bool>,
    pub search: Option<SearchConfig>,
    pub seed: u64,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Proved,
    CexFound { point: Vec<f64>, label: Label, depth: usize },
    Unknown,
}

#[derive(Debug, Serialize)]
pub struct Row {
    pub index: usize,
    pub concrete_label: Label,
    pub verdict: Verdict,
    pub output_range: IntervalValue,
}

#[derive(Debug, Serialize, Default)]
pub struct Aggregates {
    pub n: usize,
    pub proved: usize,
    pub cex_found: usize,
    pub unknown: usize,
    pub lb: Option<f64>,
    pub ub: Option<f64>,
    pub accuracy: Option<f64>,
    pub balanced_accuracy: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct ImportanceBlock {
    /// Which region the AFI was read from.
    pub region: &'static str,
    pub afi: ImportanceReport,
    pub pfi: Option<PfiReport>,
    pub afi_vs_pfi: Option<Comparison>,
    pub stability: Option<Vec<(String, f64)>>,
    pub afi_vs_stability: Option<Comparison>,
}

/// Rank comparison over the features both measures share.
#[derive(Debug, Serialize)]
pub struct Comparison {
    pub features: Vec<String>,
    #[serde(flatten)]
    pub ranks: RankComparison,
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub elapsed: f64,
}

impl Aggregates {
    pub fn from_rows(rows: &[Row]) -> Self {
        let count = |f: fn(&Verdict) -> bool| rows.iter().filter(|r| f(&r.verdict)).count();
        Aggregates {
            n: rows.len(),
            proved: count(|v| matches!(v, Verdict::Proved)),
            cex_found: count(|v| matches!(v, Verdict::CexFound { .. })),
            unknown: count(|v| matches!(v, Verdict::Unknown)),
            ..Aggregates::default()
        }
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.4}"))
}

impl RunReport {
    /// Human-readable summary.
    pub fn table(&self) -> String {
        let mut s = String::new();
        let a = &self.aggregates;
        let _ = writeln!(s, "command   {}", self.command);
        let _ = writeln!(s, "model     sha256:{}", &self.model_digest[..16]);
        if !self.rows.is_empty() {
            let _ = writeln!(s, "rows      {}  proved {}  cex {}  unknown {}", a.n, a.proved, a.cex_found, a.unknown);
        }
        let _ = writeln!(s, "lb        {}", opt(a.lb));
        let _ = writeln!(s, "ub        {}", opt(a.ub));
        let _ = writeln!(s, "accuracy  {}", opt(a.accuracy));
        let _ = writeln!(s, "balanced  {}", opt(a.balanced_accuracy));
        if let Some(imp) = &self.importance {
            let _ = writeln!(s, "\n{:<24} {:>12} {:>6}", "feature", "afi", "grade");
            for ((n, v), g) in imp.afi.names.iter().zip(&imp.afi.indices).zip(&imp.afi.grades) {
                let _ = writeln!(s, "{n:<24} {v:>12.6} {g:>6}");
            }
            if let Some(c) = &imp.afi_vs_pfi {
                let _ = writeln!(s, "afi vs pfi        spearman {:.4}  kendall {:.4}", c.ranks.spearman, c.ranks.kendall);
            }
            if let Some(c) = &imp.afi_vs_stability {
                let _ = writeln!(
                    s,
                    "afi vs stability  spearman {:.4}  kendall {:.4}",
                    c.ranks.spearman, c.ranks.kendall
                );
            }
        }
        let _ = writeln!(s, "elapsed   {:.3}s", self.timing.elapsed);
        s
    }
}
