//! Counterexample search guided by the output form's linear coefficients.
//!
//! At each node the region's vertex that pushes the decision value hardest
//! towards the opposite label is tried. If it keeps the original label the
//! region is cut in half along its most influential numeric axis and both
//! halves are searched depth-first, lower half first.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domains::{ExpMode, RafValue};
use crate::error::{Error, Result};
use crate::fairness::{similarity_to_perturbation, SimilaritySpec};
use crate::svm::{Label, LabeledDataset, SvmModel};
use crate::verifier::{raf_decision, verify_robust, AbstractRegion, DomainTag, PerturbationSpec, VerificationOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub max_depth: usize,
    /// A numeric axis is only cut while its width exceeds this fraction of
    /// its width in the starting region.
    pub min_region_fraction: f64,
    #[serde(with = "secs")]
    pub wall_timeout: Duration,
}

mod secs {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let v = f64::deserialize(d)?;
        Duration::try_from_secs_f64(v).map_err(serde::de::Error::custom)
    }
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_depth: 12,
            min_region_fraction: 0.001,
            wall_timeout: Duration::from_secs(1),
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.min_region_fraction > 0.0 && self.min_region_fraction <= 1.0) {
            return Err(Error::InvalidPerturbation(format!(
                "min_region_fraction must lie in (0, 1], got {}",
                self.min_region_fraction
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub point: Vec<f64>,
    pub label: Label,
    pub original_label: Label,
    pub decision_value: f64,
    pub depth_found: usize,
}

/// One visited node of the search tree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceNode {
    pub depth: usize,
    pub candidate: Vec<f64>,
    pub decision_value: f64,
    /// Axis and cut point, when the node was split.
    pub split: Option<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub counterexample: Option<Counterexample>,
    pub trace: Vec<TraceNode>,
    pub timed_out: bool,
}

/// The region vertex extremal in `direction` for the form `out`.
///
/// A numeric column goes to its upper bound when `direction·aᵢ > 0` and to its
/// lower bound otherwise, zero coefficients included. Each freed tier
/// activates the member with the largest `direction·aⱼ`, lowest position on
/// ties.
pub fn vertex_from(region: &AbstractRegion, out: &RafValue, direction: f64) -> Vec<f64> {
    let mut z: Vec<f64> = region
        .bounds()
        .iter()
        .enumerate()
        .map(|(i, b)| {
            if region.is_tier_column(i) {
                0.0
            } else if direction * out.coeff(i) > 0.0 {
                b.hi()
            } else {
                b.lo()
            }
        })
        .collect();
    for g in region.tier_groups() {
        let best = g
            .symbols()
            .fold(None::<(usize, f64)>, |best, s| {
                let v = direction * out.coeff(s);
                match best {
                    Some((_, bv)) if bv >= v => best,
                    _ => Some((s, v)),
                }
            })
            .map(|(s, _)| s)
            .expect("tiers have at least two members");
        z[best] = 1.0;
    }
    z
}

pub fn vertex_candidate(m: &SvmModel, region: &AbstractRegion, direction: f64) -> Result<Vec<f64>> {
    let out = raf_decision(m, region, ExpMode::default())?;
    Ok(vertex_from(region, &out, direction))
}

struct Search<'a> {
    m: &'a SvmModel,
    original: Label,
    direction: f64,
    cfg: SearchConfig,
    root_widths: Vec<f64>,
    deadline: Instant,
    trace: Vec<TraceNode>,
    timed_out: bool,
}

impl Search<'_> {
    fn visit(&mut self, region: &AbstractRegion, depth: usize, parent_axis: Option<usize>) -> Result<Option<Counterexample>> {
        if Instant::now() >= self.deadline {
            self.timed_out = true;
            return Ok(None);
        }
        let out = raf_decision(self.m, region, ExpMode::default())?;
        let candidate = vertex_from(region, &out, self.direction);
        let value = self.m.decision_value(&candidate)?;
        let label = Label::from_decision(value);
        self.trace.push(TraceNode {
            depth,
            candidate: candidate.clone(),
            decision_value: value,
            split: None,
        });
        if label != self.original {
            return Ok(Some(Counterexample {
                point: candidate,
                label,
                original_label: self.original,
                decision_value: value,
                depth_found: depth,
            }));
        }
        if depth >= self.cfg.max_depth {
            return Ok(None);
        }
        let splittable: Vec<usize> = region
            .moving_numeric()
            .filter(|&i| region.bounds()[i].width() / self.root_widths[i] > self.cfg.min_region_fraction)
            .collect();
        let pool: Vec<usize> = if splittable.len() > 1 {
            splittable.iter().copied().filter(|i| Some(*i) != parent_axis).collect()
        } else {
            splittable
        };
        let Some(axis) = pool
            .iter()
            .copied()
            .fold(None::<usize>, |best, i| match best {
                Some(b) if out.coeff(b).abs() >= out.coeff(i).abs() => Some(b),
                _ => Some(i),
            })
        else {
            return Ok(None);
        };
        let at = region.bounds()[axis].mid();
        let node = self.trace.len() - 1;
        self.trace[node].split = Some((axis, at));
        let (lo, hi) = region.split(axis, at)?;
        if let Some(c) = self.visit(&lo, depth + 1, Some(axis))? {
            return Ok(Some(c));
        }
        self.visit(&hi, depth + 1, Some(axis))
    }
}

/// Searches `region` for a point labelled differently from `x`.
pub fn search_region(m: &SvmModel, x: &[f64], region: &AbstractRegion, cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    let region = region.with_domain(DomainTag::Raf, false);
    let original = m.classify(x)?;
    let mut s = Search {
        m,
        original,
        direction: -original.sign(),
        cfg: *cfg,
        root_widths: region.bounds().iter().map(|b| b.width()).collect(),
        deadline: Instant::now() + cfg.wall_timeout,
        trace: Vec::new(),
        timed_out: false,
    };
    let found = s.visit(&region, 0, None)?;
    if let Some(c) = &found {
        if !region.contains(&c.point, 1e-9) || m.classify(&c.point)? == original {
            return Err(Error::Invariant(format!("invalid counterexample {:?}", c.point)));
        }
    }
    Ok(SearchOutcome {
        counterexample: found,
        trace: s.trace,
        timed_out: s.timed_out,
    })
}

/// Searches `P(x)` for a counterexample.
pub fn search(m: &SvmModel, x: &[f64], spec: &PerturbationSpec, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let region = AbstractRegion::build(x, spec, m.schema(), DomainTag::Raf, false)?;
    let out = search_region(m, x, &region, cfg)?;
    if let Some(c) = &out.counterexample {
        if !spec.admits(m.schema(), x, &c.point, 1e-9) {
            return Err(Error::Invariant(format!("counterexample {:?} lies outside P(x)", c.point)));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowBounds {
    pub outcome: VerificationOutcome,
    /// Present for rows that were not proved.
    pub search: Option<SearchOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub lb: f64,
    pub ub: f64,
    pub rows: Vec<RowBounds>,
}

/// Lower bound by verification and upper bound by counterexample search on
/// the rows the verifier could not prove.
pub fn fairness_bounds(
    m: &SvmModel,
    data: &LabeledDataset,
    s: &SimilaritySpec,
    cfg: &SearchConfig,
    domain: DomainTag,
    oh_enabled: bool,
) -> Result<BoundsReport> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    cfg.validate()?;
    let spec = similarity_to_perturbation(s);
    let rows: Vec<RowBounds> = data
        .rows()
        .par_iter()
        .map(|x| {
            let outcome = verify_robust(m, x, &spec, domain, oh_enabled)?;
            let search = if outcome.proved_robust {
                None
            } else {
                Some(search(m, x, &spec, cfg)?)
            };
            Ok(RowBounds { outcome, search })
        })
        .collect::<Result<_>>()?;
    let n = rows.len() as f64;
    let proved = rows.iter().filter(|r| r.outcome.proved_robust).count() as f64;
    let found = rows
        .iter()
        .filter(|r| r.search.as_ref().is_some_and(|s| s.counterexample.is_some()))
        .count() as f64;
    Ok(BoundsReport {
        lb: proved / n,
        ub: 1.0 - found / n,
        rows,
    })
}

/// `1 − (fraction of rows with a counterexample)`.
pub fn fairness_upper_bound(m: &SvmModel, data: &LabeledDataset, s: &SimilaritySpec, cfg: &SearchConfig) -> Result<f64> {
    Ok(fairness_bounds(m, data, s, cfg, DomainTag::Raf, true)?.ub)
}
