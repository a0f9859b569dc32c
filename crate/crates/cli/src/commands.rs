use std::collections::HashMap;
use std::fs;
use std::time::{Duration, Instant};

use anyhow::{bail, ensure, Context, Result};
use sha2::{Digest, Sha256};
use svmcert_core::afi::{self, stability_importance};
use svmcert_core::cex::fairness_bounds;
use svmcert_core::svm::accuracy_scores;
use svmcert_core::{
    fairness_lower_bound, global_afi, rank_compare, DomainTag, Error, LabeledDataset, SearchConfig, SimilarityKind,
    SimilaritySpec, SvmModel,
};

use crate::report::{Aggregates, Comparison, ImportanceBlock, Row, RunReport, SpecEcho, Timing, Verdict};
use crate::{BoundsArgs, Common, EvalArgs, ImportanceArgs, Perturbation, Switch, VerifyArgs};

struct Loaded {
    model: SvmModel,
    digest: String,
}

fn setup(common: &Common) -> Result<Loaded> {
    if let Some(n) = common.jobs {
        ensure!(n > 0, Error::InvalidPerturbation("--jobs must be positive".into()));
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let bytes = fs::read(&common.model).with_context(|| format!("reading model {}", common.model.display()))?;
    let text = String::from_utf8(bytes.clone()).context("model file is not UTF-8")?;
    let model = SvmModel::from_json(&text).with_context(|| format!("loading model {}", common.model.display()))?;
    Ok(Loaded {
        model,
        digest: hex::encode(Sha256::digest(&bytes)),
    })
}

fn load_data(m: &SvmModel, path: &std::path::Path) -> Result<LabeledDataset> {
    LabeledDataset::load(m.schema(), path).with_context(|| format!("loading dataset {}", path.display()))
}

fn similarity(m: &SvmModel, p: &Perturbation) -> Result<SimilaritySpec> {
    let kind: SimilarityKind = p.similarity.into();
    if kind != SimilarityKind::Noise && p.sensitive.is_empty() {
        bail!(Error::InvalidPerturbation(format!("--similarity {kind} needs --sensitive")));
    }
    Ok(SimilaritySpec::of_kind(kind, m.schema(), p.epsilon, p.sensitive.clone()))
}

fn echo(p: &Perturbation, seed: u64) -> SpecEcho {
    SpecEcho {
        similarity: Some(SimilarityKind::from(p.similarity).to_string()),
        epsilon: Some(p.epsilon),
        sensitive: p.sensitive.clone(),
        domain: Some(format!("{:?}", p.domain).to_lowercase()),
        oh: Some(p.oh == Switch::On),
        search: None,
        seed,
    }
}

fn emit(report: &RunReport, common: &Common) -> Result<()> {
    let json = serde_json::to_string_pretty(report)?;
    match &common.out {
        Some(path) => {
            fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
            print!("{}", report.table());
        }
        None => {
            eprint!("{}", report.table());
            println!("{json}");
        }
    }
    Ok(())
}

fn with_accuracy(mut agg: Aggregates, m: &SvmModel, data: &LabeledDataset) -> Result<Aggregates> {
    let acc = accuracy_scores(m, data)?;
    agg.accuracy = Some(acc.accuracy);
    agg.balanced_accuracy = Some(acc.balanced_accuracy);
    Ok(agg)
}

pub fn verify(a: VerifyArgs) -> Result<()> {
    let start = Instant::now();
    let l = setup(&a.common)?;
    let data = load_data(&l.model, &a.data)?;
    let s = similarity(&l.model, &a.perturbation)?;
    let r = fairness_lower_bound(
        &l.model,
        &data,
        &s,
        a.perturbation.domain.into(),
        a.perturbation.oh == Switch::On,
    )?;
    let rows: Vec<Row> = r
        .outcomes
        .iter()
        .enumerate()
        .map(|(index, o)| Row {
            index,
            concrete_label: o.concrete,
            verdict: if o.proved_robust { Verdict::Proved } else { Verdict::Unknown },
            output_range: o.output.range,
        })
        .collect();
    let mut agg = Aggregates::from_rows(&rows);
    agg.lb = Some(r.lb);
    let report = RunReport {
        command: "verify",
        model_digest: l.digest,
        spec: echo(&a.perturbation, a.common.seed),
        aggregates: with_accuracy(agg, &l.model, &data)?,
        rows,
        importance: None,
        timing: Timing {
            elapsed: start.elapsed().as_secs_f64(),
        },
    };
    emit(&report, &a.common)
}

pub fn bounds(a: BoundsArgs) -> Result<()> {
    let start = Instant::now();
    let l = setup(&a.common)?;
    let data = load_data(&l.model, &a.data)?;
    let s = similarity(&l.model, &a.perturbation)?;
    let timeout = Duration::try_from_secs_f64(a.timeout)
        .map_err(|_| Error::InvalidPerturbation(format!("invalid --timeout {}", a.timeout)))?;
    let cfg = SearchConfig {
        max_depth: a.max_depth,
        min_region_fraction: a.min_region_fraction,
        wall_timeout: timeout,
    };
    let b = fairness_bounds(
        &l.model,
        &data,
        &s,
        &cfg,
        a.perturbation.domain.into(),
        a.perturbation.oh == Switch::On,
    )?;
    if b.lb > b.ub {
        bail!(Error::Invariant(format!("lb {} exceeds ub {}", b.lb, b.ub)));
    }
    let rows: Vec<Row> = b
        .rows
        .iter()
        .enumerate()
        .map(|(index, r)| {
            let cex = r.search.as_ref().and_then(|s| s.counterexample.as_ref());
            let verdict = match (r.outcome.proved_robust, cex) {
                (true, _) => Verdict::Proved,
                (false, Some(c)) => Verdict::CexFound {
                    point: c.point.clone(),
                    label: c.label,
                    depth: c.depth_found,
                },
                (false, None) => Verdict::Unknown,
            };
            Row {
                index,
                concrete_label: r.outcome.concrete,
                verdict,
                output_range: r.outcome.output.range,
            }
        })
        .collect();
    let mut agg = Aggregates::from_rows(&rows);
    agg.lb = Some(b.lb);
    agg.ub = Some(b.ub);
    let mut spec = echo(&a.perturbation, a.common.seed);
    spec.search = Some(cfg);
    let report = RunReport {
        command: "bounds",
        model_digest: l.digest,
        spec,
        aggregates: with_accuracy(agg, &l.model, &data)?,
        rows,
        importance: None,
        timing: Timing {
            elapsed: start.elapsed().as_secs_f64(),
        },
    };
    emit(&report, &a.common)
}

/// Compares two named score lists on the names they share, in the order of
/// the first list.
fn compare(a: &[(String, f64)], b: &[(String, f64)]) -> Result<Option<Comparison>> {
    let lookup: HashMap<&str, f64> = b.iter().map(|(n, v)| (n.as_str(), *v)).collect();
    let shared: Vec<(String, f64, f64)> = a
        .iter()
        .filter_map(|(n, v)| lookup.get(n.as_str()).map(|w| (n.clone(), *v, *w)))
        .collect();
    if shared.len() < 2 {
        return Ok(None);
    }
    let va: Vec<f64> = shared.iter().map(|s| s.1).collect();
    let vb: Vec<f64> = shared.iter().map(|s| s.2).collect();
    Ok(Some(Comparison {
        features: shared.into_iter().map(|s| s.0).collect(),
        ranks: rank_compare(&va, &vb)?,
    }))
}

pub fn importance(a: ImportanceArgs) -> Result<()> {
    let start = Instant::now();
    let l = setup(&a.common)?;
    if (a.pfi || a.stability) && a.data.is_none() {
        bail!(Error::InvalidDataset("--pfi and --stability need --data".into()));
    }
    let data = a.data.as_ref().map(|p| load_data(&l.model, p)).transpose()?;
    let report = global_afi(&l.model, a.oh == Switch::On)?;
    let named_afi: Vec<(String, f64)> = report.names.iter().cloned().zip(report.indices.iter().copied()).collect();

    let pfi = match (&data, a.pfi) {
        (Some(d), true) => Some(afi::pfi(&l.model, d, a.n_repeat, a.common.seed)?),
        _ => None,
    };
    let afi_vs_pfi = match &pfi {
        Some(p) => {
            let named: Vec<(String, f64)> = p.groups.iter().map(|g| g.name.clone()).zip(p.importances.iter().copied()).collect();
            compare(&named_afi, &named)?
        }
        None => None,
    };
    let stability = match (&data, a.stability) {
        (Some(d), true) => {
            let names: Vec<&str> = l.model.schema().names().collect();
            let st = stability_importance(&l.model, d, a.epsilon, DomainTag::Raf, true)?;
            Some(st.into_iter().map(|(i, v)| (names[i].to_string(), v)).collect::<Vec<_>>())
        }
        _ => None,
    };
    let afi_vs_stability = match &stability {
        Some(st) => compare(&named_afi, st)?,
        None => None,
    };
    let aggregates = match &data {
        Some(d) => with_accuracy(Aggregates::default(), &l.model, d)?,
        None => Aggregates::default(),
    };
    let out = RunReport {
        command: "importance",
        model_digest: l.digest,
        spec: SpecEcho {
            epsilon: a.stability.then_some(a.epsilon),
            oh: Some(a.oh == Switch::On),
            seed: a.common.seed,
            ..SpecEcho::default()
        },
        rows: Vec::new(),
        aggregates,
        importance: Some(ImportanceBlock {
            region: "global",
            afi: report,
            pfi,
            afi_vs_pfi,
            stability,
            afi_vs_stability,
        }),
        timing: Timing {
            elapsed: start.elapsed().as_secs_f64(),
        },
    };
    emit(&out, &a.common)
}

pub fn eval(a: EvalArgs) -> Result<()> {
    let start = Instant::now();
    let l = setup(&a.common)?;
    let data = load_data(&l.model, &a.data)?;
    let mut agg = with_accuracy(Aggregates::default(), &l.model, &data)?;
    agg.n = data.len();
    let report = RunReport {
        command: "eval",
        model_digest: l.digest,
        spec: SpecEcho {
            seed: a.common.seed,
            ..SpecEcho::default()
        },
        rows: Vec::new(),
        aggregates: agg,
        importance: None,
        timing: Timing {
            elapsed: start.elapsed().as_secs_f64(),
        },
    };
    emit(&report, &a.common)
}
