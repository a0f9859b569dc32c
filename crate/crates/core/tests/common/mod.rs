#![allow(dead_code)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use svmcert_core::svm::{FeatureDescriptor, FeatureKind};
use svmcert_core::{
    AbstractRegion, DomainTag, FeatureSchema, IntervalValue, KernelSpec, LabeledDataset, PerturbationSpec, SvmModel,
};

pub const MODES: [(DomainTag, bool); 4] = [
    (DomainTag::IntervalOnly, false),
    (DomainTag::IntervalOnly, true),
    (DomainTag::Raf, false),
    (DomainTag::Raf, true),
];

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/golden")
}

pub fn golden_model(kernel: &str) -> SvmModel {
    SvmModel::load(golden_dir().join(format!("model_{kernel}.json"))).unwrap()
}

pub fn golden_data(m: &SvmModel) -> LabeledDataset {
    LabeledDataset::load(m.schema(), golden_dir().join("data.csv")).unwrap()
}

/// Schema with `numeric` features in `[0, 1]` followed by one tier of width
/// `tier` (none when 0).
pub fn mixed_schema(numeric: usize, tier: usize) -> FeatureSchema {
    let unit = IntervalValue::new(0.0, 1.0).unwrap();
    let mut f: Vec<FeatureDescriptor> = (0..numeric)
        .map(|i| FeatureDescriptor {
            name: format!("n{i}"),
            kind: FeatureKind::Numeric { range: unit },
        })
        .collect();
    for p in 1..=tier {
        f.push(FeatureDescriptor {
            name: format!("t{p}"),
            kind: FeatureKind::Tier {
                category: "t".into(),
                position: p,
                width: tier,
            },
        });
    }
    FeatureSchema::new(f).unwrap()
}

pub fn random_schema(rng: &mut impl Rng) -> FeatureSchema {
    match rng.gen_range(0..3) {
        0 => mixed_schema(rng.gen_range(1..=4), 0),
        1 => mixed_schema(rng.gen_range(1..=2), 2),
        _ => mixed_schema(1, 3),
    }
}

pub fn random_kernel(rng: &mut impl Rng, which: usize) -> KernelSpec {
    match which % 3 {
        0 => KernelSpec::Linear,
        1 => KernelSpec::Polynomial {
            c: rng.gen_range(0.0..2.0),
            degree: rng.gen_range(1..=3),
        },
        _ => KernelSpec::Rbf {
            gamma: rng.gen_range(0.1..3.0),
        },
    }
}

pub fn random_row(rng: &mut impl Rng, schema: &FeatureSchema) -> Vec<f64> {
    let mut x: Vec<f64> = (0..schema.width())
        .map(|i| if schema.is_numeric(i) { rng.gen::<f64>() } else { 0.0 })
        .collect();
    for c in schema.categories() {
        x[c.start + rng.gen_range(0..c.width)] = 1.0;
    }
    x
}

pub fn random_model(rng: &mut impl Rng, kernel: KernelSpec, schema: FeatureSchema) -> SvmModel {
    let n = rng.gen_range(1..=5);
    let svs = (0..n).map(|_| random_row(rng, &schema)).collect();
    let alphas = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    SvmModel::new(kernel, svs, alphas, rng.gen_range(-1.0..1.0), schema).unwrap()
}

pub fn random_spec(rng: &mut impl Rng, schema: &FeatureSchema) -> PerturbationSpec {
    let numeric = schema.numeric_indices();
    let features: Vec<usize> = numeric.into_iter().filter(|_| rng.gen_bool(0.8)).collect();
    let epsilon = rng.gen_range(0.0..0.4);
    let categories: Vec<String> = schema
        .categories()
        .iter()
        .filter(|_| rng.gen_bool(0.7))
        .map(|c| c.name.clone())
        .collect();
    if categories.is_empty() {
        PerturbationSpec::LInfNoise { epsilon, features }
    } else {
        PerturbationSpec::NoiseCat {
            epsilon,
            features,
            categories,
        }
    }
}

/// A legal point of the region: box vertices half the time, interior points
/// otherwise; freed tiers get a random member.
pub fn sample_point(rng: &mut impl Rng, region: &AbstractRegion) -> Vec<f64> {
    let vertex = rng.gen_bool(0.5);
    let mut z: Vec<f64> = region
        .bounds()
        .iter()
        .enumerate()
        .map(|(i, b)| {
            if region.is_tier_column(i) {
                0.0
            } else if b.is_point() {
                b.lo()
            } else if vertex {
                *[b.lo(), b.hi()].choose(rng).unwrap()
            } else {
                rng.gen_range(b.lo()..=b.hi())
            }
        })
        .collect();
    for g in region.tier_groups() {
        z[rng.gen_range(g.columns.clone())] = 1.0;
    }
    z
}

/// Every legal assignment of the freed tiers, combined with the given numeric
/// values.
pub fn tier_assignments(region: &AbstractRegion, base: &[f64]) -> Vec<Vec<f64>> {
    let mut out = vec![base.to_vec()];
    for g in region.tier_groups() {
        let mut next = Vec::new();
        for z in &out {
            for j in g.columns.clone() {
                let mut z = z.clone();
                for c in g.columns.clone() {
                    z[c] = f64::from(u8::from(c == j));
                }
                next.push(z);
            }
        }
        out = next;
    }
    out
}
