//! Writes the synthetic golden bundles used by the test suites.
//!
//! ```text
//! cargo run -p svmcert-core --example golden_bundles -- fixtures/golden
//! ```
//!
//! The output is deterministic. The files under `fixtures/golden` were
//! produced by this program once and are kept frozen.

use std::fs;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use svmcert_core::svm::{FeatureDescriptor, FeatureKind};
use svmcert_core::{FeatureSchema, IntervalValue, KernelSpec, Label, LabeledDataset, SvmModel};

const NUMERIC: [&str; 7] = [
    "priors_count",
    "age",
    "juv_fel_count",
    "days_b_screening",
    "juv_misd_count",
    "c_days_from_compas",
    "juv_other_count",
];
/// Ground-truth weights; magnitudes halve from one feature to the next.
const WEIGHTS: [f64; 7] = [3.2, -1.6, 0.8, -0.4, 0.2, -0.1, 0.05];
const SEX: [&str; 2] = ["Male", "Female"];
const SEX_W: [f64; 2] = [0.05, -0.05];
const RACE: [&str; 3] = ["African-American", "Caucasian", "Other"];
const RACE_W: [f64; 3] = [0.04, -0.02, -0.02];
const ROWS: usize = 120;

fn schema() -> FeatureSchema {
    let unit = IntervalValue::new(0.0, 1.0).unwrap();
    let mut f: Vec<FeatureDescriptor> = NUMERIC
        .iter()
        .map(|n| FeatureDescriptor {
            name: n.to_string(),
            kind: FeatureKind::Numeric { range: unit },
        })
        .collect();
    for (cat, members) in [("sex", &SEX[..]), ("race", &RACE[..])] {
        for (p, m) in members.iter().enumerate() {
            f.push(FeatureDescriptor {
                name: format!("{cat}_{m}"),
                kind: FeatureKind::Tier {
                    category: cat.into(),
                    position: p + 1,
                    width: members.len(),
                },
            });
        }
    }
    FeatureSchema::new(f).unwrap()
}

fn truth() -> Vec<f64> {
    WEIGHTS.iter().chain(&SEX_W).chain(&RACE_W).copied().collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    0.5 * (v[v.len() / 2 - 1] + v[v.len() / 2])
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

fn rows(rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    (0..ROWS)
        .map(|_| {
            let mut r: Vec<f64> = (0..NUMERIC.len()).map(|_| round6(rng.gen::<f64>())).collect();
            let sex = rng.gen_range(0..SEX.len());
            r.extend((0..SEX.len()).map(|i| f64::from(u8::from(i == sex))));
            let race = rng.gen_range(0..RACE.len());
            r.extend((0..RACE.len()).map(|i| f64::from(u8::from(i == race))));
            r
        })
        .collect()
}

fn main() {
    let out: PathBuf = std::env::args().nth(1).unwrap_or_else(|| "fixtures/golden".into()).into();
    fs::create_dir_all(&out).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let schema = schema();
    let w = truth();
    let data_rows = rows(&mut rng);
    let scores: Vec<f64> = data_rows.iter().map(|r| dot(&w, r)).collect();
    let threshold = median(scores.clone());
    let labels: Vec<Label> = scores
        .iter()
        .map(|s| Label::from_decision(s - threshold + 0.3 * (rng.gen::<f64>() - 0.5)))
        .collect();
    let data = LabeledDataset::new(&schema, data_rows.clone(), labels.clone()).unwrap();
    data.write_csv(&schema, fs::File::create(out.join("data.csv")).unwrap()).unwrap();

    // Linear: w = 2·(w/2 + u) − 2·u with an arbitrary anchor u.
    let u: Vec<f64> = (0..w.len()).map(|_| round6(rng.gen::<f64>())).collect();
    let sv1: Vec<f64> = w.iter().zip(&u).map(|(a, b)| a / 2.0 + b).collect();
    let linear = SvmModel::new(
        KernelSpec::Linear,
        vec![sv1, u],
        vec![2.0, -2.0],
        threshold,
        schema.clone(),
    )
    .unwrap();

    // Kernel models: signed Parzen-style sums over a few labelled rows,
    // with the bias at the median decision so both labels occur.
    let pick = |n: usize, rng: &mut ChaCha8Rng| -> (Vec<Vec<f64>>, Vec<f64>) {
        (0..n)
            .map(|_| {
                let i = rng.gen_range(0..ROWS);
                (data_rows[i].clone(), 0.5 * labels[i].sign())
            })
            .unzip()
    };
    let kernel_model = |kernel: KernelSpec, svs: Vec<Vec<f64>>, alphas: Vec<f64>| {
        let probe = SvmModel::new(kernel, svs.clone(), alphas.clone(), 0.0, schema.clone()).unwrap();
        let b = median(data_rows.iter().map(|r| probe.decision_value(r).unwrap()).collect());
        SvmModel::new(kernel, svs, alphas, round6(b), schema.clone()).unwrap()
    };
    let (svs, alphas) = pick(8, &mut rng);
    let poly = kernel_model(KernelSpec::Polynomial { c: 1.0, degree: 2 }, svs, alphas);
    let (svs, alphas) = pick(10, &mut rng);
    let rbf = kernel_model(KernelSpec::Rbf { gamma: 0.5 }, svs, alphas);

    for (name, m) in [("linear", linear), ("poly", poly), ("rbf", rbf)] {
        fs::write(out.join(format!("model_{name}.json")), m.to_json().unwrap() + "\n").unwrap();
        let acc = svmcert_core::svm::accuracy_scores(&m, &data).unwrap();
        println!("{name}: accuracy {:.3} balanced {:.3}", acc.accuracy, acc.balanced_accuracy);
    }
}
