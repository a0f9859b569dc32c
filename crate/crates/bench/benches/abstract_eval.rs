use criterion::{black_box, criterion_group, criterion_main, Criterion};
use svmcert_core::domains::IntervalValue;
use svmcert_core::svm::{FeatureSchema, KernelSpec, SvmModel};
use svmcert_core::{abstract_decision, fixtures, global_afi, AbstractRegion, DomainTag, PerturbationSpec};

fn model(kernel: KernelSpec, d: usize, n: usize) -> SvmModel {
    let svs = (0..n)
        .map(|i| (0..d).map(|j| ((i * 7 + j * 3) % 11) as f64 / 10.0).collect())
        .collect();
    let alphas = (0..n).map(|i| if i % 2 == 0 { 0.8 } else { -0.6 }).collect();
    let schema = FeatureSchema::numeric(d, IntervalValue::new(0.0, 1.0).unwrap());
    SvmModel::new(kernel, svs, alphas, 0.1, schema).unwrap()
}

fn bench(c: &mut Criterion) {
    let toy = fixtures::toy_linear();
    c.bench_function("afi/toy_linear", |b| b.iter(|| global_afi(black_box(&toy), false).unwrap()));

    for (name, kernel) in [
        ("linear", KernelSpec::Linear),
        ("poly3", KernelSpec::Polynomial { c: 1.0, degree: 3 }),
        ("rbf", KernelSpec::Rbf { gamma: 0.5 }),
    ] {
        let m = model(kernel, 10, 50);
        let x = vec![0.5; 10];
        let spec = PerturbationSpec::LInfNoise {
            epsilon: 0.05,
            features: (0..10).collect(),
        };
        for domain in [DomainTag::IntervalOnly, DomainTag::Raf] {
            let r = AbstractRegion::build(&x, &spec, m.schema(), domain, false).unwrap();
            c.bench_function(&format!("decision/{name}/{domain:?}"), |b| {
                b.iter(|| abstract_decision(black_box(&m), black_box(&r)).unwrap())
            });
        }
    }
}

criterion_group!(benches, bench);
criterion_main!(benches);
