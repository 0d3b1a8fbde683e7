use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use sentimin::evaluate::{cross_validate, CvConfig};
use sentimin::textprep::{preprocess_batch, PrepConfig};
use sentimin::{synthetic, Execution};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn bench_preprocess(c: &mut Criterion) {
    let cfg = PrepConfig::default();
    let mut group = c.benchmark_group("preprocess_batch");
    for n in [100usize, 1_000, 5_000] {
        let docs = synthetic::review_corpus(n / 2, 1);
        let texts: Vec<&str> = docs.iter().map(|d| d.text.as_str()).collect();
        group.throughput(Throughput::Elements(n as u64));
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &texts, |b, texts| {
                b.iter(|| black_box(preprocess_batch(texts, &cfg, exec)))
            });
        }
    }
    group.finish();
}

fn bench_cross_validate(c: &mut Criterion) {
    let cfg = PrepConfig::default();
    let cv = CvConfig::default();
    let mut group = c.benchmark_group("cross_validate_10fold");
    group.sample_size(20);
    for n in [200usize, 2_000] {
        let docs = synthetic::review_corpus(n / 2, 1);
        let texts: Vec<&str> = docs.iter().map(|d| d.text.as_str()).collect();
        let tokens = preprocess_batch(&texts, &cfg, Execution::Sequential);
        let labels: Vec<_> = docs.iter().map(|d| d.label).collect();
        group.throughput(Throughput::Elements(n as u64));
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, _| {
                b.iter(|| black_box(cross_validate(&tokens, &labels, 10, 42, &cv, exec).unwrap()))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_preprocess, bench_cross_validate);
criterion_main!(benches);
