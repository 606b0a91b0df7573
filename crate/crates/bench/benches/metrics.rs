use criterion::{black_box, criterion_group, criterion_main, Criterion};

use cqa_bench::answer_pairs;
use cqa_core::metrics::{lcs, meteor, rouge_l, score, sentence_bleu, token_f1};

fn per_metric(c: &mut Criterion) {
    let pairs = answer_pairs(256);
    let mut group = c.benchmark_group("metric");
    group.bench_function("bleu", |b| b.iter(|| pairs.iter().map(|(p, g)| sentence_bleu(p, g)).sum::<f64>()));
    group.bench_function("rouge_l", |b| b.iter(|| pairs.iter().map(|(p, g)| rouge_l(p, g)).sum::<f64>()));
    group.bench_function("meteor", |b| b.iter(|| pairs.iter().map(|(p, g)| meteor(p, g)).sum::<f64>()));
    group.bench_function("f1", |b| b.iter(|| pairs.iter().map(|(p, g)| token_f1(p, g)).sum::<f64>()));
    group.bench_function("all", |b| b.iter(|| pairs.iter().map(|(p, g)| score(p, g).f1).sum::<f64>()));
    group.finish();
}

fn lcs_lengths(c: &mut Criterion) {
    let mut group = c.benchmark_group("lcs");
    for n in [8usize, 64, 512] {
        let a: Vec<u32> = (0..n as u32).map(|i| i % 7).collect();
        let b: Vec<u32> = (0..n as u32).map(|i| (i * 3) % 5).collect();
        group.bench_function(n.to_string(), |bench| bench.iter(|| lcs(black_box(&a), black_box(&b))));
    }
    group.finish();
}

criterion_group!(benches, per_metric, lcs_lengths);
criterion_main!(benches);
