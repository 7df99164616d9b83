use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use shortreset::{cerny, shortest_reset_word, SearchConfig};
use shortreset_bench::synchronizing_samples;

fn cerny_family(c: &mut Criterion) {
    let cfg = SearchConfig::default();
    let mut g = c.benchmark_group("cerny");
    for n in [10, 20, 30] {
        let d = cerny(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &d, |b, d| {
            b.iter(|| shortest_reset_word(d, &cfg).unwrap().length)
        });
    }
    g.finish();
}

fn random_automata(c: &mut Criterion) {
    let cfg = SearchConfig {
        reconstruct_word: false,
        ..SearchConfig::default()
    };
    let mut g = c.benchmark_group("random");
    g.sample_size(10);
    for n in [50, 100] {
        let batch = synchronizing_samples(n, 2, 20, 7);
        g.bench_with_input(BenchmarkId::from_parameter(n), &batch, |b, batch| {
            b.iter(|| {
                batch
                    .iter()
                    .map(|d| shortest_reset_word(d, &cfg).unwrap().length)
                    .sum::<usize>()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, cerny_family, random_automata);
criterion_main!(benches);
