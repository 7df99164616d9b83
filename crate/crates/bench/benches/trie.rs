use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use shortreset::SubsetTrie;
use shortreset_bench::random_sets;

fn build(n: usize, m: usize) -> SubsetTrie {
    let mut t = SubsetTrie::new(n);
    for s in random_sets(n, m, 1) {
        t.insert(&s).unwrap();
    }
    t
}

fn queries(c: &mut Criterion) {
    let n = 64;
    let probes = random_sets(n, 1024, 2);
    let mut g = c.benchmark_group("subset_query");
    g.throughput(Throughput::Elements(probes.len() as u64));
    for m in [1 << 10, 1 << 13, 1 << 16] {
        let t = build(n, m);
        g.bench_with_input(BenchmarkId::from_parameter(m), &t, |b, t| {
            b.iter(|| {
                probes
                    .iter()
                    .filter(|s| t.contains_subset_of(s).unwrap())
                    .count()
            })
        });
    }
    g.finish();
}

fn inserts(c: &mut Criterion) {
    let sets = random_sets(100, 1 << 13, 3);
    let mut g = c.benchmark_group("insert");
    g.throughput(Throughput::Elements(sets.len() as u64));
    g.bench_function("n100_m8192", |b| {
        b.iter(|| {
            let mut t = SubsetTrie::new(100);
            for s in &sets {
                t.insert(s).unwrap();
            }
            t.stored_count()
        })
    });
    g.finish();
}

criterion_group!(benches, queries, inserts);
criterion_main!(benches);
