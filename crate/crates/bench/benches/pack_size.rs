use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hdastar::{hda_star, SearchConfig};
use hdastar_bench::workload;

fn pack_sizes(c: &mut Criterion) {
    let problems = workload();
    let mut g = c.benchmark_group("pack_size");
    g.sample_size(10);
    for problem in &problems {
        for pack in [10, 100, 1000] {
            let cfg = SearchConfig::default().with_workers(4).with_pack_size(pack);
            g.bench_with_input(BenchmarkId::new(format!("hda-p4-pack{pack}"), &problem.instance), problem, |b, p| {
                b.iter(|| hda_star(p, &cfg).unwrap())
            });
        }
    }
    g.finish();
}

criterion_group!(benches, pack_sizes);
criterion_main!(benches);
