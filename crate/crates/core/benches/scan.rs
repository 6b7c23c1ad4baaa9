use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use g2_curvature::canonical::canonical_family;
use g2_curvature::locus::{scan, ScanConfig};
use g2_curvature::metric::CheegerParam;
use g2_curvature::par::Execution;
use g2_curvature::solver::{min_certificate, SolverOptions};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn bench_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("scan_7x7_r20");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = ScanConfig {
            grid_n: 7,
            restarts: 20,
            exec,
            ..Default::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| scan(black_box(cfg)).unwrap())
        });
    }
    group.finish();
}

fn bench_restarts(c: &mut Criterion) {
    let g = canonical_family(0.6, 0.4);
    let t = CheegerParam::default();
    let mut group = c.benchmark_group("min_certificate_r200");
    group.sample_size(10);
    for (name, exec) in MODES {
        let opts = SolverOptions {
            exec,
            ..Default::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| min_certificate(black_box(&g), t, opts))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_scan, bench_restarts);
criterion_main!(benches);
