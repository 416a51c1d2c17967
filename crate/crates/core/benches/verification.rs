use std::hint::black_box;
use std::path::PathBuf;

use catbundle::scenario::Scenario;
use catbundle::suites::run_suite_with;
use catbundle::Exec;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn scenario(name: &str) -> Scenario {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(format!("{name}.toml"));
    Scenario::load(&path).unwrap()
}

fn suites(c: &mut Criterion) {
    let cases = [
        ("s3-catalog", "exchange-law"),
        ("s3-catalog", "two-group"),
        ("z4-quiver", "prop61"),
        ("s3-cocycle", "prop51"),
        ("so3-linear", "prop62"),
    ];
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for (file, name) in cases {
        let sc = scenario(file);
        for (label, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
            let checker = sc.checker().with_exec(exec);
            group.bench_with_input(
                BenchmarkId::new(format!("{file}/{name}"), label),
                &checker,
                |b, checker| b.iter(|| black_box(run_suite_with(&sc, name, checker).unwrap())),
            );
        }
    }
    group.finish();
}

criterion_group!(benches, suites);
criterion_main!(benches);
