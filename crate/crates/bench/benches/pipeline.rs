use criterion::{black_box, criterion_group, criterion_main, Criterion};

use fastlight_core::cavity::resonance_solve;
use fastlight_core::medium::{self, tune_to_cad};
use fastlight_core::pipeline::band_second_dispersion;
use fastlight_core::{run_scenario, ScenarioConfig};

fn bench_medium(c: &mut Criterion) {
    let cfg = ScenarioConfig::default();
    let p = tune_to_cad(&cfg.medium, -3.1e-16, cfg.cad_knob).unwrap();
    c.bench_function("sample", |b| b.iter(|| medium::sample(black_box(p.center()), &p)));
    c.bench_function("tune_to_cad/separation", |b| {
        b.iter(|| tune_to_cad(black_box(&cfg.medium), -3.1e-16, cfg.cad_knob))
    });
    c.bench_function("band_second_dispersion", |b| {
        b.iter(|| band_second_dispersion(&p, black_box(p.center()), 1e6))
    });
}

fn bench_resonance(c: &mut Criterion) {
    let cfg = ScenarioConfig::default();
    let p = tune_to_cad(&cfg.medium, -3.1e-16, cfg.cad_knob).unwrap();
    let center = medium::index_offset(p.center(), &p);
    let idx = |w: f64| 1.0 + medium::index_offset(w, &p) - center + 1e-10;
    c.bench_function("resonance_solve", |b| {
        b.iter(|| resonance_solve(idx, black_box(&cfg.cavity)))
    });
}

fn bench_scenario(c: &mut Criterion) {
    let cfg = ScenarioConfig::default();
    c.bench_function("run_scenario/default", |b| {
        b.iter(|| run_scenario(black_box(&cfg)))
    });
}

criterion_group!(benches, bench_medium, bench_resonance, bench_scenario);
criterion_main!(benches);
