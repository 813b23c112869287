use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;

use shearchaos::estimators::{lambda1_from_density, stationary_density_fp};
use shearchaos::sde::{step_phi, step_system};
use shearchaos::{CylinderState, NoiseStream, PhaseCoupling};
use shearchaos_bench::reference_points;

const STEPS: u64 = 10_000;

fn stepping(c: &mut Criterion) {
    let (_, p) = reference_points()[2];
    let mut group = c.benchmark_group("sde_steps");
    group.throughput(Throughput::Elements(STEPS));
    for coupling in [
        PhaseCoupling::tent(),
        PhaseCoupling::trig_pair(),
        PhaseCoupling::sine_approx4(),
    ] {
        group.bench_function(
            BenchmarkId::new("system_with_tangent", coupling.kind),
            |b| {
                b.iter(|| {
                    let mut noise = NoiseStream::new(1, 0, 1e-3).unwrap();
                    let mut s = CylinderState::new(0.0, 0.0)
                        .unwrap()
                        .with_tangent([1.0, 0.0])
                        .unwrap();
                    for _ in 0..STEPS {
                        let dw = noise.increments(coupling.drivers());
                        s = step_system(&s, &p, &coupling, &dw, 1e-3).unwrap();
                    }
                    black_box(s)
                })
            },
        );
    }
    let tent = PhaseCoupling::tent();
    group.bench_function("angle", |b| {
        b.iter(|| {
            let mut noise = NoiseStream::new(1, 0, 1e-3).unwrap();
            let mut phi = 0.3;
            for i in 0..STEPS {
                let dw = noise.increments(1);
                phi = step_phi(phi, (i as f64 * 1e-3).fract(), &p, &tent, &dw, 1e-3).unwrap();
            }
            black_box(phi)
        })
    });
    group.finish();
}

fn fokker_planck(c: &mut Criterion) {
    let mut group = c.benchmark_group("fokker_planck");
    for n in [500, 2000, 8000] {
        for (name, p) in reference_points() {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| {
                    let g = stationary_density_fp(black_box(&p), n).unwrap();
                    lambda1_from_density(&g, &p)
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, stepping, fokker_planck);
criterion_main!(benches);
