use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use vacuum_core::energy::{energy_density_grid, twisted_abel_curve, DensityConfig};
use vacuum_core::kernels::{cylinder_diagonal_grid, KernelMethod};
use vacuum_core::par::Execution;
use vacuum_core::{BoundaryCondition, Geometry, SeriesControl};

fn modes() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn kernel_grid(c: &mut Criterion) {
    let g = Geometry::interval(1.0, BoundaryCondition::Dirichlet, BoundaryCondition::Neumann).unwrap();
    let ts: Vec<f64> = (0..20).map(|i| 10f64.powf(-2.0 + 2.0 * i as f64 / 19.0)).collect();
    let xs: Vec<f64> = (0..20).map(|i| 0.02 + 0.96 * i as f64 / 19.0).collect();
    let ctl = SeriesControl::default();
    let mut group = c.benchmark_group("mode_sum_kernel_grid_20x20");
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| cylinder_diagonal_grid(&g, black_box(&ts), &xs, KernelMethod::ModeSum, &ctl, exec).unwrap())
        });
    }
    group.finish();
}

fn twisted_curve(c: &mut Criterion) {
    let thetas: Vec<f64> = (0..101).map(|i| 2.0 * PI * i as f64 / 100.0).collect();
    let mut group = c.benchmark_group("twisted_abel_curve_101");
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| twisted_abel_curve(black_box(&thetas), 1.0, 1e-4, 10_000, exec).unwrap())
        });
    }
    group.finish();
}

fn density_grid(c: &mut Criterion) {
    let g = Geometry::half_line(BoundaryCondition::Dirichlet);
    let xs: Vec<f64> = (0..1000).map(|i| 10f64.powf(-4.0 + 4.0 * i as f64 / 999.0)).collect();
    let cfg = DensityConfig::new(0.25, 1e-3).unwrap();
    let mut group = c.benchmark_group("half_line_density_1000");
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| energy_density_grid(&g, black_box(&xs), &cfg, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, kernel_grid, twisted_curve, density_grid);
criterion_main!(benches);
