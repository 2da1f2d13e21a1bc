//! One pass/fail line per acceptance criterion. Exits nonzero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use vacuum_core::energy::{
    approximation_report, boundary_energy_regularized, energy_density_regularized, half_line_total_quadrature,
    theorem1_check, total_energy_renormalized, DensityConfig,
};
use vacuum_core::par::Execution;
use vacuum_core::spectrum::{BoundaryCondition, Geometry};
use vacuum_core::verify::{self, VERIFY_SEED};
use vacuum_core::SeriesControl;

use BoundaryCondition::{Dirichlet as D, Neumann as N};

struct Line {
    id: &'static str,
    passed: bool,
    detail: String,
}

fn line(id: &'static str, passed: bool, detail: String) -> Line {
    Line { id, passed, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn ac1() -> Line {
    let g = Geometry::interval(1.0, D, D).unwrap();
    let ((exact, (_, fit)), dt) = timed(|| {
        let e = total_energy_renormalized(&g).unwrap().total_renormalized;
        (e, verify::energy_routes(&g, -PI / 24.0).unwrap())
    });
    let ok = exact == -PI / 24.0 && fit <= 1e-6 && dt < Duration::from_secs(1);
    line(
        "AC1 dirichlet interval energy",
        ok,
        format!("closed={exact:.16e} fit_rel={fit:.2e} time={dt:?}"),
    )
}

fn ac2() -> Line {
    let g = Geometry::interval(1.0, D, N).unwrap();
    let (c, f) = verify::energy_routes(&g, PI / 48.0).unwrap();
    let g2 = Geometry::interval(2.0, N, D).unwrap();
    let (c2, f2) = verify::energy_routes(&g2, PI / 96.0).unwrap();
    let worst = c.max(f).max(c2).max(f2);
    line(
        "AC2 mixed boundary energy",
        worst <= 1e-6,
        format!("max_rel={worst:.2e}"),
    )
}

fn ac3() -> Line {
    let curve = verify::twisted_curve_deviation(Execution::Parallel).unwrap();
    let (right, left) = verify::twisted_cusp_slopes().unwrap();
    let root = verify::twisted_root_over_pi().unwrap();
    let root_dev = (root - (1.0 - 1.0 / 3f64.sqrt())).abs();
    let e0 = vacuum_core::energy::twisted_energy(0.0, 1.0).unwrap();
    let cusp = (right - 0.5).abs().max((left + 0.5).abs());
    let ok = curve <= 1e-5 && rel(e0, -PI / 6.0) < 1e-15 && cusp < 1e-3 && root_dev <= 1e-6;
    line(
        "AC3 twisted circle curve",
        ok,
        format!("curve_dev={curve:.2e} slopes=({right:.6},{left:.6}) root_dev={root_dev:.2e}"),
    )
}

fn ac4() -> Line {
    let (dev, dt) = timed(|| verify::kernel_agreement(Execution::Parallel).unwrap());
    let ok = dev <= 1e-8 && dt < Duration::from_secs(10);
    line(
        "AC4 three-way kernel agreement",
        ok,
        format!("max_dev={dev:.2e} time={dt:?}"),
    )
}

fn ac5() -> Line {
    let ctl = SeriesControl::default();
    let mut worst: f64 = 0.0;
    for bc in [D, N] {
        for t in [0.1, 0.5, 1.0] {
            let g = Geometry::interval(1.0, bc, bc).unwrap();
            worst = worst.max(boundary_energy_regularized(&g, t, &ctl).unwrap().value.abs());
        }
    }
    let (hl, _) = half_line_total_quadrature(0.01, D, 1e3).unwrap();
    let ok = worst <= 1e-10 && hl.abs() <= 1e-6;
    line(
        "AC5 boundary energy telescoping",
        ok,
        format!("interval={worst:.2e} half_line={hl:.2e}"),
    )
}

fn ac6a() -> Line {
    let g = Geometry::half_line(D);
    let e = energy_density_regularized(&g, 1e-3, 1e-1, &DensityConfig::default())
        .unwrap()
        .boundary;
    let r = rel(e, 1.0 / (8.0 * PI * 1e-2));
    line(
        "AC6a small t at fixed x",
        r <= 1e-3,
        format!("value={e:.10} rel={r:.3e}"),
    )
}

fn ac6b() -> Line {
    let g = Geometry::half_line(D);
    let e = energy_density_regularized(&g, 1e-1, 1e-3, &DensityConfig::default())
        .unwrap()
        .boundary;
    let r = rel(e, -1.0 / (2.0 * PI * 1e-2));
    line(
        "AC6b small x at fixed t",
        r <= 1e-3,
        format!("value={e:.10} rel={r:.3e}"),
    )
}

fn ac7() -> Line {
    let dev = verify::counting_deviation(1000, VERIFY_SEED).unwrap();
    let bc = verify::boundary_count_deviation();
    line(
        "AC7 counting function exactness",
        dev <= 1e-8 && bc == 0.0,
        format!("max_dev={dev:.2e} n_bdry_dev={bc}"),
    )
}

fn ac8() -> Line {
    let dev = verify::poisson_deviation(50, 5000, VERIFY_SEED).unwrap();
    line("AC8 poisson identity", dev <= 1e-3, format!("max_dev={dev:.2e}"))
}

fn ac9() -> Line {
    let r = theorem1_check(&Geometry::interval(1.0, D, D).unwrap()).unwrap();
    let dev = r
        .relations
        .iter()
        .filter(|x| x.s <= 1)
        .filter_map(|x| x.deviation)
        .fold(0.0, f64::max);
    let flagged = r.relations.iter().any(|x| x.s == 2 && !x.determined);
    line(
        "AC9 heat/cylinder relation",
        dev <= 1e-6 && flagged,
        format!("max_dev={dev:.2e} e2_undetermined={flagged}"),
    )
}

fn ac10() -> Line {
    let dev = verify::summation_equivalence().unwrap();
    line(
        "AC10 summation method equivalence",
        dev <= 1e-12,
        format!("max_dev={dev:.2e}"),
    )
}

fn ac11() -> Line {
    let r = approximation_report(&Geometry::interval(1.0, D, D).unwrap()).unwrap();
    let sp = r.global_stationary_phase_deviation().abs();
    let so = (r.global.short_orbit_boundary + 1.0 / (4.0 * PI)).abs();
    let rn = approximation_report(&Geometry::interval(1.0, N, N).unwrap()).unwrap();
    let so_n = (rn.global.short_orbit_boundary - 1.0 / (4.0 * PI)).abs();
    let ok = sp <= 1e-10 && so <= 1e-8 && so_n <= 1e-8;
    line(
        "AC11 approximation report",
        ok,
        format!("stationary_dev={sp:.2e} short_orbit_dev={so:.2e}"),
    )
}

fn full_suite() -> Line {
    let (r, dt) = timed(|| verify::run_all_with(None, Execution::Sequential).unwrap());
    let failed: Vec<&str> = r.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let ok = dt < Duration::from_secs(60);
    line(
        "full verify suite under 60 s on one thread",
        ok,
        format!("time={dt:?} failed_checks={failed:?}"),
    )
}

fn main() -> ExitCode {
    let lines = [
        ac1(),
        ac2(),
        ac3(),
        ac4(),
        ac5(),
        ac6a(),
        ac6b(),
        ac7(),
        ac8(),
        ac9(),
        ac10(),
        ac11(),
        full_suite(),
    ];
    let mut all = true;
    for l in &lines {
        println!("{} {}: {}", if l.passed { "PASS" } else { "FAIL" }, l.id, l.detail);
        all &= l.passed;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
