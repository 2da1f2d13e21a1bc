use std::f64::consts::PI;

use proptest::prelude::*;

use vacuum_core::energy::{
    energy_density_regularized, orbit_energy_contribution, total_energy_regularized, total_energy_renormalized,
    twisted_energy, DensityConfig, OrbitEnergyMethod,
};
use vacuum_core::kernels::{cylinder_kernel, KernelMethod};
use vacuum_core::spectrum::{counting_decomposition, counting_function, nearest_eigenvalue};
use vacuum_core::summation::lattice::two_sided;
use vacuum_core::summation::{mittag_leffler_sum, MittagLefflerKind};
use vacuum_core::{BoundaryCondition, Geometry, SeriesControl};

fn bc() -> impl Strategy<Value = BoundaryCondition> {
    prop_oneof![Just(BoundaryCondition::Dirichlet), Just(BoundaryCondition::Neumann)]
}

fn interval() -> impl Strategy<Value = Geometry> {
    (0.3f64..4.0, bc(), bc()).prop_map(|(l, a, b)| Geometry::interval(l, a, b).unwrap())
}

fn discrete() -> impl Strategy<Value = Geometry> {
    prop_oneof![
        interval(),
        (0.3f64..4.0, 0.0f64..(2.0 * PI)).prop_map(|(l, th)| Geometry::twisted_circle(l, th).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn counting_decomposition_is_exact(g in discrete(), omega in 0.01f64..200.0) {
        prop_assume!((nearest_eigenvalue(&g, omega).unwrap() - omega).abs() > 1e-7);
        let d = counting_decomposition(&g, omega).unwrap();
        let n = counting_function(&g, omega).unwrap() as f64;
        prop_assert!((d.total - n).abs() < 1e-8);
    }

    #[test]
    fn twisted_energy_periodic_and_reflection_symmetric(theta in -10.0f64..10.0, l in 0.2f64..5.0) {
        let e = twisted_energy(theta, l).unwrap();
        prop_assert!((e - twisted_energy(theta + 2.0 * PI, l).unwrap()).abs() < 1e-12);
        prop_assert!((e - twisted_energy(2.0 * PI - theta, l).unwrap()).abs() < 1e-12);
        prop_assert!(e >= -PI / (6.0 * l) - 1e-15 && e <= PI / (12.0 * l) + 1e-15);
    }

    #[test]
    fn boundary_density_flip_and_mirror(g in interval(), t in 0.01f64..2.0, frac in 0.02f64..0.98) {
        let Geometry::Interval { length, left, right } = g else { unreachable!() };
        let x = frac * length;
        let cfg = DensityConfig::default();
        let a = energy_density_regularized(&g, t, x, &cfg).unwrap().boundary;
        let flipped = energy_density_regularized(&g.flipped(), t, x, &cfg).unwrap().boundary;
        let mirror = energy_density_regularized(&g, t, length - x, &cfg).unwrap().boundary;
        let sign = if left == right { 1.0 } else { -1.0 };
        let scale = a.abs().max(1.0);
        prop_assert!((a + flipped).abs() <= 1e-12 * scale);
        prop_assert!((mirror - sign * a).abs() <= 1e-9 * scale);
    }

    #[test]
    fn density_is_affine_in_xi(g in interval(), t in 0.01f64..1.0, frac in 0.05f64..0.95, xi in 0.0f64..0.25) {
        let x = frac * g.length().unwrap();
        let at = |xi: f64| energy_density_regularized(&g, t, x, &DensityConfig::new(xi, 0.0).unwrap()).unwrap().total();
        let lin = at(0.0) + 4.0 * xi * (at(0.25) - at(0.0));
        prop_assert!((at(xi) - lin).abs() <= 1e-10 * at(0.25).abs().max(at(0.0).abs()).max(1.0));
    }

    #[test]
    fn kernel_routes_agree(g in discrete(), t in 0.02f64..1.5, frac in 0.02f64..0.98) {
        let x = frac * g.length().unwrap();
        let ctl = SeriesControl::default();
        let c = cylinder_kernel(&g, t, x, x, KernelMethod::ClosedForm, &ctl).unwrap().value;
        for m in [KernelMethod::ModeSum, KernelMethod::ImageSum] {
            let v = cylinder_kernel(&g, t, x, x, m, &ctl).unwrap().value;
            prop_assert!((v - c).abs() <= 1e-8 * (1.0 + c.abs()), "{m:?}: {v} vs {c}");
        }
    }

    #[test]
    fn orbit_energy_routes_agree(n in 1u32..500, l in 0.2f64..5.0, theta in 0.0f64..(2.0 * PI)) {
        let a = orbit_energy_contribution(n, l, theta, OrbitEnergyMethod::Abel).unwrap();
        let r = orbit_energy_contribution(n, l, theta, OrbitEnergyMethod::RieszCesaro2).unwrap();
        let scale = 1.0 / (2.0 * PI * (n as f64 * l).powi(2));
        prop_assert!((a - r).abs() <= 1e-10 * scale);
    }

    #[test]
    fn regularized_energy_converges_quadratically(g in interval()) {
        let exact = total_energy_renormalized(&g).unwrap().total_renormalized;
        let l = g.length().unwrap();
        let d = |t: f64| (total_energy_regularized(&g, t).unwrap().total_renormalized - exact).abs();
        let (t1, t2) = (1e-2 * l, 1e-1 * l);
        let slope = (d(t2) / d(t1)).ln() / (t2 / t1).ln();
        prop_assert!(slope > 1.9, "slope {slope}");
    }

    #[test]
    fn lattice_sum_matches_mittag_leffler(a in 0.05f64..3.0, b in -0.5f64..0.5) {
        let direct = two_sided(|n| 1.0 / ((n + b).powi(2) + a * a), 200, num_complex::Complex64::new(1.0, 0.0));
        let closed = mittag_leffler_sum(MittagLefflerKind::Coth, a, b).unwrap();
        prop_assert!((direct.value.re - closed).abs() <= 1e-9 * closed);
    }
}
