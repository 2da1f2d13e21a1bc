//! The same quantity computed by routes that share no code paths.

use std::f64::consts::PI;

use vacuum_core::energy::{
    default_fit_grid, energy_density_regularized, extract_cylinder_coefficients_with, total_energy_regularized,
    total_energy_renormalized, twisted_energy, DensityConfig,
};
use vacuum_core::kernels::{cylinder_trace, heat_trace, KernelMethod};
use vacuum_core::orbits::{global_density_decomposition, local_counting, LocalCountingMethod};
use vacuum_core::quadrature::adaptive;
use vacuum_core::spectrum::{counting_function, eigenvalues};
use vacuum_core::{BoundaryCondition, Geometry, SeriesControl};

use BoundaryCondition::{Dirichlet as D, Neumann as N};

fn geometries() -> Vec<Geometry> {
    vec![
        Geometry::interval(1.0, D, D).unwrap(),
        Geometry::interval(1.5, D, N).unwrap(),
        Geometry::interval(0.8, N, N).unwrap(),
        Geometry::twisted_circle(1.0, 0.9).unwrap(),
        Geometry::twisted_circle(2.0, PI).unwrap(),
    ]
}

#[test]
fn regularized_energy_equals_damped_mode_sum() {
    // E(t) = ½ Σ ω_j e^{−tω_j}, summed directly over the spectrum.
    for g in geometries() {
        let t = 0.2;
        let ev = eigenvalues(&g, 40.0 / t).unwrap();
        let direct: f64 = ev
            .iter()
            .map(|e| 0.5 * e.multiplicity as f64 * e.omega * (-t * e.omega).exp())
            .sum();
        let e = total_energy_regularized(&g, t).unwrap();
        assert!(
            (e.total() - direct).abs() < 1e-10 * direct.abs().max(1.0),
            "{g:?}: {} vs {direct}",
            e.total()
        );
    }
}

#[test]
fn cylinder_trace_from_heat_trace_by_subordination() {
    // T(t) = ∫₀^∞ t/(2√π) s^{−3/2} e^{−t²/4s} K(s) ds, with s = e^u.
    let control = SeriesControl::default();
    for g in geometries() {
        let t = 0.5;
        let integrand = |u: f64| {
            let s = u.exp();
            let k = heat_trace(&g, s, &control).unwrap().value;
            t / (2.0 * PI.sqrt()) * s.powf(-0.5) * (-t * t / (4.0 * s)).exp() * k
        };
        let body = adaptive(integrand, -8.0, 6.0, 1e-12, 1e-11, 500).value;
        // Past e⁶ only the zero mode survives in K(s).
        let zero_mode = if g.has_zero_mode() { 1.0 } else { 0.0 };
        let s_hi = 6f64.exp();
        let tail = zero_mode * t / PI.sqrt() * s_hi.powf(-0.5);
        let direct = cylinder_trace(&g, t, KernelMethod::ClosedForm, &control).unwrap().value;
        assert!(
            (body + tail - direct).abs() < 2e-6 * direct,
            "{g:?}: {} vs {direct}",
            body + tail
        );
    }
}

#[test]
fn density_integrates_to_total_energy() {
    for g in geometries()
        .into_iter()
        .filter(|g| matches!(g, Geometry::Interval { .. }))
    {
        let len = g.length().unwrap();
        let t = 0.3;
        let cfg = DensityConfig::default();
        let f = |x: f64| energy_density_regularized(&g, t, x, &cfg).unwrap().total();
        let integral = adaptive(f, 0.0, len, 1e-13, 1e-13, 2000).value;
        let total = total_energy_regularized(&g, t).unwrap().total();
        assert!((integral - total).abs() < 1e-9, "{g:?}: {integral} vs {total}");
    }
}

#[test]
fn image_sum_fit_gives_closed_form_energy() {
    for g in geometries() {
        let fit = extract_cylinder_coefficients_with(
            &g,
            &default_fit_grid(g.length().unwrap()),
            KernelMethod::ImageSum,
            &SeriesControl::default(),
        )
        .unwrap();
        let exact = total_energy_renormalized(&g).unwrap().total_renormalized;
        assert!(
            (fit.energy() - exact).abs() < 1e-5 * exact.abs().max(0.01),
            "{g:?}: {} vs {exact}",
            fit.energy()
        );
    }
}

#[test]
fn twisted_energy_equals_shifted_mode_sum() {
    // Tr T for θ is the sum over ω = |2πj + θ|/L; compare −e₂/2 from the
    // mode-sum trace with the Bernoulli form.
    for theta in [0.3, 1.7, 4.0] {
        let g = Geometry::twisted_circle(1.0, theta).unwrap();
        let ctl = SeriesControl::new(100_000, 1e-12, 0.0).unwrap();
        let fit = extract_cylinder_coefficients_with(&g, &default_fit_grid(1.0), KernelMethod::ModeSum, &ctl).unwrap();
        assert!((fit.energy() - twisted_energy(theta, 1.0).unwrap()).abs() < 1e-5);
    }
}

#[test]
fn local_counting_integrates_to_global_count() {
    let g = Geometry::interval(1.0, D, N).unwrap();
    let ctl = SeriesControl::default();
    for omega in [4.0, 11.3] {
        let f = |x: f64| local_counting(&g, omega, x, LocalCountingMethod::OrbitSum, &ctl).unwrap();
        let integral = adaptive(f, 1e-9, 1.0 - 1e-9, 1e-8, 1e-8, 4000).value;
        let n = counting_function(&g, omega).unwrap() as f64;
        assert!((integral - n).abs() < 1e-3, "ω={omega}: {integral} vs {n}");
    }
}

#[test]
fn damped_global_density_integrates_to_count() {
    // ∫₀^Ω ρ_t(ω) dω → N(Ω) as the damping goes to 0, away from levels.
    let g = Geometry::interval(1.0, D, D).unwrap();
    let ctl = SeriesControl::default().with_damping(1e-3);
    let f = |w: f64| {
        let d = global_density_decomposition(&g, w, &ctl).unwrap();
        d.rho_weyl + d.rho_per.value + d.rho_bdry.value_at_positive_omega()
    };
    let omega = 7.5;
    let integral = adaptive(f, 1e-6, omega, 1e-9, 1e-9, 20_000).value;
    assert!((integral - 2.0).abs() < 1e-2, "{integral}");
}
