//! Vacuum energies and energy densities, split into Weyl, periodic-orbit and
//! boundary parts, together with the cylinder-coefficient fits and the
//! approximation comparison.

mod fit;
mod report;

pub use fit::{
    default_fit_grid, extract_cylinder_coefficients, extract_cylinder_coefficients_with, fit_heat_coefficients,
    half_integer_gamma, theorem1_check, CylinderExpansion, HeatExpansion, Theorem1Relation, Theorem1Report,
};
pub use report::{approximation_report, zeta_check, ApproximationReport, GlobalComparison, LocalComparison, ZetaCheck};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Result, VacuumError};
use crate::orbits::winding_sign;
use crate::par::{self, Execution};
use crate::quadrature;
use crate::spectrum::{BoundaryCondition, Geometry};
use crate::summation::lattice::{one_sided, two_sided, unit_phase};
use crate::summation::{
    bernoulli_b2, riesz_cesaro2_limit, telescoping_check, SeriesControl, SeriesValue, SummationMethod,
};

/// Weyl, periodic and boundary parts of an energy or energy density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    /// Divergent Weyl part at the regulator; 0 in the renormalized limit.
    pub weyl: f64,
    pub periodic: f64,
    pub boundary: f64,
    /// `periodic + boundary`.
    pub total_renormalized: f64,
    /// 0 for renormalized values.
    pub regulator_t: f64,
    /// The spectrum has an ω = 0 mode whose energy is left out.
    pub zero_mode_neglected: bool,
}

impl EnergyBreakdown {
    fn new(weyl: f64, periodic: f64, boundary: f64, regulator_t: f64, geometry: &Geometry) -> Self {
        Self {
            weyl,
            periodic,
            boundary,
            total_renormalized: periodic + boundary,
            regulator_t,
            zero_mode_neglected: geometry.has_zero_mode(),
        }
    }

    /// `weyl + periodic + boundary`.
    pub fn total(&self) -> f64 {
        self.weyl + self.periodic + self.boundary
    }
}

/// Coupling and regulator for energy densities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityConfig {
    /// Conformal coupling `ξ ∈ [0, 1/4]`.
    pub xi: f64,
    pub regulator_t: f64,
}

impl Default for DensityConfig {
    fn default() -> Self {
        Self {
            xi: 0.25,
            regulator_t: 0.0,
        }
    }
}

impl DensityConfig {
    pub fn new(xi: f64, regulator_t: f64) -> Result<Self> {
        let c = Self { xi, regulator_t };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=0.25).contains(&self.xi) {
            return Err(invalid(format!("xi must lie in [0, 1/4], got {}", self.xi)));
        }
        if !(self.regulator_t >= 0.0) || !self.regulator_t.is_finite() {
            return Err(invalid(format!(
                "regulator_t must be nonnegative, got {}",
                self.regulator_t
            )));
        }
        Ok(())
    }

    /// Weight `4ξ` of the boundary term.
    fn boundary_weight(&self) -> f64 {
        4.0 * self.xi
    }
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("t must be positive, got {t}")))
    }
}

fn check_length(l: f64) -> Result<()> {
    if l > 0.0 && l.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("length must be positive, got {l}")))
    }
}

/// `E_θ = −(π/L) B₂(θ/2π)`, with θ reduced into `[0, 2π)`.
pub fn twisted_energy(theta: f64, length: f64) -> Result<f64> {
    check_length(length)?;
    if !theta.is_finite() {
        return Err(invalid("theta must be finite"));
    }
    let u = theta.abs().rem_euclid(2.0 * PI) / (2.0 * PI);
    Ok(-PI / length * bernoulli_b2(u))
}

/// Renormalized total energy from the closed forms.
pub fn total_energy_renormalized(geometry: &Geometry) -> Result<EnergyBreakdown> {
    let periodic = match *geometry {
        Geometry::Interval { length, left, right } => {
            if left == right {
                -PI / (24.0 * length)
            } else {
                PI / (48.0 * length)
            }
        }
        Geometry::TwistedCircle { length, theta } => twisted_energy(theta, length)?,
        Geometry::HalfLine { .. } => return Err(VacuumError::ContinuousSpectrum("the half-line")),
    };
    Ok(EnergyBreakdown::new(0.0, periodic, 0.0, 0.0, geometry))
}

/// `csch² z − 1/z²`.
fn csch2_minus_inverse_square(z: f64) -> f64 {
    if z < 0.1 {
        let z2 = z * z;
        -1.0 / 3.0 + z2 * (1.0 / 15.0 + z2 * (-2.0 / 189.0 + z2 * (1.0 / 675.0 - z2 * 2.0 / 10395.0)))
    } else {
        let s = z.sinh();
        1.0 / (s * s) - 1.0 / (z * z)
    }
}

/// `csch z coth z − 1/z²`.
fn csch_coth_minus_inverse_square(z: f64) -> f64 {
    if z < 0.1 {
        let z2 = z * z;
        1.0 / 6.0 + z2 * (-7.0 / 120.0 + z2 * (31.0 / 3024.0 - z2 * 127.0 / 86400.0))
    } else {
        1.0 / (z.sinh() * z.tanh()) - 1.0 / (z * z)
    }
}

/// Regularized periodic-orbit energy `E_per(t)` (Weyl part removed).
fn periodic_energy_regularized(geometry: &Geometry, t: f64) -> f64 {
    match *geometry {
        Geometry::Interval { length, left, right } => {
            let z = PI * t / (2.0 * length);
            let f = if left == right {
                csch2_minus_inverse_square(z)
            } else {
                csch_coth_minus_inverse_square(z)
            };
            PI / (8.0 * length) * f
        }
        Geometry::TwistedCircle { length, theta } => {
            let c = (PI - theta) / length;
            let k = PI / length;
            let (sk, ck) = ((k * t).sinh(), (k * t).cosh());
            let d = (c * (c * t).sinh() * sk - k * (c * t).cosh() * ck) / (sk * sk);
            -0.5 * d - length / (2.0 * PI * t * t)
        }
        Geometry::HalfLine { .. } => 0.0,
    }
}

/// `a(n) = 2Ln/(t² + (2Ln)²)`, the pole-pair weights of the boundary energy.
fn pole_weight(length: f64, t: f64, n: f64) -> f64 {
    let d = 2.0 * length * n;
    d / (t * t + d * d)
}

/// Boundary part of the regularized total energy on the interval, as the
/// telescoping pole-pair series `((−1)^l/2π) Σ_{n≥0} [a(n+1) − a(n)]`.
pub fn boundary_energy_regularized(geometry: &Geometry, t: f64, control: &SeriesControl) -> Result<SeriesValue> {
    check_t(t)?;
    control.validate()?;
    match *geometry {
        Geometry::Interval { length, left, right } => {
            if left != right {
                // Images n and −(n+1) cancel pairwise.
                return Ok(SeriesValue::closed_form(0.0));
            }
            let terms: Vec<(f64, f64)> = (0..control.max_terms)
                .map(|n| {
                    let n = n as f64;
                    (pole_weight(length, t, n + 1.0), pole_weight(length, t, n))
                })
                .collect();
            let sum = telescoping_check(&terms, 0.0, control.tol.max(1e-14))?;
            let pref = left.sign() / (2.0 * PI);
            Ok(SeriesValue::new(
                pref * sum.value,
                sum.terms_used,
                pref.abs() * sum.tail_estimate,
                SummationMethod::Raw,
            ))
        }
        Geometry::TwistedCircle { .. } => Ok(SeriesValue::closed_form(0.0)),
        Geometry::HalfLine { .. } => Ok(SeriesValue::closed_form(0.0)),
    }
}

/// Regularized total energy `E(t) = −½ d/dt Tr T(t)`.
pub fn total_energy_regularized(geometry: &Geometry, t: f64) -> Result<EnergyBreakdown> {
    check_t(t)?;
    let length = geometry
        .length()
        .ok_or(VacuumError::ContinuousSpectrum("the half-line"))?;
    let weyl = length / (2.0 * PI * t * t);
    let periodic = periodic_energy_regularized(geometry, t);
    let boundary = boundary_energy_regularized(geometry, t, &SeriesControl::default())?.value;
    Ok(EnergyBreakdown::new(weyl, periodic, boundary, t, geometry))
}

/// Total boundary energy of the half-line at regulator `t`: exactly 0, since
/// `∫₀^∞ (t² − 4x²)/(t² + 4x²)² dx = [x/(t² + 4x²)]₀^∞`.
pub fn half_line_total(t: f64, bc: BoundaryCondition) -> Result<f64> {
    check_t(t)?;
    let antiderivative = |x: f64| x / (t * t + 4.0 * x * x);
    // The upper limit contributes lim x/(t²+4x²) = 0.
    Ok(bc.sign() / (2.0 * PI) * (0.0 - antiderivative(0.0)))
}

/// Quadrature of the half-line boundary energy over `(0, x_max)` plus the
/// analytic tail beyond `x_max`. Returns `(value, quadrature error estimate)`.
pub fn half_line_total_quadrature(t: f64, bc: BoundaryCondition, x_max: f64) -> Result<(f64, f64)> {
    check_t(t)?;
    if !(x_max > 0.0) {
        return Err(invalid("x_max must be positive"));
    }
    let f = |x: f64| half_line_boundary_density(bc, t, x);
    // Split at the spike scale so the adaptive rule sees it.
    let cuts = [0.0, t, 10.0 * t, 100.0 * t, x_max];
    let mut value = 0.0;
    let mut error = 0.0;
    for w in cuts.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let r = quadrature::adaptive(f, w[0], w[1].min(x_max), 1e-14, 1e-12, 4000);
        value += r.value;
        error += r.error;
    }
    let tail = bc.sign() / (2.0 * PI) * (0.0 - x_max / (t * t + 4.0 * x_max * x_max));
    Ok((value + tail, error))
}

/// `((−1)^l/2π)(t² − 4x²)/(t² + 4x²)²`.
fn half_line_boundary_density(bc: BoundaryCondition, t: f64, x: f64) -> f64 {
    let a = t * t;
    let b = 4.0 * x * x;
    bc.sign() / (2.0 * PI) * (a - b) / ((a + b) * (a + b))
}

/// Boundary energy density at coupling ξ = 1/4 from the closed forms.
fn interval_boundary_density(length: f64, left: BoundaryCondition, right: BoundaryCondition, t: f64, x: f64) -> f64 {
    let pref = left.sign() * PI / (8.0 * length * length);
    let a = PI * t / (2.0 * length);
    let b = PI * x / length;
    let (sa, ca) = (a.sinh(), a.cosh());
    let (sb, cb) = b.sin_cos();
    let d = sa * sa * cb * cb + ca * ca * sb * sb;
    if left == right {
        pref * (sa * sa * cb * cb - ca * ca * sb * sb) / (d * d)
    } else {
        pref * ca * cb * (sa * sa - sb * sb) / (d * d)
    }
}

/// Boundary energy density at ξ = 1/4 summed over reflected images,
/// `((−1)^l/2π) Σ_n (−1)^{n(l+r)} (t² − d_n²)/(t² + d_n²)²` with
/// `d_n = 2x + 2nL`. Independent of the closed forms; used by the checks.
pub fn boundary_density_image_sum(geometry: &Geometry, t: f64, x: f64, control: &SeriesControl) -> Result<f64> {
    check_t(t)?;
    geometry.check_interior(x)?;
    match *geometry {
        Geometry::Interval { length, left, right } => {
            let z = Complex64::new(winding_sign(left, right), 0.0);
            let n = control.max_terms.clamp(1, 100_000) as i64;
            let s = two_sided(
                |m| {
                    let d = 2.0 * x + 2.0 * m * length;
                    let (a, b) = (t * t, d * d);
                    (a - b) / ((a + b) * (a + b))
                },
                n,
                z,
            );
            Ok(left.sign() / (2.0 * PI) * s.value.re)
        }
        Geometry::HalfLine { at_origin } => Ok(half_line_boundary_density(at_origin, t, x)),
        Geometry::TwistedCircle { .. } => Ok(0.0),
    }
}

/// Energy density at regulator `t > 0`.
pub fn energy_density_regularized(
    geometry: &Geometry,
    t: f64,
    x: f64,
    config: &DensityConfig,
) -> Result<EnergyBreakdown> {
    check_t(t)?;
    config.validate()?;
    geometry.check_interior(x)?;
    let weyl = 1.0 / (2.0 * PI * t * t);
    let w = config.boundary_weight();
    let (periodic, boundary) = match *geometry {
        Geometry::Interval { length, left, right } => (
            periodic_energy_regularized(geometry, t) / length,
            w * interval_boundary_density(length, left, right, t, x),
        ),
        Geometry::HalfLine { at_origin } => (0.0, w * half_line_boundary_density(at_origin, t, x)),
        Geometry::TwistedCircle { length, .. } => (periodic_energy_regularized(geometry, t) / length, 0.0),
    };
    Ok(EnergyBreakdown::new(weyl, periodic, boundary, t, geometry))
}

/// Renormalized energy density; `config.regulator_t` must be 0 and `x` strictly
/// interior.
pub fn energy_density_renormalized(geometry: &Geometry, x: f64, config: &DensityConfig) -> Result<EnergyBreakdown> {
    config.validate()?;
    if config.regulator_t != 0.0 {
        return Err(invalid("renormalized densities need regulator_t = 0"));
    }
    geometry.check_interior(x)?;
    let w = config.boundary_weight();
    let (periodic, boundary) = match *geometry {
        Geometry::Interval { length, left, right } => {
            let b = PI * x / length;
            let pref = PI / (8.0 * length * length);
            let sb = b.sin();
            if left == right {
                (-PI / (24.0 * length * length), -left.sign() * pref / (sb * sb))
            } else {
                (PI / (48.0 * length * length), -left.sign() * pref * b.cos() / (sb * sb))
            }
        }
        Geometry::HalfLine { at_origin } => (0.0, -at_origin.sign() / (8.0 * PI * x * x)),
        Geometry::TwistedCircle { length, theta } => (twisted_energy(theta, length)? / length, 0.0),
    };
    Ok(EnergyBreakdown::new(0.0, periodic, w * boundary, 0.0, geometry))
}

/// Dispatches on `config.regulator_t`: 0 gives the renormalized density.
pub fn energy_density(geometry: &Geometry, x: f64, config: &DensityConfig) -> Result<EnergyBreakdown> {
    if config.regulator_t == 0.0 {
        energy_density_renormalized(geometry, x, config)
    } else {
        energy_density_regularized(geometry, config.regulator_t, x, config)
    }
}

/// Energy densities over a grid of positions.
pub fn energy_density_grid(
    geometry: &Geometry,
    xs: &[f64],
    config: &DensityConfig,
    exec: Execution,
) -> Result<Vec<EnergyBreakdown>> {
    par::map(exec, xs, |&x| energy_density(geometry, x, config))
        .into_iter()
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OrbitEnergyMethod {
    RieszCesaro2,
    Abel,
}

/// Energy density carried by one periodic orbit of length `nL` and holonomy
/// `nθ`, `−cos(nθ)/(2π(nL)²)`, by either regularization.
pub fn orbit_energy_contribution(n: u32, length: f64, theta: f64, method: OrbitEnergyMethod) -> Result<f64> {
    check_length(length)?;
    if n == 0 {
        return Err(invalid("orbit index n must be at least 1"));
    }
    let v = match method {
        OrbitEnergyMethod::RieszCesaro2 => riesz_cesaro2_limit(n, length, theta).value / (2.0 * PI),
        OrbitEnergyMethod::Abel => abel_orbit_energy(n, length, theta, 0.0),
    };
    Ok(v)
}

/// `−(1/2π) d/dt ∫₀^∞ cos(ωnL + nθ) e^{−ωt} dω`, the Abel-regularized orbit
/// energy at damping `t` (exact for all `t ≥ 0`).
pub fn abel_orbit_energy(n: u32, length: f64, theta: f64, t: f64) -> f64 {
    let a = n as f64 * length;
    let b = -(n as f64) * theta;
    // d/dt of (t cos b + a sin b)/(t² + a²).
    let d = t * t + a * a;
    let deriv = (b.cos() * (a * a - t * t) - 2.0 * a * t * b.sin()) / (d * d);
    -deriv / (2.0 * PI)
}

/// Abel-damped orbit series for the twisted-circle energy,
/// `E(t) − L/(2πt²) = −(L/π) Σ_{n≥1} cos(nθ)(n²L² − t²)/(t² + n²L²)²`,
/// summed directly to `n_direct` with an asymptotic tail.
pub fn twisted_abel_energy(theta: f64, length: f64, t: f64, n_direct: usize) -> Result<SeriesValue> {
    check_length(length)?;
    check_t(t)?;
    let s = one_sided(
        |n| {
            let k2 = n * n * length * length;
            let d = t * t + k2;
            (k2 - t * t) / (d * d)
        },
        1,
        n_direct.max(1) as i64,
        unit_phase(theta),
    );
    let pref = -length / PI;
    Ok(SeriesValue::new(
        pref * s.value.re,
        s.direct_terms,
        pref.abs() * s.tail_bound,
        SummationMethod::Abel,
    ))
}

/// [`twisted_abel_energy`] over a θ grid.
pub fn twisted_abel_curve(
    thetas: &[f64],
    length: f64,
    t: f64,
    n_direct: usize,
    exec: Execution,
) -> Result<Vec<SeriesValue>> {
    par::map(exec, thetas, |&th| twisted_abel_energy(th, length, t, n_direct))
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use BoundaryCondition::{Dirichlet as D, Neumann as N};

    #[test]
    fn renormalized_totals() {
        let dd = Geometry::interval(1.0, D, D).unwrap();
        assert_abs_diff_eq!(
            total_energy_renormalized(&dd).unwrap().total_renormalized,
            -0.1308997,
            epsilon = 1e-7
        );
        let dn = Geometry::interval(1.0, D, N).unwrap();
        assert_abs_diff_eq!(
            total_energy_renormalized(&dn).unwrap().total_renormalized,
            0.0654498,
            epsilon = 1e-7
        );
        let c = Geometry::twisted_circle(1.0, PI).unwrap();
        assert_abs_diff_eq!(
            total_energy_renormalized(&c).unwrap().total_renormalized,
            0.2617994,
            epsilon = 1e-7
        );
        let nn = Geometry::interval(1.0, N, N).unwrap();
        assert!(total_energy_renormalized(&nn).unwrap().zero_mode_neglected);
        assert!(total_energy_renormalized(&Geometry::half_line(D)).is_err());
    }

    #[test]
    fn twisted_energy_examples() {
        assert_relative_eq!(twisted_energy(0.0, 1.0).unwrap(), -PI / 6.0);
        assert_relative_eq!(twisted_energy(PI, 1.0).unwrap(), PI / 12.0);
        let root = PI * (1.0 - 1.0 / 3f64.sqrt());
        assert_abs_diff_eq!(twisted_energy(root, 1.0).unwrap(), 0.0, epsilon = 1e-12);
        assert_relative_eq!(twisted_energy(-1.0, 1.0).unwrap(), twisted_energy(1.0, 1.0).unwrap());
        assert_relative_eq!(
            twisted_energy(1.0 + 2.0 * PI, 2.0).unwrap(),
            twisted_energy(1.0, 2.0).unwrap(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn regularized_limits() {
        let dd = Geometry::interval(1.0, D, D).unwrap();
        let e = total_energy_regularized(&dd, 1e-3).unwrap();
        assert!((e.periodic + PI / 24.0).abs() < 1e-5);
        let dn = Geometry::interval(1.0, D, N).unwrap();
        let e = total_energy_regularized(&dn, 1e-3).unwrap();
        assert!((e.periodic - PI / 48.0).abs() < 1e-5);
        for g in [dd, dn, Geometry::interval(1.0, N, N).unwrap()] {
            let e = total_energy_regularized(&g, 0.5).unwrap();
            assert_abs_diff_eq!(e.boundary, 0.0, epsilon = 1e-10);
            assert_relative_eq!(e.weyl, 1.0 / (2.0 * PI * 0.25));
        }
    }

    #[test]
    fn series_and_direct_forms_join() {
        for z in [0.0999f64, 0.1, 0.1001] {
            let s = z.sinh();
            assert_relative_eq!(
                csch2_minus_inverse_square(z),
                1.0 / (s * s) - 1.0 / (z * z),
                max_relative = 1e-10
            );
            assert_relative_eq!(
                csch_coth_minus_inverse_square(z),
                1.0 / (s * z.tanh()) - 1.0 / (z * z),
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn regularized_energy_is_minus_half_trace_derivative() {
        use crate::kernels::{cylinder_trace, KernelMethod};
        let ctl = SeriesControl::default();
        for g in [
            Geometry::interval(1.3, D, D).unwrap(),
            Geometry::interval(1.3, N, D).unwrap(),
            Geometry::twisted_circle(1.3, 2.0).unwrap(),
        ] {
            let t = 0.4;
            let h = 1e-4;
            let tr = |t: f64| cylinder_trace(&g, t, KernelMethod::ClosedForm, &ctl).unwrap().value;
            let fd = -0.5 * (tr(t + h) - tr(t - h)) / (2.0 * h);
            let e = total_energy_regularized(&g, t).unwrap();
            assert_relative_eq!(e.total(), fd, max_relative = 1e-7);
        }
    }

    #[test]
    fn twisted_regularized_tends_to_bernoulli() {
        let g = Geometry::twisted_circle(1.0, 1.0).unwrap();
        let e = total_energy_regularized(&g, 1e-3).unwrap();
        assert_abs_diff_eq!(e.periodic, twisted_energy(1.0, 1.0).unwrap(), epsilon = 1e-5);
    }

    #[test]
    fn half_line_total_vanishes() {
        assert_eq!(half_line_total(0.001, D).unwrap(), 0.0);
        assert_eq!(half_line_total(1.0, N).unwrap(), 0.0);
        let (v, err) = half_line_total_quadrature(0.01, D, 1e3).unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-6);
        assert!(err < 1e-6);
    }

    #[test]
    fn density_examples() {
        let cfg = DensityConfig::default();
        let h = Geometry::half_line(D);
        assert_abs_diff_eq!(
            energy_density_renormalized(&h, 1.0, &cfg).unwrap().boundary,
            0.0397887,
            epsilon = 1e-7
        );
        let dd = Geometry::interval(1.0, D, D).unwrap();
        let e = energy_density_renormalized(&dd, 0.5, &cfg).unwrap();
        assert_abs_diff_eq!(e.total_renormalized, 0.2617994, epsilon = 1e-7);
        let e = energy_density_renormalized(&dd, 0.25, &cfg).unwrap();
        assert_abs_diff_eq!(e.total_renormalized, 0.6544985, epsilon = 1e-7);
        assert!(energy_density_renormalized(&dd, 0.0, &cfg).is_err());
        assert!(energy_density_renormalized(&dd, 0.5, &DensityConfig::new(0.25, 0.1).unwrap()).is_err());

        let e = energy_density_regularized(&h, 0.001, 0.1, &cfg).unwrap();
        assert_abs_diff_eq!(e.boundary, 3.9785752, epsilon = 1e-7);
        assert_relative_eq!(e.boundary, 1.0 / (8.0 * PI * 0.01), max_relative = 1e-3);
        let e = energy_density_regularized(&dd, 0.001, 1e-9, &cfg).unwrap();
        assert_relative_eq!(e.boundary, -1.0 / (2.0 * PI * 1e-6), max_relative = 1e-6);
    }

    #[test]
    fn closed_form_boundary_density_matches_image_sum() {
        let ctl = SeriesControl::default();
        for (l, r) in [(D, D), (D, N), (N, D), (N, N)] {
            let g = Geometry::interval(1.2, l, r).unwrap();
            for &(t, x) in &[(0.05, 0.1), (0.3, 0.6), (1.0, 1.1), (0.01, 0.5)] {
                let c = energy_density_regularized(&g, t, x, &DensityConfig::default())
                    .unwrap()
                    .boundary;
                let i = boundary_density_image_sum(&g, t, x, &ctl).unwrap();
                assert_abs_diff_eq!(c, i, epsilon = 1e-9 * c.abs().max(1.0));
            }
        }
    }

    #[test]
    fn boundary_density_symmetries() {
        let cfg = DensityConfig::default();
        for (l, r) in [(D, D), (N, N), (D, N)] {
            let g = Geometry::interval(1.0, l, r).unwrap();
            let flipped = g.flipped();
            let odd = l != r;
            for &x in &[0.1, 0.33, 0.7] {
                let a = energy_density_regularized(&g, 0.2, x, &cfg).unwrap().boundary;
                let b = energy_density_regularized(&flipped, 0.2, x, &cfg).unwrap().boundary;
                assert_relative_eq!(a, -b, max_relative = 1e-13);
                let m = energy_density_regularized(&g, 0.2, 1.0 - x, &cfg).unwrap().boundary;
                let expect = if odd { -a } else { a };
                assert_abs_diff_eq!(m, expect, epsilon = 1e-11 * a.abs().max(1.0));
            }
        }
    }

    #[test]
    fn xi_only_rescales_boundary_term() {
        let g = Geometry::interval(1.0, D, D).unwrap();
        let a = energy_density_regularized(&g, 0.3, 0.2, &DensityConfig::new(0.0, 0.0).unwrap()).unwrap();
        let b = energy_density_regularized(&g, 0.3, 0.2, &DensityConfig::new(0.125, 0.0).unwrap()).unwrap();
        let c = energy_density_regularized(&g, 0.3, 0.2, &DensityConfig::new(0.25, 0.0).unwrap()).unwrap();
        assert_eq!(a.boundary, 0.0);
        assert_relative_eq!(b.boundary, 0.5 * c.boundary, max_relative = 1e-15);
        assert_eq!(a.periodic, c.periodic);
        assert!(DensityConfig::new(0.3, 0.0).is_err());
    }

    #[test]
    fn orbit_energy_examples() {
        for m in [OrbitEnergyMethod::RieszCesaro2, OrbitEnergyMethod::Abel] {
            assert_abs_diff_eq!(
                orbit_energy_contribution(1, 1.0, 0.0, m).unwrap(),
                -0.1591549,
                epsilon = 1e-7
            );
            assert_abs_diff_eq!(
                orbit_energy_contribution(2, 1.0, PI, m).unwrap(),
                -0.0397887,
                epsilon = 1e-7
            );
            assert_abs_diff_eq!(
                orbit_energy_contribution(1, 1.0, PI / 2.0, m).unwrap(),
                0.0,
                epsilon = 1e-13
            );
        }
        assert!(orbit_energy_contribution(0, 1.0, 0.0, OrbitEnergyMethod::Abel).is_err());
    }

    #[test]
    fn twisted_abel_series_matches_bernoulli() {
        for theta in [0.0, 0.7, PI, 5.0] {
            let s = twisted_abel_energy(theta, 1.0, 1e-4, 10_000).unwrap();
            assert_abs_diff_eq!(s.value, twisted_energy(theta, 1.0).unwrap(), epsilon = 1e-7);
        }
    }
}
