//! Zeta cross-check and the comparison of exact, stationary-phase and
//! short-orbit treatments.

use std::f64::consts::PI;

use serde::Serialize;

use super::{energy_density_renormalized, total_energy_renormalized, DensityConfig};
use crate::error::{invalid, Result};
use crate::spectrum::{BoundaryCondition, Geometry};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaCheck {
    /// `(π/2L) ζ(−1)`.
    pub zeta_value: f64,
    /// Renormalized Dirichlet interval energy.
    pub renormalized: f64,
    pub consistent: bool,
}

/// Compares `(π/2L) ζ(−1)` with the renormalized D/D interval energy.
pub fn zeta_check(length: f64) -> Result<ZetaCheck> {
    let g = Geometry::interval(length, BoundaryCondition::Dirichlet, BoundaryCondition::Dirichlet)?;
    let zeta_minus_one = -1.0 / 12.0;
    let zeta_value = PI / (2.0 * length) * zeta_minus_one;
    let renormalized = total_energy_renormalized(&g)?.total_renormalized;
    Ok(ZetaCheck {
        zeta_value,
        renormalized,
        consistent: (zeta_value - renormalized).abs() <= 1e-14 * zeta_value.abs(),
    })
}

/// Total energies under the three treatments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GlobalComparison {
    pub exact: f64,
    /// All boundary families dropped.
    pub stationary_phase: f64,
    /// Only singly reflected boundary orbits kept.
    pub short_orbit: f64,
    pub exact_boundary: f64,
    pub short_orbit_boundary: f64,
}

/// Energy densities at one position under the three treatments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalComparison {
    pub x: f64,
    pub exact: f64,
    pub stationary_phase: f64,
    pub short_orbit: f64,
    pub exact_boundary: f64,
    pub short_orbit_boundary: f64,
}

impl LocalComparison {
    pub fn stationary_phase_deviation(&self) -> f64 {
        self.stationary_phase - self.exact
    }

    pub fn short_orbit_deviation(&self) -> f64 {
        self.short_orbit - self.exact
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproximationReport {
    pub geometry: Geometry,
    pub global: GlobalComparison,
    pub local: Vec<LocalComparison>,
}

impl ApproximationReport {
    pub fn global_stationary_phase_deviation(&self) -> f64 {
        self.global.stationary_phase - self.global.exact
    }

    pub fn global_short_orbit_deviation(&self) -> f64 {
        self.global.short_orbit - self.global.exact
    }
}

/// Positions used for the local rows, as fractions of `L`.
pub const REPORT_FRACTIONS: [f64; 7] = [0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9];

/// Exact vs stationary-phase vs short-orbit energies for an interval, at
/// ξ = 1/4, for the total and at [`REPORT_FRACTIONS`] of the length.
pub fn approximation_report(geometry: &Geometry) -> Result<ApproximationReport> {
    let Geometry::Interval { length, left, right } = *geometry else {
        return Err(invalid("approximation_report needs an interval"));
    };
    let exact = total_energy_renormalized(geometry)?;
    // The two single-reflection pole pairs at t → 0; they cancel for mixed
    // conditions.
    let short_orbit_boundary = if left == right {
        left.sign() / (4.0 * PI * length)
    } else {
        0.0
    };
    let global = GlobalComparison {
        exact: exact.total_renormalized,
        stationary_phase: exact.periodic,
        short_orbit: exact.periodic + short_orbit_boundary,
        exact_boundary: exact.boundary,
        short_orbit_boundary,
    };
    let cfg = DensityConfig::default();
    let local = REPORT_FRACTIONS
        .iter()
        .map(|&f| {
            let x = f * length;
            let e = energy_density_renormalized(geometry, x, &cfg)?;
            let so = -left.sign() / (8.0 * PI * x * x) - right.sign() / (8.0 * PI * (length - x).powi(2));
            Ok(LocalComparison {
                x,
                exact: e.total_renormalized,
                stationary_phase: e.periodic,
                short_orbit: e.periodic + so,
                exact_boundary: e.boundary,
                short_orbit_boundary: so,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ApproximationReport {
        geometry: *geometry,
        global,
        local,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use BoundaryCondition::{Dirichlet as D, Neumann as N};

    #[test]
    fn zeta_values() {
        let z = zeta_check(1.0).unwrap();
        assert_relative_eq!(z.zeta_value, -PI / 24.0);
        assert!(z.consistent);
        assert_relative_eq!(zeta_check(2.0).unwrap().zeta_value, -PI / 48.0);
        assert!(zeta_check(-1.0).is_err());
    }

    #[test]
    fn report_examples() {
        let r = approximation_report(&Geometry::interval(1.0, D, D).unwrap()).unwrap();
        assert_abs_diff_eq!(r.global.short_orbit_boundary, -0.0795775, epsilon = 1e-7);
        assert_eq!(r.global.exact_boundary, 0.0);
        assert_relative_eq!(r.global.stationary_phase, -PI / 24.0);
        assert_eq!(r.global_stationary_phase_deviation(), 0.0);
        let row = r.local.iter().find(|c| (c.x - 0.1).abs() < 1e-12).unwrap();
        assert_relative_eq!(
            -row.stationary_phase_deviation(),
            row.exact_boundary,
            max_relative = 1e-14
        );
        assert!((row.exact_boundary - 1.0 / (8.0 * PI * 0.01)).abs() / row.exact_boundary < 0.05);

        let m = approximation_report(&Geometry::interval(1.0, D, N).unwrap()).unwrap();
        assert_eq!(m.global.short_orbit_boundary, 0.0);
        assert!(approximation_report(&Geometry::half_line(D)).is_err());
    }

    #[test]
    fn short_orbits_dominate_near_walls() {
        let r = approximation_report(&Geometry::interval(1.0, N, N).unwrap()).unwrap();
        let near = &r.local[0];
        assert_relative_eq!(near.short_orbit_boundary, near.exact_boundary, max_relative = 1e-3);
    }
}
