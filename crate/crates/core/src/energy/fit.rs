//! Small-t coefficient fits for the cylinder and heat traces.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{invalid, Result, VacuumError};
use crate::kernels::{cylinder_trace, heat_trace, KernelMethod};
use crate::spectrum::Geometry;
use crate::summation::SeriesControl;

/// Coefficients of `Tr T(t) ≈ e₀/t + e₁ + e₂ t + e₃ t² + e₄ t³`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CylinderExpansion {
    /// `e₀ … e₄`.
    pub e: Vec<f64>,
    /// Log coefficients `f_s`; not fitted, reported as 0.
    pub f: Vec<f64>,
    /// Largest absolute residual over the grid.
    pub residual: f64,
    pub t_grid: Vec<f64>,
}

impl CylinderExpansion {
    /// `E = −e₂/2`.
    pub fn energy(&self) -> f64 {
        -0.5 * self.e[2]
    }
}

/// Coefficients of `Tr K(t) ≈ Σ_s b_s t^{(s−1)/2}` for `s = 0 … 4`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatExpansion {
    pub b: Vec<f64>,
    pub residual: f64,
    pub t_grid: Vec<f64>,
}

/// Twelve log-spaced points in `[1e-3 L, 3e-2 L]`.
pub fn default_fit_grid(length: f64) -> Vec<f64> {
    geomspace(1e-3 * length, 3e-2 * length, 12)
}

fn geomspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Least squares for `y ≈ Σ_k c_k t^{p_k}`, with the design columns scaled
/// by `t_max^{p_k}` for conditioning. Returns coefficients and the largest
/// absolute residual.
fn power_fit(ts: &[f64], ys: &[f64], powers: &[f64]) -> Result<(Vec<f64>, f64)> {
    if ts.len() < powers.len() {
        return Err(invalid(format!(
            "need at least {} grid points, got {}",
            powers.len(),
            ts.len()
        )));
    }
    let t_max = ts.iter().cloned().fold(0.0, f64::max);
    let a = DMatrix::from_fn(ts.len(), powers.len(), |i, k| (ts[i] / t_max).powf(powers[k]));
    let y = DVector::from_column_slice(ys);
    let svd = a.clone().svd(true, true);
    let c = svd
        .solve(&y, 1e-14)
        .map_err(|e| invalid(format!("least squares failed: {e}")))?;
    let residual = (&a * &c - &y).amax();
    let coeffs = c.iter().zip(powers).map(|(ci, &p)| ci / t_max.powf(p)).collect();
    Ok((coeffs, residual))
}

/// Fits the cylinder-trace expansion on closed-form trace samples over the
/// default grid.
pub fn extract_cylinder_coefficients(geometry: &Geometry) -> Result<CylinderExpansion> {
    let length = geometry
        .length()
        .ok_or(VacuumError::ContinuousSpectrum("the half-line"))?;
    extract_cylinder_coefficients_with(
        geometry,
        &default_fit_grid(length),
        KernelMethod::ClosedForm,
        &SeriesControl::default(),
    )
}

/// Fits the cylinder-trace expansion on samples from the chosen route.
pub fn extract_cylinder_coefficients_with(
    geometry: &Geometry,
    grid: &[f64],
    method: KernelMethod,
    control: &SeriesControl,
) -> Result<CylinderExpansion> {
    if grid.iter().any(|&t| !(t > 0.0)) {
        return Err(invalid("fit grid must be positive"));
    }
    let ys = grid
        .iter()
        .map(|&t| cylinder_trace(geometry, t, method, control).map(|v| v.value))
        .collect::<Result<Vec<_>>>()?;
    let powers = [-1.0, 0.0, 1.0, 2.0, 3.0];
    let (e, residual) = power_fit(grid, &ys, &powers)?;
    let t_min = grid.iter().cloned().fold(f64::INFINITY, f64::min);
    let scale = (e[0] / t_min).abs();
    if residual > 1e-8 * scale {
        return Err(VacuumError::IllConditionedFit {
            residual,
            threshold: 1e-8 * scale,
        });
    }
    Ok(CylinderExpansion {
        e,
        f: vec![0.0; 5],
        residual,
        t_grid: grid.to_vec(),
    })
}

/// Fits `Tr K(t)` on `grid` (default `[1e-3, 2e-2] L`, twelve log-spaced points).
pub fn fit_heat_coefficients(geometry: &Geometry, grid: Option<&[f64]>) -> Result<HeatExpansion> {
    let length = geometry
        .length()
        .ok_or(VacuumError::ContinuousSpectrum("the half-line"))?;
    let owned;
    let grid = match grid {
        Some(g) => g,
        None => {
            owned = geomspace(1e-3 * length, 2e-2 * length, 12);
            &owned
        }
    };
    let control = SeriesControl::default();
    let ys = grid
        .iter()
        .map(|&t| heat_trace(geometry, t, &control).map(|v| v.value))
        .collect::<Result<Vec<_>>>()?;
    let powers: Vec<f64> = (0..5).map(|s| (s as f64 - 1.0) / 2.0).collect();
    let (b, residual) = power_fit(grid, &ys, &powers)?;
    Ok(HeatExpansion {
        b,
        residual,
        t_grid: grid.to_vec(),
    })
}

/// `Γ(k/2)` for a nonzero integer `k` that is not a nonpositive even number.
pub fn half_integer_gamma(k: i32) -> Result<f64> {
    if k <= 0 && k % 2 == 0 {
        return Err(invalid(format!("Gamma has a pole at {}", k as f64 / 2.0)));
    }
    // Start from Γ(1/2) or Γ(1) and step by ±1.
    let (mut x, mut g) = if k % 2 != 0 { (0.5, PI.sqrt()) } else { (1.0, 1.0) };
    let target = k as f64 / 2.0;
    while x < target {
        g *= x;
        x += 1.0;
    }
    while x > target {
        x -= 1.0;
        g /= x;
    }
    Ok(g)
}

/// One order `s` of the heat/cylinder relation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem1Relation {
    pub s: u32,
    /// The heat coefficient fixes `e_s`.
    pub determined: bool,
    pub b: f64,
    pub fitted_e: f64,
    /// `π^{-1/2} 2^{d−s} Γ((d−s+1)/2) b_s` where defined.
    pub predicted_e: Option<f64>,
    /// Log coefficient fixed by `b_s` when `e_s` is not.
    pub predicted_f: Option<f64>,
    pub deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem1Report {
    pub dimension: u32,
    pub heat: HeatExpansion,
    pub cylinder: CylinderExpansion,
    pub relations: Vec<Theorem1Relation>,
}

impl Theorem1Report {
    /// Largest deviation over the determined orders.
    pub fn max_deviation(&self) -> f64 {
        self.relations.iter().filter_map(|r| r.deviation).fold(0.0, f64::max)
    }
}

/// Fits both traces and compares the cylinder coefficients with those the
/// heat coefficients predict.
///
/// With `d − s` odd and negative the Gamma factor has a pole, so `e_s` is
/// undetermined and `b_s` fixes the log coefficient
/// `f_s = 2^{d−s+1} (−1)^{(s−d+1)/2} b_s / (√π ((s−d−1)/2)!)` instead.
pub fn theorem1_check(geometry: &Geometry) -> Result<Theorem1Report> {
    let d = geometry.dimension() as i32;
    let heat = fit_heat_coefficients(geometry, None)?;
    let cylinder = extract_cylinder_coefficients(geometry)?;
    let mut relations = Vec::new();
    for s in 0..5i32 {
        let b = heat.b[s as usize];
        let fitted_e = cylinder.e[s as usize];
        let k = d - s + 1;
        let determined = !(k <= 0 && k % 2 == 0);
        let (predicted_e, predicted_f) = if determined {
            let pe = PI.powf(-0.5) * 2f64.powi(d - s) * half_integer_gamma(k)? * b;
            (Some(pe), None)
        } else {
            let m = (s - d - 1) / 2;
            let fact: f64 = (1..=m).map(|i| i as f64).product();
            let sign = if ((s - d + 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            (None, Some(2f64.powi(d - s + 1) * sign * b / (PI.sqrt() * fact)))
        };
        let deviation = predicted_e.map(|p| (p - fitted_e).abs());
        relations.push(Theorem1Relation {
            s: s as u32,
            determined,
            b,
            fitted_e,
            predicted_e,
            predicted_f,
            deviation,
        });
    }
    Ok(Theorem1Report {
        dimension: d as u32,
        heat,
        cylinder,
        relations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::BoundaryCondition::{Dirichlet as D, Neumann as N};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn gamma_values() {
        assert_relative_eq!(half_integer_gamma(1).unwrap(), PI.sqrt());
        assert_relative_eq!(half_integer_gamma(2).unwrap(), 1.0);
        assert_relative_eq!(half_integer_gamma(5).unwrap(), 0.75 * PI.sqrt());
        assert_relative_eq!(half_integer_gamma(-1).unwrap(), -2.0 * PI.sqrt());
        assert_relative_eq!(half_integer_gamma(-3).unwrap(), 4.0 / 3.0 * PI.sqrt());
        assert!(half_integer_gamma(0).is_err());
        assert!(half_integer_gamma(-2).is_err());
    }

    #[test]
    fn dirichlet_cylinder_fit() {
        let g = Geometry::interval(1.0, D, D).unwrap();
        let c = extract_cylinder_coefficients(&g).unwrap();
        assert_relative_eq!(c.e[0], 1.0 / PI, max_relative = 1e-6);
        assert_abs_diff_eq!(c.e[1], -0.5, epsilon = 1e-6);
        assert_relative_eq!(c.e[2], PI / 12.0, max_relative = 1e-6);
        assert_relative_eq!(c.energy(), -PI / 24.0, max_relative = 1e-6);
    }

    #[test]
    fn other_fits() {
        let c = extract_cylinder_coefficients(&Geometry::twisted_circle(1.0, PI).unwrap()).unwrap();
        assert_relative_eq!(c.e[2], -PI / 6.0, max_relative = 1e-6);
        let c = extract_cylinder_coefficients(&Geometry::interval(1.0, D, N).unwrap()).unwrap();
        assert_abs_diff_eq!(c.e[1], 0.0, epsilon = 1e-8);
        let c = extract_cylinder_coefficients(&Geometry::interval(2.5, N, N).unwrap()).unwrap();
        assert_relative_eq!(c.energy(), -PI / (24.0 * 2.5), max_relative = 1e-6);
        assert!(extract_cylinder_coefficients(&Geometry::half_line(D)).is_err());
    }

    #[test]
    fn image_sum_samples_give_same_fit() {
        let g = Geometry::interval(1.0, D, D).unwrap();
        let c = extract_cylinder_coefficients_with(
            &g,
            &default_fit_grid(1.0),
            KernelMethod::ImageSum,
            &SeriesControl::default(),
        )
        .unwrap();
        assert_relative_eq!(c.e[2], PI / 12.0, max_relative = 1e-5);
    }

    #[test]
    fn theorem1_relations() {
        let r = theorem1_check(&Geometry::interval(1.0, D, D).unwrap()).unwrap();
        assert_abs_diff_eq!(r.heat.b[0], 0.2820948, epsilon = 1e-7);
        let det: Vec<u32> = r.relations.iter().filter(|x| x.determined).map(|x| x.s).collect();
        assert_eq!(det, vec![0, 1, 3]);
        assert!(r.max_deviation() < 1e-6, "{r:?}");
    }
}
