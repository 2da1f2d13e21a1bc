//! Closed classical paths, Green-function image sums and spectral densities
//! split by orbit family.
//!
//! On the interval the images of a source at `y` come in two families:
//! periodic images at `x − y + 2nL` and reflected images at `x + y + 2nL`,
//! each with a sign `(−1)^{n(l+r)}` and an extra `(−1)^l` on the reflected
//! family. On the twisted circle the images sit at `x − y − nL` and carry the
//! holonomy phase `e^{inθ}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, VacuumError};
use crate::spectrum::{bernoulli_period_count, BoundaryCondition, Geometry};
use crate::summation::{SeriesControl, SeriesValue, SummationMethod};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OrbitFamily {
    Direct,
    Periodic,
    BoundaryOdd,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitTerm {
    pub family: OrbitFamily,
    pub winding: i64,
    pub displacement: f64,
    pub sign: f64,
    pub phase: f64,
}

impl OrbitTerm {
    /// Length of the closed path, `|displacement|`.
    pub fn length(&self) -> f64 {
        self.displacement.abs()
    }
}

pub(crate) fn parity_sign(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `(−1)^{l+r}` for an interval.
pub(crate) fn winding_sign(left: BoundaryCondition, right: BoundaryCondition) -> f64 {
    left.sign() * right.sign()
}

/// All image terms with `|n| ≤ max_winding`, ordered by orbit length.
pub fn enumerate_orbits(geometry: &Geometry, x: f64, y: f64, max_winding: usize) -> Result<Vec<OrbitTerm>> {
    geometry.check_interior(x)?;
    geometry.check_interior(y)?;
    if max_winding == 0 {
        return Err(crate::error::invalid("max_winding must be at least 1"));
    }
    let nmax = max_winding as i64;
    let mut terms = Vec::new();
    match *geometry {
        Geometry::Interval { length, left, right } => {
            let lr = (left.parity_index() + right.parity_index()) as i64;
            for n in -nmax..=nmax {
                let s = parity_sign(n * lr);
                terms.push(OrbitTerm {
                    family: if n == 0 {
                        OrbitFamily::Direct
                    } else {
                        OrbitFamily::Periodic
                    },
                    winding: n,
                    displacement: x - y + 2.0 * n as f64 * length,
                    sign: s,
                    phase: 0.0,
                });
                terms.push(OrbitTerm {
                    family: OrbitFamily::BoundaryOdd,
                    winding: n,
                    displacement: x + y + 2.0 * n as f64 * length,
                    sign: left.sign() * s,
                    phase: 0.0,
                });
            }
        }
        Geometry::HalfLine { at_origin } => {
            terms.push(OrbitTerm {
                family: OrbitFamily::Direct,
                winding: 0,
                displacement: x - y,
                sign: 1.0,
                phase: 0.0,
            });
            terms.push(OrbitTerm {
                family: OrbitFamily::BoundaryOdd,
                winding: 0,
                displacement: x + y,
                sign: at_origin.sign(),
                phase: 0.0,
            });
        }
        Geometry::TwistedCircle { length, theta } => {
            for n in -nmax..=nmax {
                terms.push(OrbitTerm {
                    family: if n == 0 {
                        OrbitFamily::Direct
                    } else {
                        OrbitFamily::Periodic
                    },
                    winding: n,
                    displacement: x - y - n as f64 * length,
                    sign: 1.0,
                    phase: n as f64 * theta,
                });
            }
        }
    }
    terms.sort_by(|a, b| a.length().total_cmp(&b.length()));
    Ok(terms)
}

/// Raw partial sum of `Im G(ω², x, x) = Σ sign·cos(ω|d| + phase)/(2ω)` over
/// the enumerated orbits.
pub fn green_im_diag(geometry: &Geometry, omega: f64, x: f64, max_winding: usize) -> Result<SeriesValue> {
    check_omega(omega)?;
    let orbits = enumerate_orbits(geometry, x, x, max_winding)?;
    let value: f64 = orbits
        .iter()
        .rev()
        .map(|o| o.sign * (omega * o.length() + o.phase).cos())
        .sum::<f64>()
        / (2.0 * omega);
    let per_winding = match geometry {
        Geometry::Interval { .. } => 4.0,
        Geometry::TwistedCircle { .. } => 2.0,
        Geometry::HalfLine { .. } => 0.0,
    };
    // Oscillatory terms do not decay; the next winding can move the sum by
    // its full amplitude.
    let bound = if per_winding == 0.0 {
        0.0
    } else {
        per_winding / (2.0 * omega)
    };
    let method = if per_winding == 0.0 {
        SummationMethod::ClosedForm
    } else {
        SummationMethod::Raw
    };
    Ok(SeriesValue::new(value, orbits.len(), bound, method))
}

fn check_omega(omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(crate::error::invalid(format!("omega must be positive, got {omega}")))
    }
}

/// `σ(ω, x) = σ_av + σ_per + σ_bdry`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalSpectralDensity {
    pub omega: f64,
    pub x: f64,
    pub sigma_av: f64,
    pub sigma_per: SeriesValue,
    pub sigma_bdry: SeriesValue,
}

impl LocalSpectralDensity {
    pub fn total(&self) -> f64 {
        self.sigma_av + self.sigma_per.value + self.sigma_bdry.value
    }
}

/// Summand of `πσ_bdry` on the interval: `(−1)^{l+n(l+r)} cos(2ω(x+nL))`.
pub fn sigma_bdry_summand(
    left: BoundaryCondition,
    right: BoundaryCondition,
    length: f64,
    omega: f64,
    x: f64,
    n: i64,
) -> f64 {
    let lr = (left.parity_index() + right.parity_index()) as i64;
    left.sign() * parity_sign(n * lr) * (2.0 * omega * (x + n as f64 * length)).cos()
}

/// Summand of `πρ_bdry` on the interval:
/// `(−1)^{l+n(l+r)} [sin(2ω(n+1)L) − sin(2ωnL)]/(2ω)`.
pub fn rho_bdry_summand(left: BoundaryCondition, right: BoundaryCondition, length: f64, omega: f64, n: i64) -> f64 {
    let lr = (left.parity_index() + right.parity_index()) as i64;
    let a = |u: f64| (2.0 * omega * u).sin() / (2.0 * omega);
    left.sign() * parity_sign(n * lr) * (a((n + 1) as f64 * length) - a(n as f64 * length))
}

/// Local spectral density. With `control.damping_t = t > 0` every orbit term
/// is weighted by `e^{−t·length}` and the geometric series are summed in
/// closed form; otherwise the raw symmetric partial sums over
/// `|n| ≤ control.max_terms` are returned.
pub fn local_spectral_density(
    geometry: &Geometry,
    omega: f64,
    x: f64,
    control: &SeriesControl,
) -> Result<LocalSpectralDensity> {
    check_omega(omega)?;
    control.validate()?;
    geometry.check_interior(x)?;
    let t = control.damping_t;
    let nmax = control.max_terms as i64;
    let (sigma_per, sigma_bdry) = match *geometry {
        Geometry::HalfLine { at_origin } => {
            let v = at_origin.sign() * (2.0 * omega * x).cos() * (-2.0 * t * x).exp() / PI;
            let tag = if t > 0.0 {
                SummationMethod::Abel
            } else {
                SummationMethod::ClosedForm
            };
            (SeriesValue::closed_form(0.0), SeriesValue::new(v, 1, 0.0, tag))
        }
        Geometry::Interval { length, left, right } => {
            let s = winding_sign(left, right);
            if t > 0.0 {
                let k = Complex64::new(-2.0 * t, 2.0 * omega);
                let q = s * (k * length).exp();
                let one = Complex64::new(1.0, 0.0);
                let per = 2.0 * (q / (one - q)).re / PI;
                let bdry = left.sign() * ((k * x).exp() / (one - q) + (-k * x).exp() * q / (one - q)).re / PI;
                (
                    SeriesValue::new(per, 0, 0.0, SummationMethod::Abel),
                    SeriesValue::new(bdry, 0, 0.0, SummationMethod::Abel),
                )
            } else {
                let mut per = 0.0;
                for n in (1..=nmax).rev() {
                    let sn = if s < 0.0 { parity_sign(n) } else { 1.0 };
                    per += sn * (2.0 * omega * n as f64 * length).cos();
                }
                per *= 2.0 / PI;
                let mut bdry = 0.0;
                for m in (1..=nmax).rev() {
                    bdry += sigma_bdry_summand(left, right, length, omega, x, m)
                        + sigma_bdry_summand(left, right, length, omega, x, -m);
                }
                bdry += sigma_bdry_summand(left, right, length, omega, x, 0);
                bdry /= PI;
                (
                    SeriesValue::new(per, nmax as usize, 2.0 / PI, SummationMethod::Raw),
                    SeriesValue::new(bdry, 2 * nmax as usize + 1, 2.0 / PI, SummationMethod::Raw),
                )
            }
        }
        Geometry::TwistedCircle { length, theta } => {
            let per = if t > 0.0 {
                let one = Complex64::new(1.0, 0.0);
                let mut acc = 0.0;
                for sgn in [1.0, -1.0] {
                    let q = Complex64::new(-t * length, omega * length + sgn * theta).exp();
                    acc += (q / (one - q)).re;
                }
                SeriesValue::new(acc / PI, 0, 0.0, SummationMethod::Abel)
            } else {
                let mut acc = 0.0;
                for n in (1..=nmax).rev() {
                    let nf = n as f64;
                    acc += 2.0 * (omega * nf * length).cos() * (nf * theta).cos();
                }
                SeriesValue::new(acc / PI, nmax as usize, 2.0 / PI, SummationMethod::Raw)
            };
            (per, SeriesValue::closed_form(0.0))
        }
    };
    Ok(LocalSpectralDensity {
        omega,
        x,
        sigma_av: 1.0 / PI,
        sigma_per,
        sigma_bdry,
    })
}

/// Boundary part of the global density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BoundaryDensity {
    Series(SeriesValue),
    /// A distributional atom `weight·δ(ω − at)`.
    Atom {
        weight: f64,
        at: f64,
    },
}

impl BoundaryDensity {
    /// Pointwise value for `ω > 0`; atoms at the origin contribute nothing.
    pub fn value_at_positive_omega(&self) -> f64 {
        match *self {
            Self::Series(s) => s.value,
            Self::Atom { .. } => 0.0,
        }
    }
}

/// `ρ(ω) = ρ_Weyl + ρ_per + ρ_bdry`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GlobalDensity {
    pub omega: f64,
    pub rho_weyl: f64,
    pub rho_per: SeriesValue,
    pub rho_bdry: BoundaryDensity,
}

/// `∫₀^u cos(2ωs) e^{−2t|s|} ds`, odd in `u`.
fn damped_cos_antiderivative(omega: f64, t: f64, u: f64) -> f64 {
    let alpha = 2.0 * t;
    let beta = 2.0 * omega;
    let v = u.abs();
    let r = if alpha == 0.0 {
        (beta * v).sin() / beta
    } else {
        let e = (-alpha * v).exp();
        (e * (beta * (beta * v).sin() - alpha * (beta * v).cos()) + alpha) / (alpha * alpha + beta * beta)
    };
    r.copysign(u)
}

/// Global density and its orbit decomposition. The half-line has no finite
/// Weyl or periodic part; its boundary density is the atom `(−1)^l/4·δ(ω)`.
pub fn global_density_decomposition(geometry: &Geometry, omega: f64, control: &SeriesControl) -> Result<GlobalDensity> {
    check_omega(omega)?;
    control.validate()?;
    let t = control.damping_t;
    let nmax = control.max_terms as i64;
    match *geometry {
        Geometry::HalfLine { at_origin } => Err(VacuumError::ContinuousSpectrum(
            if at_origin == BoundaryCondition::Dirichlet {
                "the Dirichlet half-line (use half_line_boundary_density)"
            } else {
                "the Neumann half-line (use half_line_boundary_density)"
            },
        )),
        Geometry::Interval { length, left, right } => {
            let s = winding_sign(left, right);
            let rho_per = if t > 0.0 {
                let q = s * Complex64::new(-2.0 * t * length, 2.0 * omega * length).exp();
                let v = 2.0 * length / PI * (q / (Complex64::new(1.0, 0.0) - q)).re;
                SeriesValue::new(v, 0, 0.0, SummationMethod::Abel)
            } else {
                let mut acc = 0.0;
                for n in (1..=nmax).rev() {
                    let sn = if s < 0.0 { parity_sign(n) } else { 1.0 };
                    acc += sn * (2.0 * omega * n as f64 * length).cos();
                }
                SeriesValue::new(
                    2.0 * length / PI * acc,
                    nmax as usize,
                    2.0 * length / PI,
                    SummationMethod::Raw,
                )
            };
            let rho_bdry = if s < 0.0 {
                // Terms n and −(n+1) cancel pairwise.
                SeriesValue::closed_form(0.0)
            } else {
                // Even case: the sum telescopes to A((N+1)L) − A(−NL).
                let a = |u: f64| damped_cos_antiderivative(omega, t, u);
                let nf = nmax as f64;
                let v = left.sign() * (a((nf + 1.0) * length) - a(-nf * length)) / PI;
                if t > 0.0 {
                    let tail = 2.0 * (-2.0 * t * nf * length).exp() / (2.0 * omega) / PI;
                    SeriesValue::new(v, 2 * nmax as usize + 1, tail, SummationMethod::Abel)
                } else {
                    SeriesValue::new(v, 2 * nmax as usize + 1, 1.0 / (PI * omega), SummationMethod::Raw)
                }
            };
            Ok(GlobalDensity {
                omega,
                rho_weyl: length / PI,
                rho_per,
                rho_bdry: BoundaryDensity::Series(rho_bdry),
            })
        }
        Geometry::TwistedCircle { length, theta } => {
            let per = if t > 0.0 {
                let one = Complex64::new(1.0, 0.0);
                let mut acc = 0.0;
                for sgn in [1.0, -1.0] {
                    let q = Complex64::new(-t * length, omega * length + sgn * theta).exp();
                    acc += (q / (one - q)).re;
                }
                SeriesValue::new(length * acc / PI, 0, 0.0, SummationMethod::Abel)
            } else {
                let mut acc = 0.0;
                for n in (1..=nmax).rev() {
                    let nf = n as f64;
                    acc += 2.0 * (omega * nf * length).cos() * (nf * theta).cos();
                }
                SeriesValue::new(
                    length * acc / PI,
                    nmax as usize,
                    2.0 * length / PI,
                    SummationMethod::Raw,
                )
            };
            Ok(GlobalDensity {
                omega,
                rho_weyl: length / PI,
                rho_per: per,
                rho_bdry: BoundaryDensity::Series(SeriesValue::closed_form(0.0)),
            })
        }
    }
}

/// Boundary density of the half-line, `(−1)^l/4·δ(ω)`.
pub fn half_line_boundary_density(at_origin: BoundaryCondition) -> BoundaryDensity {
    BoundaryDensity::Atom {
        weight: 0.25 * at_origin.sign(),
        at: 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LocalCountingMethod {
    /// Closed Dirichlet-kernel form of the D/D mode sum.
    DirichletKernel,
    /// Symmetric truncation of the boundary orbit sum.
    OrbitSum,
}

/// `μ(ω, x) = ∫₀^ω σ(ω', x) dω'`, the local counting function.
pub fn local_counting(
    geometry: &Geometry,
    omega: f64,
    x: f64,
    method: LocalCountingMethod,
    control: &SeriesControl,
) -> Result<f64> {
    check_omega(omega)?;
    control.validate()?;
    geometry.check_interior(x)?;
    match method {
        LocalCountingMethod::DirichletKernel => match *geometry {
            Geometry::Interval {
                length,
                left: BoundaryCondition::Dirichlet,
                right: BoundaryCondition::Dirichlet,
            } => {
                let j = (omega * length / PI).floor();
                let arg = PI * x / length;
                let kernel = ((2.0 * j + 1.0) * arg).sin() / arg.sin();
                Ok((j + 0.5) / length - kernel / (2.0 * length))
            }
            _ => Err(VacuumError::UnsupportedGeometry(format!(
                "the Dirichlet-kernel form needs a D/D interval, got {}",
                geometry.label()
            ))),
        },
        LocalCountingMethod::OrbitSum => match *geometry {
            Geometry::HalfLine { at_origin } => {
                Ok(omega / PI + at_origin.sign() / (2.0 * PI) * (2.0 * omega * x).sin() / x)
            }
            Geometry::Interval { length, left, right } => {
                let per = bernoulli_period_count(geometry, omega) / length;
                let lr = (left.parity_index() + right.parity_index()) as i64;
                let nmax = control.max_terms as i64;
                let term = |n: i64| {
                    let d = x + n as f64 * length;
                    parity_sign(n * lr) * (2.0 * omega * d).sin() / (2.0 * d)
                };
                let mut acc = 0.0;
                for m in (1..=nmax).rev() {
                    acc += term(m) + term(-m);
                }
                acc += term(0);
                Ok(omega / PI + per + left.sign() * acc / PI)
            }
            Geometry::TwistedCircle { length, .. } => Ok(omega / PI + bernoulli_period_count(geometry, omega) / length),
        },
    }
}
