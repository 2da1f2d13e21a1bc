//! Geometries, their exact spectra and the eigenvalue counting function.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{invalid, Result, VacuumError};
use crate::summation::bernoulli_sin_sum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

impl BoundaryCondition {
    /// Exponent of `(−1)` attached to this end: 1 for Dirichlet, 0 for Neumann.
    pub fn parity_index(self) -> u32 {
        match self {
            Self::Dirichlet => 1,
            Self::Neumann => 0,
        }
    }

    /// `(−1)^l`.
    pub fn sign(self) -> f64 {
        match self {
            Self::Dirichlet => -1.0,
            Self::Neumann => 1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Self::Dirichlet => Self::Neumann,
            Self::Neumann => Self::Dirichlet,
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Self::Dirichlet => "D",
            Self::Neumann => "N",
        }
    }
}

impl std::str::FromStr for BoundaryCondition {
    type Err = VacuumError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "d" | "dirichlet" => Ok(Self::Dirichlet),
            "n" | "neumann" => Ok(Self::Neumann),
            other => Err(invalid(format!("unknown boundary condition '{other}'"))),
        }
    }
}

/// A one-dimensional domain with its boundary data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Geometry {
    Interval {
        length: f64,
        left: BoundaryCondition,
        right: BoundaryCondition,
    },
    HalfLine {
        at_origin: BoundaryCondition,
    },
    /// Circle of circumference `length` with holonomy `theta ∈ [0, 2π)`.
    TwistedCircle {
        length: f64,
        theta: f64,
    },
}

fn check_length(length: f64) -> Result<()> {
    if length > 0.0 && length.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("length must be positive and finite, got {length}")))
    }
}

impl Geometry {
    pub fn interval(length: f64, left: BoundaryCondition, right: BoundaryCondition) -> Result<Self> {
        check_length(length)?;
        Ok(Self::Interval { length, left, right })
    }

    pub fn half_line(at_origin: BoundaryCondition) -> Self {
        Self::HalfLine { at_origin }
    }

    /// Twisted circle; `theta` is reduced into `[0, 2π)`.
    pub fn twisted_circle(length: f64, theta: f64) -> Result<Self> {
        check_length(length)?;
        if !theta.is_finite() {
            return Err(invalid(format!("theta must be finite, got {theta}")));
        }
        let mut theta = theta.rem_euclid(2.0 * PI);
        if theta >= 2.0 * PI {
            theta = 0.0;
        }
        Ok(Self::TwistedCircle { length, theta })
    }

    pub fn dimension(&self) -> u32 {
        1
    }

    pub fn length(&self) -> Option<f64> {
        match *self {
            Self::Interval { length, .. } | Self::TwistedCircle { length, .. } => Some(length),
            Self::HalfLine { .. } => None,
        }
    }

    pub fn has_discrete_spectrum(&self) -> bool {
        !matches!(self, Self::HalfLine { .. })
    }

    pub fn has_zero_mode(&self) -> bool {
        match *self {
            Self::Interval { left, right, .. } => {
                left == BoundaryCondition::Neumann && right == BoundaryCondition::Neumann
            }
            Self::TwistedCircle { theta, .. } => theta == 0.0,
            Self::HalfLine { .. } => false,
        }
    }

    /// `l + r` modulo 2 for an interval, `None` otherwise.
    pub fn parity(&self) -> Option<u32> {
        match *self {
            Self::Interval { left, right, .. } => Some((left.parity_index() + right.parity_index()) % 2),
            _ => None,
        }
    }

    /// Same domain with both boundary conditions exchanged D ↔ N.
    pub fn flipped(&self) -> Self {
        match *self {
            Self::Interval { length, left, right } => Self::Interval {
                length,
                left: left.flipped(),
                right: right.flipped(),
            },
            Self::HalfLine { at_origin } => Self::HalfLine {
                at_origin: at_origin.flipped(),
            },
            circle => circle,
        }
    }

    /// Distance from `θ` to the nearest multiple of 2π, in `[0, π]`.
    pub(crate) fn reduced_twist(&self) -> Option<f64> {
        match *self {
            Self::TwistedCircle { theta, .. } => Some(theta.min(2.0 * PI - theta)),
            _ => None,
        }
    }

    /// Short human-readable label such as `interval(L=1, D/N)`.
    pub fn label(&self) -> String {
        match *self {
            Self::Interval { length, left, right } => {
                format!("interval(L={length}, {}/{})", left.short_name(), right.short_name())
            }
            Self::HalfLine { at_origin } => format!("half-line({})", at_origin.short_name()),
            Self::TwistedCircle { length, theta } => format!("twisted-circle(L={length}, theta={theta})"),
        }
    }

    /// Checks that `x` lies in the open interior of the domain.
    pub fn check_interior(&self, x: f64) -> Result<()> {
        let ok = match *self {
            Self::Interval { length, .. } => x > 0.0 && x < length,
            Self::HalfLine { .. } => x > 0.0 && x.is_finite(),
            Self::TwistedCircle { .. } => x.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(VacuumError::OutOfDomain {
                x,
                domain: self.domain_label(),
            })
        }
    }

    fn check_closed(&self, x: f64) -> Result<()> {
        let ok = match *self {
            Self::Interval { length, .. } => (0.0..=length).contains(&x),
            Self::HalfLine { .. } => x >= 0.0 && x.is_finite(),
            Self::TwistedCircle { .. } => x.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(VacuumError::OutOfDomain {
                x,
                domain: self.domain_label(),
            })
        }
    }

    fn domain_label(&self) -> String {
        match *self {
            Self::Interval { length, .. } => format!("(0, {length})"),
            Self::HalfLine { .. } => "(0, inf)".to_string(),
            Self::TwistedCircle { .. } => "R (periodic)".to_string(),
        }
    }
}

/// One distinct frequency of the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Eigenvalue {
    pub omega: f64,
    pub multiplicity: u32,
}

fn require_discrete(g: &Geometry) -> Result<()> {
    if g.has_discrete_spectrum() {
        Ok(())
    } else {
        Err(VacuumError::ContinuousSpectrum("the half-line"))
    }
}

/// Frequency of mode `j` of an interval, using the labels `j ≥ 1` for D/D and
/// `j ≥ 0` otherwise.
pub fn interval_frequency(length: f64, left: BoundaryCondition, right: BoundaryCondition, j: u64) -> f64 {
    let j = j as f64;
    if left == right {
        j * PI / length
    } else {
        (j + 0.5) * PI / length
    }
}

/// First admissible mode label of an interval.
pub fn first_interval_label(left: BoundaryCondition, right: BoundaryCondition) -> u64 {
    if left == BoundaryCondition::Dirichlet && right == BoundaryCondition::Dirichlet {
        1
    } else {
        0
    }
}

/// All distinct frequencies `ω ≤ omega_max`, ascending, with multiplicities.
pub fn eigenvalues(geometry: &Geometry, omega_max: f64) -> Result<Vec<Eigenvalue>> {
    require_discrete(geometry)?;
    if !(omega_max > 0.0) || !omega_max.is_finite() {
        return Err(invalid(format!("omega_max must be positive, got {omega_max}")));
    }
    let mut out = Vec::new();
    match *geometry {
        Geometry::Interval { length, left, right } => {
            let mut j = first_interval_label(left, right);
            loop {
                let omega = interval_frequency(length, left, right, j);
                if omega > omega_max {
                    break;
                }
                out.push(Eigenvalue { omega, multiplicity: 1 });
                j += 1;
            }
        }
        Geometry::TwistedCircle { length, .. } => {
            let phi = geometry.reduced_twist().expect("circle");
            let mut push = |omega: f64, multiplicity: u32| -> bool {
                if omega > omega_max {
                    return false;
                }
                out.push(Eigenvalue { omega, multiplicity });
                true
            };
            if phi == 0.0 {
                if push(0.0, 1) {
                    let mut j = 1u64;
                    while push(2.0 * PI * j as f64 / length, 2) {
                        j += 1;
                    }
                }
            } else if phi == PI {
                let mut j = 0u64;
                while push((2 * j + 1) as f64 * PI / length, 2) {
                    j += 1;
                }
            } else {
                let mut j = 0u64;
                loop {
                    let base = 2.0 * PI * j as f64;
                    if j > 0 && !push((base - phi) / length, 1) {
                        break;
                    }
                    if !push((base + phi) / length, 1) {
                        break;
                    }
                    j += 1;
                }
            }
        }
        Geometry::HalfLine { .. } => unreachable!(),
    }
    Ok(out)
}

/// `N(ω) = #{ω_j ≤ ω}` counted with multiplicity.
pub fn counting_function(geometry: &Geometry, omega: f64) -> Result<u64> {
    require_discrete(geometry)?;
    if omega.is_nan() {
        return Err(invalid("omega is NaN"));
    }
    if omega < 0.0 {
        return Ok(0);
    }
    let n = match *geometry {
        Geometry::Interval { length, left, right } => {
            let u = omega * length / PI;
            if left != right {
                (u + 0.5).floor() as u64
            } else if left == BoundaryCondition::Dirichlet {
                u.floor() as u64
            } else {
                u.floor() as u64 + 1
            }
        }
        Geometry::TwistedCircle { length, .. } => {
            let phi = geometry.reduced_twist().expect("circle");
            let w = omega * length;
            let plus = if w >= phi {
                ((w - phi) / (2.0 * PI)).floor() as u64 + 1
            } else {
                0
            };
            let minus = ((w + phi) / (2.0 * PI)).floor() as u64;
            plus + minus
        }
        Geometry::HalfLine { .. } => unreachable!(),
    };
    Ok(n)
}

/// Width of the guard band around each eigenvalue: `10⁻⁹·π/L`.
pub fn tol_eigen(length: f64) -> f64 {
    1e-9 * PI / length
}

/// Eigenvalue closest to `omega`.
pub fn nearest_eigenvalue(geometry: &Geometry, omega: f64) -> Result<f64> {
    require_discrete(geometry)?;
    let v = match *geometry {
        Geometry::Interval { length, left, right } => {
            let u = omega * length / PI;
            let k = if left != right {
                (u - 0.5).round().max(0.0) + 0.5
            } else {
                let k = u.round().max(0.0);
                if left == BoundaryCondition::Dirichlet {
                    k.max(1.0)
                } else {
                    k
                }
            };
            k * PI / length
        }
        Geometry::TwistedCircle { length, .. } => {
            let phi = geometry.reduced_twist().expect("circle");
            let w = omega * length;
            let plus = ((w - phi) / (2.0 * PI)).round().max(0.0) * 2.0 * PI + phi;
            let minus = ((w + phi) / (2.0 * PI)).round().max(1.0) * 2.0 * PI - phi;
            let best = if (plus - w).abs() <= (minus - w).abs() {
                plus
            } else {
                minus
            };
            best / length
        }
        Geometry::HalfLine { .. } => unreachable!(),
    };
    Ok(v)
}

/// Weyl / periodic-orbit / boundary split of the counting function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountingDecomposition {
    pub weyl: f64,
    pub periodic: f64,
    pub boundary: f64,
    pub total: f64,
}

/// Boundary part of the counting function: `(−1)^l/2` for an interval with
/// `l = r`, 0 for mixed ends and the circle, `(−1)^l/4` for the half-line.
pub fn boundary_count(geometry: &Geometry) -> f64 {
    match *geometry {
        Geometry::Interval { left, right, .. } => {
            if left == right {
                0.5 * left.sign()
            } else {
                0.0
            }
        }
        Geometry::HalfLine { at_origin } => 0.25 * at_origin.sign(),
        Geometry::TwistedCircle { .. } => 0.0,
    }
}

/// Exact decomposition `N = N_Weyl + N_per + N_bdry` at a frequency that is
/// not an eigenvalue.
pub fn counting_decomposition(geometry: &Geometry, omega: f64) -> Result<CountingDecomposition> {
    require_discrete(geometry)?;
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(invalid(format!("omega must be positive, got {omega}")));
    }
    let length = geometry.length().expect("discrete spectrum has a length");
    let nearest = nearest_eigenvalue(geometry, omega)?;
    let guard = tol_eigen(length);
    if (omega - nearest).abs() <= guard {
        return Err(VacuumError::AtEigenvalue {
            omega,
            eigenvalue: nearest,
            guard,
        });
    }
    let weyl = length * omega / PI;
    let periodic = bernoulli_period_count(geometry, omega);
    let boundary = boundary_count(geometry);
    Ok(CountingDecomposition {
        weyl,
        periodic,
        boundary,
        total: weyl + periodic + boundary,
    })
}

/// Periodic-orbit part of the counting function from the sawtooth closed
/// form; 0 for the half-line.
pub fn bernoulli_period_count(geometry: &Geometry, omega: f64) -> f64 {
    match *geometry {
        Geometry::Interval { length, left, right } => {
            let shift = if left == right { 0.0 } else { PI };
            bernoulli_sin_sum(2.0 * omega * length + shift) / PI
        }
        Geometry::TwistedCircle { length, theta } => {
            let w = omega * length;
            (bernoulli_sin_sum(w + theta) + bernoulli_sin_sum(w - theta)) / PI
        }
        Geometry::HalfLine { .. } => 0.0,
    }
}

/// `|φ_j(x)|²` for the normalized eigenfunction with label `j`.
///
/// Interval labels follow [`interval_frequency`]; on the circle every mode
/// has density `1/L`.
pub fn eigenfunction_density(geometry: &Geometry, j: u64, x: f64) -> Result<f64> {
    require_discrete(geometry)?;
    geometry.check_closed(x)?;
    match *geometry {
        Geometry::Interval { length, left, right } => {
            if j < first_interval_label(left, right) {
                return Err(invalid(format!("mode label {j} is not admissible for D/D")));
            }
            let w = interval_frequency(length, left, right, j);
            if w == 0.0 {
                return Ok(1.0 / length);
            }
            let s = if left == BoundaryCondition::Dirichlet {
                (w * x).sin()
            } else {
                (w * x).cos()
            };
            Ok(2.0 / length * s * s)
        }
        Geometry::TwistedCircle { length, .. } => Ok(1.0 / length),
        Geometry::HalfLine { .. } => unreachable!(),
    }
}
