//! Cylinder kernel `T(t,x,y) = Σ e^{−tω_n} φ_n(x) φ̄_n(y)` and heat kernel
//! `K(t,x,y) = Σ e^{−tω_n²} φ_n(x) φ̄_n(y)`, their diagonals and traces,
//! each by mode sum, image sum or closed form.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Result, VacuumError};
use crate::orbits::{parity_sign, winding_sign};
use crate::par::{self, Execution};
use crate::quadrature::GaussLegendre;
use crate::spectrum::{first_interval_label, interval_frequency, BoundaryCondition, Geometry};
use crate::summation::lattice::{two_sided, unit_phase};
use crate::summation::SeriesControl;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum KernelMethod {
    ModeSum,
    ImageSum,
    ClosedForm,
}

impl std::str::FromStr for KernelMethod {
    type Err = VacuumError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "mode" | "modesum" => Ok(Self::ModeSum),
            "image" | "imagesum" => Ok(Self::ImageSum),
            "closed" | "closedform" => Ok(Self::ClosedForm),
            other => Err(invalid(format!("unknown kernel method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelValue {
    pub value: f64,
    /// Imaginary part; nonzero only off the diagonal of a twisted circle.
    pub imag: f64,
    /// Method actually used.
    pub method: KernelMethod,
    pub terms_used: usize,
    pub truncation_bound: f64,
    /// A closed form was requested but none exists, so `method` was used
    /// instead.
    pub fallback: bool,
}

impl KernelValue {
    fn real(value: f64, method: KernelMethod, terms_used: usize, truncation_bound: f64) -> Self {
        Self {
            value,
            imag: 0.0,
            method,
            terms_used,
            truncation_bound,
            fallback: false,
        }
    }
}

/// Mode-sum cutoff: terms with `e^{−tω} < MODE_CUTOFF` are dropped.
pub const MODE_CUTOFF: f64 = 1e-16;

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("t must be positive, got {t}")))
    }
}

fn check_closed_point(g: &Geometry, x: f64) -> Result<()> {
    let ok = match *g {
        Geometry::Interval { length, .. } => (0.0..=length).contains(&x),
        Geometry::HalfLine { .. } => x >= 0.0 && x.is_finite(),
        Geometry::TwistedCircle { .. } => x.is_finite(),
    };
    if ok {
        Ok(())
    } else {
        Err(VacuumError::OutOfDomain {
            x,
            domain: match *g {
                Geometry::Interval { length, .. } => format!("[0, {length}]"),
                Geometry::HalfLine { .. } => "[0, inf)".into(),
                Geometry::TwistedCircle { .. } => "R".into(),
            },
        })
    }
}

/// Number of interval modes needed before `e^{−tω}` drops below the cutoff.
fn mode_count(length: f64, t: f64, control: &SeriesControl) -> (usize, f64) {
    let omega_max = -MODE_CUTOFF.ln() / t;
    let needed = (omega_max * length / PI).ceil() as usize + 2;
    let n = needed.min(control.max_terms.max(1));
    let omega_next = (n as f64) * PI / length;
    let ratio = (-t * PI / length).exp();
    let tail = (-t * omega_next).exp() / (1.0 - ratio);
    (n, tail)
}

fn interval_mode(left: BoundaryCondition, w: f64, length: f64, x: f64) -> f64 {
    if w == 0.0 {
        return 1.0 / length.sqrt();
    }
    let norm = (2.0 / length).sqrt();
    match left {
        BoundaryCondition::Dirichlet => norm * (w * x).sin(),
        BoundaryCondition::Neumann => norm * (w * x).cos(),
    }
}

/// The cylinder kernel `T(t, x, y)`.
pub fn cylinder_kernel(
    geometry: &Geometry,
    t: f64,
    x: f64,
    y: f64,
    method: KernelMethod,
    control: &SeriesControl,
) -> Result<KernelValue> {
    check_t(t)?;
    control.validate()?;
    check_closed_point(geometry, x)?;
    check_closed_point(geometry, y)?;
    match method {
        KernelMethod::ModeSum => cylinder_mode_sum(geometry, t, x, y, control),
        KernelMethod::ImageSum => cylinder_image_sum(geometry, t, x, y, control),
        KernelMethod::ClosedForm => match *geometry {
            Geometry::TwistedCircle { .. } if x != y => {
                let mut v = cylinder_image_sum(geometry, t, x, y, control)?;
                v.fallback = true;
                Ok(v)
            }
            _ => Ok(cylinder_closed_form(geometry, t, x, y)),
        },
    }
}

fn cylinder_mode_sum(g: &Geometry, t: f64, x: f64, y: f64, control: &SeriesControl) -> Result<KernelValue> {
    match *g {
        Geometry::Interval { length, left, right } => {
            let (n, tail) = mode_count(length, t, control);
            let first = first_interval_label(left, right);
            let mut acc = 0.0;
            for j in (first..first + n as u64).rev() {
                let w = interval_frequency(length, left, right, j);
                acc += (-t * w).exp() * interval_mode(left, w, length, x) * interval_mode(left, w, length, y);
            }
            Ok(KernelValue::real(acc, KernelMethod::ModeSum, n, tail * 2.0 / length))
        }
        Geometry::TwistedCircle { length, theta } => {
            let omega_max = -MODE_CUTOFF.ln() / t;
            let jmax = ((omega_max * length / (2.0 * PI)).ceil() as i64 + 2).min(control.max_terms as i64);
            let mut acc = Complex64::new(0.0, 0.0);
            for m in (0..=jmax).rev() {
                for j in [m, -m - 1] {
                    let k = (2.0 * PI * j as f64 + theta) / length;
                    acc += (-t * k.abs()).exp() * Complex64::from_polar(1.0, k * (x - y));
                }
            }
            acc /= length;
            let tail =
                2.0 * (-t * 2.0 * PI * jmax as f64 / length).exp() / (1.0 - (-t * 2.0 * PI / length).exp()) / length;
            Ok(KernelValue {
                value: acc.re,
                imag: acc.im,
                method: KernelMethod::ModeSum,
                terms_used: 2 * jmax as usize + 2,
                truncation_bound: tail,
                fallback: false,
            })
        }
        Geometry::HalfLine { at_origin } => {
            // Continuous spectrum: integrate the spectral representation.
            let s = at_origin.sign();
            let kmax = -MODE_CUTOFF.ln() / t;
            let freq = (x + y).max((x - y).abs());
            let panels = ((kmax * freq / PI) + kmax * t / 2.0).ceil() as usize + 4;
            let gl = GaussLegendre::new(20);
            let v = gl.integrate_panels(
                |k| (-t * k).exp() * ((k * (x - y)).cos() + s * (k * (x + y)).cos()) / PI,
                0.0,
                kmax,
                panels,
            );
            Ok(KernelValue::real(
                v,
                KernelMethod::ModeSum,
                panels * 20,
                2.0 * MODE_CUTOFF / (PI * t),
            ))
        }
    }
}

fn image_terms(control: &SeriesControl) -> i64 {
    control.max_terms.clamp(1, 100_000) as i64
}

fn cylinder_image_sum(g: &Geometry, t: f64, x: f64, y: f64, control: &SeriesControl) -> Result<KernelValue> {
    let lorentz = |d: f64| 1.0 / (d * d + t * t);
    match *g {
        Geometry::Interval { length, left, right } => {
            let z = Complex64::new(winding_sign(left, right), 0.0);
            let n = image_terms(control);
            let direct = two_sided(|m| lorentz(x - y + 2.0 * m * length), n, z);
            let reflected = two_sided(|m| lorentz(x + y + 2.0 * m * length), n, z);
            let v = t / PI * (direct.value.re + left.sign() * reflected.value.re);
            Ok(KernelValue::real(
                v,
                KernelMethod::ImageSum,
                direct.direct_terms + reflected.direct_terms,
                t / PI * (direct.tail_bound + reflected.tail_bound),
            ))
        }
        Geometry::HalfLine { at_origin } => {
            let v = t / PI * (lorentz(x - y) + at_origin.sign() * lorentz(x + y));
            Ok(KernelValue::real(v, KernelMethod::ImageSum, 2, 0.0))
        }
        Geometry::TwistedCircle { length, theta } => {
            let n = image_terms(control);
            let s = two_sided(|m| lorentz(x - y - m * length), n, unit_phase(theta));
            Ok(KernelValue {
                value: t / PI * s.value.re,
                imag: t / PI * s.value.im,
                method: KernelMethod::ImageSum,
                terms_used: s.direct_terms,
                truncation_bound: t / PI * s.tail_bound,
                fallback: false,
            })
        }
    }
}

/// `cosh(πt/L) − cos(πu/L)` written without cancellation.
fn cosh_minus_cos(a: f64, b: f64) -> f64 {
    let sa = (0.5 * a).sinh();
    let sb = (0.5 * b).sin();
    2.0 * (sa * sa + sb * sb)
}

fn cylinder_closed_form(g: &Geometry, t: f64, x: f64, y: f64) -> KernelValue {
    let v = match *g {
        Geometry::Interval { length, left, right } => {
            let even = left == right;
            let f = |u: f64| {
                if even {
                    (PI * t / length).sinh() / cosh_minus_cos(PI * t / length, PI * u / length)
                } else {
                    let a = PI * t / (2.0 * length);
                    let b = PI * u / (2.0 * length);
                    let sa = a.sinh();
                    let sb = b.sin();
                    sa * b.cos() / (sa * sa + sb * sb)
                }
            };
            (f(x - y) + left.sign() * f(x + y)) / (2.0 * length)
        }
        Geometry::HalfLine { at_origin } => {
            let d1 = x - y;
            let d2 = x + y;
            t / PI * (1.0 / (d1 * d1 + t * t) + at_origin.sign() / (d2 * d2 + t * t))
        }
        Geometry::TwistedCircle { length, theta } => {
            ((PI - theta) * t / length).cosh() / (length * (PI * t / length).sinh())
        }
    };
    KernelValue::real(v, KernelMethod::ClosedForm, 0, 0.0)
}

fn require_discrete(g: &Geometry) -> Result<f64> {
    g.length().ok_or(VacuumError::ContinuousSpectrum("the half-line"))
}

/// `Tr T(t) = Σ e^{−tω_n}`.
pub fn cylinder_trace(
    geometry: &Geometry,
    t: f64,
    method: KernelMethod,
    control: &SeriesControl,
) -> Result<KernelValue> {
    check_t(t)?;
    control.validate()?;
    let length = require_discrete(geometry)?;
    match method {
        KernelMethod::ModeSum => {
            let omega_max = -MODE_CUTOFF.ln() / t;
            let ev = crate::spectrum::eigenvalues(geometry, omega_max)?;
            let ev = &ev[..ev.len().min(control.max_terms)];
            let v: f64 = ev
                .iter()
                .rev()
                .map(|e| e.multiplicity as f64 * (-t * e.omega).exp())
                .sum();
            let next = ev.last().map_or(0.0, |e| e.omega);
            let spacing = PI / length;
            let tail = 2.0 * (-t * (next + spacing.min(next))).exp() / (1.0 - (-t * spacing).exp());
            Ok(KernelValue::real(v, KernelMethod::ModeSum, ev.len(), tail))
        }
        KernelMethod::ImageSum => {
            let n = image_terms(control);
            match *geometry {
                Geometry::Interval { left, right, .. } => {
                    let z = Complex64::new(winding_sign(left, right), 0.0);
                    let per = two_sided(|m| 1.0 / (4.0 * m * m * length * length + t * t), n, z);
                    // ∫₀ᴸ of the reflected family: atan(2(m+1)L/t) − atan(2mL/t) per image.
                    let bd = two_sided(
                        |m| (2.0 * length * t / (t * t + 4.0 * m * (m + 1.0) * length * length)).atan(),
                        n,
                        z,
                    );
                    let v = length * t / PI * per.value.re + left.sign() / (2.0 * PI) * bd.value.re;
                    Ok(KernelValue::real(
                        v,
                        KernelMethod::ImageSum,
                        per.direct_terms + bd.direct_terms,
                        length * t / PI * per.tail_bound + bd.tail_bound / (2.0 * PI),
                    ))
                }
                Geometry::TwistedCircle { theta, .. } => {
                    let s = two_sided(|m| 1.0 / (m * m * length * length + t * t), n, unit_phase(theta));
                    Ok(KernelValue::real(
                        length * t / PI * s.value.re,
                        KernelMethod::ImageSum,
                        s.direct_terms,
                        length * t / PI * s.tail_bound,
                    ))
                }
                Geometry::HalfLine { .. } => unreachable!(),
            }
        }
        KernelMethod::ClosedForm => {
            let a = PI * t / (2.0 * length);
            let v = match *geometry {
                Geometry::Interval { left, right, .. } => {
                    if left != right {
                        0.5 / a.sinh()
                    } else {
                        let coth_minus_one = 2.0 / (2.0 * a).exp_m1();
                        // ½coth a ∓ ½ with the D/D case free of cancellation.
                        if left == BoundaryCondition::Dirichlet {
                            0.5 * coth_minus_one
                        } else {
                            0.5 * coth_minus_one + 1.0
                        }
                    }
                }
                Geometry::TwistedCircle { theta, .. } => ((PI - theta) * t / length).cosh() / (PI * t / length).sinh(),
                Geometry::HalfLine { .. } => unreachable!(),
            };
            Ok(KernelValue::real(v, KernelMethod::ClosedForm, 0, 0.0))
        }
    }
}

/// `Tr K(t) = Σ e^{−tω_n²}` summed over modes.
pub fn heat_trace(geometry: &Geometry, t: f64, control: &SeriesControl) -> Result<KernelValue> {
    check_t(t)?;
    control.validate()?;
    let length = require_discrete(geometry)?;
    let cutoff = control.tol.min(1e-17);
    let omega_max = (-cutoff.ln() / t).sqrt();
    let ev = crate::spectrum::eigenvalues(geometry, omega_max)?;
    let used = ev.len().min(control.max_terms);
    let ev = &ev[..used];
    let v: f64 = ev
        .iter()
        .rev()
        .map(|e| e.multiplicity as f64 * (-t * e.omega * e.omega).exp())
        .sum();
    let next = ev.last().map_or(0.0, |e| e.omega) + PI / length;
    let tail = 2.0 * (-t * next * next).exp() / (1.0 - (-t * PI / length * next).exp()).max(1e-300);
    Ok(KernelValue::real(v, KernelMethod::ModeSum, used, tail))
}

/// Diagonal heat kernel `K(t, x, x)` from its image sum.
pub fn heat_diag(geometry: &Geometry, t: f64, x: f64) -> Result<f64> {
    check_t(t)?;
    geometry.check_interior(x)?;
    let pref = 1.0 / (4.0 * PI * t).sqrt();
    let gauss = |d: f64| (-d * d / (4.0 * t)).exp();
    let v = match *geometry {
        Geometry::HalfLine { at_origin } => 1.0 + at_origin.sign() * gauss(2.0 * x),
        Geometry::Interval { length, left, right } => {
            let lr = (left.parity_index() + right.parity_index()) as i64;
            let nmax = ((4.0 * t * 750.0).sqrt() / (2.0 * length)).ceil() as i64 + 2;
            let mut acc = 0.0;
            for m in (1..=nmax).rev() {
                let s = parity_sign(m * lr);
                acc += 2.0 * s * gauss(2.0 * m as f64 * length);
                for n in [m, -m] {
                    acc += left.sign() * s * gauss(2.0 * x + 2.0 * n as f64 * length);
                }
            }
            acc + 1.0 + left.sign() * gauss(2.0 * x)
        }
        Geometry::TwistedCircle { length, theta } => {
            let nmax = ((4.0 * t * 750.0).sqrt() / length).ceil() as i64 + 2;
            let mut acc = 0.0;
            for n in (1..=nmax).rev() {
                acc += 2.0 * (n as f64 * theta).cos() * gauss(n as f64 * length);
            }
            acc + 1.0
        }
    };
    Ok(pref * v)
}

/// Diagonal cylinder kernel on a `(t, x)` grid, row-major in `t`.
pub fn cylinder_diagonal_grid(
    geometry: &Geometry,
    ts: &[f64],
    xs: &[f64],
    method: KernelMethod,
    control: &SeriesControl,
    exec: Execution,
) -> Result<Vec<KernelValue>> {
    let nx = xs.len();
    par::map_range(exec, ts.len() * nx, |k| {
        cylinder_kernel(geometry, ts[k / nx], xs[k % nx], xs[k % nx], method, control)
    })
    .into_iter()
    .collect()
}

/// Largest disagreement of `ModeSum` and `ImageSum` from `ClosedForm` on the
/// diagonal over a grid, relative to `max(1, |ClosedForm|)`.
pub fn three_way_max_deviation(
    geometry: &Geometry,
    ts: &[f64],
    xs: &[f64],
    control: &SeriesControl,
    exec: Execution,
) -> Result<f64> {
    let nx = xs.len();
    let devs: Result<Vec<f64>> = par::map_range(exec, ts.len() * nx, |k| {
        let (t, x) = (ts[k / nx], xs[k % nx]);
        let c = cylinder_kernel(geometry, t, x, x, KernelMethod::ClosedForm, control)?.value;
        let m = cylinder_kernel(geometry, t, x, x, KernelMethod::ModeSum, control)?.value;
        let i = cylinder_kernel(geometry, t, x, x, KernelMethod::ImageSum, control)?.value;
        let scale = c.abs().max(1.0);
        Ok(((m - c).abs().max((i - c).abs())) / scale)
    })
    .into_iter()
    .collect();
    // A NaN deviation must not be hidden by the max.
    Ok(devs?.into_iter().fold(
        0.0,
        |a: f64, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) },
    ))
}
