//! Regularized summation: Abel damping via the Laplace integral, Riesz–Cesàro
//! means of order 2, Bernoulli-polynomial sums, Mittag-Leffler pole sums and
//! telescoping series.

pub mod lattice;

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{invalid, Result, VacuumError};

/// Truncation and damping settings shared by every series evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesControl {
    pub max_terms: usize,
    pub tol: f64,
    /// Abel damping parameter; 0 disables damping.
    pub damping_t: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            max_terms: 10_000,
            tol: 1e-12,
            damping_t: 0.0,
        }
    }
}

impl SeriesControl {
    pub fn new(max_terms: usize, tol: f64, damping_t: f64) -> Result<Self> {
        let c = Self {
            max_terms,
            tol,
            damping_t,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_terms == 0 {
            return Err(invalid("max_terms must be at least 1"));
        }
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(invalid(format!("tol must be positive, got {}", self.tol)));
        }
        if !(self.damping_t >= 0.0) || !self.damping_t.is_finite() {
            return Err(invalid(format!(
                "damping_t must be nonnegative, got {}",
                self.damping_t
            )));
        }
        Ok(())
    }

    pub fn with_damping(mut self, t: f64) -> Self {
        self.damping_t = t;
        self
    }
}

/// How a [`SeriesValue`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SummationMethod {
    Raw,
    Abel,
    RieszCesaro2,
    ClosedForm,
}

/// A summed series with truncation metadata.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    pub terms_used: usize,
    pub truncation_bound: f64,
    pub method_tag: SummationMethod,
}

impl SeriesValue {
    pub fn closed_form(value: f64) -> Self {
        Self {
            value,
            terms_used: 0,
            truncation_bound: 0.0,
            method_tag: SummationMethod::ClosedForm,
        }
    }

    pub fn new(value: f64, terms_used: usize, truncation_bound: f64, method_tag: SummationMethod) -> Self {
        Self {
            value,
            terms_used,
            truncation_bound,
            method_tag,
        }
    }
}

/// `∫₀^∞ cos(aω − b) e^{−ωt} dω`, split into its `cos b` and `sin b` parts.
pub fn abel_cos_integral(a: f64, b: f64, t: f64) -> Result<(f64, f64)> {
    if !(t > 0.0) {
        return Err(invalid(format!("Abel parameter t must be positive, got {t}")));
    }
    let d = t * t + a * a;
    Ok((t / d * b.cos(), a / d * b.sin()))
}

/// `∫₀^Ω (1 − ω/Ω)² cos(ωk + φ) ω dω` with `k = nL`, `φ = nθ`, in closed form.
pub fn riesz_cesaro2_energy_integrand(n: u32, l: f64, theta: f64, omega_cut: f64) -> f64 {
    let k = n as f64 * l;
    let phi = n as f64 * theta;
    let w = omega_cut;
    let (s, c) = phi.sin_cos();
    let (se, ce) = (k * w + phi).sin_cos();
    let k2 = k * k;
    let k3 = k2 * k;
    let k4 = k2 * k2;
    -c / k2 - 4.0 * s / (w * k3) + 6.0 * c / (w * w * k4) - 2.0 * se / (w * k3) - 6.0 * ce / (w * w * k4)
}

/// Cutoff used when taking the `Ω → ∞` limit of the Riesz–Cesàro mean.
pub const RIESZ_LIMIT_CUTOFF: f64 = 1e14;

/// `lim_{Ω→∞}` of [`riesz_cesaro2_energy_integrand`], evaluated at a large
/// cutoff with a rigorous bound on the remaining `O(1/Ω)` terms.
pub fn riesz_cesaro2_limit(n: u32, l: f64, theta: f64) -> SeriesValue {
    let k = n as f64 * l;
    let w = RIESZ_LIMIT_CUTOFF;
    let value = riesz_cesaro2_energy_integrand(n, l, theta, w);
    let bound = 6.0 / (w * k * k * k) + 12.0 / (w * w * k.powi(4));
    SeriesValue::new(value, 0, bound, SummationMethod::RieszCesaro2)
}

pub fn bernoulli_b1(u: f64) -> f64 {
    u - 0.5
}

pub fn bernoulli_b2(u: f64) -> f64 {
    u * u - u + 1.0 / 6.0
}

/// `Σ_{n≥1} sin(nz)/n`: the 2π-periodic sawtooth, zero at its jumps.
pub fn bernoulli_sin_sum(z: f64) -> f64 {
    let r = z.rem_euclid(2.0 * PI);
    if r == 0.0 || r == 2.0 * PI {
        0.0
    } else {
        -PI * bernoulli_b1(r / (2.0 * PI))
    }
}

/// `Σ_{n≥1} cos(nθ)/n² = π² B₂(θ/2π)`, extended periodically.
pub fn bernoulli_cos_sum(theta: f64) -> f64 {
    let r = theta.rem_euclid(2.0 * PI);
    PI * PI * bernoulli_b2(r / (2.0 * PI))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MittagLefflerKind {
    /// `Σ_n 1/((n+b)² + a²)`
    Coth,
    /// `Σ_n (−1)ⁿ/((n+b)² + a²)`
    Csch,
}

/// Two-sided pole sums over `n ∈ ℤ` in closed form.
pub fn mittag_leffler_sum(kind: MittagLefflerKind, a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(invalid(format!("pole offset a must be positive, got {a}")));
    }
    let v = match kind {
        MittagLefflerKind::Coth => {
            // (π/a) sinh 2πa / (cosh 2πa − cos 2πb) with q = e^{−2πa}.
            let q = (-2.0 * PI * a).exp();
            let num = -(-4.0 * PI * a).exp_m1();
            let s = (PI * b).sin();
            let den = (1.0 - q) * (1.0 - q) + 4.0 * q * s * s;
            PI / a * num / den
        }
        MittagLefflerKind::Csch => {
            // (π/a) sinh πa cos πb / (sinh² πa + sin² πb) with p = e^{−πa}.
            let p = (-PI * a).exp();
            let one_minus = -(-2.0 * PI * a).exp_m1();
            let (s, c) = (PI * b).sin_cos();
            let den = one_minus * one_minus + 4.0 * p * p * s * s;
            PI / a * 2.0 * p * one_minus * c / den
        }
    };
    Ok(v)
}

/// Outcome of [`telescoping_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TelescopingSum {
    /// Extrapolated limit.
    pub value: f64,
    /// Plain partial sum over all supplied pairs.
    pub partial_sum: f64,
    pub tail_estimate: f64,
    /// The positive parts alone do not form an absolutely convergent series.
    pub conditional: bool,
    pub terms_used: usize,
    /// `|value − limit_hint|`.
    pub deviation_from_hint: f64,
}

const TELESCOPE_LEVELS: usize = 6;
const TELESCOPE_MIN_LEN: usize = 8;

/// Sums `Σ (plus − minus)` over the pairs and extrapolates the partial sums
/// to infinitely many terms by Richardson (Neville) extrapolation in `1/N`.
pub fn telescoping_check(terms: &[(f64, f64)], limit_hint: f64, tol: f64) -> Result<TelescopingSum> {
    if terms.is_empty() {
        return Err(invalid("telescoping_check needs at least one term"));
    }
    if !(tol > 0.0) {
        return Err(invalid(format!("tol must be positive, got {tol}")));
    }
    let mut prefix = Vec::with_capacity(terms.len() + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for &(p, m) in terms {
        acc += p - m;
        prefix.push(acc);
    }
    let len = terms.len();
    let partial_sum = prefix[len];

    let mut hs = Vec::new();
    let mut ss = Vec::new();
    let mut n = len;
    while hs.len() < TELESCOPE_LEVELS && n >= TELESCOPE_MIN_LEN {
        hs.push(1.0 / n as f64);
        ss.push(prefix[n]);
        n /= 2;
    }

    let (value, tail_estimate) = if hs.len() >= 2 {
        neville_at_zero(&hs, &ss)
    } else {
        let (p, m) = terms[len - 1];
        (partial_sum, (p - m).abs())
    };

    let conditional = {
        let quarter = len / 4;
        let half = len / 2;
        let early: f64 = terms[quarter..half].iter().map(|t| t.0.abs()).sum();
        let late: f64 = terms[half..].iter().map(|t| t.0.abs()).sum();
        half > quarter && early > 0.0 && late / early > 0.75
    };

    if !(tail_estimate <= tol) {
        return Err(VacuumError::NonConvergent {
            tail: tail_estimate,
            tol,
        });
    }
    Ok(TelescopingSum {
        value,
        partial_sum,
        tail_estimate,
        conditional,
        terms_used: len,
        deviation_from_hint: (value - limit_hint).abs(),
    })
}

/// Polynomial extrapolation of `(h_k, s_k)` to `h = 0`. Returns the top
/// estimate and its difference from the previous order.
fn neville_at_zero(hs: &[f64], ss: &[f64]) -> (f64, f64) {
    let n = hs.len();
    let mut p: Vec<f64> = ss.to_vec();
    let mut prev_top = p[0];
    let mut top = p[0];
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (hs[i + m] * p[i] - hs[i] * p[i + 1]) / (hs[i + m] - hs[i]);
        }
        prev_top = top;
        top = p[0];
    }
    (top, (top - prev_top).abs())
}

/// Both sides of the Poisson identity linking the Dirichlet kernel to the
/// boundary orbit sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoissonCheck {
    /// `Σ_{|j|≤J} cos(2πjx/L)` with `J = ⌊ωL/π⌋`.
    pub lhs: f64,
    /// `(L/π) Σ_{|n|≤N} sin(2ω(x+nL))/(x+nL)`.
    pub rhs: f64,
    pub fourier_terms: usize,
    pub orbit_terms: usize,
}

pub fn poisson_check(omega: f64, l: f64, x: f64, n_orbit: usize) -> Result<PoissonCheck> {
    if !(omega > 0.0) {
        return Err(invalid(format!("omega must be positive, got {omega}")));
    }
    if !(l > 0.0) {
        return Err(invalid(format!("length must be positive, got {l}")));
    }
    if !(x > 0.0 && x < l) {
        return Err(VacuumError::OutOfDomain {
            x,
            domain: format!("(0, {l})"),
        });
    }
    let j = (omega * l / PI).floor();
    let arg = PI * x / l;
    let lhs = ((2.0 * j + 1.0) * arg).sin() / arg.sin();
    let n = n_orbit as i64;
    let mut rhs = 0.0;
    for m in (1..=n).rev() {
        for d in [x + m as f64 * l, x - m as f64 * l] {
            rhs += (2.0 * omega * d).sin() / d;
        }
    }
    rhs += (2.0 * omega * x).sin() / x;
    rhs *= l / PI;
    Ok(PoissonCheck {
        lhs,
        rhs,
        fourier_terms: (2 * j as usize) + 1,
        orbit_terms: 2 * n_orbit + 1,
    })
}
