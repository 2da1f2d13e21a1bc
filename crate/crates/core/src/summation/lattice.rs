//! Phased lattice sums `Σ zⁿ f(n)` with `|z| = 1` and a smooth, decaying
//! `f`, evaluated as a direct partial sum plus an asymptotic tail.
//!
//! The tail uses the midpoint Euler–Maclaurin formula when `z = 1` and the
//! Euler transform `Σ_{n≥M} zⁿ f(n) = z^M/(1−z) Σ_k (z/(1−z))^k Δ^k f(M)`
//! otherwise. Image sums of the cylinder kernel and the orbit sums for the
//! energy all have this shape.

use num_complex::Complex64;

use crate::quadrature::GaussLegendre;

/// A lattice sum together with its truncation metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSum {
    pub value: Complex64,
    pub direct_terms: usize,
    /// Magnitude of the first neglected correction in the tail estimate.
    pub tail_bound: f64,
}

const Z_ONE_GUARD: f64 = 1e-12;
const MAX_DIRECT: i64 = 10_000_000;
const MAX_EULER_TERMS: usize = 24;

fn phase_power(z: Complex64, n: i64) -> Complex64 {
    if z.im == 0.0 {
        // ±1 exactly.
        if z.re < 0.0 && n.rem_euclid(2) == 1 {
            Complex64::new(-1.0, 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        }
    } else {
        Complex64::from_polar(1.0, z.arg() * n as f64)
    }
}

/// `Σ_{n ≥ start} zⁿ f(n)` from the asymptotic tail formulas alone.
///
/// `start` must be at least 1 so that the Euler–Maclaurin integral starts at
/// a positive abscissa.
pub fn phased_tail<F: Fn(f64) -> f64>(f: &F, start: i64, z: Complex64) -> (Complex64, f64) {
    assert!(start >= 1, "tail must start at a positive index");
    if (Complex64::new(1.0, 0.0) - z).norm() < Z_ONE_GUARD {
        let (v, b) = euler_maclaurin_tail(f, start);
        (Complex64::new(v, 0.0), b)
    } else {
        euler_transform_tail(f, start, z)
    }
}

fn euler_maclaurin_tail<F: Fn(f64) -> f64>(f: &F, start: i64) -> (f64, f64) {
    let a = start as f64 - 0.5;
    // ∫_a^∞ f(x) dx with x = a/u; the integrand stays bounded as u → 0 for
    // any f decaying at least like 1/x².
    let gl = GaussLegendre::new(24);
    let integral = gl.integrate_panels(
        |u: f64| {
            if u <= 0.0 {
                0.0
            } else {
                f(a / u) * a / (u * u)
            }
        },
        0.0,
        1.0,
        2,
    );
    // The u → 0 endpoint is never sampled by Gauss–Legendre nodes.
    let h = 1e-3 * a;
    let d1 = (8.0 * (f(a + h) - f(a - h)) - (f(a + 2.0 * h) - f(a - 2.0 * h))) / (12.0 * h);
    let h3 = 1e-2 * a;
    let d3 = (f(a + 2.0 * h3) - 2.0 * f(a + h3) + 2.0 * f(a - h3) - f(a - 2.0 * h3)) / (2.0 * h3 * h3 * h3);
    let value = integral + d1 / 24.0 - 7.0 / 5760.0 * d3;
    // f⁽⁵⁾ estimated from f‴ with the power-law ratio 30/a².
    let bound = (31.0 / 967_680.0 * d3 * 30.0 / (a * a)).abs();
    (value, bound)
}

fn euler_transform_tail<F: Fn(f64) -> f64>(f: &F, start: i64, z: Complex64) -> (Complex64, f64) {
    let one = Complex64::new(1.0, 0.0);
    let ratio = z / (one - z);
    let lead = phase_power(z, start) / (one - z);
    let samples: Vec<f64> = (0..=MAX_EULER_TERMS).map(|k| f((start + k as i64) as f64)).collect();
    let mut diffs = samples;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut weight = lead;
    let mut last = f64::INFINITY;
    for k in 0..MAX_EULER_TERMS {
        let term = weight * diffs[0];
        // Past the smallest term the differences are rounding noise
        // amplified by |z/(1−z)|^k.
        if k >= 2 && term.norm() > last {
            break;
        }
        sum += term;
        last = term.norm();
        if k >= 2 && last <= 1e-17 * sum.norm().max(1e-300) {
            break;
        }
        // Forward difference in place.
        for j in 0..diffs.len() - k - 1 {
            diffs[j] = diffs[j + 1] - diffs[j];
        }
        weight *= ratio;
    }
    (sum, last)
}

/// Direct-sum length needed so the Euler transform converges for phase `z`.
fn direct_length(requested: i64, z: Complex64) -> i64 {
    let gap = (Complex64::new(1.0, 0.0) - z).norm();
    if gap < Z_ONE_GUARD {
        return requested;
    }
    let r = 1.0 / gap;
    let needed = (64.0 * r).ceil() as i64;
    requested.max(needed).min(MAX_DIRECT)
}

/// `Σ_{n ≥ first} zⁿ f(n)`: direct terms through `first + n_direct − 1`,
/// then the asymptotic tail.
pub fn one_sided<F: Fn(f64) -> f64>(f: F, first: i64, n_direct: i64, z: Complex64) -> LatticeSum {
    let n_direct = direct_length(n_direct.max(1), z);
    let last = first + n_direct - 1;
    let mut value = Complex64::new(0.0, 0.0);
    for n in first..=last {
        value += phase_power(z, n) * f(n as f64);
    }
    let (tail, tail_bound) = phased_tail(&f, last + 1, z);
    LatticeSum {
        value: value + tail,
        direct_terms: n_direct as usize,
        tail_bound,
    }
}

/// `Σ_{n ∈ ℤ} zⁿ f(n)` with the symmetric direct range `|n| ≤ n_direct`.
pub fn two_sided<F: Fn(f64) -> f64>(f: F, n_direct: i64, z: Complex64) -> LatticeSum {
    let n_direct = direct_length(n_direct.max(1), z);
    let mut value = Complex64::new(0.0, 0.0);
    // Accumulate from the outside in to keep small terms from being swamped.
    for m in (1..=n_direct).rev() {
        value += phase_power(z, m) * f(m as f64) + phase_power(z, -m) * f(-(m as f64));
    }
    value += f(0.0);
    let (up, b_up) = phased_tail(&f, n_direct + 1, z);
    let mirrored = |x: f64| f(-x);
    let (down, b_down) = phased_tail(&mirrored, n_direct + 1, z.conj());
    LatticeSum {
        value: value + up + down,
        direct_terms: (2 * n_direct + 1) as usize,
        tail_bound: b_up + b_down,
    }
}

/// Unit phase `e^{iθ}`, with the real cases kept exact.
pub fn unit_phase(theta: f64) -> Complex64 {
    if theta == 0.0 {
        Complex64::new(1.0, 0.0)
    } else if theta == std::f64::consts::PI {
        Complex64::new(-1.0, 0.0)
    } else {
        Complex64::from_polar(1.0, theta)
    }
}
