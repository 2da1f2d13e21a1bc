use std::f64::consts::PI;

use vacuum_core::energy::{
    approximation_report, energy_density, total_energy_regularized, total_energy_renormalized, DensityConfig,
    EnergyBreakdown,
};
use vacuum_core::kernels::{cylinder_kernel, KernelMethod};
use vacuum_core::spectrum::{counting_function, eigenvalues};
use vacuum_core::verify;
use vacuum_core::{BoundaryCondition, Geometry};

use crate::output::{Cell, Table};
use crate::{CliError, Figure, GeometryKind, Opts};

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn geomspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = linspace(a.ln(), b.ln(), n).into_iter().map(f64::exp).collect();
    // Keep the endpoints exact.
    v[0] = a;
    v[n - 1] = b;
    v
}

fn table(command: &str, geometry: Option<&Geometry>, o: &Opts, columns: &[&str]) -> Result<Table, CliError> {
    let mut t = Table::new(columns);
    t.meta("command", command);
    if let Some(g) = geometry {
        t.meta("geometry", g.label());
    }
    let c = o.control()?;
    t.meta("tol", format!("{:e}", c.tol));
    t.meta("max_terms", c.max_terms);
    t.meta("build", env!("VACUUM_BUILD"));
    Ok(t)
}

fn check_increasing(name: &str, v: &[f64]) -> Result<(), CliError> {
    if v.windows(2).all(|w| w[0] < w[1]) {
        Ok(())
    } else {
        Err(CliError::Config(format!("--{name} values must be strictly increasing")))
    }
}

/// Interior positions: `--x` if given, otherwise an even grid (log-spaced on
/// the half-line).
fn positions(o: &Opts, g: &Geometry, default_points: usize) -> Result<Vec<f64>, CliError> {
    if !o.x.is_empty() {
        check_increasing("x", &o.x)?;
        return Ok(o.x.clone());
    }
    let n = o.grid_points(default_points)?;
    Ok(match g.length() {
        Some(l) => (1..=n).map(|i| l * i as f64 / (n + 1) as f64).collect(),
        None => geomspace(1e-3, 10.0, n),
    })
}

pub fn spectrum(o: &Opts) -> Result<Table, CliError> {
    let g = o.geometry()?;
    let ev = eigenvalues(&g, o.omega_max)?;
    let mut t = table("spectrum", Some(&g), o, &["omega", "mult", "N"])?;
    t.meta("omega_max", o.omega_max);
    for e in ev {
        let n = counting_function(&g, e.omega)?;
        t.push(vec![e.omega.into(), (e.multiplicity as u64).into(), n.into()]);
    }
    Ok(t)
}

fn energy_row(kind: &str, theta: Cell, e: &EnergyBreakdown) -> Vec<Cell> {
    vec![
        kind.into(),
        theta,
        e.regulator_t.into(),
        e.weyl.into(),
        e.periodic.into(),
        e.boundary.into(),
        e.total_renormalized.into(),
        e.zero_mode_neglected.into(),
    ]
}

pub fn energy(o: &Opts) -> Result<Table, CliError> {
    let columns = [
        "kind",
        "theta",
        "t",
        "weyl",
        "periodic",
        "boundary",
        "total_renormalized",
        "zero_mode_neglected",
    ];
    check_increasing("t", &o.t)?;
    if o.geometry == GeometryKind::Twisted {
        let thetas = if o.theta.is_empty() {
            match o.grid_points {
                Some(_) => linspace(0.0, 2.0 * PI, o.grid_points(2)?),
                None => vec![0.0],
            }
        } else {
            check_increasing("theta", &o.theta)?;
            o.theta.clone()
        };
        let g0 = Geometry::twisted_circle(o.length, thetas[0])?;
        let mut t = table("energy", Some(&g0), o, &columns)?;
        for &th in &thetas {
            let g = Geometry::twisted_circle(o.length, th)?;
            t.push(energy_row("renormalized", th.into(), &total_energy_renormalized(&g)?));
            for &reg in &o.t {
                t.push(energy_row(
                    "regularized",
                    th.into(),
                    &total_energy_regularized(&g, reg)?,
                ));
            }
        }
        return Ok(t);
    }
    let g = o.geometry()?;
    let mut t = table("energy", Some(&g), o, &columns)?;
    t.push(energy_row("renormalized", "".into(), &total_energy_renormalized(&g)?));
    for &reg in &o.t {
        t.push(energy_row(
            "regularized",
            "".into(),
            &total_energy_regularized(&g, reg)?,
        ));
    }
    Ok(t)
}

fn single_t(o: &Opts, default: f64) -> Result<f64, CliError> {
    match o.t.as_slice() {
        [] => Ok(default),
        [t] => Ok(*t),
        _ => Err(CliError::Config("this command takes a single --t".into())),
    }
}

pub fn density(o: &Opts) -> Result<Table, CliError> {
    let g = o.geometry()?;
    let reg = single_t(o, 0.0)?;
    let cfg = DensityConfig::new(o.xi, reg)?;
    let xs = positions(o, &g, 99)?;
    let mut t = table(
        "density",
        Some(&g),
        o,
        &["x", "weyl", "periodic", "boundary", "total_renormalized"],
    )?;
    t.meta("xi", o.xi);
    t.meta("t", reg);
    for x in xs {
        let e = energy_density(&g, x, &cfg)?;
        t.push(vec![
            x.into(),
            e.weyl.into(),
            e.periodic.into(),
            e.boundary.into(),
            e.total_renormalized.into(),
        ]);
    }
    Ok(t)
}

pub fn kernel(o: &Opts) -> Result<Table, CliError> {
    let g = o.geometry()?;
    let control = o.control()?;
    let ts = if o.t.is_empty() { vec![0.1] } else { o.t.clone() };
    check_increasing("t", &ts)?;
    let xs = if o.x.is_empty() {
        vec![g.length().map_or(1.0, |l| 0.5 * l)]
    } else {
        check_increasing("x", &o.x)?;
        o.x.clone()
    };
    let mut t = table(
        "kernel",
        Some(&g),
        o,
        &[
            "t",
            "x",
            "closed_form",
            "mode_sum",
            "image_sum",
            "mode_sum_bound",
            "image_sum_bound",
        ],
    )?;
    for &tt in &ts {
        for &x in &xs {
            let c = cylinder_kernel(&g, tt, x, x, KernelMethod::ClosedForm, &control)?;
            let m = cylinder_kernel(&g, tt, x, x, KernelMethod::ModeSum, &control)?;
            let i = cylinder_kernel(&g, tt, x, x, KernelMethod::ImageSum, &control)?;
            t.push(vec![
                tt.into(),
                x.into(),
                c.value.into(),
                m.value.into(),
                i.value.into(),
                m.truncation_bound.into(),
                i.truncation_bound.into(),
            ]);
        }
    }
    Ok(t)
}

pub fn figure(which: Figure, o: &Opts) -> Result<Table, CliError> {
    match which {
        Figure::Fig1 => {
            let g = Geometry::interval(1.0, BoundaryCondition::Dirichlet, BoundaryCondition::Dirichlet)?;
            let cfg = DensityConfig::new(0.25, 0.0)?;
            let xs = linspace(0.02, 0.98, o.grid_points(500)?);
            let mut t = table("figure fig1", Some(&g), o, &["x", "energy_density"])?;
            t.meta("quantity", "renormalized energy density, xi = 1/4");
            for x in xs {
                t.push(vec![x.into(), energy_density(&g, x, &cfg)?.total_renormalized.into()]);
            }
            Ok(t)
        }
        Figure::Fig2 => {
            let g = Geometry::half_line(BoundaryCondition::Dirichlet);
            let reg = single_t(o, 1e-3)?;
            let cfg = DensityConfig::new(0.25, reg)?;
            let xs = geomspace(1e-4, 1.0, o.grid_points(1000)?);
            let mut t = table("figure fig2", Some(&g), o, &["x", "energy_density"])?;
            t.meta(
                "quantity",
                "regularized energy density minus the constant 1/(2 pi t^2), xi = 1/4",
            );
            t.meta("t", reg);
            for x in xs {
                t.push(vec![x.into(), energy_density(&g, x, &cfg)?.total_renormalized.into()]);
            }
            Ok(t)
        }
    }
}

pub fn compare(o: &Opts) -> Result<Table, CliError> {
    let g = o.geometry()?;
    let r = approximation_report(&g).map_err(|e| match e {
        vacuum_core::VacuumError::InvalidParameter(m) => CliError::Config(m),
        other => other.into(),
    })?;
    let mut t = table(
        "compare",
        Some(&g),
        o,
        &[
            "scope",
            "x",
            "exact",
            "stationary_phase",
            "short_orbit",
            "exact_boundary",
            "short_orbit_boundary",
        ],
    )?;
    let gl = &r.global;
    t.push(vec![
        "global".into(),
        "".into(),
        gl.exact.into(),
        gl.stationary_phase.into(),
        gl.short_orbit.into(),
        gl.exact_boundary.into(),
        gl.short_orbit_boundary.into(),
    ]);
    for row in &r.local {
        t.push(vec![
            "local".into(),
            row.x.into(),
            row.exact.into(),
            row.stationary_phase.into(),
            row.short_orbit.into(),
            row.exact_boundary.into(),
            row.short_orbit_boundary.into(),
        ]);
    }
    Ok(t)
}

/// The report table and the number of failed checks.
pub fn verify(o: &Opts) -> Result<(Table, usize), CliError> {
    if let Some(tol) = o.tol {
        if !(tol > 0.0) {
            return Err(CliError::Config(format!("--tol must be positive, got {tol}")));
        }
    }
    let checks = verify::run_all(o.tol)?;
    let mut t = Table::new(&["name", "measured", "tolerance", "passed"]);
    t.meta("command", "verify");
    t.meta("tol_override", o.tol.map_or("none".to_string(), |v| v.to_string()));
    t.meta("build", env!("VACUUM_BUILD"));
    let mut failed = 0;
    for c in checks {
        failed += usize::from(!c.passed);
        t.push(vec![
            c.name.into(),
            c.measured.into(),
            c.tolerance.into(),
            c.passed.into(),
        ]);
    }
    t.meta("failed", failed);
    Ok((t, failed))
}
