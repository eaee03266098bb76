//! `interpolate`: a function of two variables with a prescribed first-order family.

use std::f64::consts::PI;

use gevrey::families::{extract_orders, first_order_of, ProbeSpec};
use gevrey::transforms::{interpolate_first_order, HRoute, InterpolationOptions};
use gevrey::typecalc::TypeProfile;
use gevrey::{Complex64, Error};
use serde::{Deserialize, Serialize};

use crate::config::{positive, GridCfg, InputCfg, OutputsCfg};
use crate::context::{cell, Csv, Ctx};
use crate::error::{setup, CliError, CliResult, Outcome};

#[derive(Clone, Copy, Debug, Default, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Route {
    #[default]
    Coefficientwise,
    Extracted,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    input: InputCfg,
    /// Laplace endpoints of the two passes.
    z0: [[f64; 2]; 2],
    /// Constant type profile per axis.
    profiles: [f64; 2],
    #[serde(default = "default_order")]
    order: usize,
    coherence_tol: Option<f64>,
    probe: Option<ProbeSpec>,
    #[serde(default)]
    route: Route,
    /// Points per axis at which the family is re-extracted from the result.
    #[serde(default = "default_check_points")]
    check_points: usize,
    #[serde(default = "default_check_tol")]
    check_tol: f64,
    grid: Option<GridCfg>,
    #[serde(default)]
    outputs: OutputsCfg,
}

fn default_order() -> usize {
    InterpolationOptions::default().order
}

fn default_check_points() -> usize {
    10
}

fn default_check_tol() -> f64 {
    1e-5
}

#[derive(Serialize)]
struct ProfileSample {
    axis: usize,
    theta: f64,
    r_hat: f64,
}

#[derive(Serialize)]
struct Check {
    points_per_axis: usize,
    max_error: f64,
    tolerance: f64,
    nonconverged: usize,
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    status: &'static str,
    input: String,
    order: usize,
    /// `A[n][m]` as `[re, im]`.
    constants: Vec<Vec<[f64; 2]>>,
    coherence_residual: Option<f64>,
    r_hat: Vec<ProfileSample>,
    check: Option<Check>,
    grid_file: Option<String>,
    error: Option<String>,
}

/// Deterministic points inside a sector, spread around the bisector.
fn check_points(s: &gevrey::Sector, count: usize) -> Vec<Complex64> {
    let rho = s.rho().min(1.0);
    let spread = 0.4 * s.opening().min(PI);
    (0..count)
        .map(|k| {
            let u = if count > 1 { k as f64 / (count - 1) as f64 } else { 0.5 };
            Complex64::from_polar(rho * (0.1 + 0.63 * u), s.bisector() + spread * (2.0 * u - 1.0))
        })
        .collect()
}

pub fn run(ctx: &Ctx) -> CliResult<Outcome> {
    let cfg: Config = ctx.load("interpolate")?;
    let subject = cfg.input.resolve(&ctx.base())?;
    let fam = subject.family()?;
    if fam.dim() != 2 {
        return Err(CliError::schema(format!("interpolation needs a 2-variable family, got {}", fam.dim())));
    }
    let fam1 = first_order_of(&fam);
    let host = fam1.host().clone();
    let profiles: Vec<TypeProfile> = (0..2)
        .map(|j| {
            let s = host.sector(j);
            TypeProfile::constant(s.alpha(), s.beta(), positive("profiles", cfg.profiles[j])?).map_err(setup)
        })
        .collect::<CliResult<_>>()?;
    let z0 = [Complex64::new(cfg.z0[0][0], cfg.z0[0][1]), Complex64::new(cfg.z0[1][0], cfg.z0[1][1])];
    let d = InterpolationOptions::default();
    let opts = InterpolationOptions {
        order: cfg.order,
        coherence_tol: positive("coherence_tol", cfg.coherence_tol.unwrap_or(d.coherence_tol))?,
        probe: cfg.probe.clone().unwrap_or(d.probe),
        route: match cfg.route {
            Route::Coefficientwise => HRoute::Coefficientwise,
            Route::Extracted => HRoute::Extracted,
        },
        ..d
    };
    opts.probe.validate().map_err(setup)?;
    let check_tol = positive("check_tol", cfg.check_tol)?;
    let report_name = cfg.outputs.report("interpolate.json")?;
    let csv_name = match &cfg.grid {
        Some(_) => Some(cfg.outputs.csv("interpolate.csv")?),
        None if cfg.outputs.csv.is_some() => return Err(CliError::schema("outputs.csv needs a grid")),
        None => None,
    };
    let grid_points = cfg.grid.as_ref().map(|g| g.points(&host, &mut ctx.rng())).transpose()?;

    let mut report = Report {
        command: "interpolate",
        status: Outcome::NonConverged.label(),
        input: subject.label(),
        order: opts.order,
        constants: Vec::new(),
        coherence_residual: None,
        r_hat: Vec::new(),
        check: None,
        grid_file: None,
        error: None,
    };
    let g = match interpolate_first_order(&fam1, &profiles, z0, &opts) {
        Ok(g) => g,
        Err(
            e @ (Error::InvalidArgument(_)
            | Error::OutsideDomain(_)
            | Error::DimensionMismatch { .. }
            | Error::MissingElement(_)),
        ) => {
            return Err(setup(e))
        }
        Err(Error::Incoherent(m)) => {
            report.status = Outcome::Failed.label();
            report.error = Some(format!("incoherent family: {m}"));
            ctx.write_json(&report_name, &report)?;
            return Ok(Outcome::Failed);
        }
        Err(e) => {
            report.error = Some(e.to_string());
            ctx.write_json(&report_name, &report)?;
            return Ok(Outcome::NonConverged);
        }
    };
    report.constants = g.constants.iter().map(|row| row.iter().map(|a| [a.re, a.im]).collect()).collect();
    report.coherence_residual = Some(g.coherence_residual);
    for (j, p) in g.r_hat.iter().enumerate() {
        for k in 1..=7 {
            let theta = p.alpha() + (p.beta() - p.alpha()) * k as f64 / 8.0;
            report.r_hat.push(ProfileSample { axis: j, theta, r_hat: p.eval(theta) });
        }
    }

    // re-extract f_{jn} from the result along each axis
    let orders: Vec<Vec<usize>> = (0..=opts.order).map(|n| vec![n]).collect();
    let mut worst: f64 = 0.0;
    let mut nonconverged = 0;
    for axis in 0..2 {
        let other = host.sector(1 - axis);
        for w in check_points(other, cfg.check_points) {
            let lims = match extract_orders(&g.function, &[axis], &orders, &[w], &opts.probe) {
                Ok(l) => l,
                Err(e) => {
                    report.error = Some(e.to_string());
                    ctx.write_json(&report_name, &report)?;
                    return Ok(Outcome::NonConverged);
                }
            };
            for (n, l) in lims.iter().enumerate() {
                nonconverged += usize::from(!l.converged);
                worst = worst.max((l.value - fam1.sequence(axis)[n].eval(&[w])).norm());
            }
        }
    }
    report.check =
        Some(Check { points_per_axis: cfg.check_points, max_error: worst, tolerance: check_tol, nonconverged });
    let mut outcome = if worst <= check_tol {
        Outcome::Passed
    } else if nonconverged > 0 {
        Outcome::NonConverged
    } else {
        Outcome::Failed
    };

    if let (Some(points), Some(name)) = (grid_points, csv_name) {
        let values = g.function.eval_grid(&points, ctx.exec);
        let header: Vec<String> =
            ["re z1", "im z1", "re z2", "im z2", "re F", "im F", "est_err"].iter().map(|s| s.to_string()).collect();
        let mut csv = Csv::new(&header);
        for (z, v) in points.iter().zip(&values) {
            if !(v.value.re.is_finite() && v.value.im.is_finite()) && outcome == Outcome::Passed {
                outcome = Outcome::NonConverged;
            }
            let mut row: Vec<String> = z.iter().flat_map(|w| [cell(Some(w.re)), cell(Some(w.im))]).collect();
            row.extend([cell(Some(v.value.re)), cell(Some(v.value.im)), cell(Some(v.error))]);
            csv.row(&row);
        }
        ctx.write(&name, &csv.finish())?;
        report.grid_file = Some(name);
    }
    report.status = outcome.label();
    ctx.write_json(&report_name, &report)?;
    Ok(outcome)
}
