//! `predict-type`: the closed-form type laws over a grid of angles.

use gevrey::typecalc::{circle_type, fz_type, r_tilde, sine_type, AxisTypeParams, FinalType, TypeProfile};
use serde::{Deserialize, Serialize};

use crate::config::{positive, OutputsCfg};
use crate::context::{cell, Csv, Ctx};
use crate::error::{CliError, CliResult, Outcome};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    alpha: f64,
    beta: f64,
    /// Defaults to the bisector.
    theta0: Option<f64>,
    #[serde(default = "one")]
    r0: f64,
    /// Radius of the two-branch sine law; defaults to `r0`.
    r: Option<f64>,
    /// Edge radii of the circle construction; default to `r0`.
    r_alpha: Option<f64>,
    r_beta: Option<f64>,
    #[serde(default = "one")]
    z0_mod: f64,
    /// Constant type profile entering the final type; defaults to `r0`.
    profile: Option<f64>,
    thetas: Option<Vec<f64>>,
    /// Equally spaced angles on `[alpha, beta]`, both ends included.
    #[serde(default = "default_count")]
    count: usize,
    #[serde(default)]
    outputs: OutputsCfg,
}

fn one() -> f64 {
    1.0
}

fn default_count() -> usize {
    33
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    status: &'static str,
    alpha: f64,
    beta: f64,
    theta0: f64,
    r0: f64,
    rows: usize,
    /// Cells left empty because the formula is not defined there.
    undefined_cells: usize,
    /// `γ` and `t` of the final type, when that formula applies.
    final_gamma: Option<f64>,
    final_t: Option<f64>,
    csv_file: String,
}

pub fn run(ctx: &Ctx) -> CliResult<Outcome> {
    let cfg: Config = ctx.load("predict-type")?;
    let (a, b) = (cfg.alpha, cfg.beta);
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(CliError::schema("need finite alpha < beta"));
    }
    let theta0 = cfg.theta0.unwrap_or(0.5 * (a + b));
    if !(a < theta0 && theta0 < b) {
        return Err(CliError::schema("theta0 must lie strictly between alpha and beta"));
    }
    let r0 = positive("r0", cfg.r0)?;
    let r = positive("r", cfg.r.unwrap_or(r0))?;
    let z0_mod = positive("z0_mod", cfg.z0_mod)?;
    let ra = cfg.r_alpha.unwrap_or(r0);
    let rb = cfg.r_beta.unwrap_or(r0);
    if !(ra >= 0.0 && rb >= 0.0 && ra.is_finite() && rb.is_finite()) {
        return Err(CliError::schema("r_alpha and r_beta must be nonnegative"));
    }
    let profile_value = positive("profile", cfg.profile.unwrap_or(r0))?;
    let thetas = match &cfg.thetas {
        Some(t) => {
            if t.is_empty() || t.iter().any(|x| !(a <= *x && *x <= b)) {
                return Err(CliError::schema("thetas must be a nonempty list inside [alpha, beta]"));
            }
            t.clone()
        }
        None => {
            if cfg.count < 2 {
                return Err(CliError::schema("count must be at least 2"));
            }
            let step = (b - a) / (cfg.count - 1) as f64;
            // endpoints exactly, so that edge rows hit the closed-form edges
            (0..cfg.count).map(|k| if k + 1 == cfg.count { b } else { a + step * k as f64 }).collect()
        }
    };
    let report_name = cfg.outputs.report("predict-type.json")?;
    let csv_name = cfg.outputs.csv("predict-type.csv")?;

    let profile = TypeProfile::constant(a, b, profile_value).map_err(crate::error::setup)?;
    let final_law = FinalType::new(vec![AxisTypeParams { alpha: a, beta: b, theta0, r0, profile }]).ok();
    let header: Vec<String> =
        ["theta", "fz_type", "sine_type", "circle_type", "r_tilde", "final_type"].iter().map(|s| s.to_string()).collect();
    let mut csv = Csv::new(&header);
    let mut undefined = 0;
    for &t in &thetas {
        let cells = [
            fz_type(t, a, b, theta0, r0).ok(),
            sine_type(t, a, b, theta0, r).ok(),
            circle_type(ra, rb, a, b, t).ok(),
            r_tilde(z0_mod, t, theta0).ok().map(|v| v.value),
            final_law.as_ref().and_then(|l| l.axis(0, t).ok()),
        ];
        undefined += cells.iter().filter(|c| c.is_none()).count();
        let mut row = vec![cell(Some(t))];
        row.extend(cells.iter().map(|&c| cell(c)));
        csv.row(&row);
    }
    ctx.write(&csv_name, &csv.finish())?;
    let report = Report {
        command: "predict-type",
        status: Outcome::Passed.label(),
        alpha: a,
        beta: b,
        theta0,
        r0,
        rows: thetas.len(),
        undefined_cells: undefined,
        final_gamma: final_law.as_ref().map(|l| l.gammas()[0]),
        final_t: final_law.as_ref().map(|l| l.t_values()[0]),
        csv_file: csv_name,
    };
    ctx.write_json(&report_name, &report)?;
    Ok(Outcome::Passed)
}
