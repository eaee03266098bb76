//! `transform`: Laplace transform of a Borel sum, sampled on a grid.

use gevrey::transforms::{brg_function, brg_function_iterated, LaplaceSpec};
use serde::{Deserialize, Serialize};

use crate::config::{GridCfg, InputCfg, OutputsCfg, Subject};
use crate::context::{cell, Csv, Ctx};
use crate::error::{setup, CliError, CliResult, Outcome};

#[derive(Clone, Copy, Debug, Default, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Route {
    /// Closed-form Laplace basis of the monomials.
    #[default]
    Monomial,
    /// Nested one-dimensional quadratures.
    Iterated,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    input: InputCfg,
    #[serde(default)]
    route: Route,
    grid: GridCfg,
    #[serde(default)]
    outputs: OutputsCfg,
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    status: &'static str,
    route: Route,
    dim: usize,
    laplace: LaplaceSpec,
    points: usize,
    failed_points: usize,
    max_est_err: f64,
    grid_file: String,
}

pub fn run(ctx: &Ctx) -> CliResult<Outcome> {
    let cfg: Config = ctx.load("transform")?;
    let (series, spec) = match cfg.input.resolve(&ctx.base())? {
        Subject::Series { series, laplace: Some(spec) } => (series, spec),
        _ => return Err(CliError::schema("transform needs a series input with `laplace`")),
    };
    let f = match cfg.route {
        Route::Monomial => brg_function(&series, &spec),
        Route::Iterated => brg_function_iterated(&series, &spec),
    }
    .map_err(setup)?;
    let points = cfg.grid.points(f.domain(), &mut ctx.rng())?;
    let report_name = cfg.outputs.report("transform.json")?;
    let csv_name = cfg.outputs.csv("transform.csv")?;

    let values = f.eval_grid(&points, ctx.exec);
    let n = series.dim();
    let mut header = Vec::new();
    for j in 1..=n {
        header.push(format!("re z{j}"));
        header.push(format!("im z{j}"));
    }
    header.extend(["re F".to_string(), "im F".to_string(), "est_err".to_string()]);
    let mut csv = Csv::new(&header);
    let mut failed = 0;
    let mut max_err: f64 = 0.0;
    for (z, v) in points.iter().zip(&values) {
        let ok = v.value.re.is_finite() && v.value.im.is_finite();
        if ok {
            max_err = max_err.max(v.error);
        } else {
            failed += 1;
        }
        let mut row: Vec<String> = z.iter().flat_map(|w| [cell(Some(w.re)), cell(Some(w.im))]).collect();
        row.extend([cell(Some(v.value.re)), cell(Some(v.value.im)), cell(Some(v.error))]);
        csv.row(&row);
    }
    let outcome = if failed > 0 { Outcome::NonConverged } else { Outcome::Passed };
    ctx.write(&csv_name, &csv.finish())?;
    let report = Report {
        command: "transform",
        status: outcome.label(),
        route: cfg.route,
        dim: n,
        laplace: spec,
        points: points.len(),
        failed_points: failed,
        max_est_err: max_err,
        grid_file: csv_name,
    };
    ctx.write_json(&report_name, &report)?;
    Ok(outcome)
}
