//! `type-fit`: empirical Gevrey or flat types along directions.

use gevrey::flatness::{fit_flat_type, sample_ray_grid, FlatFit, RatioEntry};
use gevrey::series::{fit_gevrey_type_power, fit_gevrey_type_window, GevreyFit};
use serde::{Deserialize, Serialize};

use super::ratios::{self, Fits, RaySetup};
use crate::config::{directions, nonnegative, InputCfg, OrdersCfg, OutputsCfg, RadiiCfg, WindowCfg};
use crate::context::Ctx;
use crate::error::{CliError, CliResult, Outcome};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Kind {
    /// `flat` for flat testbed entries and functions without a family,
    /// `gevrey` when a family is known, `coefficients` for a bare series.
    #[default]
    Auto,
    /// From the remainder constants `sup |f − App_N| / |z|^N`.
    Gevrey,
    /// From `−ln |f|` along rays.
    Flat,
    /// From the series coefficients.
    Coefficients,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    input: InputCfg,
    #[serde(default)]
    kind: Kind,
    directions: Option<Vec<Vec<f64>>>,
    radii: Option<RadiiCfg>,
    orders: Option<OrdersCfg>,
    window: Option<WindowCfg>,
    #[serde(default = "default_floor")]
    abs_floor: f64,
    #[serde(default = "default_floor")]
    rel_floor: f64,
    #[serde(default)]
    outputs: OutputsCfg,
}

fn default_floor() -> f64 {
    1e-13
}

#[derive(Serialize, Default)]
struct DirectionResult {
    direction: Vec<f64>,
    /// Power-corrected Gevrey fit, or the flat fit.
    estimate: Option<Vec<f64>>,
    /// Plain Gevrey fit.
    plain_estimate: Option<Vec<f64>>,
    /// Known type of the testbed entry, when there is one.
    expected: Option<Vec<f64>>,
    max_relative_error: Option<f64>,
    gevrey_fit: Option<Fits>,
    flat_fit: Option<FlatFit>,
    entries: Vec<RatioEntry>,
    error: Option<String>,
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    status: &'static str,
    input: String,
    kind: Kind,
    results: Vec<DirectionResult>,
    coefficient_fit: Option<CoefficientFit>,
}

#[derive(Serialize)]
struct CoefficientFit {
    plain: Option<GevreyFit>,
    power_corrected: Option<GevreyFit>,
    error: Option<String>,
}

fn relative_error(est: &[f64], want: &[f64]) -> Option<f64> {
    let errs: Vec<f64> = est
        .iter()
        .zip(want)
        .filter(|(_, w)| w.is_finite())
        .map(|(e, w)| if *w == 0.0 { e.abs() } else { (e / w - 1.0).abs() })
        .collect();
    if errs.is_empty() {
        None
    } else {
        Some(errs.into_iter().fold(0.0, f64::max))
    }
}

pub fn run(ctx: &Ctx) -> CliResult<Outcome> {
    let cfg: Config = ctx.load("type-fit")?;
    let subject = cfg.input.resolve(&ctx.base())?;
    let kind = match cfg.kind {
        Kind::Auto if !subject.has_function() => Kind::Coefficients,
        Kind::Auto if subject.entry().is_some_and(|e| e.flat_type.is_some()) => Kind::Flat,
        Kind::Auto if subject.has_family() => Kind::Gevrey,
        Kind::Auto => Kind::Flat,
        k => k,
    };
    let report_name = cfg.outputs.report("type-fit.json")?;
    if cfg.outputs.csv.is_some() {
        return Err(CliError::schema("type-fit writes no CSV"));
    }
    let abs_floor = nonnegative("abs_floor", cfg.abs_floor)?;
    let rel_floor = nonnegative("rel_floor", cfg.rel_floor)?;
    let window = cfg.window.map(WindowCfg::window).transpose()?;

    if kind == Kind::Coefficients {
        if cfg.directions.is_some() || cfg.radii.is_some() || cfg.orders.is_some() {
            return Err(CliError::schema("coefficient fits take no directions, radii or orders"));
        }
        let series = match (&subject, subject.entry()) {
            (crate::config::Subject::Series { series, .. }, _) => series.clone(),
            (_, Some(e)) => e.series.clone().ok_or_else(|| CliError::schema(format!("`{}` has no series", e.id)))?,
            _ => return Err(CliError::schema("coefficient fits need a series")),
        };
        let mut errors = Vec::new();
        let plain = fit_gevrey_type_window(&series, window).map_err(|e| errors.push(e.to_string())).ok();
        let power_corrected = fit_gevrey_type_power(&series, window).map_err(|e| errors.push(e.to_string())).ok();
        let outcome = if plain.is_some() && power_corrected.is_some() { Outcome::Passed } else { Outcome::NonConverged };
        let error = if errors.is_empty() { None } else { Some(errors.join("; ")) };
        let report = Report {
            command: "type-fit",
            status: outcome.label(),
            input: subject.label(),
            kind,
            results: Vec::new(),
            coefficient_fit: Some(CoefficientFit { plain, power_corrected, error }),
        };
        ctx.write_json(&report_name, &report)?;
        return Ok(outcome);
    }

    let f = subject.function()?;
    let dirs = directions(&cfg.directions, f.domain())?;
    let expected_law = subject.entry().and_then(|e| if kind == Kind::Gevrey { e.gevrey_type.clone() } else { e.flat_type.clone() });
    let mut results: Vec<DirectionResult> = Vec::new();
    if kind == Kind::Gevrey {
        let fam = subject.family()?;
        // the defaults suit one-variable divergent series such as euler
        let (orders, window) = match &cfg.orders {
            Some(o) => (o.orders(f.dim())?, window),
            None => {
                let top = fam.index_bound().iter().map(|b| b + 1).min().unwrap_or(0).min(22);
                if top == 0 {
                    return Err(CliError::schema("the family stores no orders to fit"));
                }
                let default_window = (top >= 20).then_some(gevrey::series::IndexWindow { lo: 8, hi: 20 });
                (OrdersCfg::range(1, top).orders(f.dim())?, window.or(default_window))
            }
        };
        let radii = cfg.radii.clone().unwrap_or(RadiiCfg::geometric(0.8, 0.97, 250)).values()?;
        let setup = RaySetup { directions: dirs, orders, radii, window, abs_floor, rel_floor };
        for (d, rep) in setup.directions.iter().zip(ratios::run(&f, Some(&fam), &setup, ctx.exec)) {
            let mut res = DirectionResult { direction: d.thetas().to_vec(), ..DirectionResult::default() };
            res.expected = expected_law.as_ref().map(|l| l(d.thetas()));
            match rep {
                Ok(rep) => {
                    let fits = Fits::of(&rep, setup.window);
                    res.estimate = fits.power_corrected.as_ref().map(|g| g.type_estimate.clone());
                    res.plain_estimate = fits.plain.as_ref().map(|g| g.type_estimate.clone());
                    res.error = fits.fit_error.clone();
                    res.gevrey_fit = Some(fits);
                    res.entries = rep.entries;
                }
                Err(e) => res.error = Some(e.to_string()),
            }
            results.push(res);
        }
    } else {
        if cfg.orders.is_some() || cfg.window.is_some() {
            return Err(CliError::schema("flat fits take no orders or window"));
        }
        let radii = cfg.radii.clone().unwrap_or(RadiiCfg::geometric(0.9, 0.8, 18)).values()?;
        let grid = vec![radii; f.dim()];
        for d in &dirs {
            let mut res = DirectionResult { direction: d.thetas().to_vec(), ..DirectionResult::default() };
            res.expected = expected_law.as_ref().map(|l| l(d.thetas()));
            match sample_ray_grid(&f, d, &grid, ctx.exec).and_then(|s| fit_flat_type(&s)) {
                Ok(fit) => {
                    res.estimate = Some(fit.type_estimate.clone());
                    res.flat_fit = Some(fit);
                }
                Err(e) => res.error = Some(e.to_string()),
            }
            results.push(res);
        }
    }
    for r in &mut results {
        if let (Some(e), Some(w)) = (&r.estimate, &r.expected) {
            r.max_relative_error = relative_error(e, w);
        }
    }
    let outcome = if results.iter().all(|r| r.error.is_none()) { Outcome::Passed } else { Outcome::NonConverged };
    let report =
        Report { command: "type-fit", status: outcome.label(), input: subject.label(), kind, results, coefficient_fit: None };
    ctx.write_json(&report_name, &report)?;
    Ok(outcome)
}
