//! `verify`: coherence, maximum-principle and remainder-decay suites.

use gevrey::families::{check_coherence, CoherenceOptions, CoherenceReport, ProbeSpec};
use gevrey::flatness::{pl_check, BoundReport, GrowthAttestation, PlOptions, RatioReport};
use gevrey::{Polysector, Sector};
use serde::{Deserialize, Serialize};

use super::ratios::{self, Fits, RaySetup};
use crate::config::{directions, nonnegative, positive, InputCfg, OrdersCfg, OutputsCfg, RadiiCfg, WindowCfg};
use crate::context::Ctx;
use crate::error::{setup, CliError, CliResult, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Coherence,
    Pl,
    Remainder,
    NullExpansion,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Coherence => "coherence",
            Suite::Pl => "pl",
            Suite::Remainder => "remainder",
            Suite::NullExpansion => "null-expansion",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    /// Must match the suite given on the command line.
    suite: Option<Suite>,
    input: InputCfg,
    tolerance: Option<f64>,
    // coherence
    max_order: Option<usize>,
    points: Option<usize>,
    probe: Option<ProbeSpec>,
    // pl
    polysector: Option<Polysector>,
    boundary_density: Option<usize>,
    interior_samples: Option<usize>,
    min_fraction: Option<f64>,
    growth: Option<GrowthAttestation>,
    // remainder, null-expansion
    directions: Option<Vec<Vec<f64>>>,
    radii: Option<RadiiCfg>,
    orders: Option<OrdersCfg>,
    window: Option<WindowCfg>,
    abs_floor: Option<f64>,
    rel_floor: Option<f64>,
    #[serde(default)]
    outputs: OutputsCfg,
}

impl Config {
    /// Names of the suite-specific fields that are set.
    fn set_fields(&self) -> Vec<(&'static str, &'static [Suite])> {
        use Suite::*;
        let mut out: Vec<(&'static str, &'static [Suite])> = Vec::new();
        let mut add = |set: bool, name, suites| {
            if set {
                out.push((name, suites));
            }
        };
        add(self.tolerance.is_some(), "tolerance", &[Coherence, Pl]);
        add(self.max_order.is_some(), "max_order", &[Coherence]);
        add(self.points.is_some(), "points", &[Coherence]);
        add(self.probe.is_some(), "probe", &[Coherence]);
        add(self.polysector.is_some(), "polysector", &[Pl]);
        add(self.boundary_density.is_some(), "boundary_density", &[Pl]);
        add(self.interior_samples.is_some(), "interior_samples", &[Pl]);
        add(self.min_fraction.is_some(), "min_fraction", &[Pl]);
        add(self.growth.is_some(), "growth", &[Pl]);
        add(self.directions.is_some(), "directions", &[Remainder, NullExpansion]);
        add(self.radii.is_some(), "radii", &[Remainder, NullExpansion]);
        add(self.orders.is_some(), "orders", &[Remainder, NullExpansion]);
        add(self.window.is_some(), "window", &[Remainder, NullExpansion]);
        add(self.abs_floor.is_some(), "abs_floor", &[Remainder]);
        add(self.rel_floor.is_some(), "rel_floor", &[Remainder]);
        out
    }
}

#[derive(Serialize)]
struct RayResult {
    #[serde(flatten)]
    report: Option<RatioReport>,
    fits: Option<Fits>,
    all_finite: bool,
    all_decay: bool,
    error: Option<String>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum Details {
    Coherence(CoherenceReport),
    Pl(BoundReport),
    Rays(Vec<RayResult>),
    Error { error: String },
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    suite: Suite,
    status: &'static str,
    input: String,
    details: Details,
}

/// Default maximum-principle region: each sector narrowed by a tenth of its
/// opening on both sides, radius `0.9·min(ρ, 1)`.
fn shrunk(domain: &Polysector) -> CliResult<Polysector> {
    let sectors = domain
        .sectors()
        .iter()
        .map(|s| {
            let m = 0.1 * s.opening();
            Sector::new(s.alpha() + m, s.beta() - m, 0.9 * s.rho().min(1.0))
        })
        .collect::<gevrey::Result<Vec<_>>>()
        .map_err(setup)?;
    Polysector::new(sectors).map_err(setup)
}

pub fn run(ctx: &Ctx, suite: Suite) -> CliResult<Outcome> {
    let cfg: Config = ctx.load("verify")?;
    if let Some(s) = cfg.suite {
        if s != suite {
            return Err(CliError::schema(format!("config is for suite `{}`, not `{}`", s.name(), suite.name())));
        }
    }
    for (name, suites) in cfg.set_fields() {
        if !suites.contains(&suite) {
            return Err(CliError::schema(format!("`{name}` does not apply to suite `{}`", suite.name())));
        }
    }
    if cfg.outputs.csv.is_some() {
        return Err(CliError::schema("verify writes no CSV"));
    }
    let report_name = cfg.outputs.report(&format!("verify-{}.json", suite.name()))?;
    let subject = cfg.input.resolve(&ctx.base())?;
    let finish = |outcome: Outcome, details: Details| -> CliResult<Outcome> {
        let report = Report { command: "verify", suite, status: outcome.label(), input: subject.label(), details };
        ctx.write_json(&report_name, &report)?;
        Ok(outcome)
    };

    match suite {
        Suite::Coherence => {
            let fam = subject.family()?;
            let d = CoherenceOptions::default();
            let probe = cfg.probe.clone().unwrap_or(d.probe);
            probe.validate().map_err(setup)?;
            let opts = CoherenceOptions {
                tol: positive("tolerance", cfg.tolerance.unwrap_or(d.tol))?,
                max_order: cfg.max_order.unwrap_or(d.max_order),
                points: cfg.points.unwrap_or(d.points),
                probe,
                exec: ctx.exec,
            };
            if opts.points == 0 {
                return Err(CliError::schema("`points` must be at least 1"));
            }
            match check_coherence(&fam, &opts) {
                Ok(rep) => {
                    let outcome = if rep.is_coherent() {
                        Outcome::Passed
                    } else if rep.failures.iter().any(|p| !p.converged) {
                        Outcome::NonConverged
                    } else {
                        Outcome::Failed
                    };
                    finish(outcome, Details::Coherence(rep))
                }
                Err(e) => finish(Outcome::NonConverged, Details::Error { error: e.to_string() }),
            }
        }
        Suite::Pl => {
            let f = subject.function()?;
            let s = match cfg.polysector.clone() {
                Some(s) => s,
                None => shrunk(f.domain())?,
            };
            if s.dim() != f.dim() || !gevrey::geometry::is_subpolysector(&s, f.domain()).map_err(setup)? {
                return Err(CliError::schema("`polysector` must be a subpolysector of the function's domain"));
            }
            if !s.is_bounded() {
                return Err(CliError::schema("the maximum principle check needs a bounded polysector"));
            }
            let d = PlOptions::default();
            let opts = PlOptions {
                boundary_density: cfg.boundary_density.unwrap_or(d.boundary_density),
                interior_samples: cfg.interior_samples.unwrap_or(d.interior_samples),
                min_fraction: positive("min_fraction", cfg.min_fraction.unwrap_or(d.min_fraction))?,
                tol: nonnegative("tolerance", cfg.tolerance.unwrap_or(d.tol))?,
                growth: cfg.growth.clone().unwrap_or_default(),
                exec: ctx.exec,
            };
            if opts.boundary_density == 0 || opts.interior_samples == 0 || opts.min_fraction >= 1.0 {
                return Err(CliError::schema("need boundary_density ≥ 1, interior_samples ≥ 1 and min_fraction < 1"));
            }
            match pl_check(&f, &s, &opts) {
                Ok(rep) => {
                    let outcome = if !rep.holds() {
                        Outcome::Failed
                    } else if rep.failures.is_empty() {
                        Outcome::Passed
                    } else {
                        Outcome::NonConverged
                    };
                    finish(outcome, Details::Pl(rep))
                }
                Err(e) => finish(Outcome::NonConverged, Details::Error { error: e.to_string() }),
            }
        }
        Suite::Remainder | Suite::NullExpansion => {
            let f = subject.function()?;
            let family = if suite == Suite::Remainder { Some(subject.family()?) } else { None };
            let (r0, q, count) = if suite == Suite::Remainder { (0.8, 0.97, 250) } else { (0.9, 0.95, 90) };
            let setup = RaySetup {
                directions: directions(&cfg.directions, f.domain())?,
                orders: cfg.orders.clone().unwrap_or(OrdersCfg::range(1, 8)).orders(f.dim())?,
                radii: cfg.radii.clone().unwrap_or(RadiiCfg::geometric(r0, q, count)).values()?,
                window: cfg.window.map(WindowCfg::window).transpose()?,
                abs_floor: nonnegative("abs_floor", cfg.abs_floor.unwrap_or(1e-13))?,
                rel_floor: nonnegative("rel_floor", cfg.rel_floor.unwrap_or(1e-13))?,
            };
            let mut outcome = Outcome::Passed;
            let mut results = Vec::new();
            for rep in ratios::run(&f, family.as_ref(), &setup, ctx.exec) {
                let res = match rep {
                    Ok(rep) => {
                        let all_finite = rep.all_finite();
                        let all_decay = rep.entries.iter().all(|e| e.decays);
                        // `used == 0`: the remainder vanishes below the noise floor
                        if !(all_finite && all_decay) && outcome == Outcome::Passed {
                            outcome = Outcome::Failed;
                        }
                        let fits = Some(Fits::of(&rep, setup.window));
                        RayResult { report: Some(rep), fits, all_finite, all_decay, error: None }
                    }
                    Err(e) => {
                        outcome = Outcome::NonConverged;
                        RayResult { report: None, fits: None, all_finite: false, all_decay: false, error: Some(e.to_string()) }
                    }
                };
                results.push(res);
            }
            finish(outcome, Details::Rays(results))
        }
    }
}
