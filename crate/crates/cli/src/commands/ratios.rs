//! Remainder and null-expansion constants along rays, shared by `type-fit`
//! and `verify`.

use gevrey::families::TotalFamily;
use gevrey::flatness::{null_expansion_check, remainder_check, RatioReport};
use gevrey::series::{GevreyFit, IndexWindow, MultiIndex};
use gevrey::{Execution, Multidirection, SampledFunction};
use serde::Serialize;

pub struct RaySetup {
    pub directions: Vec<Multidirection>,
    pub orders: Vec<MultiIndex>,
    pub radii: Vec<f64>,
    pub window: Option<IndexWindow>,
    pub abs_floor: f64,
    pub rel_floor: f64,
}

/// Both type fits of one ratio report.
#[derive(Clone, Debug, Serialize)]
pub struct Fits {
    pub power_corrected: Option<GevreyFit>,
    pub plain: Option<GevreyFit>,
    pub fit_error: Option<String>,
}

impl Fits {
    pub fn of(rep: &RatioReport, window: Option<IndexWindow>) -> Fits {
        let mut errors = Vec::new();
        let power_corrected = rep.fit_type_power_corrected(window).map_err(|e| errors.push(e.to_string())).ok();
        let plain = rep.fit_type(window).map_err(|e| errors.push(e.to_string())).ok();
        let fit_error = if errors.is_empty() { None } else { Some(errors.join("; ")) };
        Fits { power_corrected, plain, fit_error }
    }
}

/// One report per direction; `family = None` measures `f` itself.
pub fn run(
    f: &SampledFunction,
    family: Option<&TotalFamily>,
    setup: &RaySetup,
    exec: Execution,
) -> Vec<gevrey::Result<RatioReport>> {
    let radii = vec![setup.radii.clone(); f.dim()];
    setup
        .directions
        .iter()
        .map(|d| match family {
            Some(fam) => remainder_check(f, fam, d, &setup.orders, &radii, setup.abs_floor, setup.rel_floor, exec),
            None => null_expansion_check(f, d, &setup.orders, &radii, exec),
        })
        .collect()
}
