//! Configuration pieces shared by the subcommands.
//!
//! Every struct rejects unknown fields, and every value is checked before
//! any evaluation starts.

use std::fs;
use std::path::{Component, Path, PathBuf};

use gevrey::families::{family_from_series, FamilyManifest, TotalFamily};
use gevrey::geometry::geometric_radii;
use gevrey::series::{index_box, IndexWindow, MultiIndex};
use gevrey::testbed::{self, RegistryEntry, TestbedParams};
use gevrey::transforms::{brg_function, LaplaceSpec};
use gevrey::{Complex64, MultiIndexSeries, Multidirection, Polysector, SampledFunction};
use rand::Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer};
use serde_json::Value;

use crate::error::{setup, CliError, CliResult};

/// Parse `path` into `T`. A `"command"` field, when present, must name `command`.
pub fn load<T: DeserializeOwned>(path: &Path, command: &str) -> CliResult<T> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::schema(format!("cannot read {}: {e}", path.display())))?;
    let mut value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::schema(format!("{}: {e}", path.display())))?;
    let obj = value.as_object_mut().ok_or_else(|| CliError::schema("the config must be a JSON object"))?;
    if let Some(c) = obj.remove("command") {
        if c.as_str() != Some(command) {
            return Err(CliError::schema(format!("config is for command {c}, not \"{command}\"")));
        }
    }
    serde_json::from_value(value).map_err(|e| CliError::schema(format!("{}: {e}", path.display())))
}

fn opt_complex<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Complex64>, D::Error> {
    #[derive(Deserialize)]
    struct W(#[serde(with = "gevrey::json::complex")] Complex64);
    Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsCfg {
    pub flat_rate: Option<f64>,
    #[serde(default, deserialize_with = "opt_complex")]
    pub z0: Option<Complex64>,
}

/// Exactly one of a testbed id, a series (inline or file) or a family
/// manifest (inline or file).
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputCfg {
    pub testbed: Option<String>,
    pub params: Option<ParamsCfg>,
    pub series: Option<MultiIndexSeries>,
    pub series_file: Option<PathBuf>,
    pub laplace: Option<LaplaceSpec>,
    pub manifest: Option<FamilyManifest>,
    pub manifest_file: Option<PathBuf>,
}

/// The resolved input of a run.
pub enum Subject {
    Testbed(Box<RegistryEntry>),
    Series { series: MultiIndexSeries, laplace: Option<LaplaceSpec> },
    Manifest(FamilyManifest),
}

fn read_json<T: DeserializeOwned>(base: &Path, file: &Path) -> CliResult<T> {
    let path = if file.is_absolute() { file.to_path_buf() } else { base.join(file) };
    let text =
        fs::read_to_string(&path).map_err(|e| CliError::schema(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::schema(format!("{}: {e}", path.display())))
}

impl InputCfg {
    /// `base` is the directory that relative file names refer to.
    pub fn resolve(&self, base: &Path) -> CliResult<Subject> {
        let given = [
            self.testbed.is_some(),
            self.series.is_some() || self.series_file.is_some(),
            self.manifest.is_some() || self.manifest_file.is_some(),
        ];
        if given.iter().filter(|&&g| g).count() != 1 {
            return Err(CliError::schema("input needs exactly one of `testbed`, `series`/`series_file`, `manifest`/`manifest_file`"));
        }
        if self.series.is_some() && self.series_file.is_some() {
            return Err(CliError::schema("give `series` or `series_file`, not both"));
        }
        if self.manifest.is_some() && self.manifest_file.is_some() {
            return Err(CliError::schema("give `manifest` or `manifest_file`, not both"));
        }
        if self.params.is_some() && self.testbed.is_none() {
            return Err(CliError::schema("`params` only applies to testbed input"));
        }
        if self.laplace.is_some() && !given[1] {
            return Err(CliError::schema("`laplace` only applies to series input"));
        }
        if let Some(id) = &self.testbed {
            let mut p = TestbedParams::default();
            if let Some(q) = &self.params {
                if let Some(r) = q.flat_rate {
                    if !(r > 0.0 && r.is_finite()) {
                        return Err(CliError::schema("params.flat_rate must be positive"));
                    }
                    p.flat_rate = r;
                }
                if let Some(z) = q.z0 {
                    p.z0 = z;
                }
            }
            return Ok(Subject::Testbed(Box::new(testbed::get_with(id, &p).map_err(setup)?)));
        }
        if given[1] {
            let series = match (&self.series, &self.series_file) {
                (Some(s), _) => s.clone(),
                (None, Some(f)) => read_json(base, f)?,
                (None, None) => unreachable!(),
            };
            if let Some(spec) = &self.laplace {
                spec.validate().map_err(setup)?;
                if spec.dim() != series.dim() {
                    return Err(CliError::schema(format!(
                        "laplace.z0 has {} entries for a {}-variable series",
                        spec.dim(),
                        series.dim()
                    )));
                }
            }
            return Ok(Subject::Series { series, laplace: self.laplace.clone() });
        }
        let m = match (&self.manifest, &self.manifest_file) {
            (Some(m), _) => m.clone(),
            (None, Some(f)) => read_json(base, f)?,
            (None, None) => unreachable!(),
        };
        Ok(Subject::Manifest(m))
    }
}

impl Subject {
    pub fn label(&self) -> String {
        match self {
            Subject::Testbed(e) => e.id.to_string(),
            Subject::Series { .. } => "series".into(),
            Subject::Manifest(_) => "manifest".into(),
        }
    }

    pub fn entry(&self) -> Option<&RegistryEntry> {
        match self {
            Subject::Testbed(e) => Some(e),
            _ => None,
        }
    }

    pub fn has_function(&self) -> bool {
        match self {
            Subject::Testbed(_) => true,
            Subject::Series { laplace, .. } => laplace.is_some(),
            Subject::Manifest(_) => false,
        }
    }

    pub fn has_family(&self) -> bool {
        match self {
            Subject::Testbed(e) => e.family.is_some(),
            Subject::Series { laplace, .. } => laplace.is_some(),
            Subject::Manifest(_) => true,
        }
    }

    pub fn function(&self) -> CliResult<SampledFunction> {
        match self {
            Subject::Testbed(e) => Ok(e.function.clone()),
            Subject::Series { series, laplace: Some(spec) } => brg_function(series, spec).map_err(setup),
            Subject::Series { laplace: None, .. } => Err(CliError::schema("series input needs `laplace` to define a function")),
            Subject::Manifest(_) => Err(CliError::schema("a manifest defines a family, not a function")),
        }
    }

    pub fn family(&self) -> CliResult<TotalFamily> {
        match self {
            Subject::Testbed(e) => {
                e.family.clone().ok_or_else(|| CliError::schema(format!("testbed entry `{}` has no family", e.id)))
            }
            Subject::Series { series, laplace: Some(spec) } => family_from_series(series, spec).map_err(setup),
            Subject::Series { laplace: None, .. } => Err(CliError::schema("series input needs `laplace` to define a family")),
            Subject::Manifest(m) => m.build().map_err(setup),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometricCfg {
    pub start: f64,
    pub ratio: f64,
    pub count: usize,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValuesCfg {
    pub values: Vec<f64>,
}

/// Radii shared by every axis: `start·ratio^k` or an explicit list.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum RadiiCfg {
    Geometric(GeometricCfg),
    Values(ValuesCfg),
}

impl RadiiCfg {
    pub fn geometric(start: f64, ratio: f64, count: usize) -> Self {
        RadiiCfg::Geometric(GeometricCfg { start, ratio, count })
    }

    pub fn values(&self) -> CliResult<Vec<f64>> {
        let v = match self {
            RadiiCfg::Geometric(g) => {
                if !(g.start > 0.0 && g.start.is_finite() && g.ratio > 0.0 && g.ratio < 1.0 && g.count >= 2) {
                    return Err(CliError::schema("geometric radii need start > 0, 0 < ratio < 1 and count ≥ 2"));
                }
                geometric_radii(g.start, g.ratio, g.count)
            }
            RadiiCfg::Values(v) => v.values.clone(),
        };
        if v.len() < 2 || v.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
            return Err(CliError::schema("radii must be at least two positive finite numbers"));
        }
        Ok(v)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    /// Every multi-index in `[min, max]^n`.
    #[default]
    Box,
    /// `(k, …, k)` for `k` in `[min, max]`.
    Diagonal,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeCfg {
    pub min: usize,
    pub max: usize,
    #[serde(default)]
    pub shape: Shape,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ListCfg {
    pub list: Vec<MultiIndex>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum OrdersCfg {
    Range(RangeCfg),
    List(ListCfg),
}

impl OrdersCfg {
    pub fn range(min: usize, max: usize) -> Self {
        OrdersCfg::Range(RangeCfg { min, max, shape: Shape::Box })
    }

    pub fn orders(&self, n: usize) -> CliResult<Vec<MultiIndex>> {
        let out: Vec<MultiIndex> = match self {
            OrdersCfg::Range(r) => {
                if r.min > r.max {
                    return Err(CliError::schema("orders.min exceeds orders.max"));
                }
                match r.shape {
                    Shape::Diagonal => (r.min..=r.max).map(|k| vec![k; n]).collect(),
                    Shape::Box => index_box(&vec![r.max - r.min; n])
                        .into_iter()
                        .map(|idx| idx.into_iter().map(|k| k + r.min).collect())
                        .collect(),
                }
            }
            OrdersCfg::List(l) => l.list.clone(),
        };
        if out.is_empty() {
            return Err(CliError::schema("no orders requested"));
        }
        if let Some(o) = out.iter().find(|o| o.len() != n) {
            return Err(CliError::schema(format!("order {o:?} does not have {n} components")));
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowCfg {
    pub lo: usize,
    pub hi: usize,
}

impl WindowCfg {
    pub fn window(self) -> CliResult<IndexWindow> {
        if self.lo > self.hi {
            return Err(CliError::schema("window.lo exceeds window.hi"));
        }
        Ok(IndexWindow { lo: self.lo, hi: self.hi })
    }
}

/// Directions to use, each checked against `domain`; defaults to the bisector.
pub fn directions(given: &Option<Vec<Vec<f64>>>, domain: &Polysector) -> CliResult<Vec<Multidirection>> {
    let list = match given {
        None => return Ok(vec![domain.bisector()]),
        Some(l) if l.is_empty() => return Err(CliError::schema("`directions` is empty")),
        Some(l) => l,
    };
    list.iter()
        .map(|t| {
            if t.len() != domain.dim() {
                return Err(CliError::schema(format!("direction {t:?} does not have {} components", domain.dim())));
            }
            let d = Multidirection::new(t.clone());
            d.check_in(domain).map_err(setup)?;
            Ok(d)
        })
        .collect()
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RaysCfg {
    pub directions: Vec<Vec<f64>>,
    pub radii: RadiiCfg,
}

/// Evaluation points: explicit `[re, im]` tuples, or points
/// `(r e^{iθ_1}, …, r e^{iθ_n})` along rays. `jitter` scales each modulus by
/// a factor drawn from `[1 − jitter, 1 + jitter]`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridCfg {
    pub points: Option<Vec<Vec<[f64; 2]>>>,
    pub rays: Option<RaysCfg>,
    #[serde(default)]
    pub jitter: f64,
}

impl GridCfg {
    pub fn points<R: Rng>(&self, domain: &Polysector, rng: &mut R) -> CliResult<Vec<Vec<Complex64>>> {
        if !(0.0..0.5).contains(&self.jitter) {
            return Err(CliError::schema("grid.jitter must lie in [0, 0.5)"));
        }
        let mut pts: Vec<Vec<Complex64>> = match (&self.points, &self.rays) {
            (Some(p), None) => p.iter().map(|z| z.iter().map(|w| Complex64::new(w[0], w[1])).collect()).collect(),
            (None, Some(rays)) => {
                let radii = rays.radii.values()?;
                let mut out = Vec::new();
                for d in directions(&Some(rays.directions.clone()), domain)? {
                    for &r in &radii {
                        out.push(d.thetas().iter().map(|&t| Complex64::from_polar(r, t)).collect());
                    }
                }
                out
            }
            _ => return Err(CliError::schema("grid needs exactly one of `points` and `rays`")),
        };
        if pts.is_empty() {
            return Err(CliError::schema("grid has no points"));
        }
        if self.jitter > 0.0 {
            for z in pts.iter_mut().flatten() {
                *z *= 1.0 + self.jitter * rng.random_range(-1.0..=1.0);
            }
        }
        for (k, z) in pts.iter().enumerate() {
            if z.len() != domain.dim() || !domain.contains(z) {
                return Err(CliError::schema(format!("grid point {k} is not in the domain")));
            }
        }
        Ok(pts)
    }
}

/// Output file names, relative to `--out`.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsCfg {
    pub report: Option<String>,
    pub csv: Option<String>,
}

fn check_name(name: &str) -> CliResult<String> {
    let p = Path::new(name);
    if name.is_empty() || !p.components().all(|c| matches!(c, Component::Normal(_))) {
        return Err(CliError::schema(format!("output name `{name}` must be a relative path without `..`")));
    }
    Ok(name.to_string())
}

impl OutputsCfg {
    pub fn report(&self, default: &str) -> CliResult<String> {
        check_name(self.report.as_deref().unwrap_or(default))
    }

    pub fn csv(&self, default: &str) -> CliResult<String> {
        check_name(self.csv.as_deref().unwrap_or(default))
    }
}

pub fn positive(name: &str, v: f64) -> CliResult<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::schema(format!("`{name}` must be positive and finite")))
    }
}

pub fn nonnegative(name: &str, v: f64) -> CliResult<f64> {
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::schema(format!("`{name}` must be nonnegative and finite")))
    }
}
