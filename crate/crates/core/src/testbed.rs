//! Closed-form functions with known families, Gevrey types and flat rates.

use std::f64::consts::FRAC_PI_3;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{from_polynomial, FunctionElement, Provenance, TotalFamily, FamilySource, DEFAULT_INDEX_BOUND};
use crate::function::{Evaluation, SampledFunction};
use crate::geometry::{Polysector, Sector};
use crate::series::{MultiIndexSeries, Truncation};
use crate::transforms::{laplace_1d, QuadSpec};

/// Per-direction type law `θ ↦ (R_1(θ_1), …, R_n(θ_n))`.
pub type TypeLaw = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// How a known property is established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    /// Read off the closed form.
    ClosedForm,
    /// Follows from a short computation (Taylor expansion, cosine law, …).
    Computation,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Note {
    pub field: &'static str,
    pub basis: Basis,
    pub text: &'static str,
}

#[derive(Clone)]
pub struct RegistryEntry {
    pub id: &'static str,
    pub dim: usize,
    pub description: String,
    pub function: SampledFunction,
    pub family: Option<TotalFamily>,
    pub series: Option<MultiIndexSeries>,
    /// 1-Gevrey type of the expansion per direction; `∞` for convergent ones.
    pub gevrey_type: Option<TypeLaw>,
    /// Exponential flat rate per direction, for flat entries.
    pub flat_type: Option<TypeLaw>,
    pub notes: Vec<Note>,
}

impl fmt::Debug for RegistryEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RegistryEntry").field("id", &self.id).field("dim", &self.dim).finish_non_exhaustive()
    }
}

impl RegistryEntry {
    pub fn host(&self) -> &Polysector {
        self.function.domain()
    }

    pub fn summary(&self) -> EntrySummary {
        let bis = self.host().bisector();
        let finite = |v: Vec<f64>| v.into_iter().map(|r| if r.is_finite() { Some(r) } else { None }).collect();
        EntrySummary {
            id: self.id,
            dim: self.dim,
            description: self.description.clone(),
            host: self.host().clone(),
            has_family: self.family.is_some(),
            has_series: self.series.is_some(),
            gevrey_type_at_bisector: self.gevrey_type.as_ref().map(|l| finite(l(bis.thetas()))),
            flat_type_at_bisector: self.flat_type.as_ref().map(|l| finite(l(bis.thetas()))),
            notes: self.notes.clone(),
        }
    }
}

/// Serializable view for listings; `null` type entries mean `∞`.
#[derive(Clone, Debug, Serialize)]
pub struct EntrySummary {
    pub id: &'static str,
    pub dim: usize,
    pub description: String,
    pub host: Polysector,
    pub has_family: bool,
    pub has_series: bool,
    pub gevrey_type_at_bisector: Option<Vec<Option<f64>>>,
    pub flat_type_at_bisector: Option<Vec<Option<f64>>>,
    pub notes: Vec<Note>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestbedParams {
    /// `R` in `flat1`.
    pub flat_rate: f64,
    /// Laplace endpoint for `euler`, `brg_const`, `brg_const2`.
    pub z0: Complex64,
}

impl Default for TestbedParams {
    fn default() -> Self {
        TestbedParams { flat_rate: 1.0, z0: Complex64::new(0.5, 0.0) }
    }
}

pub const IDS: [&str; 8] = ["brg_const", "brg_const2", "euler", "flat1", "flat2", "monomial", "poly", "rat2"];

/// Index bound of the constant-only `euler` family.
pub const EULER_INDEX_BOUND: usize = 24;
/// Stored degree of the Euler series.
pub const EULER_DEGREE: usize = 60;

pub fn list() -> Vec<RegistryEntry> {
    IDS.iter().map(|id| get(id).expect("registered")).collect()
}

pub fn get(id: &str) -> Result<RegistryEntry> {
    get_with(id, &TestbedParams::default())
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn sign(n: usize) -> f64 {
    if n.is_multiple_of(2) { 1.0 } else { -1.0 }
}

fn sector(a: f64, b: f64, rho: f64) -> Sector {
    Sector::new(a, b, rho).expect("valid sector")
}

fn note(field: &'static str, basis: Basis, text: &'static str) -> Note {
    Note { field, basis, text }
}

fn cosine_law(z0: Vec<Complex64>) -> TypeLaw {
    Arc::new(move |th: &[f64]| th.iter().zip(&z0).map(|(t, z)| z.norm() * (t - z.arg()).cos()).collect())
}

fn constant_law(r: f64) -> TypeLaw {
    Arc::new(move |th: &[f64]| vec![r; th.len()])
}

fn zero_family(host: Polysector) -> Result<TotalFamily> {
    let n = host.dim();
    let h = host.clone();
    TotalFamily::from_generator(host, vec![DEFAULT_INDEX_BOUND; n], Provenance::ClosedForm, |axes, _| {
        if axes.len() == n {
            return Ok(FunctionElement::Constant(c(0.0)));
        }
        let rest: Vec<usize> = (0..n).filter(|j| !axes.contains(j)).collect();
        Ok(FunctionElement::Function(SampledFunction::zero(h.restrict(&rest)?)))
    })
}

fn with_id(fam: TotalFamily, id: &str) -> TotalFamily {
    fam.with_source(FamilySource::ClosedForm { id: id.to_string() })
}

/// Sector around `arg z0` of opening `π`, radius 1.
fn laplace_host(z0: Complex64) -> Sector {
    let a = z0.arg();
    sector(a - std::f64::consts::FRAC_PI_2, a + std::f64::consts::FRAC_PI_2, 1.0)
}

/// `1 − e^{−z0/z}` as a function element on `host`.
fn brg_one(z0: Complex64, host: Polysector) -> SampledFunction {
    SampledFunction::exact(host, "1 - exp(-z0/z)", move |z| 1.0 - (-z0 / z[0]).exp())
}

pub fn get_with(id: &str, p: &TestbedParams) -> Result<RegistryEntry> {
    match id {
        "flat1" => flat1(p.flat_rate),
        "flat2" => flat2(),
        "euler" => euler(p.z0),
        "rat2" => rat2(),
        "poly" => polynomial_entry(
            "poly",
            "1 + 2 z1 - z2^2 + 3 z1^2 z2",
            &[(vec![0, 0], 1.0), (vec![1, 0], 2.0), (vec![0, 2], -1.0), (vec![2, 1], 3.0)],
        ),
        "monomial" => polynomial_entry("monomial", "z1 z2", &[(vec![1, 1], 1.0)]),
        "brg_const" => brg_const(p.z0),
        "brg_const2" => brg_const2(p.z0),
        _ => Err(Error::UnknownEntry(id.to_string())),
    }
}

fn flat1(r: f64) -> Result<RegistryEntry> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument("flat rate must be positive".into()));
    }
    let host = Polysector::new(vec![sector(-FRAC_PI_3, FRAC_PI_3, 1.0)])?;
    let function = SampledFunction::exact(host.clone(), "exp(-R/z)", move |z| (-r / z[0]).exp());
    let law: TypeLaw = Arc::new(move |th: &[f64]| vec![r * th[0].cos()]);
    Ok(RegistryEntry {
        id: "flat1",
        dim: 1,
        description: format!("exp(-{r}/z)"),
        function,
        family: Some(with_id(zero_family(host)?, "flat1")),
        series: Some(MultiIndexSeries::new(vec![DEFAULT_INDEX_BOUND])?.with_truncation(Truncation::Exact)),
        gevrey_type: Some(law.clone()),
        flat_type: Some(law),
        notes: vec![
            note("family", Basis::ClosedForm, "all coefficients vanish"),
            note("flat_type", Basis::ClosedForm, "|exp(-R/z)| = exp(-R cos θ / r)"),
            note("gevrey_type", Basis::Computation, "flat of type R cos θ, hence null expansion of the same type"),
        ],
    })
}

fn flat2() -> Result<RegistryEntry> {
    let host = Polysector::uniform(sector(-FRAC_PI_3, FRAC_PI_3, 1.0), 2)?;
    let function = SampledFunction::exact(host.clone(), "exp(-1/z1-1/z2)", |z| (-1.0 / z[0] - 1.0 / z[1]).exp());
    let law: TypeLaw = Arc::new(|th: &[f64]| th.iter().map(|t| t.cos()).collect());
    Ok(RegistryEntry {
        id: "flat2",
        dim: 2,
        description: "exp(-1/z1 - 1/z2)".into(),
        function,
        family: Some(with_id(zero_family(host)?, "flat2")),
        series: Some(MultiIndexSeries::new(vec![DEFAULT_INDEX_BOUND; 2])?.with_truncation(Truncation::Exact)),
        gevrey_type: Some(law.clone()),
        flat_type: Some(law),
        notes: vec![
            note("family", Basis::ClosedForm, "every element is zero"),
            note("flat_type", Basis::ClosedForm, "per-axis factor exp(-cos θ_j / r_j)"),
            note("gevrey_type", Basis::Computation, "flat type carries over to the null expansion"),
        ],
    })
}

fn euler(z0: Complex64) -> Result<RegistryEntry> {
    if !(z0.norm() > 0.0 && z0.norm() < 1.0) {
        return Err(Error::InvalidArgument("euler needs 0 < |z0| < 1".into()));
    }
    let host = Polysector::new(vec![laplace_host(z0)])?;
    let quad = QuadSpec { tol: 1e-13, ..QuadSpec::default() };
    let function = SampledFunction::with_error(host.clone(), "euler", move |z| {
        laplace_1d(|t| 1.0 / (1.0 + t), z0, &quad, z[0]).unwrap_or(Evaluation { value: Complex64::new(f64::NAN, f64::NAN), error: f64::INFINITY })
    });
    let fact = |n: usize| (1..=n).map(|k| k as f64).product::<f64>();
    let series = MultiIndexSeries::from_fn(vec![EULER_DEGREE], |i| c(sign(i[0]) * fact(i[0])))?;
    let family = TotalFamily::from_generator(host, vec![EULER_INDEX_BOUND], Provenance::ClosedForm, |_, idx| {
        Ok(FunctionElement::Constant(c(sign(idx[0]) * fact(idx[0]))))
    })?;
    Ok(RegistryEntry {
        id: "euler",
        dim: 1,
        description: format!("(1/z) ∫_0^z0 exp(-t/z)/(1+t) dt, z0 = {z0}"),
        function,
        family: Some(with_id(family, "euler")),
        series: Some(series),
        gevrey_type: Some(cosine_law(vec![z0])),
        flat_type: None,
        notes: vec![
            note("series", Basis::ClosedForm, "Borel transform 1/(1+t)"),
            note("family", Basis::ClosedForm, "constants (-1)^N N!"),
            note("gevrey_type", Basis::Computation, "cosine law |z0| cos(θ - arg z0) for the truncated transform"),
        ],
    })
}

fn rat2() -> Result<RegistryEntry> {
    let host = Polysector::uniform(sector(-FRAC_PI_3, FRAC_PI_3, 1.0), 2)?;
    let function = SampledFunction::exact(host.clone(), "1/((1+z1)(1+z2))", |z| 1.0 / ((1.0 + z[0]) * (1.0 + z[1])));
    let h = host.clone();
    let family = TotalFamily::from_generator(host, vec![DEFAULT_INDEX_BOUND; 2], Provenance::ClosedForm, |axes, idx| {
        if axes.len() == 2 {
            return Ok(FunctionElement::Constant(c(sign(idx[0] + idx[1]))));
        }
        let s = sign(idx[0]);
        let rest = 1 - axes[0];
        Ok(FunctionElement::Function(SampledFunction::exact(h.restrict(&[rest])?, "(-1)^n/(1+w)", move |w| s / (1.0 + w[0]))))
    })?;
    let series = MultiIndexSeries::from_fn(vec![DEFAULT_INDEX_BOUND; 2], |i| c(sign(i[0] + i[1])))?;
    Ok(RegistryEntry {
        id: "rat2",
        dim: 2,
        description: "1/((1+z1)(1+z2))".into(),
        function,
        family: Some(with_id(family, "rat2")),
        series: Some(series),
        gevrey_type: Some(constant_law(f64::INFINITY)),
        flat_type: None,
        notes: vec![
            note("family", Basis::Computation, "Taylor expansion in each variable: f_{1n}(z2) = (-1)^n/(1+z2)"),
            note("gevrey_type", Basis::ClosedForm, "convergent expansion"),
        ],
    })
}

fn polynomial_entry(id: &'static str, description: &str, terms: &[(Vec<usize>, f64)]) -> Result<RegistryEntry> {
    let host = Polysector::uniform(sector(-FRAC_PI_3, FRAC_PI_3, 1.0), 2)?;
    let terms: Vec<(Vec<usize>, Complex64)> = terms.iter().map(|(i, v)| (i.clone(), c(*v))).collect();
    let p = MultiIndexSeries::polynomial(2, &terms)?;
    let q = p.clone();
    let function = SampledFunction::exact(host.clone(), description, move |z| {
        crate::series::evaluate_partial(&q, z).expect("dimension fixed")
    });
    Ok(RegistryEntry {
        id,
        dim: 2,
        description: description.into(),
        function,
        family: Some(with_id(from_polynomial(&p, host)?, id)),
        series: Some(p),
        gevrey_type: Some(constant_law(f64::INFINITY)),
        flat_type: None,
        notes: vec![
            note("family", Basis::ClosedForm, "coefficients of the polynomial; App_N is exact beyond the degree"),
            note("gevrey_type", Basis::ClosedForm, "finite expansion"),
        ],
    })
}

fn brg_const(z0: Complex64) -> Result<RegistryEntry> {
    let host = Polysector::new(vec![laplace_host(z0)])?;
    let function = brg_one(z0, host.clone()).with_label("brg_const");
    let family = TotalFamily::from_generator(host, vec![DEFAULT_INDEX_BOUND], Provenance::ClosedForm, |_, idx| {
        Ok(FunctionElement::Constant(c(if idx[0] == 0 { 1.0 } else { 0.0 })))
    })?;
    Ok(RegistryEntry {
        id: "brg_const",
        dim: 1,
        description: format!("1 - exp(-z0/z), z0 = {z0}"),
        function,
        family: Some(with_id(family, "brg_const")),
        series: Some(MultiIndexSeries::polynomial(1, &[(vec![0], c(1.0))])?),
        gevrey_type: Some(cosine_law(vec![z0])),
        flat_type: None,
        notes: vec![
            note("series", Basis::ClosedForm, "truncated transform of the constant 1"),
            note("gevrey_type", Basis::Computation, "remainder exp(-z0/z) is flat of type |z0| cos(θ - arg z0)"),
        ],
    })
}

fn brg_const2(z0: Complex64) -> Result<RegistryEntry> {
    let host = Polysector::uniform(laplace_host(z0), 2)?;
    let function = SampledFunction::exact(host.clone(), "brg_const2", move |z| {
        (1.0 - (-z0 / z[0]).exp()) * (1.0 - (-z0 / z[1]).exp())
    });
    let h = host.clone();
    let family = TotalFamily::from_generator(host, vec![DEFAULT_INDEX_BOUND; 2], Provenance::ClosedForm, |axes, idx| {
        if axes.len() == 2 {
            return Ok(FunctionElement::Constant(c(if idx == [0, 0] { 1.0 } else { 0.0 })));
        }
        let domain = h.restrict(&[1 - axes[0]])?;
        Ok(FunctionElement::Function(if idx[0] == 0 { brg_one(z0, domain) } else { SampledFunction::zero(domain) }))
    })?;
    Ok(RegistryEntry {
        id: "brg_const2",
        dim: 2,
        description: format!("(1 - exp(-z0/z1))(1 - exp(-z0/z2)), z0 = {z0}"),
        function,
        family: Some(with_id(family, "brg_const2")),
        series: Some(MultiIndexSeries::polynomial(2, &[(vec![0, 0], c(1.0))])?),
        gevrey_type: Some(cosine_law(vec![z0; 2])),
        flat_type: None,
        notes: vec![
            note("family", Basis::Computation, "f_{j,0} is the one-variable factor, higher elements vanish"),
            note("gevrey_type", Basis::Computation, "cosine law on each axis"),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Execution;
    use crate::families::{check_coherence, CoherenceOptions};
    use crate::families::{app_n, family_from_series};
    use crate::flatness::{flat_to_gevrey, gevrey_to_flat};
    use crate::transforms::{brg_function, LaplaceSpec};

    #[test]
    fn examples() {
        let p = TestbedParams { flat_rate: 2.0, ..TestbedParams::default() };
        let e = get_with("flat1", &p).unwrap();
        assert!((e.function.eval(&[c(0.1)]) / (-20.0f64).exp() - 1.0).norm() < 1e-14);
        let r = get("rat2").unwrap();
        let f13 = r.family.as_ref().unwrap().element(&[0], &[3]).unwrap();
        let z2 = Complex64::new(0.3, 0.2);
        assert!((f13.eval(&[z2]) + 1.0 / (1.0 + z2)).norm() < 1e-15);
        assert!(matches!(get("nope"), Err(Error::UnknownEntry(_))));
    }

    #[test]
    fn every_family_is_coherent() {
        let mut opts = CoherenceOptions { tol: 1e-8, max_order: 3, exec: Execution::Sequential, ..CoherenceOptions::default() };
        opts.probe.tol = 1e-10;
        for e in list() {
            let rep = check_coherence(e.family.as_ref().unwrap(), &opts).unwrap();
            assert!(rep.is_coherent(), "{}: {} {:?}", e.id, rep.max_residual, rep.failures);
        }
    }

    #[test]
    fn types_round_trip() {
        for e in list() {
            let th = e.host().bisector();
            for law in [&e.gevrey_type, &e.flat_type].into_iter().flatten() {
                let r = law(th.thetas());
                assert_eq!(gevrey_to_flat(&flat_to_gevrey(&r).unwrap()).unwrap(), r);
            }
        }
    }

    #[test]
    fn euler_matches_laplaced_series() {
        let e = get("euler").unwrap();
        let f = brg_function(e.series.as_ref().unwrap(), &LaplaceSpec::new(vec![c(0.5)]).unwrap()).unwrap();
        for z in [Complex64::new(0.2, 0.1), c(0.05), Complex64::new(0.3, -0.4)] {
            assert!((f.eval(&[z]) - e.function.eval(&[z])).norm() < 1e-10);
        }
    }

    #[test]
    fn brg_const_matches_series_route() {
        let z0 = Complex64::new(0.4, 0.2);
        let e = get_with("brg_const2", &TestbedParams { z0, ..TestbedParams::default() }).unwrap();
        let spec = LaplaceSpec::new(vec![z0; 2]).unwrap();
        let f = brg_function(e.series.as_ref().unwrap(), &spec).unwrap();
        let z = [Complex64::new(0.2, 0.1), Complex64::new(0.1, 0.05)];
        assert!((f.eval(&z) - e.function.eval(&z)).norm() < 1e-12);
        let fam = family_from_series(e.series.as_ref().unwrap(), &spec).unwrap();
        let known = e.family.as_ref().unwrap();
        let w = [Complex64::new(0.3, 0.1)];
        let a = fam.element(&[1], &[0]).unwrap().eval(&w);
        assert!((a - known.element(&[1], &[0]).unwrap().eval(&w)).norm() < 1e-12);
        assert!((app_n(&fam, &[1, 1], &z).unwrap() - app_n(known, &[1, 1], &z).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn summaries_serialize() {
        let s = serde_json::to_string(&get("rat2").unwrap().summary()).unwrap();
        assert!(s.contains("\"gevrey_type_at_bisector\":[null,null]"));
    }
}
