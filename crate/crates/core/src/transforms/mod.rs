//! Truncated Laplace transforms and the Borel–Ritt–Gevrey construction.

mod interpolate;
pub mod quadrature;

use std::cell::Cell;
use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{Evaluation, SampledFunction};
use crate::geometry::{Multidirection, Polysector, Sector};
use crate::series::{self, MultiIndexSeries, UNBOUNDED_TYPE};

pub use interpolate::{interpolate_first_order, HRoute, Interpolant, InterpolationOptions};
pub use quadrature::{integrate, integrate_vec, QuadResult, QuadSpec};

/// Largest `|t_j|/R_j` at which a Borel sum is evaluated.
pub const BOREL_DISC_FRACTION: f64 = 0.9;

/// Endpoints and tolerances of a truncated Laplace transform.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaplaceSpec {
    #[serde(with = "crate::json::complex_vec")]
    pub z0: Vec<Complex64>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_depth")]
    pub max_depth: u32,
    /// Allowed Borel-sum tail, relative to the series' Γ¹ norm.
    #[serde(default = "default_tail_tol")]
    pub tail_tol: f64,
}

fn default_tol() -> f64 {
    1e-12
}

fn default_depth() -> u32 {
    30
}

fn default_tail_tol() -> f64 {
    1e-10
}

impl LaplaceSpec {
    pub fn new(z0: Vec<Complex64>) -> Result<Self> {
        let spec = LaplaceSpec { z0, tol: default_tol(), max_depth: default_depth(), tail_tol: default_tail_tol() };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.z0.is_empty() {
            return Err(Error::InvalidArgument("z0 must be nonempty".into()));
        }
        if let Some(j) = self.z0.iter().position(|z| !(z.norm() > 0.0) || !z.norm().is_finite()) {
            return Err(Error::InvalidArgument(format!("z0[{j}] must be finite and nonzero")));
        }
        if !(self.tol > 0.0) || !(self.tail_tol > 0.0) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.z0.len()
    }

    pub fn quad(&self) -> QuadSpec {
        QuadSpec { tol: self.tol, max_depth: self.max_depth, ..QuadSpec::default() }
    }

    /// `S₀ = ∏ S(arg z0_j − π/2, arg z0_j + π/2; ∞)`.
    pub fn domain(&self) -> Polysector {
        Polysector::new(self.z0.iter().map(|z| Sector::half_plane(z.arg())).collect())
            .expect("z0 is nonempty")
    }

    pub fn restrict(&self, axes: &[usize]) -> LaplaceSpec {
        LaplaceSpec { z0: axes.iter().map(|&j| self.z0[j]).collect(), ..self.clone() }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let spec: LaplaceSpec = serde_json::from_str(s)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }
}

fn in_half_plane(z0: Complex64, z: Complex64) -> bool {
    (z * z0.conj()).re > 0.0
}

/// `(1/z)∫₀^{z0} φ(t) e^{−t/z} dt`, integrated along `t = s·z0`.
pub fn laplace_1d<F>(phi: F, z0: Complex64, quad: &QuadSpec, z: Complex64) -> Result<Evaluation>
where
    F: Fn(Complex64) -> Complex64,
{
    if !in_half_plane(z0, z) {
        return Err(Error::OutsideDomain(format!("z = {z} is outside the half-plane around arg z0")));
    }
    let w = z0 / z;
    let r = integrate(|s| w * phi(z0 * s) * (-w * s).exp(), 0.0, 1.0, quad);
    if !r.converged || !r.value.norm().is_finite() {
        return Err(Error::NonConvergence { what: "truncated Laplace quadrature".into(), error: r.error });
    }
    Ok(Evaluation { value: r.value, error: r.error })
}

/// One-variable transform with the endpoint taken from `spec`.
pub fn truncated_laplace<F>(phi: F, spec: &LaplaceSpec, z: Complex64) -> Result<Evaluation>
where
    F: Fn(Complex64) -> Complex64,
{
    if spec.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: spec.dim() });
    }
    laplace_1d(phi, spec.z0[0], &spec.quad(), z)
}

/// `(1/(z₁⋯z_n)) ∫⋯∫ φ(t) exp(−Σ t_j/z_j) dt` as iterated 1-D quadratures,
/// the last axis innermost.
pub fn truncated_laplace_nd<F>(phi: F, spec: &LaplaceSpec, z: &[Complex64]) -> Result<Evaluation>
where
    F: Fn(&[Complex64]) -> Complex64,
{
    if z.len() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), got: z.len() });
    }
    if let Some(j) = (0..z.len()).find(|&j| !in_half_plane(spec.z0[j], z[j])) {
        return Err(Error::OutsideDomain(format!("z[{j}] = {} is outside its half-plane", z[j])));
    }
    let w: Vec<Complex64> = spec.z0.iter().zip(z).map(|(a, b)| a / b).collect();
    let ok = Cell::new(true);
    let quad = spec.quad();
    let ev = nested(&phi, &spec.z0, &w, &quad, &[], &ok);
    if !ok.get() || !ev.value.norm().is_finite() {
        return Err(Error::NonConvergence { what: "iterated Laplace quadrature".into(), error: ev.error });
    }
    Ok(ev)
}

/// `∫₀¹ |w e^{−s w}| ds`, the L¹ mass of the kernel.
fn kernel_mass(w: Complex64) -> f64 {
    let a = w.re;
    if a.abs() < 1e-12 {
        w.norm()
    } else {
        w.norm() * (1.0 - (-a).exp()) / a
    }
}

fn nested<F>(phi: &F, z0: &[Complex64], w: &[Complex64], quad: &QuadSpec, prefix: &[Complex64], ok: &Cell<bool>) -> Evaluation
where
    F: Fn(&[Complex64]) -> Complex64,
{
    let k = prefix.len();
    if k == z0.len() {
        return Evaluation::exact(phi(prefix));
    }
    let inner_err = Cell::new(0.0f64);
    let r = integrate(
        |s| {
            let mut t = prefix.to_vec();
            t.push(z0[k] * s);
            let inner = nested(phi, z0, w, quad, &t, ok);
            inner_err.set(inner_err.get().max(inner.error));
            w[k] * (-w[k] * s).exp() * inner.value
        },
        0.0,
        1.0,
        quad,
    );
    if !r.converged {
        ok.set(false);
    }
    Evaluation { value: r.value, error: r.error + inner_err.get() * kernel_mass(w[k]) }
}

/// `[L(t⁰/0!), …, L(t^order/order!)](z)` from a single adaptive run.
pub fn laplace_monomials(z0: Complex64, quad: &QuadSpec, order: usize, z: Complex64) -> Result<(Vec<Complex64>, f64)> {
    if !in_half_plane(z0, z) {
        return Err(Error::OutsideDomain(format!("z = {z} is outside the half-plane around arg z0")));
    }
    let w = z0 / z;
    let r = integrate_vec(
        |s, out: &mut [Complex64]| {
            let t = z0 * s;
            let mut term = w * (-w * s).exp();
            for (n, o) in out.iter_mut().enumerate() {
                *o = term;
                term *= t / (n + 1) as f64;
            }
        },
        0.0,
        1.0,
        order + 1,
        quad,
    );
    if !r.converged {
        return Err(Error::NonConvergence { what: "Laplace monomial quadrature".into(), error: r.error });
    }
    Ok((r.values, r.error))
}

/// Partial sums of a Borel transform with an a-posteriori tail bound.
#[derive(Clone, Debug)]
pub(crate) struct BorelSum {
    phi: MultiIndexSeries,
    exact: bool,
    radii: Vec<f64>,
    norm: f64,
}

impl BorelSum {
    /// `f` is a series (or section) with fitted types `radii`.
    pub(crate) fn new(f: &MultiIndexSeries, radii: &[f64], z0: &[Complex64], tail_tol: f64) -> Result<Self> {
        let phi = series::borel_transform(f);
        if f.is_exact() {
            return Ok(BorelSum { phi, exact: true, radii: vec![f64::INFINITY; f.dim()], norm: 0.0 });
        }
        let radii: Vec<f64> = radii.iter().map(|&r| r.min(UNBOUNDED_TYPE)).collect();
        for (j, (&r, t)) in radii.iter().zip(z0).enumerate() {
            if t.norm() > BOREL_DISC_FRACTION * r {
                return Err(Error::OutsideDomain(format!(
                    "|z0[{j}]| = {} exceeds {BOREL_DISC_FRACTION}·R = {}",
                    t.norm(),
                    BOREL_DISC_FRACTION * r
                )));
            }
        }
        let norm = series::gamma1_norm(f, &radii)?;
        let sum = BorelSum { phi, exact: false, radii, norm };
        let abs: Vec<f64> = z0.iter().map(|t| t.norm()).collect();
        let tail = sum.tail(&abs);
        if !(tail <= tail_tol * norm.max(f64::MIN_POSITIVE)) {
            return Err(Error::NonConvergence { what: "Borel-sum tail".into(), error: tail });
        }
        Ok(sum)
    }

    /// Bound on the omitted coefficients at `|t_j| = abs[j]`, assuming
    /// `|φ_N| ≤ K·∏R_j^{−N_j}` beyond the stored box.
    pub(crate) fn tail(&self, abs: &[f64]) -> f64 {
        if self.exact || self.norm == 0.0 {
            return 0.0;
        }
        let bound = self.phi.degree_bound();
        let mut all = 1.0;
        let mut inside = 1.0;
        for ((&a, &r), &d) in abs.iter().zip(&self.radii).zip(bound) {
            let x = a / r;
            all *= 1.0 / (1.0 - x);
            inside *= (1.0 - x.powi(d as i32 + 1)) / (1.0 - x);
        }
        self.norm * (all - inside).max(0.0)
    }

    pub(crate) fn eval(&self, t: &[Complex64]) -> Complex64 {
        series::evaluate_partial(&self.phi, t).expect("dimension checked at construction")
    }
}

/// A series whose Borel sum is Laplace-transformed term by term: each
/// axis contributes the basis `L(t^n/n!)(z_j)`, so `F(z) = Σ f_N ∏ I_{N_j}(z_j)`.
#[derive(Clone, Debug)]
pub(crate) struct LaplacedSeries {
    terms: Vec<(Vec<usize>, Complex64)>,
    orders: Vec<usize>,
    z0: Vec<Complex64>,
    quad: QuadSpec,
    tail: f64,
}

impl LaplacedSeries {
    pub(crate) fn new(f: &MultiIndexSeries, sum: &BorelSum, spec: &LaplaceSpec) -> Self {
        let terms: Vec<(Vec<usize>, Complex64)> =
            f.iter().filter(|(_, c)| c.norm() > 0.0).map(|(i, c)| (i.clone(), *c)).collect();
        let mut orders = vec![0; f.dim()];
        for (idx, _) in &terms {
            for (o, &n) in orders.iter_mut().zip(idx) {
                *o = (*o).max(n);
            }
        }
        let abs: Vec<f64> = spec.z0.iter().map(|t| t.norm()).collect();
        LaplacedSeries { terms, orders, z0: spec.z0.clone(), quad: spec.quad(), tail: sum.tail(&abs) }
    }

    pub(crate) fn eval(&self, z: &[Complex64]) -> Evaluation {
        let mut bases = Vec::with_capacity(z.len());
        let mut errs = Vec::with_capacity(z.len());
        for (j, &zj) in z.iter().enumerate() {
            match laplace_monomials(self.z0[j], &self.quad, self.orders[j], zj) {
                Ok((b, e)) => {
                    bases.push(b);
                    errs.push(e);
                }
                Err(Error::NonConvergence { error, .. }) => {
                    return Evaluation { value: Complex64::new(f64::NAN, 0.0), error };
                }
                Err(_) => return Evaluation { value: Complex64::new(f64::NAN, f64::NAN), error: f64::INFINITY },
            }
        }
        let mut value = Complex64::new(0.0, 0.0);
        let mut error = 0.0;
        for (idx, c) in &self.terms {
            let factors: Vec<Complex64> = idx.iter().enumerate().map(|(j, &n)| bases[j][n]).collect();
            value += c * factors.iter().product::<Complex64>();
            for (j, e) in errs.iter().enumerate() {
                let others: f64 =
                    factors.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, v)| v.norm()).product();
                error += c.norm() * e * others;
            }
        }
        let mass: f64 = self.z0.iter().zip(z).map(|(a, b)| kernel_mass(a / b)).product();
        Evaluation { value, error: error + self.tail * mass }
    }
}

fn borel_setup(fhat: &MultiIndexSeries, spec: &LaplaceSpec) -> Result<BorelSum> {
    spec.validate()?;
    if fhat.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: fhat.dim(), got: spec.dim() });
    }
    let radii = if fhat.is_exact() || fhat.is_zero() {
        vec![f64::INFINITY; fhat.dim()]
    } else {
        series::fit_gevrey_type(fhat)?.type_estimate
    };
    BorelSum::new(fhat, &radii, &spec.z0, spec.tail_tol)
}

/// `F = truncated Laplace of the Borel sum of fhat` on `S₀`.
pub fn brg_function(fhat: &MultiIndexSeries, spec: &LaplaceSpec) -> Result<SampledFunction> {
    let sum = borel_setup(fhat, spec)?;
    let domain = spec.domain();
    if fhat.is_zero() {
        return Ok(SampledFunction::zero(domain).with_label("brg(0)"));
    }
    let f = LaplacedSeries::new(fhat, &sum, spec);
    Ok(SampledFunction::with_error(domain, "brg", move |z| f.eval(z)))
}

/// The same function as [`brg_function`], computed by iterated quadrature of
/// the Borel sum itself. Much slower for `n ≥ 2`; kept as an independent route.
pub fn brg_function_iterated(fhat: &MultiIndexSeries, spec: &LaplaceSpec) -> Result<SampledFunction> {
    let sum = borel_setup(fhat, spec)?;
    let domain = spec.domain();
    let abs: Vec<f64> = spec.z0.iter().map(|t| t.norm()).collect();
    let tail = sum.tail(&abs);
    let spec = spec.clone();
    Ok(SampledFunction::with_error(domain, "brg-iterated", move |z| {
        match truncated_laplace_nd(|t| sum.eval(t), &spec, z) {
            Ok(ev) => {
                let mass: f64 = spec.z0.iter().zip(z).map(|(a, b)| kernel_mass(a / b)).product();
                Evaluation { value: ev.value, error: ev.error + tail * mass }
            }
            Err(Error::NonConvergence { error, .. }) => Evaluation { value: Complex64::new(f64::NAN, 0.0), error },
            Err(_) => Evaluation { value: Complex64::new(f64::NAN, f64::NAN), error: f64::INFINITY },
        }
    }))
}

/// `R_j(θ_j) = |z0_j|·cos(θ_j − arg z0_j)`.
pub fn brg_type(z0: &[Complex64], theta: &Multidirection) -> Result<Vec<f64>> {
    if theta.dim() != z0.len() {
        return Err(Error::DimensionMismatch { expected: z0.len(), got: theta.dim() });
    }
    z0.iter()
        .zip(theta.thetas())
        .enumerate()
        .map(|(j, (z, &th))| {
            let d = Complex64::from_polar(1.0, th - z.arg()).arg();
            if d.abs() >= FRAC_PI_2 {
                Err(Error::OutsideDomain(format!("direction {th} on axis {j} is outside the half-plane of z0")))
            } else {
                Ok(z.norm() * d.cos())
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quad() -> QuadSpec {
        QuadSpec { tol: 1e-13, ..Default::default() }
    }

    #[test]
    fn one_dimensional_closed_forms() {
        let z0 = c(1.0, 0.0);
        let v = laplace_1d(|_| c(1.0, 0.0), z0, &quad(), c(0.1, 0.0)).unwrap().value;
        assert!((v.re - (1.0 - (-10f64).exp())).abs() < 1e-13);
        assert!((v.re - 0.9999546).abs() < 1e-7);
        let v = laplace_1d(|t| t, z0, &quad(), c(0.5, 0.0)).unwrap().value;
        assert!((v.re - (0.5 - 1.5 * (-2f64).exp())).abs() < 1e-13);
        assert!((v.re - 0.29699).abs() < 1e-5);
        let v = laplace_1d(|_| c(0.0, 0.0), z0, &quad(), c(0.5, 0.0)).unwrap().value;
        assert_eq!(v, c(0.0, 0.0));
    }

    #[test]
    fn exponential_integrand_closed_form() {
        // φ = e^{−a t}: F = (1 − e^{−z0(a + 1/z)}) / (1 + a z)
        let (a, z0) = (1.7, c(0.8, 0.3));
        for z in [c(0.2, 0.05), c(0.05, -0.01), c(1.5, 0.9)] {
            let v = laplace_1d(|t| (-a * t).exp(), z0, &quad(), z).unwrap().value;
            let exact = (1.0 - (-z0 * (a + 1.0 / z)).exp()) / (1.0 + a * z);
            assert!((v - exact).norm() < 1e-12 * exact.norm().max(1.0), "{z}");
        }
    }

    #[test]
    fn outside_half_plane_is_rejected() {
        assert!(matches!(
            laplace_1d(|_| c(1.0, 0.0), c(1.0, 0.0), &quad(), c(-0.1, 0.0)),
            Err(Error::OutsideDomain(_))
        ));
    }

    #[test]
    fn separable_two_dimensional() {
        let spec = LaplaceSpec::new(vec![c(0.7, 0.0), c(0.5, 0.2)]).unwrap().with_tol(1e-13);
        let z = [c(0.3, 0.1), c(0.2, -0.05)];
        let one = |z0: Complex64, z: Complex64| 1.0 - (-z0 / z).exp();
        let lin = |z0: Complex64, z: Complex64| z - (-z0 / z).exp() * (z0 + z);
        let v = truncated_laplace_nd(|_| c(1.0, 0.0), &spec, &z).unwrap().value;
        assert!((v - one(spec.z0[0], z[0]) * one(spec.z0[1], z[1])).norm() < 1e-12);
        let v = truncated_laplace_nd(|t| t[0], &spec, &z).unwrap().value;
        assert!((v - lin(spec.z0[0], z[0]) * one(spec.z0[1], z[1])).norm() < 1e-12);
        let v = truncated_laplace_nd(|_| c(0.0, 0.0), &spec, &z).unwrap().value;
        assert_eq!(v, c(0.0, 0.0));
    }

    #[test]
    fn monomial_basis_matches_closed_form() {
        let z0 = c(0.9, 0.0);
        for z in [c(0.3, 0.2), c(0.02, 0.01), c(2.0, -1.0)] {
            let (vals, _) = laplace_monomials(z0, &quad(), 6, z).unwrap();
            let w = z0 / z;
            for (n, v) in vals.iter().enumerate() {
                // 1 − e^{−w} Σ_{k≤n} w^k/k! = e^{−w} Σ_{k>n} w^k/k!, summed without cancellation
                let mut term = c(1.0, 0.0);
                for k in 1..=n + 1 {
                    term *= w / k as f64;
                }
                let mut rest = c(0.0, 0.0);
                for k in n + 2..n + 60 {
                    rest += term;
                    term *= w / k as f64;
                }
                let mut partial = c(0.0, 0.0);
                let mut wk = c(1.0, 0.0);
                for k in 0..=n {
                    partial += wk;
                    wk *= w / (k + 1) as f64;
                }
                let tail = if w.norm() < 1.0 { (-w).exp() * rest } else { 1.0 - (-w).exp() * partial };
                let exact = z.powi(n as i32) * tail;
                assert!((v - exact).norm() < 1e-12 * exact.norm().max(1e-3), "n={n} z={z}");
            }
        }
    }

    #[test]
    fn spec_json_roundtrip_and_forms() {
        let s = LaplaceSpec::from_json(r#"{"z0":[0.5,[0.1,0.2],{"re":1.0,"im":-1.0}],"tol":1e-10,"max_depth":30}"#).unwrap();
        assert_eq!(s.z0, vec![c(0.5, 0.0), c(0.1, 0.2), c(1.0, -1.0)]);
        assert_eq!(LaplaceSpec::from_json(&s.to_json()).unwrap(), s);
        assert!(LaplaceSpec::from_json(r#"{"z0":[0.0]}"#).is_err());
        assert!(LaplaceSpec::from_json(r#"{"z0":[1.0],"tol":-1}"#).is_err());
        assert!(LaplaceSpec::from_json(r#"{"z0":[1.0],"bogus":1}"#).is_err());
    }

    #[test]
    fn brg_of_constant_and_zero() {
        let spec = LaplaceSpec::new(vec![c(0.5, 0.0)]).unwrap();
        let one = MultiIndexSeries::polynomial(1, &[(vec![0], c(1.0, 0.0))]).unwrap();
        let f = brg_function(&one, &spec).unwrap();
        for z in [c(0.2, 0.0), c(0.1, 0.1), c(1.0, -0.5)] {
            let exact = 1.0 - (-spec.z0[0] / z).exp();
            assert!((f.eval(&[z]) - exact).norm() < 1e-12);
        }
        let zero = MultiIndexSeries::new(vec![4]).unwrap();
        assert_eq!(brg_function(&zero, &spec).unwrap().eval(&[c(0.3, 0.0)]), c(0.0, 0.0));
    }

    #[test]
    fn brg_of_euler_series_matches_direct_quadrature() {
        let euler = MultiIndexSeries::from_fn(vec![60], |n| {
            let sign = if n[0] % 2 == 0 { 1.0 } else { -1.0 };
            c(sign * statrs::function::factorial::factorial(n[0] as u64), 0.0)
        })
        .unwrap();
        let spec = LaplaceSpec::new(vec![c(0.5, 0.0)]).unwrap().with_tol(1e-13);
        let f = brg_function(&euler, &spec).unwrap();
        let z = c(0.2, 0.0);
        // independent oracle: integrate e^{−t/z}/(1+t)/z over [0, 0.5] in t directly
        let direct = integrate(|t| (-t / z).exp() / (1.0 + t) / z, 0.0, 0.5, &quad()).value;
        assert!((f.eval(&[z]) - direct).norm() < 1e-10);
    }

    #[test]
    fn basis_and_iterated_routes_agree() {
        let f = MultiIndexSeries::from_fn(vec![5, 4], |n| {
            let fact = statrs::function::factorial::factorial((n[0] + n[1]) as u64);
            c(fact / (1.0 + n[1] as f64), 0.5 * n[0] as f64)
        })
        .unwrap()
        .with_truncation(crate::series::Truncation::Exact);
        let spec = LaplaceSpec::new(vec![c(0.6, 0.1), c(0.4, 0.0)]).unwrap().with_tol(1e-13);
        let a = brg_function(&f, &spec).unwrap();
        let b = brg_function_iterated(&f, &spec).unwrap();
        for z in [[c(0.3, 0.1), c(0.2, 0.0)], [c(0.05, 0.0), c(0.5, -0.2)]] {
            let (x, y) = (a.eval(&z), b.eval(&z));
            assert!((x - y).norm() < 1e-11 * x.norm().max(1.0), "{x} vs {y}");
        }
    }

    #[test]
    fn brg_rejects_z0_outside_borel_disc() {
        let geometric = MultiIndexSeries::from_fn(vec![40], |n| {
            c(statrs::function::factorial::factorial(n[0] as u64) * 2f64.powi(n[0] as i32), 0.0)
        })
        .unwrap();
        let spec = LaplaceSpec::new(vec![c(0.49, 0.0)]).unwrap();
        assert!(matches!(brg_function(&geometric, &spec), Err(Error::OutsideDomain(_))));
    }

    #[test]
    fn brg_type_cosine_law() {
        let z0 = [c(2.0, 0.0), c(0.0, 1.0)];
        let r = brg_type(&z0, &Multidirection::new(vec![std::f64::consts::FRAC_PI_3, FRAC_PI_2])).unwrap();
        assert!((r[0] - 1.0).abs() < 1e-14 && (r[1] - 1.0).abs() < 1e-14);
        let r = brg_type(&z0[..1], &Multidirection::new(vec![FRAC_PI_2 - 1e-9])).unwrap();
        assert!(r[0] > 0.0 && r[0] < 1e-8);
        assert!(brg_type(&z0[..1], &Multidirection::new(vec![FRAC_PI_2])).is_err());
    }
}
