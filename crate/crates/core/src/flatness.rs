//! Exponential flatness, the Gevrey envelope, explicit bound kernels and
//! numerical maximum-principle checks.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::families::{app_n, TotalFamily};
use crate::function::SampledFunction;
use crate::geometry::{cartesian, distinguished_boundary_points, interior_points, ray_points, Multidirection, Polysector};
use crate::series::{self, least_squares, GevreyFit, IndexWindow, MultiIndex, MultiIndexSeries};

/// Slopes at or below this are treated as "bounded only" (type 0).
pub const FLAT_SLOPE_FLOOR: f64 = 1e-10;

/// `|f|` at a point with per-axis moduli `radii`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatSample {
    pub radii: Vec<f64>,
    pub value: f64,
}

/// Result of [`fit_flat_type`]: `|f| ≈ M·exp(−Σ R_j/|z_j|)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatFit {
    pub type_estimate: Vec<f64>,
    /// `ln M`.
    pub log_prefactor: f64,
    pub residual: f64,
    /// Axes whose fitted slope was nonpositive and clamped to 0.
    pub bounded_only: Vec<bool>,
    /// Samples dropped because `|f| = 0`.
    pub zeros_excluded: usize,
    pub points: usize,
}

/// Sample `|f|` on a ray grid.
pub fn sample_ray_grid(
    f: &SampledFunction,
    d: &Multidirection,
    radii: &[Vec<f64>],
    exec: Execution,
) -> Result<Vec<FlatSample>> {
    let pts = ray_points(f.domain(), d, radii)?;
    let rs = cartesian(radii);
    let vals = f.eval_grid(&pts, exec);
    Ok(rs.into_iter().zip(vals).map(|(radii, v)| FlatSample { radii, value: v.value.norm() }).collect())
}

/// Least squares of `−ln|f|` against `(1, 1/r_1, …, 1/r_n)`.
pub fn fit_flat_type(samples: &[FlatSample]) -> Result<FlatFit> {
    let n = samples.first().map(|s| s.radii.len()).ok_or_else(|| Error::InsufficientData("no samples".into()))?;
    if samples.iter().any(|s| s.radii.len() != n) {
        return Err(Error::InvalidArgument("samples have mixed dimensions".into()));
    }
    let used: Vec<&FlatSample> = samples.iter().filter(|s| s.value > 0.0 && s.value.is_finite()).collect();
    let zeros = samples.iter().filter(|s| s.value == 0.0).count();
    if used.len() < n + 1 {
        return Err(Error::InsufficientData(format!("{} usable samples, need {}", used.len(), n + 1)));
    }
    for j in 0..n {
        let (lo, hi) = used.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), s| (lo.min(s.radii[j]), hi.max(s.radii[j])));
        if hi < 10.0 * lo {
            return Err(Error::InsufficientData(format!("axis {j}: radii span less than a decade")));
        }
    }
    let x = DMatrix::from_fn(used.len(), n + 1, |i, k| if k == 0 { 1.0 } else { 1.0 / used[i].radii[k - 1] });
    let y = DVector::from_iterator(used.len(), used.iter().map(|s| -s.value.ln()));
    let beta = least_squares(&x, &y).ok_or_else(|| Error::Degenerate("flat fit design is rank deficient".into()))?;
    let resid = (&x * &beta - &y).norm() / (used.len() as f64).sqrt();
    let mut type_estimate = Vec::with_capacity(n);
    let mut bounded_only = Vec::with_capacity(n);
    for j in 0..n {
        let slope = beta[j + 1];
        let flat = slope <= FLAT_SLOPE_FLOOR;
        type_estimate.push(if flat { 0.0 } else { slope });
        bounded_only.push(flat);
    }
    Ok(FlatFit { type_estimate, log_prefactor: -beta[0], residual: resid, bounded_only, zeros_excluded: zeros, points: used.len() })
}

/// `min_{N ≤ N_cap} ln(C·A^N·N!·r^N)` and the minimizing `N`.
pub fn ln_gevrey_envelope(ln_c: f64, a: f64, r: f64) -> (f64, usize) {
    let cap = (2.0 / (a * r)).ceil().min(1e7) as usize + 10;
    let lar = (a * r).ln();
    let mut best = (ln_c, 0);
    for n in 1..=cap {
        let v = ln_c + n as f64 * lar + ln_factorial(n as u64);
        if v < best.0 {
            best = (v, n);
        }
    }
    best
}

/// `min_N C·A^N·N!·r^N`.
pub fn gevrey_envelope(c: f64, a: f64, r: f64) -> f64 {
    ln_gevrey_envelope(c.ln(), a, r).0.exp()
}

fn check_types(r: &[f64]) -> Result<()> {
    match r.iter().position(|&x| !(x >= 0.0)) {
        Some(j) => Err(Error::InvalidArgument(format!("type on axis {j} must be ≥ 0"))),
        None => Ok(()),
    }
}

/// Exponentially flat of type `R` ⇒ null 1-Gevrey expansion of type `R`.
pub fn flat_to_gevrey(r: &[f64]) -> Result<Vec<f64>> {
    check_types(r)?;
    Ok(r.to_vec())
}

/// Null 1-Gevrey expansion of type `R` ⇒ exponentially flat of type `R`.
pub fn gevrey_to_flat(r: &[f64]) -> Result<Vec<f64>> {
    check_types(r)?;
    Ok(r.to_vec())
}

/// The flat-rate loss `δ₁` with `1/(R − δ₁) = 1/R + δ`, taking a flat bound
/// with rate `R − δ₁` to a Gevrey bound with rate `1/R + δ` (same prefactor,
/// since `sup_r e^{−a/r} r^{−N} ≤ N!/a^N`).
pub fn flat_delta_for_gevrey(r: f64, delta: f64) -> f64 {
    r * r * delta / (1.0 + r * delta)
}

/// `(ε, δ₁)` with `(1+ε)(1/R + δ₁) < 1/(R − δ)`, taking a Gevrey bound with
/// rate `1/R + δ₁` to a flat bound of rate `R − δ` through the envelope.
pub fn gevrey_delta_for_flat(r: f64, delta: f64) -> Result<(f64, f64)> {
    if !(r > 0.0 && delta > 0.0 && delta < r) {
        return Err(Error::InvalidArgument("need 0 < δ < R".into()));
    }
    let target = 1.0 / (r - delta);
    let mid = 0.5 * (1.0 / r + target);
    let eps = (mid * r).sqrt() - 1.0;
    Ok((eps, mid / (1.0 + eps) - 1.0 / r))
}

/// Argument of `z` on the branch meeting `[α, β]`, or nearest its midpoint.
fn wedge_arg(z: Complex64, alpha: f64, beta: f64) -> f64 {
    let mid = 0.5 * (alpha + beta);
    let mut t = z.arg();
    while t - mid > std::f64::consts::PI {
        t -= std::f64::consts::TAU;
    }
    while t - mid < -std::f64::consts::PI {
        t += std::f64::consts::TAU;
    }
    t
}

/// `h(z) = −iλ/(2(β−α))·L² + ((−λβ + i ln C)/(β−α))·L + β ln C/(β−α)`, `L = log z`.
pub fn h_aux(z: Complex64, alpha: f64, beta: f64, lambda: f64, c: f64) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return Err(Error::OutsideDomain("h is undefined at 0".into()));
    }
    if !(alpha < beta) || !(lambda > 0.0) || !(c > 0.0) {
        return Err(Error::InvalidArgument("need α < β, λ > 0, C > 0".into()));
    }
    let w = beta - alpha;
    let l = Complex64::new(z.norm().ln(), wedge_arg(z, alpha, beta));
    let i = Complex64::i();
    let ln_c = c.ln();
    Ok(-i * lambda / (2.0 * w) * l * l + (Complex64::new(-lambda * beta, ln_c) / w) * l + beta * ln_c / w)
}

/// `(C·∏|z_j|^{λ_j})^{(1−ε)^n ∏ μ_j}`, `μ_j = (β_j − arg z_j)/(β_j − α_j)`:
/// the bound kernel with the constant `K` set to 1.
pub fn wedge_bound(z: &[Complex64], alphas: &[f64], betas: &[f64], lambdas: &[f64], c: f64, eps: f64) -> Result<f64> {
    let n = z.len();
    if alphas.len() != n || betas.len() != n || lambdas.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: alphas.len().min(betas.len()).min(lambdas.len()) });
    }
    if !(eps > 0.0 && eps < 1.0) || !(c > 0.0) {
        return Err(Error::InvalidArgument("need ε in (0,1) and C > 0".into()));
    }
    let mut mu = 1.0;
    let mut base = c;
    for j in 0..n {
        let t = wedge_arg(z[j], alphas[j], betas[j]);
        if !(alphas[j] - 1e-12 <= t && t <= betas[j] + 1e-12) || z[j].norm() == 0.0 {
            return Err(Error::OutsideDomain(format!("arg z[{j}] is outside [α, β]")));
        }
        mu *= ((betas[j] - t) / (betas[j] - alphas[j])).clamp(0.0, 1.0);
        base *= z[j].norm().powf(lambdas[j]);
    }
    Ok(base.powf((1.0 - eps).powi(n as i32) * mu))
}

/// Shift `a` for the one-variable wedge bound on `S(−α, α; 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftDiagnostic {
    pub a: f64,
    /// Sampled `inf (θ₀(z)+α)/(θ(z)+α)` over `a·e^{iα} + V̄`.
    pub ratio_inf: f64,
    /// Sampled `sup |z/(z − e^{iα})|` over the same set.
    pub k1: f64,
}

fn shift_stats(alpha: f64, a: f64) -> (f64, f64) {
    let z0 = Complex64::from_polar(1.0, alpha);
    let z1 = z0 * a;
    let mut inf = f64::INFINITY;
    let mut sup: f64 = 0.0;
    for k in 0..=40 {
        let phi = -alpha + 2.0 * alpha * k as f64 / 40.0;
        for m in 0..=80 {
            let t = if m == 0 { 0.0 } else { 1e-3 * 1.25f64.powi(m) };
            let z = z1 + Complex64::from_polar(t, phi);
            let th = z.arg();
            let th0 = (z - z0).arg();
            if th + alpha > 1e-14 {
                inf = inf.min((th0 + alpha) / (th + alpha));
            }
            sup = sup.max((z / (z - z0)).norm());
        }
    }
    (inf, sup)
}

/// Smallest sampled `a > 1` with ratio `≥ 1 − ε` and `C/a^λ < 1`, by
/// bisection in `ln a`. A diagnostic only: no particular `a` is guaranteed.
pub fn minimal_shift(alpha: f64, eps: f64, lambda: f64, c: f64) -> Result<ShiftDiagnostic> {
    if !(alpha > 0.0 && alpha < std::f64::consts::FRAC_PI_4) || !(eps > 0.0 && eps < 1.0) || !(lambda > 0.0 && c > 0.0) {
        return Err(Error::InvalidArgument("need 0 < α < π/4, ε in (0,1), λ, C > 0".into()));
    }
    let floor = c.powf(1.0 / lambda) * (1.0 + 1e-9);
    let ok = |a: f64| a > floor && shift_stats(alpha, a).0 >= 1.0 - eps;
    let (mut lo, mut hi) = (1.0f64.max(floor).ln(), 1e9f64.ln());
    if !ok(hi.exp()) {
        return Err(Error::NonConvergence { what: "minimal shift search".into(), error: hi.exp() });
    }
    if ok(lo.exp()) {
        hi = lo;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if ok(mid.exp()) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let a = hi.exp();
    let (ratio_inf, k1) = shift_stats(alpha, a);
    Ok(ShiftDiagnostic { a, ratio_inf, k1 })
}

/// Caller's statement about the growth hypothesis of the maximum principle.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum GrowthAttestation {
    #[default]
    Unverified,
    Attested { note: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub point: Vec<[f64; 2]>,
    pub value: f64,
}

/// Violations beyond this many are counted but not listed.
pub const MAX_LISTED_VIOLATIONS: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub boundary_max: f64,
    pub interior_max: f64,
    pub tolerance: f64,
    pub violation_points: Vec<Violation>,
    pub violation_count: usize,
    /// Points where evaluation produced NaN.
    pub failures: Vec<Vec<[f64; 2]>>,
    pub boundary_samples: usize,
    pub interior_samples: usize,
    pub growth: GrowthAttestation,
}

impl BoundReport {
    pub fn holds(&self) -> bool {
        self.violation_points.is_empty()
    }
}

fn pairs(z: &[Complex64]) -> Vec<[f64; 2]> {
    z.iter().map(|w| [w.re, w.im]).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlOptions {
    pub boundary_density: usize,
    pub interior_samples: usize,
    /// Smallest interior radius as a fraction of `ρ`. Keep it at least
    /// `1/boundary_density` (the innermost edge sample): closer to the
    /// vertex the interior can exceed every sampled boundary value even
    /// when the sup over the whole boundary is not exceeded.
    pub min_fraction: f64,
    pub tol: f64,
    pub growth: GrowthAttestation,
    pub exec: Execution,
}

impl Default for PlOptions {
    fn default() -> Self {
        PlOptions {
            boundary_density: 8,
            interior_samples: 6,
            min_fraction: 1.0 / 8.0,
            tol: 1e-9,
            growth: GrowthAttestation::default(),
            exec: Execution::default(),
        }
    }
}

/// Compare `sup |f|` over distinguished-boundary samples with interior samples.
pub fn pl_check(f: &SampledFunction, s: &Polysector, opts: &PlOptions) -> Result<BoundReport> {
    let bpts = distinguished_boundary_points(s, opts.boundary_density)?;
    let ipts = interior_points(s, opts.interior_samples, opts.min_fraction)?;
    let bvals = f.eval_grid(&bpts, opts.exec);
    let ivals = f.eval_grid(&ipts, opts.exec);
    let mut failures = Vec::new();
    let mut boundary_max: f64 = 0.0;
    for (p, v) in bpts.iter().zip(&bvals) {
        let m = v.value.norm();
        if m.is_nan() {
            failures.push(pairs(p));
        } else {
            boundary_max = boundary_max.max(m);
        }
    }
    let mut interior_max: f64 = 0.0;
    let mut violation_points = Vec::new();
    let mut violation_count = 0;
    for (p, v) in ipts.iter().zip(&ivals) {
        let m = v.value.norm();
        if m.is_nan() {
            failures.push(pairs(p));
            continue;
        }
        interior_max = interior_max.max(m);
        if m > boundary_max + opts.tol {
            violation_count += 1;
            if violation_points.len() < MAX_LISTED_VIOLATIONS {
                violation_points.push(Violation { point: pairs(p), value: m });
            }
        }
    }
    Ok(BoundReport {
        boundary_max,
        interior_max,
        tolerance: opts.tol,
        violation_points,
        violation_count,
        failures,
        boundary_samples: bpts.len(),
        interior_samples: ipts.len(),
        growth: opts.growth.clone(),
    })
}

/// `c(N) = sup |g(z)|/|z|^N` along a ray grid, for one order `N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioEntry {
    pub order: MultiIndex,
    pub c_sup: f64,
    /// `exp` of the mean of `ln(|g|/|z|^N)`: the least-squares constant.
    pub c_ls: f64,
    /// Radii where the sup is attained.
    pub argmax: Vec<f64>,
    /// False when, on some axis with `N_j > 0`, the ratio still grows at
    /// least like `r_j^{−1/2}` between the two smallest sampled radii.
    pub decays: bool,
    pub used: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub direction: Vec<f64>,
    pub entries: Vec<RatioEntry>,
    /// Samples dropped as zero or below the noise floor.
    pub excluded: usize,
}

impl RatioReport {
    fn as_series(&self, positive_only: bool) -> Result<MultiIndexSeries> {
        let n = self.direction.len();
        let mut bound = vec![0; n];
        for e in &self.entries {
            for (b, &k) in bound.iter_mut().zip(&e.order) {
                *b = (*b).max(k);
            }
        }
        let mut s = MultiIndexSeries::new(bound)?;
        for e in &self.entries {
            if e.c_sup.is_finite() && (e.c_sup > 0.0 || !positive_only) {
                s.set(&e.order, Complex64::new(e.c_sup, 0.0))?;
            }
        }
        Ok(s)
    }

    /// 1-Gevrey type fitted to `c(N) ≈ C·N!·R^{−N}` over orders in `window`.
    pub fn fit_type(&self, window: Option<IndexWindow>) -> Result<GevreyFit> {
        series::fit_gevrey_type_window(&self.as_series(true)?, window)
    }

    /// Same fit with an extra `ln(N_j + 1)` regressor per axis absorbing
    /// polynomial prefactors such as the `√N` of Stirling's formula.
    pub fn fit_type_power_corrected(&self, window: Option<IndexWindow>) -> Result<GevreyFit> {
        series::fit_gevrey_type_power(&self.as_series(true)?, window)
    }

    pub fn all_finite(&self) -> bool {
        self.entries.iter().all(|e| e.c_sup.is_finite())
    }
}

/// Ratios of `g = f − approx` on the ray grid. Samples with
/// `|g| ≤ noise_floor(point)` are excluded.
fn ratio_report<G, F>(
    f: &SampledFunction,
    d: &Multidirection,
    orders: &[MultiIndex],
    radii: &[Vec<f64>],
    exec: Execution,
    residual: G,
    noise_floor: F,
) -> Result<RatioReport>
where
    G: Fn(&MultiIndex, &[Complex64], Complex64) -> Result<Complex64> + Sync,
    F: Fn(&MultiIndex, &[Complex64]) -> Result<f64> + Sync,
{
    let n = f.dim();
    if let Some(o) = orders.iter().find(|o| o.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: o.len() });
    }
    let pts = ray_points(f.domain(), d, radii)?;
    let rs = cartesian(radii);
    let vals = f.eval_grid(&pts, exec);
    let mut lowest: Vec<(f64, f64)> = Vec::with_capacity(n);
    for r in radii {
        let mut v = r.clone();
        v.sort_by(f64::total_cmp);
        v.dedup();
        lowest.push((v[0], v.get(1).copied().unwrap_or(f64::INFINITY)));
    }
    let entries: Vec<Result<(RatioEntry, usize)>> = exec::map(exec, orders, |order| {
        let mut best = (f64::NEG_INFINITY, 0usize);
        // per axis: sup of the log-ratio away from the smallest radius
        let mut inner = vec![f64::NEG_INFINITY; n];
        let mut sum = 0.0;
        let mut used = 0;
        let mut excluded = 0;
        for (i, (p, v)) in pts.iter().zip(&vals).enumerate() {
            let g = residual(order, p, v.value)?.norm();
            if !(g > noise_floor(order, p)?) {
                excluded += 1;
                continue;
            }
            let ln_ratio = g.ln() - rs[i].iter().zip(order).map(|(r, &k)| k as f64 * r.ln()).sum::<f64>();
            sum += ln_ratio;
            used += 1;
            if ln_ratio > best.0 {
                best = (ln_ratio, i);
            }
            for j in 0..n {
                if rs[i][j] > lowest[j].0 {
                    inner[j] = inner[j].max(ln_ratio);
                }
            }
        }
        let (c_sup, c_ls, argmax, decays) = if used == 0 {
            (0.0, 0.0, vec![0.0; n], true)
        } else {
            let growing = (0..n).any(|j| {
                order[j] > 0
                    && lowest[j].1.is_finite()
                    && best.0 - inner[j] >= 0.5 * (lowest[j].1 / lowest[j].0).ln() - 1e-12
            });
            (best.0.exp(), (sum / used as f64).exp(), rs[best.1].clone(), !growing)
        };
        Ok((RatioEntry { order: order.clone(), c_sup, c_ls, argmax, decays, used }, excluded))
    });
    let mut out = Vec::with_capacity(orders.len());
    let mut excluded = 0;
    for e in entries {
        let (entry, ex) = e?;
        excluded += ex;
        out.push(entry);
    }
    Ok(RatioReport { direction: d.thetas().to_vec(), entries: out, excluded })
}

/// Constants `c(N)` in `|f(z)| ≤ c(N)|z|^N` along the ray grid.
pub fn null_expansion_check(
    f: &SampledFunction,
    d: &Multidirection,
    orders: &[MultiIndex],
    radii: &[Vec<f64>],
    exec: Execution,
) -> Result<RatioReport> {
    ratio_report(f, d, orders, radii, exec, |_, _, v| Ok(v), |_, _| Ok(0.0))
}

/// Constants `c(N)` in `|f − App_N(F)| ≤ c(N)|z|^N` along the ray grid.
/// Remainders below `rel_floor·Σ_terms + abs_floor` are treated as noise.
pub fn remainder_check(
    f: &SampledFunction,
    fam: &TotalFamily,
    d: &Multidirection,
    orders: &[MultiIndex],
    radii: &[Vec<f64>],
    abs_floor: f64,
    rel_floor: f64,
    exec: Execution,
) -> Result<RatioReport> {
    let magnitude = |order: &MultiIndex, z: &[Complex64]| -> Result<f64> {
        // scale of the approximant's terms, for the cancellation floor
        let abs_z: Vec<Complex64> = z.iter().map(|w| Complex64::new(w.norm(), 0.0)).collect();
        let mut total = 0.0;
        for (k, el) in fam.iter() {
            let axes = k.axes.axes();
            if axes.iter().zip(&k.index).all(|(&j, &h)| h < order[j]) && axes.len() == fam.dim() {
                total += el.eval(&[]).norm() * abs_z.iter().zip(&k.index).map(|(w, &h)| w.re.powi(h as i32)).product::<f64>();
            }
        }
        Ok(total)
    };
    ratio_report(
        f,
        d,
        orders,
        radii,
        exec,
        |order, z, v| Ok(v - app_n(fam, order, z)?),
        |order, z| Ok(abs_floor + rel_floor * magnitude(order, z)?),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{geometric_radii, Sector};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn flat_fit_examples() {
        let rs = geometric_radii(0.9, 0.8, 20);
        let s: Vec<FlatSample> = rs.iter().map(|&r| FlatSample { radii: vec![r], value: (-2.0 / r).exp() }).collect();
        let fit = fit_flat_type(&s).unwrap();
        assert!((fit.type_estimate[0] - 2.0).abs() < 1e-10 && fit.log_prefactor.abs() < 1e-10);
        let s: Vec<FlatSample> = rs.iter().map(|&r| FlatSample { radii: vec![r], value: 0.7 }).collect();
        let fit = fit_flat_type(&s).unwrap();
        assert_eq!(fit.type_estimate, vec![0.0]);
        assert!(fit.bounded_only[0]);
        let mut s2 = Vec::new();
        for &a in &rs {
            for &b in &rs {
                s2.push(FlatSample { radii: vec![a, b], value: (-1.0 / a - 3.0 / b).exp() });
            }
        }
        let fit = fit_flat_type(&s2).unwrap();
        assert!((fit.type_estimate[0] - 1.0).abs() < 1e-9 && (fit.type_estimate[1] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn flat_fit_excludes_zeros_and_checks_span() {
        let mut s: Vec<FlatSample> = geometric_radii(0.9, 0.7, 12).iter().map(|&r| FlatSample { radii: vec![r], value: (-1.0 / r).exp() }).collect();
        s.push(FlatSample { radii: vec![0.5], value: 0.0 });
        assert_eq!(fit_flat_type(&s).unwrap().zeros_excluded, 1);
        let narrow: Vec<FlatSample> = [0.5, 0.4, 0.3].iter().map(|&r| FlatSample { radii: vec![r], value: 1.0 }).collect();
        assert!(fit_flat_type(&narrow).is_err());
    }

    #[test]
    fn envelope_examples() {
        let v = gevrey_envelope(1.0, 1.0, 0.1);
        assert!((v - 3.6288e-4).abs() < 1e-8);
        let brute = (0..=100)
            .map(|n| (ln_factorial(n as u64) - n as f64 * 10f64.ln()).exp())
            .fold(f64::INFINITY, f64::min);
        assert!((v - brute).abs() < 1e-15);
        assert_eq!(gevrey_envelope(2.5, 1.0, 10.0), 2.5);
        let r = 1e-3;
        let ln_stirling = 1.0 + 0.5 * (2.0 * std::f64::consts::PI / r).ln() - 1.0 / r;
        let (ln_env, _) = ln_gevrey_envelope(0.0, 1.0, r);
        assert!(ln_env <= ln_stirling + 1e-9);
        assert!((ln_env - ln_stirling).abs() < 2.0);
    }

    #[test]
    fn conversions_are_identities() {
        assert_eq!(flat_to_gevrey(&[2.0]).unwrap(), vec![2.0]);
        assert_eq!(gevrey_to_flat(&[1.0, 3.0]).unwrap(), vec![1.0, 3.0]);
        assert_eq!(gevrey_to_flat(&flat_to_gevrey(&[0.0, 0.4]).unwrap()).unwrap(), vec![0.0, 0.4]);
        assert!(flat_to_gevrey(&[-1.0]).is_err());
        let d1 = flat_delta_for_gevrey(2.0, 0.1);
        assert!((1.0 / (2.0 - d1) - (0.5 + 0.1)).abs() < 1e-14);
        let (eps, d1) = gevrey_delta_for_flat(2.0, 0.1).unwrap();
        assert!(eps > 0.0 && d1 > 0.0 && (1.0 + eps) * (0.5 + d1) < 1.0 / 1.9);
    }

    #[test]
    fn h_examples() {
        let z = Complex64::from_polar(3.0, FRAC_PI_4);
        let h = h_aux(z, 0.0, FRAC_PI_2, 1.0, 2.0).unwrap();
        assert!((h.exp().norm() - (2.0f64 / 3.0).sqrt()).abs() < 1e-14);
        let m = h_aux(Complex64::from_polar(0.7, FRAC_PI_2), 0.0, FRAC_PI_2, 1.3, 2.0).unwrap();
        assert!((m.exp().norm() - 1.0).abs() < 1e-14);
        let m = h_aux(Complex64::from_polar(0.7, 0.0), 0.0, FRAC_PI_2, 1.3, 2.0).unwrap();
        assert!((m.exp().norm() - 2.0 / 0.7f64.powf(1.3)).abs() < 1e-13);
        assert!(h_aux(c(0.0, 0.0), 0.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn wedge_examples() {
        let v = wedge_bound(&[c(0.5, 0.0)], &[-FRAC_PI_8], &[FRAC_PI_8], &[2.0], 1.0, 0.5).unwrap();
        assert!((v - 0.25f64.powf(0.25)).abs() < 1e-14);
        let z = [Complex64::from_polar(0.3, -0.2), Complex64::from_polar(0.6, 0.1)];
        let v = wedge_bound(&z, &[-0.2, 0.1], &[0.4, 0.5], &[1.0, 2.0], 3.0, 0.1).unwrap();
        assert!((v - (3.0 * 0.3 * 0.36f64).powf(0.81)).abs() < 1e-14);
        let z = [Complex64::from_polar(0.3, 0.4), Complex64::from_polar(0.6, 0.1)];
        assert_eq!(wedge_bound(&z, &[-0.2, 0.1], &[0.4, 0.5], &[1.0, 2.0], 3.0, 0.1).unwrap(), 1.0);
    }

    #[test]
    fn shift_diagnostic_meets_its_conditions() {
        let d = minimal_shift(0.5, 0.2, 1.0, 3.0).unwrap();
        assert!(d.a > 3.0 && d.ratio_inf >= 0.8 && d.k1 > 1.0);
    }

    #[test]
    fn pl_examples() {
        let s = Polysector::uniform(Sector::new(-0.5, 0.5, 1.0).unwrap(), 2).unwrap();
        let f = SampledFunction::exact(s.clone(), "z1z2", |z| z[0] * z[1]);
        assert!(pl_check(&f, &s, &PlOptions::default()).unwrap().holds());
        let k = SampledFunction::exact(s.clone(), "M", |_| c(2.5, 0.0));
        let r = pl_check(&k, &s, &PlOptions::default()).unwrap();
        assert_eq!((r.boundary_max, r.interior_max), (2.5, 2.5));
        let s1 = Polysector::new(vec![Sector::new(-FRAC_PI_4, FRAC_PI_4, 1.0).unwrap()]).unwrap();
        let g = SampledFunction::exact(s1.clone(), "e^{1/z}", |z| (1.0 / z[0]).exp());
        let r = pl_check(&g, &s1, &PlOptions::default()).unwrap();
        assert!(!r.holds() && r.interior_max > r.boundary_max);
    }

    #[test]
    fn null_expansion_examples() {
        let s = Polysector::uniform(Sector::new(-FRAC_PI_4, FRAC_PI_4, 1.0).unwrap(), 2).unwrap();
        let radii = vec![geometric_radii(0.9, 0.8, 20); 2];
        let d = Multidirection::new(vec![0.0, 0.0]);
        let cube = SampledFunction::exact(s.clone(), "z1^3", |z| z[0].powi(3));
        let r = null_expansion_check(&cube, &d, &[vec![2, 0]], &radii, Execution::Sequential).unwrap();
        assert!((r.entries[0].c_sup - 0.9).abs() < 1e-12 && r.entries[0].decays);
        let one = SampledFunction::exact(s.clone(), "1", |_| c(1.0, 0.0));
        let r = null_expansion_check(&one, &d, &[vec![1, 0]], &radii, Execution::Sequential).unwrap();
        assert!(!r.entries[0].decays);
    }
}
